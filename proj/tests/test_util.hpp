#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mlp.hpp"

namespace gardo::testutil {

// Pointers to every parameter coordinate, in the container's fixed order.
inline std::vector<double*> param_ptrs(MlpParams& p) {
    std::vector<double*> ptrs;
    p.for_each_array([&](std::vector<double>& v) {
        for (double& x : v) ptrs.push_back(&x);
    });
    return ptrs;
}

inline std::vector<double> flatten(const MlpParams& p) {
    std::vector<double> out;
    p.for_each_array([&](const std::vector<double>& v) {
        out.insert(out.end(), v.begin(), v.end());
    });
    return out;
}

// Central finite difference of a scalar function with respect to one
// in-place parameter coordinate.
inline double central_diff(const std::function<double()>& f, double* coord, double h = 1e-5) {
    const double saved = *coord;
    *coord = saved + h;
    const double up = f();
    *coord = saved - h;
    const double down = f();
    *coord = saved;
    return (up - down) / (2.0 * h);
}

// Relative-error check with an absolute floor.
inline bool close_rel(double a, double b, double rel = 1e-4, double abs_floor = 1e-8) {
    return std::abs(a - b) <= abs_floor + rel * std::max(std::abs(a), std::abs(b));
}

// Independent scalar re-implementation of the 3-layer forward pass, written
// against the parameter arrays directly; the oracle for mlp_forward.
inline Vec2 reference_forward(const MlpParams& p, const Vec2& x,
                              const std::vector<double>& t_embed) {
    const std::size_t in = 2 + t_embed.size();
    std::vector<double> u(in);
    u[0] = x.x;
    u[1] = x.y;
    for (std::size_t i = 0; i < t_embed.size(); ++i) u[2 + i] = t_embed[i];

    auto act = [&](double z) { return p.activation == Activation::kTanh ? std::tanh(z) : z; };

    std::vector<double> h1(p.hidden), h2(p.hidden);
    for (std::size_t r = 0; r < p.hidden; ++r) {
        double acc = p.b1[r];
        for (std::size_t c = 0; c < in; ++c) acc += p.w1(r, c) * u[c];
        h1[r] = act(acc);
    }
    for (std::size_t r = 0; r < p.hidden; ++r) {
        double acc = p.b2[r];
        for (std::size_t c = 0; c < p.hidden; ++c) acc += p.w2(r, c) * h1[c];
        h2[r] = act(acc);
    }
    Vec2 out{p.b3[0], p.b3[1]};
    for (std::size_t c = 0; c < p.hidden; ++c) {
        out.x += p.w3(0, c) * h2[c];
        out.y += p.w3(1, c) * h2[c];
    }
    return out;
}

}  // namespace gardo::testutil
