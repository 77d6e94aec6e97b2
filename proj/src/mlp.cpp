#include "mlp.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace gardo {

namespace {

double activate(double z, Activation a) { return a == Activation::kTanh ? std::tanh(z) : z; }

// Derivative expressed through the activation value (tanh' = 1 - tanh^2).
double activate_deriv(double a_val, Activation a) {
    return a == Activation::kTanh ? 1.0 - a_val * a_val : 1.0;
}

}  // namespace

std::size_t MlpParams::param_count() const {
    std::size_t n = 0;
    for_each_array([&](const std::vector<double>& v) { n += v.size(); });
    return n;
}

bool MlpParams::same_shape(const MlpParams& o) const {
    return hidden == o.hidden && t_embed_dim == o.t_embed_dim && w1.same_shape(o.w1) &&
           w2.same_shape(o.w2) && w3.same_shape(o.w3) && b1.size() == o.b1.size() &&
           b2.size() == o.b2.size() && b3.size() == o.b3.size();
}

MlpParams make_mlp(std::size_t hidden, std::size_t t_embed_dim, Rng& rng, Activation act) {
    if (hidden == 0) throw UsageError("mlp: hidden width must be positive");
    if (t_embed_dim % 2 != 0) throw UsageError("mlp: time embedding dim must be even");
    MlpParams p;
    p.hidden = hidden;
    p.t_embed_dim = t_embed_dim;
    p.activation = act;
    const std::size_t in = p.input_dim();
    p.w1 = Matrix::randn(hidden, in, 1.0 / std::sqrt(static_cast<double>(in)), rng);
    p.w2 = Matrix::randn(hidden, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
    p.w3 = Matrix::randn(2, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
    p.b1.assign(hidden, 0.0);
    p.b2.assign(hidden, 0.0);
    p.b3.assign(2, 0.0);
    return p;
}

MlpParams zeros_like(const MlpParams& p) {
    MlpParams z = p;
    z.for_each_array([](std::vector<double>& v) { v.assign(v.size(), 0.0); });
    return z;
}

std::vector<double> time_embedding(int t, std::size_t dim) {
    std::vector<double> e(dim);
    const std::size_t half = dim / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const double freq = std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(half));
        e[2 * i] = std::sin(t * freq);
        e[2 * i + 1] = std::cos(t * freq);
    }
    return e;
}

Vec2 mlp_forward(const MlpParams& p, const Vec2& x, const std::vector<double>& t_embed,
                 MlpCache& cache) {
    if (t_embed.size() != p.t_embed_dim)
        throw UsageError("mlp_forward: time embedding dim mismatch");

    cache.input.resize(p.input_dim());
    cache.input[0] = x.x;
    cache.input[1] = x.y;
    for (std::size_t i = 0; i < t_embed.size(); ++i) cache.input[2 + i] = t_embed[i];

    p.w1.matvec(cache.input, cache.z1);
    for (std::size_t i = 0; i < p.hidden; ++i) cache.z1[i] += p.b1[i];
    cache.a1.resize(p.hidden);
    for (std::size_t i = 0; i < p.hidden; ++i) cache.a1[i] = activate(cache.z1[i], p.activation);

    p.w2.matvec(cache.a1, cache.z2);
    for (std::size_t i = 0; i < p.hidden; ++i) cache.z2[i] += p.b2[i];
    cache.a2.resize(p.hidden);
    for (std::size_t i = 0; i < p.hidden; ++i) cache.a2[i] = activate(cache.z2[i], p.activation);

    Vec2 out;
    const double* w3r0 = p.w3.data.data();
    const double* w3r1 = p.w3.data.data() + p.hidden;
    double ox = p.b3[0], oy = p.b3[1];
    for (std::size_t i = 0; i < p.hidden; ++i) {
        ox += w3r0[i] * cache.a2[i];
        oy += w3r1[i] * cache.a2[i];
    }
    out.x = ox;
    out.y = oy;
    return out;
}

Vec2 mlp_forward(const MlpParams& p, const Vec2& x, const std::vector<double>& t_embed) {
    MlpCache cache;
    return mlp_forward(p, x, t_embed, cache);
}

void mlp_backward_accum(const MlpParams& p, const MlpCache& cache, const Vec2& grad_out,
                        MlpGrad& acc) {
    if (cache.input.size() != p.input_dim() || cache.a2.size() != p.hidden)
        throw std::logic_error("mlp_backward: cache does not match params");

    const std::size_t h = p.hidden;
    const std::size_t in = p.input_dim();

    // Output layer: out = W3 a2 + b3.
    acc.b3[0] += grad_out.x;
    acc.b3[1] += grad_out.y;
    for (std::size_t i = 0; i < h; ++i) {
        acc.w3.data[i] += grad_out.x * cache.a2[i];
        acc.w3.data[h + i] += grad_out.y * cache.a2[i];
    }

    // d/da2, then through the second activation.
    std::vector<double> d2(h);
    for (std::size_t i = 0; i < h; ++i) {
        const double da2 = grad_out.x * p.w3.data[i] + grad_out.y * p.w3.data[h + i];
        d2[i] = da2 * activate_deriv(cache.a2[i], p.activation);
    }
    for (std::size_t i = 0; i < h; ++i) {
        acc.b2[i] += d2[i];
        double* row = acc.w2.data.data() + i * h;
        for (std::size_t j = 0; j < h; ++j) row[j] += d2[i] * cache.a1[j];
    }

    // d/da1, then through the first activation.
    std::vector<double> d1(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        const double* row = p.w2.data.data() + i * h;
        for (std::size_t j = 0; j < h; ++j) d1[j] += d2[i] * row[j];
    }
    for (std::size_t j = 0; j < h; ++j) d1[j] *= activate_deriv(cache.a1[j], p.activation);
    for (std::size_t i = 0; i < h; ++i) {
        acc.b1[i] += d1[i];
        double* row = acc.w1.data.data() + i * in;
        for (std::size_t j = 0; j < in; ++j) row[j] += d1[i] * cache.input[j];
    }
}

MlpGrad mlp_backward(const MlpParams& p, const MlpCache& cache, const Vec2& grad_out) {
    MlpGrad g = zeros_like(p);
    mlp_backward_accum(p, cache, grad_out, g);
    return g;
}

AdamState make_adam(const MlpParams& p, double lr) {
    AdamState s;
    s.m = zeros_like(p);
    s.v = zeros_like(p);
    s.lr = lr;
    return s;
}

void adam_step(MlpParams& params, const MlpGrad& grad, AdamState& state) {
    if (!params.same_shape(grad)) throw UsageError("adam_step: gradient shape mismatch");
    bool finite = true;
    grad.for_each_array([&](const std::vector<double>& v) { finite = finite && all_finite(v); });
    if (!finite) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "adam_step: non-finite gradient at step %ld",
                      state.step + 1);
        throw RuntimeError(buf);
    }

    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                      std::vector<double>& v) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    };
    update(params.w1.data, grad.w1.data, state.m.w1.data, state.v.w1.data);
    update(params.b1, grad.b1, state.m.b1, state.v.b1);
    update(params.w2.data, grad.w2.data, state.m.w2.data, state.v.w2.data);
    update(params.b2, grad.b2, state.m.b2, state.v.b2);
    update(params.w3.data, grad.w3.data, state.m.w3.data, state.v.w3.data);
    update(params.b3, grad.b3, state.m.b3, state.v.b3);
}

}  // namespace gardo
