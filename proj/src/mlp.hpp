#pragma once

#include <cstdint>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"
#include "vec2.hpp"

namespace gardo {

enum class Activation : uint8_t { kTanh, kIdentity };

// Weights and biases of the 3-layer denoising network. Input is the sample
// concatenated with a sinusoidal time embedding; output is 2-dimensional.
struct MlpParams {
    Matrix w1, w2, w3;
    std::vector<double> b1, b2, b3;
    std::size_t hidden = 0;
    std::size_t t_embed_dim = 0;
    Activation activation = Activation::kTanh;

    std::size_t input_dim() const { return 2 + t_embed_dim; }
    std::size_t param_count() const;
    bool same_shape(const MlpParams& o) const;

    // Applies f to every parameter array, in the fixed order w1,b1,w2,b2,w3,b3.
    template <typename F>
    void for_each_array(F f) {
        f(w1.data);
        f(b1);
        f(w2.data);
        f(b2);
        f(w3.data);
        f(b3);
    }
    template <typename F>
    void for_each_array(F f) const {
        f(w1.data);
        f(b1);
        f(w2.data);
        f(b2);
        f(w3.data);
        f(b3);
    }
};

// Gradients (or moment accumulators) with the same shapes as MlpParams.
using MlpGrad = MlpParams;

// Pre-activations and activations kept from a forward pass for backprop.
struct MlpCache {
    std::vector<double> input;  // [x ; t_embed]
    std::vector<double> z1, a1, z2, a2;
};

MlpParams make_mlp(std::size_t hidden, std::size_t t_embed_dim, Rng& rng,
                   Activation act = Activation::kTanh);
MlpParams zeros_like(const MlpParams& p);

// Sinusoidal embedding of an integer timestep, dimension must be even.
std::vector<double> time_embedding(int t, std::size_t dim);

Vec2 mlp_forward(const MlpParams& p, const Vec2& x, const std::vector<double>& t_embed,
                 MlpCache& cache);
Vec2 mlp_forward(const MlpParams& p, const Vec2& x, const std::vector<double>& t_embed);

// Gradient of grad_out . output with respect to every parameter. The cache
// must come from a forward pass of the same params.
MlpGrad mlp_backward(const MlpParams& p, const MlpCache& cache, const Vec2& grad_out);
void mlp_backward_accum(const MlpParams& p, const MlpCache& cache, const Vec2& grad_out,
                        MlpGrad& acc);

struct AdamState {
    MlpGrad m;  // first moments
    MlpGrad v;  // second moments
    long step = 0;
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam(const MlpParams& p, double lr);

// Standard Adam update with bias correction. Throws RuntimeError on a
// non-finite gradient.
void adam_step(MlpParams& params, const MlpGrad& grad, AdamState& state);

}  // namespace gardo
