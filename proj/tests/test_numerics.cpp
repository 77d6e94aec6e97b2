#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "checkpoint.hpp"
#include "errors.hpp"
#include "mlp.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace gardo;
using namespace gardo::testutil;

TEST_CASE("rng is deterministic per seed and distinct per stream") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool any_diff = false;
    Rng a2(42);
    for (int i = 0; i < 100; ++i) any_diff = any_diff || (a2.next_u64() != c.next_u64());
    CHECK(any_diff);

    Rng base(7);
    Rng s1 = base.derive(1), s2 = base.derive(2);
    CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("rng uniforms live in (0,1)") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("time embedding has unit-range entries and pairs to sin/cos") {
    const auto e = time_embedding(3, 16);
    REQUIRE(e.size() == 16);
    for (double v : e) CHECK(std::abs(v) <= 1.0);
    CHECK(e[0] == doctest::Approx(std::sin(3.0)));
    CHECK(e[1] == doctest::Approx(std::cos(3.0)));
}

TEST_CASE("forward with all-zero params returns b3 for any input") {
    Rng rng(0);
    MlpParams p = make_mlp(8, 4, rng);
    p = zeros_like(p);
    p.b3 = {0.7, -0.3};
    const auto e = time_embedding(2, 4);
    for (double x : {-3.0, 0.0, 5.0}) {
        const Vec2 out = mlp_forward(p, {x, -x}, e);
        CHECK(out.x == doctest::Approx(0.7));
        CHECK(out.y == doctest::Approx(-0.3));
    }
}

TEST_CASE("forward is input-independent when the first layer is zero") {
    Rng rng(11);
    MlpParams p = make_mlp(8, 4, rng);
    p.w1.data.assign(p.w1.data.size(), 0.0);
    const auto e = time_embedding(1, 4);
    const Vec2 a = mlp_forward(p, {0.5, -0.5}, e);
    const Vec2 b = mlp_forward(p, {100.0, 3.0}, e);
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-14));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-14));
    // and matches the explicit composition through the biases
    std::vector<double> h1(p.hidden), h2(p.hidden);
    for (std::size_t i = 0; i < p.hidden; ++i) h1[i] = std::tanh(p.b1[i]);
    for (std::size_t i = 0; i < p.hidden; ++i) {
        double acc = p.b2[i];
        for (std::size_t j = 0; j < p.hidden; ++j) acc += p.w2(i, j) * h1[j];
        h2[i] = std::tanh(acc);
    }
    Vec2 expect{p.b3[0], p.b3[1]};
    for (std::size_t j = 0; j < p.hidden; ++j) {
        expect.x += p.w3(0, j) * h2[j];
        expect.y += p.w3(1, j) * h2[j];
    }
    CHECK(a.x == doctest::Approx(expect.x).epsilon(1e-14));
    CHECK(a.y == doctest::Approx(expect.y).epsilon(1e-14));
}

TEST_CASE("forward matches the independent scalar evaluator") {
    Rng rng(42);
    MlpParams p = make_mlp(16, 8, rng);
    const auto e = time_embedding(5, 8);
    const Vec2 got = mlp_forward(p, {0.5, -0.5}, e);
    const Vec2 want = reference_forward(p, {0.5, -0.5}, e);
    CHECK(got.x == doctest::Approx(want.x).epsilon(1e-14));
    CHECK(got.y == doctest::Approx(want.y).epsilon(1e-14));
}

TEST_CASE("backward with zero upstream gradient is zero") {
    Rng rng(3);
    MlpParams p = make_mlp(6, 4, rng);
    MlpCache cache;
    mlp_forward(p, {0.2, 0.4}, time_embedding(1, 4), cache);
    const MlpGrad g = mlp_backward(p, cache, {0.0, 0.0});
    for (double v : flatten(g)) CHECK(v == 0.0);
}

TEST_CASE("backward matches central finite differences on 100 random pairs") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        Rng net_rng = rng.derive(trial + 1);
        MlpParams p = make_mlp(5, 4, net_rng);
        const Vec2 x{net_rng.normal(), net_rng.normal()};
        const auto e = time_embedding(1 + trial % 10, 4);
        const Vec2 grad_out{net_rng.normal(), net_rng.normal()};

        MlpCache cache;
        mlp_forward(p, x, e, cache);
        const MlpGrad analytic = mlp_backward(p, cache, grad_out);
        const std::vector<double> aflat = flatten(analytic);

        auto objective = [&] {
            const Vec2 out = mlp_forward(p, x, e);
            return grad_out.x * out.x + grad_out.y * out.y;
        };
        const std::vector<double*> coords = param_ptrs(p);
        for (std::size_t i = 0; i < coords.size(); ++i) {
            const double fd = central_diff(objective, coords[i]);
            CHECK_MESSAGE(close_rel(aflat[i], fd), "trial ", trial, " coord ", i, " analytic ",
                          aflat[i], " fd ", fd);
        }
    }
}

TEST_CASE("backward of a linear network equals the closed-form products") {
    Rng rng(9);
    MlpParams p = make_mlp(3, 2, rng, Activation::kIdentity);
    const Vec2 x{0.3, -1.2};
    const std::vector<double> e = {0.5, -0.25};
    const Vec2 grad_out{1.5, -0.5};

    MlpCache cache;
    mlp_forward(p, x, e, cache);
    const MlpGrad g = mlp_backward(p, cache, grad_out);

    const std::vector<double> u = {x.x, x.y, e[0], e[1]};
    std::vector<double> a1(3), a2(3);
    for (int i = 0; i < 3; ++i) {
        a1[i] = p.b1[i];
        for (int j = 0; j < 4; ++j) a1[i] += p.w1(i, j) * u[j];
    }
    for (int i = 0; i < 3; ++i) {
        a2[i] = p.b2[i];
        for (int j = 0; j < 3; ++j) a2[i] += p.w2(i, j) * a1[j];
    }
    // dL/db3 = grad_out; dL/dW3 = grad_out a2^T
    CHECK(g.b3[0] == doctest::Approx(grad_out.x));
    CHECK(g.b3[1] == doctest::Approx(grad_out.y));
    for (int j = 0; j < 3; ++j) {
        CHECK(g.w3(0, j) == doctest::Approx(grad_out.x * a2[j]));
        CHECK(g.w3(1, j) == doctest::Approx(grad_out.y * a2[j]));
    }
    // d2 = W3^T grad_out; dL/dW2 = d2 a1^T; d1 = W2^T d2; dL/dW1 = d1 u^T
    std::vector<double> d2(3), d1(3, 0.0);
    for (int i = 0; i < 3; ++i) d2[i] = grad_out.x * p.w3(0, i) + grad_out.y * p.w3(1, i);
    for (int i = 0; i < 3; ++i) {
        CHECK(g.b2[i] == doctest::Approx(d2[i]));
        for (int j = 0; j < 3; ++j) CHECK(g.w2(i, j) == doctest::Approx(d2[i] * a1[j]));
        for (int j = 0; j < 3; ++j) d1[j] += d2[i] * p.w2(i, j);
    }
    for (int i = 0; i < 3; ++i) {
        CHECK(g.b1[i] == doctest::Approx(d1[i]));
        for (int j = 0; j < 4; ++j) CHECK(g.w1(i, j) == doctest::Approx(d1[i] * u[j]));
    }
}

TEST_CASE("adam leaves params unchanged on a zero gradient and decays moments") {
    Rng rng(5);
    MlpParams p = make_mlp(4, 2, rng);
    const std::vector<double> before = flatten(p);
    AdamState s = make_adam(p, 1e-3);
    // seed the moments, then feed zero gradients
    s.m.b3 = {1.0, 1.0};
    s.v.b3 = {1.0, 1.0};
    const MlpGrad zero = zeros_like(p);
    const double m0 = s.m.b3[0];
    for (int i = 0; i < 10; ++i) adam_step(p, zero, s);
    // moment decays; params move only through the decaying stale moment,
    // which is exactly zero for coordinates whose moments started at zero
    CHECK(s.m.b3[0] < m0);
    const std::vector<double> after = flatten(p);
    const std::vector<double> mflat = flatten(s.m);
    for (std::size_t i = 0; i < before.size(); ++i) {
        // b3 coordinates carry seeded moments; all others must be untouched
        if (i < before.size() - 2) CHECK(after[i] == before[i]);
    }
    CHECK(s.step == 10);
}

TEST_CASE("adam first step from zero moments has the closed form") {
    Rng rng(6);
    MlpParams p = make_mlp(4, 2, rng);
    const std::vector<double> before = flatten(p);
    AdamState s = make_adam(p, 2e-3);
    MlpGrad g = zeros_like(p);
    Rng grng(60);
    g.for_each_array([&](std::vector<double>& v) {
        for (double& x : v) x = grng.normal();
    });
    const std::vector<double> gflat = flatten(g);
    adam_step(p, g, s);
    const std::vector<double> after = flatten(p);
    for (std::size_t i = 0; i < before.size(); ++i) {
        const double expect = -s.lr * gflat[i] / (std::abs(gflat[i]) + s.eps);
        CHECK(after[i] - before[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("adam with a constant gradient approaches lr-sized signed steps") {
    Rng rng(7);
    MlpParams p = make_mlp(3, 2, rng);
    AdamState s = make_adam(p, 1e-3);
    MlpGrad g = zeros_like(p);
    g.b3 = {0.5, -2.0};
    std::vector<double> prev = flatten(p);
    for (int i = 0; i < 200; ++i) adam_step(p, g, s);
    prev = flatten(p);
    adam_step(p, g, s);
    const std::vector<double> cur = flatten(p);
    const std::size_t n = cur.size();
    CHECK(cur[n - 2] - prev[n - 2] == doctest::Approx(-s.lr).epsilon(1e-6));
    CHECK(cur[n - 1] - prev[n - 1] == doctest::Approx(s.lr).epsilon(1e-6));
}

TEST_CASE("adam rejects non-finite gradients with a diagnostic") {
    Rng rng(8);
    MlpParams p = make_mlp(3, 2, rng);
    AdamState s = make_adam(p, 1e-3);
    MlpGrad g = zeros_like(p);
    g.b3[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(adam_step(p, g, s), RuntimeError);
}

TEST_CASE("identical seeds give bit-equal parameter trajectories over 50 steps") {
    auto run = [](uint64_t seed) {
        Rng rng(seed);
        MlpParams p = make_mlp(8, 4, rng);
        AdamState s = make_adam(p, 1e-3);
        Rng grng = rng.derive(99);
        for (int i = 0; i < 50; ++i) {
            MlpGrad g = zeros_like(p);
            g.for_each_array([&](std::vector<double>& v) {
                for (double& x : v) x = grng.normal();
            });
            adam_step(p, g, s);
        }
        return flatten(p);
    };
    const std::vector<double> a = run(123), b = run(123);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("checkpoint round-trip is bit-exact") {
    Rng rng(77);
    MlpParams p = make_mlp(8, 4, rng);
    Checkpoint ckpt{"fig3", {0.1, 0.2, 0.30000000000000004}, p};
    const std::string path = (std::filesystem::temp_directory_path() / "gardo_ckpt_test.ckpt").string();
    save_checkpoint(ckpt, path);
    const Checkpoint back = load_checkpoint(path);
    CHECK(back.mixture_id == "fig3");
    REQUIRE(back.betas.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(std::memcmp(&back.betas[i], &ckpt.betas[i], sizeof(double)) == 0);
    const std::vector<double> a = flatten(ckpt.params), b = flatten(back.params);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    CHECK(back.params.hidden == 8);
    CHECK(back.params.t_embed_dim == 4);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint loader rejects garbage") {
    const std::string path = (std::filesystem::temp_directory_path() / "gardo_bad.ckpt").string();
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("not a checkpoint", f);
    std::fclose(f);
    CHECK_THROWS_AS(load_checkpoint(path), UsageError);
    std::filesystem::remove(path);
}
