#pragma once

#include <cstdint>
#include <vector>

#include "matrix.hpp"
#include "vec2.hpp"

namespace gardo {

enum class FeatureMapKind : uint8_t { kIdentity, kRandomProjection };

// Embedding used by diversity scoring. The identity map shifts the sample
// by an anchor so that cosine distance between near-origin points remains
// direction-sensitive; the random-projection map additionally multiplies
// by a fixed seeded matrix.
struct FeatureMap {
    FeatureMapKind kind = FeatureMapKind::kIdentity;
    Vec2 anchor{5.0, 5.0};
    Matrix projection;  // output_dim x 2, used by kRandomProjection
    std::size_t output_dim = 2;

    std::vector<double> embed(const Vec2& x) const;
};

FeatureMap make_identity_map(const Vec2& anchor = {5.0, 5.0});
FeatureMap make_projection_map(std::size_t output_dim, uint64_t seed, const Vec2& anchor = {5.0, 5.0});

}  // namespace gardo
