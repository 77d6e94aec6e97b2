#include "feature_map.hpp"

#include "errors.hpp"

namespace gardo {

std::vector<double> FeatureMap::embed(const Vec2& x) const {
    const Vec2 shifted = x + anchor;
    if (kind == FeatureMapKind::kIdentity) return {shifted.x, shifted.y};
    std::vector<double> out(projection.rows, 0.0);
    for (std::size_t r = 0; r < projection.rows; ++r)
        out[r] = projection(r, 0) * shifted.x + projection(r, 1) * shifted.y;
    return out;
}

FeatureMap make_identity_map(const Vec2& anchor) {
    FeatureMap f;
    f.kind = FeatureMapKind::kIdentity;
    f.anchor = anchor;
    f.output_dim = 2;
    return f;
}

FeatureMap make_projection_map(std::size_t output_dim, uint64_t seed, const Vec2& anchor) {
    if (output_dim == 0) throw UsageError("feature map: output dim must be positive");
    FeatureMap f;
    f.kind = FeatureMapKind::kRandomProjection;
    f.anchor = anchor;
    f.output_dim = output_dim;
    Rng rng(seed);
    f.projection = Matrix::randn(output_dim, 2, 1.0, rng);
    return f;
}

}  // namespace gardo
