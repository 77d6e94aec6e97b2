#pragma once

#include <string>
#include <vector>

#include "mlp.hpp"

namespace gardo {

// Self-describing parameter container. Layout, all integers and floats
// little-endian:
//   magic "GARDO-CKPT" (10 bytes)
//   u32 format version (currently 1)
//   u32 mixture id length, mixture id bytes
//   u32 T, f64 betas[T]
//   u32 hidden, u32 t_embed_dim, u32 activation tag
//   u32 array count (6), then u32 rows,cols per array
//   arrays as f64, row-major, in the order w1,b1,w2,b2,w3,b3
// Round-trips are bit-exact.
struct Checkpoint {
    std::string mixture_id;
    std::vector<double> betas;
    MlpParams params;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gardo
