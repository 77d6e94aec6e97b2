#include "checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace gardo {

namespace {

constexpr char kMagic[10] = {'G', 'A', 'R', 'D', 'O', '-', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
    uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw RuntimeError("checkpoint: truncated file");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 8;
        double d;
        std::memcpy(&d, &bits, sizeof(d));
        return d;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(ckpt.mixture_id.size()));
    out.append(ckpt.mixture_id);
    put_u32(out, static_cast<uint32_t>(ckpt.betas.size()));
    for (double b : ckpt.betas) put_f64(out, b);
    put_u32(out, static_cast<uint32_t>(ckpt.params.hidden));
    put_u32(out, static_cast<uint32_t>(ckpt.params.t_embed_dim));
    put_u32(out, ckpt.params.activation == Activation::kTanh ? 0u : 1u);

    const MlpParams& p = ckpt.params;
    const std::pair<uint32_t, uint32_t> shapes[6] = {
        {static_cast<uint32_t>(p.w1.rows), static_cast<uint32_t>(p.w1.cols)},
        {static_cast<uint32_t>(p.b1.size()), 1u},
        {static_cast<uint32_t>(p.w2.rows), static_cast<uint32_t>(p.w2.cols)},
        {static_cast<uint32_t>(p.b2.size()), 1u},
        {static_cast<uint32_t>(p.w3.rows), static_cast<uint32_t>(p.w3.cols)},
        {static_cast<uint32_t>(p.b3.size()), 1u},
    };
    put_u32(out, 6);
    for (const auto& [r, c] : shapes) {
        put_u32(out, r);
        put_u32(out, c);
    }
    p.for_each_array([&](const std::vector<double>& v) {
        for (double d : v) put_f64(out, d);
    });

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw RuntimeError("checkpoint: cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw RuntimeError("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("checkpoint: cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    Reader r{buf};
    if (r.bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic)))
        throw UsageError("checkpoint: bad magic in " + path);
    const uint32_t version = r.u32();
    if (version != kVersion) throw UsageError("checkpoint: unsupported format version");

    Checkpoint ckpt;
    ckpt.mixture_id = r.bytes(r.u32());
    const uint32_t t_count = r.u32();
    ckpt.betas.resize(t_count);
    for (auto& b : ckpt.betas) b = r.f64();

    MlpParams& p = ckpt.params;
    p.hidden = r.u32();
    p.t_embed_dim = r.u32();
    p.activation = r.u32() == 0 ? Activation::kTanh : Activation::kIdentity;

    if (r.u32() != 6) throw UsageError("checkpoint: unexpected array count");
    uint32_t shapes[6][2];
    for (auto& s : shapes) {
        s[0] = r.u32();
        s[1] = r.u32();
    }
    p.w1 = Matrix(shapes[0][0], shapes[0][1]);
    p.b1.resize(shapes[1][0]);
    p.w2 = Matrix(shapes[2][0], shapes[2][1]);
    p.b2.resize(shapes[3][0]);
    p.w3 = Matrix(shapes[4][0], shapes[4][1]);
    p.b3.resize(shapes[5][0]);
    p.for_each_array([&](std::vector<double>& v) {
        for (auto& d : v) d = r.f64();
    });

    if (p.w1.rows != p.hidden || p.w1.cols != p.input_dim() || p.w3.rows != 2)
        throw UsageError("checkpoint: inconsistent shape table");
    return ckpt;
}

}  // namespace gardo
