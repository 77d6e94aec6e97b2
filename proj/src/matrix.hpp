#pragma once

#include <cstddef>
#include <vector>

#include "rng.hpp"

namespace gardo {

// Dense row-major matrix of doubles. Invariant: data.size() == rows * cols.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static Matrix randn(std::size_t r, std::size_t c, double scale, Rng& rng) {
        Matrix m(r, c);
        for (auto& v : m.data) v = scale * rng.normal();
        return m;
    }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    bool all_finite() const;

    // y = A x, with x.size() == cols. Appends nothing; y is overwritten.
    void matvec(const std::vector<double>& x, std::vector<double>& y) const;
};

bool all_finite(const std::vector<double>& v);

}  // namespace gardo
