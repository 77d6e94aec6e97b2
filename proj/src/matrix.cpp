#include "matrix.hpp"

#include <cmath>

namespace gardo {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool Matrix::all_finite() const { return gardo::all_finite(data); }

void Matrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = data.data() + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

}  // namespace gardo
