#include "opdyn/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn {

NormEps::NormEps(double v) : value(v) {
    if (!(v > 0.0) || v > 1e-6 || !std::isfinite(v)) {
        throw std::invalid_argument("normalization eps must lie in (0, 1e-6]");
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw std::invalid_argument("ragged initializer for DenseMatrix");
        }
        std::copy(row.begin(), row.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * m.cols_));
        ++r;
    }
    return m;
}

namespace {

void require_nonnegative_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
        if (v < 0.0) {
            throw std::invalid_argument(std::string(what) + ": negative entry");
        }
    }
}

// Divide a row by its sum; an all-zero row is left untouched. Dividing by the
// exact sum (not sum + eps) keeps complements like 1 - d_ij exactly zero when
// row j carries all of row i's distance mass.
void normalize_row(std::span<double> row) {
    double sum = 0.0;
    for (double v : row) sum += v;
    if (sum > 0.0) {
        for (double& v : row) v /= sum;
    }
}

// x^p with integral p via binary exponentiation: bit-stable across libm
// builds and much cheaper than std::pow for the small integer exponents the
// dynamics use. Falls back to std::pow for fractional p.
double entry_power(double x, double p) {
    double rounded = std::nearbyint(p);
    if (rounded == p && std::fabs(p) <= 1024.0) {
        auto n = static_cast<unsigned long>(std::fabs(p));
        double acc = 1.0;
        double base = x;
        while (n > 0) {
            if (n & 1UL) acc *= base;
            base *= base;
            n >>= 1UL;
        }
        return p < 0.0 ? 1.0 / acc : acc;
    }
    return std::pow(x, p);
}

// Shared kernel: power each entry, renormalize, keep everything finite.
// The row is rescaled by its max (p > 0) or floored min (p < 0) first; the
// renormalization cancels the rescale exactly in the algebra, so this only
// changes where rounding happens, never what the weights mean.
void power_normalize_row(std::span<double> row, double p, double eps) {
    if (row.empty()) return;
    if (p == 0.0) {
        double uniform = 1.0 / static_cast<double>(row.size());
        for (double& v : row) v = uniform;
        return;
    }
    if (p > 0.0) {
        double scale = *std::max_element(row.begin(), row.end());
        if (scale <= 0.0) return; // all-zero row stays all-zero
        for (double& v : row) v = entry_power(v / scale, p);
    } else {
        for (double& v : row) v = std::max(v, eps);
        double scale = *std::min_element(row.begin(), row.end());
        for (double& v : row) {
            v = entry_power(v / scale, p);
            if (!std::isfinite(v)) v = 0.0; // ratio overflow means zero limit weight
        }
    }
    normalize_row(row);
}

} // namespace

DenseMatrix row_normalize(const DenseMatrix& m, NormEps) {
    require_nonnegative_finite(m.data(), "row_normalize");
    DenseMatrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        normalize_row(out.row(r));
    }
    return out;
}

std::vector<double> row_normalize(std::vector<double> row, NormEps) {
    require_nonnegative_finite(row, "row_normalize");
    normalize_row(row);
    return row;
}

DenseMatrix row_diff_matrix(const DenseMatrix& x, NormEps eps) {
    if (x.rows() < 2) {
        throw std::invalid_argument("row_diff_matrix: need at least 2 rows");
    }
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    DenseMatrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist = 0.0;
            for (std::size_t t = 0; t < m; ++t) {
                dist += std::fabs(x(i, t) - x(j, t));
            }
            if (!std::isfinite(dist)) {
                throw std::invalid_argument("row_diff_matrix: non-finite distance");
            }
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return row_normalize(d, eps);
}

DenseMatrix row_similarity_matrix(const DenseMatrix& x, NormEps eps) {
    DenseMatrix dn = row_diff_matrix(x, eps);
    const std::size_t n = dn.rows();
    DenseMatrix s(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // dn entries are quotients by a row sum that includes them, so
            // they never exceed 1 and the complement never goes negative.
            s(i, j) = (i == j) ? 0.0 : 1.0 - dn(i, j);
        }
    }
    return row_normalize(s, eps);
}

DenseMatrix renorm_hadamard_power(const DenseMatrix& m, double p, NormEps eps) {
    if (!std::isfinite(p)) {
        throw std::invalid_argument("renorm_hadamard_power: exponent must be finite");
    }
    require_nonnegative_finite(m.data(), "renorm_hadamard_power");
    DenseMatrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        power_normalize_row(out.row(r), p, eps.value);
    }
    return out;
}

std::vector<double> renorm_hadamard_power(std::vector<double> row, double p, NormEps eps) {
    if (!std::isfinite(p)) {
        throw std::invalid_argument("renorm_hadamard_power: exponent must be finite");
    }
    require_nonnegative_finite(row, "renorm_hadamard_power");
    power_normalize_row(row, p, eps.value);
    return row;
}

} // namespace opdyn
