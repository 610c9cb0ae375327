#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace opdyn {

// Guard value used when normalizing rows and when flooring entries ahead of a
// negative Hadamard power. Must sit in (0, 1e-6] so it never distorts weights
// at observable scales.
struct NormEps {
    double value = 1e-12;

    NormEps() = default;
    explicit NormEps(double v);
};

// Row-major dense matrix of doubles. Small networks only; no sparsity, no
// expression templates, value semantics throughout.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Divides every row by its sum. A row of zeros stays a row of zeros (such a
// matrix is deliberately not stochastic); the eps guard exists so downstream
// algebra built on these rows treats "all mass vanished" as exact zero rather
// than renormalizing rounding residue back to O(1).
// Rejects negative or non-finite entries.
DenseMatrix row_normalize(const DenseMatrix& m, NormEps eps);
std::vector<double> row_normalize(std::vector<double> row, NormEps eps);

// Pairwise 1-norm distances between rows of x, then row-normalized.
// The un-normalized distance matrix is symmetric and hollow by construction;
// normalization makes rows comparable, not symmetric. Requires >= 2 rows.
DenseMatrix row_diff_matrix(const DenseMatrix& x, NormEps eps);

// Row-normalized complement of the distance matrix: entry (i, j) says how
// similar row j looks from row i's viewpoint, diagonal pinned to zero.
// Output entries lie in [0, 1]; exact symmetry is not guaranteed because each
// row is normalized independently. Requires >= 2 rows.
DenseMatrix row_similarity_matrix(const DenseMatrix& x, NormEps eps);

// Raises every entry to the power p, then row-normalizes. p = 0 maps any row
// to the uniform row (0^0 is taken as 1). For p < 0 entries are floored at
// eps before powering so the result stays finite; exact ties at the floor
// share weight equally. Internally each row is rescaled before powering so
// extreme exponents neither overflow nor underflow the row as a whole.
// Rejects negative entries and non-finite p.
DenseMatrix renorm_hadamard_power(const DenseMatrix& m, double p, NormEps eps);
std::vector<double> renorm_hadamard_power(std::vector<double> row, double p, NormEps eps);

} // namespace opdyn
