#pragma once
// Dense linear algebra for the two numeric regimes used throughout the
// library: exact rationals (classical effects) and complex doubles
// (Hilbert-space effects).

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace cea {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using RealVector = std::vector<double>;
using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-9;

/// Parses "p/q", "p", or a decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// ---------------------------------------------------------------------------
// Dense row-major matrix over an arbitrary scalar.

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static DenseMatrix from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty()) return {};
        DenseMatrix m(rows.size(), rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_) throw Error("ragged matrix rows");
            for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    static DenseMatrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t height) {
        DenseMatrix m(height, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c].size() != height) throw Error("column length mismatch");
            for (std::size_t r = 0; r < height; ++r) m(r, c) = cols[c][r];
        }
        return m;
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    std::vector<T> multiply(const std::vector<T>& x) const {
        if (x.size() != cols_) throw Error("matrix-vector dimension mismatch");
        std::vector<T> out(rows_, T(0));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * x[c];
        return out;
    }

    /// Appends a column on the right.
    DenseMatrix augmented(const std::vector<T>& col) const {
        if (col.size() != rows_) throw Error("augment dimension mismatch");
        DenseMatrix out(rows_, cols_ + 1);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
            out(r, cols_) = col[r];
        }
        return out;
    }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = DenseMatrix<Rational>;
using RealMatrix = DenseMatrix<double>;

template <class T>
struct SolveResult {
    std::vector<T> x;
    bool unique = true;
};

namespace detail {

template <class T>
bool is_zero(const T& v, double tol) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)tol;
        return sgn(v) == 0;
    } else {
        return std::abs(v) <= tol;
    }
}

// In-place reduced row echelon form. Exact: first nonzero pivot.
// Floating: partial pivoting by magnitude, entries below tol treated as zero.
template <class T>
std::vector<std::size_t> row_reduce(DenseMatrix<T>& m, double tol, std::size_t col_limit) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < col_limit && row < m.rows(); ++col) {
        std::size_t best = m.rows();
        if constexpr (std::is_same_v<T, Rational>) {
            for (std::size_t r = row; r < m.rows(); ++r)
                if (!is_zero(m(r, col), tol)) {
                    best = r;
                    break;
                }
        } else {
            double mag = tol;
            for (std::size_t r = row; r < m.rows(); ++r)
                if (std::abs(m(r, col)) > mag) {
                    mag = std::abs(m(r, col));
                    best = r;
                }
        }
        if (best == m.rows()) {
            if constexpr (!std::is_same_v<T, Rational>)
                for (std::size_t r = row; r < m.rows(); ++r) m(r, col) = 0.0;
            continue;
        }
        if (best != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(best, c));
        const T pivot = m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) /= pivot;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col), 0.0)) continue;
            const T factor = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

/// Rank by Gaussian elimination; exact for rationals, thresholded at tol for doubles.
template <class T>
std::size_t matrix_rank(DenseMatrix<T> m, double tol = kDefaultTolerance) {
    return detail::row_reduce(m, tol, m.cols()).size();
}

/// Solves m·x = b. Returns nullopt when inconsistent. Free variables are
/// pinned to zero and `unique` is cleared when the solution is not unique.
template <class T>
std::optional<SolveResult<T>> solve(const DenseMatrix<T>& m, const std::vector<T>& b,
                                    double tol = kDefaultTolerance) {
    if (b.size() != m.rows())
        throw Error("solve: right-hand side has " + std::to_string(b.size()) + " entries, matrix has " +
                    std::to_string(m.rows()) + " rows");
    DenseMatrix<T> aug = m.augmented(b);
    const auto pivots = detail::row_reduce(aug, tol, m.cols());
    for (std::size_t r = pivots.size(); r < aug.rows(); ++r)
        if (!detail::is_zero(aug(r, m.cols()), tol)) return std::nullopt;
    SolveResult<T> out;
    out.x.assign(m.cols(), T(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) out.x[pivots[r]] = aug(r, m.cols());
    out.unique = pivots.size() == m.cols();
    return out;
}

/// Basis of {x : m·x = 0}, one vector per free column.
template <class T>
std::vector<std::vector<T>> nullspace(DenseMatrix<T> m, double tol = kDefaultTolerance) {
    const auto pivots = detail::row_reduce(m, tol, m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(m.cols(), T(0));
        v[f] = T(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t rational_rank(const RationalMatrix& m) { return matrix_rank(m); }
inline std::optional<SolveResult<Rational>> rational_solve(const RationalMatrix& m, const RationalVector& b) {
    return solve(m, b);
}
inline std::vector<RationalVector> nullspace_basis(const RationalMatrix& m) { return nullspace(m); }

// ---------------------------------------------------------------------------
// Complex square matrices.

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const RealVector& diag);
    static ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows);

    std::size_t dim() const { return dim_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    std::vector<Complex> column_copy(std::size_t c) const {
        std::vector<Complex> out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double max_abs() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// max |a - b| over entries.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

inline constexpr double kHermitianDefect = 1e-12;

/// Self-adjoint matrix. Construction rejects a conjugate-symmetry defect
/// above 1e-12 and then symmetrizes exactly.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const ComplexMatrix& m);

    static HermitianMatrix identity(std::size_t dim) { return HermitianMatrix(ComplexMatrix::identity(dim)); }
    static HermitianMatrix zero(std::size_t dim) { return HermitianMatrix(ComplexMatrix(dim)); }
    static HermitianMatrix diagonal(const RealVector& diag) { return HermitianMatrix(ComplexMatrix::diagonal(diag)); }
    /// Symmetrizes an arbitrary product that is Hermitian up to rounding.
    static HermitianMatrix hermitian_part(const ComplexMatrix& m);

    std::size_t dim() const { return m_.dim(); }
    const ComplexMatrix& matrix() const { return m_; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    HermitianMatrix& operator+=(const HermitianMatrix& o);
    HermitianMatrix& operator-=(const HermitianMatrix& o);
    HermitianMatrix& operator*=(double s);
    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

    /// Real coordinates: the diagonal, then (Re, Im) of each upper off-diagonal entry.
    RealVector flatten() const;
    static HermitianMatrix unflatten(const RealVector& coords, std::size_t dim);

private:
    ComplexMatrix m_;
};

double hermitian_defect(const ComplexMatrix& m);

struct EigenDecomposition {
    RealVector eigenvalues;    // ascending
    ComplexMatrix eigenvectors;  // column k belongs to eigenvalues[k]

    /// ‖A − VΛV†‖_max
    double reconstruction_residual(const HermitianMatrix& a) const;
    /// ‖V†V − I‖_max
    double orthonormality_residual() const;
};

inline constexpr double kJacobiThreshold = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi diagonalization.
EigenDecomposition hermitian_eig(const HermitianMatrix& a);

/// Rejects non-Hermitian input before diagonalizing.
EigenDecomposition hermitian_eig(const ComplexMatrix& a);

}  // namespace cea
