#pragma once
// Shared generators and independent oracles for the test suites.

#include "cea/infocomplete.hpp"
#include "cea/kernel.hpp"
#include "cea/observables.hpp"
#include "cea/quantum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace testing {

using namespace cea;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Rational frac(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Uniform on {0, 1/d, ..., d/d}.
inline Rational random_unit_rational(std::mt19937_64& rng, long d = 12) {
    Rational q(static_cast<long>(pick(rng, 0, static_cast<std::size_t>(d))), d);
    q.canonicalize();
    return q;
}

inline RationalVector random_effect_point(std::mt19937_64& rng, std::size_t n, long d = 12) {
    RationalVector v(n);
    for (auto& x : v) x = random_unit_rational(rng, d);
    return v;
}

/// Random probability vector with rational entries.
inline RationalVector random_probability(std::mt19937_64& rng, std::size_t n) {
    RationalVector w(n);
    Rational total = 0;
    for (auto& x : w) {
        x = Rational(static_cast<long>(pick(rng, 0, 9)));
        total += x;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    for (auto& x : w) x /= total;
    return w;
}

/// k effects on S_n summing to u: each coordinate split as a random probability vector.
inline std::vector<RationalVector> random_partition_of_unity(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::vector<RationalVector> out(k, RationalVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = random_probability(rng, k);
        for (std::size_t x = 0; x < k; ++x) out[x][i] = p[x];
    }
    return out;
}

inline std::vector<ClassicalEffect> as_effects(const ClassicalAlgebra& s, const std::vector<RationalVector>& pts) {
    std::vector<ClassicalEffect> out;
    for (const auto& p : pts) out.emplace_back(s, p);
    return out;
}

// ---------------------------------------------------------------------------
// Exact rank oracle: fraction-free Bareiss elimination on integer rows.

inline std::size_t bareiss_rank(const RationalMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        mpz_class lcm = 1;
        for (std::size_t c = 0; c < cols; ++c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c).get_num() * (lcm / m(r, c).get_den());
    }
    std::size_t rank = 0;
    mpz_class prev = 1;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
            a[r][c] = 0;
        }
        prev = a[rank][c];
        ++rank;
    }
    return rank;
}

/// Cramer-free coefficient oracle: does p lie in span(cols)? Compares ranks.
inline bool span_oracle(const std::vector<RationalVector>& cols, const RationalVector& p) {
    const auto m = RationalMatrix::from_columns(cols, p.size());
    return bareiss_rank(m) == bareiss_rank(m.augmented(p));
}

// ---------------------------------------------------------------------------
// Quantum helpers.

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd z(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) z(r, c) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    ComplexMatrix u(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) u(r, c) = q(r, c);
    return u;
}

/// U diag(d) U†.
inline HermitianMatrix conjugate_diagonal(const ComplexMatrix& u, const RealVector& d) {
    return HermitianMatrix::hermitian_part(u * ComplexMatrix::diagonal(d) * u.adjoint());
}

inline RealVector eigen_oracle_eigenvalues(const HermitianMatrix& a) {
    Eigen::MatrixXcd m(a.dim(), a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) m(r, c) = a(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    RealVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

inline HermitianMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        m(r, r) = u(rng);
        for (std::size_t c = r + 1; c < dim; ++c) {
            m(r, c) = {u(rng), u(rng)};
            m(c, r) = std::conj(m(r, c));
        }
    }
    return HermitianMatrix(m);
}

inline HermitianMatrix sum_of(const std::vector<QuantumEffect>& es) {
    HermitianMatrix total = HermitianMatrix::zero(es.front().value().dim());
    for (const auto& e : es) total += e.value();
    return total;
}

/// Vertex count of span(gens) ∩ [0,1]^n for diagonal generators (columns of the span).
/// A strong span is affinely a cube and has exactly 2^dim vertices.
inline std::size_t slice_vertex_count(const std::vector<RealVector>& gens) {
    const std::size_t m = gens.size(), n = gens.front().size();
    Eigen::MatrixXd b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = gens[i][j];
    std::vector<Eigen::VectorXd> found;
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(m), true);
    do {
        std::vector<Eigen::Index> rows;
        for (std::size_t j = 0; j < n; ++j)
            if (mask[j]) rows.push_back(static_cast<Eigen::Index>(j));
        Eigen::MatrixXd sq(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t r = 0; r < m; ++r) sq.row(static_cast<Eigen::Index>(r)) = b.row(rows[r]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sq);
        lu.setThreshold(1e-10);
        if (!lu.isInvertible()) continue;
        for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern) {
            Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
            for (std::size_t r = 0; r < m; ++r) rhs(static_cast<Eigen::Index>(r)) = (pattern >> r) & 1 ? 1.0 : 0.0;
            const Eigen::VectorXd x = b * lu.solve(rhs);
            if (x.minCoeff() < -1e-9 || x.maxCoeff() > 1 + 1e-9) continue;
            const bool seen = std::any_of(found.begin(), found.end(),
                                          [&](const Eigen::VectorXd& y) { return (x - y).cwiseAbs().maxCoeff() < 1e-7; });
            if (!seen) found.push_back(x);
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return found.size();
}

// ---------------------------------------------------------------------------
// Partition helpers.

inline RandomVariable rv(std::initializer_list<int> values) {
    std::vector<std::string> v;
    for (int x : values) v.push_back(std::to_string(x));
    return RandomVariable(v);
}

/// Brute-force IC oracle over small n: IC iff no nonzero w with every block sum zero,
/// decided by floating SVD rank of the indicator matrix.
inline bool ic_oracle(const std::vector<Partition>& ps) {
    const std::size_t n = ps.front().n();
    std::vector<Eigen::RowVectorXd> rows;
    for (const auto& p : ps)
        for (const auto& b : p.blocks()) {
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
            for (auto i : b) r(static_cast<Eigen::Index>(i)) = 1.0;
            rows.push_back(r);
        }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    svd.setThreshold(1e-9);
    return static_cast<std::size_t>(svd.rank()) == n;
}

}  // namespace testing
