#include "cea/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace cea {

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
    if (text.empty()) throw Error("empty rational literal");
    try {
        const auto dot = text.find('.');
        if (dot != std::string::npos) {
            if (text.find_first_of("/eE") != std::string::npos)
                throw Error("unsupported rational literal '" + raw + "'");
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            std::size_t scale = text.size() - dot - 1;
            Rational q(mpz_class(digits, 10), mpz_class("1" + std::string(scale, '0'), 10));
            q.canonicalize();
            return q;
        }
        Rational q(text, 10);
        if (q.get_den() == 0) throw Error("zero denominator in '" + raw + "'");
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error("malformed rational literal '" + raw + "'");
    }
}

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str(10);
}

// ---------------------------------------------------------------------------

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const RealVector& diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
    ComplexMatrix m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw Error("complex matrix must be square");
        for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw Error("matrix dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw Error("matrix dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw Error("matrix dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

double hermitian_defect(const ComplexMatrix& m) {
    double d = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = i; j < m.dim(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

// ---------------------------------------------------------------------------

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
    const double defect = hermitian_defect(m);
    if (defect > kHermitianDefect)
        throw Error("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    *this = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::hermitian_part(const ComplexMatrix& m) {
    HermitianMatrix h;
    h.m_ = ComplexMatrix(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        h.m_(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < m.dim(); ++j) {
            const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
            h.m_(i, j) = z;
            h.m_(j, i) = std::conj(z);
        }
    }
    return h;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
    m_ += o.m_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
    m_ -= o.m_;
    return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
    m_ *= s;
    return *this;
}

RealVector HermitianMatrix::flatten() const {
    const std::size_t n = dim();
    RealVector out;
    out.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(m_(i, i).real());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            out.push_back(m_(i, j).real());
            out.push_back(m_(i, j).imag());
        }
    return out;
}

HermitianMatrix HermitianMatrix::unflatten(const RealVector& coords, std::size_t n) {
    if (coords.size() != n * n) throw Error("flattened Hermitian coordinate count mismatch");
    ComplexMatrix m(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) m(i, i) = coords[k++];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = Complex(coords[k], coords[k + 1]);
            m(j, i) = std::conj(m(i, j));
            k += 2;
        }
    return HermitianMatrix(m);
}

// ---------------------------------------------------------------------------

double EigenDecomposition::reconstruction_residual(const HermitianMatrix& a) const {
    ComplexMatrix lambda = ComplexMatrix::diagonal(eigenvalues);
    return max_abs_diff(a.matrix(), eigenvectors * lambda * eigenvectors.adjoint());
}

double EigenDecomposition::orthonormality_residual() const {
    return max_abs_diff(eigenvectors.adjoint() * eigenvectors, ComplexMatrix::identity(eigenvectors.dim()));
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& a) { return hermitian_eig(HermitianMatrix(a)); }

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, frobenius_norm(a));

    bool converged = n <= 1;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        if (off_diagonal_norm(a) <= kJacobiThreshold * scale) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) continue;
                // Phase-rotate column q so the pivot entry is real, then
                // apply the real symmetric Jacobi rotation.
                const Complex phase = a(p, q) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J restricted to (p, q): [[c, s], [-s·conj(phase), c·conj(phase)]]
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * std::conj(phase);
                const Complex jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (!converged && off_diagonal_norm(a) > 1e-10 * scale)
        throw Error("Jacobi eigensolver did not converge in " + std::to_string(kJacobiMaxSweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

}  // namespace cea
