#include "cea/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace cea {

ClassicalAlgebra::ClassicalAlgebra(std::size_t n) : n_(n) {
    if (n == 0) throw Error("classical algebra needs n >= 1");
}

void ClassicalAlgebra::check_shape(const Point& p) const {
    if (p.size() != n_)
        throw Error("shape mismatch: expected " + std::to_string(n_) + " coordinates, got " +
                    std::to_string(p.size()));
}

bool ClassicalAlgebra::in_cone(const Point& p) const {
    check_shape(p);
    return std::all_of(p.begin(), p.end(), [](const Rational& x) { return sgn(x) >= 0; });
}

bool ClassicalAlgebra::in_interval(const Point& p) const {
    check_shape(p);
    return std::all_of(p.begin(), p.end(), [](const Rational& x) { return sgn(x) >= 0 && x <= 1; });
}

ClassicalAlgebra::Point ClassicalAlgebra::unflatten(const std::vector<Scalar>& coords) const {
    check_shape(coords);
    return coords;
}

ClassicalAlgebra::Point ClassicalAlgebra::add(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw Error("shape mismatch");
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

ClassicalAlgebra::Point ClassicalAlgebra::sub(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw Error("shape mismatch");
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

ClassicalAlgebra::Point ClassicalAlgebra::scale(const Point& a, const Scalar& s) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

Rational ClassicalAlgebra::max_magnitude(const Point& a) {
    Rational m = 0;
    for (const auto& x : a) m = std::max<Rational>(m, abs(x));
    return m;
}

// ---------------------------------------------------------------------------

QuantumAlgebra::QuantumAlgebra(std::size_t dim, double tol) : dim_(dim), tol_(tol) {
    if (dim == 0) throw Error("quantum algebra needs dim >= 1");
    if (!(tol > 0.0)) throw Error("tolerance must be positive");
}

void QuantumAlgebra::check_shape(const Point& p) const {
    if (p.dim() != dim_)
        throw Error("shape mismatch: expected " + std::to_string(dim_) + "x" + std::to_string(dim_) +
                    " matrix, got dimension " + std::to_string(p.dim()));
}

bool QuantumAlgebra::in_cone(const Point& p) const {
    check_shape(p);
    return spectrum_of(p).front() >= -tol_;
}

bool QuantumAlgebra::in_interval(const Point& p) const {
    check_shape(p);
    const auto ev = spectrum_of(p);
    return ev.front() >= -tol_ && ev.back() <= 1.0 + tol_;
}

bool QuantumAlgebra::equal(const Point& a, const Point& b) const {
    return max_abs_diff(a.matrix(), b.matrix()) <= tol_;
}

double QuantumAlgebra::max_magnitude(const Point& a) {
    const auto ev = spectrum_of(a);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

RealVector spectrum_of(const HermitianMatrix& a) { return hermitian_eig(a).eigenvalues; }

// ---------------------------------------------------------------------------

template <>
State<ClassicalAlgebra>::State(ClassicalAlgebra algebra, Point value)
    : algebra_(std::move(algebra)), value_(std::move(value)) {
    algebra_.check_shape(value_);
    Rational total = 0;
    for (const auto& x : value_) {
        if (sgn(x) < 0) throw Error("not a state: negative probability " + to_string(x));
        total += x;
    }
    if (total != 1) throw Error("not a state: probabilities sum to " + to_string(total));
}

template <>
State<QuantumAlgebra>::State(QuantumAlgebra algebra, Point value)
    : algebra_(std::move(algebra)), value_(std::move(value)) {
    algebra_.check_shape(value_);
    const double tol = algebra_.tolerance();
    if (spectrum_of(value_).front() < -tol) throw Error("not a state: density matrix is not positive");
    const double tr = value_.matrix().trace().real();
    if (std::abs(tr - 1.0) > tol) throw Error("not a state: trace " + std::to_string(tr));
}

bool is_sharp(const ClassicalEffect& a) {
    return std::all_of(a.value().begin(), a.value().end(),
                       [](const Rational& x) { return sgn(x) == 0 || x == 1; });
}

bool is_sharp(const QuantumEffect& a) {
    const auto& m = a.value().matrix();
    return max_abs_diff(m * m, m) <= a.algebra().tolerance();
}

bool is_strong_effect(const ClassicalEffect& a) {
    return std::any_of(a.value().begin(), a.value().end(), [](const Rational& x) { return x == 1; });
}

bool is_strong_effect(const QuantumEffect& a) {
    return spectrum_of(a.value()).back() >= 1.0 - a.algebra().tolerance();
}

Rational evaluate(const ClassicalState& s, const ClassicalEffect& a) {
    require_same_algebra(s.algebra(), a.algebra());
    Rational p = 0;
    for (std::size_t i = 0; i < s.value().size(); ++i) p += s.value()[i] * a.value()[i];
    return p;
}

double evaluate(const QuantumState& s, const QuantumEffect& a) {
    require_same_algebra(s.algebra(), a.algebra());
    return (s.value().matrix() * a.value().matrix()).trace().real();
}

}  // namespace cea
