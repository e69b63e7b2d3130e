#pragma once
// Base convex effect algebras: the classical simplex-cone interval S_n and the
// full quantum interval E(H) = [0, I] on C^d.

#include "cea/kernel.hpp"

#include <concepts>
#include <string>
#include <utility>
#include <variant>

namespace cea {

/// S_n: vectors in Q^n with coordinates in [0, 1]; unit (1, ..., 1).
class ClassicalAlgebra {
public:
    using Scalar = Rational;
    using Point = RationalVector;
    static constexpr const char* kind_name = "classical";

    explicit ClassicalAlgebra(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t coordinate_count() const { return n_; }
    double tolerance() const { return 0.0; }

    Point unit() const { return Point(n_, Rational(1)); }
    Point zero() const { return Point(n_, Rational(0)); }

    void check_shape(const Point& p) const;
    bool in_cone(const Point& p) const;
    bool in_interval(const Point& p) const;
    bool equal(const Point& a, const Point& b) const { return a == b; }
    bool scalar_in_unit_interval(const Scalar& s) const { return s >= 0 && s <= 1; }

    std::vector<Scalar> flatten(const Point& p) const { return p; }
    Point unflatten(const std::vector<Scalar>& coords) const;

    static Point add(const Point& a, const Point& b);
    static Point sub(const Point& a, const Point& b);
    static Point scale(const Point& a, const Scalar& s);
    /// Largest coordinate magnitude.
    static Scalar max_magnitude(const Point& a);

    bool operator==(const ClassicalAlgebra&) const = default;

private:
    std::size_t n_;
};

/// E(C^d): Hermitian d×d matrices with spectrum in [0, 1], tested with
/// tolerance ε at both spectral endpoints.
class QuantumAlgebra {
public:
    using Scalar = double;
    using Point = HermitianMatrix;
    static constexpr const char* kind_name = "quantum";

    explicit QuantumAlgebra(std::size_t dim, double tol = kDefaultTolerance);

    std::size_t size() const { return dim_; }
    std::size_t coordinate_count() const { return dim_ * dim_; }
    double tolerance() const { return tol_; }

    Point unit() const { return HermitianMatrix::identity(dim_); }
    Point zero() const { return HermitianMatrix::zero(dim_); }

    void check_shape(const Point& p) const;
    bool in_cone(const Point& p) const;
    bool in_interval(const Point& p) const;
    bool equal(const Point& a, const Point& b) const;
    bool scalar_in_unit_interval(double s) const { return s >= -tol_ && s <= 1.0 + tol_; }

    std::vector<Scalar> flatten(const Point& p) const { return p.flatten(); }
    Point unflatten(const std::vector<Scalar>& coords) const { return HermitianMatrix::unflatten(coords, dim_); }

    static Point add(const Point& a, const Point& b) { return a + b; }
    static Point sub(const Point& a, const Point& b) { return a - b; }
    static Point scale(const Point& a, double s) { return a * s; }
    /// Operator norm (largest |eigenvalue|).
    static double max_magnitude(const Point& a);

    bool operator==(const QuantumAlgebra& o) const { return dim_ == o.dim_; }

private:
    std::size_t dim_;
    double tol_;
};

template <class A>
concept BaseAlgebra = std::same_as<A, ClassicalAlgebra> || std::same_as<A, QuantumAlgebra>;

using AnyAlgebra = std::variant<ClassicalAlgebra, QuantumAlgebra>;

template <BaseAlgebra A>
void require_same_algebra(const A& a, const A& b) {
    if (!(a == b)) throw Error("algebra mismatch");
}

/// An element of [0, u]. Validated on construction.
template <BaseAlgebra A>
class Effect {
public:
    using Point = typename A::Point;

    Effect(A algebra, Point value) : algebra_(std::move(algebra)), value_(std::move(value)) {
        algebra_.check_shape(value_);
        if (!algebra_.in_interval(value_)) throw Error("not an effect: value lies outside [0, u]");
    }

    static Effect unit(const A& algebra) { return Effect(algebra, algebra.unit()); }
    static Effect zero(const A& algebra) { return Effect(algebra, algebra.zero()); }

    const A& algebra() const { return algebra_; }
    const Point& value() const { return value_; }

private:
    A algebra_;
    Point value_;
};

using ClassicalEffect = Effect<ClassicalAlgebra>;
using QuantumEffect = Effect<QuantumAlgebra>;

/// Probability vector (classical) or density matrix (quantum).
template <BaseAlgebra A>
class State {
public:
    using Point = typename A::Point;

    State(A algebra, Point value);

    const A& algebra() const { return algebra_; }
    const Point& value() const { return value_; }

private:
    A algebra_;
    Point value_;
};

template <>
State<ClassicalAlgebra>::State(ClassicalAlgebra algebra, Point value);
template <>
State<QuantumAlgebra>::State(QuantumAlgebra algebra, Point value);

using ClassicalState = State<ClassicalAlgebra>;
using QuantumState = State<QuantumAlgebra>;

template <BaseAlgebra A>
bool is_effect(const A& algebra, const typename A::Point& candidate) {
    algebra.check_shape(candidate);
    return algebra.in_interval(candidate);
}

template <BaseAlgebra A>
Effect<A> complement(const Effect<A>& a) {
    const A& alg = a.algebra();
    return Effect<A>(alg, A::sub(alg.unit(), a.value()));
}

template <BaseAlgebra A>
bool leq(const Effect<A>& a, const Effect<A>& b) {
    require_same_algebra(a.algebra(), b.algebra());
    return a.algebra().in_cone(A::sub(b.value(), a.value()));
}

template <BaseAlgebra A>
bool perp(const Effect<A>& a, const Effect<A>& b) {
    require_same_algebra(a.algebra(), b.algebra());
    return a.algebra().in_interval(A::add(a.value(), b.value()));
}

/// a ⊕ b; requires a ⊥ b.
template <BaseAlgebra A>
Effect<A> orthosum(const Effect<A>& a, const Effect<A>& b) {
    if (!perp(a, b)) throw Error("orthogonal sum of non-orthogonal effects");
    return Effect<A>(a.algebra(), A::add(a.value(), b.value()));
}

bool is_sharp(const ClassicalEffect& a);
bool is_sharp(const QuantumEffect& a);

bool is_strong_effect(const ClassicalEffect& a);
bool is_strong_effect(const QuantumEffect& a);

Rational evaluate(const ClassicalState& s, const ClassicalEffect& a);
double evaluate(const QuantumState& s, const QuantumEffect& a);

/// Ascending eigenvalues of a Hermitian matrix.
RealVector spectrum_of(const HermitianMatrix& a);

}  // namespace cea
