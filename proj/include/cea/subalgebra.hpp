#pragma once
// Convex subeffect algebras represented as F = E ∩ V_1, where V_1 is spanned by
// linearly independent effects a_1..a_m with u = Σ r_i a_i.

#include "cea/algebra.hpp"

#include <optional>
#include <vector>

namespace cea {

template <BaseAlgebra A>
class Subalgebra {
public:
    using Scalar = typename A::Scalar;
    using Point = typename A::Point;

    /// Keeps the first linearly independent subsequence of `effects` and
    /// checks that u lies in their span.
    static Subalgebra from_generators(const A& base, const std::vector<Effect<A>>& effects) {
        Subalgebra f(base);
        const double tol = base.tolerance();
        std::vector<std::vector<Scalar>> cols;
        for (const auto& e : effects) {
            require_same_algebra(base, e.algebra());
            cols.push_back(base.flatten(e.value()));
            if (matrix_rank(DenseMatrix<Scalar>::from_columns(cols, base.coordinate_count()), tol) == cols.size()) {
                f.generators_.push_back(e);
            } else {
                cols.pop_back();
            }
        }
        f.basis_ = DenseMatrix<Scalar>::from_columns(cols, base.coordinate_count());
        auto r = f.span_coordinates(base.unit());
        if (!r) throw Error("not a CSEA: unit missing from span");
        f.unit_coefficients_ = std::move(*r);
        return f;
    }

    const A& base() const { return base_; }
    const std::vector<Effect<A>>& generators() const { return generators_; }
    const std::vector<Scalar>& unit_coefficients() const { return unit_coefficients_; }
    std::size_t dim() const { return generators_.size(); }
    /// Columns are the flattened generators.
    const DenseMatrix<Scalar>& basis() const { return basis_; }

    /// Coefficients c with p = Σ c_i a_i, or nullopt when p is outside the span.
    std::optional<std::vector<Scalar>> span_coordinates(const Point& p) const {
        base_.check_shape(p);
        if (generators_.empty()) return std::nullopt;
        auto sol = solve(basis_, base_.flatten(p), base_.tolerance());
        if (!sol) return std::nullopt;
        return std::move(sol->x);
    }

    bool in_span(const Point& p) const { return span_coordinates(p).has_value(); }

    /// Σ c_i a_i as a raw point (not necessarily an effect).
    Point combine(const std::vector<Scalar>& coeffs) const {
        if (coeffs.size() != dim()) throw Error("coefficient count mismatch");
        Point out = base_.zero();
        for (std::size_t i = 0; i < dim(); ++i) out = A::add(out, A::scale(generators_[i].value(), coeffs[i]));
        return out;
    }

private:
    explicit Subalgebra(A base) : base_(std::move(base)), basis_(base_.coordinate_count(), 0) {}

    A base_;
    std::vector<Effect<A>> generators_;
    std::vector<Scalar> unit_coefficients_;
    DenseMatrix<Scalar> basis_;
};

template <BaseAlgebra A>
bool contains(const Subalgebra<A>& f, const typename A::Point& candidate) {
    return is_effect(f.base(), candidate) && f.in_span(candidate);
}

template <BaseAlgebra A>
bool contains(const Subalgebra<A>& f, const Effect<A>& a) {
    require_same_algebra(f.base(), a.algebra());
    return f.in_span(a.value());
}

namespace detail {

// (u + w/‖w‖)/2 lies in [0, u] for every nonzero direction w, and together with
// u these effects span the same subspace as the directions.
template <BaseAlgebra A>
std::vector<Effect<A>> effects_spanning(const A& base, const std::vector<typename A::Point>& directions) {
    using Scalar = typename A::Scalar;
    std::vector<Effect<A>> out{Effect<A>::unit(base)};
    for (const auto& w : directions) {
        const Scalar mag = A::max_magnitude(w);
        if (detail::is_zero(mag, base.tolerance())) continue;
        const Scalar half = Scalar(1) / Scalar(2);
        typename A::Point p = A::scale(A::add(base.unit(), A::scale(w, Scalar(1) / mag)), half);
        out.emplace_back(base, std::move(p));
    }
    return out;
}

}  // namespace detail

/// F1 ∧ F2 = E ∩ (V_1 ∩ V_2).
template <BaseAlgebra A>
Subalgebra<A> meet(const Subalgebra<A>& f1, const Subalgebra<A>& f2) {
    using Scalar = typename A::Scalar;
    require_same_algebra(f1.base(), f2.base());
    const A& base = f1.base();
    const std::size_t k = base.coordinate_count();
    // Null vectors (x, y) of [B1 | -B2] give the intersection points B1·x.
    DenseMatrix<Scalar> stacked(k, f1.dim() + f2.dim());
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < f1.dim(); ++c) stacked(r, c) = f1.basis()(r, c);
        for (std::size_t c = 0; c < f2.dim(); ++c) stacked(r, f1.dim() + c) = -f2.basis()(r, c);
    }
    std::vector<typename A::Point> directions;
    for (const auto& null : nullspace(stacked, base.tolerance())) {
        std::vector<Scalar> x(null.begin(), null.begin() + static_cast<std::ptrdiff_t>(f1.dim()));
        directions.push_back(f1.combine(x));
    }
    return Subalgebra<A>::from_generators(base, detail::effects_spanning(base, directions));
}

/// F1 ∨ F2 = E ∩ span(V_1 ∪ V_2).
template <BaseAlgebra A>
Subalgebra<A> join(const Subalgebra<A>& f1, const Subalgebra<A>& f2) {
    require_same_algebra(f1.base(), f2.base());
    auto gens = f1.generators();
    gens.insert(gens.end(), f2.generators().begin(), f2.generators().end());
    return Subalgebra<A>::from_generators(f1.base(), gens);
}

/// Separated: the meet is the trivial subalgebra {λu}.
template <BaseAlgebra A>
bool is_separated(const Subalgebra<A>& f1, const Subalgebra<A>& f2) {
    return meet(f1, f2).dim() == 1;
}

/// A subalgebra generated by linearly independent strong effects summing to u.
/// Every member has a unique coordinate vector in [0,1]^m.
template <BaseAlgebra A>
class StrongSpan {
public:
    using Scalar = typename A::Scalar;

    static StrongSpan make(const A& base, const std::vector<Effect<A>>& generators) {
        auto f = Subalgebra<A>::from_generators(base, generators);
        if (f.dim() != generators.size()) throw Error("strong span: generators are linearly dependent");
        typename A::Point total = base.zero();
        for (std::size_t i = 0; i < generators.size(); ++i) {
            if (!is_strong_effect(generators[i]))
                throw Error("strong span: generator " + std::to_string(i + 1) + " is not strong");
            total = A::add(total, generators[i].value());
        }
        if (!base.equal(total, base.unit())) throw Error("strong span: generators do not sum to u");
        return StrongSpan(std::move(f));
    }

    const Subalgebra<A>& subalgebra() const { return f_; }
    const A& base() const { return f_.base(); }
    std::size_t dim() const { return f_.dim(); }
    const std::vector<Effect<A>>& generators() const { return f_.generators(); }

    /// λ with a = Σ λ_i a_i and every λ_i in [0,1]; nullopt if none exists.
    std::optional<std::vector<Scalar>> strong_coordinates(const Effect<A>& a) const {
        require_same_algebra(base(), a.algebra());
        auto lambda = f_.span_coordinates(a.value());
        if (!lambda) return std::nullopt;
        for (const auto& l : *lambda)
            if (!base().scalar_in_unit_interval(l)) return std::nullopt;
        return lambda;
    }

    /// Σ λ_i a_i for λ in [0,1]^m.
    Effect<A> from_coordinates(const std::vector<Scalar>& lambda) const {
        for (const auto& l : lambda)
            if (!base().scalar_in_unit_interval(l)) throw Error("strong coordinates must lie in [0, 1]");
        return Effect<A>(base(), f_.combine(lambda));
    }

private:
    explicit StrongSpan(Subalgebra<A> f) : f_(std::move(f)) {}
    Subalgebra<A> f_;
};

template <BaseAlgebra A>
std::optional<std::vector<typename A::Scalar>> strong_coordinates(const StrongSpan<A>& s, const Effect<A>& a) {
    return s.strong_coordinates(a);
}

}  // namespace cea
