#pragma once
// Observables, classical channels (row-stochastic postprocessing), coexistence
// witnesses inside strong spans, and the affine isomorphism of a strong span
// onto the classical algebra S_m.

#include "cea/subalgebra.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cea {

template <BaseAlgebra A>
class Observable {
public:
    Observable(std::vector<std::string> outcomes, std::vector<Effect<A>> effects)
        : outcomes_(std::move(outcomes)), effects_(std::move(effects)) {}

    const std::vector<std::string>& outcomes() const { return outcomes_; }
    const std::vector<Effect<A>>& effects() const { return effects_; }
    std::size_t size() const { return effects_.size(); }
    const A& base() const { return effects_.front().algebra(); }

private:
    std::vector<std::string> outcomes_;
    std::vector<Effect<A>> effects_;
};

/// Labels "1".."k".
std::vector<std::string> default_labels(std::size_t k);

/// Builds an observable, rejecting unless Σ_x A(x) = u.
template <BaseAlgebra A>
Observable<A> validate_observable(const A& base, const std::vector<Effect<A>>& effects,
                                  std::vector<std::string> outcomes = {}) {
    if (effects.empty()) throw Error("not an observable: no outcomes");
    if (outcomes.empty()) outcomes = default_labels(effects.size());
    if (outcomes.size() != effects.size()) throw Error("not an observable: label count differs from effect count");
    if (std::set<std::string>(outcomes.begin(), outcomes.end()).size() != outcomes.size())
        throw Error("not an observable: duplicate outcome label");
    typename A::Point total = base.zero();
    for (const auto& e : effects) {
        require_same_algebra(base, e.algebra());
        total = A::add(total, e.value());
    }
    if (!base.equal(total, base.unit())) throw Error("not an observable: effects do not sum to u");
    return Observable<A>(std::move(outcomes), effects);
}

template <BaseAlgebra A>
using Distribution = std::vector<std::pair<std::string, typename A::Scalar>>;

/// Φ_{A,s}: outcome x ↦ s(A(x)).
template <BaseAlgebra A>
Distribution<A> distribution(const Observable<A>& obs, const State<A>& s) {
    Distribution<A> out;
    for (std::size_t i = 0; i < obs.size(); ++i) out.emplace_back(obs.outcomes()[i], evaluate(s, obs.effects()[i]));
    return out;
}

/// Row-stochastic matrix ν indexed (input outcome x, output outcome y).
template <class S>
class Channel {
public:
    Channel(DenseMatrix<S> matrix, std::vector<std::string> output_labels = {}, double tol = 0.0)
        : matrix_(std::move(matrix)), labels_(std::move(output_labels)) {
        if (matrix_.rows() == 0 || matrix_.cols() == 0) throw Error("channel: empty matrix");
        if (labels_.empty()) labels_ = default_labels(matrix_.cols());
        if (labels_.size() != matrix_.cols()) throw Error("channel: output label count mismatch");
        for (std::size_t x = 0; x < matrix_.rows(); ++x) {
            S row = 0;
            for (std::size_t y = 0; y < matrix_.cols(); ++y) {
                const S& v = matrix_(x, y);
                if (v < -tol || v > 1 + tol) throw Error("channel: entry outside [0, 1]");
                row += v;
            }
            if (!detail::is_zero(S(row - 1), tol))
                throw Error("channel: row " + std::to_string(x + 1) + " does not sum to 1");
        }
    }

    const DenseMatrix<S>& matrix() const { return matrix_; }
    const std::vector<std::string>& output_labels() const { return labels_; }
    std::size_t inputs() const { return matrix_.rows(); }
    std::size_t outputs() const { return matrix_.cols(); }
    const S& operator()(std::size_t x, std::size_t y) const { return matrix_(x, y); }

private:
    DenseMatrix<S> matrix_;
    std::vector<std::string> labels_;
};

/// (ν∘A)(y) = Σ_x ν_xy A(x).
template <BaseAlgebra A>
Observable<A> apply_channel(const Channel<typename A::Scalar>& nu, const Observable<A>& obs) {
    if (nu.inputs() != obs.size())
        throw Error("channel has " + std::to_string(nu.inputs()) + " input rows, observable has " +
                    std::to_string(obs.size()) + " outcomes");
    const A& base = obs.base();
    std::vector<Effect<A>> out;
    for (std::size_t y = 0; y < nu.outputs(); ++y) {
        typename A::Point p = base.zero();
        for (std::size_t x = 0; x < nu.inputs(); ++x) p = A::add(p, A::scale(obs.effects()[x].value(), nu(x, y)));
        out.emplace_back(base, std::move(p));
    }
    return Observable<A>(nu.output_labels(), std::move(out));
}

template <BaseAlgebra A>
bool linearly_independent(const std::vector<Effect<A>>& effects) {
    if (effects.empty()) return true;
    const A& base = effects.front().algebra();
    std::vector<std::vector<typename A::Scalar>> cols;
    for (const auto& e : effects) cols.push_back(base.flatten(e.value()));
    return matrix_rank(DenseMatrix<typename A::Scalar>::from_columns(cols, base.coordinate_count()),
                       base.tolerance()) == effects.size();
}

template <BaseAlgebra A>
bool is_strong_observable(const Observable<A>& obs) {
    if (!linearly_independent(obs.effects())) return false;
    for (const auto& e : obs.effects())
        if (!is_strong_effect(e)) return false;
    return true;
}

template <class S>
struct PostprocessingResult {
    std::optional<Channel<S>> channel;
    // Offending entry when a coefficient falls outside [0, 1].
    std::optional<std::size_t> bad_input;
    std::optional<std::size_t> bad_output;
    std::optional<S> bad_value;
    std::string reason;

    explicit operator bool() const { return channel.has_value(); }
};

/// Finds ν with B = ν∘A. A must have linearly independent effects; each B(y)
/// is expanded uniquely in span(A) and the coefficients must form a
/// row-stochastic matrix.
template <BaseAlgebra A>
PostprocessingResult<typename A::Scalar> find_postprocessing(const Observable<A>& a, const Observable<A>& b) {
    using S = typename A::Scalar;
    require_same_algebra(a.base(), b.base());
    if (!linearly_independent(a.effects()))
        throw Error("postprocessing search requires A to have linearly independent effects");
    const A& base = a.base();
    const double tol = base.tolerance();
    std::vector<std::vector<S>> cols;
    for (const auto& e : a.effects()) cols.push_back(base.flatten(e.value()));
    const auto basis = DenseMatrix<S>::from_columns(cols, base.coordinate_count());

    PostprocessingResult<S> result;
    DenseMatrix<S> nu(a.size(), b.size());
    for (std::size_t y = 0; y < b.size(); ++y) {
        auto sol = solve(basis, base.flatten(b.effects()[y].value()), tol);
        if (!sol) {
            result.bad_output = y;
            result.reason = "B(" + b.outcomes()[y] + ") is not in the span of A";
            return result;
        }
        for (std::size_t x = 0; x < a.size(); ++x) {
            const S& v = sol->x[x];
            if (!base.scalar_in_unit_interval(v)) {
                result.bad_input = x;
                result.bad_output = y;
                result.bad_value = v;
                result.reason = "coefficient outside [0, 1]";
                return result;
            }
            nu(x, y) = v;
        }
    }
    try {
        result.channel.emplace(std::move(nu), b.outcomes(), tol);
    } catch (const Error& e) {
        result.reason = e.what();
    }
    return result;
}

/// b = first_only + joint, c = second_only + joint, and the three sum to an effect.
template <BaseAlgebra A>
struct CoexistenceWitness {
    Effect<A> first_only;
    Effect<A> second_only;
    Effect<A> joint;

    /// (first_only + second_only + joint)'
    Effect<A> remainder() const {
        const A& base = joint.algebra();
        auto total = A::add(A::add(first_only.value(), second_only.value()), joint.value());
        return Effect<A>(base, A::sub(base.unit(), total));
    }
};

/// Joint measurement of two members of a strong span via d = Σ min(λ_i, μ_i) a_i.
template <BaseAlgebra A>
CoexistenceWitness<A> coexistence_witness(const StrongSpan<A>& s, const Effect<A>& b, const Effect<A>& c) {
    using S = typename A::Scalar;
    auto lambda = s.strong_coordinates(b);
    auto mu = s.strong_coordinates(c);
    if (!lambda) throw Error("coexistence: first effect is not a member of the strong span");
    if (!mu) throw Error("coexistence: second effect is not a member of the strong span");
    std::vector<S> shared(s.dim()), only_b(s.dim()), only_c(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        shared[i] = std::min<S>((*lambda)[i], (*mu)[i]);
        only_b[i] = (*lambda)[i] - shared[i];
        only_c[i] = (*mu)[i] - shared[i];
    }
    const A& base = s.base();
    const auto& f = s.subalgebra();
    CoexistenceWitness<A> w{Effect<A>(base, f.combine(only_b)), Effect<A>(base, f.combine(only_c)),
                            Effect<A>(base, f.combine(shared))};
    w.remainder();  // throws if the three parts overflow u
    return w;
}

/// J: S → S_m, a ↦ strong coordinates; J⁻¹(λ) = Σ λ_i a_i.
template <BaseAlgebra A>
class ClassicalIso {
public:
    using Scalar = typename A::Scalar;

    explicit ClassicalIso(StrongSpan<A> s) : s_(std::move(s)), target_(s_.dim()) {}

    const StrongSpan<A>& span() const { return s_; }
    const ClassicalAlgebra& target() const { return target_; }

    std::optional<std::vector<Scalar>> forward(const Effect<A>& a) const { return s_.strong_coordinates(a); }
    Effect<A> inverse(const std::vector<Scalar>& lambda) const {
        if (lambda.size() != s_.dim()) throw Error("coordinate count mismatch");
        return s_.from_coordinates(lambda);
    }

    /// J(a) as an effect of S_m (exact side only).
    std::optional<ClassicalEffect> to_simplex(const Effect<A>& a) const
        requires std::same_as<Scalar, Rational>
    {
        auto lambda = forward(a);
        if (!lambda) return std::nullopt;
        return ClassicalEffect(target_, std::move(*lambda));
    }

private:
    StrongSpan<A> s_;
    ClassicalAlgebra target_;
};

template <BaseAlgebra A>
ClassicalIso<A> classical_iso(const StrongSpan<A>& s) {
    return ClassicalIso<A>(s);
}

}  // namespace cea
