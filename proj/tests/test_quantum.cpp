#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace cea;
using namespace testing;

namespace {

QuantumEffect qdiag(RealVector d) { return QuantumEffect(QuantumAlgebra(d.size()), HermitianMatrix::diagonal(d)); }

QuantumEffect q2(std::vector<std::vector<Complex>> rows) {
    return QuantumEffect(QuantumAlgebra(2), HermitianMatrix(ComplexMatrix::from_rows(rows)));
}

const QuantumEffect kAlpha = q2({{0.6, 0.2}, {0.2, 0.6}});
const QuantumEffect kBeta = q2({{0.7, 0.0}, {0.0, 0.3}});

bool same_up_to_order(std::vector<QuantumEffect> got, std::vector<RealVector> want) {
    if (got.size() != want.size()) return false;
    std::vector<bool> used(want.size(), false);
    for (const auto& g : got) {
        bool found = false;
        for (std::size_t k = 0; k < want.size() && !found; ++k)
            if (!used[k] && max_abs_diff(g.value().matrix(), ComplexMatrix::diagonal(want[k])) <= 1e-9) used[k] = found = true;
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("spectrum examples") {
    const auto s = spectrum(qdiag({1.0, 0.5, 0.0}));
    CHECK(s[0] == doctest::Approx(0.0));
    CHECK(s[1] == doctest::Approx(0.5));
    CHECK(s[2] == doctest::Approx(1.0));
    for (double x : spectrum(qdiag({1.0, 1.0, 1.0}))) CHECK(x == doctest::Approx(1.0));
    const auto p = spectrum(q2({{0.5, 0.5}, {0.5, 0.5}}));
    CHECK(std::abs(p[0]) < 1e-12);
    CHECK(p[1] == doctest::Approx(1.0));
}

TEST_CASE("commutator_norm examples") {
    CHECK(commutator_norm(qdiag({0.2, 0.4}), qdiag({0.9, 0.1})) == 0.0);
    CHECK(commutator_norm(kAlpha, kAlpha) == 0.0);
    const auto obs = build_example6(kAlpha, kBeta);
    // Direct multiplication: [a1, a2] has off-diagonal entries ±0.02.
    CHECK(commutator_norm(obs.effects()[0], obs.effects()[1]) == doctest::Approx(0.02));
    CHECK(commutator_norm(obs.effects()[0], obs.effects()[1]) > 0.01);
    CHECK_THROWS_AS(commutator_norm(qdiag({1.0}), qdiag({1.0, 0.0})), Error);
}

TEST_CASE("strong effects are those with eigenvalue one") {
    auto rng = make_rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = pick(rng, 1, 8);
        RealVector d(n);
        for (auto& x : d) x = unit(rng) * 0.98;
        const bool planted = trial % 2 == 0;
        if (planted) d[pick(rng, 0, n - 1)] = 1.0;
        const QuantumEffect a(QuantumAlgebra(n), conjugate_diagonal(random_unitary(rng, n), d));
        CHECK(is_strong_effect(a) == planted);
    }
}

TEST_CASE("strong_decomposition examples") {
    const auto single = strong_decomposition({QuantumEffect::unit(QuantumAlgebra(3))});
    CHECK(max_abs_diff(single.projections[0].matrix(), ComplexMatrix::identity(3)) <= 1e-12);
    CHECK(single.complement_rank == 0);
    CHECK(single.complement.matrix().max_abs() <= 1e-12);

    const auto ex6 = build_example6(kAlpha, kBeta);
    const auto ex = build_example7(ex6.effects()[0], ex6.effects()[1], ex6.effects()[2]);
    const auto dec = strong_decomposition(ex.generators);
    CHECK(dec.ranks == std::vector<std::size_t>{1, 1, 1});
    CHECK(dec.complement_rank == 2);
    CHECK(dec.reconstruction_residual <= 1e-9);
    CHECK(dec.resolution_residual <= 1e-9);
    CHECK(dec.annihilation_residual <= 1e-9);
    CHECK(dec.orthogonality_residual <= 1e-9);
    for (std::size_t i = 0; i < 3; ++i) {
        RealVector e(5, 0.0);
        e[i] = 1.0;
        CHECK(max_abs_diff(dec.projections[i].matrix(), ComplexMatrix::diagonal(e)) <= 1e-9);
    }

    const QuantumAlgebra h(2);
    CHECK_THROWS_WITH_AS(strong_decomposition({qdiag({0.9, 0.1}), qdiag({0.1, 0.9})}), doctest::Contains("not strong"), Error);
    CHECK_THROWS_AS(strong_decomposition({qdiag({1.0, 0.0}), qdiag({0.0, 0.5})}), Error);
    CHECK_THROWS_AS(strong_decomposition({qdiag({1.0, 0.0}), qdiag({0.0, 1.0}), qdiag({1.0, 0.0})}), Error);
}

TEST_CASE("decompositions of random strong families") {
    auto rng = make_rng(62);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = pick(rng, 2, 8), m = pick(rng, 1, n);
        // Diagonal strong structure: coordinate i < m pinned to generator i; the rest shared.
        std::vector<RealVector> d(m, RealVector(n, 0.0));
        for (std::size_t i = 0; i < m; ++i) d[i][i] = 1.0;
        for (std::size_t j = m; j < n; ++j) {
            double left = 1.0;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                d[i][j] = left * unit(rng) / 2;
                left -= d[i][j];
            }
            d[m - 1][j] = left;
        }
        const auto u = random_unitary(rng, n);
        std::vector<QuantumEffect> gens;
        for (const auto& x : d) gens.emplace_back(QuantumAlgebra(n), conjugate_diagonal(u, x));
        if (!linearly_independent(gens)) continue;
        const auto dec = strong_decomposition(gens);
        CHECK(dec.reconstruction_residual <= 1e-9);
        CHECK(dec.resolution_residual <= 1e-9);
        CHECK(dec.projection_residual <= 1e-9);
        CHECK(dec.annihilation_residual <= 1e-9);
        if (m == n) {
            CHECK(dec.complement_rank == 0);
            for (auto r : dec.ranks) CHECK(r == 1);
        }
    }
}

TEST_CASE("build_example6 examples") {
    const auto obs = build_example6(kAlpha, kBeta);
    REQUIRE(obs.size() == 3);
    CHECK(max_abs_diff(sum_of(obs.effects()).matrix(), ComplexMatrix::identity(2)) <= 1e-12);
    CHECK(linearly_independent(obs.effects()));
    for (const auto& e : obs.effects()) {
        const auto s = eigen_oracle_eigenvalues(e.value());
        CHECK(s.front() > 1e-6);
        CHECK(s.back() < 1 - 1e-6);
        CHECK_FALSE(is_strong_effect(e));
    }
    CHECK_THROWS_AS(build_example6(qdiag({0.5, 0.5}), qdiag({0.5, 0.5})), Error);
    CHECK_THROWS_AS(build_example6(qdiag({0.0, 0.5}), kAlpha), Error);
    CHECK_THROWS_AS(build_example6(qdiag({0.5, 0.5, 0.5}), kAlpha), Error);
}

TEST_CASE("build_example7 examples") {
    const auto ex6 = build_example6(kAlpha, kBeta);
    const auto ex = build_example7(ex6.effects()[0], ex6.effects()[1], ex6.effects()[2]);
    CHECK_FALSE(ex.commutative);
    CHECK(commutator_norm(ex.generators[0], ex.generators[1]) > 1e-2);
    for (const auto& g : ex.generators) CHECK(is_strong_effect(g));
    CHECK(max_abs_diff(sum_of(ex.generators).matrix(), ComplexMatrix::identity(5)) <= 1e-12);
    CHECK(ex.generators[0].value()(0, 0) == Complex(1.0));
    CHECK(ex.generators[2].value()(4, 4) == ex6.effects()[2].value()(1, 1));

    const auto commuting = build_example7(qdiag({0.2, 0.3}), qdiag({0.3, 0.3}), qdiag({0.5, 0.4}));
    CHECK(commuting.commutative);

    CHECK_THROWS_AS(build_example7(qdiag({1.0, 0.3}), qdiag({0.0, 0.3}), qdiag({0.0, 0.4})), Error);
    CHECK_THROWS_AS(build_example7(qdiag({0.2, 0.3}), qdiag({0.2, 0.3}), qdiag({0.2, 0.3})), Error);
}

TEST_CASE("simultaneous_diagonalize with degenerate combined spectrum") {
    auto rng = make_rng(63);
    const auto u = random_unitary(rng, 4);
    const std::vector<HermitianMatrix> family{conjugate_diagonal(u, {0.5, 0.5, 0.0, 0.0}),
                                              conjugate_diagonal(u, {0.5, 0.5, 1.0, 0.0}),
                                              conjugate_diagonal(u, {0.2, 0.7, 0.0, 1.0})};
    const auto sd = simultaneous_diagonalize(family, 1e-9, 42);
    CHECK(sd.off_diagonal_residual <= 1e-9);
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto back = sd.basis * ComplexMatrix::diagonal(sd.diagonals[k]) * sd.basis.adjoint();
        CHECK(max_abs_diff(back, family[k].matrix()) <= 1e-9);
    }
    // Same seed, same output.
    const auto again = simultaneous_diagonalize(family, 1e-9, 42);
    CHECK(max_abs_diff(again.basis, sd.basis) == 0.0);
}

TEST_CASE("strongify_commutative examples") {
    const auto a = strongify_commutative({qdiag({1, 0, 0.3}), qdiag({0, 1, 0.7})});
    REQUIRE_FALSE(a.proof_gap);
    CHECK(same_up_to_order(a.generators, {{1, 0, 0.3}, {0, 1, 0.7}}));

    const auto b = strongify_commutative({qdiag({0.5, 0.5, 0}), qdiag({0.5, 0.5, 1})});
    REQUIRE_FALSE(b.proof_gap);
    CHECK(same_up_to_order(b.generators, {{1, 1, 0}, {0, 0, 1}}));

    const auto c = strongify_commutative({QuantumEffect::unit(QuantumAlgebra(3))});
    REQUIRE_FALSE(c.proof_gap);
    CHECK(same_up_to_order(c.generators, {{1, 1, 1}}));

    CHECK_THROWS_AS(strongify_commutative({kAlpha, kBeta, QuantumEffect(QuantumAlgebra(2), HermitianMatrix::identity(2) - kAlpha.value() * 0.5 - kBeta.value() * 0.5)}), Error);
    CHECK_THROWS_AS(strongify_commutative({qdiag({0.5, 0.0})}), Error);
}

TEST_CASE("strongify reports a proof gap when the span slice is not a cube") {
    // span{(1,1,0,0),(0,0,1,1),(1,0,0,1)} meets the cube in an octahedron.
    const auto r = strongify_commutative({qdiag({1, 1, 0, 0}), qdiag({0, 0, 1, 1}), qdiag({1, 0, 0, 1})});
    CHECK(r.proof_gap);
    CHECK(r.generators.empty());
    CHECK(r.subsets_tried == 4);
    CHECK(slice_vertex_count({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}}) == 6);
    CHECK(slice_vertex_count({{1, 1, 0, 0}, {0, 0, 1, 1}}) == 4);
}

TEST_CASE("strongify output on conjugated strong families") {
    auto rng = make_rng(64);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = pick(rng, 1, 8), m = pick(rng, 1, n);
        // Strong generators s_j mixed by a column-stochastic matrix.
        std::vector<RealVector> s(m, RealVector(n, 0.0));
        for (std::size_t j = 0; j < n; ++j) s[j < m ? j : pick(rng, 0, m - 1)][j] = 1.0;
        std::vector<RealVector> a(m, RealVector(n, 0.0));
        for (std::size_t j = 0; j < m; ++j) {
            RealVector col(m);
            double total = 0;
            for (std::size_t i = 0; i < m; ++i) {
                col[i] = unit(rng) + (i == j ? double(m) : 0.0);
                total += col[i];
            }
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < n; ++k) a[i][k] += col[i] / total * s[j][k];
        }
        const auto u = random_unitary(rng, n);
        std::vector<QuantumEffect> gens;
        for (const auto& x : a) gens.emplace_back(QuantumAlgebra(n), conjugate_diagonal(u, x));
        const auto r = strongify_commutative(gens);
        REQUIRE_FALSE(r.proof_gap);
        CHECK(linearly_independent(r.generators));
        for (const auto& g : r.generators) CHECK(is_strong_effect(g));
        CHECK(max_abs_diff(sum_of(r.generators).matrix(), ComplexMatrix::identity(n)) <= 1e-8);
        const auto f = Subalgebra<QuantumAlgebra>::from_generators(QuantumAlgebra(n), gens);
        for (const auto& g : r.generators) CHECK(f.in_span(g.value()));
    }
}
