#include "cea/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cea {

RealVector spectrum(const QuantumEffect& a) { return spectrum_of(a.value()); }

double commutator_norm(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw Error("commutator: dimension mismatch");
    return max_abs_diff(a.matrix() * b.matrix(), b.matrix() * a.matrix());
}

double commutator_norm(const QuantumEffect& a, const QuantumEffect& b) { return commutator_norm(a.value(), b.value()); }

namespace {

using Columns = std::vector<std::vector<Complex>>;

ComplexMatrix columns_to_matrix(const Columns& cols, std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
    return m;
}

// Projection Σ v v† over the given columns.
HermitianMatrix projector(const Columns& cols, std::size_t n) {
    ComplexMatrix p(n);
    for (const auto& v : cols)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) p(r, c) += v[r] * std::conj(v[c]);
    return HermitianMatrix::hermitian_part(p);
}

// W† A W for W given as columns.
HermitianMatrix compress(const HermitianMatrix& a, const Columns& w) {
    const std::size_t r = w.size();
    const std::size_t n = a.dim();
    ComplexMatrix out(r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Complex s = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                if (w[i][p] == Complex(0.0)) continue;
                Complex row = 0.0;
                for (std::size_t q = 0; q < n; ++q) row += a(p, q) * w[j][q];
                s += std::conj(w[i][p]) * row;
            }
            out(i, j) = s;
        }
    return HermitianMatrix::hermitian_part(out);
}

void require_family(const std::vector<QuantumEffect>& gens, const char* what) {
    if (gens.empty()) throw Error(std::string(what) + ": empty generator list");
    for (const auto& g : gens) require_same_algebra(gens.front().algebra(), g.algebra());
}

double spectral_margin(const RealVector& ev) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : ev) m = std::min({m, x, 1.0 - x});
    return m;
}

}  // namespace

StrongDecomposition strong_decomposition(const std::vector<QuantumEffect>& gens) {
    require_family(gens, "strong decomposition");
    const QuantumAlgebra& alg = gens.front().algebra();
    const double tol = alg.tolerance();
    const std::size_t n = alg.size();
    const std::size_t m = gens.size();

    if (!linearly_independent(gens)) throw Error("strong decomposition: generators are linearly dependent");
    HermitianMatrix total = alg.zero();
    for (const auto& g : gens) total += g.value();
    if (!alg.equal(total, alg.unit())) throw Error("strong decomposition: generators do not sum to I");
    for (std::size_t i = 0; i < m; ++i)
        if (!is_strong_effect(gens[i]))
            throw Error("strong decomposition: generator " + std::to_string(i + 1) +
                        " is not strong (1 is not an eigenvalue)");
    if (m > n) throw Error("strong decomposition: more generators than the Hilbert-space dimension");

    StrongDecomposition out;
    HermitianMatrix q = alg.unit();
    for (const auto& g : gens) {
        const auto eig = hermitian_eig(g.value());
        Columns fixed;
        for (std::size_t k = 0; k < n; ++k)
            if (eig.eigenvalues[k] >= 1.0 - tol) fixed.push_back(eig.eigenvectors.column_copy(k));
        out.ranks.push_back(fixed.size());
        out.projections.push_back(projector(fixed, n));
        q -= out.projections.back();
    }
    out.complement = q;

    const ComplexMatrix& qm = q.matrix();
    HermitianMatrix resolution = q;
    for (std::size_t i = 0; i < m; ++i) {
        const ComplexMatrix& p = out.projections[i].matrix();
        const ComplexMatrix& a = gens[i].value().matrix();
        out.remainders.push_back(HermitianMatrix::hermitian_part(qm * a * qm));
        out.reconstruction_residual =
            std::max(out.reconstruction_residual, max_abs_diff(a, p + out.remainders.back().matrix()));
        out.projection_residual = std::max(out.projection_residual, max_abs_diff(p * p, p));
        resolution += out.projections[i];
        for (std::size_t k = 0; k < m; ++k) {
            if (k == i) continue;
            out.orthogonality_residual =
                std::max(out.orthogonality_residual, (p * out.projections[k].matrix()).max_abs());
            out.annihilation_residual =
                std::max(out.annihilation_residual, (gens[k].value().matrix() * p).max_abs());
        }
    }
    out.resolution_residual = max_abs_diff(resolution.matrix(), ComplexMatrix::identity(n));

    // Compress each remainder to range(Q); the kernel of Q would add spurious zeros.
    const auto qeig = hermitian_eig(q);
    Columns range;
    for (std::size_t k = 0; k < n; ++k)
        if (qeig.eigenvalues[k] > 0.5) range.push_back(qeig.eigenvectors.column_copy(k));
    out.complement_rank = range.size();
    if (!range.empty())
        for (const auto& b : out.remainders)
            out.remainder_margin = std::min(out.remainder_margin, spectral_margin(spectrum_of(compress(b, range))));

    for (std::size_t i = 0; i < m; ++i)
        if (out.ranks[i] == 0) throw Error("decomposition failed: projection " + std::to_string(i + 1) + " is zero");
    const double worst = std::max({out.reconstruction_residual, out.resolution_residual, out.orthogonality_residual,
                                   out.annihilation_residual, out.projection_residual});
    if (worst > tol) throw Error("decomposition failed: residual " + std::to_string(worst) + " exceeds tolerance");
    if (out.remainder_margin <= tol)
        throw Error("decomposition failed: remainder spectrum touches 0 or 1 on range(Q)");
    return out;
}

// ---------------------------------------------------------------------------

Observable<QuantumAlgebra> build_example6(const QuantumEffect& alpha, const QuantumEffect& beta) {
    require_same_algebra(alpha.algebra(), beta.algebra());
    const QuantumAlgebra& alg = alpha.algebra();
    const double tol = alg.tolerance();
    if (alg.size() != 2) throw Error("build_example6: effects must be 2x2");
    if (commutator_norm(alpha, beta) <= tol) throw Error("build_example6: alpha and beta commute");
    if (spectrum(alpha).front() <= tol) throw Error("build_example6: 0 is an eigenvalue of alpha");
    if (spectrum(beta).front() <= tol) throw Error("build_example6: 0 is an eigenvalue of beta");

    std::vector<QuantumEffect> effects{
        QuantumEffect(alg, alpha.value() * 0.5),
        QuantumEffect(alg, beta.value() * 0.5),
        QuantumEffect(alg, alg.unit() - alpha.value() * 0.5 - beta.value() * 0.5),
    };
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j)
            if (commutator_norm(effects[i], effects[j]) <= tol)
                throw Error("build_example6: outcomes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                            " commute");
        if (spectral_margin(spectrum(effects[i])) <= tol)
            throw Error("build_example6: outcome " + std::to_string(i + 1) + " has 0 or 1 in its spectrum");
    }
    if (!linearly_independent(effects)) throw Error("build_example6: outcomes are linearly dependent");
    return validate_observable(alg, effects);
}

Example7 build_example7(const QuantumEffect& b, const QuantumEffect& c, const QuantumEffect& d) {
    require_same_algebra(b.algebra(), c.algebra());
    require_same_algebra(b.algebra(), d.algebra());
    const QuantumAlgebra& small = b.algebra();
    const double tol = small.tolerance();
    if (small.size() != 2) throw Error("build_example7: blocks must be 2x2");
    if (!small.equal(b.value() + c.value() + d.value(), small.unit())) throw Error("build_example7: b + c + d != I");
    const char* names[] = {"b", "c", "d"};
    const QuantumEffect* blocks[] = {&b, &c, &d};
    for (std::size_t k = 0; k < 3; ++k)
        if (spectral_margin(spectrum(*blocks[k])) <= tol)
            throw Error(std::string("build_example7: 0 or 1 is an eigenvalue of ") + names[k]);

    const QuantumAlgebra big(5, tol);
    Example7 out;
    for (std::size_t k = 0; k < 3; ++k) {
        ComplexMatrix m(5);
        m(k, k) = 1.0;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t s = 0; s < 2; ++s) m(3 + r, 3 + s) = blocks[k]->value()(r, s);
        out.generators.emplace_back(big, HermitianMatrix(m));
    }
    out.commutative = true;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (commutator_norm(out.generators[i], out.generators[j]) > tol) out.commutative = false;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Splits the span of `w` into joint eigenspaces of family[k..].
void refine_block(const std::vector<HermitianMatrix>& family, std::size_t k, const Columns& w, double tol,
                  Columns& out) {
    if (w.size() == 1 || k == family.size()) {
        out.insert(out.end(), w.begin(), w.end());
        return;
    }
    const auto eig = hermitian_eig(compress(family[k], w));
    const std::size_t n = w.front().size();
    Columns rotated(w.size(), std::vector<Complex>(n));
    for (std::size_t c = 0; c < w.size(); ++c)
        for (std::size_t j = 0; j < w.size(); ++j)
            for (std::size_t r = 0; r < n; ++r) rotated[c][r] += w[j][r] * eig.eigenvectors(j, c);
    std::size_t start = 0;
    for (std::size_t c = 1; c <= w.size(); ++c) {
        if (c < w.size() && eig.eigenvalues[c] - eig.eigenvalues[c - 1] <= tol) continue;
        Columns group(rotated.begin() + static_cast<std::ptrdiff_t>(start), rotated.begin() + static_cast<std::ptrdiff_t>(c));
        refine_block(family, k + 1, group, tol, out);
        start = c;
    }
}

}  // namespace

SimultaneousDiagonalization simultaneous_diagonalize(const std::vector<HermitianMatrix>& family, double tol,
                                                     std::uint64_t seed) {
    if (family.empty()) throw Error("simultaneous diagonalization of an empty family");
    const std::size_t n = family.front().dim();
    std::mt19937_64 rng(seed);
    HermitianMatrix mix = HermitianMatrix::zero(n);
    for (const auto& a : family) {
        // Weights in [1, 2) from the top 53 bits; avoids distribution differences across libraries.
        const double t = 1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
        mix += a * t;
    }
    const auto eig = hermitian_eig(mix);

    Columns cols;
    std::size_t start = 0;
    for (std::size_t c = 1; c <= n; ++c) {
        if (c < n && eig.eigenvalues[c] - eig.eigenvalues[c - 1] <= tol) continue;
        Columns cluster;
        for (std::size_t j = start; j < c; ++j) cluster.push_back(eig.eigenvectors.column_copy(j));
        refine_block(family, 0, cluster, tol, cols);
        start = c;
    }

    SimultaneousDiagonalization out;
    out.basis = columns_to_matrix(cols, n);
    const ComplexMatrix vh = out.basis.adjoint();
    for (const auto& a : family) {
        const ComplexMatrix d = vh * a.matrix() * out.basis;
        RealVector diag(n);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = d(i, i).real();
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) out.off_diagonal_residual = std::max(out.off_diagonal_residual, std::abs(d(i, j)));
        }
        out.diagonals.push_back(std::move(diag));
    }
    return out;
}

namespace {

// Next m-subset of {0..n-1} in lexicographic order; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t m = idx.size();
    for (std::size_t i = m; i-- > 0;) {
        if (idx[i] < n - m + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

constexpr std::size_t kMaxSubsets = 200000;

}  // namespace

StrongifyResult strongify_commutative(const std::vector<QuantumEffect>& gens, std::uint64_t seed) {
    require_family(gens, "strongify");
    const QuantumAlgebra& alg = gens.front().algebra();
    const double tol = alg.tolerance();
    const std::size_t n = alg.size();
    const std::size_t m = gens.size();

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (commutator_norm(gens[i], gens[j]) > tol)
                throw Error("strongify: generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                            " do not commute");
    if (!linearly_independent(gens)) throw Error("strongify: generators are linearly dependent");
    Subalgebra<QuantumAlgebra>::from_generators(alg, gens);  // throws unless I is in the span

    std::vector<HermitianMatrix> family;
    for (const auto& g : gens) family.push_back(g.value());
    StrongifyResult result;
    result.diagonal_form = simultaneous_diagonalize(family, tol, seed);
    if (result.diagonal_form.off_diagonal_residual > tol)
        throw Error("strongify: diagonalization failed (off-diagonal residual " +
                    std::to_string(result.diagonal_form.off_diagonal_residual) + ")");

    // Row j of `coords` holds the j-th diagonal entry of each generator.
    RealMatrix coords(n, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) coords(j, i) = result.diagonal_form.diagonals[i][j];

    std::vector<std::size_t> subset(m);
    for (std::size_t i = 0; i < m; ++i) subset[i] = i;
    do {
        if (++result.subsets_tried > kMaxSubsets) {
            result.detail = "coordinate search limit reached";
            break;
        }
        RealMatrix square(m, m);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) square(r, c) = coords(subset[r], c);
        if (matrix_rank(square, tol) < m) continue;

        std::vector<RealVector> candidates;
        bool valid = true;
        for (std::size_t i = 0; i < m && valid; ++i) {
            RealVector e(m, 0.0);
            e[i] = 1.0;
            auto sol = solve(square, e, tol);
            if (!sol) {
                valid = false;
                break;
            }
            RealVector b = coords.multiply(sol->x);
            for (double& x : b) {
                if (x < -tol || x > 1.0 + tol) valid = false;
                x = std::clamp(x, 0.0, 1.0);
            }
            for (std::size_t r = 0; r < m; ++r) b[subset[r]] = r == i ? 1.0 : 0.0;
            candidates.push_back(std::move(b));
        }
        if (!valid) continue;

        const ComplexMatrix& v = result.diagonal_form.basis;
        std::vector<QuantumEffect> out;
        try {
            for (const auto& b : candidates)
                out.emplace_back(alg, HermitianMatrix::hermitian_part(v * ComplexMatrix::diagonal(b) * v.adjoint()));
        } catch (const Error&) {
            continue;
        }
        HermitianMatrix total = alg.zero();
        for (const auto& e : out) total += e.value();
        const bool ok = alg.equal(total, alg.unit()) && linearly_independent(out) &&
                        std::all_of(out.begin(), out.end(), [](const QuantumEffect& e) { return is_strong_effect(e); });
        if (!ok) continue;
        result.generators = std::move(out);
        result.coordinates = subset;
        return result;
    } while (next_combination(subset, n));

    result.proof_gap = true;
    if (result.detail.empty())
        result.detail = "no choice of " + std::to_string(m) + " eigenbasis coordinates yields effects";
    return result;
}

}  // namespace cea
