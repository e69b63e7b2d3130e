#pragma once
// Hilbert-space effects: spectra, the projection decomposition of strong
// generator families, the 2×2 / 5×5 noncommutative constructions, and the
// commutative-to-strong regeneration procedure.

#include "cea/observables.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace cea {

RealVector spectrum(const QuantumEffect& a);

/// max-norm of ab − ba.
double commutator_norm(const HermitianMatrix& a, const HermitianMatrix& b);
double commutator_norm(const QuantumEffect& a, const QuantumEffect& b);

/// Generators a_i = P_i + Q a_i Q with P_i the eigenvalue-1 projection of a_i
/// and Q = I − Σ P_i.
struct StrongDecomposition {
    std::vector<HermitianMatrix> projections;
    std::vector<std::size_t> ranks;
    HermitianMatrix complement;  // Q
    std::size_t complement_rank = 0;
    std::vector<HermitianMatrix> remainders;  // Q a_i Q

    double reconstruction_residual = 0.0;  // max_i ‖a_i − P_i − Q a_i Q‖_max
    double resolution_residual = 0.0;      // ‖Σ P_i + Q − I‖_max
    double orthogonality_residual = 0.0;   // max_{i≠j} ‖P_i P_j‖_max
    double annihilation_residual = 0.0;    // max_{k≠i} ‖a_k P_i‖_max
    double projection_residual = 0.0;      // max_i ‖P_i² − P_i‖_max
    // Distance of σ(Q a_i Q restricted to range(Q)) from {0, 1}, minimized over i.
    // Infinite when Q = 0.
    double remainder_margin = std::numeric_limits<double>::infinity();
};

StrongDecomposition strong_decomposition(const std::vector<QuantumEffect>& generators);

/// {α/2, β/2, I − α/2 − β/2} for noncommuting 2×2 effects α, β with 0 ∉ σ(α), σ(β).
Observable<QuantumAlgebra> build_example6(const QuantumEffect& alpha, const QuantumEffect& beta);

struct Example7 {
    std::vector<QuantumEffect> generators;  // three 5×5 effects
    bool commutative = false;
};

/// Embeds 2×2 effects b + c + d = I (0, 1 ∉ spectra) as the trailing blocks of
/// three 5×5 strong generators with unit diagonal slots 1, 2, 3.
Example7 build_example7(const QuantumEffect& b, const QuantumEffect& c, const QuantumEffect& d);

/// Common eigenbasis of a commuting family: columns of `basis`, and each
/// member's diagonal in that basis.
struct SimultaneousDiagonalization {
    ComplexMatrix basis;
    std::vector<RealVector> diagonals;
    double off_diagonal_residual = 0.0;
};

SimultaneousDiagonalization simultaneous_diagonalize(const std::vector<HermitianMatrix>& family, double tol,
                                                     std::uint64_t seed);

struct StrongifyResult {
    bool proof_gap = false;
    std::vector<QuantumEffect> generators;  // empty on a proof gap
    SimultaneousDiagonalization diagonal_form;
    std::vector<std::size_t> coordinates;  // eigenbasis positions pinned to δ_i
    std::size_t subsets_tried = 0;
    std::string detail;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Rewrites the generators of a commutative CSEA as candidate strong
/// generators J⁻¹(δ_1..δ_m). Candidates are verified; when no coordinate choice
/// yields effects, the result is flagged as a proof gap.
StrongifyResult strongify_commutative(const std::vector<QuantumEffect>& generators,
                                      std::uint64_t seed = kDefaultSeed);

}  // namespace cea
