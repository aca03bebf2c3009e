#pragma once

#include "polaron/galerkin.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

namespace polaron {

struct LtGap {
    double gap = 0.0;    // E_N - E^V_N for -Δ_L, Rayleigh-Ritz for the perturbed sum
    double rhs = 0.0;    // ∫ (N^{1/3}/L |V|² + |V|^{5/2} + N/L³ |V|)
    double ratio = 0.0;  // gap / rhs, 0 when rhs = 0
    double e_free = 0.0;
    double e_pert = 0.0;
};

LtGap lt_gap_check(const PotentialGrid& v, long n, int basis_size);

struct ThmA3 {
    double lhs = 0.0;  // -tr(-Δ+V-μ)_- + tr(-Δ-μ)_- - ∫ρ₀V
    double rhs_integral = 0.0;  // ∫ (μ^{1/2}|V|² + |V|^{5/2} + μ|V|/L)
    double trace_pert = 0.0;    // tr(-Δ+V-μ)_- from the negative Rayleigh-Ritz values
    double trace_free = 0.0;
    double rho0_v = 0.0;
    int basis_size = 0;
};

/// The perturbed trace is a Rayleigh-Ritz lower bound; compare two basis sizes to gauge truncation.
ThmA3 thm_a3_check(const PotentialGrid& v, double mu, int basis_size);

/// Q on the span of sine modes: every level <= μ plus a slice above.
struct FiniteRankPerturbation {
    std::vector<std::array<int, 3>> basis;
    Eigen::MatrixXd q;

    /// Throws PreconditionError unless -Π⁻ <= Q <= 1 - Π⁻ and the basis holds every level <= μ.
    void validate(double mu, double L, double tol = 1e-12) const;
};

struct AdmissibleQSpec {
    double mu = 100.0;
    double L = 1.0;
    int extra = 20;  // modes above μ
    std::uint64_t seed = 1;
};

/// Random symmetric matrix around Π⁻, eigenvalues clipped to [0, 1], minus Π⁻.
FiniteRankPerturbation random_admissible_q(const AdmissibleQSpec& spec);

struct ThmA1Config {
    double k_tilde = 1.0;
    double eta = 1.0;
    int grid = 32;
};

struct ThmA1 {
    double lhs = 0.0;           // tr(-Δ-μ)Q
    double rhs_integral = 0.0;  // ∫ S((|ρ_Q| - η μ/L)_+), without the factor K̃
    double lemma_a2_lhs = 0.0;  // tr(|-Δ-μ| Q²)
    bool lemma_a2_holds = false;
    bool theorem_holds = false;  // lhs >= K̃ rhs_integral
};

ThmA1 thm_a1_check(const FiniteRankPerturbation& q, double mu, double L, const ThmA1Config& cfg = {});

}  // namespace polaron
