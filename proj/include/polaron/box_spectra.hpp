#pragma once

#include "polaron/kernels.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace polaron {

// Dirichlet Laplacian -Δ_L on (0, L)³ with eigenfunctions
//   φ_n(x) = (2/L)^{3/2} Π_j sin(n_j π x_j / L),  n ∈ N³ (n_j >= 1),  eigenvalue π² |n|² / L².

struct DirichletLevel {
    double value = 0.0;  // p²
    long n_sq = 0;       // |n|²
    int multiplicity = 0;
    std::array<int, 3> representative{};
};

struct DirichletSpectrum {
    double L = 1.0;
    std::vector<DirichletLevel> levels;  // ascending; multiplicities add up to at least `count`

    /// The first `count` eigenvalues with multiplicity.
    std::vector<double> eigenvalues(long count) const;
};

/// Number of n ∈ N³ with |n|² = s, for s = 0..s_max.
std::vector<std::int64_t> n_sq_histogram(long s_max);

DirichletSpectrum dirichlet_levels(double L, long count);

struct LowestSum {
    double e_n = 0.0;       // e_N, the N-th eigenvalue of -Δ_L
    double laplacian = 0.0; // E_N = Σ_{i<=N} e_i for -Δ_L
    double half = 0.0;      // E^D_N for -½Δ, equal to E_N / 2
};

LowestSum sum_lowest(double L, long n);

/// Σ_{p² <= μ} |φ_p(x)|²
double rho0(const MomentumVec& x, double L, double mu);

/// Count of levels p² <= μ with multiplicity.
long level_count(double L, double mu);

/// |N³/2 ∩ B(R)| (open ball) or the closed ball.
std::int64_t half_lattice_ball_count(double r, bool closed);

struct ShellCount {
    std::int64_t count = 0;  // #{p : |p² - μ| < e}
    double value = 0.0;      // (2/L)³ count
};

ShellCount shell_count_f(double e, double mu, double L);

/// R(ρ) = ∫_0^∞ (√ρ - √f(e))_+² de, summed exactly over the steps of f.
double r_function(double rho, double mu, double L);

/// Φ(k) = L⁻³ Σ_q ((μ - q²)(|q - k|² - μ))^{-1/2} over q ∈ πZ³/L with q² < μ - √μ/L and
/// |q - k|² > μ + √μ/L.
double phi_sum(const MomentumVec& k, double mu, double L);

}  // namespace polaron
