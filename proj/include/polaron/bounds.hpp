#pragma once

#include "polaron/registry.hpp"
#include "polaron/torus_forms.hpp"

#include <string>
#include <vector>

namespace polaron {

/// min over 2 < N <= n_max of Q²_min(N) ℓ² / N^{5/3}, with Q²_min(N) = ½ Σ of the N - 1 smallest
/// squared norms of distinct points of (2π/ℓ)Z³.
double enumerate_c_t(long n_max);

/// ½ Σ of the n - 1 smallest |q|², q ∈ 2πZ³ distinct (ℓ = 1).
double min_q_sq(long n);

struct LPerSample {
    double m = 1.0;
    double mu = 1.0;
    double ell = 1.0;
    MomentumVec k1 = MomentumVec::Zero();
    double khat_sq = 0.0;
    double diff = 0.0;  // |L^per - L|
};

/// Q_μ² = ½ k̂² + μ
double q_mu_sq(const LPerSample& s);

/// Least c with |L^per - L| Q_μ² ℓ³ <= c on every sample.
double fit_c_l_prime(const std::vector<LPerSample>& sweep);

/// ((1 - κ/c_T - Λ) m (1 - κ/c_T)² / c_Λ)^{-9/2}
double n_zero(double m, double kappa, double lambda_m, const ConstantsRegistry& reg);

/// Lower bound on F/‖ψ‖² without confinement.
double bound_unconfined(double m, double alpha, double lambda_m);

/// κ = c_T ν (1 - Λ(m)).
double default_kappa(double lambda_m, const ConstantsRegistry& reg, double nu = 0.5);

struct BoundInputs {
    double m = 1.0;
    double kappa = 0.0;
    long n = 1;
    double ell = 1.0;   // confined bound
    double lbig = 1.0;  // main bound
    double alpha = 0.0;
    double lambda_m = 0.0;
};

struct BoundReport {
    std::string kind;  // "confined" or "main"
    BoundInputs in;
    std::string registry_hash;
    // intermediate values
    double ratio = 0.0;        // κ / c_T
    double margin = 0.0;       // 1 - κ/c_T - Λ
    double n0 = 0.0;
    double c_l = 0.0;
    double alpha_neg = 0.0;    // [α - c_L/ℓ]_- (confined) or α_- (main)
    double kinetic = 0.0;      // κ N^{5/3} ℓ⁻² (confined) or E^D_N (main)
    double penalty = 0.0;      // subtracted interaction term
    double density_term = 0.0; // const ρ̄^{2/3}/(1-Λ)^{9/2} (main)
    double mu_star = 0.0;      // μ of the a priori choice (confined)
    double rho_bar = 0.0;
    double e_n = 0.0;          // e_N (main)
    double bound = 0.0;

    std::string to_json() const;
};

/// a priori spectral shift: -κN^{5/3}ℓ⁻² + (1/4π⁴)((m+1)/2m)(1-κ/c_T)²[α - ((m+1)/2m) c_L'(c_T-κ)⁻¹N^{-5/3}ℓ⁻¹]²_-
/// / (1 - κ/c_T - Λ - c_Λ m⁻¹(1-κ/c_T)⁻² N^{-2/9})²
double mu_apriori(const BoundInputs& in, const ConstantsRegistry& reg);

/// Throws ConditionError when 1 - κ/c_T <= Λ or N <= N₀; the latter names bound_unconfined
/// as the fallback.
BoundReport bound_confined(const BoundInputs& in, const ConstantsRegistry& reg);

/// E^D_N - const (ρ̄^{2/3}/(1-Λ)^{9/2} + α_-²/(1-Λ)²) with const from the registry.
BoundReport bound_main(const BoundInputs& in, const ConstantsRegistry& reg);

struct EllChoice {
    long cells = 1;       // L / ℓ
    double ell = 0.0;
    double scaled = 0.0;  // ℓ ρ̄^{1/3}
};

/// ℓ with L/ℓ integral and ℓ ρ̄^{1/3} in [1/2, 2]; PreconditionError when L ρ̄^{1/3} < 1/2.
EllChoice select_ell(double lbig, double rho_bar);

}  // namespace polaron
