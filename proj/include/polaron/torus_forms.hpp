#pragma once

#include "polaron/amplitude.hpp"
#include "polaron/kernels.hpp"

#include <complex>
#include <span>

namespace polaron {

struct LPeriodicResult {
    double value = 0.0;       // L^per
    double continuum = 0.0;   // L
    double correction = 0.0;  // L - L^per = (2π)^{3/2} Σ_{z≠0} cos(a·z) f̂_∞(z)
    double tail_bound = 0.0;  // certified bound on the omitted shells
    int shells = 0;           // sup-norm radius of the enumerated cube
};

/// L^per at first slot k1 and |k̂1|² = khat_sq. The z-sum runs over cube shells of ℓZ³
/// until the geometric tail bound drops below rel_tol times the accumulated magnitude.
LPeriodicResult l_periodic_detailed(const ModelParams& p, const MomentumVec& k1, double khat_sq,
                                    double rel_tol = 1e-14, int max_shells = 200);

/// kvec[0] is k1; the remaining entries form k̂1.
double l_periodic(const ModelParams& p, std::span<const MomentumVec> kvec);

/// Metadata collected over all L^per evaluations of one form evaluation.
struct LPeriodicStats {
    long evaluations = 0;
    double max_tail_bound = 0.0;
    int max_shells = 0;
};

struct TorusFormBreakdown {
    double alpha_term = 0.0;
    double t_dia = 0.0;
    double t_off = 0.0;
    double total = 0.0;
    double mu = 0.0;
    LPeriodicStats lper;
};

/// measure · Σ |ξ̂(k⃗)|² L^per(k⃗)
double t_dia_per(const SingularAmplitude& xi, const ModelParams& p, LPeriodicStats* stats = nullptr);

/// measure · (2π/ℓ)³ Σ_{k0,k⃗} a*(k0 + k_j, k̂_j) b(k0 + k_i, k̂_i) G_μ(k0, k⃗), particles i ≠ j
/// counted from 0. Every pairing of the two supports is enumerated.
std::complex<double> t_off_pair(const SingularAmplitude& a, const SingularAmplitude& b, int i, int j,
                                const ModelParams& p);

/// Off-diagonal form for independent ξ_1..ξ_N: -Σ_{i≠j} t_off_pair(ξ_j, ξ_i, i, j).
std::complex<double> t_off_tilde(std::span<const SingularAmplitude> xis, const ModelParams& p);

/// Fermionic off-diagonal form: t_off_tilde over ξ_i = (-1)^{i+1} ξ, divided by N.
std::complex<double> t_off_per_complex(const SingularAmplitude& xi, const ModelParams& p);
double t_off_per(const SingularAmplitude& xi, const ModelParams& p);

/// Diagonal form for independent ξ_1..ξ_N.
double t_dia_tilde(std::span<const SingularAmplitude> xis, const ModelParams& p);

/// α term (2m/(m+1)) α N ‖ξ‖², t_dia = N t_dia_per and t_off = N t_off_per, so that total
/// is the full singular form including its overall factor N.
TorusFormBreakdown t_alpha_per(const SingularAmplitude& xi, const ModelParams& p);

/// ‖G_ν ξ‖² through the reduced one-particle formula, lattice measure.
double g_norm_sq(const SingularAmplitude& xi, double nu, const ModelParams& p);

}  // namespace polaron
