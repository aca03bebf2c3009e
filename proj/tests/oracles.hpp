#pragma once

// Independent reference computations shared by the unit tests and the acceptance runner.

#include "polaron/amplitude.hpp"
#include "polaron/bounds.hpp"
#include "polaron/kernels.hpp"
#include "polaron/registry.hpp"

#include <cstdint>
#include <random>

namespace oracle {

/// Radial cutoff τ̂_k(x) = [c_k j_{k+1}(a x) / (a x)^{k+1}]², the Fourier transform of the
/// self-convolution of (1 - r²)^k on a ball. τ̂(0) = 1, τ̂ >= 0, and a is fixed by ∫_0^∞ τ̂ = 1.
class Mollifier {
public:
    explicit Mollifier(int k);  // k = 1 or 2
    double operator()(double x) const;
    double scale() const { return a_; }

private:
    double phi(double y) const;
    int k_;
    double c_;
    double a_;
};

struct BruteLPer {
    double value = 0.0;
    double spread = 0.0;  // change of the extrapolated value when dropping the largest R
};

/// L^per from its defining limit with cutoff τ̂: 8πmR/(m+1) - (2π/ℓ)³ Σ_p τ̂(p/R)/(((m+1)/2m)p² + γ)
/// over p ∈ (2π/ℓ)Z³ + m k1/(m+1), extrapolated polynomially in 1/R.
/// The Gaussian window ρ (in lattice units) splits the sum into a finite lattice part and a
/// remainder that is integrated radially.
BruteLPer lper_bruteforce(double m, double mu, double ell, const polaron::MomentumVec& k1, double khat_sq,
                          const Mollifier& tau, double rho_units = 2.5);

/// f̂_∞(z) from the radial Fourier integral (2π)^{-3/2} (4π/|z|) ∫ t sin(t|z|) f(t) dt, by GSL QAWF.
double fhat_qawf(double m, double gamma, double r);

struct McEstimate {
    double mean = 0.0;
    double sigma = 0.0;  // standard error
};

/// ∫ λ dt̃ by importance sampling radially around AK with density ∝ 1/(1+r)².
McEstimate lambda_integral_mc(const polaron::LambdaArgs& args, long samples, std::uint64_t seed);

/// ‖G_ν ξ‖² at N = 1 for the Gaussian ξ̂(k) = exp(-k²/(2w²)) as a 6-dimensional integral over
/// (k0, k1), sampled with a Gaussian in s = k0 + k1 and a heavy-tailed relative momentum.
McEstimate g_norm_sq_mc(double w, double nu, double m, long samples, std::uint64_t seed);

/// Fixed registry for arithmetic checks.
polaron::ConstantsRegistry pinned_registry();

/// Σ_{i<=n} |n_i|² over the Dirichlet labels n ∈ N³ in ascending order, by sorting a cube.
long dirichlet_sum_int(long n);

struct HandBound {
    double bound = 0.0;
    double penalty = 0.0;
    double kinetic = 0.0;
    double n0 = 0.0;
};

/// The confined and main lower bounds written out term by term from their definitions.
HandBound hand_bound_confined(const polaron::BoundInputs& in, const polaron::ConstantsRegistry& reg);
HandBound hand_bound_main(const polaron::BoundInputs& in, const polaron::ConstantsRegistry& reg);

/// Five input sets each for the confined (i = 0..4) and the main bound.
polaron::BoundInputs pinned_confined_inputs(int i);
polaron::BoundInputs pinned_main_inputs(int i);

/// measure · Σ |ξ̂|² L(k1, k̂) with the continuum L.
double l_continuum_sum(const polaron::SingularAmplitude& xi, const polaron::ModelParams& p);

}  // namespace oracle
