#pragma once

#include "polaron/kernels.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace polaron {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    unsigned max_panels = 200;  // per adaptive level
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
};

/// ∫_{R³} λ dt̃ for the given arguments.
IntegralResult integrate_lambda(const LambdaArgs& args, const QuadratureConfig& cfg = {});

/// ∫_{R³} λ(t̃)·w(|t̃ - AK|) dt̃. `breaks` lists radii where w is not smooth.
IntegralResult integrate_lambda_weighted(const LambdaArgs& args,
                                         const std::function<double(double)>& w,
                                         const std::vector<double>& breaks,
                                         const QuadratureConfig& cfg = {});

/// Which scale is fixed to 1 during the supremum search.
enum class Gauge { s_unit, q_unit };

struct SupSearchConfig {
    Gauge gauge = Gauge::s_unit;
    int n_q = 8;        // Q grid (s_unit) or |s̃| grid (q_unit)
    int n_k = 13;       // |K| grid
    int n_angle = 7;    // angle(s̃, K) grid on [0, π]
    double grid_lo = 1e-3;
    double grid_hi = 1e3;
    int refine_starts = 5;
    int refine_iterations = 300;
    double refine_size = 1e-4;  // simplex size at which refinement stops
    double quad_tol = 1e-8;
    double grid_quad_tol = 1e-4;
    std::optional<double> a_const;  // default 1/(m+2)
    int jobs = 1;

    void validate() const;
    double a_for(double m) const { return a_const ? *a_const : default_a_const(m); }
};

struct LambdaArgmax {
    double s_abs = 0.0;
    double k_abs = 0.0;
    double angle = 0.0;
    double q_mu = 0.0;
};

struct LambdaResult {
    double value = 0.0;
    LambdaArgmax argmax;
    double err_quad = 0.0;
    double err_search = 0.0;
};

/// Builds λ arguments (δ = 0) from search coordinates: s̃ = |s̃| e_z, K in the x-z plane.
LambdaArgs lambda_args_at(double m, double a_const, const LambdaArgmax& p);

LambdaResult lambda_of_m(double m, const SupSearchConfig& cfg);

struct CriticalMassResult {
    double root = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::vector<std::pair<double, double>> evaluations;  // (m, Λ(m)) in call order
};

CriticalMassResult critical_mass(const SupSearchConfig& cfg, double m_lo, double m_hi, double m_tol = 1e-3);

struct LatticeSumConfig {
    long max_points = 400000;   // lattice points inside the exact-sum window
    double window_scale = 4.0;  // window radius in units of the kernel scale
    double rel_tol = 1e-3;      // accepted relative error of the far-field treatment
    QuadratureConfig quad{1e-7, 200};
};

struct LatticeSumResult {
    double value = 0.0;
    double error = 0.0;
    double window_radius = 0.0;
    long points = 0;
    double far_field = 0.0;
    double envelope_tail_bound = 0.0;  // rigorous bound of Σ outside the window for λ envelope
};

/// (2π/ℓ)³ Σ_{t̃ ∈ 𝕃 + AK} λ(t̃). Requires δ > 0.
LatticeSumResult lattice_lambda_sum(const LambdaArgs& args, const LatticeSumConfig& cfg = {});

struct TildeSearchConfig {
    std::vector<double> delta_factors{0.25, 0.5, 1.0, 2.0, 4.0};  // δ = factor·N^{4/9}
    std::vector<double> s_over_q{0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
    std::vector<double> q_factors{1.0, 2.0};
    int refine_starts = 2;
    int refine_iterations = 120;
    LatticeSumConfig sum{100000, 4.0, 1e-2, {1e-6, 200}};
    SupSearchConfig continuum;
    int jobs = 1;
};

struct LambdaTildeResult {
    double value = 0.0;
    double delta = 0.0;
    double q_min = 0.0;
    MomentumVec s_tilde = MomentumVec::Zero();
    MomentumVec k_vec = MomentumVec::Zero();
    double q_mu = 0.0;
    double err_quad = 0.0;
    double err_search = 0.0;
    std::vector<std::pair<double, double>> per_delta;  // (δ, sup value)
    double lambda = 0.0;              // Λ(m): every sup is at least this |s̃| → ∞ limit
    bool attained_at_infinity = false;  // no finite configuration beat the limit
};

/// inf over δ of sup over s̃, K and Q_μ² >= (c_T - κ)N^{5/3}ℓ⁻² of the lattice sum.
/// A precomputed Λ(m) may be passed to skip the continuum search.
LambdaTildeResult lambda_tilde(double m, double kappa, long n, double ell, double c_t,
                               const TildeSearchConfig& cfg, const LambdaResult* continuum = nullptr);

struct GapSample {
    double m = 1.0;
    double kappa = 0.0;
    long n = 1;
    double c_t = 1.0;
    double lambda_tilde = 0.0;
    double lambda = 0.0;
    double error = 0.0;  // combined numerical uncertainty of the gap
};

/// Smallest c with Λ̃ - Λ <= c·m⁻¹(1-κ/c_T)⁻² N^{-2/9} on every sample, gaps taken at
/// their upper error bar.
double fit_c_lambda(const std::vector<GapSample>& sweep);

struct SweepRow {
    double m = 0.0;
    double kappa = 0.0;
    long n = 0;
    double ell = 0.0;
    double delta = 0.0;
    double value = 0.0;
    double err_quad = 0.0;
    double err_search = 0.0;
};

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace polaron
