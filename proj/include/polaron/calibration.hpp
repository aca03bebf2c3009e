#pragma once

#include "polaron/bounds.hpp"
#include "polaron/lambda_functional.hpp"
#include "polaron/localization.hpp"
#include "polaron/registry.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace polaron {

struct LPerSweepSpec {
    int points = 1000;
    double m_lo = 0.3, m_hi = 10.0;     // log-uniform
    double ell_lo = 0.5, ell_hi = 4.0;  // log-uniform
    double q_lo = 0.1, q_hi = 100.0;    // Q_μ² ℓ², log-uniform
    int k_radius = 3;                   // lattice components of k1 and k̂ in [-r, r]
    int max_extra = 3;                  // number of k̂ momenta, drawn from 0..max_extra
    std::uint64_t seed = 1;
};

/// Random (m, μ, ℓ, k1, k̂) with |L^per - L| filled in.
std::vector<LPerSample> lper_sweep(const LPerSweepSpec& spec);

struct CalibrationConfig {
    std::string sweep = "default";  // "default" or "quick"
    long c_t_nmax = 10000;
    SupSearchConfig search;
    double m_lo = 0.3, m_hi = 0.45, m_tol = 1e-3;
    std::vector<double> gap_masses{1.0, 3.0};
    std::vector<long> gap_ns{100, 1000, 10000};
    double nu = 0.5;  // κ = c_T ν (1 - Λ(m))
    TildeSearchConfig tilde;
    LPerSweepSpec lper;
    PartitionSpec partition;
    int jobs = 1;

    /// Preset sweeps: "default" as above, "quick" with coarser searches and N ∈ {100, 1000}.
    static CalibrationConfig preset(const std::string& name);
};

struct CalibrationResult {
    ConstantsRegistry registry;
    CriticalMassResult critical;
    std::map<double, LambdaResult> lambdas;  // Λ(m) for the gap masses
    std::vector<GapSample> gaps;
    std::vector<SweepRow> gap_rows;
    std::vector<LPerSample> lper;
    PartitionReport partition;
};

/// Runs every sweep and assembles the registry. Progress lines go to `log` when given.
CalibrationResult calibrate(const CalibrationConfig& cfg, std::ostream* log = nullptr);

/// Theorem constant from consistency with the unconfined bound and the IMS term, see calibrate().
double fit_theorem_const(double m_star_star, double c_eta);

}  // namespace polaron
