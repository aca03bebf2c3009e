#pragma once

#include "polaron/kernels.hpp"

#include <functional>

namespace polaron {

/// Radial one-particle amplitude ξ̂(|k|) for N = 1.
struct RadialProfile {
    std::function<double(double)> f;
    double scale = 1.0;  // momentum scale, used to place quadrature break points

    static RadialProfile gaussian(double width);
};

struct RadialQuadConfig {
    double rel_tol = 1e-12;
    unsigned max_panels = 400;
};

/// ‖ξ‖² = 4π ∫ r² |ξ̂(r)|² dr
double radial_norm_sq(const RadialProfile& xi, const RadialQuadConfig& cfg = {});

/// ‖G_ν ξ‖² for N = 1 through the reduced one-particle formula.
double g_norm_sq_radial(const RadialProfile& xi, double nu, double m, const RadialQuadConfig& cfg = {});

/// ∫ |ξ̂(k)|² L(k) dk for N = 1.
double t_dia_continuum(const RadialProfile& xi, const ModelParams& p, const RadialQuadConfig& cfg = {});

struct RepSingResult {
    double left = 0.0;
    double right = 0.0;
    double residual = 0.0;
};

/// Both sides of the representation of the singular form through ∫_μ^∞ I(ν) dν at N = 1.
RepSingResult rep_sing_check(const RadialProfile& xi, const ModelParams& p, const RadialQuadConfig& cfg = {});

}  // namespace polaron
