#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace polaron {

/// V sampled at the cell midpoints ((i + ½) L / M, ...) of an M³ grid on (0, L)³.
struct PotentialGrid {
    double L = 1.0;
    int m = 32;
    std::vector<double> values;  // index (i * m + j) * m + k

    double& at(int i, int j, int k) { return values[(static_cast<std::size_t>(i) * m + j) * m + k]; }
    double at(int i, int j, int k) const { return values[(static_cast<std::size_t>(i) * m + j) * m + k]; }
    double cell_volume() const { return std::pow(L / m, 3); }
    /// ∫ |V|^p by the midpoint rule.
    double integral_abs_pow(double p) const;
    void validate(bool require_nonpositive) const;

    static PotentialGrid constant(double L, int m, double c);
};

struct BumpSpec {
    double L = 1.0;
    int m = 32;
    int bumps = 3;
    double depth = 50.0;      // largest bump depth
    double width_min = 0.05;  // widths relative to L
    double width_max = 0.2;
    std::uint64_t seed = 1;
};

/// Smooth V <= 0: a sum of negative Gaussian bumps with random centres, widths and depths.
PotentialGrid random_potential(const BumpSpec& spec);

/// Lowest `basis_size` sine modes in order of |n|², ties broken lexicographically.
std::vector<std::array<int, 3>> sine_basis(int basis_size);

struct GalerkinResult {
    std::vector<double> eigenvalues;  // ascending Rayleigh-Ritz values of -Δ_L + V
    int basis_size = 0;
    double top_basis_level = 0.0;  // largest π²|n|²/L² in the basis
};

GalerkinResult galerkin_spectrum(const PotentialGrid& v, int basis_size);

}  // namespace polaron
