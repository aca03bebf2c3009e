#pragma once

#include <functional>
#include <ostream>
#include <vector>

namespace polaron {

// Partition of unity on B = (0, L)³ subordinate to the cubes B_i = (0, ℓ)³ + z_i.
// Grid points sit at integer multiples of h = ℓ / grid, so every cube face is a grid plane.

struct PartitionSpec {
    double L = 2.0;
    double ell = 1.0;
    double epsilon = 0.125;
    int grid = 64;  // points per ℓ
    /// Radial bump profile η(r) on [0, ε); zero beyond. Empty means exp(-1/(1-(r/ε)²)).
    std::function<double(double)> bump;
    /// One-dimensional factor v of V(x) = v(x₁)v(x₂)v(x₃), in units of ℓ. Empty means a
    /// C^∞ step that is 1 on [-ε, 1+ε] and 0 outside [-2ε, 1+2ε].
    std::function<double(double)> v_profile;
    int jobs = 1;

    int cells_per_axis() const;
    void validate() const;
};

struct PartitionReport {
    int cells_per_axis = 0;
    double h = 0.0;
    double closure_error = 0.0;  // max |Σ J_i² - 1| over grid points of [0, L]³
    double core_error = 0.0;     // max |J_i - 1| over ℓ(ε, 1-ε)³ + z_i
    double support_leak = 0.0;   // max J_i outside B_i + B_{ℓε}(0)
    double c_eta = 0.0;          // max_{i,x} |∇J_i|² ℓ²
    std::vector<double> c_eta_cell;  // per-cube maximum of |∇J_i|² ℓ²
    double max_grad_sum = 0.0;   // max_x Σ_i |∇J_i(x)|²
};

PartitionReport build_partition(const PartitionSpec& spec);

/// J_i at a grid point; indices in units of h, cell indices in [0, L/ℓ)³.
/// Throws DomainError when no cube reaches the point.
double partition_value(const PartitionSpec& spec, const int cell[3], const long point[3]);

/// CSV slice x, y, J, dJ/dx, dJ/dy of J_i on the plane z = k·h.
void write_partition_slice_csv(std::ostream& os, const PartitionSpec& spec, const int cell[3], long k);

struct VPartitionReport {
    double closure_error = 0.0;  // max |V² + Ṽ² - 1|
    double w_inf = 0.0;          // ‖W‖_∞
    double w_inf_ell2 = 0.0;     // ‖W‖_∞ ℓ²
    double supp_w = 0.0;         // grid measure of {W > 0}
    double supp_w_ell3 = 0.0;    // supp_w / ℓ³
    double max_grad_vtilde = 0.0;
    bool finite = true;          // every gradient on the grid is finite
};

/// V_i, Ṽ_i = √(1 - V_i²) and W_i = ½(|∇V_i|² + |∇Ṽ_i|²) for one cube; all cubes are translates.
VPartitionReport build_v_partition(const PartitionSpec& spec);

struct ImsOverlap {
    double bound = 0.0;     // 8 c_η / ℓ²
    double measured = 0.0;  // max_x Σ_i |∇J_i(x)|²
    double c_eta = 0.0;
};

ImsOverlap ims_overlap_bound(const PartitionSpec& spec);

}  // namespace polaron
