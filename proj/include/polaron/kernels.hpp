#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <vector>

namespace polaron {

// Units: hbar = 1, gas particle mass 1. Momenta are inverse lengths.
using MomentumVec = Eigen::Vector3d;

struct ModelParams {
    double m = 1.0;      // impurity / fermion mass ratio
    double alpha = 0.0;  // coupling (inverse length)
    double mu = 1.0;     // spectral shift (energy)
    long n = 1;          // number of fermions
    double ell = 1.0;    // small box side
    double lbig = 1.0;   // large box side

    void validate() const;
};

/// Default for the coefficient A of the λ kernel.
double default_a_const(double m);

struct LambdaArgs {
    MomentumVec s_tilde = MomentumVec::Zero();
    MomentumVec k_vec = MomentumVec::Zero();
    double q_mu = 1.0;
    double m = 1.0;
    double delta = 0.0;
    double n = 1.0;
    double ell = 1.0;
    double a_const = 1.0 / 3.0;

    void validate() const;
    MomentumVec ak() const { return a_const * k_vec; }
};

/// The lattice (2π/ℓ)Z³ + offset.
struct ShiftedLattice {
    double spacing = 2.0 * 3.14159265358979323846;
    MomentumVec offset = MomentumVec::Zero();

    static ShiftedLattice with_side(double ell, const MomentumVec& offset = MomentumVec::Zero());
    MomentumVec point(const Eigen::Vector3i& n) const {
        return offset + spacing * n.cast<double>();
    }
};

double green_g(const ModelParams& p, const MomentumVec& k0, std::span<const MomentumVec> kvec);

double l_continuum(const ModelParams& p, const MomentumVec& k1, double khat_sq);

double lambda_kernel(const LambdaArgs& args, const MomentumVec& t_tilde);

/// Right side of the explicit pointwise bound λ <= C_m (...) with s = s̃ - AK, t = t̃ - AK.
double lambda_envelope(const LambdaArgs& args, const MomentumVec& t_tilde);

double s_function(double rho, double mu);

double fhat_infinity(double m, double gamma, const MomentumVec& z);

/// Precomputed λ kernel for repeated evaluation at many t̃.
class LambdaKernel {
public:
    explicit LambdaKernel(const LambdaArgs& args);

    double operator()(const MomentumVec& t) const;

    /// λ · |t̃ - AK|² evaluated from the squared distance r2 = |t̃ - AK|² and |t̃|², s̃·t̃.
    /// Used by integrators working in coordinates centred at AK.
    double reduced(double r2, double t2, double st) const {
        const double inner = c1_ * t2 + base_;
        const double x = s2_ + t2 + base_;
        const double y = c4_ * st;
        return prefactor_ * (r2 / (r2 + delta_)) / std::sqrt(std::sqrt(inner)) * std::abs(st) /
               (x * x - y * y);
    }

    const MomentumVec& ak() const { return ak_; }
    const MomentumVec& s() const { return s_; }
    double delta_term() const { return delta_; }
    bool vanishes() const { return s2_ == 0.0; }

private:
    MomentumVec s_;
    MomentumVec ak_;
    double s2_ = 0.0;
    double c1_ = 0.0;
    double c4_ = 0.0;
    double base_ = 0.0;
    double delta_ = 0.0;
    double prefactor_ = 0.0;
};

}  // namespace polaron
