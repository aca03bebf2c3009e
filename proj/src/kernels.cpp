#include "polaron/kernels.hpp"

#include "polaron/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool finite(const MomentumVec& v) { return v.allFinite(); }

}  // namespace

void ModelParams::validate() const {
    if (!(m > 0.0)) throw DomainError("mass ratio m must be positive, got " + fmt_num(m));
    if (n < 1) throw DomainError("particle count n must be >= 1");
    if (!(ell > 0.0)) throw DomainError("box side ell must be positive, got " + fmt_num(ell));
    if (!(lbig > 0.0)) throw DomainError("box side L must be positive, got " + fmt_num(lbig));
    if (!std::isfinite(alpha) || !std::isfinite(mu)) throw DomainError("alpha and mu must be finite");
}

double default_a_const(double m) { return 1.0 / (m + 2.0); }

void LambdaArgs::validate() const {
    if (!(m > 0.0)) throw DomainError("mass ratio m must be positive, got " + fmt_num(m));
    if (!(q_mu >= 0.0)) throw DomainError("q_mu must be >= 0, got " + fmt_num(q_mu));
    if (!(delta >= 0.0)) throw DomainError("delta must be >= 0, got " + fmt_num(delta));
    if (!(ell > 0.0)) throw DomainError("ell must be positive");
    if (!finite(s_tilde) || !finite(k_vec) || !std::isfinite(a_const))
        throw DomainError("non-finite lambda arguments");
}

ShiftedLattice ShiftedLattice::with_side(double ell, const MomentumVec& offset) {
    if (!(ell > 0.0)) throw DomainError("lattice side must be positive");
    return ShiftedLattice{2.0 * pi / ell, offset};
}

double green_g(const ModelParams& p, const MomentumVec& k0, std::span<const MomentumVec> kvec) {
    double e = k0.squaredNorm() / (2.0 * p.m) + p.mu;
    for (const auto& k : kvec) e += 0.5 * k.squaredNorm();
    if (!(e > 0.0))
        throw DomainError("resolvent denominator is not positive (mu = " + fmt_num(p.mu) + ")");
    return 1.0 / e;
}

double l_continuum(const ModelParams& p, const MomentumVec& k1, double khat_sq) {
    const double g = k1.squaredNorm() / (2.0 * (p.m + 1.0)) + 0.5 * khat_sq + p.mu;
    if (!(g >= 0.0)) throw DomainError("negative radicand in L (gamma = " + fmt_num(g) + ")");
    const double r = 2.0 * p.m / (p.m + 1.0);
    return 2.0 * pi * pi * r * std::sqrt(r) * std::sqrt(g);
}

LambdaKernel::LambdaKernel(const LambdaArgs& a) {
    a.validate();
    const double m = a.m;
    s_ = a.s_tilde;
    ak_ = a.ak();
    s2_ = s_.squaredNorm();
    c1_ = m * (m + 2.0) / ((m + 1.0) * (m + 1.0));
    const double c2 = m / (m + 1.0);
    c4_ = 2.0 / (1.0 + m);
    base_ = c2 * (2.0 * a.q_mu * a.q_mu + a.a_const * a.k_vec.squaredNorm());
    delta_ = a.delta / (a.ell * a.ell);
    const double s_inner = c1_ * s2_ + base_;
    if (s2_ > 0.0 && !(s_inner > 0.0))
        throw DomainError("lambda kernel: s-bracket vanishes (q_mu = K = 0)");
    const double num = (s_ - ak_).squaredNorm() + 2.0 * a.q_mu * a.q_mu + a.n * delta_;
    prefactor_ = s2_ > 0.0 ? num / (pi * pi * (1.0 + m)) / std::sqrt(std::sqrt(s_inner)) : 0.0;
}

double LambdaKernel::operator()(const MomentumVec& t) const {
    if (s2_ == 0.0) return 0.0;
    const double r2 = (t - ak_).squaredNorm();
    const double t2 = t.squaredNorm();
    if (r2 + delta_ == 0.0) throw SingularPointError("lambda kernel evaluated at its pole t = AK");
    if (!(c1_ * t2 + base_ > 0.0)) throw DomainError("lambda kernel: t-bracket vanishes at t = 0");
    const double st = s_.dot(t);
    const double inner = c1_ * t2 + base_;
    const double x = s2_ + t2 + base_;
    const double y = c4_ * st;
    return prefactor_ / (r2 + delta_) / std::sqrt(std::sqrt(inner)) * std::abs(st) /
           (x * x - y * y);
}

double lambda_kernel(const LambdaArgs& args, const MomentumVec& t_tilde) {
    return LambdaKernel(args)(t_tilde);
}

double lambda_envelope(const LambdaArgs& a, const MomentumVec& t_tilde) {
    a.validate();
    const double m = a.m;
    const MomentumVec ak = a.ak();
    const double s2 = (a.s_tilde - ak).squaredNorm();
    const double t2 = (t_tilde - ak).squaredNorm();
    const double q2 = 2.0 * a.q_mu * a.q_mu;
    const double d = a.delta / (a.ell * a.ell);
    const double c = std::pow((m + 1.0) / m, 1.5) * (m * m + 4.0 * m + 2.0) /
                     (2.0 * pi * pi * m * (m + 2.0) * (m + 2.0));
    return c * (s2 + q2 + a.n * d) / std::pow(s2 + q2, 0.25) / (t2 + d) / std::pow(t2 + q2, 0.25) /
           (s2 + t2 + q2);
}

double s_function(double rho, double mu) {
    if (!(rho >= 0.0)) throw DomainError("S(rho): rho must be >= 0");
    if (!(mu > 0.0)) throw DomainError("S(rho): mu must be positive");
    const double mu32 = mu * std::sqrt(mu);
    const double x = rho / mu32;
    double g;
    if (x < 0.125) {
        // (1+x)^{5/3} - 1 - 5x/3 by its binomial series
        const double a = 5.0 / 3.0;
        double term = a * x;
        g = 0.0;
        for (int k = 2; k < 60; ++k) {
            term *= (a - (k - 1)) / k * x;
            g += term;
            if (std::abs(term) < 1e-18 * std::abs(g)) break;
        }
    } else {
        g = std::expm1(5.0 / 3.0 * std::log1p(x)) - 5.0 / 3.0 * x;
    }
    return std::max(0.0, mu32 * mu * g);
}

double fhat_infinity(double m, double gamma, const MomentumVec& z) {
    if (!(m > 0.0)) throw DomainError("fhat_infinity: m must be positive");
    if (!(gamma > 0.0)) throw DomainError("fhat_infinity: gamma must be positive");
    const double r = z.norm();
    if (!(r > 0.0)) throw DomainError("fhat_infinity: z must be nonzero");
    const double c = 2.0 * m / (m + 1.0);
    return std::sqrt(pi / 2.0) * c * std::exp(-std::sqrt(c * gamma) * r) / r;
}

}  // namespace polaron
