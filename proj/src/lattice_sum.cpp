#include "polaron/errors.hpp"
#include "polaron/lambda_functional.hpp"
#include "polaron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

// C^∞ step from 1 (x <= 0) to 0 (x >= 1).
double smooth_step_down(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return b / (a + b);
}

struct Window {
    double r;  // w = 1 below r/2, 0 above r
    double operator()(double rho) const { return smooth_step_down((rho - 0.5 * r) / (0.5 * r)); }
};

// h³ Σ_n λ(AK + h n) w(|h n|) for two windows at once.
void near_sums(const LambdaKernel& kern, double h, const Window& w1, const Window& w2, double* s1,
               double* s2, long* count) {
    const double rmax = std::max(w1.r, w2.r);
    const int nmax = static_cast<int>(std::ceil(rmax / h));
    const MomentumVec& c = kern.ak();
    CompensatedSum a1, a2;
    long cnt = 0;
    const double h3 = h * h * h;
    for (int i = -nmax; i <= nmax; ++i)
        for (int j = -nmax; j <= nmax; ++j)
            for (int k = -nmax; k <= nmax; ++k) {
                const MomentumVec t = h * MomentumVec(i, j, k);
                const double rho = t.norm();
                if (rho >= rmax) continue;
                const double v = kern(c + t) * h3;
                ++cnt;
                a1 += v * w1(rho);
                a2 += v * w2(rho);
            }
    *s1 = a1.value();
    *s2 = a2.value();
    *count = cnt;
}

}  // namespace

LatticeSumResult lattice_lambda_sum(const LambdaArgs& args, const LatticeSumConfig& cfg) {
    args.validate();
    if (!(args.delta > 0.0))
        throw SingularPointError("lattice_lambda_sum: delta = 0 puts the pole t = AK on the lattice");
    if (cfg.max_points < 100) throw PreconditionError("lattice_lambda_sum: max_points too small");
    LambdaKernel kern(args);
    LatticeSumResult res;
    if (kern.vanishes()) return res;

    const double h = 2.0 * pi / args.ell;
    const double scale = std::sqrt(args.s_tilde.squaredNorm() + 2.0 * args.q_mu * args.q_mu +
                                   args.ak().squaredNorm() + kern.delta_term());
    const double r_cap = h * std::cbrt(3.0 * static_cast<double>(cfg.max_points) / (4.0 * pi));
    const double r = std::min(cfg.window_scale * scale, r_cap);
    const Window w1{std::max(r, 4.0 * h)};
    const Window w2{0.5 * w1.r};

    double n1 = 0.0, n2 = 0.0;
    near_sums(kern, h, w1, w2, &n1, &n2, &res.points);

    auto far = [&](const Window& w) {
        auto comp = [&](double rho) { return 1.0 - w(rho); };
        return integrate_lambda_weighted(args, comp, {0.5 * w.r, w.r}, cfg.quad);
    };
    const IntegralResult f1 = far(w1);
    const IntegralResult f2 = far(w2);

    res.value = n1 + f1.value;
    res.far_field = f1.value;
    res.window_radius = w1.r;
    res.error = std::abs(res.value - (n2 + f2.value)) + f1.error;

    // Rigorous bound of h³ Σ_{|hn| >= r/2} λ from the explicit envelope, which is radial
    // and decreasing in |t̃ - AK|. Each lattice cube lies within √3h/2 of its centre.
    {
        const double m = args.m;
        const MomentumVec ak = args.ak();
        const double s2 = (args.s_tilde - ak).squaredNorm();
        const double q2 = 2.0 * args.q_mu * args.q_mu;
        const double d = kern.delta_term();
        const double cm = std::pow((m + 1.0) / m, 1.5) * (m * m + 4.0 * m + 2.0) /
                          (2.0 * pi * pi * m * (m + 2.0) * (m + 2.0));
        const double pref = cm * (s2 + q2 + args.n * d) / std::pow(s2 + q2, 0.25);
        auto env = [&](double rho) {
            return pref / (rho * rho + d) / std::pow(rho * rho + q2, 0.25) / (s2 + rho * rho + q2);
        };
        const double dc = std::sqrt(3.0) * h / 2.0;
        const double rho0 = std::max(0.0, 0.5 * w1.r - 2.0 * dc);
        auto integrand = [&](double rho) {
            return 4.0 * pi * (rho + dc) * (rho + dc) * env(std::max(rho, 1e-300));
        };
        res.envelope_tail_bound = integrate_gk_tail(integrand, rho0, std::max(rho0, scale), 1e-8).value;
    }

    if (!(res.error <= cfg.rel_tol * std::abs(res.value))) {
        std::ostringstream os;
        os << "lattice_lambda_sum: far-field error " << res.error << " exceeds tolerance at window radius "
           << w1.r;
        throw AccuracyError(os.str(), res.value, res.error);
    }
    return res;
}

}  // namespace polaron
