#include "polaron/continuum_identity.hpp"

#include "polaron/errors.hpp"
#include "polaron/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double radial(const F& g, double scale, const RadialQuadConfig& cfg, const char* what) {
    QuadResult a = integrate_gk(g, 0.0, scale, cfg.rel_tol, cfg.max_panels);
    QuadResult b = integrate_gk_tail(g, scale, scale, cfg.rel_tol, cfg.max_panels);
    const double v = a.value + b.value;
    const double e = a.error + b.error;
    if (!std::isfinite(v) || e > 1e3 * cfg.rel_tol * std::abs(v) + 1e-300)
        throw AccuracyError(std::string(what) + ": radial quadrature did not converge", v, e);
    return v;
}

}  // namespace

RadialProfile RadialProfile::gaussian(double width) {
    if (!(width > 0.0)) throw PreconditionError("gaussian profile: width must be positive");
    return {[width](double r) { return std::exp(-0.5 * r * r / (width * width)); }, width};
}

double radial_norm_sq(const RadialProfile& xi, const RadialQuadConfig& cfg) {
    auto g = [&](double r) {
        const double v = xi.f(r);
        return 4.0 * pi * r * r * v * v;
    };
    return radial(g, xi.scale, cfg, "radial_norm_sq");
}

double g_norm_sq_radial(const RadialProfile& xi, double nu, double m, const RadialQuadConfig& cfg) {
    if (!(nu > 0.0)) throw DomainError("g_norm_sq: nu must be positive");
    const double c = 2.0 * m / (m + 1.0);
    const double pref = pi * pi * c * std::sqrt(c);
    auto g = [&](double r) {
        const double v = xi.f(r);
        return 4.0 * pi * r * r * v * v * pref / std::sqrt(r * r / (2.0 * (1.0 + m)) + nu);
    };
    return radial(g, xi.scale, cfg, "g_norm_sq");
}

double t_dia_continuum(const RadialProfile& xi, const ModelParams& p, const RadialQuadConfig& cfg) {
    auto g = [&](double r) {
        const double v = xi.f(r);
        return 4.0 * pi * r * r * v * v * l_continuum(p, MomentumVec(r, 0.0, 0.0), 0.0);
    };
    return radial(g, xi.scale, cfg, "t_dia_continuum");
}

RepSingResult rep_sing_check(const RadialProfile& xi, const ModelParams& p, const RadialQuadConfig& cfg) {
    if (p.n != 1) throw PreconditionError("rep_sing_check: requires N = 1");
    if (!(p.mu > 0.0)) throw DomainError("rep_sing_check: requires mu > 0");
    const double c = 2.0 * p.m / (p.m + 1.0);
    const double cc = c * std::sqrt(c);
    const double norm = radial_norm_sq(xi, cfg);
    const double alpha_term = c * p.alpha * norm;

    RepSingResult out;
    out.left = alpha_term + t_dia_continuum(xi, p, cfg);

    // I(ν) = ‖G_ν ξ‖² - π² c^{3/2} ν^{-1/2} ‖ξ‖², written as one radial integral so the
    // cancellation happens inside the integrand: 1/√(a+ν) - 1/√ν = -a / (√ν √(a+ν) (√ν + √(a+ν))).
    auto i_nu = [&](double nu) {
        auto g = [&](double r) {
            const double v = xi.f(r);
            const double a = r * r / (2.0 * (1.0 + p.m));
            const double sa = std::sqrt(a + nu), sn = std::sqrt(nu);
            return -4.0 * pi * r * r * v * v * pi * pi * cc * a / (sn * sa * (sn + sa));
        };
        return radial(g, xi.scale, cfg, "rep_sing_check");
    };
    // ν = μ/(1-u)² turns the ν^{-3/2} tail of I into a smooth integrand on [0, 1)
    auto g = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        return i_nu(p.mu / (w * w)) * 2.0 * p.mu / (w * w * w);
    };
    std::vector<double> edges{0.0};
    const double s2 = xi.scale * xi.scale;
    if (s2 > p.mu) edges.push_back(1.0 - std::sqrt(p.mu / s2));
    edges.push_back(1.0);
    double integral = 0.0, err = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        QuadResult q = integrate_gk(g, edges[k], edges[k + 1], cfg.rel_tol, cfg.max_panels);
        integral += q.value;
        err += q.error;
    }
    if (!std::isfinite(integral)) throw AccuracyError("rep_sing_check: nu integral diverged", integral, err);

    out.right = alpha_term + 2.0 * pi * pi * cc * std::sqrt(p.mu) * norm - integral;
    out.residual = std::abs(out.left - out.right) / (std::abs(out.left) + std::abs(out.right));
    return out;
}

}  // namespace polaron
