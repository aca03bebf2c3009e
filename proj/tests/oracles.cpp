#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using polaron::MomentumVec;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double gk(const F& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 5, 1e-12);
}

// polynomial through (x_i, y_i) evaluated at 0 (Neville)
double extrapolate_to_zero(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i)
            y[i] = (x[i + k] * y[i] - x[i] * y[i + 1]) / (x[i + k] - x[i]);
    return y[0];
}

}  // namespace

Mollifier::Mollifier(int k) : k_(k), c_(1.0), a_(1.0) {
    if (k < 1 || k > 2) throw std::invalid_argument("Mollifier: k must be 1 or 2");
    for (int j = 2 * k + 3; j > 1; j -= 2) c_ *= j;
    auto sq = [this](double y) {
        const double v = phi(y);
        return v * v;
    };
    double s = gk(sq, 0.0, pi);
    for (int j = 1; j < 4000; ++j) s += gk(sq, j * pi, (j + 1) * pi);
    a_ = s;
}

double Mollifier::phi(double y) const {
    const int n = k_ + 1;
    if (y < 2.0) {
        // (2n+1)!! j_n(y)/y^n = Σ_j (-y²/2)^j / (j! (2n+3)(2n+5)...(2n+2j+1))
        double term = 1.0, sum = 1.0;
        for (int j = 1; j < 30; ++j) {
            term *= -0.5 * y * y / (j * (2.0 * n + 2.0 * j + 1.0));
            sum += term;
        }
        return sum;
    }
    const double s = std::sin(y), co = std::cos(y);
    double j;
    if (n == 2)
        j = (3.0 / (y * y * y) - 1.0 / y) * s - 3.0 * co / (y * y);
    else
        j = (15.0 / std::pow(y, 4) - 6.0 / (y * y)) * s - (15.0 / (y * y * y) - 1.0 / y) * co;
    return c_ * j / std::pow(y, n);
}

double Mollifier::operator()(double x) const {
    const double v = phi(a_ * std::abs(x));
    return v * v;
}

BruteLPer lper_bruteforce(double m, double mu, double ell, const MomentumVec& k1, double khat_sq,
                          const Mollifier& tau, double rho_units) {
    const double c = 2.0 * m / (m + 1.0);
    const double gamma = k1.squaredNorm() / (2.0 * (m + 1.0)) + 0.5 * khat_sq + mu;
    const double g2 = c * gamma;
    const double h = 2.0 * pi / ell;
    const double rho = rho_units * h;
    auto window = [&](double p2) { return std::exp(-(p2 + g2) / (rho * rho)); };

    // lattice points with non-negligible window
    const MomentumVec a = m / (m + 1.0) * k1;
    const double pmax2 = 46.0 * rho * rho;
    const int nmax = static_cast<int>(std::sqrt(pmax2) / h + std::abs(a.maxCoeff()) / h) + 2;
    std::vector<double> p2s;
    for (int i = -nmax; i <= nmax; ++i)
        for (int j = -nmax; j <= nmax; ++j)
            for (int k = -nmax; k <= nmax; ++k) {
                const MomentumVec p = a + h * MomentumVec(i, j, k);
                const double p2 = p.squaredNorm();
                if (p2 < pmax2) p2s.push_back(p2);
            }

    // windowed continuum part, R independent pieces folded into the integrands below
    const double sa = tau.scale();
    auto a_of = [&](double r) {
        // c²γ ∫ τ̂(t/R)/(t²+cγ) dt on u = t/R
        auto f1 = [&](double u) { return tau(u) * r / (r * r * u * u + g2); };
        const double u0 = std::sqrt(g2) / r;
        double s1 = 0.0, lo = 0.0;
        for (double hi = u0 / 64.0; hi < pi / sa; hi *= 2.0) {
            s1 += gk(f1, lo, hi);
            lo = hi;
        }
        for (int j = 1; j <= 3000; ++j) {
            const double hi = j * pi / sa;
            if (hi <= lo) continue;
            s1 += gk(f1, lo, hi);
            lo = hi;
        }
        auto f2 = [&](double t) { return t * t * tau(t / r) * window(t * t) / (t * t + g2); };
        double s2 = 0.0;
        const double tmax = 7.0 * rho;
        for (int j = 0; j < 28; ++j) s2 += gk(f2, tmax * j / 28.0, tmax * (j + 1) / 28.0);
        return 4.0 * pi * (c * c * gamma * s1 + c * s2);
    };
    auto b_of = [&](double r) {
        long double s = 0.0L;
        for (double p2 : p2s) s += c * tau(std::sqrt(p2) / r) * window(p2) / (p2 + g2);
        return static_cast<double>(s) * h * h * h;
    };

    const double r0 = 8.0 * sa * std::max(rho, std::sqrt(g2));
    std::vector<double> inv, val;
    for (int j = 0; j < 5; ++j) {
        const double r = r0 * std::pow(2.0, j);
        inv.push_back(1.0 / r);
        val.push_back(a_of(r) - b_of(r));
    }
    BruteLPer out;
    out.value = extrapolate_to_zero(inv, val);
    inv.pop_back();
    val.pop_back();
    out.spread = std::abs(out.value - extrapolate_to_zero(inv, val));
    return out;
}

double fhat_qawf(double m, double gamma, double r) {
    const double c = 2.0 * m / (m + 1.0);
    struct P {
        double c, gamma;
    } par{c, gamma};
    gsl_function f;
    f.function = [](double t, void* v) {
        const auto* q = static_cast<const P*>(v);
        return t / (t * t / q->c + q->gamma);
    };
    f.params = &par;
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
    gsl_integration_workspace* cw = gsl_integration_workspace_alloc(2000);
    gsl_integration_qawo_table* tab = gsl_integration_qawo_table_alloc(r, 1.0, GSL_INTEG_SINE, 50);
    double result = 0.0, err = 0.0;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const int status = gsl_integration_qawf(&f, 0.0, 1e-12, 2000, w, cw, tab, &result, &err);
    gsl_set_error_handler(old);
    gsl_integration_qawo_table_free(tab);
    gsl_integration_workspace_free(cw);
    gsl_integration_workspace_free(w);
    if (status != GSL_SUCCESS) throw std::runtime_error("fhat_qawf: QAWF failed");
    return std::pow(2.0 * pi, -1.5) * 4.0 * pi / r * result;
}

McEstimate lambda_integral_mc(const polaron::LambdaArgs& args, long samples, std::uint64_t seed) {
    const polaron::LambdaKernel lam(args);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> g;
    long double s = 0.0L, s2 = 0.0L;
    for (long i = 0; i < samples; ++i) {
        MomentumVec dir(g(rng), g(rng), g(rng));
        dir.normalize();
        const double u = u01(rng);
        const double r = u / (1.0 - u);
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        const double v = lam(lam.ak() + r * dir) * 4.0 * pi * r * r * (1.0 + r) * (1.0 + r);
        s += v;
        s2 += static_cast<long double>(v) * v;
    }
    const double n = static_cast<double>(samples);
    McEstimate e;
    e.mean = static_cast<double>(s) / n;
    e.sigma = std::sqrt(std::max(0.0, static_cast<double>(s2) / n - e.mean * e.mean) / n);
    return e;
}

McEstimate g_norm_sq_mc(double w, double nu, double m, long samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> g;
    const double c = 2.0 * m / (m + 1.0);
    const double a = std::sqrt(c * nu);
    const double sigma = w / std::sqrt(2.0);
    const double norm = std::pow(pi * w * w, 1.5);
    long double s = 0.0L, s2 = 0.0L;
    for (long i = 0; i < samples; ++i) {
        const MomentumVec sv(sigma * g(rng), sigma * g(rng), sigma * g(rng));
        double th;
        do th = 0.5 * pi * u01(rng);
        while (u01(rng) > std::sin(th) * std::sin(th));
        MomentumVec dir(g(rng), g(rng), g(rng));
        dir.normalize();
        const MomentumVec uv = a * std::tan(th) * dir;
        const MomentumVec k1 = uv + sv / (m + 1.0);
        const MomentumVec k0 = sv - k1;
        const double d = k0.squaredNorm() / (2.0 * m) + 0.5 * k1.squaredNorm() + nu;
        const double q = a / (pi * pi) / std::pow(a * a + uv.squaredNorm(), 2);
        const double v = norm / (d * d) / q;
        s += v;
        s2 += static_cast<long double>(v) * v;
    }
    const double n = static_cast<double>(samples);
    McEstimate e;
    e.mean = static_cast<double>(s) / n;
    e.sigma = std::sqrt(std::max(0.0, static_cast<double>(s2) / n - e.mean * e.mean) / n);
    return e;
}

polaron::ConstantsRegistry pinned_registry() {
    using polaron::Provenance;
    polaron::ConstantsRegistry r;
    r.c_t = {29.608813203268074, Provenance::enumerated, "pinned", "{}"};
    r.c_l_prime = {3.25, Provenance::fitted, "pinned", "{}"};
    r.c_lambda = {0.75, Provenance::fitted, "pinned", "{}"};
    r.c_eta = {56.5, Provenance::measured, "pinned", "{}"};
    r.m_star_star = {0.357, Provenance::measured, "pinned", "{}"};
    r.theorem_const = {2532.0, Provenance::fitted, "pinned", "{}"};
    r.created = "2026-01-01T00:00:00Z";
    return r;
}

// Dirichlet E_N as an integer multiple of π²/L²
long dirichlet_sum_int(long n) {
    std::vector<long> v;
    const int r = static_cast<int>(std::cbrt(6.0 * n / pi)) + 4;
    for (int i = 1; i <= r; ++i)
        for (int j = 1; j <= r; ++j)
            for (int k = 1; k <= r; ++k) v.push_back(i * i + j * j + k * k);
    std::sort(v.begin(), v.end());
    long s = 0;
    for (long i = 0; i < n; ++i) s += v[i];
    return s;
}

HandBound hand_bound_confined(const polaron::BoundInputs& in, const polaron::ConstantsRegistry& reg) {
    const double ms = reg.m_star_star.value;
    const double c_l = (ms + 1.0) / (2.0 * ms) * reg.c_l_prime.value / reg.c_t.value;
    const double ratio = in.kappa / reg.c_t.value;
    const double margin = 1.0 - ratio - in.lambda_m;
    const double one = 1.0 - ratio;
    const double n0 = std::pow(margin * in.m * one * one / reg.c_lambda.value, -4.5);
    const double n = static_cast<double>(in.n);
    const double x = in.alpha - c_l / in.ell;
    const double neg = x < 0.0 ? -x : 0.0;
    const double kinetic = in.kappa * std::pow(n, 5.0 / 3.0) / (in.ell * in.ell);
    const double shrink = 1.0 - std::pow(n0 / n, 2.0 / 9.0);
    const double penalty = 1.0 / (4.0 * std::pow(pi, 4)) * (in.m + 1.0) / (2.0 * in.m) * neg * neg /
                           (margin * margin * shrink * shrink);
    return {kinetic - penalty, penalty, kinetic, n0};
}

HandBound hand_bound_main(const polaron::BoundInputs& in, const polaron::ConstantsRegistry& reg) {
    const double unit = pi * pi / (in.lbig * in.lbig);
    const double laplacian = static_cast<double>(dirichlet_sum_int(in.n)) * unit;
    const double kinetic = 0.5 * laplacian;
    const double rho = static_cast<double>(in.n) / (in.lbig * in.lbig * in.lbig);
    const double neg = in.alpha < 0.0 ? -in.alpha : 0.0;
    const double gap = 1.0 - in.lambda_m;
    const double c = reg.theorem_const.value;
    const double density = c * std::pow(rho, 2.0 / 3.0) / std::pow(gap, 4.5);
    const double penalty = c * neg * neg / (gap * gap);
    return {kinetic - (density + penalty), penalty, kinetic, 0.0};
}

polaron::BoundInputs pinned_confined_inputs(int i) {
    // (m, κ, N, ℓ, α, Λ)
    const double rows[5][6] = {{1.0, 9.75, 10000, 1.0, -50.0, 0.3409067},
                               {3.0, 5.0, 3000, 0.7, -5.0, 0.11103784},
                               {10.0, 10.0, 500, 2.0, 3.0, 0.03},
                               {0.5, 4.0, 200000, 1.5, -0.25, 0.6},
                               {30.0, 20.0, 60, 0.1, 0.0, 0.01}};
    polaron::BoundInputs in;
    in.m = rows[i][0];
    in.kappa = rows[i][1];
    in.n = static_cast<long>(rows[i][2]);
    in.ell = rows[i][3];
    in.alpha = rows[i][4];
    in.lambda_m = rows[i][5];
    return in;
}

polaron::BoundInputs pinned_main_inputs(int i) {
    // (m, N, L, α, Λ)
    const double rows[5][5] = {{1.0, 1000, 10.0, -1.0, 0.3409067},
                               {3.0, 1, 1.0, 0.5, 0.11103784},
                               {0.5, 4000, 3.0, -20.0, 0.6},
                               {100.0, 257, 100.0, 0.0, 0.003},
                               {10.0, 20000, 7.5, -1e-3, 0.03}};
    polaron::BoundInputs in;
    in.m = rows[i][0];
    in.n = static_cast<long>(rows[i][1]);
    in.lbig = rows[i][2];
    in.alpha = rows[i][3];
    in.lambda_m = rows[i][4];
    return in;
}

double l_continuum_sum(const polaron::SingularAmplitude& xi, const polaron::ModelParams& p) {
    double s = 0.0;
    for (const auto& [key, v] : xi.support()) {
        double khat = 0.0;
        for (long l = 1; l < xi.n(); ++l) khat += xi.momentum(key, static_cast<int>(l)).squaredNorm();
        s += std::norm(v) * polaron::l_continuum(p, xi.momentum(key, 0), khat);
    }
    return s * xi.measure();
}

}  // namespace oracle
