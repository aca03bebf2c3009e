#include "polaron/calibration.hpp"

#include "polaron/errors.hpp"
#include "polaron/torus_forms.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace polaron {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

json search_json(const SupSearchConfig& s) {
    return {{"gauge", s.gauge == Gauge::s_unit ? "s_unit" : "q_unit"},
            {"n_q", s.n_q},
            {"n_k", s.n_k},
            {"n_angle", s.n_angle},
            {"grid_lo", s.grid_lo},
            {"grid_hi", s.grid_hi},
            {"refine_starts", s.refine_starts},
            {"refine_iterations", s.refine_iterations},
            {"refine_size", s.refine_size},
            {"quad_tol", s.quad_tol},
            {"grid_quad_tol", s.grid_quad_tol}};
}

void say(std::ostream* log, const std::string& s) {
    if (log) *log << s << std::endl;
}

}  // namespace

std::vector<LPerSample> lper_sweep(const LPerSweepSpec& spec) {
    if (spec.points < 1) throw PreconditionError("lper_sweep: points must be >= 1");
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> comp(-spec.k_radius, spec.k_radius);
    std::uniform_int_distribution<int> extra(0, spec.max_extra);
    std::vector<LPerSample> out;
    out.reserve(static_cast<std::size_t>(spec.points));
    for (int s = 0; s < spec.points; ++s) {
        LPerSample x;
        x.m = log_uniform(rng, spec.m_lo, spec.m_hi);
        x.ell = log_uniform(rng, spec.ell_lo, spec.ell_hi);
        const double unit = 2.0 * pi / x.ell;
        std::set<std::array<int, 3>> used;
        auto draw = [&] {
            while (true) {
                const std::array<int, 3> n{comp(rng), comp(rng), comp(rng)};
                if (used.insert(n).second) return n;
            }
        };
        const auto n1 = draw();
        x.k1 = unit * MomentumVec(n1[0], n1[1], n1[2]);
        const int e = extra(rng);
        for (int i = 0; i < e; ++i) {
            const auto n = draw();
            x.khat_sq += unit * unit * double(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        }
        const double q2 = log_uniform(rng, spec.q_lo, spec.q_hi) / (x.ell * x.ell);
        x.mu = q2 - 0.5 * x.khat_sq;
        ModelParams p;
        p.m = x.m;
        p.mu = x.mu;
        p.ell = x.ell;
        p.n = e + 1;
        const LPeriodicResult r = l_periodic_detailed(p, x.k1, x.khat_sq);
        x.diff = std::abs(r.correction);
        out.push_back(x);
    }
    return out;
}

CalibrationConfig CalibrationConfig::preset(const std::string& name) {
    CalibrationConfig c;
    c.sweep = name;
    if (name == "default") return c;
    if (name == "quick") {
        c.search.n_q = 5;
        c.search.n_k = 7;
        c.search.n_angle = 4;
        c.search.refine_starts = 2;
        c.search.refine_iterations = 120;
        c.search.quad_tol = 1e-6;
        c.search.grid_quad_tol = 1e-3;
        c.gap_ns = {100, 1000};
        c.tilde.delta_factors = {0.5, 1.0, 2.0};
        c.tilde.s_over_q = {1.0, 10.0, 100.0};
        c.tilde.refine_starts = 1;
        c.tilde.refine_iterations = 60;
        c.lper.points = 200;
        return c;
    }
    throw PreconditionError("calibration: unknown sweep '" + name + "' (expected default or quick)");
}

double fit_theorem_const(double m_star_star, double c_eta) {
    if (!(m_star_star > 0.0 && c_eta > 0.0)) throw PreconditionError("fit_theorem_const: inputs must be positive");
    // L → ∞ must not beat the unconfined bound for any m >= m**
    const double unconfined = (m_star_star + 1.0) / (2.0 * m_star_star) / (4.0 * std::pow(pi, 4));
    // IMS localisation error (1/2m) 8 c_η / ℓ² with ℓ ρ̄^{1/3} >= 1/2 and (1-Λ)^{-9/2} >= 1
    const double ims = 16.0 * c_eta / m_star_star;
    return std::max(unconfined, ims);
}

CalibrationResult calibrate(const CalibrationConfig& cfg, std::ostream* log) {
    CalibrationResult res;
    ConstantsRegistry& reg = res.registry;
    SupSearchConfig search = cfg.search;
    search.jobs = cfg.jobs;

    say(log, "c_T: enumerating up to N = " + std::to_string(cfg.c_t_nmax));
    reg.c_t.value = enumerate_c_t(cfg.c_t_nmax);
    reg.c_t.provenance = Provenance::enumerated;
    reg.c_t.note = "min over 2 < N <= n_max of Q^2_min(N) l^2 / N^(5/3)";
    reg.c_t.manifest = json{{"n_max", cfg.c_t_nmax}}.dump();

    say(log, "m**: bisection of Lambda(m) = 1");
    res.critical = critical_mass(search, cfg.m_lo, cfg.m_hi, cfg.m_tol);
    reg.m_star_star.value = res.critical.root;
    reg.m_star_star.provenance = Provenance::measured;
    reg.m_star_star.note = "root of Lambda(m) = 1 with A = 1/(m+2)";
    reg.m_star_star.manifest =
        json{{"bracket", {cfg.m_lo, cfg.m_hi}}, {"m_tol", cfg.m_tol}, {"search", search_json(search)}}.dump();

    say(log, "c_L': L^per sweep of " + std::to_string(cfg.lper.points) + " points");
    res.lper = lper_sweep(cfg.lper);
    reg.c_l_prime.value = fit_c_l_prime(res.lper);
    reg.c_l_prime.provenance = Provenance::fitted;
    reg.c_l_prime.note = "envelope of |L^per - L| Q_mu^2 l^3";
    reg.c_l_prime.manifest = json{{"points", cfg.lper.points},
                                  {"m", {cfg.lper.m_lo, cfg.lper.m_hi}},
                                  {"ell", {cfg.lper.ell_lo, cfg.lper.ell_hi}},
                                  {"q_mu_sq_ell_sq", {cfg.lper.q_lo, cfg.lper.q_hi}},
                                  {"k_radius", cfg.lper.k_radius},
                                  {"max_extra", cfg.lper.max_extra},
                                  {"seed", cfg.lper.seed}}
                                 .dump();

    TildeSearchConfig tilde = cfg.tilde;
    tilde.jobs = cfg.jobs;
    tilde.continuum = search;
    for (double m : cfg.gap_masses) {
        say(log, "Lambda(" + std::to_string(m) + ")");
        const LambdaResult lam = lambda_of_m(m, search);
        res.lambdas[m] = lam;
        const double kappa = reg.c_t.value * cfg.nu * (1.0 - lam.value);
        for (long n : cfg.gap_ns) {
            say(log, "Lambda~(m = " + std::to_string(m) + ", N = " + std::to_string(n) + ")");
            const LambdaTildeResult t = lambda_tilde(m, kappa, n, 1.0, reg.c_t.value, tilde, &lam);
            GapSample g;
            g.m = m;
            g.kappa = kappa;
            g.n = n;
            g.c_t = reg.c_t.value;
            g.lambda_tilde = t.value;
            g.lambda = lam.value;
            g.error = t.err_quad + t.err_search + lam.err_quad + lam.err_search;
            res.gaps.push_back(g);
            for (const auto& [delta, v] : t.per_delta)
                res.gap_rows.push_back({m, kappa, n, 1.0, delta, v, t.err_quad, t.err_search});
        }
    }
    reg.c_lambda.value = fit_c_lambda(res.gaps);
    reg.c_lambda.provenance = Provenance::fitted;
    reg.c_lambda.note = "envelope of (Lambda~ - Lambda + err) m (1 - kappa/c_T)^2 N^(2/9)";
    reg.c_lambda.manifest = json{{"masses", cfg.gap_masses},
                                 {"N", cfg.gap_ns},
                                 {"nu", cfg.nu},
                                 {"delta_factors", cfg.tilde.delta_factors},
                                 {"s_over_q", cfg.tilde.s_over_q},
                                 {"q_factors", cfg.tilde.q_factors},
                                 {"refine_starts", cfg.tilde.refine_starts},
                                 {"refine_iterations", cfg.tilde.refine_iterations},
                                 {"search", search_json(search)}}
                                .dump();

    say(log, "c_eta: partition grid");
    PartitionSpec ps = cfg.partition;
    ps.jobs = cfg.jobs;
    res.partition = build_partition(ps);
    reg.c_eta.value = res.partition.c_eta;
    reg.c_eta.provenance = Provenance::measured;
    reg.c_eta.note = "max |grad J_i|^2 l^2 on the grid, bump exp(-1/(1-|x/eps|^2))";
    reg.c_eta.manifest = json{{"L", ps.L}, {"ell", ps.ell}, {"epsilon", ps.epsilon}, {"grid", ps.grid}}.dump();

    reg.theorem_const.value = fit_theorem_const(reg.m_star_star.value, reg.c_eta.value);
    reg.theorem_const.provenance = Provenance::fitted;
    reg.theorem_const.note =
        "max of ((m**+1)/(2m**))/(4 pi^4) (unconfined limit) and 16 c_eta/m** (IMS term at l rho^(1/3) = 1/2)";
    reg.theorem_const.manifest = json{{"m_star_star", reg.m_star_star.value}, {"c_eta", reg.c_eta.value}}.dump();

    reg.created = utc_timestamp();
    reg.validate();
    return res;
}

}  // namespace polaron
