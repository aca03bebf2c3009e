#include "polaron/errors.hpp"
#include "polaron/lambda_functional.hpp"
#include "polaron/parallel.hpp"
#include "polaron/simplex.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace polaron {

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    if (n <= 1) {
        g.push_back(std::sqrt(lo * hi));
        return g;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * i / (n - 1)));
    return g;
}

struct Candidate {
    LambdaArgmax p;
    double value = 0.0;
};

// Search coordinates. s_unit: (sqrt Q, log|K|, angle). q_unit: (log|s̃|, log|K|, angle).
struct Coords {
    Gauge gauge;
    double lo, hi;

    std::vector<double> to_x(const LambdaArgmax& p) const {
        if (gauge == Gauge::s_unit) return {std::sqrt(p.q_mu), std::log(p.k_abs), p.angle};
        return {std::log(p.s_abs), std::log(p.k_abs), p.angle};
    }
    LambdaArgmax from_x(const std::vector<double>& x) const {
        LambdaArgmax p;
        const double llo = std::log(lo), lhi = std::log(hi);
        p.k_abs = std::exp(std::clamp(x[1], llo, lhi));
        p.angle = std::abs(std::remainder(x[2], 2.0 * std::numbers::pi));
        if (gauge == Gauge::s_unit) {
            p.s_abs = 1.0;
            p.q_mu = std::min(x[0] * x[0], hi);
        } else {
            p.q_mu = 1.0;
            p.s_abs = std::exp(std::clamp(x[0], llo, lhi));
        }
        return p;
    }
};

double evaluate(double m, double a, const LambdaArgmax& p, double tol, double* err = nullptr) {
    LambdaArgs args = lambda_args_at(m, a, p);
    if (args.q_mu == 0.0 && args.k_vec.squaredNorm() == 0.0) return 0.0;
    IntegralResult r = integrate_lambda(args, {tol, 200});
    if (err) *err = r.error;
    return r.value;
}

std::string dump(const std::vector<Candidate>& grid) {
    std::ostringstream os;
    os << std::setprecision(10) << "s_abs,k_abs,angle,q_mu,value\n";
    for (const auto& c : grid)
        os << c.p.s_abs << ',' << c.p.k_abs << ',' << c.p.angle << ',' << c.p.q_mu << ',' << c.value
           << '\n';
    return os.str();
}

}  // namespace

void SupSearchConfig::validate() const {
    if (n_q < 1 || n_k < 2 || n_angle < 2) throw PreconditionError("search grid too small");
    if (!(grid_lo > 0.0 && grid_hi > grid_lo)) throw PreconditionError("invalid search range");
    if (!(quad_tol > 0.0 && grid_quad_tol > 0.0 && refine_size > 0.0))
        throw PreconditionError("tolerances must be positive");
    if (refine_starts < 1) throw PreconditionError("need at least one refinement start");
    if (jobs < 1) throw PreconditionError("jobs must be >= 1");
}

LambdaArgs lambda_args_at(double m, double a_const, const LambdaArgmax& p) {
    LambdaArgs a;
    a.m = m;
    a.a_const = a_const;
    a.q_mu = p.q_mu;
    a.s_tilde = MomentumVec(0.0, 0.0, p.s_abs);
    a.k_vec = MomentumVec(p.k_abs * std::sin(p.angle), 0.0, p.k_abs * std::cos(p.angle));
    a.delta = 0.0;
    return a;
}

LambdaResult lambda_of_m(double m, const SupSearchConfig& cfg) {
    if (!(m > 0.0)) throw DomainError("lambda_of_m: m must be positive");
    cfg.validate();
    const double a = cfg.a_for(m);
    const Coords coords{cfg.gauge, cfg.grid_lo, cfg.grid_hi};

    std::vector<Candidate> grid;
    const auto kg = log_grid(cfg.grid_lo, cfg.grid_hi, cfg.n_k);
    std::vector<double> first;
    if (cfg.gauge == Gauge::s_unit) {
        first.push_back(0.0);
        for (double q : log_grid(cfg.grid_lo, cfg.grid_hi, cfg.n_q - 1)) first.push_back(q);
    } else {
        first = log_grid(cfg.grid_lo, cfg.grid_hi, cfg.n_q);
    }
    for (double f : first)
        for (double k : kg)
            for (int ia = 0; ia < cfg.n_angle; ++ia) {
                Candidate c;
                c.p.k_abs = k;
                c.p.angle = std::numbers::pi * ia / (cfg.n_angle - 1);
                if (cfg.gauge == Gauge::s_unit) {
                    c.p.s_abs = 1.0;
                    c.p.q_mu = f;
                } else {
                    c.p.s_abs = f;
                    c.p.q_mu = 1.0;
                }
                grid.push_back(c);
            }
    parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) {
        grid[i].value = evaluate(m, a, grid[i].p, cfg.grid_quad_tol);
    });

    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return grid[i].value > grid[j].value; });
    if (!(grid[order[0]].value > 0.0) || !std::isfinite(grid[order[0]].value))
        throw SearchError("lambda_of_m: grid scan found no positive value", 0.0, dump(grid));

    const int starts = std::min<int>(cfg.refine_starts, static_cast<int>(grid.size()));
    std::vector<Candidate> refined(starts);
    std::vector<double> spreads(starts, 0.0);
    parallel_for(static_cast<std::size_t>(starts), cfg.jobs, [&](std::size_t i) {
        const Candidate& c0 = grid[order[i]];
        auto objective = [&](const std::vector<double>& x) {
            return -evaluate(m, a, coords.from_x(x), cfg.quad_tol * 10.0);
        };
        std::vector<double> x0 = coords.to_x(c0.p);
        std::vector<double> step{cfg.gauge == Gauge::s_unit ? 0.1 : 0.5, 0.3, 0.3};
        SimplexResult sr = nelder_mead(objective, x0, step, cfg.refine_size, cfg.refine_iterations);
        refined[i].p = coords.from_x(sr.x);
        refined[i].value = -sr.fx;
        spreads[i] = sr.spread;
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < refined.size(); ++i)
        if (refined[i].value > refined[best].value) best = i;

    LambdaResult res;
    res.argmax = refined[best].p;
    double qerr = 0.0;
    res.value = evaluate(m, a, res.argmax, cfg.quad_tol, &qerr);
    res.err_quad = qerr;
    res.err_search = spreads[best] + std::abs(res.value - refined[best].value);
    if (res.value < grid[order[0]].value - 10.0 * (cfg.grid_quad_tol * grid[order[0]].value))
        throw SearchError("lambda_of_m: refinement ended below the best grid value", res.value,
                          dump(grid));
    return res;
}

CriticalMassResult critical_mass(const SupSearchConfig& cfg, double m_lo, double m_hi, double m_tol) {
    if (!(m_lo > 0.0 && m_hi > m_lo)) throw PreconditionError("critical_mass: need 0 < m_lo < m_hi");
    if (!(m_tol > 0.0)) throw PreconditionError("critical_mass: m_tol must be positive");
    CriticalMassResult out;
    std::map<double, double> cache;
    auto f = [&](double m) {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second - 1.0;
        const double v = lambda_of_m(m, cfg).value;
        cache.emplace(m, v);
        out.evaluations.emplace_back(m, v);
        return v - 1.0;
    };
    const double flo = f(m_lo);
    const double fhi = f(m_hi);
    if (!(flo > 0.0 && fhi < 0.0)) {
        std::ostringstream os;
        os << std::setprecision(10) << "critical_mass: bracket invalid, Lambda(" << m_lo
           << ") = " << flo + 1.0 << ", Lambda(" << m_hi << ") = " << fhi + 1.0;
        throw PreconditionError(os.str());
    }
    auto done = [m_tol](double x, double y) { return std::abs(y - x) <= m_tol; };
    std::uintmax_t max_iter = 200;
    auto br = boost::math::tools::bisect(f, m_lo, m_hi, done, max_iter);
    out.bracket_lo = br.first;
    out.bracket_hi = br.second;
    out.root = 0.5 * (br.first + br.second);
    return out;
}

}  // namespace polaron
