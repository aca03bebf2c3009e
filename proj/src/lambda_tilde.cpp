#include "polaron/errors.hpp"
#include "polaron/lambda_functional.hpp"
#include "polaron/parallel.hpp"
#include "polaron/simplex.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace polaron {

namespace {

struct TildePoint {
    MomentumVec s = MomentumVec::Zero();
    MomentumVec k = MomentumVec::Zero();
    double q = 0.0;
    double value = -1.0;
    double error = 0.0;
};

// Lattice sum that tolerates a missed far-field tolerance: the estimate and its error are kept.
TildePoint evaluate(const LambdaArgs& base, const TildePoint& p, const LatticeSumConfig& sc) {
    LambdaArgs a = base;
    a.s_tilde = p.s;
    a.k_vec = p.k;
    a.q_mu = p.q;
    TildePoint out = p;
    try {
        LatticeSumResult r = lattice_lambda_sum(a, sc);
        out.value = r.value;
        out.error = r.error;
    } catch (const AccuracyError& e) {
        out.value = e.estimate();
        out.error = e.error_bound();
    }
    return out;
}

std::vector<MomentumVec> directions() {
    return {MomentumVec(0, 0, 1), MomentumVec(1, 1, 0).normalized(), MomentumVec(1, 1, 1).normalized(),
            MomentumVec(0.3, 0.5, 0.81).normalized()};
}

MomentumVec rotate_towards(const MomentumVec& d, double angle) {
    MomentumVec perp = d.cross(MomentumVec(0.6, -0.8, 0.0));
    if (perp.norm() < 1e-8) perp = d.cross(MomentumVec(0, 0, 1));
    perp.normalize();
    return std::cos(angle) * d + std::sin(angle) * perp;
}

}  // namespace

LambdaTildeResult lambda_tilde(double m, double kappa, long n, double ell, double c_t,
                               const TildeSearchConfig& cfg, const LambdaResult* continuum) {
    if (!(m > 0.0)) throw DomainError("lambda_tilde: m must be positive");
    if (!(kappa > 0.0 && kappa < c_t)) throw PreconditionError("lambda_tilde: need 0 < kappa < c_T");
    if (n < 1 || !(ell > 0.0)) throw PreconditionError("lambda_tilde: need n >= 1 and ell > 0");
    if (cfg.delta_factors.empty()) throw PreconditionError("lambda_tilde: empty delta grid");

    LambdaTildeResult res;
    res.q_min = std::sqrt((c_t - kappa) * std::pow(static_cast<double>(n), 5.0 / 3.0)) / ell;
    const LambdaResult cont = continuum ? *continuum : lambda_of_m(m, cfg.continuum);
    res.lambda = cont.value;
    const double k_ratio = cont.argmax.k_abs / cont.argmax.s_abs;
    const double angle = cont.argmax.angle;
    const double qmin = res.q_min;

    LambdaArgs base;
    base.m = m;
    base.a_const = cfg.continuum.a_for(m);
    base.n = static_cast<double>(n);
    base.ell = ell;

    res.value = std::numeric_limits<double>::infinity();
    for (double f : cfg.delta_factors) {
        base.delta = f * std::pow(static_cast<double>(n), 4.0 / 9.0);

        std::vector<TildePoint> cands;
        for (const auto& d : directions())
            for (double sq : cfg.s_over_q)
                for (double qf : cfg.q_factors) {
                    TildePoint p;
                    p.q = qf * qmin;
                    p.s = sq * p.q * d;
                    p.k = k_ratio * sq * p.q * rotate_towards(d, angle);
                    cands.push_back(p);
                }
        parallel_for(cands.size(), cfg.jobs,
                     [&](std::size_t i) { cands[i] = evaluate(base, cands[i], cfg.sum); });
        std::vector<std::size_t> order(cands.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return cands[i].value > cands[j].value; });

        // coordinates: s̃/Q_min, K/Q_min, y with Q = Q_min (1 + y²)
        auto unpack = [&](const std::vector<double>& x) {
            TildePoint p;
            p.s = qmin * MomentumVec(x[0], x[1], x[2]);
            p.k = qmin * MomentumVec(x[3], x[4], x[5]);
            p.q = qmin * (1.0 + x[6] * x[6]);
            return p;
        };
        const int starts = std::min<int>(cfg.refine_starts, static_cast<int>(cands.size()));
        std::vector<TildePoint> best(starts);
        std::vector<double> spread(starts, 0.0);
        parallel_for(static_cast<std::size_t>(starts), cfg.jobs, [&](std::size_t i) {
            const TildePoint& c = cands[order[i]];
            std::vector<double> x0{c.s.x() / qmin, c.s.y() / qmin, c.s.z() / qmin, c.k.x() / qmin,
                                   c.k.y() / qmin, c.k.z() / qmin, std::sqrt(c.q / qmin - 1.0)};
            const double sc = std::max(0.2 * c.s.norm() / qmin, 0.1);
            std::vector<double> step{sc, sc, sc, sc, sc, sc, 0.3};
            auto obj = [&](const std::vector<double>& x) { return -evaluate(base, unpack(x), cfg.sum).value; };
            SimplexResult sr = nelder_mead(obj, x0, step, 1e-3, cfg.refine_iterations);
            best[i] = evaluate(base, unpack(sr.x), cfg.sum);
            spread[i] = sr.spread;
            if (c.value > best[i].value) {
                best[i] = c;
                spread[i] = 0.0;
            }
        });
        std::size_t bi = 0;
        for (std::size_t i = 1; i < best.size(); ++i)
            if (best[i].value > best[bi].value) bi = i;
        const TildePoint& top = best[bi];
        // As |s̃| → ∞ at fixed Q_μ the lattice spacing becomes negligible and the sum tends to
        // the continuum integral at Q_μ/|s̃| → 0, whose sup over K is Λ(m).
        const bool limit = top.value <= cont.value;
        const double sup = limit ? cont.value : top.value;
        res.per_delta.emplace_back(base.delta, sup);
        if (sup < res.value) {
            res.value = sup;
            res.delta = base.delta;
            res.attained_at_infinity = limit;
            res.s_tilde = top.s;
            res.k_vec = top.k;
            res.q_mu = top.q;
            res.err_quad = limit ? cont.err_quad : top.error;
            res.err_search = limit ? cont.err_search : spread[bi];
        }
    }
    return res;
}

double fit_c_lambda(const std::vector<GapSample>& sweep) {
    if (sweep.empty()) throw PreconditionError("fit_c_lambda: empty sweep");
    double c = 0.0;
    for (const auto& g : sweep) {
        if (!(g.kappa < g.c_t)) throw PreconditionError("fit_c_lambda: kappa >= c_T in sweep");
        const double r = 1.0 - g.kappa / g.c_t;
        const double scale = g.m * r * r * std::pow(static_cast<double>(g.n), 2.0 / 9.0);
        c = std::max(c, (g.lambda_tilde - g.lambda + std::abs(g.error)) * scale);
    }
    return c;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "m,kappa,N,ell,delta,value,err_quad,err_search\n";
    os << std::setprecision(17);
    for (const auto& r : rows)
        os << r.m << ',' << r.kappa << ',' << r.n << ',' << r.ell << ',' << r.delta << ',' << r.value << ','
           << r.err_quad << ',' << r.err_search << '\n';
}

}  // namespace polaron
