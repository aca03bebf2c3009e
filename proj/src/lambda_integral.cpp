#include "polaron/errors.hpp"
#include "polaron/lambda_functional.hpp"
#include "polaron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polaron {

namespace {

// Spherical coordinates centred at c = AK with polar axis along ŝ:
//   t̃ = c + r (sinθ cosφ e1 + sinθ sinφ e2 + u ŝ),  u = cosθ,
// where e1 points along the part of c orthogonal to ŝ. The integrand is even in φ.
IntegralResult integrate_impl(const LambdaKernel& kern, const std::function<double(double)>* weight,
                              std::vector<double> breaks, const QuadratureConfig& cfg) {
    if (kern.vanishes()) return {};
    const MomentumVec& s = kern.s();
    const double s_abs = s.norm();
    const MomentumVec shat = s / s_abs;
    const MomentumVec& c = kern.ak();
    const double a_par = shat.dot(c);
    const double cp = (c - a_par * shat).norm();
    const double c2 = c.squaredNorm();

    const double tol = cfg.rel_tol;
    // magnitude-weighted relative error of the inner levels
    double inner_err = 0.0;
    double inner_mag = 0.0;

    auto phi_integral = [&](double r, double u) {
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - u * u));
        const double r2 = r * r;
        const double st = s_abs * (a_par + r * u);
        const double common = c2 + r2 + 2.0 * r * a_par * u;
        const double wr = weight ? (*weight)(r) : 1.0;
        if (wr == 0.0) return 0.0;
        auto f = [&](double phi) {
            const double t2 = common + 2.0 * r * cp * sin_t * std::cos(phi);
            return kern.reduced(r2, std::max(t2, 0.0), st);
        };
        QuadResult q = cp * r == 0.0 ? QuadResult{std::numbers::pi * f(0.0), 0.0}
                                     : half_circle_trapezoid(f, tol / 16.0);
        inner_err += q.error;
        inner_mag += std::abs(q.value);
        return 2.0 * wr * q.value;
    };

    // Pieces are refined against an absolute target tol·(sum of coarse magnitudes), so a
    // sliver interval whose contribution is negligible cannot exhaust the panel budget.
    auto pieces = [&](auto&& g, const std::vector<double>& edges) {
        std::vector<QuadResult> coarse(edges.size() - 1);
        double mag = 0.0;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            coarse[i] = integrate_gk(g, edges[i], edges[i + 1], 1.0, 1u);
            mag += std::abs(coarse[i].value);
        }
        QuadResult out;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            QuadResult q = integrate_gk(g, edges[i], edges[i + 1], tol, cfg.max_panels,
                                     tol * mag / static_cast<double>(edges.size() - 1));
            out.value += q.value;
            out.error += q.error;
        }
        return out;
    };

    auto u_integral = [&](double r) {
        auto g = [&](double u) { return phi_integral(r, u); };
        const double ustar = r > 0.0 ? -a_par / r : -2.0;
        std::vector<double> edges{-1.0};
        if (ustar > -1.0 && ustar < 1.0) edges.push_back(ustar);
        edges.push_back(1.0);
        QuadResult q = pieces(g, edges);
        inner_err += q.error;
        inner_mag += std::abs(q.value);
        return q.value;
    };

    const double scale = std::sqrt(s_abs * s_abs + c2) + std::sqrt(kern.delta_term()) + 1e-300;
    breaks.push_back(std::abs(a_par));
    breaks.push_back(std::sqrt(c2));
    breaks.push_back(scale);
    breaks.push_back(4.0 * scale);
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double b) { return !(b > 0.0); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return std::abs(x - y) <= 1e-12 * y; }),
                 breaks.end());

    // radial pieces between break points; the last piece [last, last + 1) is the tail
    // r = last + S v / (1 - v)
    const double last = breaks.empty() ? 0.0 : breaks.back();
    const double tail_scale = std::max(last, scale);
    std::vector<double> edges{0.0};
    for (double b : breaks) edges.push_back(b);
    auto mixed = [&](double x) {
        if (x < last) return u_integral(x);
        const double v = x - last;
        if (v >= 1.0) return 0.0;
        const double w = 1.0 - v;
        return u_integral(last + tail_scale * v / w) * tail_scale / (w * w);
    };
    edges.push_back(last + 1.0);
    QuadResult total = pieces(mixed, edges);
    const double err = total.error;

    IntegralResult res;
    res.value = total.value;
    res.error = err + (inner_mag > 0.0 ? inner_err / inner_mag : 0.0) * std::abs(res.value);
    if (!std::isfinite(res.value) || !std::isfinite(res.error)) {
        std::ostringstream os;
        os << "lambda integral did not converge (value " << res.value << ")";
        throw AccuracyError(os.str(), res.value, res.error);
    }
    return res;
}

}  // namespace

IntegralResult integrate_lambda(const LambdaArgs& args, const QuadratureConfig& cfg) {
    args.validate();
    if (args.delta == 0.0 && args.q_mu == 0.0 && args.k_vec.squaredNorm() == 0.0 &&
        args.s_tilde.squaredNorm() > 0.0)
        throw DomainError("integrate_lambda: q_mu = K = 0 leaves the s-bracket at zero");
    LambdaKernel kern(args);
    return integrate_impl(kern, nullptr, {}, cfg);
}

IntegralResult integrate_lambda_weighted(const LambdaArgs& args, const std::function<double(double)>& w,
                                         const std::vector<double>& breaks, const QuadratureConfig& cfg) {
    args.validate();
    LambdaKernel kern(args);
    return integrate_impl(kern, &w, breaks, cfg);
}

}  // namespace polaron
