#include "polaron/bounds.hpp"

#include "polaron/box_spectra.hpp"
#include "polaron/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

// squared norms of Z³ in ascending order with multiplicity, at least `count` of them
std::vector<std::pair<long, long>> z3_shells(long count) {
    long smax = std::max<long>(4, static_cast<long>(std::pow(3.0 * count / (4.0 * pi), 2.0 / 3.0)) + 4);
    while (true) {
        const long r = static_cast<long>(std::sqrt(static_cast<double>(smax))) + 1;
        std::map<long, long> h;
        for (long i = -r; i <= r; ++i)
            for (long j = -r; j <= r; ++j)
                for (long k = -r; k <= r; ++k) {
                    const long s = i * i + j * j + k * k;
                    if (s <= smax) ++h[s];
                }
        // the cube [-r, r]³ holds every point with |n|² <= smax, so these shells are complete
        long total = 0;
        for (const auto& [s, c] : h) total += c;
        if (total >= count) return {h.begin(), h.end()};
        smax *= 2;
    }
}

std::string condition_message(double lambda_m, double ratio) {
    std::ostringstream os;
    os.precision(17);
    os << "condition 1 - kappa/c_T > Lambda(m) violated: Lambda(m) = " << lambda_m << ", kappa/c_T = " << ratio;
    return os.str();
}

void check_common(const BoundInputs& in) {
    if (!(in.m > 0.0)) throw PreconditionError("bound: m must be positive");
    if (in.n < 1) throw PreconditionError("bound: N must be >= 1");
    if (!std::isfinite(in.alpha)) throw PreconditionError("bound: alpha must be finite");
    if (!(in.lambda_m >= 0.0)) throw PreconditionError("bound: Lambda(m) must be non-negative");
}

double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace

double min_q_sq(long n) {
    if (n < 1) throw PreconditionError("min_q_sq: N must be >= 1");
    const auto shells = z3_shells(n - 1);
    long left = n - 1;
    long double acc = 0.0L;
    for (const auto& [s, c] : shells) {
        const long take = std::min(left, c);
        acc += static_cast<long double>(s) * take;
        left -= take;
        if (left == 0) break;
    }
    return 0.5 * static_cast<double>(acc) * 4.0 * pi * pi;
}

double enumerate_c_t(long n_max) {
    if (n_max < 3) throw PreconditionError("enumerate_c_t: n_max must be >= 3");
    const auto shells = z3_shells(n_max - 1);
    double best = std::numeric_limits<double>::infinity();
    long used = 0;
    long double acc = 0.0L;
    // walk the points in shell order; after N - 1 points the sum is Q²_min(N)
    for (const auto& [s, c] : shells) {
        for (long r = 0; r < c && used < n_max - 1; ++r) {
            acc += s;
            ++used;
            const long n = used + 1;
            if (n > 2) {
                const double q2 = 0.5 * static_cast<double>(acc) * 4.0 * pi * pi;
                best = std::min(best, q2 / std::pow(static_cast<double>(n), 5.0 / 3.0));
            }
        }
        if (used >= n_max - 1) break;
    }
    return best;
}

double q_mu_sq(const LPerSample& s) { return 0.5 * s.khat_sq + s.mu; }

double fit_c_l_prime(const std::vector<LPerSample>& sweep) {
    if (sweep.empty()) throw PreconditionError("fit_c_l_prime: sweep is empty");
    double c = 0.0;
    for (const auto& s : sweep) {
        const double q2 = q_mu_sq(s);
        if (!(q2 > 0.0)) throw PreconditionError("fit_c_l_prime: sample with Q_mu^2 <= 0");
        c = std::max(c, s.diff * q2 * s.ell * s.ell * s.ell);
    }
    return c;
}

double n_zero(double m, double kappa, double lambda_m, const ConstantsRegistry& reg) {
    const double ratio = kappa / reg.c_t.value;
    const double margin = 1.0 - ratio - lambda_m;
    if (!(margin > 0.0)) throw ConditionError(condition_message(lambda_m, ratio));
    const double one = 1.0 - ratio;
    return std::pow(margin * m * one * one / reg.c_lambda.value, -4.5);
}

double bound_unconfined(double m, double alpha, double lambda_m) {
    if (!(m > 0.0)) throw PreconditionError("bound_unconfined: m must be positive");
    if (!(lambda_m < 1.0)) throw StabilityRegimeError("bound_unconfined: requires Lambda(m) < 1");
    if (alpha >= 0.0) return 0.0;
    const double t = alpha / (2.0 * pi * pi * (1.0 - lambda_m));
    return -(m + 1.0) / (2.0 * m) * t * t;
}

double default_kappa(double lambda_m, const ConstantsRegistry& reg, double nu) {
    if (!(nu > 0.0 && nu < 1.0)) throw PreconditionError("default_kappa: nu must lie in (0, 1)");
    return reg.c_t.value * nu * (1.0 - lambda_m);
}

double mu_apriori(const BoundInputs& in, const ConstantsRegistry& reg) {
    const double ct = reg.c_t.value;
    const double ratio = in.kappa / ct;
    const double one = 1.0 - ratio;
    const double n = static_cast<double>(in.n);
    const double n53 = std::pow(n, 5.0 / 3.0);
    const double shift = (in.m + 1.0) / (2.0 * in.m) * reg.c_l_prime.value / (ct - in.kappa) / n53 / in.ell;
    const double a = neg_part(in.alpha - shift);
    const double den = 1.0 - ratio - in.lambda_m - reg.c_lambda.value / in.m / (one * one) * std::pow(n, -2.0 / 9.0);
    if (!(den > 0.0)) throw ConditionError("mu_apriori: N <= N0, the a priori denominator is not positive");
    return -in.kappa * n53 / (in.ell * in.ell) +
           1.0 / (4.0 * std::pow(pi, 4)) * (in.m + 1.0) / (2.0 * in.m) * one * one * a * a / (den * den);
}

BoundReport bound_confined(const BoundInputs& in, const ConstantsRegistry& reg) {
    check_common(in);
    reg.validate();
    if (!(in.kappa > 0.0)) throw PreconditionError("bound_confined: kappa must be positive");
    if (!(in.ell > 0.0)) throw PreconditionError("bound_confined: ell must be positive");
    BoundReport r;
    r.kind = "confined";
    r.in = in;
    r.registry_hash = reg.hash();
    r.ratio = in.kappa / reg.c_t.value;
    r.margin = 1.0 - r.ratio - in.lambda_m;
    r.n0 = n_zero(in.m, in.kappa, in.lambda_m, reg);
    const double n = static_cast<double>(in.n);
    if (!(n > r.n0)) {
        std::ostringstream os;
        os.precision(17);
        os << "bound_confined: N = " << in.n << " <= N0 = " << r.n0 << "; use bound_unconfined instead";
        throw ConditionError(os.str());
    }
    r.c_l = reg.c_l();
    r.alpha_neg = neg_part(in.alpha - r.c_l / in.ell);
    r.kinetic = in.kappa * std::pow(n, 5.0 / 3.0) / (in.ell * in.ell);
    const double shrink = 1.0 - std::pow(r.n0 / n, 2.0 / 9.0);
    r.penalty = 1.0 / (4.0 * std::pow(pi, 4)) * (in.m + 1.0) / (2.0 * in.m) * r.alpha_neg * r.alpha_neg /
                (r.margin * r.margin * shrink * shrink);
    r.bound = r.kinetic - r.penalty;
    r.mu_star = mu_apriori(in, reg);
    return r;
}

BoundReport bound_main(const BoundInputs& in, const ConstantsRegistry& reg) {
    check_common(in);
    reg.validate();
    if (!(in.lambda_m < 1.0)) throw StabilityRegimeError("bound_main: requires Lambda(m) < 1");
    if (!(in.lbig > 0.0)) throw PreconditionError("bound_main: L must be positive");
    BoundReport r;
    r.kind = "main";
    r.in = in;
    r.registry_hash = reg.hash();
    const LowestSum e = sum_lowest(in.lbig, in.n);
    r.kinetic = e.half;
    r.e_n = e.e_n;
    r.rho_bar = static_cast<double>(in.n) / (in.lbig * in.lbig * in.lbig);
    r.alpha_neg = neg_part(in.alpha);
    const double gap = 1.0 - in.lambda_m;
    const double c = reg.theorem_const.value;
    r.density_term = c * std::pow(r.rho_bar, 2.0 / 3.0) / std::pow(gap, 4.5);
    r.penalty = c * r.alpha_neg * r.alpha_neg / (gap * gap);
    r.bound = r.kinetic - (r.density_term + r.penalty);
    return r;
}

EllChoice select_ell(double lbig, double rho_bar) {
    if (!(lbig > 0.0 && rho_bar > 0.0)) throw PreconditionError("select_ell: L and rho must be positive");
    const double s = lbig * std::cbrt(rho_bar);
    if (s < 0.5) throw PreconditionError("select_ell: L rho^{1/3} < 1/2, no admissible ell");
    EllChoice c;
    c.cells = std::max<long>(1, std::lround(s));
    c.ell = lbig / static_cast<double>(c.cells);
    c.scaled = s / static_cast<double>(c.cells);
    return c;
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["inputs"] = {{"m", in.m},         {"kappa", in.kappa}, {"N", in.n},
                   {"ell", in.ell},     {"L", in.lbig},      {"alpha", in.alpha},
                   {"lambda_m", in.lambda_m}};
    j["registry_hash"] = registry_hash;
    nlohmann::json t;
    if (kind == "confined") {
        t = {{"kappa_over_c_T", ratio}, {"margin", margin}, {"N0", n0},         {"c_L", c_l},
             {"alpha_neg", alpha_neg},  {"kinetic", kinetic}, {"penalty", penalty}, {"mu_star", mu_star}};
    } else {
        t = {{"E_D_N", kinetic},         {"e_N", e_n},          {"rho_bar", rho_bar},
             {"alpha_neg", alpha_neg},   {"density_term", density_term}, {"penalty", penalty}};
    }
    j["terms"] = t;
    j["bound"] = bound;
    return j.dump(2);
}

}  // namespace polaron
