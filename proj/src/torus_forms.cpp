#include "polaron/torus_forms.hpp"

#include "polaron/errors.hpp"
#include "polaron/quadrature.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

struct ComplexSum {
    CompensatedSum re, im;
    void add(std::complex<double> v) {
        re += v.real();
        im += v.imag();
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

void check_match(const SingularAmplitude& xi, const ModelParams& p) {
    p.validate();
    if (xi.n() != p.n) throw PreconditionError("amplitude particle count differs from params.n");
    if (std::abs(xi.ell() - p.ell) > 1e-14 * p.ell)
        throw PreconditionError("amplitude box side differs from params.ell");
    if (!(p.mu > 0.0) && !xi.antisymmetric())
        throw DomainError("mu <= 0 requires an antisymmetric amplitude");
}

// slot of particle l inside the argument tuple of ξ_i (slot 0 holds k0 + k_i)
int slot_of(int l, int i) { return 1 + (l < i ? l : l - 1); }

std::string tuple_str(const std::vector<int>& k) {
    std::ostringstream os;
    os << '(';
    for (std::size_t a = 0; a < k.size(); ++a) os << (a ? "," : "") << k[a];
    os << ')';
    return os.str();
}

}  // namespace

LPeriodicResult l_periodic_detailed(const ModelParams& p, const MomentumVec& k1, double khat_sq,
                                    double rel_tol, int max_shells) {
    const double gamma = k1.squaredNorm() / (2.0 * (p.m + 1.0)) + 0.5 * khat_sq + p.mu;
    if (!(gamma > 0.0)) {
        std::ostringstream os;
        os << "l_periodic: gamma = " << gamma << " is not positive";
        throw DomainError(os.str());
    }
    LPeriodicResult r;
    r.continuum = l_continuum(p, k1, khat_sq);

    const double ell = p.ell;
    const MomentumVec a = p.m / (p.m + 1.0) * k1;
    const double c = 2.0 * p.m / (p.m + 1.0);
    const double eta = std::sqrt(c * gamma) * ell;
    const double pref = std::pow(2.0 * pi, 1.5) * std::sqrt(pi / 2.0) * c / ell;
    const double x = std::exp(-eta);

    // Σ_{j>K} (24 j + 2) x^j bounds the shells beyond K: shell j has 24j²+2 points with |n| >= j.
    auto tail = [&](int k) {
        const double xk = std::pow(x, k + 1);
        const double s1 = xk * ((k + 1) - k * x) / ((1.0 - x) * (1.0 - x));
        const double s0 = xk / (1.0 - x);
        return pref * (24.0 * s1 + 2.0 * s0);
    };

    CompensatedSum sum;
    double mag = 0.0;
    auto add = [&](int i, int j, int k) {
        const double rn = std::sqrt(double(i) * i + double(j) * j + double(k) * k);
        const double phase = std::cos(ell * (a.x() * i + a.y() * j + a.z() * k));
        const double v = pref * std::exp(-eta * rn) / rn;
        sum += phase * v;
        mag += v;
    };
    int kk = 0;
    while (true) {
        ++kk;
        for (int i = -kk; i <= kk; ++i)
            for (int j = -kk; j <= kk; ++j) {
                if (std::abs(i) == kk || std::abs(j) == kk) {
                    for (int k = -kk; k <= kk; ++k) add(i, j, k);
                } else {
                    add(i, j, -kk);
                    add(i, j, kk);
                }
            }
        const double tb = tail(kk);
        if (tb <= rel_tol * mag || tb == 0.0) {
            r.tail_bound = tb;
            break;
        }
        if (kk >= max_shells) {
            std::ostringstream os;
            os << "l_periodic: Poisson tail bound " << tb << " not reached after " << kk
               << " shells (l*sqrt(gamma) too small)";
            throw AccuracyError(os.str(), r.continuum - sum.value(), tb);
        }
    }
    r.shells = kk;
    r.correction = sum.value();
    r.value = r.continuum - r.correction;
    return r;
}

double l_periodic(const ModelParams& p, std::span<const MomentumVec> kvec) {
    if (kvec.empty()) throw PreconditionError("l_periodic: empty momentum tuple");
    double khat = 0.0;
    for (std::size_t i = 1; i < kvec.size(); ++i) khat += kvec[i].squaredNorm();
    return l_periodic_detailed(p, kvec[0], khat).value;
}

double t_dia_per(const SingularAmplitude& xi, const ModelParams& p, LPeriodicStats* stats) {
    check_match(xi, p);
    CompensatedSum s;
    for (const auto& [key, v] : xi.support()) {
        double khat = 0.0;
        for (long l = 1; l < xi.n(); ++l) khat += xi.momentum(key, static_cast<int>(l)).squaredNorm();
        const LPeriodicResult r = l_periodic_detailed(p, xi.momentum(key, 0), khat);
        s += std::norm(v) * r.value;
        if (stats) {
            ++stats->evaluations;
            stats->max_tail_bound = std::max(stats->max_tail_bound, r.tail_bound);
            stats->max_shells = std::max(stats->max_shells, r.shells);
        }
    }
    return s.value() * xi.measure();
}

double t_dia_tilde(std::span<const SingularAmplitude> xis, const ModelParams& p) {
    double s = 0.0;
    for (const auto& x : xis) s += t_dia_per(x, p);
    return s;
}

std::complex<double> t_off_pair(const SingularAmplitude& a, const SingularAmplitude& b, int i, int j,
                                const ModelParams& p) {
    check_match(a, p);
    check_match(b, p);
    const int n = static_cast<int>(p.n);
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw PreconditionError("t_off_pair: need i != j in [0, N)");

    // index b by (k0 + k_i + k_j, k_l for l outside {i, j})
    using Key = std::vector<int>;
    std::map<Key, std::vector<const std::pair<const LatticeTuple, std::complex<double>>*>> index;
    for (const auto& e : b.support()) {
        const auto& q = e.first;
        Key key(3 * (n - 1));
        const int sj = slot_of(j, i);
        for (int c = 0; c < 3; ++c) key[c] = q[c] + q[3 * sj + c];
        int pos = 1;
        for (int l = 0; l < n; ++l) {
            if (l == i || l == j) continue;
            for (int c = 0; c < 3; ++c) key[3 * pos + c] = q[3 * slot_of(l, i) + c];
            ++pos;
        }
        index[key].push_back(&e);
    }

    const double h = 2.0 * pi / p.ell;
    const double h2 = h * h;
    ComplexSum acc;
    Key key(3 * (n - 1));
    std::vector<int> k0(3), mom(3 * n);
    for (const auto& [pk, pv] : a.support()) {
        const int si = slot_of(i, j);
        for (int c = 0; c < 3; ++c) key[c] = pk[c] + pk[3 * si + c];
        int pos = 1;
        for (int l = 0; l < n; ++l) {
            if (l == i || l == j) continue;
            for (int c = 0; c < 3; ++c) key[3 * pos + c] = pk[3 * slot_of(l, j) + c];
            ++pos;
        }
        auto it = index.find(key);
        if (it == index.end()) continue;
        for (const auto* qe : it->second) {
            const auto& q = qe->first;
            // k_l from a's tuple for l != j, k_j from b's tuple, k0 = (k0 + k_j) - k_j
            for (int l = 0; l < n; ++l)
                for (int c = 0; c < 3; ++c)
                    mom[3 * l + c] = l == j ? q[3 * slot_of(j, i) + c] : pk[3 * slot_of(l, j) + c];
            double k0sq = 0.0, ksq = 0.0;
            for (int c = 0; c < 3; ++c) {
                k0[c] = pk[c] - mom[3 * j + c];
                k0sq += double(k0[c]) * k0[c];
            }
            for (int v : mom) ksq += double(v) * v;
            const double den = h2 * (k0sq / (2.0 * p.m) + 0.5 * ksq) + p.mu;
            if (!(den > 0.0)) {
                std::vector<int> all(k0);
                all.insert(all.end(), mom.begin(), mom.end());
                throw DomainError("resolvent denominator not positive at lattice point (k0, k) = " +
                                  tuple_str(all) + " (units 2pi/ell)");
            }
            acc.add(std::conj(pv) * qe->second / den);
        }
    }
    return acc.value() * a.measure() * h * h * h;
}

std::complex<double> t_off_tilde(std::span<const SingularAmplitude> xis, const ModelParams& p) {
    const int n = static_cast<int>(p.n);
    if (static_cast<int>(xis.size()) != n) throw PreconditionError("t_off_tilde: need N amplitudes");
    ComplexSum s;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s.add(-t_off_pair(xis[j], xis[i], i, j, p));
    return s.value();
}

std::complex<double> t_off_per_complex(const SingularAmplitude& xi, const ModelParams& p) {
    check_match(xi, p);
    const int n = static_cast<int>(p.n);
    ComplexSum s;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) {
                const double sign = (i + j) % 2 ? 1.0 : -1.0;
                s.add(sign * t_off_pair(xi, xi, i, j, p));
            }
    return s.value() / static_cast<double>(n);
}

double t_off_per(const SingularAmplitude& xi, const ModelParams& p) { return t_off_per_complex(xi, p).real(); }

TorusFormBreakdown t_alpha_per(const SingularAmplitude& xi, const ModelParams& p) {
    check_match(xi, p);
    TorusFormBreakdown b;
    const double nn = static_cast<double>(p.n);
    b.mu = p.mu;
    b.alpha_term = 2.0 * p.m / (p.m + 1.0) * p.alpha * nn * xi.norm_sq();
    b.t_dia = nn * t_dia_per(xi, p, &b.lper);
    b.t_off = nn * t_off_per(xi, p);
    b.total = b.alpha_term + b.t_dia + b.t_off;
    return b;
}

double g_norm_sq(const SingularAmplitude& xi, double nu, const ModelParams& p) {
    check_match(xi, p);
    const double c = 2.0 * p.m / (p.m + 1.0);
    const double pref = pi * pi * c * std::sqrt(c);
    CompensatedSum s;
    for (const auto& [key, v] : xi.support()) {
        double rad = xi.momentum(key, 0).squaredNorm() / (2.0 * (1.0 + p.m)) + nu;
        for (long l = 1; l < xi.n(); ++l) rad += 0.5 * xi.momentum(key, static_cast<int>(l)).squaredNorm();
        if (!(rad > 0.0)) throw DomainError("g_norm_sq: non-positive radicand");
        s += std::norm(v) * pref / std::sqrt(rad);
    }
    return s.value() * xi.measure();
}

}  // namespace polaron
