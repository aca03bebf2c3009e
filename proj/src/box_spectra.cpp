#include "polaron/box_spectra.hpp"

#include "polaron/errors.hpp"
#include "polaron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

void check_side(double L) {
    if (!(L > 0.0)) throw PreconditionError("box side L must be positive");
}

// smallest s_max whose histogram holds at least `count` states
long s_max_for(long count) {
    long s = std::max<long>(3, static_cast<long>(std::pow(6.0 * count / pi, 2.0 / 3.0)) + 3);
    while (true) {
        const auto h = n_sq_histogram(s);
        std::int64_t c = 0;
        for (auto v : h) c += v;
        if (c >= count) return s;
        s *= 2;
    }
}

}  // namespace

std::vector<std::int64_t> n_sq_histogram(long s_max) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(std::max<long>(s_max, 0) + 1), 0);
    const long nmax = static_cast<long>(std::sqrt(static_cast<double>(s_max)));
    for (long i = 1; i <= nmax; ++i)
        for (long j = 1; i * i + j * j + 1 <= s_max; ++j)
            for (long k = 1; i * i + j * j + k * k <= s_max; ++k) ++h[i * i + j * j + k * k];
    return h;
}

std::vector<double> DirichletSpectrum::eigenvalues(long count) const {
    std::vector<double> out;
    for (const auto& l : levels)
        for (int r = 0; r < l.multiplicity && static_cast<long>(out.size()) < count; ++r)
            out.push_back(l.value);
    return out;
}

DirichletSpectrum dirichlet_levels(double L, long count) {
    check_side(L);
    if (count < 1) throw PreconditionError("dirichlet_levels: count must be >= 1");
    const long smax = s_max_for(count);
    const auto h = n_sq_histogram(smax);
    DirichletSpectrum sp;
    sp.L = L;
    long taken = 0;
    for (long s = 0; s <= smax && taken < count; ++s) {
        if (h[s] == 0) continue;
        DirichletLevel lv;
        lv.n_sq = s;
        lv.value = pi * pi * static_cast<double>(s) / (L * L);
        lv.multiplicity = static_cast<int>(h[s]);
        // lexicographically smallest representative
        bool found = false;
        for (int i = 1; !found && i * i < s; ++i)
            for (int j = 1; !found && i * i + j * j < s; ++j) {
                const long rest = s - i * i - j * j;
                const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rest))));
                if (k >= 1 && static_cast<long>(k) * k == rest) {
                    lv.representative = {i, j, k};
                    found = true;
                }
            }
        sp.levels.push_back(lv);
        taken += lv.multiplicity;
    }
    return sp;
}

LowestSum sum_lowest(double L, long n) {
    check_side(L);
    if (n < 1) throw PreconditionError("sum_lowest: N must be >= 1");
    const long smax = s_max_for(n);
    const auto h = n_sq_histogram(smax);
    long double acc = 0.0L;
    long left = n;
    long last = 0;
    for (long s = 0; s <= smax && left > 0; ++s) {
        const long take = std::min<long>(left, static_cast<long>(h[s]));
        if (take == 0) continue;
        acc += static_cast<long double>(s) * take;
        left -= take;
        last = s;
    }
    LowestSum out;
    const double unit = pi * pi / (L * L);
    out.laplacian = static_cast<double>(acc) * unit;
    out.half = 0.5 * out.laplacian;
    out.e_n = static_cast<double>(last) * unit;
    return out;
}

long level_count(double L, double mu) {
    check_side(L);
    if (mu < 0.0) return 0;
    const long smax = static_cast<long>(std::floor(mu * L * L / (pi * pi) * (1.0 + 1e-15)));
    const auto h = n_sq_histogram(smax);
    long c = 0;
    for (long s = 0; s <= smax; ++s)
        if (pi * pi * static_cast<double>(s) / (L * L) <= mu) c += static_cast<long>(h[s]);
    return c;
}

double rho0(const MomentumVec& x, double L, double mu) {
    check_side(L);
    for (int j = 0; j < 3; ++j)
        if (!(x[j] >= 0.0 && x[j] <= L)) throw DomainError("rho0: point outside the box");
    if (mu < 3.0 * pi * pi / (L * L)) return 0.0;
    const double smax = mu * L * L / (pi * pi);
    const int nmax = static_cast<int>(std::sqrt(smax));
    std::array<std::vector<double>, 3> s2;
    for (int j = 0; j < 3; ++j) {
        s2[j].resize(nmax + 1);
        for (int n = 1; n <= nmax; ++n) {
            const double v = std::sin(n * pi * x[j] / L);
            s2[j][n] = v * v;
        }
    }
    CompensatedSum acc;
    for (int i = 1; i <= nmax; ++i)
        for (int j = 1; j <= nmax; ++j)
            for (int k = 1; k <= nmax; ++k) {
                const double s = static_cast<double>(i * i + j * j + k * k);
                if (pi * pi * s / (L * L) > mu) break;
                acc += s2[0][i] * s2[1][j] * s2[2][k];
            }
    return std::pow(2.0 / L, 3) * acc.value();
}

std::int64_t half_lattice_ball_count(double r, bool closed) {
    if (r <= 0.0) return 0;
    // n ∈ N³ with |n|/2 < r, i.e. |n|² < 4r²
    const double lim = 4.0 * r * r;
    const long smax = static_cast<long>(std::ceil(lim)) + 1;
    const auto h = n_sq_histogram(smax);
    std::int64_t c = 0;
    for (long s = 0; s <= smax; ++s) {
        const double v = static_cast<double>(s);
        if (closed ? v <= lim : v < lim) c += h[s];
    }
    return c;
}

ShellCount shell_count_f(double e, double mu, double L) {
    check_side(L);
    if (e < 0.0) throw PreconditionError("shell_count_f: e must be >= 0");
    if (!(mu > 0.0)) throw PreconditionError("shell_count_f: mu must be positive");
    const double unit = pi * pi / (L * L);
    const long smax = static_cast<long>(std::ceil((mu + e) / unit)) + 1;
    const auto h = n_sq_histogram(smax);
    ShellCount out;
    for (long s = 0; s <= smax; ++s)
        if (h[s] && std::abs(unit * static_cast<double>(s) - mu) < e) out.count += h[s];
    out.value = std::pow(2.0 / L, 3) * static_cast<double>(out.count);
    return out;
}

double r_function(double rho, double mu, double L) {
    check_side(L);
    if (rho < 0.0) throw PreconditionError("r_function: rho must be >= 0");
    if (!(mu > 0.0)) throw PreconditionError("r_function: mu must be positive");
    if (rho == 0.0) return 0.0;
    const double unit = pi * pi / (L * L);
    const double w = std::pow(2.0 / L, 3);
    // f(e) >= ρ once every shell within distance e of μ holds more than ρ/w states; grow until
    // the enumerated breakpoints reach that point.
    long smax = static_cast<long>(std::ceil(2.0 * mu / unit)) + 8;
    while (true) {
        const auto h = n_sq_histogram(smax);
        std::map<double, std::int64_t> jumps;  // distance |p² - μ| -> states at that distance
        for (long s = 0; s <= smax; ++s)
            if (h[s]) jumps[std::abs(unit * static_cast<double>(s) - mu)] += h[s];
        // every state with |p² - μ| below the largest enumerated distance on the upper side is known
        const double reach = unit * static_cast<double>(smax) - mu;
        CompensatedSum acc;
        double prev = 0.0;
        std::int64_t states = 0;
        bool done = false;
        for (const auto& [d, c] : jumps) {
            if (d > reach) break;
            const double f = w * static_cast<double>(states);
            const double g = std::sqrt(rho) - std::sqrt(f);
            if (g <= 0.0) {
                done = true;
                break;
            }
            acc += g * g * (d - prev);
            prev = d;
            states += c;
        }
        if (!done && w * static_cast<double>(states) >= rho) done = true;
        if (done) return acc.value();
        smax *= 2;
    }
}

double phi_sum(const MomentumVec& k, double mu, double L) {
    check_side(L);
    if (mu < 3.0 * pi * pi / (L * L))
        throw PreconditionError("phi_sum: mu below the lowest Dirichlet level 3 pi^2 / L^2");
    const double lo = mu - std::sqrt(mu) / L;
    const double hi = mu + std::sqrt(mu) / L;
    if (lo <= 0.0) return 0.0;
    const double h = pi / L;
    const int nmax = static_cast<int>(std::sqrt(lo) / h) + 1;
    CompensatedSum acc;
    for (int i = -nmax; i <= nmax; ++i)
        for (int j = -nmax; j <= nmax; ++j)
            for (int l = -nmax; l <= nmax; ++l) {
                const MomentumVec q = h * MomentumVec(i, j, l);
                const double q2 = q.squaredNorm();
                if (!(q2 < lo)) continue;
                const double d2 = (q - k).squaredNorm();
                if (!(d2 > hi)) continue;
                acc += 1.0 / std::sqrt((mu - q2) * (d2 - mu));
            }
    return acc.value() / (L * L * L);
}

}  // namespace polaron
