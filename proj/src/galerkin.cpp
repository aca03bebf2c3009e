#include "polaron/galerkin.hpp"

#include "polaron/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

double PotentialGrid::integral_abs_pow(double p) const {
    double s = 0.0;
    for (double v : values) s += std::pow(std::abs(v), p);
    return s * cell_volume();
}

void PotentialGrid::validate(bool require_nonpositive) const {
    if (!(L > 0.0) || m < 2) throw PreconditionError("PotentialGrid: need L > 0 and m >= 2");
    if (values.size() != static_cast<std::size_t>(m) * m * m)
        throw PreconditionError("PotentialGrid: value count must be m^3");
    for (double v : values) {
        if (!std::isfinite(v)) throw PreconditionError("PotentialGrid: non-finite value");
        if (require_nonpositive && v > 0.0) throw PreconditionError("PotentialGrid: V must be <= 0");
    }
}

PotentialGrid PotentialGrid::constant(double L, int m, double c) {
    PotentialGrid g;
    g.L = L;
    g.m = m;
    g.values.assign(static_cast<std::size_t>(m) * m * m, c);
    return g;
}

PotentialGrid random_potential(const BumpSpec& spec) {
    if (spec.bumps < 1 || !(spec.width_min > 0.0 && spec.width_max >= spec.width_min))
        throw PreconditionError("random_potential: bad bump spec");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    struct Bump {
        double cx, cy, cz, w, d;
    };
    std::vector<Bump> b;
    for (int i = 0; i < spec.bumps; ++i) {
        Bump x;
        x.cx = spec.L * (0.2 + 0.6 * unit(rng));
        x.cy = spec.L * (0.2 + 0.6 * unit(rng));
        x.cz = spec.L * (0.2 + 0.6 * unit(rng));
        x.w = spec.L * (spec.width_min + (spec.width_max - spec.width_min) * unit(rng));
        x.d = spec.depth * (0.2 + 0.8 * unit(rng));
        b.push_back(x);
    }
    PotentialGrid g = PotentialGrid::constant(spec.L, spec.m, 0.0);
    const double h = spec.L / spec.m;
    for (int i = 0; i < spec.m; ++i)
        for (int j = 0; j < spec.m; ++j)
            for (int k = 0; k < spec.m; ++k) {
                const double x = (i + 0.5) * h, y = (j + 0.5) * h, z = (k + 0.5) * h;
                double v = 0.0;
                for (const auto& q : b) {
                    const double r2 = (x - q.cx) * (x - q.cx) + (y - q.cy) * (y - q.cy) + (z - q.cz) * (z - q.cz);
                    v -= q.d * std::exp(-0.5 * r2 / (q.w * q.w));
                }
                g.at(i, j, k) = v;
            }
    return g;
}

std::vector<std::array<int, 3>> sine_basis(int basis_size) {
    if (basis_size < 1) throw PreconditionError("sine_basis: size must be >= 1");
    int r = 2;
    while (true) {
        std::vector<std::array<int, 3>> all;
        for (int i = 1; i <= r; ++i)
            for (int j = 1; j <= r; ++j)
                for (int k = 1; k <= r; ++k) all.push_back({i, j, k});
        auto key = [](const std::array<int, 3>& n) { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; };
        std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
            return key(a) != key(b) ? key(a) < key(b) : a < b;
        });
        // complete while the cutoff level lies inside the enumerated ball
        if (static_cast<int>(all.size()) >= basis_size && key(all[basis_size - 1]) < (r + 1) * (r + 1) + 2) {
            all.resize(basis_size);
            return all;
        }
        r *= 2;
    }
}

GalerkinResult galerkin_spectrum(const PotentialGrid& v, int basis_size) {
    v.validate(false);
    const auto basis = sine_basis(basis_size);
    int nmax = 0;
    for (const auto& n : basis) nmax = std::max({nmax, n[0], n[1], n[2]});
    const int u = 2 * nmax + 1;
    const int m = v.m;
    const double h = v.L / m;

    // cosine transform C(a, b, c) = h³ Σ V cos(aπx/L) cos(bπy/L) cos(cπz/L), built axis by axis
    std::vector<double> cs(static_cast<std::size_t>(u) * m);
    for (int a = 0; a < u; ++a)
        for (int i = 0; i < m; ++i) cs[a * m + i] = std::cos(a * pi * (i + 0.5) / m);
    std::vector<double> t1(static_cast<std::size_t>(u) * m * m, 0.0);
    for (int a = 0; a < u; ++a)
        for (int i = 0; i < m; ++i) {
            const double c = cs[a * m + i];
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) t1[(static_cast<std::size_t>(a) * m + j) * m + k] += c * v.at(i, j, k);
        }
    std::vector<double> t2(static_cast<std::size_t>(u) * u * m, 0.0);
    for (int a = 0; a < u; ++a)
        for (int b = 0; b < u; ++b)
            for (int j = 0; j < m; ++j) {
                const double c = cs[b * m + j];
                for (int k = 0; k < m; ++k)
                    t2[(static_cast<std::size_t>(a) * u + b) * m + k] += c * t1[(static_cast<std::size_t>(a) * m + j) * m + k];
            }
    std::vector<double> ct(static_cast<std::size_t>(u) * u * u, 0.0);
    const double h3 = h * h * h;
    for (int a = 0; a < u; ++a)
        for (int b = 0; b < u; ++b)
            for (int c = 0; c < u; ++c) {
                double s = 0.0;
                for (int k = 0; k < m; ++k) s += cs[c * m + k] * t2[(static_cast<std::size_t>(a) * u + b) * m + k];
                ct[(static_cast<std::size_t>(a) * u + b) * u + c] = s * h3;
            }
    auto cval = [&](int a, int b, int c) { return ct[(static_cast<std::size_t>(a) * u + b) * u + c]; };

    const int nb = static_cast<int>(basis.size());
    const double unit = pi * pi / (v.L * v.L);
    const double pref = std::pow(2.0 / v.L, 3) / 8.0;
    Eigen::MatrixXd hm(nb, nb);
    for (int p = 0; p < nb; ++p)
        for (int q = p; q < nb; ++q) {
            const auto& a = basis[p];
            const auto& b = basis[q];
            double s = 0.0;
            for (int sig = 0; sig < 8; ++sig) {
                int d[3];
                double sign = 1.0;
                for (int j = 0; j < 3; ++j) {
                    if (sig >> j & 1) {
                        d[j] = a[j] + b[j];
                        sign = -sign;
                    } else {
                        d[j] = std::abs(a[j] - b[j]);
                    }
                }
                s += sign * cval(d[0], d[1], d[2]);
            }
            hm(p, q) = hm(q, p) = pref * s;
        }
    for (int p = 0; p < nb; ++p) {
        const auto& a = basis[p];
        hm(p, p) += unit * (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("galerkin_spectrum: eigensolver failed");
    GalerkinResult r;
    r.basis_size = nb;
    r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + nb);
    const auto& top = basis.back();
    r.top_basis_level = unit * (top[0] * top[0] + top[1] * top[1] + top[2] * top[2]);
    return r;
}

}  // namespace polaron
