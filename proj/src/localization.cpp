#include "polaron/localization.hpp"

#include "polaron/errors.hpp"
#include "polaron/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <vector>

namespace polaron {

namespace {

double default_bump(double r, double eps) {
    const double s = r / eps;
    if (s >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

double smooth_step(double x) {
    auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = f(x), b = f(1.0 - x);
    return a / (a + b);
}

double default_v(double t, double eps) {
    if (t < -eps) return smooth_step((t + 2.0 * eps) / eps);
    if (t > 1.0 + eps) return smooth_step((1.0 + 2.0 * eps - t) / eps);
    return 1.0;
}

// P(c) = ∫_{u_j > c_j} η(|u|) du for offsets c_j = i_j / G, i_j ∈ [-E, E], with ∫η = 1.
// Per axis at most one face of a cube meets the ε-ball (ε < 1/4), so every numerator of
// J_i² is one of these orthant integrals after reflecting the axis.
class OrthantTable {
public:
    OrthantTable(const std::function<double(double)>& eta, double eps, int grid)
        : e_(static_cast<int>(std::ceil(eps * grid - 1e-9))), w_(2 * e_ + 1) {
        using rule = boost::math::quadrature::gauss<double, 40>;
        const auto& x = rule::abscissa();
        const auto& wt = rule::weights();
        // symmetric rule stored as the non-negative half
        std::vector<double> nodes, weights;
        for (std::size_t k = 0; k < x.size(); ++k) {
            nodes.push_back(x[k]);
            weights.push_back(wt[k]);
            if (x[k] != 0.0) {
                nodes.push_back(-x[k]);
                weights.push_back(wt[k]);
            }
        }
        auto integral = [&](double c1, double c2, double c3) {
            const std::array<double, 3> lo{std::max(c1, -eps), std::max(c2, -eps), std::max(c3, -eps)};
            for (double v : lo)
                if (v >= eps) return 0.0;
            // nested limits follow the ball, so every integrand is smooth on its interval
            auto rule = [&](double a, double b, auto&& f) {
                if (!(b > a)) return 0.0;
                const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
                double s = 0.0;
                for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(mid + half * nodes[k]);
                return half * s;
            };
            // the inner integrals switch off where a lower limit meets the sphere
            auto pieces = [&](double a, double b, std::vector<double> cuts, auto&& f) {
                cuts.push_back(a);
                cuts.push_back(b);
                std::sort(cuts.begin(), cuts.end());
                double s = 0.0;
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                    if (cuts[k] >= a && cuts[k + 1] <= b) s += rule(cuts[k], cuts[k + 1], f);
                return s;
            };
            auto edge = [&](double r2) { return std::sqrt(std::max(0.0, eps * eps - r2)); };
            std::vector<double> cuts1;
            if (lo[1] > 0.0) cuts1.push_back(edge(lo[1] * lo[1]));
            if (lo[2] > 0.0) cuts1.push_back(edge(lo[2] * lo[2]));
            if (lo[1] > 0.0 && lo[2] > 0.0) cuts1.push_back(edge(lo[1] * lo[1] + lo[2] * lo[2]));
            const double acc = pieces(lo[0], eps, cuts1, [&](double u1) {
                std::vector<double> cuts2;
                if (lo[2] > 0.0) cuts2.push_back(edge(u1 * u1 + lo[2] * lo[2]));
                const double e2 = edge(u1 * u1);
                return pieces(std::max(lo[1], -e2), e2, cuts2, [&](double u2) {
                    const double r2 = u1 * u1 + u2 * u2;
                    const double e3 = edge(r2);
                    return rule(std::max(lo[2], -e3), e3, [&](double u3) { return eta(std::sqrt(r2 + u3 * u3)); });
                });
            });
            return acc;
        };
        table_.assign(static_cast<std::size_t>(w_) * w_ * w_, 0.0);
        for (int i = -e_; i <= e_; ++i)
            for (int j = i; j <= e_; ++j)
                for (int k = j; k <= e_; ++k) {
                    const double v = integral(double(i) / grid, double(j) / grid, double(k) / grid);
                    const int p[3] = {i, j, k};
                    std::array<int, 3> perm{0, 1, 2};
                    do {
                        slot(p[perm[0]], p[perm[1]], p[perm[2]]) = v;
                    } while (std::next_permutation(perm.begin(), perm.end()));
                }
        const double total = slot(-e_, -e_, -e_);
        if (!(total > 0.0)) throw PreconditionError("bump profile has zero integral");
        for (auto& v : table_) v /= total;
    }

    int reach() const { return e_; }
    double operator()(int i, int j, int k) const { return table_[index(i, j, k)]; }

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i + e_) * w_ + (j + e_)) * w_ + (k + e_);
    }
    double& slot(int i, int j, int k) { return table_[index(i, j, k)]; }

    int e_;
    int w_;
    std::vector<double> table_;
};

struct AxisEntry {
    int cell;
    int idx;
};

// Cubes along one axis whose J factor is nonzero at grid coordinate k, with table offsets.
struct AxisEntries {
    std::array<AxisEntry, 3> e;
    int n = 0;
};

class Partition {
public:
    explicit Partition(const PartitionSpec& spec)
        : g_(spec.grid),
          k_(spec.cells_per_axis()),
          table_(spec.bump ? spec.bump : [eps = spec.epsilon](double r) { return default_bump(r, eps); },
                 spec.epsilon, spec.grid) {}

    int grid() const { return g_; }
    int cells() const { return k_; }
    int reach() const { return table_.reach(); }

    AxisEntries axis(long k) const {
        AxisEntries out;
        const int e = table_.reach();
        const long c_lo = std::max<long>(0, (k - e) / g_ - 1);
        const long c_hi = std::min<long>(k_ - 1, (k + e) / g_ + 1);
        for (long c = c_lo; c <= c_hi; ++c) {
            const long a = k - c * g_;
            long idx = (2 * a <= g_) ? -a : a - g_;
            if (idx >= e) continue;
            idx = std::max<long>(idx, -e);
            out.e[out.n++] = {static_cast<int>(c), static_cast<int>(idx)};
        }
        return out;
    }

    double den(const AxisEntries ax[3]) const {
        double s = 0.0;
        for (int a = 0; a < ax[0].n; ++a)
            for (int b = 0; b < ax[1].n; ++b)
                for (int c = 0; c < ax[2].n; ++c) s += table_(ax[0].e[a].idx, ax[1].e[b].idx, ax[2].e[c].idx);
        return s;
    }

    /// J_cell at point p; 0 when the cube does not reach p.
    double value(const int cell[3], const long p[3]) const {
        AxisEntries ax[3] = {axis(p[0]), axis(p[1]), axis(p[2])};
        const double d = den(ax);
        if (!(d > 0.0)) throw DomainError("partition: no cube reaches the grid point");
        int idx[3];
        for (int j = 0; j < 3; ++j) {
            idx[j] = std::numeric_limits<int>::max();
            for (int q = 0; q < ax[j].n; ++q)
                if (ax[j].e[q].cell == cell[j]) idx[j] = ax[j].e[q].idx;
            if (idx[j] == std::numeric_limits<int>::max()) return 0.0;
        }
        return std::sqrt(table_(idx[0], idx[1], idx[2]) / d);
    }

    /// ∇J_cell at p by centred fourth-order differences, in units of 1/h.
    std::array<double, 3> grad(const int cell[3], const long p[3]) const {
        std::array<double, 3> g{};
        for (int j = 0; j < 3; ++j) {
            long q[3] = {p[0], p[1], p[2]};
            auto at = [&](int s) {
                q[j] = p[j] + s;
                return value(cell, q);
            };
            g[j] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / 12.0;
        }
        return g;
    }

private:
    int g_;
    int k_;
    OrthantTable table_;
};

void check_v_profile(const std::function<double(double)>& v, double eps) {
    const int samples = 4096;
    for (int s = 0; s <= samples; ++s) {
        const double t = -1.0 + 3.0 * s / samples;
        const double y = v(t);
        if (!(y >= 0.0 && y <= 1.0)) throw PreconditionError("V profile must take values in [0, 1]");
        if (t >= -eps && t <= 1.0 + eps && y != 1.0)
            throw PreconditionError("V profile must equal 1 on [-eps, 1+eps]");
        if ((t < -2.0 * eps || t > 1.0 + 2.0 * eps) && y != 0.0)
            throw PreconditionError("V profile must vanish outside [-2 eps, 1+2 eps]");
    }
}

}  // namespace

int PartitionSpec::cells_per_axis() const {
    const double r = L / ell;
    return static_cast<int>(std::lround(r));
}

void PartitionSpec::validate() const {
    if (!(L > 0.0 && ell > 0.0)) throw PreconditionError("partition: L and ell must be positive");
    const double r = L / ell;
    if (std::lround(r) < 1 || std::abs(r - std::lround(r)) > 1e-9 * r)
        throw PreconditionError("partition: L / ell must be a positive integer");
    if (!(epsilon > 0.0 && epsilon < 0.25)) throw PreconditionError("partition: epsilon must lie in (0, 1/4)");
    if (grid < 64) throw PreconditionError("partition: at least 64 grid points per ell are required");
    if (bump) {
        bool positive = false;
        for (int s = 0; s <= 1024; ++s) {
            const double r2 = 2.0 * epsilon * s / 1024;
            const double v = bump(r2);
            if (!(v >= 0.0)) throw PreconditionError("bump profile must be non-negative");
            if (r2 >= epsilon && v != 0.0) throw PreconditionError("bump profile must vanish for r >= eps");
            positive = positive || v > 0.0;
        }
        if (!positive) throw PreconditionError("bump profile vanishes identically");
    }
}

PartitionReport build_partition(const PartitionSpec& spec) {
    spec.validate();
    const Partition part(spec);
    const int g = part.grid(), kc = part.cells();
    const int e = part.reach();
    const long n = static_cast<long>(g) * kc;

    PartitionReport rep;
    rep.cells_per_axis = kc;
    rep.h = spec.ell / g;
    const double eps = spec.epsilon;

    struct Slab {
        double closure = 0.0, core = 0.0, leak = 0.0, grad_sum = 0.0;
        std::vector<double> cell_max;
    };
    std::vector<Slab> slabs(static_cast<std::size_t>(n + 1));
    const std::size_t ncell = static_cast<std::size_t>(kc) * kc * kc;

    // a point is deep inside a single cube when its whole stencil sees only that cube, fully
    auto deep = [&](long k) {
        const long a = k % g;
        return k > 0 && k < n && a >= e + 2 && a <= g - e - 2;
    };

    parallel_for(static_cast<std::size_t>(n + 1), spec.jobs, [&](std::size_t sx) {
        Slab& sl = slabs[sx];
        sl.cell_max.assign(ncell, 0.0);
        long p[3];
        p[0] = static_cast<long>(sx);
        const AxisEntries ax0 = part.axis(p[0]);
        for (p[1] = 0; p[1] <= n; ++p[1]) {
            const AxisEntries ax1 = part.axis(p[1]);
            for (p[2] = 0; p[2] <= n; ++p[2]) {
                if (deep(p[0]) && deep(p[1]) && deep(p[2])) continue;
                const AxisEntries ax[3] = {ax0, ax1, part.axis(p[2])};
                double sum_sq = 0.0, grad_sum = 0.0;
                for (int a = 0; a < ax[0].n; ++a)
                    for (int b = 0; b < ax[1].n; ++b)
                        for (int c = 0; c < ax[2].n; ++c) {
                            const int cell[3] = {ax[0].e[a].cell, ax[1].e[b].cell, ax[2].e[c].cell};
                            const double j = part.value(cell, p);
                            sum_sq += j * j;
                            // position relative to the cube, in units of ℓ
                            double dist2 = 0.0;
                            bool core = true;
                            for (int d = 0; d < 3; ++d) {
                                const double t = double(p[d] - long(cell[d]) * g) / g;
                                const double out = std::max({0.0, -t, t - 1.0});
                                dist2 += out * out;
                                core = core && t > eps && t < 1.0 - eps;
                            }
                            if (core) sl.core = std::max(sl.core, std::abs(j - 1.0));
                            if (dist2 >= eps * eps) sl.leak = std::max(sl.leak, j);
                            const auto gr = part.grad(cell, p);
                            const double gsq = (gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2]) * g * g;  // ×ℓ²
                            grad_sum += gsq;
                            auto& cm = sl.cell_max[(static_cast<std::size_t>(cell[0]) * kc + cell[1]) * kc + cell[2]];
                            cm = std::max(cm, gsq);
                        }
                sl.closure = std::max(sl.closure, std::abs(sum_sq - 1.0));
                sl.grad_sum = std::max(sl.grad_sum, grad_sum);
            }
        }
    });

    rep.c_eta_cell.assign(ncell, 0.0);
    double grad_sum = 0.0;
    for (const auto& sl : slabs) {
        rep.closure_error = std::max(rep.closure_error, sl.closure);
        rep.core_error = std::max(rep.core_error, sl.core);
        rep.support_leak = std::max(rep.support_leak, sl.leak);
        grad_sum = std::max(grad_sum, sl.grad_sum);
        for (std::size_t i = 0; i < ncell; ++i) rep.c_eta_cell[i] = std::max(rep.c_eta_cell[i], sl.cell_max[i]);
    }
    rep.c_eta = *std::max_element(rep.c_eta_cell.begin(), rep.c_eta_cell.end());
    rep.max_grad_sum = grad_sum / (spec.ell * spec.ell);
    return rep;
}

double partition_value(const PartitionSpec& spec, const int cell[3], const long point[3]) {
    spec.validate();
    const Partition part(spec);
    for (int j = 0; j < 3; ++j)
        if (cell[j] < 0 || cell[j] >= part.cells()) throw PreconditionError("partition_value: cell index out of range");
    return part.value(cell, point);
}

void write_partition_slice_csv(std::ostream& os, const PartitionSpec& spec, const int cell[3], long k) {
    spec.validate();
    const Partition part(spec);
    const long n = static_cast<long>(part.grid()) * part.cells();
    const double h = spec.ell / part.grid();
    os << "x,y,J,dJdx,dJdy\n" << std::setprecision(17);
    for (long i = 0; i <= n; ++i)
        for (long j = 0; j <= n; ++j) {
            const long p[3] = {i, j, k};
            const auto g = part.grad(cell, p);
            os << i * h << ',' << j * h << ',' << part.value(cell, p) << ',' << g[0] / h << ',' << g[1] / h << '\n';
        }
}

VPartitionReport build_v_partition(const PartitionSpec& spec) {
    spec.validate();
    const double eps = spec.epsilon;
    std::function<double(double)> v = spec.v_profile;
    if (!v) v = [eps](double t) { return default_v(t, eps); };
    check_v_profile(v, eps);

    const int g = spec.grid;
    const double h = spec.ell / g;
    // window covering supp V with a margin for the stencil
    const long a0 = -static_cast<long>(std::ceil(2.0 * eps * g)) - 4;
    const long a1 = g - a0;
    const long w = a1 - a0 + 1;
    std::vector<double> v1(static_cast<std::size_t>(w));
    for (long a = a0; a <= a1; ++a) v1[a - a0] = v(double(a) / g);

    auto idx = [w](long i, long j, long k) { return (static_cast<std::size_t>(i) * w + j) * w + k; };
    std::vector<double> vv(static_cast<std::size_t>(w * w * w)), vt(vv.size());
    VPartitionReport rep;
    for (long i = 0; i < w; ++i)
        for (long j = 0; j < w; ++j)
            for (long k = 0; k < w; ++k) {
                const double x = v1[i] * v1[j] * v1[k];
                const double y = std::sqrt(std::max(0.0, 1.0 - x * x));
                vv[idx(i, j, k)] = x;
                vt[idx(i, j, k)] = y;
                rep.closure_error = std::max(rep.closure_error, std::abs(x * x + y * y - 1.0));
            }

    long supp = 0;
    for (long i = 2; i < w - 2; ++i)
        for (long j = 2; j < w - 2; ++j)
            for (long k = 2; k < w - 2; ++k) {
                double gv = 0.0, gt = 0.0;
                for (int d = 0; d < 3; ++d) {
                    auto at = [&](const std::vector<double>& f, long s) {
                        long q[3] = {i, j, k};
                        q[d] += s;
                        return f[idx(q[0], q[1], q[2])];
                    };
                    const double dv = (-at(vv, 2) + 8.0 * at(vv, 1) - 8.0 * at(vv, -1) + at(vv, -2)) / (12.0 * h);
                    const double dt = (-at(vt, 2) + 8.0 * at(vt, 1) - 8.0 * at(vt, -1) + at(vt, -2)) / (12.0 * h);
                    gv += dv * dv;
                    gt += dt * dt;
                }
                if (!std::isfinite(gv) || !std::isfinite(gt)) rep.finite = false;
                rep.max_grad_vtilde = std::max(rep.max_grad_vtilde, std::sqrt(gt));
                const double wv = 0.5 * (gv + gt);
                rep.w_inf = std::max(rep.w_inf, wv);
                if (wv > 0.0) ++supp;
            }
    rep.w_inf_ell2 = rep.w_inf * spec.ell * spec.ell;
    rep.supp_w = static_cast<double>(supp) * h * h * h;
    rep.supp_w_ell3 = static_cast<double>(supp) / (static_cast<double>(g) * g * g);
    return rep;
}

ImsOverlap ims_overlap_bound(const PartitionSpec& spec) {
    const PartitionReport rep = build_partition(spec);
    ImsOverlap out;
    out.c_eta = rep.c_eta;
    out.bound = 8.0 * rep.c_eta / (spec.ell * spec.ell);
    out.measured = rep.max_grad_sum;
    return out;
}

}  // namespace polaron
