#include "polaron/errors.hpp"
#include "polaron/localization.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace polaron;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double gk(const F& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-13);
}

// share of ∫η(|u|)du over {u₁ > c}, through the slab area 2π∫_{|u₁|}^ε η(r) r dr
double half_space_share(const std::function<double(double)>& eta, double eps, double c) {
    auto slab = [&](double u1) {
        return 2.0 * pi * gk([&](double r) { return eta(r) * r; }, std::abs(u1), eps);
    };
    const double total = 4.0 * pi * gk([&](double r) { return eta(r) * r * r; }, 0.0, eps);
    if (c >= eps) return 0.0;
    const double lo = std::max(c, -eps);
    // split at 0 where the slab area has a kink
    double s = 0.0;
    if (lo < 0.0) s += gk(slab, lo, 0.0);
    s += gk(slab, std::max(lo, 0.0), eps);
    return s / total;
}

PartitionSpec spec_for(double ell, int cells) {
    PartitionSpec s;
    s.ell = ell;
    s.L = cells * ell;
    return s;
}

}  // namespace

TEST_CASE("partition closes, stays 1 on cores and 0 off its support") {
    for (double ell : {0.5, 1.0, 2.0}) {
        const PartitionReport r = build_partition(spec_for(ell, 2));
        CHECK(r.cells_per_axis == 2);
        CHECK(r.h == doctest::Approx(ell / 64.0).epsilon(1e-15));
        CHECK(r.closure_error < 1e-12);
        CHECK(r.core_error < 1e-12);
        CHECK(r.support_leak == 0.0);
        CHECK(r.c_eta_cell.size() == 8);
    }
}

TEST_CASE("partition values against a one-dimensional reduction") {
    const double eps = 0.125;
    auto poly = [eps](double r) {
        const double s = r / eps;
        return s < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
    };
    auto dflt = [eps](double r) {
        const double s = r / eps;
        return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
    };
    for (int variant = 0; variant < 2; ++variant) {
        PartitionSpec s = spec_for(1.0, 2);
        if (variant == 1) s.bump = poly;
        const std::function<double(double)> eta = variant == 1 ? std::function<double(double)>(poly) : dflt;
        const int g = s.grid;
        const long n = 2L * g;
        // J of both cubes on the plane z = ℓ/2, one table build per cube
        auto column = [&](int cx) {
            std::ostringstream os;
            const int cell[3] = {cx, 0, 0};
            write_partition_slice_csv(os, s, cell, g / 2);
            std::istringstream is(os.str());
            std::string line;
            std::getline(is, line);
            std::vector<double> j;
            for (long row = 0; std::getline(is, line); ++row) {
                if (row % (n + 1) != g / 2) continue;
                std::istringstream ls(line);
                std::string f;
                for (int c = 0; c < 3; ++c) std::getline(ls, f, ',');
                j.push_back(std::stod(f));
            }
            return j;  // indexed by x in units of h
        };
        const auto j0 = column(0), j1 = column(1);
        REQUIRE(j0.size() == static_cast<std::size_t>(n + 1));
        // points near the shared face x = ℓ, far from every other face
        for (int k = -10; k <= 10; ++k) {
            const double a = j0[g + k], b = j1[g + k];
            // cube 1 occupies u₁ > -k/g, cube 0 the mirror image u₁ < -k/g
            CHECK(std::abs(b * b - half_space_share(eta, eps, -double(k) / g)) < 1e-7);
            CHECK(std::abs(a * a - half_space_share(eta, eps, double(k) / g)) < 1e-7);
            CHECK(a * a + b * b == doctest::Approx(1.0).epsilon(1e-12));
        }
        const int c0[3] = {0, 0, 0};
        const long p[3] = {g + 3, g / 2, g / 2};
        CHECK(partition_value(s, c0, p) == doctest::Approx(j0[g + 3]).epsilon(1e-15));
    }
}

TEST_CASE("localization constants are invariant under the cube size") {
    std::vector<double> c_eta, w, supp, ims_ratio;
    for (double ell : {0.5, 1.0, 2.0}) {
        const PartitionSpec s = spec_for(ell, 2);
        const PartitionReport r = build_partition(s);
        const VPartitionReport v = build_v_partition(s);
        CHECK(v.closure_error < 1e-12);
        CHECK(v.finite);
        CHECK(v.w_inf_ell2 == doctest::Approx(v.w_inf * ell * ell).epsilon(1e-15));
        CHECK(v.supp_w == doctest::Approx(v.supp_w_ell3 * ell * ell * ell).epsilon(1e-12));
        c_eta.push_back(r.c_eta);
        w.push_back(v.w_inf_ell2);
        supp.push_back(v.supp_w_ell3);
        ims_ratio.push_back(r.max_grad_sum * ell * ell);
    }
    auto spread = [](const std::vector<double>& x) {
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        return (*hi - *lo) / *hi;
    };
    CHECK(spread(c_eta) < 0.01);
    CHECK(spread(w) < 0.01);
    CHECK(spread(supp) < 0.01);
    CHECK(spread(ims_ratio) < 0.01);
    // W lives on the shell between ℓ(-ε, 1+ε)³ and ℓ(-2ε, 1+2ε)³, widened by the two-point stencil
    const double eps = 0.125, st = 2.0 / 64.0;
    CHECK(supp[0] >= std::pow(1.0 + 4.0 * eps, 3) - std::pow(1.0 + 2.0 * eps, 3));
    CHECK(supp[0] <= std::pow(1.0 + 4.0 * eps + 2.0 * st, 3) - std::pow(1.0 + 2.0 * eps - 2.0 * st, 3));
    CHECK(c_eta[0] > 0.0);
}

TEST_CASE("cube gradients agree up to the box boundary") {
    const PartitionReport r = build_partition(spec_for(1.0, 3));
    REQUIRE(r.c_eta_cell.size() == 27);
    auto at = [&](int i, int j, int k) { return r.c_eta_cell[(i * 3 + j) * 3 + k]; };
    // the reflections of the box permute the cubes
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                CHECK(at(i, j, k) == doctest::Approx(at(2 - i, j, k)).epsilon(1e-12));
                CHECK(at(i, j, k) == doctest::Approx(at(k, i, j)).epsilon(1e-12));
            }
    const auto [lo, hi] = std::minmax_element(r.c_eta_cell.begin(), r.c_eta_cell.end());
    CHECK((*hi - *lo) / *hi < 0.02);
    CHECK(r.c_eta == *hi);
}

TEST_CASE("IMS overlap stays below 8 c_eta / ell^2") {
    for (double ell : {0.5, 2.0}) {
        const ImsOverlap o = ims_overlap_bound(spec_for(ell, 2));
        CHECK(o.bound == doctest::Approx(8.0 * o.c_eta / (ell * ell)).epsilon(1e-15));
        CHECK(o.measured > 0.0);
        CHECK(o.measured <= o.bound);
    }
}

TEST_CASE("slice CSV and validation") {
    const PartitionSpec s = spec_for(1.0, 1);
    std::ostringstream os;
    const int cell[3] = {0, 0, 0};
    write_partition_slice_csv(os, s, cell, 32);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,J,dJdx,dJdy");
    long rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 65 * 65);

    PartitionSpec bad = s;
    bad.grid = 32;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = s;
    bad.L = 1.5;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = s;
    bad.epsilon = 0.3;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = s;
    bad.bump = [](double) { return 1.0; };
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    bad = s;
    bad.v_profile = [](double) { return 1.0; };
    CHECK_THROWS_AS(build_v_partition(bad), PreconditionError);
    const int out[3] = {1, 0, 0};
    const long p[3] = {0, 0, 0};
    CHECK_THROWS_AS(partition_value(s, out, p), PreconditionError);
}
