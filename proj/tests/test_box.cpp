#include "polaron/box_spectra.hpp"
#include "polaron/errors.hpp"
#include "polaron/galerkin.hpp"
#include "polaron/kernels.hpp"
#include "polaron/lieb_thirring.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

using namespace polaron;

namespace {

constexpr double pi = std::numbers::pi;

// |n|² for n ∈ {1..r}³, sorted
std::vector<long> brute_levels(int r) {
    std::vector<long> v;
    for (int i = 1; i <= r; ++i)
        for (int j = 1; j <= r; ++j)
            for (int k = 1; k <= r; ++k) v.push_back(i * i + j * j + k * k);
    std::sort(v.begin(), v.end());
    return v;
}

double phi_mode(const std::array<int, 3>& n, double L, double x, double y, double z) {
    return std::pow(2.0 / L, 1.5) * std::sin(n[0] * pi * x / L) * std::sin(n[1] * pi * y / L) *
           std::sin(n[2] * pi * z / L);
}

PotentialGrid bumps(std::uint64_t seed, double depth) {
    BumpSpec b;
    b.seed = seed;
    b.m = 24;
    b.depth = depth;
    return random_potential(b);
}

}  // namespace

TEST_CASE("Dirichlet levels at L = pi match exhaustive enumeration") {
    const DirichletSpectrum sp = dirichlet_levels(pi, 11);
    REQUIRE(sp.levels.size() >= 5);
    const std::vector<long> n_sq{3, 6, 9, 11, 12};
    const std::vector<int> mult{1, 3, 3, 3, 1};
    const auto all = brute_levels(5);
    for (int i = 0; i < 5; ++i) {
        CHECK(sp.levels[i].n_sq == n_sq[i]);
        CHECK(sp.levels[i].multiplicity == mult[i]);
        CHECK(sp.levels[i].value == doctest::Approx(double(n_sq[i])).epsilon(1e-15));
        CHECK(std::count(all.begin(), all.end(), n_sq[i]) == mult[i]);
        const auto& r = sp.levels[i].representative;
        CHECK(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] == n_sq[i]);
    }
}

TEST_CASE("lowest level is 3 pi^2 / L^2 and enumeration is exhaustive") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int s = 0; s < 20; ++s) {
        const double L = u(rng);
        CHECK(dirichlet_levels(L, 1).levels.front().value == 3.0 * pi * pi / (L * L));
    }
    for (long count : {1L, 7L, 100L, 2000L}) {
        const auto ev = dirichlet_levels(1.0, count).eigenvalues(count);
        REQUIRE(static_cast<long>(ev.size()) == count);
        const auto all = brute_levels(2 * static_cast<int>(std::cbrt(double(count))) + 6);
        for (long i = 0; i < count; ++i) CHECK(ev[i] == doctest::Approx(pi * pi * all[i]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(dirichlet_levels(0.0, 3), PreconditionError);
    CHECK_THROWS_AS(dirichlet_levels(1.0, 0), PreconditionError);
}

TEST_CASE("n_sq_histogram counts ordered triples") {
    const auto h = n_sq_histogram(60);
    const auto all = brute_levels(8);
    for (long s = 0; s <= 60; ++s) CHECK(h[s] == std::count(all.begin(), all.end(), s));
}

TEST_CASE("sum_lowest conventions and additivity") {
    const LowestSum one = sum_lowest(1.0, 1);
    CHECK(one.half == doctest::Approx(1.5 * pi * pi).epsilon(1e-15));
    CHECK(one.e_n == doctest::Approx(3.0 * pi * pi).epsilon(1e-15));
    const auto ev = dirichlet_levels(2.0, 600).eigenvalues(600);
    double acc = 0.0;
    for (long n = 1; n <= 600; ++n) {
        acc += ev[n - 1];
        const LowestSum s = sum_lowest(2.0, n);
        CHECK(s.laplacian == doctest::Approx(acc).epsilon(1e-13));
        CHECK(s.half == 0.5 * s.laplacian);
        CHECK(s.e_n == doctest::Approx(ev[n - 1]).epsilon(1e-14));
        if (n > 1) CHECK(s.laplacian - sum_lowest(2.0, n - 1).laplacian == doctest::Approx(s.e_n).epsilon(1e-10));
    }
}

TEST_CASE("E^D_N / (N rho^{2/3}) settles near the Weyl constant") {
    const double weyl = 0.3 * std::pow(6.0 * pi * pi, 2.0 / 3.0);
    auto scaled = [](long n, double L) {
        const double rho = n / (L * L * L);
        return sum_lowest(L, n).half / (n * std::pow(rho, 2.0 / 3.0));
    };
    const double a = scaled(10000, 1.0), b = scaled(100000, 1.0);
    CHECK(std::abs(a - b) / b < 0.05);
    // the Dirichlet surface term raises the sum above Weyl and shrinks like N^{-1/3}
    CHECK(a > b);
    CHECK(b > weyl);
    CHECK(b < 1.1 * weyl);
    // scale invariance in L at fixed N
    CHECK(scaled(5000, 3.7) == doctest::Approx(scaled(5000, 1.0)).epsilon(1e-12));
}

TEST_CASE("level_count matches filtered enumeration") {
    const auto all = brute_levels(12);
    for (double mu : {10.0, 100.0, 500.0, 1000.0}) {
        const long want = std::count_if(all.begin(), all.end(), [&](long s) { return pi * pi * s <= mu; });
        CHECK(level_count(1.0, mu) == want);
    }
    CHECK(level_count(1.0, -1.0) == 0);
}

TEST_CASE("rho0 normalisation, bound and symmetry") {
    const double L = 1.3;
    const double e1 = 3.0 * pi * pi / (L * L);
    const int m = 32;
    const double h = L / m;
    for (double f : {1.0, 10.0, 100.0}) {
        const double mu = f * e1;
        double integral = 0.0, sup = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    const double v = rho0(MomentumVec((i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h), L, mu);
                    CHECK(v >= 0.0);
                    integral += v;
                    sup = std::max(sup, v);
                }
        integral *= h * h * h;
        // the midpoint rule integrates sin² exactly below the grid frequency
        CHECK(integral == doctest::Approx(double(level_count(L, mu))).epsilon(1e-8));
        CHECK(sup <= 32.0 * std::pow(mu, 1.5) / (3.0 * pi * pi));
        const MomentumVec x(0.21, 0.77, 1.01);
        CHECK(rho0(x, L, mu) == doctest::Approx(rho0(MomentumVec(L - 0.21, 0.77, L - 1.01), L, mu)).epsilon(1e-12));
    }
    CHECK(rho0(MomentumVec(0.5, 0.5, 0.5), L, 0.9 * e1) == 0.0);
    CHECK_THROWS_AS(rho0(MomentumVec(-0.1, 0.5, 0.5), L, e1), DomainError);
}

TEST_CASE("half lattice ball counts") {
    double worst = 0.0;
    for (double r = 0.5; r <= 50.0; r *= 1.13) {
        std::int64_t open = 0, closed = 0;
        const int nmax = static_cast<int>(2.0 * r) + 1;
        for (int i = 1; i <= nmax; ++i)
            for (int j = 1; j <= nmax; ++j)
                for (int k = 1; k <= nmax; ++k) {
                    const double d = 0.25 * (i * i + j * j + k * k);
                    if (d < r * r) ++open;
                    if (d <= r * r) ++closed;
                }
        CHECK(half_lattice_ball_count(r, false) == open);
        CHECK(half_lattice_ball_count(r, true) == closed);
        // the lattice N³/2 fills one octant with density 8
        const double err = std::abs(double(open) - 4.0 * pi / 3.0 * r * r * r);
        worst = std::max(worst, err / std::max(1.0, r * r));
    }
    // the surface of the octant carries O(R²) points
    CHECK(worst < 60.0);
}

TEST_CASE("shell_count_f by enumeration and its envelope") {
    const double L = 1.0;
    const double unit = pi * pi;
    CHECK(shell_count_f(0.0, 50.0, L).count == 0);
    double worst = 0.0;
    for (double mu : {40.0, 400.0, 4000.0})
        for (double e : {0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0}) {
            std::int64_t c = 0;
            const int nmax = static_cast<int>(std::sqrt((mu + e) / unit)) + 1;
            for (int i = 1; i <= nmax; ++i)
                for (int j = 1; j <= nmax; ++j)
                    for (int k = 1; k <= nmax; ++k)
                        if (std::abs(unit * (i * i + j * j + k * k) - mu) < e) ++c;
            const ShellCount s = shell_count_f(e, mu, L);
            CHECK(s.count == c);
            CHECK(s.value == 8.0 * double(c));
            const double env = mu / L + (e <= mu ? std::sqrt(mu) * e : std::pow(e, 1.5));
            worst = std::max(worst, s.value / env);
        }
    CHECK(worst < 10.0);
    CHECK_THROWS_AS(shell_count_f(-1.0, 1.0, L), PreconditionError);
}

TEST_CASE("r_function against independent integration") {
    const double L = 1.0;
    const double unit = pi * pi;
    const double w = 8.0;
    for (double mu : {50.0, 300.0})
        for (double rho : {1.0, 50.0, 2000.0}) {
            // distances |p² - μ| with multiplicity
            std::vector<double> d;
            const int nmax = static_cast<int>(std::sqrt((2.0 * mu + rho / w * 10.0 + 2000.0) / unit)) + 2;
            for (int i = 1; i <= nmax; ++i)
                for (int j = 1; j <= nmax; ++j)
                    for (int k = 1; k <= nmax; ++k) d.push_back(std::abs(unit * (i * i + j * j + k * k) - mu));
            std::sort(d.begin(), d.end());
            // exact: f = w·#{d_i < e} is constant between consecutive distances
            double exact = 0.0, prev = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double g = std::sqrt(rho) - std::sqrt(w * double(i));
                if (g <= 0.0) break;
                exact += g * g * (d[i] - prev);
                prev = d[i];
            }
            const double r = r_function(rho, mu, L);
            CHECK(r == doctest::Approx(exact).epsilon(1e-12));
            // midpoint grid in e
            const int steps = 400000;
            const double top = prev * 1.001 + 1.0;
            double grid = 0.0;
            for (int s = 0; s < steps; ++s) {
                const double e = (s + 0.5) * top / steps;
                const double f = w * double(std::lower_bound(d.begin(), d.end(), e) - d.begin());
                const double g = std::sqrt(rho) - std::sqrt(f);
                if (g > 0.0) grid += g * g;
            }
            grid *= top / steps;
            CHECK(r == doctest::Approx(grid).epsilon(1e-4));
        }
    CHECK(r_function(0.0, 10.0, L) == 0.0);
    double prev = 0.0;
    for (double rho = 0.5; rho < 5000.0; rho *= 1.7) {
        const double r = r_function(rho, 100.0, L);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("r_function dominates a shifted S") {
    // R(ρ) >= c S((ρ - 2u)_+) with u = μ/L; c fitted on one sweep and checked on another
    auto ratio = [](double rho, double mu, double L) {
        const double arg = rho - 2.0 * mu / L;
        if (arg <= 0.0) return std::numeric_limits<double>::infinity();
        return r_function(rho, mu, L) / s_function(arg, mu);
    };
    double c = std::numeric_limits<double>::infinity();
    for (double mu : {50.0, 200.0, 800.0})
        for (double x : {3.0, 10.0, 100.0, 1000.0}) c = std::min(c, ratio(x * mu, mu, 1.0));
    REQUIRE(c > 0.0);
    for (double L : {0.8, 1.5})
        for (double mu : {100.0, 400.0})
            for (double x : {5.0, 50.0, 500.0}) CHECK(ratio(x * mu / L, mu, L) >= 0.5 * c);
}

TEST_CASE("phi_sum against brute force and its square-root envelope") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    double sup = 0.0;
    for (double f : {10.0, 100.0, 1000.0}) {
        const double L = 1.0;
        const double mu = f * 3.0 * pi * pi;
        for (int s = 0; s < 12; ++s) {
            const MomentumVec k = std::sqrt(mu) * MomentumVec(g(rng), g(rng), g(rng));
            const double v = phi_sum(k, mu, L);
            CHECK(v >= 0.0);
            sup = std::max(sup, v / std::sqrt(mu));
            if (f < 500.0) {
                double ref = 0.0;
                const int nm = static_cast<int>(std::sqrt(mu) / pi) + 2;
                for (int i = -nm; i <= nm; ++i)
                    for (int j = -nm; j <= nm; ++j)
                        for (int l = -nm; l <= nm; ++l) {
                            const MomentumVec q = pi * MomentumVec(i, j, l);
                            const double q2 = q.squaredNorm(), d2 = (q - k).squaredNorm();
                            if (q2 < mu - std::sqrt(mu) && d2 > mu + std::sqrt(mu))
                                ref += 1.0 / std::sqrt((mu - q2) * (d2 - mu));
                        }
                CHECK(v == doctest::Approx(ref).epsilon(1e-11));
            }
        }
    }
    CHECK(sup < 20.0);
    CHECK_THROWS_AS(phi_sum(MomentumVec::Zero(), 1.0, 1.0), PreconditionError);
}

TEST_CASE("sine basis order") {
    const auto b = sine_basis(30);
    REQUIRE(b.size() == 30);
    auto key = [](const std::array<int, 3>& n) { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; };
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(key(b[i - 1]) <= key(b[i]));
    const auto all = brute_levels(6);
    for (int i = 0; i < 30; ++i) CHECK(key(b[i]) == all[i]);
}

TEST_CASE("galerkin spectrum: free, constant and brute Ritz matrix") {
    const PotentialGrid zero = PotentialGrid::constant(1.3, 16, 0.0);
    const auto free = galerkin_spectrum(zero, 80);
    const auto ev = dirichlet_levels(1.3, 80).eigenvalues(80);
    for (int i = 0; i < 80; ++i) CHECK(free.eigenvalues[i] == doctest::Approx(ev[i]).epsilon(1e-10));

    const PotentialGrid c = PotentialGrid::constant(1.3, 16, -7.5);
    const auto shifted = galerkin_spectrum(c, 80);
    for (int i = 0; i < 80; ++i) CHECK(shifted.eigenvalues[i] == doctest::Approx(ev[i] - 7.5).epsilon(1e-10));

    // Ritz matrix with ⟨φ_a|V|φ_b⟩ from the same midpoint rule, assembled point by point
    const PotentialGrid v = bumps(3, 40.0);
    const int nb = 40;
    const auto basis = sine_basis(nb);
    const int m = v.m;
    const double h = v.L / m;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nb, nb);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double x = (i + 0.5) * h, y = (j + 0.5) * h, z = (k + 0.5) * h;
                Eigen::VectorXd ph(nb);
                for (int p = 0; p < nb; ++p) ph(p) = phi_mode(basis[p], v.L, x, y, z);
                a += v.at(i, j, k) * h * h * h * ph * ph.transpose();
            }
    for (int p = 0; p < nb; ++p)
        a(p, p) += pi * pi * (basis[p][0] * basis[p][0] + basis[p][1] * basis[p][1] + basis[p][2] * basis[p][2]) /
                   (v.L * v.L);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto g = galerkin_spectrum(v, nb);
    for (int p = 0; p < nb; ++p) CHECK(g.eigenvalues[p] == doctest::Approx(es.eigenvalues()(p)).epsilon(1e-9));
}

TEST_CASE("galerkin values decrease with the basis and converge") {
    const PotentialGrid v = bumps(5, 60.0);
    std::vector<double> prev;
    double e_prev = 0.0;
    for (int nb : {64, 128, 256, 512}) {
        const auto g = galerkin_spectrum(v, nb);
        if (!prev.empty())
            for (int i = 0; i < 20; ++i) CHECK(g.eigenvalues[i] <= prev[i] + 1e-9 * std::abs(prev[i]));
        double e = 0.0;
        for (int i = 0; i < 20; ++i) e += g.eigenvalues[i];
        if (nb == 512) CHECK(std::abs(e - e_prev) < 0.01 * std::abs(e));
        e_prev = e;
        prev = g.eigenvalues;
    }
}

TEST_CASE("Lieb-Thirring gap ratio is bounded") {
    const LtGap z = lt_gap_check(PotentialGrid::constant(1.0, 16, 0.0), 10, 64);
    CHECK(z.gap == doctest::Approx(0.0).scale(1e-9));
    CHECK(z.ratio == 0.0);
    // envelope fitted on seeds 1..20, checked on seeds 21..50
    double fitted = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s)
        for (long n : {5L, 20L, 50L}) fitted = std::max(fitted, lt_gap_check(bumps(s, 10.0 + 5.0 * s), n, 256).ratio);
    for (std::uint64_t s = 21; s <= 50; ++s)
        for (long n : {5L, 20L, 50L}) {
            const LtGap g = lt_gap_check(bumps(s, 10.0 + 5.0 * s), n, 256);
            CHECK(g.gap >= 0.0);
            CHECK(g.ratio <= 2.0 * fitted);
        }
    PotentialGrid pos = PotentialGrid::constant(1.0, 8, 1.0);
    CHECK_THROWS_AS(lt_gap_check(pos, 1, 8), PreconditionError);
}

TEST_CASE("perturbed trace inequality holds with a fitted constant") {
    double fitted = 0.0;
    for (std::uint64_t s = 1; s <= 8; ++s)
        for (double mu : {40.0, 150.0}) {
            const ThmA3 r = thm_a3_check(bumps(100 + s, 50.0), mu, 400);
            fitted = std::max(fitted, -r.lhs / r.rhs_integral);
        }
    REQUIRE(fitted > 0.0);
    for (std::uint64_t s = 9; s <= 20; ++s)
        for (double mu : {40.0, 150.0, 400.0}) {
            const ThmA3 r = thm_a3_check(bumps(100 + s, 50.0), mu, 400);
            CHECK(r.lhs >= -2.0 * fitted * r.rhs_integral);
        }
    // truncation: a larger basis changes the left side by little
    const ThmA3 a = thm_a3_check(bumps(7, 50.0), 150.0, 400);
    const ThmA3 b = thm_a3_check(bumps(7, 50.0), 150.0, 800);
    CHECK(std::abs(a.lhs - b.lhs) < 0.05 * a.rhs_integral * fitted + 1e-6);
    CHECK_THROWS_AS(thm_a3_check(bumps(7, 50.0), 20.0, 400), PreconditionError);
}

TEST_CASE("trace inequality and density bound on random admissible Q") {
    for (std::uint64_t s = 1; s <= 100; ++s) {
        AdmissibleQSpec q;
        q.seed = s;
        q.mu = 60.0 + 2.0 * double(s);
        q.L = 1.0 + 0.005 * double(s);
        const auto f = random_admissible_q(q);
        CHECK_NOTHROW(f.validate(q.mu, q.L, 1e-10));
        ThmA1Config c;
        c.grid = 16;
        const ThmA1 r = thm_a1_check(f, q.mu, q.L, c);
        CHECK(r.lemma_a2_holds);
        CHECK(r.lhs >= 0.0);
    }
    // K̃ fitted at η = 0.01 on seeds 1..10, checked on seeds 11..40
    ThmA1Config c;
    c.eta = 0.01;
    c.k_tilde = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 1; s <= 10; ++s) {
        AdmissibleQSpec q;
        q.seed = s;
        const ThmA1 r = thm_a1_check(random_admissible_q(q), q.mu, q.L, c);
        if (r.rhs_integral > 0.0) c.k_tilde = std::min(c.k_tilde, r.lhs / r.rhs_integral);
    }
    REQUIRE(std::isfinite(c.k_tilde));
    c.k_tilde *= 0.5;
    for (std::uint64_t s = 11; s <= 40; ++s) {
        AdmissibleQSpec q;
        q.seed = s;
        CHECK(thm_a1_check(random_admissible_q(q), q.mu, q.L, c).theorem_holds);
    }
}

TEST_CASE("Q = 0 gives zero on both sides and invalid Q is rejected") {
    FiniteRankPerturbation f;
    f.basis = sine_basis(static_cast<int>(level_count(1.0, 100.0)) + 5);
    f.q = Eigen::MatrixXd::Zero(f.basis.size(), f.basis.size());
    const ThmA1 r = thm_a1_check(f, 100.0, 1.0);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs_integral == 0.0);
    CHECK(r.lemma_a2_lhs == 0.0);
    f.q(0, 0) = 0.5;  // the lowest level is below μ, so Q must lie in [-1, 0] there
    CHECK_THROWS_AS(thm_a1_check(f, 100.0, 1.0), PreconditionError);
    AdmissibleQSpec q;
    q.mu = 5.0;
    CHECK_THROWS_AS(random_admissible_q(q), PreconditionError);
}
