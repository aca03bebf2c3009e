#include "polaron/lieb_thirring.hpp"

#include "polaron/box_spectra.hpp"
#include "polaron/errors.hpp"
#include "polaron/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

namespace polaron {

namespace {

constexpr double pi = std::numbers::pi;

double level_of(const std::array<int, 3>& n, double L) {
    return pi * pi * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) / (L * L);
}

void require_mu(double mu, double L) {
    if (mu < 3.0 * pi * pi / (L * L))
        throw PreconditionError(
            "mu below the lowest Dirichlet level 3 pi^2 / L^2: the projections are trivial there and "
            "the standard Lieb-Thirring inequality applies instead");
}

}  // namespace

LtGap lt_gap_check(const PotentialGrid& v, long n, int basis_size) {
    v.validate(true);
    if (n < 1 || basis_size < n) throw PreconditionError("lt_gap_check: need 1 <= N <= basis_size");
    LtGap r;
    r.e_free = sum_lowest(v.L, n).laplacian;
    const GalerkinResult g = galerkin_spectrum(v, basis_size);
    for (long i = 0; i < n; ++i) r.e_pert += g.eigenvalues[i];
    r.gap = r.e_free - r.e_pert;
    const double nn = static_cast<double>(n);
    r.rhs = std::cbrt(nn) / v.L * v.integral_abs_pow(2.0) + v.integral_abs_pow(2.5) +
            nn / (v.L * v.L * v.L) * v.integral_abs_pow(1.0);
    r.ratio = r.rhs > 0.0 ? r.gap / r.rhs : 0.0;
    return r;
}

ThmA3 thm_a3_check(const PotentialGrid& v, double mu, int basis_size) {
    v.validate(false);
    require_mu(mu, v.L);
    const GalerkinResult g = galerkin_spectrum(v, basis_size);
    if (!(g.top_basis_level > mu)) throw PreconditionError("thm_a3_check: basis does not reach above mu");
    ThmA3 r;
    r.basis_size = g.basis_size;
    for (double e : g.eigenvalues)
        if (e < mu) r.trace_pert += mu - e;
    const auto free = dirichlet_levels(v.L, std::max<long>(1, level_count(v.L, mu)));
    for (const auto& l : free.levels)
        if (l.value <= mu) r.trace_free += l.multiplicity * (mu - l.value);

    const int m = v.m;
    const double h = v.L / m;
    double rv = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                rv += rho0(MomentumVec((i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h), v.L, mu) * v.at(i, j, k);
    r.rho0_v = rv * v.cell_volume();
    r.lhs = -r.trace_pert + r.trace_free - r.rho0_v;
    r.rhs_integral = std::sqrt(mu) * v.integral_abs_pow(2.0) + v.integral_abs_pow(2.5) +
                     mu / v.L * v.integral_abs_pow(1.0);
    return r;
}

void FiniteRankPerturbation::validate(double mu, double L, double tol) const {
    const int nb = static_cast<int>(basis.size());
    if (q.rows() != nb || q.cols() != nb) throw PreconditionError("Q: matrix size differs from basis size");
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > tol) throw PreconditionError("Q: not symmetric");
    Eigen::MatrixXd m = q;
    long below = 0;
    for (int a = 0; a < nb; ++a)
        if (level_of(basis[a], L) <= mu) {
            m(a, a) += 1.0;
            ++below;
        }
    if (below != level_count(L, mu)) throw PreconditionError("Q: basis must contain every level <= mu");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol || es.eigenvalues().maxCoeff() > 1.0 + tol)
        throw PreconditionError("Q: violates -Pi^- <= Q <= 1 - Pi^-");
}

FiniteRankPerturbation random_admissible_q(const AdmissibleQSpec& spec) {
    require_mu(spec.mu, spec.L);
    const long below = level_count(spec.L, spec.mu);
    FiniteRankPerturbation f;
    f.basis = sine_basis(static_cast<int>(below + spec.extra));
    const int nb = static_cast<int>(f.basis.size());
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double scale = 0.05 + unit(rng);
    Eigen::MatrixXd x(nb, nb);
    for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) x(a, b) = x(b, a) = scale * gauss(rng) / std::sqrt(static_cast<double>(nb));
    Eigen::VectorXd pm(nb);
    for (int a = 0; a < nb; ++a) pm(a) = level_of(f.basis[a], spec.L) <= spec.mu ? 1.0 : 0.0;
    x.diagonal() += pm;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
    f.q = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    f.q = 0.5 * (f.q + f.q.transpose()).eval();
    f.q.diagonal() -= pm;
    return f;
}

ThmA1 thm_a1_check(const FiniteRankPerturbation& q, double mu, double L, const ThmA1Config& cfg) {
    require_mu(mu, L);
    q.validate(mu, L, 1e-10);
    const int nb = static_cast<int>(q.basis.size());
    ThmA1 r;
    double scale = 0.0;
    for (int a = 0; a < nb; ++a) {
        const double d = level_of(q.basis[a], L) - mu;
        r.lhs += d * q.q(a, a);
        scale += std::abs(d * q.q(a, a));
        for (int b = 0; b < nb; ++b) r.lemma_a2_lhs += std::abs(d) * q.q(a, b) * q.q(a, b);
    }
    r.lemma_a2_holds = r.lemma_a2_lhs <= r.lhs + 1e-10 * std::max(1.0, scale);

    // ρ_Q(x) = Σ_ab Q_ab φ_a(x) φ_b(x) at grid midpoints
    const int m = cfg.grid;
    const double h = L / m;
    Eigen::MatrixXd sines;
    int nmax = 0;
    for (const auto& n : q.basis) nmax = std::max({nmax, n[0], n[1], n[2]});
    sines.resize(m, nmax + 1);
    for (int i = 0; i < m; ++i)
        for (int n = 1; n <= nmax; ++n) sines(i, n) = std::sin(n * pi * (i + 0.5) / m);
    const double norm = std::pow(2.0 / L, 1.5);
    const long pts = static_cast<long>(m) * m * m;
    Eigen::MatrixXd phi(pts, nb);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const long row = (static_cast<long>(i) * m + j) * m + k;
                for (int a = 0; a < nb; ++a) {
                    const auto& n = q.basis[a];
                    phi(row, a) = norm * sines(i, n[0]) * sines(j, n[1]) * sines(k, n[2]);
                }
            }
    const Eigen::VectorXd rho = (phi * q.q).cwiseProduct(phi).rowwise().sum();
    const double cut = cfg.eta * mu / L;
    double integral = 0.0;
    for (long p = 0; p < pts; ++p) {
        const double arg = std::abs(rho(p)) - cut;
        if (arg > 0.0) integral += s_function(arg, mu);
    }
    r.rhs_integral = integral * h * h * h;
    r.theorem_holds = r.lhs >= cfg.k_tilde * r.rhs_integral;
    return r;
}

}  // namespace polaron
