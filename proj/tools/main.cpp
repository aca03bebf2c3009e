#include "run_config.hpp"

#include "polaron/bounds.hpp"
#include "polaron/box_spectra.hpp"
#include "polaron/calibration.hpp"
#include "polaron/errors.hpp"
#include "polaron/galerkin.hpp"
#include "polaron/lambda_functional.hpp"
#include "polaron/lieb_thirring.hpp"
#include "polaron/parallel.hpp"
#include "polaron/registry.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#ifndef POLARON_DEFAULT_REGISTRY
#define POLARON_DEFAULT_REGISTRY "data/registry.json"
#endif

using namespace polaron;
using nlohmann::json;

namespace {

struct Globals {
    std::string config;
    std::string out = ".";
    std::string registry = POLARON_DEFAULT_REGISTRY;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct SearchFlags {
    double quad_tol = 1e-8;
    std::string gauge = "s_unit";
    std::optional<double> a_const;

    void add(CLI::App* sub) {
        sub->add_option("--quad-tol", quad_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--gauge", gauge, "scale fixed to 1 in the search")->check(CLI::IsMember({"s_unit", "q_unit"}));
        sub->add_option("--a-const", a_const, "override of the coefficient A (default 1/(m+2))")
            ->check(CLI::PositiveNumber);
    }
    SupSearchConfig config(int jobs) const {
        SupSearchConfig c;
        c.quad_tol = quad_tol;
        c.gauge = gauge == "q_unit" ? Gauge::q_unit : Gauge::s_unit;
        c.a_const = a_const;
        c.jobs = jobs;
        return c;
    }
};

json inputs_of(const CLI::App* app, const CLI::App* sub) {
    json j = json::object();
    for (const CLI::App* a : {app, sub})
        for (const CLI::Option* o : a->get_options()) {
            const std::string name = o->get_single_name();
            if (name.empty() || name == "help" || name == "config") continue;
            if (o->count() > 0) {
                const auto& r = o->results();
                j[name] = r.size() == 1 ? json(r.front()) : json(r);
            } else if (!o->get_default_str().empty()) {
                j[name] = o->get_default_str();
            }
        }
    return j;
}

std::string out_path(const Globals& g, const std::string& file) {
    std::filesystem::create_directories(g.out);
    return (std::filesystem::path(g.out) / file).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw PreconditionError("cannot write " + path);
    f << text;
}

json lambda_json(double m, const LambdaResult& r, double a) {
    return {{"m", m},
            {"value", r.value},
            {"argmax", {{"s_abs", r.argmax.s_abs}, {"k_abs", r.argmax.k_abs}, {"angle", r.argmax.angle}, {"q_mu", r.argmax.q_mu}}},
            {"err_quad", r.err_quad},
            {"err_search", r.err_search},
            {"a_const", a}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability functionals and lower bounds for the Fermi polaron with zero-range interactions"};
    app.set_version_flag("--version", cli::tool_version);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "flat key = value file; command line flags win");
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--registry", g.registry, "constants registry JSON")->capture_default_str();
    app.add_option("--seed", g.seed, "64-bit seed")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    // lambda
    auto* c_lambda = app.add_subcommand("lambda", "evaluate Lambda(m)");
    double lam_m = 1.0;
    SearchFlags lam_search;
    c_lambda->add_option("--m", lam_m, "mass ratio")->required()->check(CLI::PositiveNumber);
    lam_search.add(c_lambda);

    // critical-mass
    auto* c_crit = app.add_subcommand("critical-mass", "root of Lambda(m) = 1");
    double m_lo = 0.3, m_hi = 0.45, m_tol = 1e-3;
    SearchFlags crit_search;
    c_crit->add_option("--m-lo", m_lo, "lower end of the bracket")->check(CLI::PositiveNumber)->capture_default_str();
    c_crit->add_option("--m-hi", m_hi, "upper end of the bracket")->check(CLI::PositiveNumber)->capture_default_str();
    c_crit->add_option("--m-tol", m_tol, "bisection tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    crit_search.add(c_crit);

    // calibrate
    auto* c_cal = app.add_subcommand("calibrate", "run the sweeps and write a constants registry");
    std::string sweep = "default";
    c_cal->add_option("--sweep", sweep, "sweep preset")->check(CLI::IsMember({"default", "quick"}))->capture_default_str();

    // bound
    auto* c_bound = app.add_subcommand("bound", "evaluate a lower bound");
    std::string kind = "confined";
    double b_m = 1.0, b_ell = 1.0, b_lbig = 1.0, b_alpha = 0.0, b_nu = 0.5;
    long b_n = 1;
    std::optional<double> b_kappa, b_lambda;
    c_bound->add_option("--kind", kind, "confined, main or unconfined")
        ->check(CLI::IsMember({"confined", "main", "unconfined"}))
        ->capture_default_str();
    c_bound->add_option("--m", b_m, "mass ratio")->required()->check(CLI::PositiveNumber);
    c_bound->add_option("--n", b_n, "number of fermions")->check(CLI::PositiveNumber)->capture_default_str();
    c_bound->add_option("--ell", b_ell, "confining box side")->check(CLI::PositiveNumber)->capture_default_str();
    c_bound->add_option("--L", b_lbig, "large box side")->check(CLI::PositiveNumber)->capture_default_str();
    c_bound->add_option("--alpha", b_alpha, "coupling")->capture_default_str();
    c_bound->add_option("--kappa", b_kappa, "kappa (default c_T nu (1 - Lambda(m)))")->check(CLI::PositiveNumber);
    c_bound->add_option("--nu", b_nu, "nu in the default kappa")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c_bound->add_option("--lambda", b_lambda, "precomputed Lambda(m); computed when absent")
        ->check(CLI::NonNegativeNumber);
    SearchFlags bound_search;
    bound_search.add(c_bound);

    // ltcheck
    auto* c_lt = app.add_subcommand("ltcheck", "Lieb-Thirring checks on random potentials");
    int lt_samples = 50, lt_basis = 512, lt_grid = 32;
    double lt_mu = 100.0, lt_depth = 50.0;
    std::vector<long> lt_ns{5, 10, 20, 50};
    c_lt->add_option("--samples", lt_samples, "number of random potentials")->check(CLI::PositiveNumber)->capture_default_str();
    c_lt->add_option("--basis", lt_basis, "sine basis size")->check(CLI::Range(1, 4096))->capture_default_str();
    c_lt->add_option("--grid", lt_grid, "potential grid points per side")->check(CLI::PositiveNumber)->capture_default_str();
    c_lt->add_option("--mu", lt_mu, "Fermi level for the trace check")->check(CLI::PositiveNumber)->capture_default_str();
    c_lt->add_option("--depth", lt_depth, "largest bump depth")->check(CLI::PositiveNumber)->capture_default_str();
    c_lt->add_option("--ns", lt_ns, "particle numbers")->delimiter(',')->capture_default_str();

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "Dirichlet levels of the box");
    double sp_l = 1.0;
    long sp_count = 100;
    c_spec->add_option("--L", sp_l, "box side")->check(CLI::PositiveNumber)->capture_default_str();
    c_spec->add_option("--count", sp_count, "number of eigenvalues")->check(CLI::PositiveNumber)->capture_default_str();

    std::vector<std::string> args;
    try {
        args = cli::merge_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    std::cout << std::setprecision(17);
    try {
        cli::Manifest man;
        CLI::App* sub = app.get_subcommands().front();
        man.command = sub->get_name();
        man.inputs = inputs_of(&app, sub);
        man.inputs["seed"] = g.seed;

        if (sub == c_lambda) {
            const SupSearchConfig cfg = lam_search.config(g.jobs);
            const LambdaResult r = lambda_of_m(lam_m, cfg);
            const json j = lambda_json(lam_m, r, cfg.a_for(lam_m));
            const std::string p = out_path(g, "lambda.json");
            write_text(p, j.dump(2) + "\n");
            man.outputs.push_back(p);
            std::cout << j.dump(2) << '\n';
        } else if (sub == c_crit) {
            const SupSearchConfig cfg = crit_search.config(g.jobs);
            const CriticalMassResult r = critical_mass(cfg, m_lo, m_hi, m_tol);
            json ev = json::array();
            for (const auto& [m, v] : r.evaluations) ev.push_back({{"m", m}, {"lambda", v}});
            const json j = {{"root", r.root}, {"bracket", {r.bracket_lo, r.bracket_hi}}, {"m_tol", m_tol}, {"evaluations", ev}};
            const std::string p = out_path(g, "critical_mass.json");
            write_text(p, j.dump(2) + "\n");
            man.outputs.push_back(p);
            std::cout << j.dump(2) << '\n';
        } else if (sub == c_cal) {
            CalibrationConfig cfg = CalibrationConfig::preset(sweep);
            cfg.jobs = g.jobs;
            cfg.lper.seed = g.seed;
            const CalibrationResult r = calibrate(cfg, &std::cerr);
            const std::string preg = out_path(g, "registry.json");
            r.registry.save(preg);
            std::ostringstream gap;
            write_sweep_csv(gap, r.gap_rows);
            const std::string pgap = out_path(g, "gap_sweep.csv");
            write_text(pgap, gap.str());
            std::ostringstream lp;
            lp << std::setprecision(17) << "m,mu,ell,k1x,k1y,k1z,khat_sq,q_mu_sq,diff,envelope\n";
            for (const auto& s : r.lper)
                lp << s.m << ',' << s.mu << ',' << s.ell << ',' << s.k1.x() << ',' << s.k1.y() << ',' << s.k1.z() << ','
                   << s.khat_sq << ',' << q_mu_sq(s) << ',' << s.diff << ',' << s.diff * q_mu_sq(s) * std::pow(s.ell, 3)
                   << '\n';
            const std::string plp = out_path(g, "lper_sweep.csv");
            write_text(plp, lp.str());
            man.outputs = {preg, pgap, plp};
            man.registry_hash = r.registry.hash();
            std::cout << r.registry.to_json() << '\n';
        } else if (sub == c_bound) {
            double lam = 0.0;
            if (b_lambda) {
                lam = *b_lambda;
            } else {
                lam = lambda_of_m(b_m, bound_search.config(g.jobs)).value;
            }
            json j;
            if (kind == "unconfined") {
                j = {{"kind", "unconfined"},
                     {"inputs", {{"m", b_m}, {"alpha", b_alpha}, {"lambda_m", lam}}},
                     {"bound", bound_unconfined(b_m, b_alpha, lam)}};
            } else {
                const ConstantsRegistry reg = ConstantsRegistry::load(g.registry);
                man.registry_hash = reg.hash();
                BoundInputs in;
                in.m = b_m;
                in.n = b_n;
                in.ell = b_ell;
                in.lbig = b_lbig;
                in.alpha = b_alpha;
                in.lambda_m = lam;
                in.kappa = b_kappa ? *b_kappa : default_kappa(lam, reg, b_nu);
                const BoundReport r = kind == "main" ? bound_main(in, reg) : bound_confined(in, reg);
                j = json::parse(r.to_json());
            }
            const std::string p = out_path(g, "bound.json");
            write_text(p, j.dump(2) + "\n");
            man.outputs.push_back(p);
            std::cout << j.dump(2) << '\n';
        } else if (sub == c_lt) {
            struct Row {
                std::uint64_t seed;
                long n;
                LtGap gap;
            };
            std::vector<std::vector<Row>> rows(static_cast<std::size_t>(lt_samples));
            std::vector<ThmA3> a3(static_cast<std::size_t>(lt_samples));
            parallel_for(rows.size(), g.jobs, [&](std::size_t s) {
                BumpSpec bs;
                bs.m = lt_grid;
                bs.depth = lt_depth;
                bs.seed = g.seed + s;
                const PotentialGrid v = random_potential(bs);
                for (long n : lt_ns) rows[s].push_back({bs.seed, n, lt_gap_check(v, n, lt_basis)});
                a3[s] = thm_a3_check(v, lt_mu, lt_basis);
            });
            std::ostringstream csv;
            csv << std::setprecision(17) << "seed,N,gap,rhs,ratio,a3_lhs,a3_rhs\n";
            double max_ratio = 0.0, min_a3 = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < rows.size(); ++s)
                for (const auto& r : rows[s]) {
                    csv << r.seed << ',' << r.n << ',' << r.gap.gap << ',' << r.gap.rhs << ',' << r.gap.ratio << ','
                        << a3[s].lhs << ',' << a3[s].rhs_integral << '\n';
                    max_ratio = std::max(max_ratio, r.gap.ratio);
                    if (a3[s].rhs_integral > 0.0) min_a3 = std::min(min_a3, a3[s].lhs / a3[s].rhs_integral);
                }
            const std::string p = out_path(g, "ltcheck.csv");
            write_text(p, csv.str());
            man.outputs.push_back(p);
            const json j = {{"samples", lt_samples}, {"basis", lt_basis}, {"max_gap_ratio", max_ratio},
                            {"min_a3_ratio", min_a3}};
            std::cout << j.dump(2) << '\n';
        } else if (sub == c_spec) {
            const DirichletSpectrum sp = dirichlet_levels(sp_l, sp_count);
            std::ostringstream csv;
            csv << std::setprecision(17) << "value,n_sq,multiplicity,n1,n2,n3\n";
            for (const auto& l : sp.levels)
                csv << l.value << ',' << l.n_sq << ',' << l.multiplicity << ',' << l.representative[0] << ','
                    << l.representative[1] << ',' << l.representative[2] << '\n';
            const std::string p = out_path(g, "spectrum.csv");
            write_text(p, csv.str());
            man.outputs.push_back(p);
            std::cout << csv.str();
        }
        man.write(g.out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numeric);
    }
    return 0;
}
