#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "tdbc/basis.hpp"
#include "tdbc/cli.hpp"
#include "tdbc/errors.hpp"
#include "tdbc/oracle.hpp"
#include "tdbc/phases.hpp"
#include "tdbc/propagator.hpp"
#include "tdbc/quadrature.hpp"
#include "tdbc/theta.hpp"

namespace tdbc::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
    ScenarioConfig cfg;
    const RunOptions& opts;
    std::vector<std::string> warnings;
    bool thresholds_ok = true;
    std::string summary;

    void warn(const std::string& w) { warnings.push_back(w); }
    void warn_all(const std::vector<std::string>& ws) {
        warnings.insert(warnings.end(), ws.begin(), ws.end());
    }
    void check(bool ok) { thresholds_ok = thresholds_ok && ok; }
};

// CSV with a resolved-config comment line, a header row and 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const Context& ctx, const std::string& name, const std::string& header)
        : path_(ctx.opts.out_dir / name), out_(path_) {
        if (!out_) throw std::runtime_error("cannot write " + path_.string());
        out_ << "# command=" << ctx.opts.command << ";seed=" << ctx.opts.seed << ';'
             << ctx.cfg.resolved() << '\n'
             << header << '\n';
        out_ << std::setprecision(17);
    }

    template <class... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cells, first = false), ...);
        out_ << '\n';
    }

private:
    fs::path path_;
    std::ofstream out_;
};

void write_text(const Context& ctx, const std::string& name, const std::string& body) {
    std::ofstream out(ctx.opts.out_dir / name);
    if (!out) throw std::runtime_error("cannot write " + name);
    out << body;
}

void write_wavefunction(const Context& ctx, const std::string& name, const WaveFunctionGrid& psi) {
    CsvWriter csv(ctx, name, "x,re_psi,im_psi,abs2");
    for (std::size_t j = 0; j < psi.values.size(); ++j) {
        const cplx v = psi.values[j];
        csv.row(psi.positions[j], v.real(), v.imag(), std::norm(v));
    }
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << v;
    return os.str();
}

const char* verdict_word(bool ok) { return ok ? "PASS" : "FAIL"; }

Geometry parse_geometry(ScenarioConfig& cfg, const std::string& key) {
    const std::string g = cfg.text(key, "symmetric");
    if (g == "symmetric") return Geometry::symmetric;
    if (g == "single_wall") return Geometry::single_wall;
    throw ConfigError(key, "expected symmetric or single_wall");
}

std::string trajectory_kind(ScenarioConfig& cfg) { return cfg.text("trajectory.kind"); }

std::size_t positive_count(ScenarioConfig& cfg, const std::string& key, int fallback) {
    const int n = cfg.integer(key, fallback);
    if (n < 1) throw ConfigError(key, "must be >= 1");
    return static_cast<std::size_t>(n);
}

// theta-check: modular transformation identity on random (z, kappa).
void theta_check(Context& ctx) {
    auto& cfg = ctx.cfg;
    const int samples = cfg.integer("theta_check.samples", 100);
    const double z_max = cfg.number("theta_check.z_max", 2.0);
    const double re_max = cfg.number("theta_check.re_max", 2.0);
    const double im_min = cfg.number("theta_check.im_min", 0.05);
    const double im_max = cfg.number("theta_check.im_max", 5.0);
    const double tol = cfg.number("theta_check.tol", 1e-12);
    const double theta_tol = cfg.number("tolerances.theta_tol", kDefaultThetaTol);
    if (samples < 1) throw ConfigError("theta_check.samples", "must be >= 1");
    if (!(im_min > 0.0 && im_max >= im_min)) throw ConfigError("theta_check.im_min", "need 0 < im_min <= im_max");

    std::mt19937_64 rng(ctx.opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CsvWriter csv(ctx, "theta_check.csv", "sample,kind,re_z,im_z,re_kappa,im_kappa,rel_error");
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double r = z_max * std::sqrt(unit(rng));
        const double phi = 2.0 * kPi * unit(rng);
        const cplx z = std::polar(r, phi);
        const cplx kappa{re_max * (2.0 * unit(rng) - 1.0), im_min + (im_max - im_min) * unit(rng)};
        for (ThetaKind kind : {ThetaKind::two, ThetaKind::three, ThetaKind::four}) {
            const cplx direct = theta(kind, {z, kappa}, theta_tol);
            const cplx dual = jacobi_transform(kind, {z, kappa}, theta_tol);
            const double rel = std::abs(direct - dual) / std::abs(direct);
            worst = std::max(worst, rel);
            csv.row(s, static_cast<int>(kind), z.real(), z.imag(), kappa.real(), kappa.imag(), rel);
        }
    }
    ctx.check(worst <= tol);
    ctx.summary = "theta-check: samples=" + std::to_string(samples) + " max_rel_error=" + sci(worst) +
                  " tol=" + sci(tol) + " " + verdict_word(worst <= tol);
}

// basis-check: Gram matrix of the basis solutions and residual convergence.
void basis_check(Context& ctx) {
    auto& cfg = ctx.cfg;
    const WallTrajectory traj = cfg.trajectory();
    const PhysicalConstants c = cfg.constants();
    const double t = cfg.number("time.t");
    const int n_max = cfg.integer("basis_check.n_max", 20);
    const std::size_t nodes = positive_count(cfg, "basis_check.quad_nodes", 512);
    const double orth_tol = cfg.number("basis_check.orth_tol", 1e-10);
    const std::size_t res_points = positive_count(cfg, "basis_check.residual_points", 513);
    const double res_dt = cfg.number("basis_check.residual_dt", 1e-3);
    const std::vector<double> res_n = cfg.numbers("basis_check.residual_n", {1.0, 3.0});
    if (n_max < 1) throw ConfigError("basis_check.n_max", "must be >= 1");

    const double L = length(traj, t);
    const GaussLegendreRule rule = gauss_legendre(nodes);
    std::vector<BasisIndex> states;
    for (int n = 0; n <= n_max; ++n) states.push_back({Sector::even, n});
    for (int n = 1; n <= n_max; ++n) states.push_back({Sector::odd, n});
    const auto name = [](Sector s) { return s == Sector::even ? "even" : "odd"; };

    double worst = 0.0;
    {
        CsvWriter csv(ctx, "basis_orthonormality.csv", "sector_m,m,sector_n,n,deviation");
        for (std::size_t a = 0; a < states.size(); ++a) {
            for (std::size_t b = a; b < states.size(); ++b) {
                const cplx overlap = integrate(rule, -L / 2.0, L / 2.0, [&](double x) {
                    return std::conj(basis_solution(states[a], traj, t, x, c)) *
                           basis_solution(states[b], traj, t, x, c);
                });
                const double dev = std::abs(overlap - (a == b ? 1.0 : 0.0));
                worst = std::max(worst, dev);
                csv.row(name(states[a].sector), states[a].n, name(states[b].sector), states[b].n, dev);
            }
        }
    }
    bool ratios_ok = true;
    {
        CsvWriter csv(ctx, "basis_residuals.csv", "sector,n,level,n_points,dt,residual,ratio");
        for (double nd : res_n) {
            for (Sector s : {Sector::even, Sector::odd}) {
                const BasisIndex idx{s, static_cast<int>(nd)};
                if (s == Sector::odd && idx.n < 1) continue;
                std::size_t np = res_points;
                double dt = res_dt;
                double prev = 0.0;
                for (int level = 0; level < 3; ++level) {
                    const double r = schrodinger_residual(idx, traj, t, np, dt, c);
                    const double ratio = level ? prev / r : 0.0;
                    if (level) ratios_ok = ratios_ok && ratio >= 3.5 && ratio <= 4.5;
                    csv.row(name(s), idx.n, level, np, dt, r, ratio);
                    prev = r;
                    np = 2 * np - 1;
                    dt /= 2.0;
                }
            }
        }
    }
    ctx.check(worst <= orth_tol && ratios_ok);
    ctx.summary = "basis-check: max_orthonormality_deviation=" + sci(worst) +
                  " residual_second_order=" + (ratios_ok ? "yes" : "no") + " " +
                  verdict_word(worst <= orth_tol && ratios_ok);
}

WaveFunctionGrid evolve_route(Context& ctx, const std::string& route, const GaussianParams& g,
                              const WallTrajectory& traj, double t, const GridSpec& grid,
                              const PhysicalConstants& c, Geometry geometry,
                              const ExpansionOptions& eopts, double theta_tol) {
    if (route == "sum") {
        const SpectralExpansion e = expansion_coefficients(g, traj, c, geometry, eopts);
        return evolve_sum(e, traj, t, grid, c);
    }
    if (route == "theta_centered") return evolve_theta_centered(g, traj, t, grid, c, theta_tol);
    if (route == "theta_general") return evolve_theta_general(g, traj, t, grid, c, geometry, theta_tol);
    if (route == "unconfined_approx") return evolve_unconfined_approx(g, traj, t, grid, c);
    if (route == "cycle") {
        return evolve_cycle_reversing(g, traj, grid, c, eopts.localization_warn, theta_tol);
    }
    if (route == "cycle_reexpansion") return evolve_cycle_reexpansion(g, traj, grid, c, eopts);
    (void)ctx;
    throw ConfigError("evolve.route",
                      "unknown route '" + route +
                          "' (sum, theta_centered, theta_general, unconfined_approx, cycle, "
                          "cycle_reexpansion)");
}

ExpansionOptions expansion_options(ScenarioConfig& cfg) {
    ExpansionOptions o;
    o.tail_tol = cfg.number("tolerances.tail_tol", 1e-14);
    o.localization_warn = cfg.number("tolerances.localization_warn", 0.1);
    return o;
}

void evolve(Context& ctx) {
    auto& cfg = ctx.cfg;
    const std::string route = cfg.text("evolve.route", "theta_general");
    const Geometry geometry = parse_geometry(cfg, "evolve.geometry");
    const WallTrajectory traj = cfg.trajectory();
    const GaussianParams g = cfg.gaussian();
    const PhysicalConstants c = cfg.constants();
    const GridSpec grid = cfg.grid();
    const ExpansionOptions eopts = expansion_options(cfg);
    const double theta_tol = cfg.number("tolerances.theta_tol", kDefaultThetaTol);
    const bool cyclic = route == "cycle" || route == "cycle_reexpansion";
    const std::vector<double> times = cyclic ? std::vector<double>{} : cfg.times();

    std::vector<WaveFunctionGrid> results;
    if (cyclic) {
        results.push_back(evolve_route(ctx, route, g, traj, 0.0, grid, c, geometry, eopts, theta_tol));
    } else {
        for (double t : times) {
            results.push_back(evolve_route(ctx, route, g, traj, t, grid, c, geometry, eopts, theta_tol));
            const double ratio = localization_diagnostic(g, c, t, traj.initial_length());
            if (ratio > eopts.localization_warn) {
                ctx.warn("localization: Delta x(" + sci(t) + ")/L0 = " + sci(ratio));
            }
        }
    }
    std::ostringstream plot;
    plot << "set datafile separator ','\nset xlabel 'x'\nset ylabel '|psi|^2'\nplot ";
    double worst_norm = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::ostringstream name;
        name << "evolve_" << std::setw(3) << std::setfill('0') << i << ".csv";
        write_wavefunction(ctx, name.str(), results[i]);
        ctx.warn_all(results[i].warnings);
        worst_norm = std::max(worst_norm, std::abs(results[i].norm - 1.0));
        plot << (i ? ", \\\n     " : "") << "'" << name.str() << "' skip 2 using 1:4 with lines title 't="
             << results[i].time << "'";
    }
    plot << '\n';
    write_text(ctx, "evolve.gp", plot.str());
    ctx.summary = "evolve: route=" + route + " files=" + std::to_string(results.size()) +
                  " max_norm_deviation=" + sci(worst_norm);
}

void locality(Context& ctx) {
    auto& cfg = ctx.cfg;
    const std::string kind = trajectory_kind(cfg);
    const WallTrajectory traj = cfg.trajectory();
    const GaussianParams g = cfg.gaussian();
    const PhysicalConstants c = cfg.constants();
    const GridSpec grid = cfg.grid();
    const std::vector<double> times = cfg.times();
    LocalityOptions lo;
    lo.geometry = parse_geometry(cfg, "locality.geometry");
    lo.rel_tol = cfg.number("tolerances.locality_tol", 1e-10);
    lo.localization_warn = cfg.number("tolerances.localization_warn", 0.1);
    lo.theta_tol = cfg.number("tolerances.theta_tol", kDefaultThetaTol);

    struct Case {
        std::string label;
        WallTrajectory a;
        WallTrajectory b;
    };
    std::vector<Case> cases;
    const double L0 = cfg.number("trajectory.L0");
    if (kind == "linear") {
        const double q_ref = cfg.number("locality.q_ref", 0.0);
        for (double q : cfg.numbers("locality.q_list", {cfg.number("trajectory.q")})) {
            cases.push_back({"q=" + sci(q), WallTrajectory::linear(L0, q), WallTrajectory::linear(L0, q_ref)});
        }
    } else if (kind == "smooth_periodic") {
        for (double k : cfg.numbers("locality.k_list", {2.0})) {
            cases.push_back({"k=" + sci(k), WallTrajectory::scaled(traj, k), traj});
        }
    } else {
        throw ConfigError("trajectory.kind", "locality supports linear and smooth_periodic");
    }

    CsvWriter csv(ctx, "locality.csv",
                  "case,t,sup_error,reference_max,relative_sup,l2_error,localization_ratio,verdict");
    double worst = 0.0;
    bool ok = true;
    for (const Case& cs : cases) {
        for (double t : times) {
            const ComparisonReport r = locality_compare(g, cs.a, cs.b, t, grid, c, lo);
            worst = std::max(worst, r.relative_sup());
            if (r.verdict == Verdict::fail) ok = false;
            if (r.verdict == Verdict::warn) {
                ctx.warn("locality " + cs.label + " t=" + sci(t) + ": localization ratio " +
                         sci(r.localization_ratio) + " above threshold, verdict downgraded to warn");
            }
            csv.row(cs.label, t, r.sup_error, r.reference_max, r.relative_sup(), r.l2_error,
                    r.localization_ratio, to_string(r.verdict));
        }
    }
    ctx.check(ok);
    ctx.summary = "locality: cases=" + std::to_string(cases.size() * times.size()) +
                  " max_relative_sup=" + sci(worst) + " tol=" + sci(lo.rel_tol) + " " + verdict_word(ok);
}

double relative_sup(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
    return compare_fields(a, b, 0.0, 1.0, 1.0).relative_sup();
}

void cycle(Context& ctx) {
    auto& cfg = ctx.cfg;
    if (trajectory_kind(cfg) != "reversing_linear") {
        throw ConfigError("trajectory.kind", "cycle needs reversing_linear");
    }
    const WallTrajectory traj = cfg.trajectory();
    if (traj.is_scaled()) throw ConfigError("trajectory.k", "cycle does not take a scaled trajectory");
    const GaussianParams g = cfg.gaussian();
    const PhysicalConstants c = cfg.constants();
    const GridSpec grid = cfg.grid();
    const ExpansionOptions eopts = expansion_options(cfg);
    const double theta_tol = cfg.number("tolerances.theta_tol", kDefaultThetaTol);
    const double loc_tol = cfg.number("tolerances.locality_tol", 1e-10);
    const double route_tol = cfg.number("tolerances.route_tol", 1e-9);
    const double L0 = cfg.number("trajectory.L0");
    const double T = cfg.number("trajectory.T");

    const WaveFunctionGrid closed = evolve_cycle_reversing(g, traj, grid, c, eopts.localization_warn, theta_tol);
    const WaveFunctionGrid still = evolve_cycle_reversing(g, WallTrajectory::reversing_linear(L0, 0.0, T),
                                                          grid, c, eopts.localization_warn, theta_tol);
    const WaveFunctionGrid reexp = evolve_cycle_reexpansion(g, traj, grid, c, eopts);
    ctx.warn_all(closed.warnings);
    write_wavefunction(ctx, "cycle.csv", closed);

    const double e_loc = relative_sup(closed, still);
    const double e_route = relative_sup(reexp, closed);
    CsvWriter csv(ctx, "cycle_report.csv", "comparison,relative_sup,tolerance,verdict");
    csv.row("q_vs_static", e_loc, loc_tol, verdict_word(e_loc <= loc_tol));
    csv.row("closed_vs_reexpansion", e_route, route_tol, verdict_word(e_route <= route_tol));
    const bool ok = e_loc <= loc_tol && e_route <= route_tol;
    ctx.check(ok);
    ctx.summary = "cycle: q_vs_static=" + sci(e_loc) + " closed_vs_reexpansion=" + sci(e_route) + " " +
                  verdict_word(ok);
}

void phase(Context& ctx) {
    auto& cfg = ctx.cfg;
    const WallTrajectory traj = cfg.trajectory();
    const PhysicalConstants c = cfg.constants();
    PhaseQuadrature quad;
    quad.time_nodes = positive_count(cfg, "phase.time_nodes", 256);
    quad.space_nodes = positive_count(cfg, "phase.space_nodes", 256);
    quad.doubling_tol = cfg.number("phase.doubling_tol", 1e-10);
    if (cfg.has("phase.horizon")) quad.horizon = cfg.number("phase.horizon");
    const double tol = cfg.number("phase.tol", 1e-6);
    const std::vector<double> n_list = cfg.numbers("phase.n_list", {0.0});

    CsvWriter csv(ctx, "phase.csv", "n,mu,delta,gamma,gamma_closed,gamma_mod_2pi,rel_diff");
    double worst = 0.0;
    for (double nd : n_list) {
        if (nd < 0.0 || nd != std::floor(nd)) throw ConfigError("phase.n_list", "entries must be integers >= 0");
        const BasisIndex idx{Sector::even, static_cast<int>(nd)};
        const PhaseDecomposition p = decompose_phase(idx, traj, c, quad);
        const double closed = geometric_phase(idx, traj, c);
        const double scale = std::max(std::abs(closed), std::abs(p.mu));
        const double rel = scale > 0.0 ? std::abs(p.gamma - closed) / scale : std::abs(p.gamma - closed);
        worst = std::max(worst, rel);
        csv.row(idx.n, p.mu, p.delta, p.gamma, closed, p.gamma_mod_2pi, rel);
    }
    ctx.check(worst <= tol);
    ctx.summary = "phase: states=" + std::to_string(n_list.size()) + " max_rel_diff=" + sci(worst) +
                  " tol=" + sci(tol) + " " + verdict_word(worst <= tol);
}

void fig1(Context& ctx) {
    auto& cfg = ctx.cfg;
    const PhysicalConstants c = cfg.constants();
    const int n_min = cfg.integer("fig1.n_min", 0);
    const int n_max = cfg.integer("fig1.n_max", 30);
    const std::vector<double> Ls = cfg.numbers("fig1.Lbar0_list", {100.0, 400.0, 800.0, 1000.0});
    const double q = cfg.number("fig1.q", 0.1);
    const double omega = cfg.number("fig1.omega", 1.0);
    const double tol = cfg.number("fig1.scaling_tol", 1e-9);
    if (n_min < 0 || n_max < n_min) throw ConfigError("fig1.n_max", "need 0 <= n_min <= n_max");
    for (double L : Ls) {
        if (!(L > 0.0)) throw ConfigError("fig1.Lbar0_list", "entries must be > 0");
    }
    if (!(std::abs(q) < 1.0)) throw ConfigError("fig1.q", "|q| must be < 1");
    if (!(omega > 0.0)) throw ConfigError("fig1.omega", "must be > 0");

    const std::vector<Fig1Row> rows = fig1_dataset(n_min, n_max, Ls, q, omega, c);
    {
        CsvWriter csv(ctx, "fig1.csv", "Lbar0,n,gamma_mod_2pi");
        for (const Fig1Row& r : rows) csv.row(r.Lbar0, r.n, r.gamma_mod_2pi);
    }
    // k^2 consistency between curves, on independently integrated unreduced phases.
    std::map<double, double> action;
    for (double L : Ls) {
        action[L] = wall_action_integral(WallTrajectory::smooth_periodic(L, q, omega), IntegralMethod::quadrature);
    }
    double worst = 0.0;
    for (int n = n_min; n <= n_max; ++n) {
        const double factor = 1.0 - 6.0 / std::pow(kPi * (2 * n + 1), 2);
        const double g_ref = c.mass / (24.0 * c.hbar) * factor * action[Ls.front()];
        for (double L : Ls) {
            const double k = L / Ls.front();
            const double g = c.mass / (24.0 * c.hbar) * factor * action[L];
            worst = std::max(worst, std::abs(k * k * g_ref - g) / std::abs(g));
        }
    }
    std::ostringstream plot;
    plot << "set datafile separator ','\nset xlabel 'n'\nset ylabel 'gamma_n mod 2 pi'\nplot ";
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        plot << (i ? ", \\\n     " : "") << "'fig1.csv' skip 2 using 2:($1==" << Ls[i]
             << " ? $3 : 1/0) with linespoints title 'Lbar0=" << Ls[i] << "'";
    }
    plot << '\n';
    write_text(ctx, "fig1.gp", plot.str());
    ctx.check(worst <= tol);
    ctx.summary = "fig1: rows=" + std::to_string(rows.size()) + " k2_consistency=" + sci(worst) +
                  " tol=" + sci(tol) + " " + verdict_word(worst <= tol);
}

SolverSpec solver_spec(ScenarioConfig& cfg, const std::string& prefix, const SolverSpec& fallback) {
    SolverSpec s;
    const int n = cfg.integer(prefix + "n_points", static_cast<int>(fallback.n_points));
    if (n < 8) throw ConfigError(prefix + "n_points", "must be >= 8");
    s.n_points = static_cast<std::size_t>(n);
    s.dt = cfg.number(prefix + "dt", fallback.dt);
    if (!(s.dt > 0.0)) throw ConfigError(prefix + "dt", "must be > 0");
    s.x_min = cfg.number("oracle.x_min", fallback.x_min);
    s.x_max = cfg.number("oracle.x_max", fallback.x_max);
    if (!(s.x_max > s.x_min)) throw ConfigError("oracle.x_max", "must exceed oracle.x_min");
    const std::string pot = cfg.text("oracle.potential", fallback.potential == PotentialTag::tdlo ? "tdlo" : "infinite_well");
    if (pot == "tdlo") {
        s.potential = PotentialTag::tdlo;
    } else if (pot == "infinite_well") {
        s.potential = PotentialTag::infinite_well;
    } else {
        throw ConfigError("oracle.potential", "expected infinite_well or tdlo");
    }
    return s;
}

void fig2(Context& ctx) {
    auto& cfg = ctx.cfg;
    if (trajectory_kind(cfg) != "smooth_periodic") {
        throw ConfigError("trajectory.kind", "fig2 needs smooth_periodic");
    }
    const WallTrajectory traj = cfg.trajectory();
    const GaussianParams g = cfg.gaussian();
    if (!g.centered()) throw ConfigError("gaussian.x0", "fig2 needs a centered Gaussian");
    const PhysicalConstants c = cfg.constants();
    const double t = cfg.number("time.t", *traj.period());
    const double tol = cfg.number("fig2.tol", 1e-3);
    SolverSpec fallback;
    fallback.potential = PotentialTag::tdlo;
    const SolverSpec spec = solver_spec(cfg, "oracle.", fallback);

    const WaveFunctionGrid confined = evolve_theta_centered(g, traj, t, spec.grid(), c);
    const WaveFunctionGrid unconfined = unconfined_tdlo_propagate(g, traj, spec, t, c);
    const WaveFunctionGrid approx = evolve_unconfined_approx(g, traj, t, spec.grid(), c);
    const double err = relative_l2(confined, unconfined);
    {
        CsvWriter csv(ctx, "fig2.csv", "x,abs2_confined,abs2_unconfined,abs2_approx");
        for (std::size_t j = 0; j < confined.values.size(); ++j) {
            csv.row(confined.positions[j], std::norm(confined.values[j]), std::norm(unconfined.values[j]),
                    std::norm(approx.values[j]));
        }
    }
    write_text(ctx, "fig2.gp",
               "set datafile separator ','\nset xlabel 'x'\nset ylabel '|psi(x,T)|^2'\n"
               "plot 'fig2.csv' skip 2 using 1:2 with lines title 'confined (theta)', \\\n"
               "     'fig2.csv' skip 2 using 1:3 with lines dashtype 2 title 'unconfined (PDE)'\n");
    ctx.check(err <= tol);
    ctx.summary = "fig2: rel_l2_confined_vs_unconfined=" + sci(err) + " tol=" + sci(tol) + " " +
                  verdict_word(err <= tol);
}

void oracle_compare(Context& ctx) {
    auto& cfg = ctx.cfg;
    const WallTrajectory traj = cfg.trajectory();
    const GaussianParams g = cfg.gaussian();
    const PhysicalConstants c = cfg.constants();
    const double t = cfg.number("time.t");
    const double tol = cfg.number("oracle.tol", 1e-4);
    const double L0 = traj.initial_length();
    SolverSpec fallback;
    fallback.x_min = -L0 / 2.0;
    fallback.x_max = L0 / 2.0;
    const SolverSpec main = solver_spec(cfg, "oracle.", fallback);
    SolverSpec base_fallback = main;
    base_fallback.n_points = 513;
    base_fallback.dt = 4e-3;
    const SolverSpec base = solver_spec(cfg, "oracle.base_", base_fallback);
    const int levels = cfg.integer("oracle.levels", 3);
    if (levels < 2) throw ConfigError("oracle.levels", "must be >= 2");
    if (!g.centered()) throw ConfigError("gaussian.x0", "oracle-compare needs a centered Gaussian");

    const FrameMap map(traj);
    const auto error_of = [&](const SolverSpec& spec) {
        const std::vector<double> y = spec.grid().positions();
        std::vector<cplx> v(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) v[j] = initial_gaussian(g, c, y[j]);
        const WaveFunctionGrid numeric = evolve_fixed_frame(WaveFunctionGrid::make(y, v, 0.0), map, spec, t, c);
        const double s = map.scale(t);
        const GridSpec moving{spec.n_points, spec.x_min * s, spec.x_max * s};
        const WaveFunctionGrid exact = to_fixed_frame(evolve_theta_centered(g, traj, t, moving, c), map, t);
        return relative_l2(numeric, exact);
    };
    const double main_error = error_of(main);
    const ConvergenceStudy study = convergence_study(error_of, base, levels);
    {
        CsvWriter csv(ctx, "oracle_compare.csv", "run,n_points,dt,rel_l2_error,ratio");
        for (std::size_t i = 0; i < study.errors.size(); ++i) {
            csv.row("study" + std::to_string(i), study.specs[i].n_points, study.specs[i].dt, study.errors[i],
                    i ? study.ratios[i - 1] : 0.0);
        }
        csv.row("main", main.n_points, main.dt, main_error, 0.0);
    }
    const bool ok = main_error <= tol && study.second_order();
    ctx.check(ok);
    std::ostringstream ratios;
    for (double r : study.ratios) ratios << (ratios.tellp() ? "," : "") << std::setprecision(4) << r;
    ctx.summary = "oracle-compare: rel_l2=" + sci(main_error) + " tol=" + sci(tol) +
                  " convergence_ratios=" + ratios.str() + " " + verdict_word(ok);
}

using Command = std::function<void(Context&)>;

const std::map<std::string, Command>& registry() {
    static const std::map<std::string, Command> r{
        {"theta-check", theta_check}, {"basis-check", basis_check}, {"evolve", evolve},
        {"locality", locality},       {"cycle", cycle},             {"phase", phase},
        {"fig1", fig1},               {"fig2", fig2},               {"oracle-compare", oracle_compare},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : registry()) v.push_back(k);
        return v;
    }();
    return names;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    const auto it = registry().find(options.command);
    if (it == registry().end()) {
        err << "error: unknown command '" << options.command << "'\n";
        return kExitConfig;
    }
    try {
        ScenarioConfig cfg = options.config_path ? ScenarioConfig::load(*options.config_path) : ScenarioConfig{};
        std::error_code ec;
        fs::create_directories(options.out_dir, ec);
        if (ec) throw ConfigError("--out", "cannot create " + options.out_dir.string());
        Context ctx{std::move(cfg), options, {}, true, {}};
        it->second(ctx);
        for (const std::string& w : ctx.warnings) err << "warning: " << w << '\n';
        out << ctx.summary << '\n';
        if (!ctx.thresholds_ok) return kExitThreshold;
        if (options.strict && !ctx.warnings.empty()) return kExitThreshold;
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "scenario error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace tdbc::cli
