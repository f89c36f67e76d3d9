// Acceptance gate: one line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tdbc/basis.hpp"
#include "tdbc/oracle.hpp"
#include "tdbc/phases.hpp"
#include "tdbc/propagator.hpp"
#include "tdbc/quadrature.hpp"
#include "tdbc/theta.hpp"

using namespace tdbc;

namespace {

const PhysicalConstants c{};
const GaussianParams centered{1, 0, 0};

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel_sup(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
    return compare_fields(a, b, 0.0, 1.0, 1.0).relative_sup();
}

double abs_sup(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
    return compare_fields(a, b, 0.0, 1.0, 1.0).sup_error;
}

WaveFunctionGrid sampled_gaussian(const GaussianParams& g, const GridSpec& grid) {
    const auto x = grid.positions();
    std::vector<cplx> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = initial_gaussian(g, c, x[i]);
    return WaveFunctionGrid::make(x, v, 0.0);
}

Outcome theta_identities() {
    std::mt19937_64 rng(20240521);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = 2.0 * std::sqrt(unit(rng));
        const double phi = 2.0 * kPi * unit(rng);
        const cplx z = std::polar(r, phi);
        const cplx kappa{-2.0 + 4.0 * unit(rng), 0.05 + 4.95 * unit(rng)};
        for (ThetaKind k : {ThetaKind::two, ThetaKind::three, ThetaKind::four}) {
            const cplx direct = theta(k, {z, kappa});
            const cplx dual = jacobi_transform(k, {z, kappa});
            worst = std::max(worst, std::abs(direct - dual) / std::abs(direct));
        }
    }
    return {worst <= 1e-12, "max_rel_error=" + fmt("%.3e", worst) + " tol=1e-12"};
}

Outcome identity_at_zero() {
    const GridSpec grid{2001, -48, 48};
    const GaussianParams moving{1, 10, 2};
    const auto lin = WallTrajectory::linear(100, 2);
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    double worst = 0.0;
    const auto g0 = sampled_gaussian(centered, grid);
    const auto g1 = sampled_gaussian(moving, grid);
    for (const WallTrajectory& traj : {lin, sp}) {
        worst = std::max(worst, abs_sup(evolve_theta_centered(centered, traj, 0, grid, c), g0));
        worst = std::max(worst, abs_sup(evolve_theta_general(centered, traj, 0, grid, c), g0));
        worst = std::max(worst, abs_sup(evolve_theta_general(moving, traj, 0, grid, c), g1));
        worst = std::max(worst, abs_sup(evolve_sum(expansion_coefficients(moving, traj, c), traj, 0, grid, c), g1));
        worst = std::max(worst, abs_sup(evolve_unconfined_approx(centered, traj, 0, grid, c), g0));
    }
    const GaussianParams wall{1, 50, 0};
    const GridSpec half{2001, 1, 99};
    const auto gw = sampled_gaussian(wall, half);
    worst = std::max(worst, abs_sup(evolve_theta_general(wall, lin, 0, half, c, Geometry::single_wall), gw));
    worst = std::max(worst,
                     abs_sup(evolve_sum(expansion_coefficients(wall, lin, c, Geometry::single_wall), lin, 0, half, c), gw));
    return {worst <= 1e-10, "max_sup_error=" + fmt("%.3e", worst) + " tol=1e-10"};
}

Outcome locality() {
    const GridSpec grid{2001, -48, 48};
    const auto ref = WallTrajectory::linear(100, 0);
    double worst = 0.0;
    bool ok = true;
    for (double q : {-0.5, 0.5, 2.0, 10.0}) {
        for (double t : {1.0, 3.0, 5.0}) {
            const auto r = locality_compare(centered, WallTrajectory::linear(100, q), ref, t, grid, c);
            worst = std::max(worst, r.relative_sup());
            ok = ok && r.verdict == Verdict::pass;
        }
    }
    return {ok && worst <= 1e-10, "max_relative_sup=" + fmt("%.3e", worst) + " tol=1e-10"};
}

Outcome full_cycle() {
    const GridSpec grid{2001, -49, 49};
    const auto rv = WallTrajectory::reversing_linear(100, 2, 4);
    const auto a = evolve_cycle_reversing(centered, rv, grid, c);
    const auto b = evolve_cycle_reversing(centered, WallTrajectory::reversing_linear(100, 0, 4), grid, c);
    const auto e = evolve_cycle_reexpansion(centered, rv, grid, c);
    const double loc = rel_sup(a, b);
    const double route = rel_sup(e, a);
    return {loc <= 1e-10 && route <= 1e-9,
            "q_vs_static=" + fmt("%.3e", loc) + " tol=1e-10 closed_vs_reexpansion=" + fmt("%.3e", route) + " tol=1e-9"};
}

Outcome tdlo_scaling() {
    const GridSpec grid{2001, -48, 48};
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    double worst = 0.0;
    bool ok = true;
    for (double k : {2.0, 4.0}) {
        const auto r = locality_compare(centered, WallTrajectory::scaled(sp, k), sp, 2 * kPi, grid, c);
        worst = std::max(worst, r.relative_sup());
        ok = ok && r.verdict == Verdict::pass;
    }
    return {ok && worst <= 1e-10, "max_relative_sup=" + fmt("%.3e", worst) + " tol=1e-10"};
}

Outcome phase_cross_check() {
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
        const BasisIndex idx{Sector::even, n};
        const auto p = decompose_phase(idx, sp, c);
        const double closed = geometric_phase(idx, sp, c);
        worst = std::max(worst, std::abs(p.gamma - closed) / std::abs(closed));
    }
    return {worst <= 1e-6, "max_relative=" + fmt("%.3e", worst) + " tol=1e-6"};
}

Outcome phase_scaling() {
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    double worst = 0.0;
    for (double k : {4.0, 8.0, 10.0}) {
        const auto sc = WallTrajectory::scaled(sp, k);
        for (int n = 0; n <= 30; ++n) {
            const BasisIndex idx{Sector::even, n};
            const double g = geometric_phase(idx, sp, c);
            const double gk = geometric_phase(idx, sc, c, IntegralMethod::quadrature);
            worst = std::max(worst, std::abs(gk - k * k * g) / (k * k * g));
        }
    }
    return {worst <= 1e-9, "max_relative=" + fmt("%.3e", worst) + " tol=1e-9"};
}

Outcome fig1() {
    const std::vector<double> Ls{100, 400, 800, 1000};
    const auto rows = fig1_dataset(0, 30, Ls, 0.1, 1, c);
    if (rows.size() != 124) return {false, "unexpected row count"};
    double consistency = 0.0;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        const double k2 = (Ls[i] / Ls[0]) * (Ls[i] / Ls[0]);
        for (int n = 0; n <= 30; ++n) {
            const double base = rows[static_cast<std::size_t>(n)].gamma;
            const double g = rows[i * 31 + static_cast<std::size_t>(n)].gamma;
            consistency = std::max(consistency, std::abs(g - k2 * base) / (k2 * base));
        }
    }
    std::ifstream in(TDBC_FIXTURE_DIR "/fig1_gamma.csv");
    std::string line;
    std::size_t i = 0;
    double regression = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'L') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double L, gamma, reduced;
        int n;
        ss >> L >> n >> gamma >> reduced;
        if (i >= rows.size() || rows[i].Lbar0 != L || rows[i].n != n) return {false, "fixture layout mismatch"};
        regression = std::max(regression, std::abs(rows[i].gamma - gamma) / gamma);
        regression = std::max(regression, std::abs(rows[i].gamma_mod_2pi - reduced));
        ++i;
    }
    if (i != rows.size()) return {false, "fixture row count mismatch"};
    return {consistency <= 1e-9 && regression <= 1e-12,
            "k2_consistency=" + fmt("%.3e", consistency) + " tol=1e-9 fixture_deviation=" + fmt("%.3e", regression) +
                " tol=1e-12"};
}

Outcome fig2() {
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    SolverSpec spec;
    spec.potential = PotentialTag::tdlo;
    const auto pde = unconfined_tdlo_propagate(centered, sp, spec, 2 * kPi, c);
    const auto theta_field = evolve_theta_centered(centered, sp, 2 * kPi, spec.grid(), c);
    const double err = relative_l2(theta_field, pde);
    return {err <= 1e-3, "relative_l2=" + fmt("%.3e", err) + " tol=1e-3"};
}

Outcome oracle_agreement() {
    const auto lin = WallTrajectory::linear(100, 2);
    const FrameMap map(lin);
    const double t = 2.0;
    const auto error_of = [&](const SolverSpec& s) {
        const auto psi0 = evolve_theta_centered(centered, lin, 0, s.grid(), c);
        const auto num = evolve_fixed_frame(psi0, map, s, t, c);
        const double k = map.scale(t);
        const auto ref =
            to_fixed_frame(evolve_theta_centered(centered, lin, t, {s.n_points, s.x_min * k, s.x_max * k}, c), map, t);
        return relative_l2(num, ref);
    };
    const double err = error_of(SolverSpec{});
    SolverSpec base;
    base.n_points = 513;
    base.dt = 4e-3;
    const auto study = convergence_study(error_of, base, 3);
    std::string ratios;
    for (double r : study.ratios) ratios += (ratios.empty() ? "" : ",") + fmt("%.3f", r);
    return {err <= 1e-4 && study.second_order(),
            "relative_l2=" + fmt("%.3e", err) + " tol=1e-4 ratios=" + ratios + " band=[3.5,4.5]"};
}

Outcome basis_residuals() {
    struct Case {
        const char* label;
        BasisIndex idx;
        WallTrajectory traj;
        double t;
        std::size_t points;
    };
    const std::vector<Case> cases{
        {"psi", {Sector::even, 1}, WallTrajectory::linear(100, 2), 1.0, 513},
        {"zeta", {Sector::odd, 2}, WallTrajectory::linear(100, 2), 1.0, 513},
        {"psi_c", {Sector::even, 1}, WallTrajectory::reversing_linear(100, 2, 4), 3.0, 513},
        {"F", {Sector::even, 1}, WallTrajectory::smooth_periodic(100, 0.1, 1), 1.0, 1025},
    };
    bool ok = true;
    std::string detail;
    for (const Case& cs : cases) {
        std::size_t np = cs.points;
        double dt = 1e-2;
        double prev = schrodinger_residual(cs.idx, cs.traj, cs.t, np, dt, c);
        for (int level = 0; level < 2; ++level) {
            np = 2 * np - 1;
            dt /= 2;
            const double r = schrodinger_residual(cs.idx, cs.traj, cs.t, np, dt, c);
            const double ratio = prev / r;
            ok = ok && ratio >= 3.5 && ratio <= 4.5;
            detail += std::string(level ? "," : " ") + (level ? "" : std::string(cs.label) + "=") + fmt("%.3f", ratio);
            prev = r;
        }
    }
    const GaussLegendreRule rule = gauss_legendre(512);
    double worst = 0.0;
    for (const auto& [traj, t] : {std::pair{WallTrajectory::linear(100, 2), 1.0},
                                  std::pair{WallTrajectory::smooth_periodic(100, 0.1, 1), 2.0}}) {
        const double L = length(traj, t);
        std::vector<BasisIndex> states;
        for (int n = 0; n <= 20; ++n) states.push_back({Sector::even, n});
        for (int n = 1; n <= 20; ++n) states.push_back({Sector::odd, n});
        for (std::size_t a = 0; a < states.size(); ++a) {
            for (std::size_t b = a; b < states.size(); ++b) {
                const cplx overlap = integrate(rule, -L / 2, L / 2, [&](double x) {
                    return std::conj(basis_solution(states[a], traj, t, x, c)) * basis_solution(states[b], traj, t, x, c);
                });
                worst = std::max(worst, std::abs(overlap - (a == b ? 1.0 : 0.0)));
            }
        }
    }
    ok = ok && worst <= 1e-10;
    return {ok, "residual_ratios" + detail + " band=[3.5,4.5] orthonormality=" + fmt("%.3e", worst) + " tol=1e-10"};
}

Outcome parseval() {
    const auto e = expansion_coefficients({1, 10, 2}, WallTrajectory::linear(100, 2), c);
    const double deficit = 1.0 - e.captured_norm;
    return {deficit <= 1e-12, "1-sum|c|^2=" + fmt("%.3e", deficit) + " tol=1e-12 n_max=" + std::to_string(e.n_max)};
}

Outcome reversal_mismatch() {
    const double L0 = 100;
    const double T = 4;
    const BasisIndex idx{Sector::even, 0};
    std::vector<double> bounds;
    for (double q : {1e-2, 1e-3, 1e-4}) {
        const auto rv = WallTrajectory::reversing_linear(L0, q, T);
        double worst = 0.0;
        for (int j = -40; j <= 40; ++j) {
            const double x = 1.2 * j;
            const auto r = reversal_mismatch_ratio(idx, rv, x, c);
            const cplx first = cplx{0.0, q * c.mass * x * x / (c.hbar * L0)};
            worst = std::max(worst, std::abs(r.spatial - 1.0 - first) / (q * q));
        }
        bounds.push_back(worst);
    }
    const double lo = *std::min_element(bounds.begin(), bounds.end());
    const double hi = *std::max_element(bounds.begin(), bounds.end());
    const bool bounded = std::isfinite(hi) && lo > 0.0 && hi / lo < 2.0;

    const auto lin = WallTrajectory::linear(L0, 2);
    const auto rv = WallTrajectory::reversing_linear(L0, 2, T);
    const double L = length(rv, T / 2);
    const GaussLegendreRule rule = gauss_legendre(512);
    double off = 0.0;
    for (int m = 0; m <= 6; ++m) {
        for (int n = 0; n <= 6; ++n) {
            if (m == n) continue;
            const cplx overlap = integrate(rule, -L / 2, L / 2, [&](double x) {
                return std::conj(basis_solution({Sector::even, m}, rv, T / 2, x, c)) *
                       basis_solution({Sector::even, n}, lin, T / 2, x, c);
            });
            off = std::max(off, std::abs(overlap));
        }
    }
    return {bounded && off > 1e-3, "scaled_remainder=[" + fmt("%.4g", bounds[0]) + "," + fmt("%.4g", bounds[1]) + "," +
                                       fmt("%.4g", bounds[2]) + "] max_offdiag_overlap=" + fmt("%.3e", off) +
                                       " threshold=1e-3"};
}

Outcome single_wall() {
    const GaussianParams g{1, 50, 0};
    const GridSpec grid{2001, 1, 99};
    LocalityOptions o;
    o.geometry = Geometry::single_wall;
    double worst = 0.0;
    bool ok = true;
    for (double t : {1.0, 3.0, 5.0}) {
        const auto r = locality_compare(g, WallTrajectory::linear(100, 2), WallTrajectory::linear(100, 0), t, grid, c, o);
        worst = std::max(worst, r.relative_sup());
        ok = ok && r.verdict == Verdict::pass;
    }
    return {ok && worst <= 1e-10, "max_relative_sup=" + fmt("%.3e", worst) + " tol=1e-10"};
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<Criterion> criteria{
        {1, "theta transformation identities", 1, theta_identities},
        {2, "identity at t=0", 1, identity_at_zero},
        {3, "locality", 2, locality},
        {4, "full-cycle reversal", 5, full_cycle},
        {5, "oscillator scaling locality", 2, tdlo_scaling},
        {6, "geometric phase cross-check", 10, phase_cross_check},
        {7, "phase scaling law", 1, phase_scaling},
        {8, "phase table reproduction", 5, fig1},
        {9, "confined vs unconfined packet", 60, fig2},
        {10, "fixed-frame oracle agreement", 60, oracle_agreement},
        {11, "basis residuals and orthonormality", 10, basis_residuals},
        {12, "Parseval completeness", 1, parseval},
        {13, "reversal mismatch", 5, reversal_mismatch},
        {14, "single-wall locality", 2, single_wall},
    };
    int failures = 0;
    for (const Criterion& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < cr.budget_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        std::printf("criterion %2d %s: %s  %s  runtime=%.2fs budget=%.0fs%s\n", cr.id, pass ? "PASS" : "FAIL",
                    cr.name.c_str(), o.detail.c_str(), secs, cr.budget_s, in_time ? "" : " (over budget)");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
