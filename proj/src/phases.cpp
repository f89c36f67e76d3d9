#include "tdbc/phases.hpp"

#include <cmath>
#include <sstream>

#include "tdbc/errors.hpp"
#include "tdbc/quadrature.hpp"

namespace tdbc {

namespace {

void require_even(const BasisIndex& idx) {
    idx.validate();
    if (idx.sector != Sector::even) throw DomainError("phases are defined for the even sector");
}

double cycle_length(const WallTrajectory& traj, std::optional<double> horizon) {
    if (auto T = traj.period()) return *T;
    if (traj.is_static() && horizon && *horizon > 0.0) return *horizon;
    throw DomainError("trajectory is not cyclic: " + traj.describe());
}

double expectation_with(const GaussLegendreRule& rule, const BasisIndex& idx,
                        const WallTrajectory& traj, double t, const PhysicalConstants& c) {
    const double L = length(traj, t);
    const double kin = -c.hbar * c.hbar / (2.0 * c.mass);
    return integrate(rule, box_lower(idx.sector, L), box_upper(idx.sector, L), [&](double x) {
        const BasisJet j = basis_jet(idx, traj, t, x, c);
        const cplx h_psi = kin * j.dxx + confined_potential(traj, t, x, c) * j.value;
        return (std::conj(j.value) * h_psi).real();
    });
}

double dynamical_phase_at(const BasisIndex& idx, const WallTrajectory& traj,
                          const PhysicalConstants& c, double T, std::size_t time_nodes,
                          std::size_t space_nodes) {
    const GaussLegendreRule time_rule = gauss_legendre(time_nodes);
    const GaussLegendreRule space_rule = gauss_legendre(space_nodes);
    const double integral = integrate(time_rule, 0.0, T, [&](double t) {
        return expectation_with(space_rule, idx, traj, t, c);
    });
    return -integral / c.hbar;
}

}  // namespace

double reduce_mod_2pi(double angle) {
    double r = std::fmod(angle, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    return r >= 2.0 * kPi ? 0.0 : r;
}

double total_phase(const BasisIndex& idx, const WallTrajectory& traj, const PhysicalConstants& c,
                   std::optional<double> horizon) {
    require_even(idx);
    c.validate();
    const double T = cycle_length(traj, horizon);
    const double nu = idx.wave_number();
    return c.hbar * kPi * kPi * nu * nu * tau(traj, T) / (2.0 * c.mass);
}

double energy_expectation(const BasisIndex& idx, const WallTrajectory& traj, double t,
                          const PhysicalConstants& c, std::size_t space_nodes) {
    idx.validate();
    return expectation_with(gauss_legendre(space_nodes), idx, traj, t, c);
}

double dynamical_phase(const BasisIndex& idx, const WallTrajectory& traj,
                       const PhysicalConstants& c, const PhaseQuadrature& quad) {
    require_even(idx);
    c.validate();
    const double T = cycle_length(traj, quad.horizon);
    const double coarse = dynamical_phase_at(idx, traj, c, T, quad.time_nodes, quad.space_nodes);
    const double fine =
        dynamical_phase_at(idx, traj, c, T, 2 * quad.time_nodes, 2 * quad.space_nodes);
    if (std::abs(fine - coarse) > quad.doubling_tol * std::abs(fine)) {
        std::ostringstream os;
        os << "dynamical phase not converged under node doubling: " << coarse << " vs " << fine;
        throw ConvergenceError(os.str());
    }
    return fine;
}

double wall_action_integral(const WallTrajectory& traj, IntegralMethod method) {
    if (traj.is_static()) return 0.0;
    const auto T = traj.period();
    if (!T) throw DomainError("trajectory is not cyclic: " + traj.describe());
    if (method == IntegralMethod::automatic) {
        if (const auto* s = std::get_if<WallTrajectory::SmoothPeriodic>(&traj.law())) {
            const double q = s->q;
            return kPi * s->L0 * s->L0 * (1.0 + q) * q * q * s->omega /
                   (2.0 * std::pow(1.0 - q * q, 1.5));
        }
        if (const auto* s = std::get_if<WallTrajectory::Scaled>(&traj.law())) {
            return s->k * s->k * wall_action_integral(*s->inner, method);
        }
    }
    const auto integrand = [&](double t) {
        const double v = velocity(traj, t);
        return v * v - length(traj, t) * acceleration(traj, t);
    };
    return adaptive_integrate(integrand, 0.0, *T).value;
}

double geometric_phase(const BasisIndex& idx, const WallTrajectory& traj,
                       const PhysicalConstants& c, IntegralMethod method) {
    require_even(idx);
    c.validate();
    const double nu = idx.wave_number();
    const double factor = 1.0 - 6.0 / (kPi * kPi * nu * nu);
    return c.mass / (24.0 * c.hbar) * factor * wall_action_integral(traj, method);
}

PhaseDecomposition decompose_phase(const BasisIndex& idx, const WallTrajectory& traj,
                                   const PhysicalConstants& c, const PhaseQuadrature& quad) {
    PhaseDecomposition p;
    p.mu = total_phase(idx, traj, c, quad.horizon);
    p.delta = dynamical_phase(idx, traj, c, quad);
    p.gamma = -p.mu - p.delta;
    p.gamma_mod_2pi = reduce_mod_2pi(p.gamma);
    return p;
}

std::vector<Fig1Row> fig1_dataset(int n_min, int n_max, const std::vector<double>& Lbar0_list,
                                  double q, double omega, const PhysicalConstants& c) {
    if (n_min < 0 || n_max < n_min) throw DomainError("fig1 needs 0 <= n_min <= n_max");
    std::vector<Fig1Row> rows;
    for (double L : Lbar0_list) {
        const WallTrajectory traj = WallTrajectory::smooth_periodic(L, q, omega);
        for (int n = n_min; n <= n_max; ++n) {
            const double g = geometric_phase({Sector::even, n}, traj, c);
            rows.push_back({L, n, g, reduce_mod_2pi(g)});
        }
    }
    return rows;
}

}  // namespace tdbc
