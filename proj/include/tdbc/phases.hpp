#pragma once

#include <optional>
#include <vector>

#include "tdbc/basis.hpp"
#include "tdbc/core_model.hpp"

namespace tdbc {

// Phases of the even basis states over one period of a cyclic wall law.
// Sign conventions: psi_n(T) = exp(-i mu) psi_n(0) with mu > 0, the
// dynamical phase is delta = -(1/hbar) int <H> dt, and the geometric
// remainder is gamma = -mu - delta.

struct PhaseDecomposition {
    double mu = 0.0;
    double delta = 0.0;
    double gamma = 0.0;          ///< unreduced
    double gamma_mod_2pi = 0.0;  ///< in [0, 2 pi)
};

struct PhaseQuadrature {
    std::size_t time_nodes = 256;
    std::size_t space_nodes = 256;
    /// Relative change allowed when both node counts are doubled.
    double doubling_tol = 1e-10;
    /// Integration horizon for laws without a period (static box only).
    std::optional<double> horizon;
};

double reduce_mod_2pi(double angle);

/// hbar pi^2 nu^2 tau(T) / 2m.
double total_phase(const BasisIndex& idx, const WallTrajectory& traj, const PhysicalConstants& c,
                   std::optional<double> horizon = std::nullopt);

/// <psi_n| P^2/2m + m Omega^2 x^2/2 |psi_n> at time t by Gauss-Legendre over the box.
double energy_expectation(const BasisIndex& idx, const WallTrajectory& traj, double t,
                          const PhysicalConstants& c, std::size_t space_nodes = 256);

/// -(1/hbar) int_0^T <H> dt. Throws ConvergenceError if doubling the node
/// counts moves the result by more than doubling_tol (relative).
double dynamical_phase(const BasisIndex& idx, const WallTrajectory& traj,
                       const PhysicalConstants& c, const PhaseQuadrature& quad = {});

enum class IntegralMethod { automatic, quadrature };

/// int_0^T (L'^2 - L L'') dt over one period. automatic uses the closed form
/// for SmoothPeriodic and the k^2 law for Scaled.
double wall_action_integral(const WallTrajectory& traj,
                            IntegralMethod method = IntegralMethod::automatic);

/// (m / 24 hbar) (1 - 6 / (pi nu)^2) int_0^T (L'^2 - L L'') dt.
double geometric_phase(const BasisIndex& idx, const WallTrajectory& traj,
                       const PhysicalConstants& c,
                       IntegralMethod method = IntegralMethod::automatic);

/// mu and delta by independent quadratures, gamma = -mu - delta.
PhaseDecomposition decompose_phase(const BasisIndex& idx, const WallTrajectory& traj,
                                   const PhysicalConstants& c, const PhaseQuadrature& quad = {});

struct Fig1Row {
    double Lbar0 = 0.0;
    int n = 0;
    double gamma = 0.0;
    double gamma_mod_2pi = 0.0;
};

/// Geometric phase of psi_n for SmoothPeriodic(Lbar0, q, omega), one row per
/// (Lbar0, n), Lbar0 outer.
std::vector<Fig1Row> fig1_dataset(int n_min, int n_max, const std::vector<double>& Lbar0_list,
                                  double q, double omega, const PhysicalConstants& c);

}  // namespace tdbc
