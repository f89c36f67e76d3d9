#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdbc/basis.hpp"
#include "tdbc/core_model.hpp"
#include "tdbc/theta.hpp"

namespace tdbc {

/// Wall arrangement: two symmetric walls at +-L/2, or a fixed wall at 0
/// and a moving wall at L.
enum class Geometry { symmetric, single_wall };

/// Gaussian expanded over the exact basis solutions.
struct SpectralExpansion {
    Geometry geometry = Geometry::symmetric;
    std::vector<cplx> even_coeffs;  ///< index n >= 0 (symmetric only)
    std::vector<cplx> odd_coeffs;   ///< index n - 1 for n >= 1 (odd or single-wall states)
    int n_max = 0;
    double captured_norm = 0.0;
    double tail_tol = 1e-14;
    std::vector<std::string> warnings;

    cplx odd(int n) const { return odd_coeffs.at(static_cast<std::size_t>(n - 1)); }
};

struct ExpansionOptions {
    double tail_tol = 1e-14;
    std::optional<int> n_max;           ///< fixed truncation; auto from decay otherwise
    double localization_warn = 0.1;     ///< Delta x(0)/L0 above this warns
    double wall_tail_limit = 1e-6;      ///< Gaussian mass outside the box above this throws
};

/// Argument, nome and prefactors of the theta propagator at (x, t).
/// A can underflow for far off-center packets; log_A is always finite.
struct ThetaPropagatorArgs {
    cplx z;
    cplx kappa;
    cplx A;
    cplx log_A;
    cplx B;
    cplx C;
};

/// exp(-(x-x0)^2/4d^2 + i p0 x/hbar) / ((2 pi)^(1/4) sqrt(d)).
cplx initial_gaussian(const GaussianParams& g, const PhysicalConstants& c, double x);

/// Probability mass of |initial_gaussian|^2 outside the initial box.
double wall_tail_mass(const GaussianParams& g, Geometry geometry, double L0);

/// Closed-form overlaps <psi_n(0)|G> with the integral extended to the real
/// line. Throws DomainError if wall_tail_mass exceeds wall_tail_limit.
SpectralExpansion expansion_coefficients(const GaussianParams& g, const WallTrajectory& traj,
                                         const PhysicalConstants& c,
                                         Geometry geometry = Geometry::symmetric,
                                         const ExpansionOptions& opts = {});

/// sum_n coeff_n psi_n(x, t) on the grid.
WaveFunctionGrid evolve_sum(const SpectralExpansion& expansion, const WallTrajectory& traj,
                            double t, const GridSpec& grid, const PhysicalConstants& c);

/// kappa(t) = 4 pi hbar d^2 / (L0 (2 d^2 m L'(0) - i hbar L0)) - 2 pi hbar tau(t) / m.
cplx propagator_kappa(const GaussianParams& g, const WallTrajectory& traj, double t,
                      const PhysicalConstants& c);

ThetaPropagatorArgs theta_propagator_args(const GaussianParams& g, const WallTrajectory& traj,
                                          double t, double x, const PhysicalConstants& c);

/// Single theta2 closed form for a centered Gaussian.
WaveFunctionGrid evolve_theta_centered(const GaussianParams& g, const WallTrajectory& traj,
                                       double t, const GridSpec& grid,
                                       const PhysicalConstants& c,
                                       double theta_tol = kDefaultThetaTol);

/// Eight-theta closed form for an off-center, moving Gaussian. In the
/// single-wall geometry the odd-sector terms are used with z -> z/2 and
/// kappa -> kappa/4.
WaveFunctionGrid evolve_theta_general(const GaussianParams& g, const WallTrajectory& traj,
                                      double t, const GridSpec& grid, const PhysicalConstants& c,
                                      Geometry geometry = Geometry::symmetric,
                                      double theta_tol = kDefaultThetaTol);

// Reversing walls (centered Gaussian, one period).

/// Freely evolved centered Gaussian at T/2 used as the restart state.
cplx reversal_gaussian(const GaussianParams& g, const PhysicalConstants& c, double T, double x);
/// g_n^c: overlap of the restart state with the contracting basis at T/2.
cplx contracting_coefficient(int n, const GaussianParams& g, const WallTrajectory& traj,
                             const PhysicalConstants& c);
/// kappa^c at t = T.
cplx cycle_kappa(const GaussianParams& g, const WallTrajectory& traj, const PhysicalConstants& c);
/// Closed-form psi^c(x, T).
WaveFunctionGrid evolve_cycle_reversing(const GaussianParams& g, const WallTrajectory& traj,
                                        const GridSpec& grid, const PhysicalConstants& c,
                                        double localization_warn = 0.1,
                                        double theta_tol = kDefaultThetaTol);
/// g_n^c on the contracting basis, truncated like expansion_coefficients.
SpectralExpansion contracting_expansion(const GaussianParams& g, const WallTrajectory& traj,
                                        const PhysicalConstants& c,
                                        const ExpansionOptions& opts = {});
/// Re-expansion route: contracting_expansion followed by evolve_sum at T.
WaveFunctionGrid evolve_cycle_reexpansion(const GaussianParams& g, const WallTrajectory& traj,
                                          const GridSpec& grid, const PhysicalConstants& c,
                                          const ExpansionOptions& opts = {});

/// Unconfined Gaussian in the oscillator Omega^2 = -L''/L (theta4 set to 1).
WaveFunctionGrid evolve_unconfined_approx(const GaussianParams& g, const WallTrajectory& traj,
                                          double t, const GridSpec& grid,
                                          const PhysicalConstants& c);

struct LocalityOptions {
    Geometry geometry = Geometry::symmetric;
    double rel_tol = 1e-10;
    double localization_warn = 0.1;
    double theta_tol = kDefaultThetaTol;
};

/// Evolves the same Gaussian under two wall laws and compares the complex
/// fields pointwise. The laws must share L(0) unless one is a rescaling
/// (Scaled) of the other; the grid must lie inside both boxes at t.
ComparisonReport locality_compare(const GaussianParams& g, const WallTrajectory& traj_a,
                                  const WallTrajectory& traj_b, double t, const GridSpec& grid,
                                  const PhysicalConstants& c, const LocalityOptions& opts = {});

}  // namespace tdbc
