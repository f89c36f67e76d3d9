#pragma once

#include "tdbc/core_model.hpp"

namespace tdbc {

/// Parity family of the exact basis solutions.
///  even:        cos((2n+1) pi x / L) on [-L/2, L/2], n >= 0
///  odd:         sin(2n pi x / L)     on [-L/2, L/2], n >= 1
///  single_wall: sin(n pi x / L)      on [0, L],       n >= 1
enum class Sector { even, odd, single_wall };

struct BasisIndex {
    Sector sector = Sector::even;
    int n = 0;

    void validate() const;
    /// nu in cos/sin(pi nu x / L): 2n+1, 2n or n.
    int wave_number() const;
};

/// Instantaneous box [lower, upper] of a sector at width L.
double box_lower(Sector sector, double L);
double box_upper(Sector sector, double L);
bool inside_box(Sector sector, double L, double x);

/// sqrt(2/L) cos or sin of the instantaneous eigenstate; zero outside the box.
double instantaneous_eigenstate(const BasisIndex& idx, const WallTrajectory& traj, double t,
                                double x);
double instantaneous_energy(const BasisIndex& idx, const WallTrajectory& traj, double t,
                            const PhysicalConstants& c);

/// Clock entering the basis phase exp(-i hbar pi^2 nu^2 s / 2m). Equals tau(t)
/// except on the contraction leg of a reversing trajectory, where it restarts
/// at T/2.
double basis_clock(const WallTrajectory& traj, double t);

/// Exact solution
///   sqrt(2/L) exp(i m x^2 L' / (2 hbar L) - i hbar pi^2 nu^2 s(t) / 2m) f(pi nu x / L)
/// of the moving-wall problem (also of the confined oscillator with
/// Omega^2 = -L''/L). Zero outside the instantaneous box.
cplx basis_solution(const BasisIndex& idx, const WallTrajectory& traj, double t, double x,
                    const PhysicalConstants& c);

/// Value with analytic first and second x-derivatives.
struct BasisJet {
    cplx value;
    cplx dx;
    cplx dxx;
};
BasisJet basis_jet(const BasisIndex& idx, const WallTrajectory& traj, double t, double x,
                   const PhysicalConstants& c);

/// Fixed-domain solution of the dilated problem, y in the initial box.
cplx transformed_basis_solution(const BasisIndex& idx, const WallTrajectory& traj, double t,
                                double y, const PhysicalConstants& c);

/// Confining potential -m L''/(2L) x^2 (zero for linear walls).
double confined_potential(const WallTrajectory& traj, double t, double x,
                          const PhysicalConstants& c);

/// Relative residual ||i hbar d_t psi - H psi|| / ||H psi|| with central
/// differences in t (step dt) and x (n_points across the box at time t),
/// interior points only (3-point wall margin). Throws DomainError when the
/// grid has fewer than 16 points per local oscillation.
double schrodinger_residual(const BasisIndex& idx, const WallTrajectory& traj, double t,
                            std::size_t n_points, double dt, const PhysicalConstants& c);

/// psi_n(x, T/2) / psi_n^c(x, T/2) for an even basis state at the reversal.
/// full = tau_phase * spatial, with tau_phase the x-independent ratio (value
/// at x = 0) and spatial the chirp mismatch.
struct MismatchRatio {
    cplx full;
    cplx tau_phase;
    cplx spatial;
};
MismatchRatio reversal_mismatch_ratio(const BasisIndex& idx, const WallTrajectory& traj, double x,
                                      const PhysicalConstants& c);

}  // namespace tdbc
