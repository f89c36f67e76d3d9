#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tdbc/core_model.hpp"
#include "tdbc/propagator.hpp"

namespace tdbc {

/// Dilation x = (L(t)/L0) y mapping the moving box onto the initial one.
class FrameMap {
public:
    explicit FrameMap(WallTrajectory traj) : traj_(std::move(traj)) {}

    const WallTrajectory& trajectory() const noexcept { return traj_; }
    /// ln(L(t)/L0).
    double xi(double t) const;
    /// L(t)/L0.
    double scale(double t) const;

private:
    WallTrajectory traj_;
};

/// psi~(y) = sqrt(L/L0) psi(L y / L0). The samples are kept and the abscissae
/// rescaled exactly, so no interpolation takes place.
WaveFunctionGrid to_fixed_frame(const WaveFunctionGrid& psi, const FrameMap& map, double t);
WaveFunctionGrid from_fixed_frame(const WaveFunctionGrid& psi_tilde, const FrameMap& map,
                                  double t);

enum class PotentialTag { infinite_well, tdlo };

struct SolverSpec {
    std::size_t n_points = 4096;  ///< including both Dirichlet end nodes
    double dt = 1e-4;
    double x_min = -50.0;
    double x_max = 50.0;
    PotentialTag potential = PotentialTag::infinite_well;

    void validate() const;
    GridSpec grid() const { return {n_points, x_min, x_max}; }
    /// Same domain with h and dt halved (2N - 1 points).
    SolverSpec refined() const;
};

/// Crank-Nicolson for the fixed-frame Hamiltonian
///   P^2/2m (L0/L)^2 + v(L y/L0) - (L'/2L)(YP + PY)
/// with coefficients at mid-step and Dirichlet ends. psi0 must be sampled on
/// spec.grid(). The step is shrunk so that t_final is hit exactly. Throws
/// ConvergenceError if the norm drifts by more than 1e-6.
WaveFunctionGrid evolve_fixed_frame(const WaveFunctionGrid& psi0_tilde, const FrameMap& map,
                                    const SolverSpec& spec, double t_final,
                                    const PhysicalConstants& c = {});

/// Crank-Nicolson for P^2/2m + m Omega^2(t) x^2 / 2 on a large Dirichlet box,
/// starting from initial_gaussian. Throws DomainError if the box is narrower
/// than 10 Delta x(t_final) and ConvergenceError when |psi| next to either
/// edge exceeds edge_limit.
WaveFunctionGrid unconfined_tdlo_propagate(const GaussianParams& g, const WallTrajectory& traj,
                                           const SolverSpec& spec, double t_final,
                                           const PhysicalConstants& c = {},
                                           double edge_limit = 1e-10);

/// Relative L2 difference ||a - b|| / ||b|| of two fields on the same grid.
double relative_l2(const WaveFunctionGrid& a, const WaveFunctionGrid& b);

struct ConvergenceStudy {
    std::vector<SolverSpec> specs;
    std::vector<double> errors;
    std::vector<double> ratios;  ///< errors[i] / errors[i + 1]

    bool second_order(double lo = 3.5, double hi = 4.5) const;
};

/// Runs error_of on base and on successive refinements (h and dt halved together).
ConvergenceStudy convergence_study(const std::function<double(const SolverSpec&)>& error_of,
                                   const SolverSpec& base, int levels = 3);

}  // namespace tdbc
