#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tdbc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;

    /// Throws DomainError unless both are strictly positive.
    void validate() const;
};

/// Closed interval of admissible times for a trajectory.
struct TimeWindow {
    double t_min = 0.0;
    double t_max = std::numeric_limits<double>::infinity();

    bool contains(double t) const noexcept { return t >= t_min && t <= t_max; }
};

/// Law L(t) of the box width. All derived quantities (velocity,
/// acceleration, tau, omega_squared) are analytic.
class WallTrajectory {
public:
    /// L(t) = L0 + q t.
    struct Linear {
        double L0;
        double q;
    };
    /// Expansion L0 + q t on [0, T/2), contraction L0 + q (T - t) on [T/2, T].
    struct ReversingLinear {
        double L0;
        double q;
        double T;
    };
    /// L(t) = L0 sqrt((1 + q) / (1 + q cos(omega t))).
    struct SmoothPeriodic {
        double L0;
        double q;
        double omega;
    };
    /// L(t) = k L_inner(t).
    struct Scaled {
        std::shared_ptr<const WallTrajectory> inner;
        double k;
    };
    using Law = std::variant<Linear, ReversingLinear, SmoothPeriodic, Scaled>;

    /// Contracting walls (q < 0) get t_max = 0.99 L0/|q|.
    static WallTrajectory linear(double L0, double q);
    /// Explicit window end; must keep L(t) > 0.
    static WallTrajectory linear(double L0, double q, double t_max);
    static WallTrajectory reversing_linear(double L0, double q, double T);
    static WallTrajectory smooth_periodic(double L0, double q, double omega);
    static WallTrajectory scaled(const WallTrajectory& inner, double k);

    const Law& law() const noexcept { return law_; }
    const TimeWindow& window() const noexcept { return window_; }
    double initial_length() const;

    /// Period T with L(T) = L(0) and L'(T) = L'(0), when the law has one.
    std::optional<double> period() const;
    /// L(t) constant.
    bool is_static() const;
    bool is_scaled() const noexcept { return std::holds_alternative<Scaled>(law_); }

    std::string describe() const;

private:
    WallTrajectory(Law law, TimeWindow window) : law_(std::move(law)), window_(window) {}

    Law law_;
    TimeWindow window_;
};

double length(const WallTrajectory& traj, double t);
double velocity(const WallTrajectory& traj, double t);
double acceleration(const WallTrajectory& traj, double t);
/// tau(t) = int_0^t L(s)^-2 ds, closed form per law.
double tau(const WallTrajectory& traj, double t);
/// Omega^2(t) = -L''(t)/L(t), frequency of the confined oscillator.
double omega_squared(const WallTrajectory& traj, double t);

struct GaussianParams {
    double d = 1.0;
    double x0 = 0.0;
    double p0 = 0.0;

    void validate() const;
    bool centered() const noexcept { return x0 == 0.0 && p0 == 0.0; }
};

/// Delta x(t) / L0 for a freely spreading Gaussian of initial width d.
double localization_diagnostic(const GaussianParams& g, const PhysicalConstants& c, double t,
                               double L0);

struct GridSpec {
    std::size_t n_points = 2049;
    double x_min = -50.0;
    double x_max = 50.0;

    void validate() const;
    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    std::vector<double> positions() const;
};

/// Samples of psi(x, t) on a uniform grid.
struct WaveFunctionGrid {
    std::vector<double> positions;
    std::vector<cplx> values;
    double time = 0.0;
    double norm = 0.0;
    std::vector<std::string> warnings;

    /// Builds the grid and fills norm with the trapezoid estimate of int |psi|^2.
    static WaveFunctionGrid make(std::vector<double> positions, std::vector<cplx> values,
                                 double time);
    double spacing() const;
    double max_abs() const;
};

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> samples, double h);
cplx trapezoid(std::span<const cplx> samples, double h);

enum class Verdict { pass, warn, fail };
std::string to_string(Verdict v);

struct ComparisonReport {
    double sup_error = 0.0;          ///< max |a - b|
    double reference_max = 0.0;      ///< max |b|
    double l2_error = 0.0;           ///< ||a - b|| / ||b||
    double localization_ratio = 0.0; ///< Delta x(t) / L0
    Verdict verdict = Verdict::pass;

    double relative_sup() const {
        return reference_max > 0.0 ? sup_error / reference_max : sup_error;
    }
};

/// Pointwise comparison of two fields sampled on the same grid. The verdict is
/// warn whenever localization_ratio exceeds localization_warn, otherwise pass
/// iff relative_sup() <= rel_tol.
ComparisonReport compare_fields(const WaveFunctionGrid& a, const WaveFunctionGrid& b,
                                double localization_ratio, double rel_tol,
                                double localization_warn);

}  // namespace tdbc
