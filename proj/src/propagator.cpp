#include "tdbc/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tdbc/errors.hpp"

namespace tdbc {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kMaxBasisTerms = 200'000;

Sector box_sector(Geometry geometry) {
    return geometry == Geometry::single_wall ? Sector::single_wall : Sector::even;
}

// Closed-form propagators only cover one monotone leg of a reversing law.
void require_single_leg(const WallTrajectory& traj, double t) {
    const WallTrajectory* cur = &traj;
    while (const auto* s = std::get_if<WallTrajectory::Scaled>(&cur->law())) cur = s->inner.get();
    if (const auto* r = std::get_if<WallTrajectory::ReversingLinear>(&cur->law())) {
        if (t >= r->T / 2.0) {
            throw DomainError("theta propagator applies before the reversal; use the cycle routes");
        }
    }
}

const WallTrajectory::ReversingLinear& require_reversing(const WallTrajectory& traj) {
    const auto* r = std::get_if<WallTrajectory::ReversingLinear>(&traj.law());
    if (r == nullptr) throw DomainError("cycle routes need a ReversingLinear trajectory");
    return *r;
}

void require_centered(const GaussianParams& g) {
    g.validate();
    if (!g.centered()) throw DomainError("route needs a centered Gaussian (x0 = p0 = 0)");
}

// log of int exp(-i m v0 x^2/(2 hbar L0)) exp(i k x) G(x) dx over the real line.
cplx log_overlap(const GaussianParams& g, const PhysicalConstants& c, double L0, double v0,
                 double k) {
    const cplx a{1.0 / (4.0 * g.d * g.d), c.mass * v0 / (2.0 * c.hbar * L0)};
    const cplx b{g.x0 / (2.0 * g.d * g.d), g.p0 / c.hbar + k};
    return -0.25 * std::log(2.0 * kPi) - 0.5 * std::log(g.d) + 0.5 * std::log(kPi / a) -
           g.x0 * g.x0 / (4.0 * g.d * g.d) + b * b / (4.0 * a);
}

cplx cosine_overlap(const GaussianParams& g, const PhysicalConstants& c, double L0, double v0,
                    double k) {
    return std::sqrt(2.0 / L0) * 0.5 *
           (std::exp(log_overlap(g, c, L0, v0, k)) + std::exp(log_overlap(g, c, L0, v0, -k)));
}

cplx sine_overlap(const GaussianParams& g, const PhysicalConstants& c, double L0, double v0,
                  double k) {
    return std::sqrt(2.0 / L0) *
           (std::exp(log_overlap(g, c, L0, v0, k)) - std::exp(log_overlap(g, c, L0, v0, -k))) /
           (2.0 * kI);
}

// Stops on amplitude rather than |c|^2: the pointwise field error scales with |c|.
bool decayed(int n, double n_peak, double contribution, double tail_tol) {
    return static_cast<double>(n) > n_peak + 2.0 && std::sqrt(contribution) < 1e-3 * tail_tol;
}

void finish_expansion(SpectralExpansion& e) {
    double s = 0.0;
    for (cplx v : e.even_coeffs) s += std::norm(v);
    for (cplx v : e.odd_coeffs) s += std::norm(v);
    e.captured_norm = s;
    if (1.0 - s > e.tail_tol) {
        std::ostringstream os;
        os << "truncation: captured norm deficit " << 1.0 - s << " exceeds tail tolerance "
           << e.tail_tol;
        e.warnings.push_back(os.str());
    }
}

WaveFunctionGrid finish(std::vector<double> x, std::vector<cplx> v, double t) {
    return WaveFunctionGrid::make(std::move(x), std::move(v), t);
}

}  // namespace

cplx initial_gaussian(const GaussianParams& g, const PhysicalConstants& c, double x) {
    const double u = x - g.x0;
    return std::exp(cplx{-u * u / (4.0 * g.d * g.d), g.p0 * x / c.hbar}) /
           (std::pow(2.0 * kPi, 0.25) * std::sqrt(g.d));
}

double wall_tail_mass(const GaussianParams& g, Geometry geometry, double L0) {
    const double s = std::sqrt(2.0) * g.d;
    if (geometry == Geometry::single_wall) {
        return 0.5 * std::erfc((L0 - g.x0) / s) + 0.5 * std::erfc(g.x0 / s);
    }
    return 0.5 * std::erfc((L0 / 2.0 - g.x0) / s) + 0.5 * std::erfc((L0 / 2.0 + g.x0) / s);
}

SpectralExpansion expansion_coefficients(const GaussianParams& g, const WallTrajectory& traj,
                                         const PhysicalConstants& c, Geometry geometry,
                                         const ExpansionOptions& opts) {
    g.validate();
    c.validate();
    const double L0 = traj.initial_length();
    const double v0 = velocity(traj, 0.0);
    const double tail = wall_tail_mass(g, geometry, L0);
    if (tail > opts.wall_tail_limit) {
        std::ostringstream os;
        os << "initial state not localized: mass " << tail << " outside the box";
        throw DomainError(os.str());
    }

    SpectralExpansion e;
    e.geometry = geometry;
    e.tail_tol = opts.tail_tol;
    const double ratio = localization_diagnostic(g, c, 0.0, L0);
    if (ratio > opts.localization_warn) {
        std::ostringstream os;
        os << "localization: Delta x(0)/L0 = " << ratio << " above " << opts.localization_warn;
        e.warnings.push_back(os.str());
    }

    // Packet momentum after removing the initial chirp sets where |coeff| peaks.
    const double k_eff = std::abs(g.p0 / c.hbar - c.mass * v0 * g.x0 / (c.hbar * L0));
    const double nu_peak = k_eff * L0 / kPi;
    const int cap = opts.n_max.value_or(kMaxBasisTerms);

    if (geometry == Geometry::single_wall) {
        // A packet symmetric about L0/2 has vanishing even-n overlaps, so two
        // consecutive terms must be small.
        double prev = 0.0;
        for (int n = 1; n <= cap; ++n) {
            const cplx cn = sine_overlap(g, c, L0, v0, kPi * n / L0);
            e.odd_coeffs.push_back(cn);
            e.n_max = n;
            const double contribution = std::norm(cn);
            if (!opts.n_max && n > 1 && decayed(n, nu_peak, std::max(contribution, prev), opts.tail_tol)) break;
            prev = contribution;
        }
    } else {
        for (int n = 0; n <= cap; ++n) {
            const cplx hn = cosine_overlap(g, c, L0, v0, kPi * (2 * n + 1) / L0);
            e.even_coeffs.push_back(hn);
            double contribution = std::norm(hn);
            if (n >= 1) {
                const cplx jn = g.centered() ? cplx{} : sine_overlap(g, c, L0, v0, kPi * 2 * n / L0);
                e.odd_coeffs.push_back(jn);
                contribution += std::norm(jn);
            }
            e.n_max = n;
            if (!opts.n_max && decayed(n, nu_peak / 2.0, contribution, opts.tail_tol)) break;
        }
    }
    if (!opts.n_max && e.n_max >= cap) throw ConvergenceError("expansion did not decay");
    finish_expansion(e);
    return e;
}

WaveFunctionGrid evolve_sum(const SpectralExpansion& expansion, const WallTrajectory& traj,
                            double t, const GridSpec& grid, const PhysicalConstants& c) {
    const double L = length(traj, t);
    const double dL = velocity(traj, t);
    const double clock = basis_clock(traj, t);
    const double beta = c.mass * dL / (2.0 * c.hbar * L);
    const double phase_unit = -c.hbar * kPi * kPi * clock / (2.0 * c.mass);

    // Coefficients times their time phase, with the wave number of each term.
    struct Term {
        cplx weight;
        double nu;
        bool cosine;
    };
    std::vector<Term> terms;
    const auto add = [&](cplx coeff, int nu, bool cosine) {
        if (coeff == cplx{}) return;
        const double dnu = nu;
        terms.push_back({coeff * std::exp(kI * phase_unit * dnu * dnu), dnu, cosine});
    };
    if (expansion.geometry == Geometry::single_wall) {
        for (std::size_t i = 0; i < expansion.odd_coeffs.size(); ++i) {
            add(expansion.odd_coeffs[i], static_cast<int>(i) + 1, false);
        }
    } else {
        for (std::size_t n = 0; n < expansion.even_coeffs.size(); ++n) {
            add(expansion.even_coeffs[n], 2 * static_cast<int>(n) + 1, true);
        }
        for (std::size_t i = 0; i < expansion.odd_coeffs.size(); ++i) {
            add(expansion.odd_coeffs[i], 2 * (static_cast<int>(i) + 1), false);
        }
    }

    const Sector sector = box_sector(expansion.geometry);
    std::vector<double> x = grid.positions();
    std::vector<cplx> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!inside_box(sector, L, x[j])) continue;
        cplx s{};
        for (const Term& term : terms) {
            const double arg = kPi * term.nu * x[j] / L;
            s += term.weight * (term.cosine ? std::cos(arg) : std::sin(arg));
        }
        v[j] = std::sqrt(2.0 / L) * std::exp(kI * beta * x[j] * x[j]) * s;
    }
    WaveFunctionGrid out = finish(std::move(x), std::move(v), t);
    out.warnings = expansion.warnings;
    return out;
}

cplx propagator_kappa(const GaussianParams& g, const WallTrajectory& traj, double t,
                      const PhysicalConstants& c) {
    const double L0 = traj.initial_length();
    const double v0 = velocity(traj, 0.0);
    const double d2 = g.d * g.d;
    const cplx kappa = 4.0 * kPi * c.hbar * d2 /
                           (L0 * cplx{2.0 * d2 * c.mass * v0, -c.hbar * L0}) -
                       2.0 * kPi * c.hbar * tau(traj, t) / c.mass;
    if (!(kappa.imag() > 0.0)) throw DomainError("propagator nome left the upper half plane");
    return kappa;
}

ThetaPropagatorArgs theta_propagator_args(const GaussianParams& g, const WallTrajectory& traj,
                                          double t, double x, const PhysicalConstants& c) {
    const double L0 = traj.initial_length();
    const double v0 = velocity(traj, 0.0);
    const double L = length(traj, t);
    const double dL = velocity(traj, t);
    const double d2 = g.d * g.d;
    const cplx drift{2.0 * d2 * g.p0, -c.hbar * g.x0};  // 2 d^2 p0 - i hbar x0
    const cplx wall{2.0 * d2 * c.mass * v0, -c.hbar * L0};  // 2 d^2 m v0 - i hbar L0

    ThetaPropagatorArgs a;
    a.z = kPi * x / L;
    a.kappa = propagator_kappa(g, traj, t, c);
    a.log_A = -g.x0 * g.x0 / (4.0 * d2) + kI * drift * drift * L0 / (4.0 * d2 * c.hbar * wall) +
              kI * c.mass * x * x * dL / (2.0 * c.hbar * L);
    a.A = std::exp(a.log_A);
    a.B = std::sqrt(g.d * L0 * L) * std::sqrt(cplx{1.0 / d2, 2.0 * c.mass * v0 / (c.hbar * L0)});
    a.C = kPi * drift / (-wall);
    return a;
}

WaveFunctionGrid evolve_theta_centered(const GaussianParams& g, const WallTrajectory& traj,
                                       double t, const GridSpec& grid,
                                       const PhysicalConstants& c, double theta_tol) {
    require_centered(g);
    c.validate();
    require_single_leg(traj, t);
    const double L0 = traj.initial_length();
    const double v0 = velocity(traj, 0.0);
    const double L = length(traj, t);
    const double dL = velocity(traj, t);
    const cplx kappa = propagator_kappa(g, traj, t, c);
    const cplx log_pref = std::log(cplx{1.0, -1.0}) + 0.25 * std::log(2.0 * kPi) -
                          0.5 * std::log(cplx{0.0, -g.d * L0 * L}) -
                          0.5 * std::log(cplx{1.0 / (g.d * g.d), 2.0 * c.mass * v0 / (c.hbar * L0)});

    std::vector<double> x = grid.positions();
    std::vector<cplx> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!inside_box(Sector::even, L, x[j])) continue;
        const cplx chirp = kI * c.mass * x[j] * x[j] * dL / (2.0 * c.hbar * L);
        v[j] = theta_scaled(ThetaKind::two, {kPi * x[j] / L, kappa}, log_pref + chirp, theta_tol);
    }
    return finish(std::move(x), std::move(v), t);
}

WaveFunctionGrid evolve_theta_general(const GaussianParams& g, const WallTrajectory& traj,
                                      double t, const GridSpec& grid, const PhysicalConstants& c,
                                      Geometry geometry, double theta_tol) {
    g.validate();
    c.validate();
    require_single_leg(traj, t);
    const double L = length(traj, t);
    const Sector sector = box_sector(geometry);
    const double log_quarter = 0.25 * std::log(kPi / 2.0);

    std::vector<double> x = grid.positions();
    std::vector<cplx> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!inside_box(sector, L, x[j])) continue;
        const ThetaPropagatorArgs a = theta_propagator_args(g, traj, t, x[j], c);
        const cplx log_scale = log_quarter + a.log_A - std::log(a.B);
        const auto th = [&](ThetaKind kind, cplx z, cplx kappa) {
            return theta_scaled(kind, {z, kappa}, log_scale, theta_tol);
        };
        cplx s{};
        if (geometry == Geometry::single_wall) {
            const cplx z = a.z / 2.0;
            const cplx C = a.C / 2.0;
            const cplx k4 = a.kappa / 4.0;
            s = th(ThetaKind::three, -z - C, k4) - th(ThetaKind::three, z - C, k4) -
                th(ThetaKind::three, -z + C, k4) + th(ThetaKind::three, z + C, k4);
        } else {
            const cplx z = a.z;
            const cplx C = a.C;
            s = th(ThetaKind::two, -z - C, a.kappa) + th(ThetaKind::two, z - C, a.kappa) +
                th(ThetaKind::two, -z + C, a.kappa) + th(ThetaKind::two, z + C, a.kappa);
            if (!g.centered()) {
                s += th(ThetaKind::three, -z - C, a.kappa) - th(ThetaKind::three, z - C, a.kappa) -
                     th(ThetaKind::three, -z + C, a.kappa) + th(ThetaKind::three, z + C, a.kappa);
            }
        }
        v[j] = 0.5 * s;
    }
    return finish(std::move(x), std::move(v), t);
}

cplx reversal_gaussian(const GaussianParams& g, const PhysicalConstants& c, double T, double x) {
    require_centered(g);
    const double d = g.d;
    const double m = c.mass;
    const double h = c.hbar;
    return cplx{1.0, -1.0} * std::exp(kI * m * x * x / (2.0 * cplx{h * T / 2.0, -2.0 * d * d * m})) /
           (std::pow(2.0 * kPi, 0.25) * std::sqrt(d * cplx{h * T / (2.0 * d * d * m), -2.0}));
}

cplx contracting_coefficient(int n, const GaussianParams& g, const WallTrajectory& traj,
                             const PhysicalConstants& c) {
    require_centered(g);
    if (n < 0) throw DomainError("contracting coefficient needs n >= 0");
    const auto& r = require_reversing(traj);
    const double d2 = g.d * g.d;
    const double m = c.mass;
    const double h = c.hbar;
    const double q = r.q;
    const double T = r.T;
    const double L0 = r.L0;
    const double w = 2.0 * kPi * n + kPi;
    const cplx spread{4.0 * d2 * m, h * T};                      // 4 d^2 m + i hbar T
    const cplx wall{h * (L0 + q * T), -2.0 * d2 * m * q};        // hbar (L0 + qT) - 2 i d^2 m q
    const double width = 2.0 * L0 + q * T;
    const cplx num = cplx{1.0, -1.0} * std::pow(2.0, 0.75) * std::pow(kPi, 0.25) *
                     std::exp(-h * w * w * spread / (2.0 * m * width * wall));
    const cplx den = std::sqrt(width) * std::sqrt(cplx{h * T / (g.d * m), -4.0 * g.d}) *
                     std::sqrt(m * wall / (h * width * spread));
    return num / den;
}

cplx cycle_kappa(const GaussianParams& g, const WallTrajectory& traj, const PhysicalConstants& c) {
    require_centered(g);
    const auto& r = require_reversing(traj);
    const double d2 = g.d * g.d;
    const double m = c.mass;
    const double h = c.hbar;
    const cplx kappa = -2.0 * kPi * h * cplx{h * r.T, -2.0 * d2 * m} /
                       (r.L0 * m * cplx{h * (r.L0 + r.q * r.T), -2.0 * d2 * m * r.q});
    if (!(kappa.imag() > 0.0)) throw DomainError("cycle nome left the upper half plane");
    return kappa;
}

WaveFunctionGrid evolve_cycle_reversing(const GaussianParams& g, const WallTrajectory& traj,
                                        const GridSpec& grid, const PhysicalConstants& c,
                                        double localization_warn, double theta_tol) {
    require_centered(g);
    c.validate();
    const auto& r = require_reversing(traj);
    const double d = g.d;
    const double m = c.mass;
    const double h = c.hbar;
    const cplx kappa = cycle_kappa(g, traj, c);
    const cplx log_pref =
        std::log(cplx{1.0, -1.0}) + 0.25 * std::log(2.0 * kPi) -
        0.5 * std::log(r.L0 * cplx{r.T / d, -4.0 * d * m / h}) -
        0.5 * std::log(cplx{h * r.L0 + h * r.q * r.T, -2.0 * d * d * m * r.q} /
                       cplx{4.0 * d * d * m, h * r.T});

    std::vector<double> x = grid.positions();
    std::vector<cplx> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!inside_box(Sector::even, r.L0, x[j])) continue;
        const cplx chirp = -kI * m * r.q * x[j] * x[j] / (2.0 * h * r.L0);
        v[j] = theta_scaled(ThetaKind::two, {kPi * x[j] / r.L0, kappa}, log_pref + chirp, theta_tol);
    }
    WaveFunctionGrid out = finish(std::move(x), std::move(v), r.T);
    const double ratio = localization_diagnostic(g, c, r.T, r.L0);
    if (ratio > localization_warn) {
        std::ostringstream os;
        os << "localization: Delta x(T)/L0 = " << ratio << " above " << localization_warn;
        out.warnings.push_back(os.str());
    }
    return out;
}

SpectralExpansion contracting_expansion(const GaussianParams& g, const WallTrajectory& traj,
                                        const PhysicalConstants& c, const ExpansionOptions& opts) {
    require_centered(g);
    const auto& r = require_reversing(traj);
    const double L_half = r.L0 + r.q * r.T / 2.0;
    const double spread = localization_diagnostic(g, c, r.T / 2.0, 1.0);
    const double tail = std::erfc(L_half / 2.0 / (std::sqrt(2.0) * spread));
    if (tail > opts.wall_tail_limit) {
        throw DomainError("restart state at T/2 is not localized inside the box");
    }
    SpectralExpansion e;
    e.geometry = Geometry::symmetric;
    e.tail_tol = opts.tail_tol;
    const int cap = opts.n_max.value_or(kMaxBasisTerms);
    for (int n = 0; n <= cap; ++n) {
        const cplx gn = contracting_coefficient(n, g, traj, c);
        e.even_coeffs.push_back(gn);
        e.n_max = n;
        if (!opts.n_max && decayed(n, 0.0, std::norm(gn), opts.tail_tol)) break;
    }
    if (!opts.n_max && e.n_max >= cap) throw ConvergenceError("contracting expansion did not decay");
    finish_expansion(e);
    return e;
}

WaveFunctionGrid evolve_cycle_reexpansion(const GaussianParams& g, const WallTrajectory& traj,
                                          const GridSpec& grid, const PhysicalConstants& c,
                                          const ExpansionOptions& opts) {
    const auto& r = require_reversing(traj);
    return evolve_sum(contracting_expansion(g, traj, c, opts), traj, r.T, grid, c);
}

WaveFunctionGrid evolve_unconfined_approx(const GaussianParams& g, const WallTrajectory& traj,
                                          double t, const GridSpec& grid,
                                          const PhysicalConstants& c) {
    require_centered(g);
    c.validate();
    require_single_leg(traj, t);
    const double L0 = traj.initial_length();
    const double v0 = velocity(traj, 0.0);
    const double L = length(traj, t);
    const double dL = velocity(traj, t);
    const double s = tau(traj, t);
    const double d = g.d;
    const double m = c.mass;
    const double h = c.hbar;
    const cplx log_pref = std::log(cplx{1.0, -1.0}) + 0.25 * std::log(2.0 * kPi) -
                          0.5 * std::log(cplx{0.0, -d * L0 * L}) -
                          0.5 * std::log(cplx{1.0 / (d * d), 2.0 * m * v0 / (h * L0)}) -
                          0.5 * std::log(4.0 * kPi * d * d * h / (L0 * cplx{h * L0, 2.0 * d * d * m * v0}) +
                                         cplx{0.0, 2.0 * kPi * h * s / m});
    const cplx width = s / (2.0 * m) + d * d / cplx{-2.0 * d * d * m * L0 * v0, h * L0 * L0};

    std::vector<double> x = grid.positions();
    std::vector<cplx> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double x2 = x[j] * x[j];
        const cplx chirp = kI * m * x2 * dL / (2.0 * h * L);
        const cplx gauss = kI * x2 / (4.0 * h * L * L * width);
        v[j] = std::exp(log_pref + chirp + gauss);
    }
    return finish(std::move(x), std::move(v), t);
}

ComparisonReport locality_compare(const GaussianParams& g, const WallTrajectory& traj_a,
                                  const WallTrajectory& traj_b, double t, const GridSpec& grid,
                                  const PhysicalConstants& c, const LocalityOptions& opts) {
    const double La0 = traj_a.initial_length();
    const double Lb0 = traj_b.initial_length();
    if (!traj_a.is_scaled() && !traj_b.is_scaled() &&
        std::abs(La0 - Lb0) > 1e-12 * std::max(La0, Lb0)) {
        throw DomainError("locality comparison needs a common L(0)");
    }
    grid.validate();
    const Sector sector = box_sector(opts.geometry);
    for (const WallTrajectory* tr : {&traj_a, &traj_b}) {
        const double L = length(*tr, t);
        const double slack = 1e-12 * L;
        if (grid.x_min < box_lower(sector, L) - slack || grid.x_max > box_upper(sector, L) + slack) {
            throw DomainError("comparison grid extends beyond the box of " + tr->describe());
        }
    }
    const WaveFunctionGrid a = evolve_theta_general(g, traj_a, t, grid, c, opts.geometry, opts.theta_tol);
    const WaveFunctionGrid b = evolve_theta_general(g, traj_b, t, grid, c, opts.geometry, opts.theta_tol);
    const double ratio = localization_diagnostic(g, c, t, std::min(La0, Lb0));
    return compare_fields(a, b, ratio, opts.rel_tol, opts.localization_warn);
}

}  // namespace tdbc
