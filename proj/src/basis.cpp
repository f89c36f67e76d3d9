#include "tdbc/basis.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "tdbc/errors.hpp"

namespace tdbc {

namespace {

constexpr cplx kI{0.0, 1.0};

bool uses_cosine(Sector s) { return s == Sector::even; }

}  // namespace

void BasisIndex::validate() const {
    const int min_n = sector == Sector::even ? 0 : 1;
    if (n < min_n) {
        std::ostringstream os;
        os << "invalid basis index n=" << n << " for sector "
           << (sector == Sector::even ? "even" : sector == Sector::odd ? "odd" : "single_wall");
        throw DomainError(os.str());
    }
}

int BasisIndex::wave_number() const {
    switch (sector) {
        case Sector::even: return 2 * n + 1;
        case Sector::odd: return 2 * n;
        case Sector::single_wall: return n;
    }
    return n;
}

double box_lower(Sector sector, double L) { return sector == Sector::single_wall ? 0.0 : -L / 2.0; }
double box_upper(Sector sector, double L) { return sector == Sector::single_wall ? L : L / 2.0; }

bool inside_box(Sector sector, double L, double x) {
    return x >= box_lower(sector, L) && x <= box_upper(sector, L);
}

double instantaneous_eigenstate(const BasisIndex& idx, const WallTrajectory& traj, double t,
                                double x) {
    idx.validate();
    const double L = length(traj, t);
    if (!inside_box(idx.sector, L, x)) return 0.0;
    const double arg = kPi * idx.wave_number() * x / L;
    return std::sqrt(2.0 / L) * (uses_cosine(idx.sector) ? std::cos(arg) : std::sin(arg));
}

double instantaneous_energy(const BasisIndex& idx, const WallTrajectory& traj, double t,
                            const PhysicalConstants& c) {
    idx.validate();
    const double L = length(traj, t);
    const double nu = idx.wave_number();
    return nu * nu * c.hbar * c.hbar * kPi * kPi / (2.0 * c.mass * L * L);
}

double basis_clock(const WallTrajectory& traj, double t) {
    if (const auto* r = std::get_if<WallTrajectory::ReversingLinear>(&traj.law())) {
        const double half = r->T / 2.0;
        if (t < half) return tau(traj, t);
        const double L_half = r->L0 + r->q * half;
        return (t - half) / (length(traj, t) * L_half);
    }
    if (const auto* s = std::get_if<WallTrajectory::Scaled>(&traj.law())) {
        return basis_clock(*s->inner, t) / (s->k * s->k);
    }
    return tau(traj, t);
}

BasisJet basis_jet(const BasisIndex& idx, const WallTrajectory& traj, double t, double x,
                   const PhysicalConstants& c) {
    idx.validate();
    const double L = length(traj, t);
    if (!inside_box(idx.sector, L, x)) return {0.0, 0.0, 0.0};
    const double dL = velocity(traj, t);
    const double nu = idx.wave_number();
    const double k = kPi * nu / L;
    const double beta = c.mass * dL / (2.0 * c.hbar * L);
    const double phase = -c.hbar * kPi * kPi * nu * nu * basis_clock(traj, t) / (2.0 * c.mass);
    const cplx envelope = std::sqrt(2.0 / L) * std::exp(kI * (beta * x * x + phase));

    const double cs = std::cos(k * x);
    const double sn = std::sin(k * x);
    double f, df, d2f;
    if (uses_cosine(idx.sector)) {
        f = cs, df = -k * sn, d2f = -k * k * cs;
    } else {
        f = sn, df = k * cs, d2f = -k * k * sn;
    }
    const cplx g = 2.0 * kI * beta * x;  // derivative of the chirp exponent
    return {envelope * f, envelope * (g * f + df),
            envelope * ((2.0 * kI * beta + g * g) * f + 2.0 * g * df + d2f)};
}

cplx basis_solution(const BasisIndex& idx, const WallTrajectory& traj, double t, double x,
                    const PhysicalConstants& c) {
    return basis_jet(idx, traj, t, x, c).value;
}

cplx transformed_basis_solution(const BasisIndex& idx, const WallTrajectory& traj, double t,
                                double y, const PhysicalConstants& c) {
    idx.validate();
    const double L0 = traj.initial_length();
    if (!inside_box(idx.sector, L0, y)) return 0.0;
    const double L = length(traj, t);
    const double dL = velocity(traj, t);
    const double nu = idx.wave_number();
    const double chirp = c.mass * y * y * L * dL / (2.0 * c.hbar * L0 * L0);
    const double phase = -c.hbar * kPi * kPi * nu * nu * basis_clock(traj, t) / (2.0 * c.mass);
    const double arg = kPi * nu * y / L0;
    const double f = uses_cosine(idx.sector) ? std::cos(arg) : std::sin(arg);
    return std::sqrt(2.0 / L0) * std::exp(kI * (chirp + phase)) * f;
}

double confined_potential(const WallTrajectory& traj, double t, double x,
                          const PhysicalConstants& c) {
    return 0.5 * c.mass * omega_squared(traj, t) * x * x;
}

double schrodinger_residual(const BasisIndex& idx, const WallTrajectory& traj, double t,
                            std::size_t n_points, double dt, const PhysicalConstants& c) {
    idx.validate();
    if (!(dt > 0.0)) throw DomainError("residual needs dt > 0");
    if (n_points < 16) throw DomainError("residual grid too small");
    if (!traj.window().contains(t - dt) || !traj.window().contains(t + dt)) {
        throw DomainError("residual stencil leaves the validity window");
    }
    const double L = length(traj, t);
    const double lo = box_lower(idx.sector, L);
    const double hi = box_upper(idx.sector, L);
    const double h = (hi - lo) / static_cast<double>(n_points - 1);

    const double beta = c.mass * std::abs(velocity(traj, t)) / (2.0 * c.hbar * L);
    const double k_local = kPi * idx.wave_number() / L + 2.0 * beta * std::max(std::abs(lo), hi);
    if (k_local > 0.0 && 2.0 * kPi / (k_local * h) < 16.0) {
        throw DomainError("under-resolved grid: fewer than 16 points per oscillation");
    }

    std::vector<cplx> prev(n_points), curr(n_points), next(n_points);
    std::vector<double> x(n_points);
    for (std::size_t j = 0; j < n_points; ++j) {
        x[j] = lo + h * static_cast<double>(j);
        prev[j] = basis_solution(idx, traj, t - dt, x[j], c);
        curr[j] = basis_solution(idx, traj, t, x[j], c);
        next[j] = basis_solution(idx, traj, t + dt, x[j], c);
    }
    const double kin = -c.hbar * c.hbar / (2.0 * c.mass * h * h);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 3; j + 3 < n_points; ++j) {
        const cplx H = kin * (curr[j + 1] - 2.0 * curr[j] + curr[j - 1]) +
                       confined_potential(traj, t, x[j], c) * curr[j];
        const cplx lhs = kI * c.hbar * (next[j] - prev[j]) / (2.0 * dt);
        num += std::norm(lhs - H);
        den += std::norm(H);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

MismatchRatio reversal_mismatch_ratio(const BasisIndex& idx, const WallTrajectory& traj, double x,
                                      const PhysicalConstants& c) {
    idx.validate();
    if (idx.sector != Sector::even) throw DomainError("mismatch ratio is defined for even states");
    const auto* rev = std::get_if<WallTrajectory::ReversingLinear>(&traj.law());
    if (rev == nullptr) throw DomainError("mismatch ratio needs a reversing trajectory");
    const double half = rev->T / 2.0;
    const WallTrajectory expanding = rev->q < 0.0 ? WallTrajectory::linear(rev->L0, rev->q, half)
                                                  : WallTrajectory::linear(rev->L0, rev->q);
    const auto ratio_at = [&](double xx) {
        const cplx contracting = basis_solution(idx, traj, half, xx, c);
        if (std::abs(contracting) == 0.0) {
            throw DomainError("contracting basis state vanishes at x");
        }
        return basis_solution(idx, expanding, half, xx, c) / contracting;
    };
    MismatchRatio r;
    r.full = ratio_at(x);
    r.tau_phase = ratio_at(0.0);
    r.spatial = r.full / r.tau_phase;
    return r;
}

}  // namespace tdbc
