#include "tdbc/oracle.hpp"

#include <cmath>
#include <sstream>

#include "tdbc/basis.hpp"
#include "tdbc/errors.hpp"

namespace tdbc {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kNormDriftLimit = 1e-6;

// Interior rows of a tridiagonal system: lower[j] psi[j-1] + diag[j] psi[j] + upper[j] psi[j+1].
struct Tridiagonal {
    std::vector<cplx> lower, diag, upper;

    explicit Tridiagonal(std::size_t n) : lower(n), diag(n), upper(n) {}
};

// Thomas algorithm; rhs is overwritten with the solution.
void solve_in_place(const Tridiagonal& a, std::vector<cplx>& rhs, std::vector<cplx>& work) {
    const std::size_t n = rhs.size();
    work.resize(n);
    cplx pivot = a.diag[0];
    if (std::abs(pivot) == 0.0) throw ConvergenceError("singular Crank-Nicolson matrix");
    rhs[0] /= pivot;
    for (std::size_t j = 1; j < n; ++j) {
        work[j] = a.upper[j - 1] / pivot;
        pivot = a.diag[j] - a.lower[j] * work[j];
        if (std::abs(pivot) == 0.0) throw ConvergenceError("singular Crank-Nicolson matrix");
        rhs[j] = (rhs[j] - a.lower[j] * rhs[j - 1]) / pivot;
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= work[j + 1] * rhs[j + 1];
}

// Hamiltonian rows at one instant on the interior nodes.
using Assemble = std::function<void(double t, Tridiagonal& h)>;

struct Stepper {
    std::vector<double> x;
    std::vector<cplx> psi;  // full grid, ends held at zero
    double h = 0.0;
};

double grid_norm(const std::vector<cplx>& psi, double h) {
    double s = 0.0;
    for (cplx v : psi) s += std::norm(v);
    return s * h;  // ends vanish, so trapezoid equals the plain sum
}

// Advances psi from t0 to t_final; check(t, psi) runs after every step.
void crank_nicolson(Stepper& st, double t0, double t_final, double dt_max, double hbar,
                    const Assemble& assemble,
                    const std::function<void(double, const std::vector<cplx>&)>& check) {
    const std::size_t n = st.psi.size() - 2;
    const auto steps = static_cast<std::size_t>(std::ceil((t_final - t0) / dt_max - 1e-9));
    if (steps == 0) return;
    const double dt = (t_final - t0) / static_cast<double>(steps);
    const double norm0 = grid_norm(st.psi, st.h);

    Tridiagonal H(n), lhs(n);
    std::vector<cplx> rhs(n), work(n);
    const cplx a = kI * dt / (2.0 * hbar);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t_mid = t0 + (static_cast<double>(s) + 0.5) * dt;
        assemble(t_mid, H);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx* p = &st.psi[j + 1];
            rhs[j] = p[0] - a * (H.lower[j] * p[-1] + H.diag[j] * p[0] + H.upper[j] * p[1]);
            lhs.lower[j] = a * H.lower[j];
            lhs.diag[j] = 1.0 + a * H.diag[j];
            lhs.upper[j] = a * H.upper[j];
        }
        solve_in_place(lhs, rhs, work);
        std::copy(rhs.begin(), rhs.end(), st.psi.begin() + 1);
        const double t = t0 + static_cast<double>(s + 1) * dt;
        if ((s + 1) % 256 == 0 || s + 1 == steps) {
            const double drift = std::abs(grid_norm(st.psi, st.h) - norm0) / norm0;
            if (drift > kNormDriftLimit) {
                std::ostringstream os;
                os << "Crank-Nicolson norm drift " << drift << " at t=" << t;
                throw ConvergenceError(os.str());
            }
        }
        if (check) check(t, st.psi);
    }
}

Stepper make_stepper(const SolverSpec& spec, std::vector<cplx> values) {
    Stepper st;
    st.x = spec.grid().positions();
    st.h = spec.grid().spacing();
    st.psi = std::move(values);
    st.psi.front() = 0.0;
    st.psi.back() = 0.0;
    return st;
}

}  // namespace

double FrameMap::xi(double t) const { return std::log(scale(t)); }

double FrameMap::scale(double t) const { return length(traj_, t) / traj_.initial_length(); }

WaveFunctionGrid to_fixed_frame(const WaveFunctionGrid& psi, const FrameMap& map, double t) {
    const double s = map.scale(t);
    std::vector<double> y(psi.positions.size());
    std::vector<cplx> v(psi.values.size());
    const double amp = std::sqrt(s);
    for (std::size_t j = 0; j < y.size(); ++j) {
        y[j] = psi.positions[j] / s;
        v[j] = amp * psi.values[j];
    }
    WaveFunctionGrid out = WaveFunctionGrid::make(std::move(y), std::move(v), t);
    out.warnings = psi.warnings;
    return out;
}

WaveFunctionGrid from_fixed_frame(const WaveFunctionGrid& psi_tilde, const FrameMap& map,
                                  double t) {
    const double s = map.scale(t);
    std::vector<double> x(psi_tilde.positions.size());
    std::vector<cplx> v(psi_tilde.values.size());
    const double amp = 1.0 / std::sqrt(s);
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = psi_tilde.positions[j] * s;
        v[j] = amp * psi_tilde.values[j];
    }
    WaveFunctionGrid out = WaveFunctionGrid::make(std::move(x), std::move(v), t);
    out.warnings = psi_tilde.warnings;
    return out;
}

void SolverSpec::validate() const {
    if (n_points < 8) throw DomainError("solver needs at least 8 grid points");
    if (!(dt > 0.0)) throw DomainError("solver time step must be > 0");
    if (!(x_max > x_min)) throw DomainError("solver domain must have x_max > x_min");
}

SolverSpec SolverSpec::refined() const {
    SolverSpec r = *this;
    r.n_points = 2 * n_points - 1;
    r.dt = dt / 2.0;
    return r;
}

WaveFunctionGrid evolve_fixed_frame(const WaveFunctionGrid& psi0_tilde, const FrameMap& map,
                                    const SolverSpec& spec, double t_final,
                                    const PhysicalConstants& c) {
    spec.validate();
    c.validate();
    if (psi0_tilde.values.size() != spec.n_points) {
        throw DomainError("initial state is not sampled on the solver grid");
    }
    const WallTrajectory& traj = map.trajectory();
    const double t0 = psi0_tilde.time;
    if (!traj.window().contains(t0) || !traj.window().contains(t_final) || t_final < t0) {
        throw DomainError("fixed-frame evolution leaves the validity window");
    }
    Stepper st = make_stepper(spec, psi0_tilde.values);
    const double h = st.h;
    const double L0 = traj.initial_length();

    const Assemble assemble = [&](double t, Tridiagonal& H) {
        const double L = length(traj, t);
        const double s = L / L0;
        const double kin = c.hbar * c.hbar / (2.0 * c.mass * s * s * h * h);
        const double rate = velocity(traj, t) / L;
        // -(L'/2L)(YP + PY) = (i hbar L'/2L)(y d/dy + d/dy y), antisymmetric difference form.
        const cplx dil = kI * c.hbar * rate / 2.0 / (2.0 * h);
        for (std::size_t j = 0; j < H.diag.size(); ++j) {
            const double y = st.x[j + 1];
            double v = 0.0;
            if (spec.potential == PotentialTag::tdlo) v = confined_potential(traj, t, s * y, c);
            H.diag[j] = 2.0 * kin + v;
            H.upper[j] = -kin + dil * (y + st.x[j + 2]);
            H.lower[j] = -kin - dil * (y + st.x[j]);
        }
    };
    crank_nicolson(st, t0, t_final, spec.dt, c.hbar, assemble, nullptr);
    return WaveFunctionGrid::make(std::move(st.x), std::move(st.psi), t_final);
}

WaveFunctionGrid unconfined_tdlo_propagate(const GaussianParams& g, const WallTrajectory& traj,
                                           const SolverSpec& spec, double t_final,
                                           const PhysicalConstants& c, double edge_limit) {
    spec.validate();
    c.validate();
    g.validate();
    if (!traj.window().contains(t_final)) throw DomainError("t_final outside the validity window");
    const double spread = localization_diagnostic(g, c, t_final, 1.0);
    if (spec.x_max - spec.x_min < 10.0 * spread) {
        throw DomainError("unconfined box narrower than 10 Delta x(t_final)");
    }
    const std::vector<double> x = spec.grid().positions();
    std::vector<cplx> psi0(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) psi0[j] = initial_gaussian(g, c, x[j]);
    Stepper st = make_stepper(spec, std::move(psi0));
    const double kin = c.hbar * c.hbar / (2.0 * c.mass * st.h * st.h);

    const Assemble assemble = [&](double t, Tridiagonal& H) {
        const double w2 = omega_squared(traj, t);
        for (std::size_t j = 0; j < H.diag.size(); ++j) {
            const double xj = st.x[j + 1];
            H.diag[j] = 2.0 * kin + 0.5 * c.mass * w2 * xj * xj;
            H.upper[j] = -kin;
            H.lower[j] = -kin;
        }
    };
    const auto edges = [&](double t, const std::vector<cplx>& psi) {
        const double edge = std::max(std::abs(psi[1]), std::abs(psi[psi.size() - 2]));
        if (edge > edge_limit) {
            std::ostringstream os;
            os << "edge contamination: |psi| = " << edge << " next to the box edge at t=" << t;
            throw ConvergenceError(os.str());
        }
    };
    edges(0.0, st.psi);
    crank_nicolson(st, 0.0, t_final, spec.dt, c.hbar, assemble, edges);
    return WaveFunctionGrid::make(std::move(st.x), std::move(st.psi), t_final);
}

double relative_l2(const WaveFunctionGrid& a, const WaveFunctionGrid& b) {
    if (a.values.size() != b.values.size()) throw DomainError("fields sampled on different grids");
    std::vector<double> diff(a.values.size()), ref(a.values.size());
    for (std::size_t j = 0; j < diff.size(); ++j) {
        diff[j] = std::norm(a.values[j] - b.values[j]);
        ref[j] = std::norm(b.values[j]);
    }
    const double h = b.spacing();
    return std::sqrt(trapezoid(diff, h) / trapezoid(ref, h));
}

bool ConvergenceStudy::second_order(double lo, double hi) const {
    if (ratios.empty()) return false;
    for (double r : ratios) {
        if (!(r >= lo && r <= hi)) return false;
    }
    return true;
}

ConvergenceStudy convergence_study(const std::function<double(const SolverSpec&)>& error_of,
                                   const SolverSpec& base, int levels) {
    if (levels < 2) throw DomainError("convergence study needs at least two levels");
    ConvergenceStudy study;
    SolverSpec spec = base;
    for (int i = 0; i < levels; ++i) {
        study.specs.push_back(spec);
        study.errors.push_back(error_of(spec));
        spec = spec.refined();
    }
    for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
        study.ratios.push_back(study.errors[i] / study.errors[i + 1]);
    }
    return study;
}

}  // namespace tdbc
