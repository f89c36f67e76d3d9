#include "tdbc/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tdbc/errors.hpp"

namespace tdbc {

void PhysicalConstants::validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0)) {
        throw DomainError("physical constants must be strictly positive");
    }
}

WallTrajectory WallTrajectory::linear(double L0, double q) {
    if (!(L0 > 0.0)) throw DomainError("linear trajectory: L0 must be > 0");
    TimeWindow w;
    if (q < 0.0) w.t_max = 0.99 * L0 / std::abs(q);
    return WallTrajectory(Linear{L0, q}, w);
}

WallTrajectory WallTrajectory::linear(double L0, double q, double t_max) {
    if (!(L0 > 0.0)) throw DomainError("linear trajectory: L0 must be > 0");
    if (!(t_max > 0.0)) throw DomainError("linear trajectory: t_max must be > 0");
    if (q < 0.0 && t_max >= L0 / std::abs(q)) {
        throw DomainError("linear trajectory: walls collapse before t_max");
    }
    return WallTrajectory(Linear{L0, q}, TimeWindow{0.0, t_max});
}

WallTrajectory WallTrajectory::reversing_linear(double L0, double q, double T) {
    if (!(L0 > 0.0)) throw DomainError("reversing trajectory: L0 must be > 0");
    if (!(T > 0.0)) throw DomainError("reversing trajectory: T must be > 0");
    if (!(L0 + q * T / 2.0 > 0.0)) {
        throw DomainError("reversing trajectory: walls collapse before T/2");
    }
    return WallTrajectory(ReversingLinear{L0, q, T}, TimeWindow{0.0, T});
}

WallTrajectory WallTrajectory::smooth_periodic(double L0, double q, double omega) {
    if (!(L0 > 0.0)) throw DomainError("smooth periodic trajectory: L0 must be > 0");
    if (!(std::abs(q) < 1.0)) throw DomainError("smooth periodic trajectory: |q| must be < 1");
    if (!(omega > 0.0)) throw DomainError("smooth periodic trajectory: omega must be > 0");
    return WallTrajectory(SmoothPeriodic{L0, q, omega}, TimeWindow{});
}

WallTrajectory WallTrajectory::scaled(const WallTrajectory& inner, double k) {
    if (!(k > 0.0)) throw DomainError("scaled trajectory: k must be > 0");
    return WallTrajectory(Scaled{std::make_shared<const WallTrajectory>(inner), k},
                          inner.window());
}

double WallTrajectory::initial_length() const { return length(*this, 0.0); }

std::optional<double> WallTrajectory::period() const {
    struct Visitor {
        std::optional<double> operator()(const Linear&) const { return std::nullopt; }
        std::optional<double> operator()(const ReversingLinear& r) const {
            // L(T) = L0 but L' flips sign at T/2, so only the static case cycles.
            if (r.q == 0.0) return r.T;
            return std::nullopt;
        }
        std::optional<double> operator()(const SmoothPeriodic& s) const {
            return 2.0 * kPi / s.omega;
        }
        std::optional<double> operator()(const Scaled& s) const { return s.inner->period(); }
    };
    return std::visit(Visitor{}, law_);
}

bool WallTrajectory::is_static() const {
    struct Visitor {
        bool operator()(const Linear& l) const { return l.q == 0.0; }
        bool operator()(const ReversingLinear& r) const { return r.q == 0.0; }
        bool operator()(const SmoothPeriodic& s) const { return s.q == 0.0; }
        bool operator()(const Scaled& s) const { return s.inner->is_static(); }
    };
    return std::visit(Visitor{}, law_);
}

std::string WallTrajectory::describe() const {
    std::ostringstream os;
    os.precision(17);
    struct Visitor {
        std::ostringstream& os;
        void operator()(const Linear& l) const { os << "Linear(L0=" << l.L0 << ", q=" << l.q << ")"; }
        void operator()(const ReversingLinear& r) const {
            os << "ReversingLinear(L0=" << r.L0 << ", q=" << r.q << ", T=" << r.T << ")";
        }
        void operator()(const SmoothPeriodic& s) const {
            os << "SmoothPeriodic(L0=" << s.L0 << ", q=" << s.q << ", omega=" << s.omega << ")";
        }
        void operator()(const Scaled& s) const {
            os << "Scaled(" << s.inner->describe() << ", k=" << s.k << ")";
        }
    };
    std::visit(Visitor{os}, law_);
    return os.str();
}

namespace {

void check_time(const WallTrajectory& traj, double t) {
    if (!traj.window().contains(t)) {
        std::ostringstream os;
        os << "time " << t << " outside the validity window [" << traj.window().t_min << ", "
           << traj.window().t_max << "] of " << traj.describe();
        throw DomainError(os.str());
    }
}

// Value and the first two derivatives of a law, evaluated together.
struct Jet {
    double L;
    double dL;
    double d2L;
};

Jet jet(const WallTrajectory& traj, double t) {
    struct Visitor {
        double t;
        Jet operator()(const WallTrajectory::Linear& l) const { return {l.L0 + l.q * t, l.q, 0.0}; }
        Jet operator()(const WallTrajectory::ReversingLinear& r) const {
            if (t < r.T / 2.0) return {r.L0 + r.q * t, r.q, 0.0};
            return {r.L0 + r.q * (r.T - t), -r.q, 0.0};
        }
        Jet operator()(const WallTrajectory::SmoothPeriodic& s) const {
            const double c = std::cos(s.omega * t);
            const double sn = std::sin(s.omega * t);
            const double u = 1.0 + s.q * c;
            const double a = s.L0 * std::sqrt(1.0 + s.q);
            const double w2 = s.omega * s.omega;
            return {a / std::sqrt(u), a * 0.5 * s.q * s.omega * sn * std::pow(u, -1.5),
                    a * (0.5 * s.q * w2 * c * std::pow(u, -1.5) +
                         0.75 * s.q * s.q * w2 * sn * sn * std::pow(u, -2.5))};
        }
        Jet operator()(const WallTrajectory::Scaled& s) const {
            const Jet in = jet(*s.inner, t);
            return {s.k * in.L, s.k * in.dL, s.k * in.d2L};
        }
    };
    check_time(traj, t);
    const Jet j = std::visit(Visitor{t}, traj.law());
    if (!(j.L > 0.0)) throw DomainError("L(t) <= 0 for " + traj.describe());
    return j;
}

}  // namespace

double length(const WallTrajectory& traj, double t) { return jet(traj, t).L; }
double velocity(const WallTrajectory& traj, double t) { return jet(traj, t).dL; }
double acceleration(const WallTrajectory& traj, double t) { return jet(traj, t).d2L; }

double omega_squared(const WallTrajectory& traj, double t) {
    const Jet j = jet(traj, t);
    return -j.d2L / j.L;
}

double tau(const WallTrajectory& traj, double t) {
    struct Visitor {
        double t;
        double operator()(const WallTrajectory::Linear& l) const {
            return t / (l.L0 * (l.L0 + l.q * t));
        }
        double operator()(const WallTrajectory::ReversingLinear& r) const {
            const double half = r.T / 2.0;
            const double L_half = r.L0 + r.q * half;
            if (t < half) return t / (r.L0 * (r.L0 + r.q * t));
            const double Lc = r.L0 + r.q * (r.T - t);
            return half / (r.L0 * L_half) + (t - half) / (Lc * L_half);
        }
        double operator()(const WallTrajectory::SmoothPeriodic& s) const {
            return (t + s.q / s.omega * std::sin(s.omega * t)) / (s.L0 * s.L0 * (1.0 + s.q));
        }
        double operator()(const WallTrajectory::Scaled& s) const {
            return tau(*s.inner, t) / (s.k * s.k);
        }
    };
    jet(traj, t);  // validates t and L(t) > 0
    return std::visit(Visitor{t}, traj.law());
}

void GaussianParams::validate() const {
    if (!(d > 0.0)) throw DomainError("gaussian width d must be > 0");
    if (!std::isfinite(x0) || !std::isfinite(p0)) {
        throw DomainError("gaussian center and momentum must be finite");
    }
}

double localization_diagnostic(const GaussianParams& g, const PhysicalConstants& c, double t,
                               double L0) {
    const double spread = c.hbar * t / (2.0 * g.d * c.mass);
    return std::sqrt(g.d * g.d + spread * spread) / L0;
}

void GridSpec::validate() const {
    if (n_points < 2) throw DomainError("grid needs at least two points");
    if (!(x_max > x_min)) throw DomainError("grid requires x_max > x_min");
}

std::vector<double> GridSpec::positions() const {
    validate();
    std::vector<double> x(n_points);
    const double h = spacing();
    for (std::size_t i = 0; i < n_points; ++i) x[i] = x_min + h * static_cast<double>(i);
    x.back() = x_max;
    return x;
}

WaveFunctionGrid WaveFunctionGrid::make(std::vector<double> positions, std::vector<cplx> values,
                                        double time) {
    if (positions.size() != values.size()) {
        throw DomainError("positions and values differ in length");
    }
    WaveFunctionGrid g;
    g.positions = std::move(positions);
    g.values = std::move(values);
    g.time = time;
    if (g.positions.size() >= 2) {
        std::vector<double> dens(g.values.size());
        std::transform(g.values.begin(), g.values.end(), dens.begin(),
                       [](cplx v) { return std::norm(v); });
        g.norm = trapezoid(dens, g.spacing());
    }
    return g;
}

double WaveFunctionGrid::spacing() const {
    if (positions.size() < 2) return 0.0;
    return (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
}

double WaveFunctionGrid::max_abs() const {
    double m = 0.0;
    for (cplx v : values) m = std::max(m, std::abs(v));
    return m;
}

double trapezoid(std::span<const double> samples, double h) {
    if (samples.size() < 2) return 0.0;
    double s = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
    return s * h;
}

cplx trapezoid(std::span<const cplx> samples, double h) {
    if (samples.size() < 2) return 0.0;
    cplx s = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
    return s * h;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::warn: return "warn";
        case Verdict::fail: return "fail";
    }
    return "fail";
}

ComparisonReport compare_fields(const WaveFunctionGrid& a, const WaveFunctionGrid& b,
                                double localization_ratio, double rel_tol,
                                double localization_warn) {
    if (a.values.size() != b.values.size()) throw DomainError("fields sampled on different grids");
    ComparisonReport r;
    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double e = std::abs(a.values[i] - b.values[i]);
        r.sup_error = std::max(r.sup_error, e);
        r.reference_max = std::max(r.reference_max, std::abs(b.values[i]));
        diff2 += e * e;
        ref2 += std::norm(b.values[i]);
    }
    r.l2_error = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
    r.localization_ratio = localization_ratio;
    if (localization_ratio > localization_warn) {
        r.verdict = Verdict::warn;
    } else {
        r.verdict = r.relative_sup() <= rel_tol ? Verdict::pass : Verdict::fail;
    }
    return r;
}

}  // namespace tdbc
