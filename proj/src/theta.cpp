#include "tdbc/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tdbc/errors.hpp"

namespace tdbc {

namespace {

constexpr cplx kI{0.0, 1.0};

// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(cplx v) {
        add_component(re_, cre_, v.real());
        add_component(im_, cim_, v.imag());
    }
    cplx value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void add_component(double& sum, double& comp, double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

ThetaKind dual_kind(ThetaKind kind) {
    switch (kind) {
        case ThetaKind::two: return ThetaKind::four;
        case ThetaKind::three: return ThetaKind::three;
        case ThetaKind::four: return ThetaKind::two;
    }
    return kind;
}

// Shifts Re z into [-pi/2, pi/2]; returns the sign picked up by the series.
double reduce_argument(ThetaKind kind, cplx& z) {
    const double shifts = std::round(z.real() / kPi);
    if (shifts == 0.0) return 1.0;
    z -= shifts * kPi;
    const bool odd = std::fmod(std::abs(shifts), 2.0) == 1.0;
    return (kind == ThetaKind::two && odd) ? -1.0 : 1.0;
}

// exp(log_scale) * theta_kind(z, kappa) by direct summation.
cplx direct_series(ThetaKind kind, cplx z, cplx kappa, cplx log_scale, double tol) {
    const double sign = reduce_argument(kind, z);
    const double im_k = kappa.imag();
    const double abs_im_z = std::abs(z.imag());
    const double n_peak = abs_im_z / (kPi * im_k);
    const double log_tol = std::log(tol);
    const auto converged = [&](double log_bound, const CompensatedSum& sum) {
        return log_bound < log_tol + std::log(std::max(std::abs(sum.value()), std::numeric_limits<double>::min()));
    };
    const cplx ipk = kI * kPi * kappa;

    CompensatedSum sum;
    if (kind == ThetaKind::two) {
        for (std::int64_t n = 0;; ++n) {
            const double h = static_cast<double>(n) + 0.5;
            const double log_bound = log_scale.real() - kPi * im_k * h * h + 2.0 * h * abs_im_z;
            if (static_cast<double>(n) > n_peak && converged(log_bound, sum)) break;
            if (n >= kMaxThetaTerms) {
                throw ConvergenceError("theta2 series exceeded the term cap");
            }
            const cplx base = log_scale + ipk * h * h;
            const cplx arg = kI * (2.0 * h) * z;
            sum.add(std::exp(base + arg));
            sum.add(std::exp(base - arg));
        }
        return sign * sum.value();
    }

    const double alt = kind == ThetaKind::four ? -1.0 : 1.0;
    sum.add(std::exp(log_scale));
    double parity = 1.0;
    for (std::int64_t n = 1;; ++n) {
        parity *= alt;
        const double dn = static_cast<double>(n);
        const double log_bound = log_scale.real() - kPi * im_k * dn * dn + 2.0 * dn * abs_im_z;
        if (dn > n_peak && converged(log_bound, sum)) break;
        if (n >= kMaxThetaTerms) throw ConvergenceError("theta series exceeded the term cap");
        const cplx base = log_scale + ipk * dn * dn;
        const cplx arg = 2.0 * kI * dn * z;
        sum.add(parity * std::exp(base + arg));
        sum.add(parity * std::exp(base - arg));
    }
    return sign * sum.value();
}

// log of the transformation prefactor exp(-i z^2/(kappa pi)) (-i kappa)^(-1/2).
cplx transform_log_prefactor(const ThetaArgs& args) {
    return -kI * args.z * args.z / (args.kappa * kPi) - 0.5 * std::log(-kI * args.kappa);
}

}  // namespace

void ThetaArgs::validate() const {
    if (!(kappa.imag() > 0.0)) {
        std::ostringstream os;
        os << "theta nome parameter needs Im(kappa) > 0, got " << kappa;
        throw DomainError(os.str());
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("theta argument is not finite");
    }
}

cplx theta(ThetaKind kind, const ThetaArgs& args, double tol) {
    return theta_scaled(kind, args, cplx{0.0, 0.0}, tol);
}

cplx theta_scaled(ThetaKind kind, const ThetaArgs& args, cplx log_scale, double tol) {
    args.validate();
    if (!(tol > 0.0)) throw DomainError("theta tolerance must be > 0");
    ThetaArgs a = args;
    const double sign = reduce_argument(kind, a.z);
    const ThetaArgs d = a.dual();
    if (a.kappa.imag() < kDualRouteThreshold && d.kappa.imag() > a.kappa.imag()) {
        return sign * direct_series(dual_kind(kind), d.z, d.kappa,
                                    log_scale + transform_log_prefactor(a), tol);
    }
    return sign * direct_series(kind, a.z, a.kappa, log_scale, tol);
}

cplx jacobi_transform(ThetaKind kind, const ThetaArgs& args, double tol) {
    args.validate();
    const ThetaArgs d = args.dual();
    return direct_series(dual_kind(kind), d.z, d.kappa, transform_log_prefactor(args), tol);
}

std::int64_t truncation_bound(cplx kappa, cplx z, double tol) {
    if (!(kappa.imag() > 0.0)) throw DomainError("truncation_bound needs Im(kappa) > 0");
    if (!(tol > 0.0)) throw DomainError("truncation_bound needs tol > 0");
    const double log_tol = std::log(tol);
    const double a = kPi * kappa.imag();
    const double b = 2.0 * std::abs(z.imag());
    for (std::int64_t n = 0; n <= kMaxThetaTerms; ++n) {
        const double dn = static_cast<double>(n);
        if (-a * dn * dn + b * dn < log_tol) return n;
    }
    throw ConvergenceError("truncation bound exceeds the term cap");
}

}  // namespace tdbc
