#pragma once

#include <cstdint>

#include "tdbc/core_model.hpp"

namespace tdbc {

// Jacobi theta functions in the convention
//   theta2(z, k) = 2 sum_{n>=0} exp(i pi k (n+1/2)^2) cos((2n+1) z)
//   theta3(z, k) = sum_{n in Z} exp(i pi k n^2) exp(2 i n z)
//   theta4(z, k) = sum_{n in Z} (-1)^n exp(i pi k n^2) exp(2 i n z)
// with nome parameter k in the upper half plane. The argument enters
// without a pi factor, so theta3 and theta4 have period pi in z and theta2
// flips sign under z -> z + pi.

enum class ThetaKind { two = 2, three = 3, four = 4 };

struct ThetaArgs {
    cplx z;
    cplx kappa;

    /// Throws DomainError unless Im(kappa) > 0.
    void validate() const;
    /// (z / kappa, -1 / kappa): arguments of the modular dual.
    ThetaArgs dual() const { return {z / kappa, -1.0 / kappa}; }
};

inline constexpr double kDefaultThetaTol = 1e-17;
inline constexpr std::int64_t kMaxThetaTerms = 1'000'000;
/// Below this Im(kappa) the evaluator sums the dual series instead.
inline constexpr double kDualRouteThreshold = 0.05;

cplx theta(ThetaKind kind, const ThetaArgs& args, double tol = kDefaultThetaTol);

/// exp(log_scale) * theta(kind, args), with log_scale folded into every
/// series term so that huge prefactors times tiny sums never over/underflow.
cplx theta_scaled(ThetaKind kind, const ThetaArgs& args, cplx log_scale,
                  double tol = kDefaultThetaTol);

/// Right-hand side of the modular transformation
///   theta_k(z, kappa) = exp(-i z^2 / (kappa pi)) (-i kappa)^(-1/2) theta_k'(z/kappa, -1/kappa)
/// with k' = 4, 3, 2 for k = 2, 3, 4. Principal branch for the square root.
/// The dual series is summed directly regardless of its nome.
cplx jacobi_transform(ThetaKind kind, const ThetaArgs& args, double tol = kDefaultThetaTol);

/// Smallest N >= 0 with exp(-pi Im(kappa) N^2 + 2 N |Im z|) < tol.
std::int64_t truncation_bound(cplx kappa, cplx z, double tol);

}  // namespace tdbc
