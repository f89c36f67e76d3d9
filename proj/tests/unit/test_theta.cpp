#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tdbc/errors.hpp"
#include "tdbc/theta.hpp"

using namespace tdbc;

namespace {
const cplx I{0.0, 1.0};
}

TEST_CASE("theta against naive partial sums") {
    const std::vector<std::pair<cplx, cplx>> args{
        {0.3, {0.2, 0.5}}, {{0.1, 0.4}, {-0.7, 1.3}}, {{-1.2, -0.3}, {0.0, 0.8}}, {2.0, {1.5, 2.0}}};
    for (const auto& [z, k] : args) {
        for (int kind : {2, 3, 4}) {
            const cplx ref = oracle::naive_theta(kind, z, k);
            const cplx got = theta(static_cast<ThetaKind>(kind), {z, k});
            CHECK(std::abs(got - ref) <= 1e-13 * (1 + std::abs(ref)));
        }
    }
}

TEST_CASE("special values") {
    CHECK(std::abs(theta(ThetaKind::two, {oracle::pi / 2, {0.3, 0.7}})) < 1e-15);
    const cplx t2 = theta(ThetaKind::two, {0.0, 10.0 * I});
    CHECK(t2.real() == doctest::Approx(2 * std::exp(-2.5 * oracle::pi)).epsilon(1e-8));
    CHECK(t2.real() == doctest::Approx(7.7642e-4).epsilon(1e-4));
    CHECK(std::abs(theta(ThetaKind::four, {0.0, 795.8 * I}) - 1.0) < 1e-300);
}

TEST_CASE("modular transformation identity") {
    const cplx a = theta(ThetaKind::two, {0.3, {0.2, 0.5}});
    CHECK(std::abs(a - jacobi_transform(ThetaKind::two, {0.3, {0.2, 0.5}})) <= 1e-12 * std::abs(a));
    const cplx b = theta(ThetaKind::three, {0.0, I});
    CHECK(std::abs(b - jacobi_transform(ThetaKind::three, {0.0, I})) <= 1e-12 * std::abs(b));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const cplx z = std::polar(2.0 * std::sqrt(u(rng)), 2 * oracle::pi * u(rng));
        const cplx k{4.0 * u(rng) - 2.0, 0.05 + 4.95 * u(rng)};
        CHECK(ThetaArgs{z, k}.dual().kappa.imag() > 0.0);
        for (ThetaKind kind : {ThetaKind::two, ThetaKind::three, ThetaKind::four}) {
            const cplx direct = theta(kind, {z, k});
            CHECK(std::abs(direct - jacobi_transform(kind, {z, k})) <= 1e-12 * (1 + std::abs(direct)));
        }
    }
}

TEST_CASE("parity and quasi-periodicity") {
    const cplx k{0.3, 0.4};
    for (cplx z : {cplx{0.4, 0.2}, cplx{-1.1, 0.5}, cplx{2.5, -0.3}}) {
        for (ThetaKind kind : {ThetaKind::two, ThetaKind::three, ThetaKind::four}) {
            const cplx v = theta(kind, {z, k});
            CHECK(std::abs(theta(kind, {-z, k}) - v) <= 1e-13 * (1 + std::abs(v)));
            const double sign = kind == ThetaKind::two ? -1.0 : 1.0;
            CHECK(std::abs(theta(kind, {z + oracle::pi, k}) - sign * v) <= 1e-13 * (1 + std::abs(v)));
        }
    }
}

TEST_CASE("scaled evaluation survives extreme prefactors") {
    const ThetaArgs a{{0.2, 3.0}, {0.1, 0.02}};
    const cplx plain = theta(ThetaKind::three, a);
    const cplx scaled = theta_scaled(ThetaKind::three, a, -700.0);
    CHECK(std::abs(scaled * std::exp(700.0) - plain) <= 1e-12 * std::abs(plain));
    // exp(800) overflows on its own; the folded product stays finite.
    const cplx big = theta_scaled(ThetaKind::two, {0.1, {0.0, 1.0}}, 800.0 - 900.0);
    CHECK(std::isfinite(big.real()));
}

TEST_CASE("small imaginary nome routes through the dual series") {
    const ThetaArgs a{0.7, {0.15, 0.003}};
    const cplx via_dual = theta(ThetaKind::two, a);
    CHECK(std::abs(via_dual - jacobi_transform(ThetaKind::two, a)) <= 1e-12 * std::abs(via_dual));
    CHECK(std::abs(via_dual - oracle::naive_theta(2, 0.7, {0.15, 0.003}, 400)) <= 1e-9 * std::abs(via_dual));
}

TEST_CASE("truncation bound") {
    CHECK(truncation_bound(I, 0.0, 1e-16) == 4);
    const auto n = truncation_bound(100.0 * I, 0.0, 1e-300);
    CHECK(n >= 1);
    CHECK(n <= 2);
    std::int64_t prev = truncation_bound({0.0, 0.01}, {0.0, 1.0}, 1e-16);
    for (double im : {0.05, 0.1, 0.5, 1.0, 5.0}) {
        const auto cur = truncation_bound({0.0, im}, {0.0, 1.0}, 1e-16);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(theta(ThetaKind::three, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(theta(ThetaKind::three, {0.0, {1.0, -0.1}}), DomainError);
    CHECK_THROWS_AS(truncation_bound({0.0, 0.0}, 0.0, 1e-16), DomainError);
    CHECK_THROWS_AS(truncation_bound({0.0, 1e-12}, 0.0, 1e-16), ConvergenceError);
}
