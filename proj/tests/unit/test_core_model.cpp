#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tdbc/core_model.hpp"
#include "tdbc/errors.hpp"
#include "tdbc/quadrature.hpp"

using namespace tdbc;

TEST_CASE("length of each law") {
    CHECK(length(WallTrajectory::linear(1, 1), 1) == doctest::Approx(2.0));
    CHECK(length(WallTrajectory::smooth_periodic(100, 0.1, 1), 0) == doctest::Approx(100.0));
    CHECK(length(WallTrajectory::scaled(WallTrajectory::linear(1, 1), 3), 1) == doctest::Approx(6.0));
    const auto rev = WallTrajectory::reversing_linear(1, 2, 4);
    CHECK(length(rev, 1) == doctest::Approx(3.0));
    CHECK(length(rev, 3) == doctest::Approx(3.0));
    CHECK(length(rev, 4) == doctest::Approx(1.0));
}

TEST_CASE("velocity and acceleration") {
    const auto lin = WallTrajectory::linear(1, 2);
    CHECK(velocity(lin, 0.7) == 2.0);
    CHECK(acceleration(lin, 0.7) == 0.0);
    const auto rev = WallTrajectory::reversing_linear(1, 2, 4);
    CHECK(velocity(rev, 3) == -2.0);
    CHECK(velocity(rev, 2) == -2.0);  // contraction side at T/2
    CHECK(velocity(rev, 1.999) == 2.0);

    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    const double t = oracle::pi / 2;
    const double fd = (length(sp, t + 1e-5) - length(sp, t - 1e-5)) / 2e-5;
    CHECK(std::abs(velocity(sp, t) - fd) < 1e-8);
}

TEST_CASE("derivatives against finite differences on random times") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<WallTrajectory> trajs{
        WallTrajectory::linear(100, 2), WallTrajectory::linear(100, -3),
        WallTrajectory::reversing_linear(100, 2, 4), WallTrajectory::smooth_periodic(100, 0.1, 1),
        WallTrajectory::scaled(WallTrajectory::smooth_periodic(50, 0.3, 2), 4)};
    for (const auto& tr : trajs) {
        const double t_max = std::isfinite(tr.window().t_max) ? tr.window().t_max : 10.0;
        for (int i = 0; i < 100; ++i) {
            double t = 0.01 + (t_max - 0.02) * u(rng);
            if (auto* r = std::get_if<WallTrajectory::ReversingLinear>(&tr.law())) {
                if (std::abs(t - r->T / 2) < 0.01) t += 0.02;
            }
            const double h = 1e-3;
            const double v = velocity(tr, t);
            const double a = acceleration(tr, t);
            const double fv = oracle::derivative([&](double s) { return length(tr, s); }, t, h);
            const double fa = oracle::derivative([&](double s) { return velocity(tr, s); }, t, h);
            CHECK(std::abs(v - fv) <= 1e-7 * (1 + std::abs(v)));
            CHECK(std::abs(a - fa) <= 1e-7 * (1 + std::abs(a)));
        }
    }
}

TEST_CASE("tau closed forms against adaptive quadrature") {
    CHECK(tau(WallTrajectory::linear(1, 1), 1) == doctest::Approx(0.5));
    CHECK(tau(WallTrajectory::smooth_periodic(100, 0.1, 1), 0) == 0.0);
    CHECK(tau(WallTrajectory::smooth_periodic(100, 0.1, 1), 2 * oracle::pi) ==
          doctest::Approx(5.711986642890532e-4).epsilon(1e-13));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<WallTrajectory> trajs{
        WallTrajectory::linear(100, 2), WallTrajectory::linear(10, -3),
        WallTrajectory::reversing_linear(100, 2, 4), WallTrajectory::smooth_periodic(100, 0.1, 1),
        WallTrajectory::scaled(WallTrajectory::smooth_periodic(50, 0.3, 2), 4)};
    for (int i = 0; i < 50; ++i) {
        const auto& tr = trajs[i % trajs.size()];
        const double t_max = std::isfinite(tr.window().t_max) ? tr.window().t_max : 10.0;
        const double t = t_max * u(rng);
        const auto inv2 = [&](double s) { return 1.0 / (length(tr, s) * length(tr, s)); };
        double ref = 0.0;
        if (auto* r = std::get_if<WallTrajectory::ReversingLinear>(&tr.law()); r && t > r->T / 2) {
            ref = adaptive_integrate(inv2, 0, r->T / 2).value + adaptive_integrate(inv2, r->T / 2, t).value;
        } else {
            ref = adaptive_integrate(inv2, 0, t).value;
        }
        CHECK(std::abs(tau(tr, t) - ref) <= 1e-11 * std::abs(ref));
    }
}

TEST_CASE("omega squared") {
    CHECK(omega_squared(WallTrajectory::linear(100, 2), 3) == 0.0);
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    CHECK(omega_squared(sp, 0) == doctest::Approx(0.1 * (0.1 * (1 - 5) - 4) / (8 * 1.1 * 1.1)).epsilon(1e-14));
    const auto sc = WallTrajectory::scaled(sp, 7);
    for (double t : {0.3, 1.7, 4.0}) CHECK(omega_squared(sc, t) == doctest::Approx(omega_squared(sp, t)));
}

TEST_CASE("scaled law: length by k, tau by 1/k^2") {
    const auto sp = WallTrajectory::smooth_periodic(100, 0.1, 1);
    const auto sc = WallTrajectory::scaled(sp, 4);
    for (double t : {0.5, 2.0, 6.0}) {
        CHECK(length(sc, t) == doctest::Approx(4 * length(sp, t)).epsilon(1e-15));
        CHECK(tau(sc, t) == doctest::Approx(tau(sp, t) / 16).epsilon(1e-14));
    }
    CHECK(sc.period().value() == doctest::Approx(2 * oracle::pi));
}

TEST_CASE("validity windows and domain errors") {
    CHECK_THROWS_AS(WallTrajectory::smooth_periodic(100, 1.0, 1), DomainError);
    CHECK_THROWS_AS(WallTrajectory::linear(-1, 1), DomainError);
    CHECK_THROWS_AS(WallTrajectory::reversing_linear(100, -60, 4), DomainError);
    const auto shrink = WallTrajectory::linear(10, -1);
    CHECK(shrink.window().t_max == doctest::Approx(9.9));
    CHECK_THROWS_AS(length(shrink, 10), DomainError);
    CHECK_THROWS_AS(length(WallTrajectory::linear(10, 1), -1), DomainError);
    CHECK_THROWS_AS(length(WallTrajectory::reversing_linear(10, 1, 4), 4.5), DomainError);
    CHECK_FALSE(WallTrajectory::linear(10, 1).period().has_value());
    CHECK(WallTrajectory::linear(10, 0).is_static());
}

TEST_CASE("localization diagnostic") {
    PhysicalConstants c;
    GaussianParams g{1, 0, 0};
    CHECK(localization_diagnostic(g, c, 0, 100) == doctest::Approx(0.01));
    CHECK(localization_diagnostic(g, c, 5, 100) == doctest::Approx(std::sqrt(7.25) / 100));
    double prev = 0;
    for (double t = 0; t < 20; t += 0.5) {
        const double r = localization_diagnostic(g, c, t, 100);
        CHECK(r >= prev);
        prev = r;
    }
    CHECK_THROWS_AS((GaussianParams{0, 0, 0}.validate()), DomainError);
    CHECK_THROWS_AS((PhysicalConstants{0, 1}.validate()), DomainError);
}

TEST_CASE("grids, trapezoid and comparison verdicts") {
    GridSpec g{101, -5, 5};
    const auto x = g.positions();
    CHECK(x.size() == 101);
    CHECK(x.front() == -5.0);
    CHECK(x.back() == 5.0);
    CHECK(g.spacing() == doctest::Approx(0.1));

    std::vector<cplx> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::exp(-x[i] * x[i] / 2) / std::pow(oracle::pi, 0.25);
    const auto psi = WaveFunctionGrid::make(x, v, 0.0);
    CHECK(psi.norm == doctest::Approx(1.0).epsilon(1e-9));

    auto w = v;
    w[50] += 1e-3;
    const auto other = WaveFunctionGrid::make(x, w, 0.0);
    const auto pass = compare_fields(psi, psi, 0.01, 1e-10, 0.1);
    CHECK(pass.verdict == Verdict::pass);
    CHECK(pass.sup_error == 0.0);
    const auto fail = compare_fields(other, psi, 0.01, 1e-10, 0.1);
    CHECK(fail.verdict == Verdict::fail);
    CHECK(fail.sup_error == doctest::Approx(1e-3));
    const auto warn = compare_fields(other, psi, 0.5, 1e-10, 0.1);
    CHECK(warn.verdict == Verdict::warn);
    CHECK(to_string(Verdict::warn) == "warn");
}
