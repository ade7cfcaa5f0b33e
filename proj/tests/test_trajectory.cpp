#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <dce/errors.hpp>
#include <dce/trajectory.hpp>

#include <cmath>
#include <numbers>

using namespace dce;

TEST_CASE("static wall has constant length and vanishing derivatives") {
    auto w = WallTrajectory::static_wall(1.5);
    for (double t : {-10.0, 0.0, 3.7}) {
        auto s = w.state(t);
        CHECK(s.position == 1.5);
        CHECK(s.velocity == 0);
        CHECK(s.acceleration == 0);
        CHECK(s.jerk == 0);
    }
    CHECK(w.kind() == TrajectoryKind::Static);
}

TEST_CASE("sinusoidal wall rests before t0 and is continuous at the onset") {
    double const L = 1, dL = 0.01, w = 2 * std::numbers::pi;
    for (double t0 : {0.0, 0.37}) {
        for (double phase : {0.0, 0.9}) {
            auto tr = WallTrajectory::sinusoidal(L, dL, w, phase, t0);
            CHECK(tr.position(t0 - 1) == L);
            CHECK(tr.state(t0 - 1e-9).velocity == 0);
            CHECK(tr.position(t0) == doctest::Approx(L).epsilon(1e-15));
            oracle::Wall o{L, dL, w, phase, t0};
            for (double t : {t0 + 0.1, t0 + 1.3, t0 + 7.9}) {
                CHECK(tr.position(t) == doctest::Approx(double(o.position(t))).epsilon(1e-15));
                CHECK(tr.state(t).velocity == doctest::Approx(double(o.velocity(t))).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("analytic derivatives agree with finite differences of the position") {
    auto tr = WallTrajectory::sinusoidal(1.0, 0.05, 3.0, 0.4);
    for (double t : {0.3, 1.1, 2.6}) {
        auto d = oracle::differentiate([&](oracle::Real x) { return oracle::Real(tr.position(double(x))); }, t, 1e-3L);
        auto s = tr.state(t);
        CHECK(s.velocity == doctest::Approx(double(d.d1)).epsilon(1e-9));
        CHECK(s.acceleration == doctest::Approx(double(d.d2)).epsilon(1e-6));
        CHECK(s.jerk == doctest::Approx(double(d.d3)).epsilon(1e-4));
        CHECK(tr.derivative(t, 1) == s.velocity);
        CHECK(tr.derivative(t, 3) == s.jerk);
    }
}

TEST_CASE("two-wall component carries the dephasing offset") {
    double const half = 0.5, dL = 0.02, w = 3.0, delta = 0.8;
    auto tr = WallTrajectory::two_wall_component(half, dL, w, delta);
    for (double t : {0.0, 0.4, 2.2})
        CHECK(tr.position(t) == doctest::Approx(half + dL * std::sin(w * t - delta) + dL * std::sin(delta)).epsilon(1e-15));
    CHECK(tr.kind() == TrajectoryKind::TwoWallComponent);
}

TEST_CASE("invalid parameters are rejected with the violated constraint") {
    CHECK_THROWS_AS(WallTrajectory::static_wall(0.0), ContractError);
    CHECK_THROWS_AS(WallTrajectory::sinusoidal(1.0, 1.2, 0.1), ContractError);
    CHECK_THROWS_AS(WallTrajectory::sinusoidal(1.0, 0.2, 10.0), ContractError); // w dL = 2 > 1
    CHECK_NOTHROW(WallTrajectory::sinusoidal(1.0, 0.2, 10.0, 0, 0, Validation::PositionOnly));
    try {
        (void)WallTrajectory::sinusoidal(1.0, 0.2, 10.0);
    } catch (ContractError const& e) {
        CHECK(std::string(e.what()).find("speed") != std::string::npos);
    }
}

TEST_CASE("tabulated trajectory interpolates its nodes and holds the last value") {
    std::vector<double> t{0, 0.5, 1, 1.5, 2}, x{1, 1.01, 1.0, 0.99, 1.0};
    auto tr = WallTrajectory::tabulated(t, x);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(tr.position(t[i]) == doctest::Approx(x[i]).epsilon(1e-15));
    CHECK(tr.position(-1) == 1);
    CHECK(tr.position(5) == doctest::Approx(1.0));
    CHECK(tr.nodes().size() == t.size());
}

TEST_CASE("Hermite table honours one-sided slopes at a kink") {
    std::vector<double> t{0, 1, 2}, x{1, 1.1, 1.15};
    std::vector<double> left{0, 0.1, 0.05}, right{0.1, 0.05, 0};
    auto tr = WallTrajectory::tabulated_hermite(t, x, left, right);
    CHECK(tr.state(1 - 1e-12).velocity == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(tr.state(1 + 1e-12).velocity == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(tr.state(0.5).velocity < 1);
}

TEST_CASE("drive period and excursion bound") {
    auto tr = WallTrajectory::sinusoidal(1.0, 0.01, std::numbers::pi);
    CHECK(tr.drive_period() == doctest::Approx(2.0));
    CHECK(tr.max_excursion() >= 0.01);
}
