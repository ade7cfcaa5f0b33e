#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <dce/billiard.hpp>
#include <dce/errors.hpp>

#include <cmath>
#include <memory>
#include <numbers>

using namespace dce;

namespace {

constexpr double pi = std::numbers::pi;

oracle::Wall oracle_of(WallTrajectory const& w) {
    return {w.rest_length(), w.amplitude(), w.angular_frequency(), w.phase(), w.motion_start()};
}

} // namespace

TEST_CASE("static cavity: f is the shift by 2L and D_n = 1") {
    BilliardMap map(WallTrajectory::static_wall(1.25));
    for (double tau : {-3.0, 0.0, 0.4, 17.0}) {
        CHECK(map.f(tau) == doctest::Approx(tau - 2.5).epsilon(1e-15));
        CHECK(map.f_inv(tau) == doctest::Approx(tau + 2.5).epsilon(1e-14));
        CHECK(map.log_doppler(tau) == 0);
    }
    auto p = trace(map, 0.3, 10);
    CHECK(p.final_time() == doctest::Approx(25.3).epsilon(1e-14));
    CHECK(p.final_log_doppler() == 0);
}

TEST_CASE("billiard function matches the bisection oracle") {
    auto w = WallTrajectory::sinusoidal(1.0, 0.05, 2.3, 0.4);
    BilliardMap map(w);
    auto const o = oracle_of(w);
    for (double tau = -1.5; tau < 12; tau += 0.731) {
        CHECK(map.f(tau) == doctest::Approx(double(oracle::f(o, tau))).epsilon(1e-13));
        CHECK(map.f_inv(tau) == doctest::Approx(double(oracle::f_inv(o, tau))).epsilon(1e-13));
        CHECK(map.doppler(tau) == doctest::Approx(double(oracle::doppler(o, tau))).epsilon(1e-12));
    }
}

TEST_CASE("retarded and collision times solve their defining equations") {
    auto w = WallTrajectory::sinusoidal(1.0, 0.02, 2 * pi);
    BilliardMap map(w);
    for (double tau : {0.5, 2.25, 9.1}) {
        double const tr = map.retarded_time(tau);
        CHECK(tr + w.position(tr) == doctest::Approx(tau).epsilon(1e-15));
        double const tc = map.collision_time(tau);
        CHECK(tc - w.position(tc) == doctest::Approx(tau).epsilon(1e-15));
    }
}

TEST_CASE("jet of f matches finite differences of the oracle") {
    auto w = WallTrajectory::sinusoidal(1.0, 0.03, 3.1, 0.2);
    BilliardMap map(w);
    auto const o = oracle_of(w);
    for (double tau : {2.3, 4.7}) {
        auto j = map.jet(tau);
        auto d = oracle::differentiate([&](oracle::Real x) { return oracle::f(o, x); }, tau, 1e-3L);
        CHECK(j.value == doctest::Approx(map.f(tau)));
        CHECK(j.d1 == doctest::Approx(double(d.d1)).epsilon(1e-9));
        CHECK(j.d2 == doctest::Approx(double(d.d2)).epsilon(1e-6));
        CHECK(j.d3 == doctest::Approx(double(d.d3)).epsilon(1e-4));
        auto ij = map.inverse_jet(tau);
        CHECK(ij.value == doctest::Approx(map.f_inv(tau)));
        CHECK(ij.d1 * map.jet(ij.value).d1 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("trace accumulates the oracle Doppler product") {
    auto w = WallTrajectory::sinusoidal(1.0, 0.01, 2 * pi);
    BilliardMap map(w);
    auto const o = oracle_of(w);
    auto p = trace(map, 0.37, 25);
    auto const ref = oracle::advance(o, 0.37, 25);
    CHECK(p.size() == 25);
    CHECK(p.final_time() == doctest::Approx(double(ref.time)).epsilon(1e-14));
    CHECK(p.final_log_doppler() == doctest::Approx(double(ref.log_doppler)).epsilon(1e-10));
    CHECK(log_cumulative_doppler(map, 0.37, 25) == doctest::Approx(p.final_log_doppler()).epsilon(1e-14));
    for (std::size_t k = 0; k < p.size(); ++k) {
        double const t = p.collisions[k];
        CHECK(t - w.position(t) == doctest::Approx(k ? p.times[k - 1] : p.start).epsilon(1e-12));
    }
}

TEST_CASE("backward trace undoes the forward trace") {
    BilliardMap map(WallTrajectory::sinusoidal(1.0, 0.02, 2 * pi));
    auto fwd = trace(map, 0.8, 12);
    auto back = trace_backward(map, fwd.final_time(), 12);
    CHECK(back.final_time() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(back.final_log_doppler() == doctest::Approx(-fwd.final_log_doppler()).epsilon(1e-10));
}

TEST_CASE("static past: rays that never meet the moving wall see the static map") {
    BilliardMap map(WallTrajectory::sinusoidal(1.0, 0.02, 2 * pi, 0.0, 0.0));
    CHECK(map.f(0.9) == doctest::Approx(-1.1).epsilon(1e-15));
    CHECK(map.log_doppler(0.5) == 0);
    CHECK(map.retarded_time(1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("composed map applies its factors in order") {
    auto a = std::make_shared<BilliardMap>(WallTrajectory::sinusoidal(0.5, 0.01, 2 * pi));
    auto b = std::make_shared<BilliardMap>(WallTrajectory::sinusoidal(0.5, 0.02, 3.0, 0.5));
    ComposedMap ab(a, b);
    double const tau = 3.3;
    CHECK(ab.f(tau) == doctest::Approx(a->f(b->f(tau))).epsilon(1e-15));
    CHECK(ab.f_inv(ab.f(tau)) == doctest::Approx(tau).epsilon(1e-14));
    CHECK(ab.log_doppler(tau) == doctest::Approx(a->log_doppler(b->f(tau)) + b->log_doppler(tau)).epsilon(1e-13));
    auto step = ab.advance(tau);
    CHECK(step.time == doctest::Approx(ab.f_inv(tau)).epsilon(1e-15));
    CHECK(step.log_factor == doctest::Approx(ab.log_doppler(step.time)).epsilon(1e-12));
}
