#include "dce/billiard.hpp"

#include "dce/errors.hpp"
#include "dce/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dce {

Bounce OpticalMap::advance(double tau) const {
    double const next = f_inv(tau);
    return {next, next, log_doppler(next)};
}

Bounce OpticalMap::retreat(double tau) const {
    return {f(tau), tau, log_doppler(tau)};
}

Jet OpticalMap::inverse_jet(double tau) const {
    double const x = f_inv(tau);
    return invert(jet(x), x);
}

BilliardMap::BilliardMap(WallTrajectory trajectory, BilliardOptions options)
    : trajectory_(std::move(trajectory)),
      tolerance_(options.root_tolerance > 0 ? options.root_tolerance
                                            : 1e-12 * trajectory_.rest_length()),
      max_expansions_(options.max_bracket_expansions) {}

double BilliardMap::snap(double t) const {
    double const t0 = trajectory_.motion_start();
    return std::abs(t - t0) <= tolerance_ ? t0 : t;
}

double BilliardMap::retarded_time(double tau) const {
    auto eval = [this](double t) {
        auto const st = trajectory_.state(t);
        return std::pair{t + st.position, 1 + st.velocity};
    };
    double const step = std::max(trajectory_.max_excursion(), 1e-3 * trajectory_.rest_length());
    MonotoneSolveOptions opts{tolerance_, max_expansions_, 200};
    try {
        return snap(solve_increasing(eval, tau, tau - trajectory_.rest_length(), step, opts));
    } catch (NumericError const& e) {
        std::ostringstream msg;
        msg << "retarded time at tau=" << tau << ": " << e.what();
        throw NumericError(msg.str());
    }
}

double BilliardMap::collision_time(double tau) const {
    auto eval = [this](double t) {
        auto const st = trajectory_.state(t);
        return std::pair{t - st.position, 1 - st.velocity};
    };
    double const step = std::max(trajectory_.max_excursion(), 1e-3 * trajectory_.rest_length());
    MonotoneSolveOptions opts{tolerance_, max_expansions_, 200};
    try {
        return snap(solve_increasing(eval, tau, tau + trajectory_.rest_length(), step, opts));
    } catch (NumericError const& e) {
        std::ostringstream msg;
        msg << "collision time at tau=" << tau << ": " << e.what();
        throw NumericError(msg.str());
    }
}

double BilliardMap::doppler_at_collision(double t) const {
    double const v = trajectory_.state(t).velocity;
    return (1 - v) / (1 + v);
}

double BilliardMap::f(double tau) const {
    double const t = retarded_time(tau);
    return t - trajectory_.position(t);
}

double BilliardMap::f_inv(double tau) const {
    double const t = collision_time(tau);
    return t + trajectory_.position(t);
}

double BilliardMap::log_doppler(double tau) const {
    double const v = trajectory_.state(retarded_time(tau)).velocity;
    return std::log1p(-v) - std::log1p(v);
}

Jet BilliardMap::jet(double tau) const {
    double const t = retarded_time(tau);
    auto const st = trajectory_.state(t);
    double const p = 1 + st.velocity;
    double const p2 = p * p;
    return {
        t - st.position,
        (1 - st.velocity) / p,
        -2 * st.acceleration / (p2 * p),
        -2 * st.jerk / (p2 * p2) + 6 * st.acceleration * st.acceleration / (p2 * p2 * p),
    };
}

Bounce BilliardMap::advance(double tau) const {
    double const t = collision_time(tau);
    auto const st = trajectory_.state(t);
    return {t + st.position, t, std::log1p(-st.velocity) - std::log1p(st.velocity)};
}

Bounce BilliardMap::retreat(double tau) const {
    double const t = retarded_time(tau);
    auto const st = trajectory_.state(t);
    return {t - st.position, t, std::log1p(-st.velocity) - std::log1p(st.velocity)};
}

ComposedMap::ComposedMap(std::shared_ptr<OpticalMap const> outer, std::shared_ptr<OpticalMap const> inner)
    : outer_(std::move(outer)), inner_(std::move(inner)) {
    if (!outer_ || !inner_)
        throw ContractError("composed map: both factors are required");
}

double ComposedMap::f(double tau) const { return outer_->f(inner_->f(tau)); }

double ComposedMap::f_inv(double tau) const { return inner_->f_inv(outer_->f_inv(tau)); }

double ComposedMap::log_doppler(double tau) const {
    auto const in = inner_->retreat(tau);
    return outer_->log_doppler(in.time) + in.log_factor;
}

Jet ComposedMap::jet(double tau) const {
    auto const in = inner_->jet(tau);
    return compose(outer_->jet(in.value), in);
}

Bounce ComposedMap::advance(double tau) const {
    auto const first = outer_->advance(tau);
    auto const second = inner_->advance(first.time);
    return {second.time, second.collision, first.log_factor + second.log_factor};
}

Bounce ComposedMap::retreat(double tau) const {
    auto const first = inner_->retreat(tau);
    auto const second = outer_->retreat(first.time);
    return {second.time, first.collision, first.log_factor + second.log_factor};
}

RayPath trace(OpticalMap const& map, double tau, std::size_t n) {
    RayPath path;
    path.start = tau;
    path.times.reserve(n);
    path.collisions.reserve(n);
    path.log_doppler.reserve(n);
    double current = tau;
    double log_d = 0;
    for (std::size_t k = 0; k < n; ++k) {
        auto const b = map.advance(current);
        current = b.time;
        log_d += b.log_factor;
        path.times.push_back(current);
        path.collisions.push_back(b.collision);
        path.log_doppler.push_back(log_d);
    }
    return path;
}

RayPath trace_backward(OpticalMap const& map, double tau, std::size_t n) {
    RayPath path;
    path.start = tau;
    path.times.reserve(n);
    path.collisions.reserve(n);
    path.log_doppler.reserve(n);
    double current = tau;
    double log_d = 0;
    for (std::size_t k = 0; k < n; ++k) {
        auto const b = map.retreat(current);
        current = b.time;
        log_d -= b.log_factor;
        path.times.push_back(current);
        path.collisions.push_back(b.collision);
        path.log_doppler.push_back(log_d);
    }
    return path;
}

double log_cumulative_doppler(OpticalMap const& map, double tau, std::size_t n) {
    double current = tau;
    double log_d = 0;
    for (std::size_t k = 0; k < n; ++k) {
        auto const b = map.advance(current);
        current = b.time;
        log_d += b.log_factor;
    }
    return log_d;
}

} // namespace dce
