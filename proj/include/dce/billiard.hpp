#pragma once

#include "dce/jet.hpp"
#include "dce/trajectory.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

namespace dce {

/// One reflection step of a ray, in light-cone coordinates.
struct Bounce {
    double time = 0;       // new light-cone coordinate after the step
    double collision = 0;  // wall-collision time of the step (last wall hit)
    double log_factor = 0; // log of the Doppler factor f'(.) attached to the step
};

/// A monotone bounce map f together with its inverse and Doppler factors.
///
/// `f` sends the arrival light-cone coordinate of a ray at the walls to the
/// departure coordinate, so f^-1 advances a ray by one round trip and f
/// pulls it back. Implementations are immutable and safe to share.
class OpticalMap {
public:
    virtual ~OpticalMap() = default;

    virtual double f(double tau) const = 0;
    virtual double f_inv(double tau) const = 0;
    virtual double log_doppler(double tau) const = 0;
    virtual Jet jet(double tau) const = 0;

    /// f^-1(tau), its last collision time and log f' at the new point.
    virtual Bounce advance(double tau) const;
    /// f(tau), the collision time of the pulled-back leg and log f'(tau).
    virtual Bounce retreat(double tau) const;

    double doppler(double tau) const { return std::exp(log_doppler(tau)); }

    /// Jet of f^-1 at tau.
    Jet inverse_jet(double tau) const;
};

struct BilliardOptions {
    double root_tolerance = -1;    // absolute; negative selects 1e-12 * L
    int max_bracket_expansions = 64;
};

/// Billiard function of a cavity with a static wall at x = 0 and a moving
/// wall at x = L(t):  f(t + L(t)) = t - L(t).
class BilliardMap final : public OpticalMap {
public:
    explicit BilliardMap(WallTrajectory trajectory, BilliardOptions options = {});

    WallTrajectory const& trajectory() const noexcept { return trajectory_; }
    double root_tolerance() const noexcept { return tolerance_; }

    /// The unique t* with t* + L(t*) = tau.
    double retarded_time(double tau) const;
    /// The unique t* with t* - L(t*) = tau (collision of a ray leaving x = 0 at tau).
    double collision_time(double tau) const;

    double f(double tau) const override;
    double f_inv(double tau) const override;
    double log_doppler(double tau) const override;
    Jet jet(double tau) const override;
    Bounce advance(double tau) const override;
    Bounce retreat(double tau) const override;

    /// Doppler factor (1 - v)/(1 + v) of a reflection at wall time t.
    double doppler_at_collision(double t) const;

private:
    double snap(double t) const;

    WallTrajectory trajectory_;
    double tolerance_;
    int max_expansions_;
};

/// outer ∘ inner. Advancing applies outer^-1 first, then inner^-1.
class ComposedMap final : public OpticalMap {
public:
    ComposedMap(std::shared_ptr<OpticalMap const> outer, std::shared_ptr<OpticalMap const> inner);

    OpticalMap const& outer() const { return *outer_; }
    OpticalMap const& inner() const { return *inner_; }

    double f(double tau) const override;
    double f_inv(double tau) const override;
    double log_doppler(double tau) const override;
    Jet jet(double tau) const override;
    Bounce advance(double tau) const override;
    Bounce retreat(double tau) const override;

private:
    std::shared_ptr<OpticalMap const> outer_;
    std::shared_ptr<OpticalMap const> inner_;
};

/// Record of an n-step optical path. Index k = 0..n-1 holds step k+1.
///
/// Cumulative Doppler factors are kept as logarithms; resonant runs reach
/// factors far outside the double range.
struct RayPath {
    double start = 0;
    std::vector<double> times;       // T_k
    std::vector<double> collisions;  // T*_k
    std::vector<double> log_doppler; // log D_k

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }
    double doppler(std::size_t k) const { return std::exp(log_doppler.at(k)); }
    double final_time() const { return times.empty() ? start : times.back(); }
    double final_log_doppler() const { return log_doppler.empty() ? 0.0 : log_doppler.back(); }
};

/// Forward evolution T_k = (f^-1)^k(tau), D_k = prod_{j<=k} f'(T_j).
RayPath trace(OpticalMap const& map, double tau, std::size_t n);

/// Backward evolution T_k = f^k(tau). Partials are the reciprocals of the
/// forward factors along the same segment: log D_k = -sum_{j<k} log f'(f^j(tau)).
RayPath trace_backward(OpticalMap const& map, double tau, std::size_t n);

/// log D_n(tau) without storing the path.
double log_cumulative_doppler(OpticalMap const& map, double tau, std::size_t n);

} // namespace dce
