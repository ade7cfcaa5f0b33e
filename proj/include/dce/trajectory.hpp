#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace dce {

enum class TrajectoryKind { Static, Sinusoidal, TwoWallComponent, Tabulated };

std::string_view to_string(TrajectoryKind kind);

/// How much of the physical admissibility check runs at construction.
enum class Validation {
    Strict,       // L > 0 and |dL/dt| < 1 everywhere (plus dL < L for sinusoids)
    PositionOnly, // L > 0 only; for analytic studies of superluminal parameter ranges
};

/// Position and its first three time derivatives at one instant.
struct WallState {
    double position = 0;
    double velocity = 0;
    double acceleration = 0;
    double jerk = 0;
};

/// Wall motion x = L(t) with analytic derivatives through third order.
///
/// Every trajectory is static before `motion_start()`: L(t) equals the rest
/// length and all derivatives vanish. At the start instant itself derivatives
/// are taken from the right. The analytic sinusoidal forms are
///
///     L(t) = L + dL [sin(w t - phase) - sin(w t0 - phase)],   t >= t0,
///
/// which reduces to L + dL sin(w t) for phase = 0, t0 = 0 and to the dephased
/// two-wall component L/2 + dL sin(w t - phase) + dL sin(phase) for t0 = 0.
///
/// Tabulated trajectories are piecewise cubic (Hermite form) through the
/// supplied nodes; beyond the last node the final value is held constant.
/// Instances are immutable and cheap to copy.
class WallTrajectory {
public:
    static WallTrajectory static_wall(double rest_length, double motion_start = 0.0);

    static WallTrajectory sinusoidal(double rest_length, double amplitude, double angular_frequency,
                                     double phase = 0.0, double motion_start = 0.0,
                                     Validation validation = Validation::Strict);

    static WallTrajectory two_wall_component(double rest_length, double amplitude,
                                             double angular_frequency, double phase = 0.0,
                                             double motion_start = 0.0);

    /// Natural cubic spline through (t, L) samples. The first node is the
    /// motion start; its value is the rest length.
    static WallTrajectory tabulated(std::vector<double> times, std::vector<double> positions,
                                    Validation validation = Validation::Strict);

    /// Cubic Hermite interpolant with one-sided slopes per node, so that
    /// velocity kinks can sit exactly on a node. `slope_left[0]` and
    /// `slope_right.back()` are unused.
    static WallTrajectory tabulated_hermite(std::vector<double> times, std::vector<double> positions,
                                            std::vector<double> slope_left,
                                            std::vector<double> slope_right,
                                            Validation validation = Validation::Strict);

    TrajectoryKind kind() const noexcept { return kind_; }
    double rest_length() const noexcept { return rest_length_; }
    double amplitude() const noexcept { return amplitude_; }
    double angular_frequency() const noexcept { return omega_; }
    double phase() const noexcept { return phase_; }
    double motion_start() const noexcept { return t0_; }
    Validation validation() const noexcept { return validation_; }

    /// Drive period 2 pi / w for sinusoids, the rest length for static walls
    /// and the tabulated span for tables.
    double drive_period() const;

    /// Upper bound on |L(t) - L| over all t.
    double max_excursion() const;

    double position(double t) const;
    double derivative(double t, int order) const;
    WallState state(double t) const;

    /// Node times of a tabulated trajectory (empty otherwise).
    std::span<double const> nodes() const;

private:
    struct Table;

    WallTrajectory() = default;
    void validate() const;

    TrajectoryKind kind_ = TrajectoryKind::Static;
    double rest_length_ = 1.0;
    double amplitude_ = 0.0;
    double omega_ = 0.0;
    double phase_ = 0.0;
    double t0_ = 0.0;
    double offset_ = 0.0; // dL sin(w t0 - phase)
    Validation validation_ = Validation::Strict;
    std::shared_ptr<Table const> table_;
};

} // namespace dce
