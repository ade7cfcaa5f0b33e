#include "dce/trajectory.hpp"

#include "dce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dce {

std::string_view to_string(TrajectoryKind kind) {
    switch (kind) {
    case TrajectoryKind::Static: return "static";
    case TrajectoryKind::Sinusoidal: return "sinusoidal";
    case TrajectoryKind::TwoWallComponent: return "two-wall-component";
    case TrajectoryKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

struct WallTrajectory::Table {
    std::vector<double> t;
    // Per interval i (between t[i] and t[i+1]): L = c0 + c1 u + c2 u^2 + c3 u^3, u = t - t[i].
    std::vector<double> c0, c1, c2, c3;
    double final_value = 0;

    std::size_t interval(double x) const {
        auto it = std::upper_bound(t.begin(), t.end(), x);
        auto idx = static_cast<std::size_t>(std::distance(t.begin(), it));
        return std::min(idx == 0 ? 0 : idx - 1, t.size() - 2);
    }
};

namespace {

void require(bool ok, std::string const& what) {
    if (!ok)
        throw ContractError("trajectory: " + what);
}

void check_nodes(std::vector<double> const& times, std::vector<double> const& positions) {
    require(times.size() >= 2, "tabulated trajectory needs at least two nodes");
    require(times.size() == positions.size(), "node and value counts differ");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], "node times must be strictly increasing");
}

// Slopes of the natural cubic spline through the nodes.
std::vector<double> natural_spline_slopes(std::vector<double> const& t, std::vector<double> const& y) {
    auto const n = t.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t[i + 1] - t[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    // Second derivatives M with M[0] = M[n-1] = 0 (Thomas algorithm).
    std::vector<double> m(n, 0.0);
    if (n > 2) {
        std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i - 1] = 2 * (h[i - 1] + h[i]);
            upper[i - 1] = h[i];
            rhs[i - 1] = 6 * (delta[i] - delta[i - 1]);
        }
        for (std::size_t i = 1; i < n - 2; ++i) {
            double const w = h[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m[n - 2] = rhs[n - 3] / diag[n - 3];
        for (std::size_t i = n - 3; i-- > 0;)
            m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
    }
    std::vector<double> slope(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        slope[i] = delta[i] - h[i] * (2 * m[i] + m[i + 1]) / 6;
    slope[n - 1] = delta[n - 2] + h[n - 2] * (m[n - 2] + 2 * m[n - 1]) / 6;
    return slope;
}

} // namespace

WallTrajectory WallTrajectory::static_wall(double rest_length, double motion_start) {
    WallTrajectory w;
    w.kind_ = TrajectoryKind::Static;
    w.rest_length_ = rest_length;
    w.t0_ = motion_start;
    w.validate();
    return w;
}

WallTrajectory WallTrajectory::sinusoidal(double rest_length, double amplitude, double angular_frequency,
                                          double phase, double motion_start, Validation validation) {
    WallTrajectory w;
    w.kind_ = TrajectoryKind::Sinusoidal;
    w.rest_length_ = rest_length;
    w.amplitude_ = amplitude;
    w.omega_ = angular_frequency;
    w.phase_ = phase;
    w.t0_ = motion_start;
    w.offset_ = amplitude * std::sin(angular_frequency * motion_start - phase);
    w.validation_ = validation;
    w.validate();
    return w;
}

WallTrajectory WallTrajectory::two_wall_component(double rest_length, double amplitude,
                                                  double angular_frequency, double phase,
                                                  double motion_start) {
    WallTrajectory w;
    w.kind_ = TrajectoryKind::TwoWallComponent;
    w.rest_length_ = rest_length;
    w.amplitude_ = amplitude;
    w.omega_ = angular_frequency;
    w.phase_ = phase;
    w.t0_ = motion_start;
    w.offset_ = amplitude * std::sin(angular_frequency * motion_start - phase);
    w.validate();
    return w;
}

WallTrajectory WallTrajectory::tabulated(std::vector<double> times, std::vector<double> positions,
                                         Validation validation) {
    check_nodes(times, positions);
    auto slopes = natural_spline_slopes(times, positions);
    return tabulated_hermite(std::move(times), std::move(positions), slopes, slopes, validation);
}

WallTrajectory WallTrajectory::tabulated_hermite(std::vector<double> times, std::vector<double> positions,
                                                 std::vector<double> slope_left,
                                                 std::vector<double> slope_right,
                                                 Validation validation) {
    check_nodes(times, positions);
    require(slope_left.size() == times.size() && slope_right.size() == times.size(),
            "slope arrays must match the node count");

    auto table = std::make_shared<Table>();
    auto const n = times.size();
    table->c0.resize(n - 1);
    table->c1.resize(n - 1);
    table->c2.resize(n - 1);
    table->c3.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double const h = times[i + 1] - times[i];
        double const d = (positions[i + 1] - positions[i]) / h;
        double const m0 = slope_right[i];
        double const m1 = slope_left[i + 1];
        table->c0[i] = positions[i];
        table->c1[i] = m0;
        table->c2[i] = (3 * d - 2 * m0 - m1) / h;
        table->c3[i] = (m0 + m1 - 2 * d) / (h * h);
    }
    table->final_value = positions.back();
    table->t = std::move(times);

    WallTrajectory w;
    w.kind_ = TrajectoryKind::Tabulated;
    w.rest_length_ = positions.front();
    w.t0_ = table->t.front();
    w.validation_ = validation;
    double excursion = 0;
    for (double p : positions)
        excursion = std::max(excursion, std::abs(p - w.rest_length_));
    w.amplitude_ = excursion;
    w.table_ = std::move(table);
    w.validate();
    return w;
}

double WallTrajectory::drive_period() const {
    switch (kind_) {
    case TrajectoryKind::Static: return rest_length_;
    case TrajectoryKind::Sinusoidal:
    case TrajectoryKind::TwoWallComponent:
        return omega_ > 0 ? 2 * std::numbers::pi / omega_ : rest_length_;
    case TrajectoryKind::Tabulated: return table_->t.back() - table_->t.front();
    }
    return rest_length_;
}

double WallTrajectory::max_excursion() const {
    switch (kind_) {
    case TrajectoryKind::Static: return 0;
    case TrajectoryKind::Sinusoidal:
    case TrajectoryKind::TwoWallComponent: return amplitude_ + std::abs(offset_);
    case TrajectoryKind::Tabulated: {
        // Cubic pieces can overshoot the node values slightly.
        return 1.1 * amplitude_ + 1e-12 * rest_length_;
    }
    }
    return amplitude_;
}

std::span<double const> WallTrajectory::nodes() const {
    if (!table_)
        return {};
    return table_->t;
}

WallState WallTrajectory::state(double t) const {
    if (t < t0_ || kind_ == TrajectoryKind::Static)
        return {rest_length_, 0, 0, 0};

    if (kind_ == TrajectoryKind::Tabulated) {
        auto const& tab = *table_;
        if (t >= tab.t.back())
            return {tab.final_value, 0, 0, 0};
        auto const i = tab.interval(t);
        double const u = t - tab.t[i];
        double const a = tab.c0[i], b = tab.c1[i], c = tab.c2[i], d = tab.c3[i];
        return {
            a + u * (b + u * (c + u * d)),
            b + u * (2 * c + 3 * d * u),
            2 * c + 6 * d * u,
            6 * d,
        };
    }

    double const arg = omega_ * t - phase_;
    double const s = std::sin(arg), c = std::cos(arg);
    double const aw = amplitude_ * omega_;
    return {
        rest_length_ + amplitude_ * s - offset_,
        aw * c,
        -aw * omega_ * s,
        -aw * omega_ * omega_ * c,
    };
}

double WallTrajectory::position(double t) const { return state(t).position; }

double WallTrajectory::derivative(double t, int order) const {
    if (order < 1 || order > 3) {
        std::ostringstream msg;
        msg << "trajectory: derivative order must be 1..3, got " << order;
        throw ContractError(msg.str());
    }
    auto const st = state(t);
    switch (order) {
    case 1: return st.velocity;
    case 2: return st.acceleration;
    default: return st.jerk;
    }
}

void WallTrajectory::validate() const {
    require(std::isfinite(rest_length_) && rest_length_ > 0, "rest length must be positive (L > 0)");
    require(std::isfinite(t0_), "motion start must be finite");
    if (kind_ == TrajectoryKind::Sinusoidal || kind_ == TrajectoryKind::TwoWallComponent) {
        require(std::isfinite(amplitude_) && amplitude_ >= 0, "amplitude must be non-negative");
        require(std::isfinite(omega_) && omega_ >= 0, "angular frequency must be non-negative");
        if (kind_ == TrajectoryKind::Sinusoidal)
            require(amplitude_ < rest_length_, "amplitude must be below the rest length (dL < L)");
        if (validation_ == Validation::Strict) {
            std::ostringstream msg;
            msg << "wall speed must stay subluminal (omega*dL < 1), got " << omega_ * amplitude_;
            require(omega_ * amplitude_ < 1, msg.str());
        }
    }

    // Sampled scan over one full period of motion.
    constexpr int samples = 1000;
    double const span = drive_period();
    auto check_at = [&](double t) {
        auto const st = state(t);
        if (!(st.position > 0)) {
            std::ostringstream msg;
            msg << "wall position must stay positive (L(t) > 0), violated at t=" << t;
            throw ContractError("trajectory: " + msg.str());
        }
        if (validation_ == Validation::Strict && !(std::abs(st.velocity) < 1)) {
            std::ostringstream msg;
            msg << "wall speed must stay subluminal (|dL/dt| < 1), violated at t=" << t;
            throw ContractError("trajectory: " + msg.str());
        }
    };
    for (int k = 0; k <= samples; ++k)
        check_at(t0_ + span * k / samples);
    if (table_) {
        auto const& t = table_->t;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            check_at(t[i]);
            check_at(0.5 * (t[i] + t[i + 1]));
        }
    }
}

} // namespace dce
