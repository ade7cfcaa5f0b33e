#include "dce/resonance.hpp"

#include "dce/errors.hpp"
#include "dce/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dce {

namespace {
constexpr double pi = std::numbers::pi;
}

std::string_view to_string(TrajectorySign sign) {
    switch (sign) {
    case TrajectorySign::Positive: return "positive";
    case TrajectorySign::Negative: return "negative";
    case TrajectorySign::Neutral: return "neutral";
    }
    return "unknown";
}

ReturnPoints find_periodic_roots(std::function<double(double)> const& residual, double period,
                                 double sample_period, double lo, double hi, double level_scale,
                                 ReturnPointOptions const& options) {
    if (!(period > 0))
        throw ContractError("return points: period must be positive");
    if (!(hi > lo))
        throw ContractError("return points: empty search interval");

    double const level_tol = options.residual_tolerance * level_scale;
    auto const n = static_cast<std::size_t>(
        std::max(16.0, std::ceil((hi - lo) / sample_period * options.samples_per_period)));
    double const dt = (hi - lo) / static_cast<double>(n);

    std::vector<double> values(n + 1);
    bool all_level = true;
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = residual(lo + dt * static_cast<double>(i));
        all_level = all_level && std::abs(values[i]) <= level_tol;
    }

    ReturnPoints out;
    if (all_level) {
        out.degenerate = true;
        return out;
    }

    std::vector<double> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        double const t = lo + dt * static_cast<double>(i);
        if (values[i] == 0.0) {
            candidates.push_back(t);
        } else if ((values[i] < 0) != (values[i + 1] < 0) && values[i + 1] != 0.0) {
            candidates.push_back(bisect_sign_change(residual, t, t + dt, options.tolerance));
        }
    }

    for (double t : candidates) {
        bool periodic = true;
        for (int k = 1; k <= options.periodicity_checks && periodic; ++k)
            periodic = std::abs(residual(t + k * period)) <= level_tol;
        if (periodic)
            out.times.push_back(t);
    }
    return out;
}

ReturnPoints find_return_points(WallTrajectory const& trajectory, double period, double lo, double hi,
                                ReturnPointOptions const& options) {
    double const half = 0.5 * period;
    double const sample_period =
        trajectory.kind() == TrajectoryKind::Sinusoidal || trajectory.kind() == TrajectoryKind::TwoWallComponent
            ? std::min(trajectory.drive_period(), period)
            : period;
    return find_periodic_roots([&](double t) { return trajectory.position(t) - half; }, period, sample_period,
                               lo, hi, half, options);
}

PeriodicTrajectory classify(OpticalMap const& map, double start, double period, std::size_t n_probe,
                            ClassifyOptions const& options) {
    if (n_probe == 0)
        throw ContractError("classify: n_probe must be at least 1");

    auto const probe = trace(map, start, static_cast<std::size_t>(std::max(1, options.residual_steps)));
    double residual = 0;
    for (std::size_t k = 0; k < probe.size(); ++k)
        residual = std::max(residual, std::abs(probe.times[k] - start - static_cast<double>(k + 1) * period));
    if (residual > options.residual_tolerance * std::max(1.0, period)) {
        std::ostringstream msg;
        msg << "classify: tau0=" << start << " is not periodic with T=" << period << " (residual "
            << residual << ")";
        throw NumericError(msg.str());
    }

    double log_d = 0;
    for (std::size_t k = 1; k <= n_probe; ++k)
        log_d += map.log_doppler(start + static_cast<double>(k) * period);

    PeriodicTrajectory out;
    out.start = start;
    out.return_point = probe.collisions.front();
    out.period = period;
    out.exponent = log_d / static_cast<double>(n_probe);
    out.residual = residual;
    if (out.exponent > neutral_exponent_threshold)
        out.sign = TrajectorySign::Positive;
    else if (out.exponent < -neutral_exponent_threshold)
        out.sign = TrajectorySign::Negative;
    else
        out.sign = TrajectorySign::Neutral;
    return out;
}

StartingPoints principal_starting_points(int order, double rest_length) {
    if (order < 1)
        throw ContractError("starting points: resonance order must be >= 1");
    StartingPoints pts;
    for (int m = 0; m < order; ++m) {
        pts.positive.push_back((-order + 2 * m + 1) * rest_length / order);
        pts.negative.push_back((-order + 2 * m) * rest_length / order);
    }
    return pts;
}

double resonant_frequency(int order, double rest_length) { return order * pi / rest_length; }

double resonant_period(int order, double angular_frequency) {
    return 2 * pi * order / angular_frequency;
}

double doppler_exponent(double speed) {
    if (!(std::abs(speed) < 1))
        return std::numeric_limits<double>::quiet_NaN();
    return std::log1p(speed) - std::log1p(-speed);
}

WindowBound resonance_window(double amplitude_ratio) { return {amplitude_ratio, amplitude_ratio}; }

WindowBound two_wall_resonance_window(double dL1, double dL2, double delta, int order, double rest_length) {
    double const parity = (order % 2 == 0) ? 1.0 : -1.0;
    double const radicand = dL1 * dL1 + dL2 * dL2 + 2 * parity * dL1 * dL2 * std::cos(delta);
    double const a = std::sqrt(std::max(0.0, radicand));
    double const shift = dL2 * std::sin(delta);
    return {std::max(0.0, a - shift) / rest_length, std::max(0.0, a + shift) / rest_length};
}

bool single_series_condition(int order, double amplitude_ratio, double detuning_ratio) {
    return amplitude_ratio + (1.0 + 1.0 / order) * detuning_ratio > 1.0 / order;
}

PeakCensus peak_census(int order, double amplitude_ratio) {
    if (order < 1)
        throw ContractError("peak census: resonance order must be >= 1");
    PeakCensus census;
    census.order = order;
    census.amplitude_ratio = amplitude_ratio;
    census.wall_speed = order * pi * amplitude_ratio;
    int m_max = 0;
    while (order * amplitude_ratio > m_max + 1)
        ++m_max;
    census.num_series = 1 + m_max;
    for (int m = 0; m <= m_max; ++m) {
        SeriesExponent s;
        s.series = m;
        double const w = census.wall_speed;
        s.speed = std::sqrt(std::max(0.0, w * w - (m * pi) * (m * pi)));
        s.subluminal = s.speed < 1;
        s.exponent = doppler_exponent(s.speed);
        census.series.push_back(s);
    }
    return census;
}

double series_period(int order, int series, double rest_length) {
    return 2.0 * (order + series) * rest_length / order;
}

ResonanceReport analyze_resonance(BilliardMap const& map, int order, std::size_t n_probe,
                                  ReturnPointOptions const& options) {
    auto const& traj = map.trajectory();
    ResonanceReport report;
    report.order = order;
    double const omega = traj.angular_frequency();
    double const period = omega > 0 ? resonant_period(order, omega) : 2 * traj.rest_length();
    double const t0 = traj.motion_start();

    auto const rp = find_return_points(traj, period, t0, t0 + period, options);
    report.degenerate = rp.degenerate;
    double const ratio = traj.amplitude() / traj.rest_length();
    report.window = resonance_window(ratio);
    if (omega > 0) {
        report.num_series = peak_census(order, ratio).num_series;
    }

    for (double t_star : rp.times) {
        auto pt = classify(map, t_star - 0.5 * period, period, n_probe);
        report.trajectories.push_back(pt);
        if (pt.sign == TrajectorySign::Positive)
            ++report.peak_count_per_series;
    }
    return report;
}

std::vector<double> series_exponents(WallTrajectory const& trajectory, int order, int series,
                                     ReturnPointOptions const& options) {
    double const period = series_period(order, series, trajectory.rest_length());
    double const t0 = trajectory.motion_start();
    auto const rp = find_return_points(trajectory, period, t0, t0 + period, options);
    std::vector<double> out;
    for (double t : rp.times) {
        double const v = trajectory.state(t).velocity;
        out.push_back(std::abs(v) < 1 ? std::log1p(-v) - std::log1p(v)
                                      : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

std::vector<DetuningSample> scan_detuning(double rest_length, double amplitude, int order,
                                          std::vector<double> const& detuning_ratios,
                                          ReturnPointOptions const& options) {
    std::vector<DetuningSample> out;
    out.reserve(detuning_ratios.size());
    double const omega_n = resonant_frequency(order, rest_length);
    for (double x : detuning_ratios) {
        // dw / w = x with w = w_N + dw  =>  w = w_N / (1 - x).
        double const omega = omega_n / (1 - x);
        auto const traj = WallTrajectory::sinusoidal(rest_length, amplitude, omega);
        double const period = resonant_period(order, omega);
        auto const rp = find_return_points(traj, period, 0.0, period, options);
        DetuningSample s;
        s.detuning_ratio = x;
        s.return_points = rp.times.size();
        s.unstable = !rp.times.empty();
        for (double t : rp.times) {
            double const v = traj.state(t).velocity;
            s.max_exponent = std::max(s.max_exponent, std::log1p(-v) - std::log1p(v));
        }
        out.push_back(s);
    }
    return out;
}

WindowBound locate_window_edge(std::vector<DetuningSample> const& samples) {
    WindowBound edge;
    for (auto const& s : samples) {
        if (!s.unstable)
            continue;
        if (s.detuning_ratio >= 0)
            edge.upper = std::max(edge.upper, s.detuning_ratio);
        else
            edge.lower = std::max(edge.lower, -s.detuning_ratio);
    }
    return edge;
}

} // namespace dce
