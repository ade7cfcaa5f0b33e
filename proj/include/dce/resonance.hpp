#pragma once

#include "dce/billiard.hpp"
#include "dce/trajectory.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace dce {

enum class TrajectorySign { Positive, Negative, Neutral };

std::string_view to_string(TrajectorySign sign);

/// Per-period exponent below which a periodic trajectory counts as neutral.
inline constexpr double neutral_exponent_threshold = 1e-10;

struct PeriodicTrajectory {
    double start = 0;        // tau_0, light-cone coordinate at x = 0
    double return_point = 0; // wall-collision time of the first round trip
    double period = 0;       // T
    TrajectorySign sign = TrajectorySign::Neutral;
    double exponent = 0;     // log D_n / n, per period T
    int series_index = 0;    // 0 for the principal series
    double residual = 0;     // max |T_k - tau_0 - k T| over the checked steps
};

struct ReturnPointOptions {
    int samples_per_period = 4096;
    int periodicity_checks = 3;   // K: L(t* + k T) = T/2 for k = 1..K
    double tolerance = 1e-13;     // bisection tolerance on t*
    double residual_tolerance = 1e-9; // on |L - T/2|, relative to T/2
};

struct ReturnPoints {
    std::vector<double> times;
    bool degenerate = false; // L(t) == T/2 identically on the interval
};

/// Roots in [lo, hi) of `residual` that also vanish at t + k T, k = 1..K.
///
/// The interval is sampled with `samples_per_period` points per
/// `sample_period`; sign changes are refined by bisection. `level_scale`
/// sets the absolute residual tolerance (times options.residual_tolerance).
ReturnPoints find_periodic_roots(std::function<double(double)> const& residual, double period,
                                 double sample_period, double lo, double hi, double level_scale,
                                 ReturnPointOptions const& options = {});

/// Solutions t* in [lo, hi) of L(t*) = T/2 that repeat with period T.
ReturnPoints find_return_points(WallTrajectory const& trajectory, double period, double lo, double hi,
                                ReturnPointOptions const& options = {});

struct ClassifyOptions {
    int residual_steps = 3;
    double residual_tolerance = 1e-8;
};

/// Classifies the periodic trajectory starting at tau_0 with period T.
///
/// The orbit is first ray-traced for a few steps to confirm periodicity.
/// The exponent is then accumulated from Doppler factors pinned to the orbit
/// times tau_0 + k T, which stays accurate for repelling (negative) orbits
/// where long forward traces drift off.
PeriodicTrajectory classify(OpticalMap const& map, double start, double period, std::size_t n_probe,
                            ClassifyOptions const& options = {});

struct StartingPoints {
    std::vector<double> positive;
    std::vector<double> negative;
};

/// tau_{+m} = (-N + 2m + 1) L / N and tau_{-m} = (-N + 2m) L / N, m = 0..N-1.
StartingPoints principal_starting_points(int order, double rest_length);

/// w_N = N pi / L.
double resonant_frequency(int order, double rest_length);

/// Round-trip period of resonance-order orbits under drive frequency w: 2 pi N / w.
double resonant_period(int order, double angular_frequency);

/// Closed-form per-period Doppler exponent log((1+s)/(1-s)) for a
/// reflection speed s.
double doppler_exponent(double speed);

/// Detuning window: instability persists while |dw|/w is below the bound.
struct WindowBound {
    double upper = 0; // bound on dw/w for dw > 0
    double lower = 0; // bound on |dw|/w for dw < 0
};

/// One oscillating wall: |dw|/w < dL/L on both sides.
WindowBound resonance_window(double amplitude_ratio);

/// Dephased harmonic two-wall cavity. The window is asymmetric when
/// sin(delta) != 0: its edges are (A -/+ dL2 sin delta)/L with
/// A = sqrt(dL1^2 + dL2^2 + 2 (-1)^N dL1 dL2 cos delta).
WindowBound two_wall_resonance_window(double dL1, double dL2, double delta, int order, double rest_length);

/// Condition dL/L + (1 + 1/N) dw/w > 1/N under which the detuned picture
/// has a single series of peaks.
bool single_series_condition(int order, double amplitude_ratio, double detuning_ratio);

struct SeriesExponent {
    int series = 0;        // M (0 = principal)
    double speed = 0;      // s_M = sqrt((w_N dL)^2 - (M pi)^2); s_0 = w_N dL
    double exponent = 0;   // log((1+s)/(1-s)), NaN when s >= 1
    bool subluminal = false;
};

struct PeakCensus {
    int order = 0;
    double amplitude_ratio = 0;
    double wall_speed = 0;   // w_N dL, the maximal wall speed
    int num_series = 0;      // 1 + #{M >= 1 : dL/L > M/N}
    std::vector<SeriesExponent> series; // ordered by decreasing exponent
};

/// Closed-form census of peak series for the sinusoidal model at w = w_N.
/// Additional series need w_N dL > M pi > 1, so they only exist for
/// superluminal wall motion; their exponents are reported where s_M < 1.
PeakCensus peak_census(int order, double amplitude_ratio);

/// Return-point counterpart of a census series: T/2 = (N + M) L / N.
double series_period(int order, int series, double rest_length);

/// Per-period Doppler exponents log((1-v)/(1+v)) at the return points of
/// census series M, read off the wall velocity v at each return point.
std::vector<double> series_exponents(WallTrajectory const& trajectory, int order, int series,
                                     ReturnPointOptions const& options = {});

struct ResonanceReport {
    int order = 0;
    std::vector<PeriodicTrajectory> trajectories;
    WindowBound window;
    int peak_count_per_series = 0;
    int num_series = 1;
    bool degenerate = false;
};

/// Detects and classifies all periodic trajectories of period 2 pi N / w over
/// one period of the drive after the motion starts.
ResonanceReport analyze_resonance(BilliardMap const& map, int order, std::size_t n_probe = 200,
                                  ReturnPointOptions const& options = {});

struct DetuningSample {
    double detuning_ratio = 0; // dw / w
    bool unstable = false;
    std::size_t return_points = 0;
    double max_exponent = 0;
};

/// Return-point existence scan for L + dL sin(w t) over detunings
/// x = dw / w, with w = w_N + dw.
std::vector<DetuningSample> scan_detuning(double rest_length, double amplitude, int order,
                                          std::vector<double> const& detuning_ratios,
                                          ReturnPointOptions const& options = {});

/// Largest scanned |dw|/w that is still unstable, per side.
WindowBound locate_window_edge(std::vector<DetuningSample> const& samples);

} // namespace dce
