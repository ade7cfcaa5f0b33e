#include "dce/twowall.hpp"

#include "dce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dce {

namespace {

constexpr double pi = std::numbers::pi;

double log_factor(double v) { return std::log1p(-v) - std::log1p(v); }

} // namespace

std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }

std::string_view to_string(TwoWallMode mode) {
    switch (mode) {
    case TwoWallMode::Harmonic: return "harmonic";
    case TwoWallMode::Breathing: return "breathing";
    case TwoWallMode::Translational: return "translational";
    case TwoWallMode::Custom: return "custom";
    }
    return "unknown";
}

TwoWallCavity::TwoWallCavity(WallTrajectory right, WallTrajectory left, TwoWallMode mode, BilliardOptions options)
    : mode_(mode), rest_length_(right.rest_length() + left.rest_length()) {
    if (std::abs(right.rest_length() - left.rest_length()) > 1e-14 * rest_length_)
        throw ContractError("two-wall cavity: both halves must have the same rest length L/2");
    if (right.motion_start() != left.motion_start())
        throw ContractError("two-wall cavity: both walls must start moving at the same time");
    if (options.root_tolerance <= 0)
        options.root_tolerance = 1e-12 * rest_length_;
    right_ = std::make_shared<BilliardMap>(std::move(right), options);
    left_ = std::make_shared<BilliardMap>(std::move(left), options);
    f_left_ = std::make_shared<ComposedMap>(left_, right_);
    f_right_ = std::make_shared<ComposedMap>(right_, left_);
}

TwoWallCavity TwoWallCavity::harmonic(double rest_length, double dL1, double dL2, double omega_right,
                                      double omega_left, double delta) {
    double const half = 0.5 * rest_length;
    return TwoWallCavity(WallTrajectory::two_wall_component(half, dL1, omega_right, 0.0),
                         WallTrajectory::two_wall_component(half, dL2, omega_left, delta), TwoWallMode::Harmonic);
}

TwoWallCavity TwoWallCavity::breathing(double rest_length, double amplitude, double omega) {
    double const half = 0.5 * rest_length;
    return TwoWallCavity(WallTrajectory::two_wall_component(half, amplitude, omega),
                         WallTrajectory::two_wall_component(half, amplitude, omega), TwoWallMode::Breathing);
}

TwoWallCavity TwoWallCavity::translational(double rest_length, double amplitude, double omega) {
    double const half = 0.5 * rest_length;
    // sin(w t - pi) + sin(pi) = -sin(w t).
    return TwoWallCavity(WallTrajectory::two_wall_component(half, amplitude, omega),
                         WallTrajectory::two_wall_component(half, amplitude, omega, pi),
                         TwoWallMode::Translational);
}

double TwoWallCavity::static_end() const noexcept {
    return right_->trajectory().motion_start() + 0.5 * rest_length_;
}

BilliardMap const& TwoWallCavity::wall(int index) const {
    if (index == 1)
        return *right_;
    if (index == 2)
        return *left_;
    throw ContractError("two-wall cavity: wall index must be 1 (right) or 2 (left)");
}

std::shared_ptr<OpticalMap const> TwoWallCavity::side_map(Side side) const {
    if (side == Side::Left)
        return f_left_;
    return f_right_;
}

TwoWallPath trace_two_wall(TwoWallCavity const& cavity, Side side, double tau, std::size_t n) {
    // Left rays meet wall 2 then wall 1 on each round trip; right rays the reverse.
    auto const& first = cavity.wall(side == Side::Left ? 2 : 1);
    auto const& last = cavity.wall(side == Side::Left ? 1 : 2);
    TwoWallPath out;
    out.path.start = tau;
    double current = tau;
    double log_first = 0, log_last = 0;
    for (std::size_t k = 0; k < n; ++k) {
        auto const a = first.advance(current);
        auto const b = last.advance(a.time);
        current = b.time;
        log_first += a.log_factor;
        log_last += b.log_factor;
        out.path.times.push_back(current);
        out.path.collisions.push_back(b.collision);
        out.path.log_doppler.push_back(log_first + log_last);
        out.second_collisions.push_back(a.collision);
        out.log_doppler_last.push_back(log_last);
        out.log_doppler_other.push_back(log_first);
    }
    return out;
}

MatchedTimes match(TwoWallCavity const& cavity, Side side, double t1) {
    auto const& w1 = cavity.wall(1);
    auto const& w2 = cavity.wall(2);
    auto const s1 = w1.trajectory().state(t1);
    MatchedTimes m;
    m.t1 = t1;
    if (side == Side::Left) {
        // t + L = t1 + L1(t1),  t1 - L1(t1) = t2 + L2(t2).
        m.t2 = w2.retarded_time(t1 - s1.position);
        m.length = s1.position + w2.trajectory().position(m.t2);
        m.t = t1 + s1.position - m.length;
    } else {
        // t - L = t1 - L1(t1),  t1 + L1(t1) = t2 - L2(t2).
        m.t2 = w2.collision_time(t1 + s1.position);
        m.length = s1.position + w2.trajectory().position(m.t2);
        m.t = t1 - s1.position + m.length;
    }
    double const v2 = w2.trajectory().state(m.t2).velocity;
    m.doppler = std::exp(log_factor(s1.velocity) + log_factor(v2));
    return m;
}

WallTrajectory effective_trajectory(TwoWallCavity const& cavity, Side side, double horizon, int points_per_period) {
    if (points_per_period < 4)
        throw ContractError("effective trajectory: need at least 4 points per period");
    auto const& w1 = cavity.wall(1);
    auto const& w2 = cavity.wall(2);
    double const t0 = w1.trajectory().motion_start();
    double const half = 0.5 * cavity.rest_length();

    // Right-wall times at which one of the walls starts to move along the matched path.
    double onset1, onset2; // t1 at which wall 1 / wall 2 starts
    onset1 = t0;
    onset2 = side == Side::Left ? w1.collision_time(t0 + half) : w1.retarded_time(t0 - half);
    double const first = std::min(onset1, onset2), second = std::max(onset1, onset2);

    double period = cavity.rest_length();
    for (int i = 1; i <= 2; ++i) {
        auto const& tr = cavity.wall(i).trajectory();
        if (tr.angular_frequency() > 0 && tr.amplitude() > 0)
            period = std::min(period, tr.drive_period());
    }
    double const h = period / points_per_period;

    std::vector<double> grid;
    auto const segments = static_cast<std::size_t>(std::max(1.0, std::ceil((second - first) / h)));
    for (std::size_t i = 0; i < segments; ++i)
        grid.push_back(first + (second - first) * static_cast<double>(i) / static_cast<double>(segments));
    double const t1_end = horizon + cavity.rest_length() + h;
    for (double t1 = second; t1 <= t1_end + h; t1 += h)
        grid.push_back(t1);

    std::vector<double> times, positions, slope_left, slope_right;
    times.reserve(grid.size());
    auto slope_of = [](double doppler) { return (1 - doppler) / (1 + doppler); };
    for (double t1 : grid) {
        auto const m = match(cavity, side, t1);
        times.push_back(m.t);
        positions.push_back(m.length);
        double const right = slope_of(m.doppler);
        double left = right;
        bool const at1 = t1 == onset1, at2 = t1 == onset2;
        if (at1 || at2) {
            // Left limit: the wall that starts here was still at rest.
            double const v1 = at1 ? 0.0 : w1.trajectory().state(t1).velocity;
            double const v2 = at2 ? 0.0 : w2.trajectory().state(m.t2).velocity;
            left = slope_of(std::exp(log_factor(v1) + log_factor(v2)));
        }
        slope_left.push_back(left);
        slope_right.push_back(right);
    }
    positions.front() = cavity.rest_length();
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw NumericError("effective trajectory: matched times are not increasing");
    return WallTrajectory::tabulated_hermite(std::move(times), std::move(positions), std::move(slope_left),
                                             std::move(slope_right));
}

ReturnPoints two_wall_return_points(TwoWallCavity const& cavity, Side side, double period, double lo, double hi,
                                    ReturnPointOptions const& options) {
    auto const& l1 = cavity.wall(1).trajectory();
    auto const& l2 = cavity.wall(2).trajectory();
    double const half = 0.5 * period;
    double const shift = side == Side::Left ? -half : half;
    auto residual = [&](double t1) { return l1.position(t1) + l2.position(t1 + shift) - half; };
    double sample_period = period;
    for (auto const* tr : {&l1, &l2})
        if (tr->angular_frequency() > 0)
            sample_period = std::min(sample_period, tr->drive_period());
    return find_periodic_roots(residual, period, sample_period, lo, hi, half, options);
}

TwoWallExponentReport two_wall_exponents(TwoWallCavity const& cavity, int order, std::size_t n_probe,
                                         ReturnPointOptions const& options) {
    if (order < 1)
        throw ContractError("two-wall exponents: resonance order must be >= 1");
    auto const& l1 = cavity.wall(1).trajectory();
    auto const& l2 = cavity.wall(2).trajectory();
    double const omega = l1.angular_frequency() > 0 ? l1.angular_frequency() : l2.angular_frequency();
    TwoWallExponentReport report;
    report.order = order;
    report.period = omega > 0 ? resonant_period(order, omega) : cavity.rest_length() * 2;
    double const parity = order % 2 == 0 ? 1.0 : -1.0;
    double const omega_n = resonant_frequency(order, cavity.rest_length());
    report.closed_form = 2 * omega_n * std::abs(l1.amplitude() + parity * l2.amplitude() * std::cos(l2.phase()));

    double const T = report.period;
    double const t0 = l1.motion_start();
    for (Side side : {Side::Left, Side::Right}) {
        // One period after the onset so that both collisions are in the moving regime.
        auto const rp = two_wall_return_points(cavity, side, T, t0 + T, t0 + 2 * T, options);
        report.degenerate = report.degenerate || rp.degenerate;
        for (double t1 : rp.times) {
            TwoWallExponent e;
            e.side = side;
            e.t1 = t1;
            double const t2 = side == Side::Left ? t1 - 0.5 * T : t1 + 0.5 * T;
            auto const s1 = l1.state(t1);
            auto const s2 = l2.state(t2);
            e.exact = log_factor(s1.velocity) + log_factor(s2.velocity);
            e.small_amplitude = -2 * (s1.velocity + s2.velocity);
            // The orbit ends each round trip on wall 1 (left) or wall 2 (right).
            e.start = side == Side::Left ? t1 + s1.position - T : t2 + s2.position - T;
            e.traced = classify(*cavity.side_map(side), e.start, T, n_probe).exponent;
            if (e.exact > neutral_exponent_threshold)
                e.sign = TrajectorySign::Positive;
            else if (e.exact < -neutral_exponent_threshold)
                e.sign = TrajectorySign::Negative;
            report.trajectories.push_back(e);
        }
    }
    return report;
}

namespace {

void check_two_wall_seed(ProfileFunction const& seed, TwoWallCavity const& cavity) {
    if (seed.end() > cavity.static_end() + 1e-12 * cavity.rest_length())
        throw DomainError("two-wall seed must end at or before t0 + L/2");
    if (std::abs(seed.period() - 2 * cavity.rest_length()) > 1e-12 * cavity.rest_length())
        throw DomainError("two-wall seed must span one round trip 2L");
}

// Seed densities of both families below the static end.
double seed_density(ProfileFunction const& seed, TwoWallCavity const& cavity, Side side, double s) {
    return side == Side::Left ? seed.density(s) : seed.density(s - cavity.rest_length());
}

} // namespace

double two_wall_density(ProfileFunction const& seed, TwoWallCavity const& cavity, Side side, double tau) {
    check_two_wall_seed(seed, cavity);
    auto const pb = pull_back(*cavity.side_map(side), tau, seed.end());
    return seed_density(seed, cavity, side, pb.seed_point) * std::exp(2 * pb.log_jacobian);
}

std::vector<double> two_wall_density_field(ProfileFunction const& seed, TwoWallCavity const& cavity, double t,
                                           std::vector<double> const& x_grid) {
    double const right = cavity.wall(1).trajectory().position(t);
    double const left = cavity.wall(2).trajectory().position(t);
    double const slack = 1e-12 * cavity.rest_length();
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        if (x < -left - slack || x > right + slack) {
            std::ostringstream msg;
            msg << "two-wall density field: x=" << x << " lies outside [" << -left << ", " << right << "]";
            throw DomainError(msg.str());
        }
        out.push_back(two_wall_density(seed, cavity, Side::Left, t + x) +
                      two_wall_density(seed, cavity, Side::Right, t - x));
    }
    return out;
}

EnergyResult two_wall_energy(ProfileFunction const& seed, TwoWallCavity const& cavity, double t,
                             QuadratureOptions const& options) {
    check_two_wall_seed(seed, cavity);
    auto const fl = cavity.side_map(Side::Left);
    auto const fr = cavity.side_map(Side::Right);
    double const end = seed.end();

    double tau1 = t + cavity.wall(1).trajectory().position(t);
    double tau2 = t + cavity.wall(2).trajectory().position(t);
    std::size_t n = 0;
    while (tau1 > end || tau2 > end) {
        tau1 = fl->f(tau1);
        tau2 = fr->f(tau2);
        ++n;
    }

    auto family = [&](Side side, OpticalMap const& map, double lo, double hi) {
        double const shift = side == Side::Left ? 0.0 : cavity.rest_length();
        std::vector<double> breaks;
        for (double p = seed.begin() + shift; p > lo; p -= seed.period())
            if (p < hi)
                breaks.push_back(p);
        auto integrand = [&](double s) {
            return seed_density(seed, cavity, side, s) * std::exp(log_cumulative_doppler(map, s, n));
        };
        return integrate_or_throw(integrand, lo, hi, options, breaks);
    };
    auto const left = family(Side::Left, *fl, cavity.wall(2).f(tau2), tau1);
    auto const right = family(Side::Right, *fr, cavity.wall(1).f(tau1), tau2);
    return {left.value + right.value, left.error + right.error, n, tau1, left.evaluations + right.evaluations};
}

EnergyResult two_wall_energy_direct(ProfileFunction const& seed, TwoWallCavity const& cavity, double t,
                                    QuadratureOptions const& options) {
    check_two_wall_seed(seed, cavity);
    double const l1 = cavity.wall(1).trajectory().position(t);
    double const l2 = cavity.wall(2).trajectory().position(t);
    auto family = [&](Side side, double lo, double hi) {
        auto const map = cavity.side_map(side);
        std::vector<double> breaks;
        for (double edge : {cavity.static_end(), cavity.static_end() - 0.5 * cavity.rest_length()}) {
            double p = edge;
            for (int guard = 0; guard < 1'000'000 && p < hi; ++guard) {
                if (p > lo)
                    breaks.push_back(p);
                p = map->f_inv(p);
            }
        }
        return integrate_or_throw([&](double tau) { return two_wall_density(seed, cavity, side, tau); }, lo, hi,
                                  options, breaks);
    };
    auto const left = family(Side::Left, t - l2, t + l1);
    auto const right = family(Side::Right, t - l1, t + l2);
    return {left.value + right.value, left.error + right.error, 0, t + l1, left.evaluations + right.evaluations};
}

ProfileFunction two_wall_gaussian_seed(double rest_length, double center, double width, double height,
                                       std::size_t samples) {
    if (!(width > 0))
        throw ContractError("gaussian seed: width must be positive");
    auto amp = [=](double tau) {
        double const z = (tau - center) / width;
        return height * std::exp(-0.5 * z * z);
    };
    return ProfileFunction::from_amplitude(amp, -1.5 * rest_length, 0.5 * rest_length, samples);
}

} // namespace dce
