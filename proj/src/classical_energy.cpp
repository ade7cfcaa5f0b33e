#include "dce/classical_energy.hpp"

#include "dce/errors.hpp"
#include "dce/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dce {

namespace {

// Fritsch–Carlson slopes on a uniform grid: monotone between monotone data.
std::vector<double> monotone_slopes(std::vector<double> const& y, double h) {
    std::size_t const n = y.size();
    std::vector<double> d(n, 0.0);
    if (n < 2)
        return d;
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        delta[i] = (y[i + 1] - y[i]) / h;
    d.front() = delta.front();
    d.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0)
            d[i] = 0;
        else
            d[i] = 2 / (1 / delta[i - 1] + 1 / delta[i]); // harmonic mean, equal spacing
    }
    // One-sided end slopes with the usual sign/magnitude limiter.
    auto end_slope = [](double d0, double d1) {
        double s = 1.5 * d0 - 0.5 * d1;
        if (s * d0 <= 0)
            return 0.0;
        if (d0 * d1 <= 0 && std::abs(s) > 3 * std::abs(d0))
            return 3 * d0;
        return s;
    };
    if (n > 2) {
        d.front() = end_slope(delta[0], delta[1]);
        d.back() = end_slope(delta[n - 2], delta[n - 3]);
    }
    return d;
}

} // namespace

ProfileFunction ProfileFunction::from_amplitude(std::function<double(double)> const& amplitude, double begin,
                                                double end, std::size_t samples, Interpolation interpolation) {
    if (!(end > begin))
        throw ContractError("profile: seed interval must have end > begin");
    if (samples < 2)
        throw ContractError("profile: at least two samples are required");
    ProfileFunction p;
    p.begin_ = begin;
    p.end_ = end;
    p.step_ = (end - begin) / static_cast<double>(samples - 1);
    p.interpolation_ = interpolation;
    p.amplitude_.resize(samples);
    p.density_.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        double const a = amplitude(begin + p.step_ * static_cast<double>(i));
        if (!std::isfinite(a))
            throw ContractError("profile: non-finite amplitude sample");
        p.amplitude_[i] = a;
        p.density_[i] = a * a;
    }
    if (interpolation == Interpolation::CubicMonotone) {
        p.amplitude_slope_ = monotone_slopes(p.amplitude_, p.step_);
        p.density_slope_ = monotone_slopes(p.density_, p.step_);
    }
    return p;
}

ProfileFunction ProfileFunction::from_density(std::vector<double> density, double begin, double end,
                                              Interpolation interpolation) {
    if (!(end > begin))
        throw ContractError("profile: seed interval must have end > begin");
    if (density.size() < 2)
        throw ContractError("profile: at least two samples are required");
    for (double r : density)
        if (!(r >= 0) || !std::isfinite(r))
            throw ContractError("profile: density samples must be finite and non-negative");
    ProfileFunction p;
    p.begin_ = begin;
    p.end_ = end;
    p.step_ = (end - begin) / static_cast<double>(density.size() - 1);
    p.interpolation_ = interpolation;
    p.amplitude_.resize(density.size());
    std::transform(density.begin(), density.end(), p.amplitude_.begin(), [](double r) { return std::sqrt(r); });
    p.density_ = std::move(density);
    if (interpolation == Interpolation::CubicMonotone) {
        p.amplitude_slope_ = monotone_slopes(p.amplitude_, p.step_);
        p.density_slope_ = monotone_slopes(p.density_, p.step_);
    }
    return p;
}

ProfileFunction ProfileFunction::gaussian(double rest_length, double center, double width, double height,
                                          double motion_start, std::size_t samples,
                                          Interpolation interpolation) {
    if (!(width > 0))
        throw ContractError("gaussian seed: width must be positive");
    auto amp = [=](double tau) {
        double const z = (tau - center) / width;
        return height * std::exp(-0.5 * z * z);
    };
    return from_amplitude(amp, motion_start - rest_length, motion_start + rest_length, samples, interpolation);
}

ProfileFunction ProfileFunction::uniform(double rest_length, double value, double motion_start) {
    if (!(value >= 0))
        throw ContractError("uniform seed: density must be non-negative");
    return from_density({value, value}, motion_start - rest_length, motion_start + rest_length,
                        Interpolation::Linear);
}

ProfileFunction ProfileFunction::single_mode(double rest_length, int mode, double motion_start,
                                             std::size_t samples, Interpolation interpolation) {
    if (mode < 1)
        throw ContractError("single-mode seed: mode number must be >= 1");
    double const k = mode * std::numbers::pi / rest_length;
    auto amp = [=](double tau) { return k * std::cos(k * tau); };
    return from_amplitude(amp, motion_start - rest_length, motion_start + rest_length, samples, interpolation);
}

double ProfileFunction::wrap(double tau) const {
    if (tau > end_) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "profile: tau=" << tau << " lies past the seed interval end " << end_;
        throw DomainError(msg.str());
    }
    if (tau >= begin_)
        return tau;
    double const shifts = std::ceil((begin_ - tau) / period());
    double const wrapped = tau + shifts * period();
    return std::min(wrapped, end_);
}

double ProfileFunction::interpolate(std::vector<double> const& values, std::vector<double> const& slopes,
                                    double tau) const {
    double const u = (tau - begin_) / step_;
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
    if (i >= values.size() - 1)
        i = values.size() - 2;
    double const s = u - static_cast<double>(i);
    if (interpolation_ == Interpolation::Linear || slopes.empty())
        return values[i] + s * (values[i + 1] - values[i]);
    double const s2 = s * s, s3 = s2 * s;
    double const h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double const h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * values[i] + h10 * step_ * slopes[i] + h01 * values[i + 1] + h11 * step_ * slopes[i + 1];
}

double ProfileFunction::density(double tau) const {
    return std::max(0.0, interpolate(density_, density_slope_, wrap(tau)));
}

double ProfileFunction::amplitude(double tau) const {
    return interpolate(amplitude_, amplitude_slope_, wrap(tau));
}

PullBack pull_back(OpticalMap const& map, double tau, double seed_end, std::size_t max_steps) {
    PullBack pb{tau, 0.0, 0};
    while (pb.seed_point > seed_end) {
        if (pb.steps >= max_steps) {
            std::ostringstream msg;
            msg << "pull-back from tau=" << tau << " did not reach the seed region within " << max_steps
                << " steps";
            throw DomainError(msg.str());
        }
        auto const b = map.retreat(pb.seed_point);
        if (!(b.time < pb.seed_point))
            throw DomainError("pull-back: map does not decrease the light-cone coordinate");
        pb.seed_point = b.time;
        pb.log_jacobian += b.log_factor;
        ++pb.steps;
    }
    return pb;
}

double density_at(ProfileFunction const& seed, OpticalMap const& map, double tau) {
    auto const pb = pull_back(map, tau, seed.end());
    return seed.density(pb.seed_point) * std::exp(2 * pb.log_jacobian);
}

double amplitude_at(ProfileFunction const& seed, OpticalMap const& map, double tau) {
    auto const pb = pull_back(map, tau, seed.end());
    return seed.amplitude(pb.seed_point) * std::exp(pb.log_jacobian);
}

double evolve_density(ProfileFunction const& seed, OpticalMap const& map, double tau, std::size_t n) {
    if (tau < seed.begin() || tau > seed.end())
        throw DomainError("evolve_density: tau must lie in the seed interval");
    return seed.density(tau) * std::exp(2 * log_cumulative_doppler(map, tau, n));
}

std::vector<double> density_field(ProfileFunction const& seed, BilliardMap const& map, double t,
                                  std::vector<double> const& x_grid) {
    double const wall = map.trajectory().position(t);
    double const slack = 1e-12 * wall;
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        if (x < -slack || x > wall + slack) {
            std::ostringstream msg;
            msg << "density_field: x=" << x << " lies outside the cavity [0, " << wall << "] at t=" << t;
            throw DomainError(msg.str());
        }
        out.push_back(density_at(seed, map, t + x) + density_at(seed, map, t - x));
    }
    return out;
}

FieldSample field_sample(ProfileFunction const& seed, OpticalMap const& map, double t, double x,
                         BoundaryCondition bc) {
    double const left = amplitude_at(seed, map, t + x);
    double const right = amplitude_at(seed, map, t - x);
    double const sign = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
    FieldSample s;
    s.dt = left + sign * right;
    s.dx = left - sign * right;
    s.energy_density = 0.5 * (s.dt * s.dt + s.dx * s.dx);
    return s;
}

namespace {

std::vector<double> window_breakpoints(ProfileFunction const& seed, OpticalMap const& map, double lo, double hi,
                                       std::size_t n, EnergyOptions const& options) {
    std::vector<double> points;
    double const period = seed.period();
    // Seed wrap points: kinks of the periodic extension.
    for (double p = seed.begin(); p > lo; p -= period)
        if (p < hi)
            points.push_back(p);
    for (double ref : options.refine_points) {
        double const k = std::floor((hi - ref) / period);
        for (double p = ref + k * period; p > lo - period; p -= period) {
            if (p > hi || p < lo)
                continue;
            double const w = options.refine_scale * std::exp(-std::abs(log_cumulative_doppler(map, p, n)));
            for (double q : {p - w, p, p + w})
                if (q > lo && q < hi)
                    points.push_back(q);
        }
    }
    return points;
}

} // namespace

EnergyResult window_energy(ProfileFunction const& seed, OpticalMap const& map, double tau1,
                           EnergyOptions const& options) {
    auto const pb = pull_back(map, tau1, seed.end());
    double const hi = pb.seed_point;
    double const lo = map.f(hi);
    std::size_t const n = pb.steps;
    auto integrand = [&](double s) {
        return seed.density(s) * std::exp(log_cumulative_doppler(map, s, n));
    };
    auto const q = integrate_or_throw(integrand, lo, hi, options.quadrature,
                                      window_breakpoints(seed, map, lo, hi, n, options));
    return {q.value, q.error, n, hi, q.evaluations};
}

EnergyResult total_energy(ProfileFunction const& seed, BilliardMap const& map, double t,
                          EnergyOptions const& options) {
    if (t < map.trajectory().motion_start() - seed.period())
        throw ContractError("total_energy: t lies before the seed window");
    return window_energy(seed, map, t + map.trajectory().position(t), options);
}

EnergyResult total_energy_direct(ProfileFunction const& seed, BilliardMap const& map, double t,
                                 QuadratureOptions const& options) {
    double const wall = map.trajectory().position(t);
    double const lo = t - wall, hi = t + wall;
    // Kinks of the density sit on the forward images of the seed edges.
    std::vector<double> breaks;
    for (double edge : {seed.begin(), seed.end()}) {
        double p = edge;
        for (int guard = 0; guard < 1'000'000 && p < hi; ++guard) {
            if (p > lo)
                breaks.push_back(p);
            p = map.f_inv(p);
        }
    }
    auto const q = integrate_or_throw([&](double tau) { return density_at(seed, map, tau); }, lo, hi, options,
                                      breaks);
    return {q.value, q.error, 0, hi, q.evaluations};
}

EnergyResult bounce_energy(ProfileFunction const& seed, OpticalMap const& map, std::size_t n,
                           EnergyOptions const& options) {
    double const hi = seed.end();
    double const lo = map.f(hi);
    auto integrand = [&](double s) {
        return seed.density(s) * std::exp(log_cumulative_doppler(map, s, n));
    };
    auto const q = integrate_or_throw(integrand, lo, hi, options.quadrature,
                                      window_breakpoints(seed, map, lo, hi, n, options));
    return {q.value, q.error, n, hi, q.evaluations};
}

PeakProfile asymptotic_peak_profile(ProfileFunction const& seed, OpticalMap const& map, double tau_plus,
                                    std::vector<double> const& eps_grid, std::size_t n) {
    auto const orbit = trace(map, tau_plus, n);
    double const centre = orbit.final_time();
    double const shrink = std::exp(-orbit.final_log_doppler());
    PeakProfile out;
    for (double eps : eps_grid) {
        double const s = tau_plus + eps;
        out.times.push_back(centre + eps * shrink);
        out.predicted.push_back(seed.density(s) * std::exp(2 * log_cumulative_doppler(map, s, n)));
        out.exact.push_back(density_at(seed, map, out.times.back()));
    }
    return out;
}

PeakShape measure_peak(ProfileFunction const& seed, OpticalMap const& map, double guess, std::size_t n,
                       double halfwidth) {
    double const lo = guess - halfwidth;
    double const hi = std::min(guess + halfwidth, seed.end());
    auto log_height = [&](double s) {
        double const r = seed.density(s);
        return r > 0 ? std::log(r) + 2 * log_cumulative_doppler(map, s, n)
                     : -std::numeric_limits<double>::infinity();
    };

    constexpr int grid = 256;
    double const h = (hi - lo) / grid;
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double const v = log_height(lo + h * i);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }

    // Golden-section refinement around the best grid point.
    double a = lo + h * std::max(0, best - 1), b = lo + h * std::min(grid, best + 1);
    double const g = 0.5 * (std::sqrt(5.0) - 1);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = log_height(c), fd = log_height(d);
    while (b - a > 1e-13 * std::max(1.0, std::abs(a))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = log_height(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = log_height(d);
        }
    }
    double const peak = 0.5 * (a + b);
    double const top = std::max(log_height(peak), best_value);
    double const half = top - std::log(2.0);

    auto half_point = [&](double direction) {
        double inside = peak;
        double step = h;
        for (double outside = peak + direction * step;; outside = inside + direction * step) {
            if (outside < lo || outside > hi)
                throw NumericError("measure_peak: half maximum not reached inside the search window");
            if (log_height(outside) < half)
                return bisect_sign_change([&](double s) { return log_height(s) - half; },
                                          std::min(inside, outside), std::max(inside, outside), 1e-14);
            inside = outside;
        }
    };
    double const left = half_point(-1.0), right = half_point(1.0);

    PeakShape shape;
    shape.seed_point = peak;
    shape.height = std::exp(top);
    shape.position = trace(map, peak, n).final_time();
    shape.width = trace(map, right, n).final_time() - trace(map, left, n).final_time();
    return shape;
}

std::size_t count_local_maxima(std::vector<double> const& values, double relative_floor) {
    if (values.empty())
        return 0;
    double const top = *std::max_element(values.begin(), values.end());
    double const floor = relative_floor * top;
    std::size_t const n = values.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] < floor || n == 1)
            continue;
        // Walk across plateaus so flat tops count once.
        std::size_t j = i;
        while (j + 1 < n && values[j + 1] == values[i])
            ++j;
        bool const left_ok = i == 0 || values[i - 1] < values[i];
        bool const right_ok = j == n - 1 || values[j + 1] < values[i];
        if (left_ok && right_ok)
            ++count;
        i = j;
    }
    return count;
}

} // namespace dce
