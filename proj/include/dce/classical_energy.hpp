#pragma once

#include "dce/billiard.hpp"
#include "dce/quadrature.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace dce {

enum class Interpolation { Linear, CubicMonotone };

enum class BoundaryCondition { Dirichlet, Neumann };

/// Sampled seed profile of a classical field on one light-crossing interval.
///
/// The profile stores the signed amplitude phi'(tau) and the density
/// rho = phi'^2 on a uniform grid over [begin, end]. The seed is the field
/// of the static past, so below `begin` it repeats with period end - begin.
/// Points past `end` are not part of the seed; use the pull-back functions.
class ProfileFunction {
public:
    /// Samples `amplitude` at `samples` equally spaced points of [begin, end].
    static ProfileFunction from_amplitude(std::function<double(double)> const& amplitude, double begin,
                                          double end, std::size_t samples = 4097,
                                          Interpolation interpolation = Interpolation::CubicMonotone);

    /// Equally spaced density samples over [begin, end]; rho must be >= 0.
    /// The amplitude is taken as sqrt(rho).
    static ProfileFunction from_density(std::vector<double> density, double begin, double end,
                                        Interpolation interpolation = Interpolation::CubicMonotone);

    /// phi' = height exp(-(tau - center)^2 / (2 width^2)) on [t0 - L, t0 + L].
    static ProfileFunction gaussian(double rest_length, double center, double width, double height = 1.0,
                                    double motion_start = 0.0, std::size_t samples = 4097,
                                    Interpolation interpolation = Interpolation::CubicMonotone);

    /// rho = value on [t0 - L, t0 + L].
    static ProfileFunction uniform(double rest_length, double value = 1.0, double motion_start = 0.0);

    /// phi = sin(k pi tau / L), so rho = (k pi / L)^2 cos^2(k pi tau / L).
    static ProfileFunction single_mode(double rest_length, int mode, double motion_start = 0.0,
                                       std::size_t samples = 4097,
                                       Interpolation interpolation = Interpolation::CubicMonotone);

    double begin() const noexcept { return begin_; }
    double end() const noexcept { return end_; }
    double period() const noexcept { return end_ - begin_; }
    Interpolation interpolation() const noexcept { return interpolation_; }
    std::size_t size() const noexcept { return density_.size(); }

    /// Seed density at tau <= end (periodic below begin).
    double density(double tau) const;
    /// Seed amplitude phi'(tau) at tau <= end.
    double amplitude(double tau) const;

private:
    ProfileFunction() = default;
    double wrap(double tau) const;
    double interpolate(std::vector<double> const& values, std::vector<double> const& slopes, double tau) const;

    double begin_ = 0;
    double end_ = 0;
    double step_ = 0;
    Interpolation interpolation_ = Interpolation::Linear;
    std::vector<double> density_, density_slope_;
    std::vector<double> amplitude_, amplitude_slope_;
};

/// Result of pulling a light-cone coordinate back into the seed region.
struct PullBack {
    double seed_point = 0;   // f^k(tau) <= end
    double log_jacobian = 0; // log d f^k / d tau
    std::size_t steps = 0;   // k
};

/// Iterates f until the point lands at or below `seed_end`.
PullBack pull_back(OpticalMap const& map, double tau, double seed_end, std::size_t max_steps = 1'000'000);

/// rho(tau) at any light-cone coordinate: rho0(f^k tau) (d f^k / d tau)^2.
double density_at(ProfileFunction const& seed, OpticalMap const& map, double tau);

/// phi'(tau) at any light-cone coordinate.
double amplitude_at(ProfileFunction const& seed, OpticalMap const& map, double tau);

/// rho(T_n(tau)) = rho0(tau) D_n(tau)^2 for tau inside the seed interval.
double evolve_density(ProfileFunction const& seed, OpticalMap const& map, double tau, std::size_t n);

/// T00(t, x) = rho(t + x) + rho(t - x) for x in [0, L(t)].
std::vector<double> density_field(ProfileFunction const& seed, BilliardMap const& map, double t,
                                  std::vector<double> const& x_grid);

struct FieldSample {
    double dt = 0; // d_t A
    double dx = 0; // d_x A
    double energy_density = 0; // (d_t A^2 + d_x A^2) / 2
};

/// Field A = phi(t + x) -/+ phi(t - x) for Dirichlet/Neumann, and its energy density.
FieldSample field_sample(ProfileFunction const& seed, OpticalMap const& map, double t, double x,
                         BoundaryCondition bc);

struct EnergyOptions {
    QuadratureOptions quadrature{};
    /// Points (e.g. periodic-trajectory starts) near which the quadrature is
    /// forced to subdivide; shifted by multiples of the seed period.
    std::vector<double> refine_points;
    double refine_scale = 10.0; // half-width: scale * min(D_n, 1/D_n) at each point
};

struct EnergyResult {
    double value = 0;
    double error = 0;
    std::size_t pullbacks = 0; // n such that tau0 = f^n(t + L(t)) lies in the seed region
    double tau0 = 0;
    std::size_t evaluations = 0;
};

/// Total energy on the window [f(tau1), tau1] of the light-cone line, i.e.
/// at time t with tau1 = t + L(t), through the Doppler-weighted seed
/// integral int rho0(s) D_n(s) ds over [f(tau0), tau0].
EnergyResult window_energy(ProfileFunction const& seed, OpticalMap const& map, double tau1,
                           EnergyOptions const& options = {});

/// E(t) for the single-wall cavity via the Doppler-weighted seed integral.
EnergyResult total_energy(ProfileFunction const& seed, BilliardMap const& map, double t,
                          EnergyOptions const& options = {});

/// E(t) by direct quadrature of the pulled-back density over [t - L(t), t + L(t)].
EnergyResult total_energy_direct(ProfileFunction const& seed, BilliardMap const& map, double t,
                                 QuadratureOptions const& options = {});

/// Energy after n round trips of the seed window [begin, end]:
/// int_begin^end rho0 D_n.
EnergyResult bounce_energy(ProfileFunction const& seed, OpticalMap const& map, std::size_t n,
                           EnergyOptions const& options = {});

struct PeakProfile {
    std::vector<double> times;     // T_n(tau+) + eps D_n(tau+)^-1
    std::vector<double> predicted; // rho0(tau+ + eps) D_n(tau+ + eps)^2
    std::vector<double> exact;     // pulled-back density at `times`
};

/// Long-time shape of the peak grown from a positive trajectory start.
PeakProfile asymptotic_peak_profile(ProfileFunction const& seed, OpticalMap const& map, double tau_plus,
                                    std::vector<double> const& eps_grid, std::size_t n);

struct PeakShape {
    double seed_point = 0; // argmax of rho0 D_n^2 over the seed coordinate
    double position = 0;   // T_n(seed_point)
    double height = 0;
    double width = 0;      // full width at half maximum, in light-cone time
};

/// Height and FWHM of the peak at round trip n that grows from seed
/// coordinates within `halfwidth` of `guess`.
PeakShape measure_peak(ProfileFunction const& seed, OpticalMap const& map, double guess, std::size_t n,
                       double halfwidth);

/// Local maxima of a sampled curve whose height exceeds `relative_floor`
/// times the global maximum. End points count when they exceed their
/// single neighbour.
std::size_t count_local_maxima(std::vector<double> const& values, double relative_floor = 0.05);

} // namespace dce
