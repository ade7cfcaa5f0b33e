#pragma once

#include "dce/billiard.hpp"
#include "dce/classical_energy.hpp"
#include "dce/resonance.hpp"
#include "dce/trajectory.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace dce {

/// Ray families of a two-wall cavity.
///
/// Left rays are labelled by their light-cone coordinate t + x at x = 0 and
/// move left: one round trip hits the left wall x = -L2 first and ends on
/// the right wall x = L1, so f_L = f2 ∘ f1 pulls them back. Right rays are
/// the mirror image, f_R = f1 ∘ f2.
///
///        -L2(t)            0             L1(t)
///          |<-- left ray ---|               |
///          |--------------->|-------------->|   T**: hit on x = -L2
///          |                |<--------------|   T* : hit on x = L1
enum class Side { Left, Right };

enum class TwoWallMode { Harmonic, Breathing, Translational, Custom };

std::string_view to_string(Side side);
std::string_view to_string(TwoWallMode mode);

/// Cavity between x = -L2(t) and x = L1(t), static with L1 = L2 = L/2 in the past.
class TwoWallCavity {
public:
    TwoWallCavity(WallTrajectory right, WallTrajectory left, TwoWallMode mode = TwoWallMode::Custom,
                  BilliardOptions options = {});

    /// L1 = L/2 + dL1 sin(wR t),  L2 = L/2 + dL2 sin(wL t - delta) + dL2 sin(delta).
    static TwoWallCavity harmonic(double rest_length, double dL1, double dL2, double omega_right,
                                  double omega_left, double delta);
    /// L1 = L2 = L/2 + dL sin(w t).
    static TwoWallCavity breathing(double rest_length, double amplitude, double omega);
    /// L1 = L/2 + dL sin(w t),  L2 = L/2 - dL sin(w t): the cavity moves rigidly.
    static TwoWallCavity translational(double rest_length, double amplitude, double omega);

    TwoWallMode mode() const noexcept { return mode_; }
    double rest_length() const noexcept { return rest_length_; }
    /// t0 + L/2: rays at or below this coordinate only meet static walls.
    double static_end() const noexcept;

    /// Wall 1 is the right wall x = L1(t), wall 2 the left wall x = -L2(t).
    BilliardMap const& wall(int index) const;
    std::shared_ptr<OpticalMap const> side_map(Side side) const;

    double f_i(int index, double tau) const { return wall(index).f(tau); }
    double f_side(Side side, double tau) const { return side_map(side)->f(tau); }

private:
    TwoWallMode mode_;
    double rest_length_;
    std::shared_ptr<BilliardMap const> right_, left_;
    std::shared_ptr<ComposedMap const> f_left_, f_right_;
};

/// Ray path of one family. `collisions` holds T*_k (the last wall hit of
/// round trip k), `second_collisions` holds T**_k (the other wall).
struct TwoWallPath {
    RayPath path;
    std::vector<double> second_collisions;
    std::vector<double> log_doppler_last;  // running sum of log factors at T*
    std::vector<double> log_doppler_other; // running sum at T**
};

TwoWallPath trace_two_wall(TwoWallCavity const& cavity, Side side, double tau, std::size_t n);

/// Tabulated single-wall trajectory whose billiard function is f_L or f_R.
///
/// Built on a uniform grid in the right-wall collision time t1 with
/// `points_per_period` nodes per drive period, up to effective time
/// `horizon`. The velocity kinks at the onsets of both walls sit on nodes.
WallTrajectory effective_trajectory(TwoWallCavity const& cavity, Side side, double horizon,
                                    int points_per_period = 4096);

/// Matched collision times of the effective trajectory at right-wall time t1.
struct MatchedTimes {
    double t = 0;  // effective time
    double t1 = 0; // right-wall collision
    double t2 = 0; // left-wall collision
    double length = 0;  // L(t) = L1(t1) + L2(t2)
    double doppler = 0; // product of both wall factors at t1, t2
};

MatchedTimes match(TwoWallCavity const& cavity, Side side, double t1);

/// Right-wall collision times t1 with L1(t1) + L2(t1 -/+ T/2) = T/2
/// (left/right family) that repeat with period T.
ReturnPoints two_wall_return_points(TwoWallCavity const& cavity, Side side, double period, double lo,
                                    double hi, ReturnPointOptions const& options = {});

struct TwoWallExponent {
    Side side = Side::Left;
    double t1 = 0;          // right-wall collision time
    double start = 0;       // tau0 of the periodic ray
    double exact = 0;       // log of the per-period two-factor product
    double small_amplitude = 0; // -2 [wR dL1 cos(wR t1) + wL dL2 cos(wL t2 - delta)]
    double traced = 0;      // ray-traced exponent at the pinned orbit
    TrajectorySign sign = TrajectorySign::Neutral;
};

struct TwoWallExponentReport {
    int order = 0;
    double period = 0;
    double closed_form = 0; // 2 wN |dL1 + (-1)^N dL2 cos(delta)|
    bool degenerate = false;
    std::vector<TwoWallExponent> trajectories;
};

/// Periodic trajectories of both families for the harmonic model at
/// resonance order N (period T = 2 pi N / wR), with their exponents.
TwoWallExponentReport two_wall_exponents(TwoWallCavity const& cavity, int order, std::size_t n_probe = 100,
                                         ReturnPointOptions const& options = {});

/// Density of one ray family. The left-family seed is `seed`; the static
/// past fixes the right family as rho_R(s) = rho_L(s - L).
double two_wall_density(ProfileFunction const& seed, TwoWallCavity const& cavity, Side side, double tau);

/// T00(t, x) = rho_L(t + x) + rho_R(t - x) for x in [-L2(t), L1(t)].
std::vector<double> two_wall_density_field(ProfileFunction const& seed, TwoWallCavity const& cavity, double t,
                                           std::vector<double> const& x_grid);

/// E(t) from the Doppler-weighted seed integrals of both families.
EnergyResult two_wall_energy(ProfileFunction const& seed, TwoWallCavity const& cavity, double t,
                             QuadratureOptions const& options = {});

/// E(t) by direct quadrature of both densities over the cavity.
EnergyResult two_wall_energy_direct(ProfileFunction const& seed, TwoWallCavity const& cavity, double t,
                                    QuadratureOptions const& options = {});

/// Gaussian seed phi'_L on the two-wall seed window [t0 - 3L/2, t0 + L/2].
ProfileFunction two_wall_gaussian_seed(double rest_length, double center, double width, double height = 1.0,
                                       std::size_t samples = 4097);

} // namespace dce
