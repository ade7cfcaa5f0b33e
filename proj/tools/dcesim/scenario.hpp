#pragma once

#include "config.hpp"

#include <dce/classical_energy.hpp>
#include <dce/quadrature.hpp>
#include <dce/trajectory.hpp>
#include <dce/twowall.hpp>

#include <optional>
#include <string>

namespace dcesim {

enum class Analysis { BilliardTable, Trace, Resonance, ClassicalEnergy, QuantumEnergy, DensityMap, TwoWallModes };

std::string to_string(Analysis analysis);
Analysis parse_analysis(std::string const& name);

struct WallSpec {
    std::string kind = "sinusoidal"; // static | sinusoidal
    double rest_length = 1.0;
    double amplitude = 0.01;
    int order = 2;                 // N, resonance order used for w_N and T
    double omega = 0;              // resolved angular frequency
    double phase = 0;
    double motion_start = 0;
};

struct SeedSpec {
    std::string kind = "gaussian"; // gaussian | uniform | mode
    double center = 0;
    double width = 0.05;
    double amplitude = 1.0;
    int mode = 1;
    std::size_t samples = 4097;
    dce::Interpolation interpolation = dce::Interpolation::CubicMonotone;
};

struct CavitySpec {
    double rest_length = 1.0;
    double dL1 = 0.01;
    double dL2 = 0.01;
    double omega_left = 0;  // resolved
    double omega_right = 0; // resolved
    double delta = 0;
    int order = 1;
    std::string mode = "harmonic"; // harmonic | breathing | translational
};

struct NumericSpec {
    double tau = 0;
    std::size_t n = 100;
    std::size_t periods = 20;
    double t_max = 40;
    std::size_t nx = 400;
    std::size_t nt = 400;
    double tau_min = -2;
    double tau_max = 2;
    std::size_t points = 401;
    std::size_t n_probe = 200;
    double scan_min = -0.02;
    double scan_max = 0.02;
    std::size_t scan_points = 81;
    bool scan = false;
    std::string field = "classical"; // classical | quantum
    dce::QuadratureOptions quadrature{};
};

struct Scenario {
    int schema = 1;
    std::string name = "scenario";
    Analysis analysis = Analysis::ClassicalEnergy;
    std::string output_dir = "out";
    WallSpec wall;
    SeedSpec seed;
    std::optional<CavitySpec> cavity2;
    NumericSpec numeric;
    Config config; // the merged input, echoed into the metadata

    dce::WallTrajectory trajectory() const;
    dce::ProfileFunction seed_profile() const;
    dce::TwoWallCavity two_wall() const;
    /// Round-trip period 2 pi N / w of the resonance under study (2L for static walls).
    double period() const;
};

/// Builds a scenario from a merged config and checks every physical
/// constraint up front. Throws ConfigError naming the offending field.
Scenario make_scenario(Config const& config);

} // namespace dcesim
