#include "scenario.hpp"

#include <dce/errors.hpp>
#include <dce/resonance.hpp>

#include <algorithm>
#include <cmath>
#include <tuple>
#include <numbers>

namespace dcesim {

namespace {

constexpr std::pair<Analysis, char const*> analysis_names[] = {
    {Analysis::BilliardTable, "billiard-table"}, {Analysis::Trace, "trace"},
    {Analysis::Resonance, "resonance"},          {Analysis::ClassicalEnergy, "classical-energy"},
    {Analysis::QuantumEnergy, "quantum-energy"}, {Analysis::DensityMap, "density-map"},
    {Analysis::TwoWallModes, "twowall-modes"},
};

std::vector<std::string> const allowed_keys = {
    "schema", "name", "analysis", "output_dir",
    "wall.kind", "wall.L", "wall.dL", "wall.dL_over_L", "wall.N", "wall.omega", "wall.omega_over_omegaN",
    "wall.phase", "wall.t0",
    "seed.kind", "seed.center", "seed.width", "seed.amplitude", "seed.k", "seed.samples", "seed.interpolation",
    "cavity2.L", "cavity2.dL1", "cavity2.dL2", "cavity2.omegaL", "cavity2.omegaR", "cavity2.delta",
    "cavity2.mode", "cavity2.N",
    "numeric.tau", "numeric.n", "numeric.periods", "numeric.t_max", "numeric.nx", "numeric.nt",
    "numeric.tau_min", "numeric.tau_max", "numeric.points", "numeric.n_probe", "numeric.scan",
    "numeric.scan_min", "numeric.scan_max", "numeric.scan_points", "numeric.field",
    "numeric.abs_tol", "numeric.rel_tol", "numeric.max_depth",
    "quantum.normalization",
};

void require(bool ok, Config const& c, std::string const& key, std::string const& what) {
    if (!ok)
        throw ConfigError(c.where(key) + ": " + key + ": " + what);
}

std::size_t count(Config const& c, std::string const& key, long fallback, long minimum) {
    long const v = c.integer_or(key, fallback);
    require(v >= minimum, c, key, "must be >= " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
}

std::string choice(Config const& c, std::string const& key, std::string const& fallback,
                   std::vector<std::string> const& options) {
    std::string const v = c.text_or(key, fallback);
    for (auto const& o : options)
        if (v == o)
            return v;
    std::string list;
    for (auto const& o : options)
        list += (list.empty() ? "" : ", ") + o;
    throw ConfigError(c.where(key) + ": " + key + ": expected one of {" + list + "}, got '" + v + "'");
}

bool flag(Config const& c, std::string const& key) {
    std::string const v = choice(c, key, "false", {"true", "false", "1", "0", "yes", "no"});
    return v == "true" || v == "1" || v == "yes";
}

} // namespace

std::string to_string(Analysis analysis) {
    for (auto const& [a, name] : analysis_names)
        if (a == analysis)
            return name;
    return "unknown";
}

Analysis parse_analysis(std::string const& name) {
    for (auto const& [a, n] : analysis_names)
        if (name == n)
            return a;
    std::string list;
    for (auto const& [a, n] : analysis_names)
        list += (list.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("analysis: expected one of {" + list + "}, got '" + name + "'");
}

Scenario make_scenario(Config const& c) {
    c.check_keys(allowed_keys);
    Scenario s;
    s.config = c;
    s.schema = static_cast<int>(c.integer_or("schema", 1));
    require(s.schema == 1, c, "schema", "unsupported schema version (this build reads schema 1)");
    s.name = c.text_or("name", s.name);
    try {
        s.analysis = parse_analysis(c.text_or("analysis", to_string(s.analysis)));
    } catch (ConfigError const& e) {
        throw ConfigError(c.where("analysis") + ": " + e.what());
    }
    s.output_dir = c.text_or("output_dir", s.output_dir);

    auto& w = s.wall;
    w.kind = choice(c, "wall.kind", w.kind, {"static", "sinusoidal"});
    w.rest_length = c.number_or("wall.L", w.rest_length);
    require(w.rest_length > 0, c, "wall.L", "rest length must be positive");
    require(!(c.has("wall.dL") && c.has("wall.dL_over_L")), c, "wall.dL", "give either dL or dL_over_L, not both");
    w.amplitude = c.has("wall.dL_over_L") ? c.number_or("wall.dL_over_L", 0) * w.rest_length
                                          : c.number_or("wall.dL", w.amplitude);
    w.order = static_cast<int>(c.integer_or("wall.N", w.order));
    require(w.order >= 1, c, "wall.N", "resonance order must be >= 1");
    require(!(c.has("wall.omega") && c.has("wall.omega_over_omegaN")), c, "wall.omega",
            "give either omega or omega_over_omegaN, not both");
    double const omega_n = dce::resonant_frequency(w.order, w.rest_length);
    w.omega = c.has("wall.omega") ? c.number_or("wall.omega", 0) : c.number_or("wall.omega_over_omegaN", 1.0) * omega_n;
    w.phase = c.number_or("wall.phase", w.phase);
    w.motion_start = c.number_or("wall.t0", w.motion_start);
    if (w.kind == "sinusoidal") {
        require(w.amplitude >= 0, c, c.has("wall.dL") ? "wall.dL" : "wall.dL_over_L", "amplitude must be >= 0");
        require(w.amplitude < w.rest_length, c, c.has("wall.dL") ? "wall.dL" : "wall.dL_over_L",
                "amplitude must be below the rest length so that L(t) > 0");
        require(w.omega > 0, c, c.has("wall.omega") ? "wall.omega" : "wall.omega_over_omegaN",
                "angular frequency must be positive");
        require(w.omega * w.amplitude < 1, c, c.has("wall.dL") ? "wall.dL" : "wall.dL_over_L",
                "peak wall speed omega*dL must stay below the speed of light");
    }

    auto& sd = s.seed;
    sd.kind = choice(c, "seed.kind", sd.kind, {"gaussian", "uniform", "mode"});
    sd.center = c.number_or("seed.center", w.motion_start);
    sd.width = c.number_or("seed.width", sd.width * w.rest_length);
    require(sd.width > 0, c, "seed.width", "must be positive");
    sd.amplitude = c.number_or("seed.amplitude", sd.amplitude);
    sd.mode = static_cast<int>(c.integer_or("seed.k", sd.mode));
    require(sd.mode >= 1, c, "seed.k", "mode number must be >= 1");
    sd.samples = count(c, "seed.samples", static_cast<long>(sd.samples), 3);
    sd.interpolation = choice(c, "seed.interpolation", "cubic", {"cubic", "linear"}) == "cubic"
                           ? dce::Interpolation::CubicMonotone
                           : dce::Interpolation::Linear;
    if (sd.kind == "uniform")
        require(sd.amplitude >= 0, c, "seed.amplitude", "uniform density must be >= 0");

    bool const any_cavity2 = std::any_of(allowed_keys.begin(), allowed_keys.end(), [&](std::string const& k) {
        return k.rfind("cavity2.", 0) == 0 && c.has(k);
    });
    if (any_cavity2 || s.analysis == Analysis::TwoWallModes) {
        CavitySpec cv;
        cv.rest_length = c.number_or("cavity2.L", cv.rest_length);
        require(cv.rest_length > 0, c, "cavity2.L", "rest length must be positive");
        cv.mode = choice(c, "cavity2.mode", cv.mode, {"harmonic", "breathing", "translational", "custom"});
        cv.order = static_cast<int>(c.integer_or("cavity2.N", cv.order));
        require(cv.order >= 1, c, "cavity2.N", "resonance order must be >= 1");
        double const wn = dce::resonant_frequency(cv.order, cv.rest_length);
        cv.dL1 = c.number_or("cavity2.dL1", cv.dL1);
        cv.dL2 = c.number_or("cavity2.dL2", cv.mode == "harmonic" || cv.mode == "custom" ? cv.dL2 : cv.dL1);
        cv.omega_right = c.number_or("cavity2.omegaR", wn);
        cv.omega_left = c.number_or("cavity2.omegaL", cv.omega_right);
        cv.delta = c.number_or("cavity2.delta", cv.delta);
        if (cv.mode == "breathing" || cv.mode == "translational") {
            require(!c.has("cavity2.dL2") || cv.dL2 == cv.dL1, c, "cavity2.dL2",
                    cv.mode + " mode moves both walls with amplitude dL1");
            require(!c.has("cavity2.omegaL") || cv.omega_left == cv.omega_right, c, "cavity2.omegaL",
                    cv.mode + " mode drives both walls at omegaR");
            require(!c.has("cavity2.delta"), c, "cavity2.delta", cv.mode + " mode fixes the relative phase");
        }
        double const half = 0.5 * cv.rest_length;
        for (auto [key, amp, om] : {std::tuple{"cavity2.dL1", cv.dL1, cv.omega_right},
                                    std::tuple{"cavity2.dL2", cv.dL2, cv.omega_left}}) {
            require(amp >= 0, c, key, "amplitude must be >= 0");
            require(2 * amp < half, c, key, "amplitude must be below L/4 so that each half stays positive");
            require(om > 0, c, key == std::string("cavity2.dL1") ? "cavity2.omegaR" : "cavity2.omegaL",
                    "angular frequency must be positive");
            require(om * amp < 1, c, key, "peak wall speed must stay below the speed of light");
        }
        s.cavity2 = cv;
    }

    auto& n = s.numeric;
    n.tau = c.number_or("numeric.tau", n.tau);
    n.n = count(c, "numeric.n", static_cast<long>(n.n), 0);
    n.periods = count(c, "numeric.periods", static_cast<long>(n.periods), 1);
    n.t_max = c.number_or("numeric.t_max", n.t_max);
    require(n.t_max >= w.motion_start, c, "numeric.t_max", "must not precede the motion start t0");
    n.nx = count(c, "numeric.nx", static_cast<long>(n.nx), 2);
    n.nt = count(c, "numeric.nt", static_cast<long>(n.nt), 1);
    n.tau_min = c.number_or("numeric.tau_min", -2 * w.rest_length);
    n.tau_max = c.number_or("numeric.tau_max", 2 * w.rest_length);
    require(n.tau_max > n.tau_min, c, "numeric.tau_max", "must exceed tau_min");
    n.points = count(c, "numeric.points", static_cast<long>(n.points), 2);
    n.n_probe = count(c, "numeric.n_probe", static_cast<long>(n.n_probe), 1);
    n.scan = flag(c, "numeric.scan");
    n.scan_min = c.number_or("numeric.scan_min", n.scan_min);
    n.scan_max = c.number_or("numeric.scan_max", n.scan_max);
    require(n.scan_max > n.scan_min, c, "numeric.scan_max", "must exceed scan_min");
    require(n.scan_min > -1, c, "numeric.scan_min", "detuning must keep the frequency positive");
    n.scan_points = count(c, "numeric.scan_points", static_cast<long>(n.scan_points), 2);
    n.field = choice(c, "numeric.field", n.field, {"classical", "quantum"});
    // Only the linear static branch R = tau / L is supported.
    choice(c, "quantum.normalization", "linear", {"linear"});
    n.quadrature.abs_tolerance = c.number_or("numeric.abs_tol", n.quadrature.abs_tolerance);
    n.quadrature.rel_tolerance = c.number_or("numeric.rel_tol", n.quadrature.rel_tolerance);
    n.quadrature.max_depth = static_cast<int>(c.integer_or("numeric.max_depth", n.quadrature.max_depth));
    require(n.quadrature.abs_tolerance > 0, c, "numeric.abs_tol", "must be positive");
    require(n.quadrature.rel_tolerance > 0, c, "numeric.rel_tol", "must be positive");
    require(n.quadrature.max_depth >= 4, c, "numeric.max_depth", "must be >= 4");

    bool const needs_sinusoid = s.analysis == Analysis::Resonance;
    require(!needs_sinusoid || w.kind == "sinusoidal", c, "wall.kind", "resonance analysis needs a sinusoidal wall");

    try {
        (void)s.trajectory();
        if (s.cavity2)
            (void)s.two_wall();
    } catch (dce::Error const& e) {
        throw ConfigError(std::string("constraint violation: ") + e.what());
    }
    return s;
}

dce::WallTrajectory Scenario::trajectory() const {
    if (wall.kind == "static")
        return dce::WallTrajectory::static_wall(wall.rest_length, wall.motion_start);
    return dce::WallTrajectory::sinusoidal(wall.rest_length, wall.amplitude, wall.omega, wall.phase,
                                           wall.motion_start);
}

dce::ProfileFunction Scenario::seed_profile() const {
    double const L = wall.rest_length, t0 = wall.motion_start;
    if (seed.kind == "uniform")
        return dce::ProfileFunction::uniform(L, seed.amplitude, t0);
    if (seed.kind == "mode")
        return dce::ProfileFunction::single_mode(L, seed.mode, t0, seed.samples, seed.interpolation);
    return dce::ProfileFunction::gaussian(L, seed.center, seed.width, seed.amplitude, t0, seed.samples,
                                          seed.interpolation);
}

dce::TwoWallCavity Scenario::two_wall() const {
    if (!cavity2)
        throw ConfigError("this analysis needs a [cavity2] section");
    auto const& cv = *cavity2;
    if (cv.mode == "breathing")
        return dce::TwoWallCavity::breathing(cv.rest_length, cv.dL1, cv.omega_right);
    if (cv.mode == "translational")
        return dce::TwoWallCavity::translational(cv.rest_length, cv.dL1, cv.omega_right);
    return dce::TwoWallCavity::harmonic(cv.rest_length, cv.dL1, cv.dL2, cv.omega_right, cv.omega_left, cv.delta);
}

double Scenario::period() const {
    if (wall.kind == "static")
        return 2 * wall.rest_length;
    return dce::resonant_period(wall.order, wall.omega);
}

} // namespace dcesim
