#include "analyses.hpp"

#include "output.hpp"

#include <dce/billiard.hpp>
#include <dce/errors.hpp>
#include <dce/quantum.hpp>
#include <dce/resonance.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace dcesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Preamble = std::vector<std::pair<std::string, std::string>>;

// `units` annotates the columns; lengths and times share the unit of L.
Preamble preamble(Scenario const& s, std::string const& units) {
    return {{"schema", "1"}, {"name", s.name}, {"analysis", to_string(s.analysis)},
            {"static_past_t0", format_number(s.wall.motion_start)}, {"units", units}};
}

std::string path_in(Scenario const& s, std::string const& file) { return (fs::path(s.output_dir) / file).string(); }

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

// Periodic-trajectory starts of the principal resonance, where the Doppler
// weight of the energy integral varies fastest.
std::vector<double> resonant_starts(Scenario const& s) {
    if (s.wall.kind != "sinusoidal")
        return {};
    auto const starts = dce::principal_starting_points(s.wall.order, s.wall.rest_length);
    std::vector<double> pts = starts.positive;
    pts.insert(pts.end(), starts.negative.begin(), starts.negative.end());
    for (double& p : pts)
        p += s.wall.motion_start;
    return pts;
}

void billiard_table(Scenario const& s, RunReport& r) {
    dce::BilliardMap map(s.trajectory());
    CsvWriter csv(path_in(s, "billiard_table.csv"), {"tau", "f", "f_inv", "log_doppler"},
                  preamble(s, "tau,f,f_inv [length]; log_doppler [1]"));
    r.files.push_back("billiard_table.csv");
    for (double tau : linspace(s.numeric.tau_min, s.numeric.tau_max, s.numeric.points))
        csv.row({tau, map.f(tau), map.f_inv(tau), map.log_doppler(tau)});
    csv.close();
}

void trace(Scenario const& s, RunReport& r) {
    dce::BilliardMap map(s.trajectory());
    auto pre = preamble(s, "k [1]; T_k,T_star_k [length]; log_D_k [1]");
    pre.emplace_back("tau", format_number(s.numeric.tau));
    CsvWriter csv(path_in(s, "trace.csv"), {"k", "T_k", "T_star_k", "log_D_k"}, pre);
    r.files.push_back("trace.csv");
    auto const path = dce::trace(map, s.numeric.tau, s.numeric.n);
    for (std::size_t k = 0; k < path.times.size(); ++k)
        csv.row({static_cast<long long>(k + 1), path.times[k], path.collisions[k], path.log_doppler[k]});
    csv.close();
    r.summary["final_log_doppler"] = path.final_log_doppler();
}

void resonance(Scenario const& s, RunReport& r) {
    dce::BilliardMap map(s.trajectory());
    auto const report = dce::analyze_resonance(map, s.wall.order, s.numeric.n_probe);
    CsvWriter csv(path_in(s, "trajectories.csv"),
                  {"start", "return_point", "period", "sign", "exponent", "series", "residual"},
                  preamble(s, "start,return_point,period,residual [length]; exponent [1 per period]; sign,series [label]"));
    r.files.push_back("trajectories.csv");
    for (auto const& t : report.trajectories)
        csv.row({t.start, t.return_point, t.period, std::string(dce::to_string(t.sign)), t.exponent,
                 static_cast<long long>(t.series_index), t.residual});
    csv.close();
    double const omega_n = dce::resonant_frequency(s.wall.order, s.wall.rest_length);
    r.summary["order"] = report.order;
    r.summary["degenerate"] = report.degenerate;
    r.summary["num_series"] = report.num_series;
    r.summary["closed_form_exponent"] = dce::doppler_exponent(omega_n * s.wall.amplitude);
    r.summary["window"] = {{"upper", report.window.upper}, {"lower", report.window.lower}};
    if (!s.numeric.scan)
        return;

    auto const ratios = linspace(s.numeric.scan_min, s.numeric.scan_max, s.numeric.scan_points);
    auto const samples = dce::scan_detuning(s.wall.rest_length, s.wall.amplitude, s.wall.order, ratios);
    double const bound = s.wall.amplitude / s.wall.rest_length;
    CsvWriter scan(path_in(s, "scan.csv"),
                   {"detuning_ratio", "unstable", "return_points", "max_exponent", "predicted_unstable"},
                   preamble(s, "detuning_ratio [1]; max_exponent [1 per period]; unstable,predicted_unstable [0/1]; return_points [count]"));
    r.files.push_back("scan.csv");
    for (auto const& x : samples)
        scan.row({x.detuning_ratio, static_cast<long long>(x.unstable), static_cast<long long>(x.return_points),
                  x.max_exponent, static_cast<long long>(std::abs(x.detuning_ratio) < bound)});
    scan.close();

    auto const edge = dce::locate_window_edge(samples);
    auto const predicted = dce::resonance_window(bound);
    double const resolution = (s.numeric.scan_max - s.numeric.scan_min) / static_cast<double>(s.numeric.scan_points - 1);
    CsvWriter window(path_in(s, "window.csv"), {"side", "measured_edge", "predicted_edge", "resolution"},
                     preamble(s, "measured_edge,predicted_edge,resolution [1]; side [label]"));
    r.files.push_back("window.csv");
    window.row({std::string("upper"), edge.upper, predicted.upper, resolution});
    window.row({std::string("lower"), edge.lower, predicted.lower, resolution});
    window.close();
}

void classical_energy(Scenario const& s, RunReport& r) {
    dce::BilliardMap map(s.trajectory());
    auto const seed = s.seed_profile();
    dce::EnergyOptions opts;
    opts.quadrature = s.numeric.quadrature;
    opts.refine_points = resonant_starts(s);
    double const T = s.period();
    CsvWriter csv(path_in(s, "energy.csv"), {"k", "t", "energy", "error", "pullbacks", "log_energy"},
                  preamble(s, "k [periods]; t [length]; energy,error [1/length]; pullbacks [count]; log_energy [1]"));
    r.files.push_back("energy.csv");
    std::vector<double> ks, logs;
    for (std::size_t k = 0; k <= s.numeric.periods; ++k) {
        double const t = s.wall.motion_start + static_cast<double>(k) * T;
        auto const e = dce::total_energy(seed, map, t, opts);
        csv.row({static_cast<long long>(k), t, e.value, e.error, static_cast<long long>(e.pullbacks),
                 std::log(e.value)});
        ks.push_back(static_cast<double>(k));
        logs.push_back(std::log(e.value));
    }
    csv.close();
    r.summary["period"] = T;
    r.summary["fitted_slope"] = fit_tail_slope(ks, logs);
    if (s.wall.kind == "sinusoidal") {
        double const omega_n = dce::resonant_frequency(s.wall.order, s.wall.rest_length);
        double const log_d1 = dce::doppler_exponent(omega_n * s.wall.amplitude);
        r.summary["log_D1"] = log_d1;
        r.summary["two_log_D1"] = 2 * log_d1;
    }
}

void quantum_energy(Scenario const& s, RunReport& r) {
    dce::BilliardMap map(s.trajectory());
    dce::MooreFunction moore(map);
    double const T = s.period();
    double const E0 = dce::static_casimir_energy(s.wall.rest_length);
    CsvWriter csv(path_in(s, "quantum_energy.csv"), {"k", "t", "energy", "error", "pullbacks", "static_energy"},
                  preamble(s, "k [periods]; t [length]; energy,error,static_energy [1/length]; pullbacks [count]"));
    r.files.push_back("quantum_energy.csv");
    for (std::size_t k = 0; k <= s.numeric.periods; ++k) {
        double const t = s.wall.motion_start + static_cast<double>(k) * T;
        auto const e = dce::quantum_total_energy(moore, map, t, s.numeric.quadrature);
        csv.row({static_cast<long long>(k), t, e.value, e.error, static_cast<long long>(e.pullbacks), E0});
    }
    csv.close();

    CsvWriter table(path_in(s, "moore.csv"), {"tau", "R", "R_dot", "S_R", "rho"},
                    preamble(s, "tau [length]; R [1]; R_dot [1/length]; S_R [1/length^2]; rho [1/length^2]"));
    r.files.push_back("moore.csv");
    for (double tau : linspace(s.numeric.tau_min, s.numeric.tau_max, s.numeric.points)) {
        auto const j = moore.jet(tau);
        table.row({tau, j.value, j.d1, moore.schwarzian(tau), dce::quantum_density(moore, tau)});
    }
    table.close();
    r.summary["static_energy"] = E0;
    r.summary["static_density"] = dce::static_casimir_density(s.wall.rest_length);
}

void density_map(Scenario const& s, RunReport& r) {
    dce::BilliardMap map(s.trajectory());
    auto const seed = s.seed_profile();
    bool const quantum = s.numeric.field == "quantum";
    dce::MooreFunction moore(map);
    auto pre = preamble(s, "t,x [length]; T00 [1/length^2]");
    pre.emplace_back("field", s.numeric.field);
    CsvWriter csv(path_in(s, "density_map.csv"), {"t", "x", "T00"}, pre);
    r.files.push_back("density_map.csv");
    std::vector<double> last;
    for (double t : linspace(s.wall.motion_start, s.numeric.t_max, s.numeric.nt)) {
        auto const xs = linspace(0.0, map.trajectory().position(t), s.numeric.nx);
        std::vector<double> values;
        if (quantum) {
            for (double x : xs)
                values.push_back(dce::quantum_field(moore, t, x));
        } else {
            values = dce::density_field(seed, map, t, xs);
        }
        for (std::size_t i = 0; i < xs.size(); ++i)
            csv.row({t, xs[i], values[i]});
        last = std::move(values);
    }
    csv.close();
    if (!quantum)
        r.summary["peaks_last_snapshot"] = dce::count_local_maxima(last);
}

void twowall_modes(Scenario const& s, RunReport& r) {
    auto const cavity = s.two_wall();
    auto const& cv = *s.cavity2;
    auto const report = dce::two_wall_exponents(cavity, cv.order, s.numeric.n_probe);
    CsvWriter csv(path_in(s, "twowall_exponents.csv"),
                  {"side", "t1", "start", "exact", "small_amplitude", "traced", "sign"},
                  preamble(s, "t1,start [length]; exact,small_amplitude,traced [1 per period]; side,sign [label]"));
    r.files.push_back("twowall_exponents.csv");
    for (auto const& e : report.trajectories)
        csv.row({std::string(dce::to_string(e.side)), e.t1, e.start, e.exact, e.small_amplitude, e.traced,
                 std::string(dce::to_string(e.sign))});
    csv.close();

    double const center = s.config.has("seed.center") ? s.seed.center : -0.5 * cv.rest_length;
    auto const seed =
        dce::two_wall_gaussian_seed(cv.rest_length, center, s.seed.width, s.seed.amplitude, s.seed.samples);
    CsvWriter energy(path_in(s, "twowall_energy.csv"), {"k", "t", "energy", "error", "pullbacks"},
                     preamble(s, "k [periods]; t [length]; energy,error [1/length]; pullbacks [count]"));
    r.files.push_back("twowall_energy.csv");
    for (std::size_t k = 0; k <= s.numeric.periods; ++k) {
        double const t = cavity.wall(1).trajectory().motion_start() + static_cast<double>(k) * report.period;
        auto const e = dce::two_wall_energy(seed, cavity, t, s.numeric.quadrature);
        energy.row({static_cast<long long>(k), t, e.value, e.error, static_cast<long long>(e.pullbacks)});
    }
    energy.close();

    auto const window = dce::two_wall_resonance_window(cv.dL1, cv.dL2, cv.delta, cv.order, cv.rest_length);
    r.summary["mode"] = std::string(dce::to_string(cavity.mode()));
    r.summary["period"] = report.period;
    r.summary["closed_form_exponent"] = report.closed_form;
    r.summary["degenerate"] = report.degenerate;
    r.summary["window"] = {{"upper", window.upper}, {"lower", window.lower}};
}

json metadata(Scenario const& s, RunReport const& r) {
    json meta;
    meta["schema"] = s.schema;
    meta["name"] = s.name;
    meta["analysis"] = to_string(s.analysis);
    meta["status"] = r.partial ? "partial" : "complete";
    if (r.partial)
        meta["error"] = r.error;
    meta["conventions"] = {
        {"static_past", "walls rest at their initial positions for t < t0"},
        {"t0", s.wall.motion_start},
        {"moore_normalization", "R(tau) = tau / L for tau <= t0 + L; R(tau) - R(f(tau)) = 2"},
        {"billiard_function", "f(t + L(t)) = t - L(t)"},
        {"boundary_condition", "dirichlet"},
        {"two_wall_sides", "left rays hit x = -L2 first and end each round trip on x = L1"},
    };
    meta["parameters"] = {
        {"input", s.config.values()},
        {"wall",
         {{"kind", s.wall.kind},
          {"L", s.wall.rest_length},
          {"dL", s.wall.amplitude},
          {"N", s.wall.order},
          {"omega", s.wall.omega},
          {"phase", s.wall.phase},
          {"t0", s.wall.motion_start},
          {"period", s.period()}}},
    };
    auto const& q = s.numeric.quadrature;
    meta["tolerances"] = {{"quadrature_abs", q.abs_tolerance},
                          {"quadrature_rel", q.rel_tolerance},
                          {"quadrature_max_depth", q.max_depth},
                          {"root_relative", 1e-12}};
    meta["outputs"] = r.files;
    meta["summary"] = r.summary;
    return meta;
}

void write_metadata(Scenario const& s, RunReport const& r) {
    std::ofstream out(path_in(s, "metadata.json"));
    out << metadata(s, r).dump(2) << '\n';
    out.close();
    if (out.fail())
        throw IoError("cannot write '" + path_in(s, "metadata.json") + "'");
}

} // namespace

double fit_tail_slope(std::vector<double> const& x, std::vector<double> const& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_tail_slope: need at least two matching samples");
    std::size_t const first = x.size() / 2 >= 2 && x.size() - x.size() / 2 >= 2 ? x.size() / 2 : 0;
    double const n = static_cast<double>(x.size() - first);
    double sx = 0, sy = 0;
    for (std::size_t i = first; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double const mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = first; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

RunReport run_analysis(Scenario const& s) {
    std::error_code ec;
    fs::create_directories(s.output_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + s.output_dir + "': " + ec.message());
    RunReport r;
    try {
        switch (s.analysis) {
        case Analysis::BilliardTable: billiard_table(s, r); break;
        case Analysis::Trace: trace(s, r); break;
        case Analysis::Resonance: resonance(s, r); break;
        case Analysis::ClassicalEnergy: classical_energy(s, r); break;
        case Analysis::QuantumEnergy: quantum_energy(s, r); break;
        case Analysis::DensityMap: density_map(s, r); break;
        case Analysis::TwoWallModes: twowall_modes(s, r); break;
        }
    } catch (dce::NumericError const& e) {
        r.partial = true;
        r.error = e.what();
    } catch (dce::DomainError const& e) {
        r.partial = true;
        r.error = e.what();
    }
    write_metadata(s, r);
    return r;
}

int run_scenario(Scenario const& s, std::ostream& log) {
    try {
        auto const r = run_analysis(s);
        if (r.partial) {
            log << "numeric failure: " << r.error << " (partial outputs in " << s.output_dir << ")\n";
            return NumericFailure;
        }
        for (auto const& f : r.files)
            log << "wrote " << path_in(s, f) << '\n';
        return Success;
    } catch (IoError const& e) {
        log << "i/o error: " << e.what() << '\n';
        return IoFailure;
    } catch (ConfigError const& e) {
        log << "config error: " << e.what() << '\n';
        return ConfigFailure;
    } catch (dce::ContractError const& e) {
        log << "constraint violation: " << e.what() << '\n';
        return ConfigFailure;
    }
}

} // namespace dcesim
