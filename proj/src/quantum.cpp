#include "dce/quantum.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace dce {

namespace {

constexpr double pi = std::numbers::pi;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0;
    double carry_ = 0;
};

} // namespace

MooreFunction::MooreFunction(BilliardMap const& map)
    : MooreFunction(std::make_shared<BilliardMap>(map), map.trajectory().motion_start() + map.trajectory().rest_length(),
                    map.trajectory().rest_length()) {}

MooreFunction::MooreFunction(std::shared_ptr<OpticalMap const> map, double static_end, double rest_length)
    : map_(std::move(map)), static_end_(static_end), rest_length_(rest_length) {
    if (!map_)
        throw ContractError("Moore function: a map is required");
    if (!(rest_length_ > 0))
        throw ContractError("Moore function: rest length must be positive");
}

std::size_t MooreFunction::steps(double tau) const {
    std::size_t k = 0;
    while (tau > static_end_) {
        tau = map_->f(tau);
        ++k;
    }
    return k;
}

double MooreFunction::value(double tau) const {
    std::size_t k = 0;
    while (tau > static_end_) {
        tau = map_->f(tau);
        ++k;
    }
    return tau / rest_length_ + 2.0 * static_cast<double>(k);
}

Jet MooreFunction::jet(double tau) const {
    Jet j = Jet::identity(tau);
    std::size_t k = 0;
    while (j.value > static_end_) {
        j = compose(map_->jet(j.value), j);
        ++k;
    }
    double const s = 1.0 / rest_length_;
    return {j.value * s + 2.0 * static_cast<double>(k), j.d1 * s, j.d2 * s, j.d3 * s};
}

double MooreFunction::residual(double tau) const { return value(tau) - value(map_->f(tau)) - 2.0; }

double MooreFunction::schwarzian(double tau) const { return checked_schwarzian(jet(tau)); }

double quantum_density(MooreFunction const& moore, double tau) {
    auto const j = moore.jet(tau);
    return -(pi / 48) * j.d1 * j.d1 - checked_schwarzian(j) / (24 * pi);
}

double quantum_field(MooreFunction const& moore, double t, double x) {
    return quantum_density(moore, t + x) + quantum_density(moore, t - x);
}

AnomalyTrace cumulative_anomaly(OpticalMap const& map, double tau, std::size_t n) {
    CompensatedSum sum;
    double current = tau;
    double log_d = 0;
    for (std::size_t k = 0; k < n; ++k) {
        auto const b = map.advance(current);
        current = b.time;
        log_d += b.log_factor;
        double const s = schwarzian(map.jet(current));
        sum.add(-s * std::exp(-2 * log_d));
    }
    return {sum.value() / (24 * pi), log_d, current};
}

double direct_anomaly(OpticalMap const& map, double tau, std::size_t n) {
    Jet j = Jet::identity(tau);
    for (std::size_t k = 0; k < n; ++k)
        j = compose(map.inverse_jet(j.value), j);
    return checked_schwarzian(j) / (24 * pi);
}

QuantumEvolution quantum_evolution(MooreFunction const& moore, double tau, std::size_t n) {
    auto const a = cumulative_anomaly(moore.map(), tau, n);
    double const d2 = std::exp(2 * a.log_doppler);
    QuantumEvolution out;
    out.time = a.time;
    out.doppler_term = quantum_density(moore, tau) * d2;
    out.anomaly_term = a.anomaly * d2;
    out.density = out.doppler_term + out.anomaly_term;
    return out;
}

QuantumEnergy quantum_window_energy(MooreFunction const& moore, double tau1, QuadratureOptions const& options) {
    auto const& map = moore.map();
    double hi = tau1;
    std::size_t n = 0;
    while (hi > moore.static_end()) {
        hi = map.f(hi);
        ++n;
    }
    double const lo = map.f(hi);
    // Onset of motion: the first collision of s happens at t0 for s = f(static_end).
    std::vector<double> breaks;
    double const period = moore.static_end() - map.f(moore.static_end());
    for (double p = map.f(moore.static_end()); p > lo; p -= period)
        if (p < hi)
            breaks.push_back(p);
    auto integrand = [&](double s) {
        auto const a = cumulative_anomaly(map, s, n);
        return (quantum_density(moore, s) + a.anomaly) * std::exp(a.log_doppler);
    };
    auto const q = integrate_or_throw(integrand, lo, hi, options, breaks);
    return {q.value, q.error, n, q.evaluations};
}

QuantumEnergy quantum_total_energy(MooreFunction const& moore, BilliardMap const& map, double t,
                                   QuadratureOptions const& options) {
    return quantum_window_energy(moore, t + map.trajectory().position(t), options);
}

QuantumEnergy quantum_total_energy_direct(MooreFunction const& moore, BilliardMap const& map, double t,
                                          QuadratureOptions const& options) {
    double const wall = map.trajectory().position(t);
    double const lo = t - wall, hi = t + wall;
    std::vector<double> breaks;
    for (double p = moore.static_end(); p < hi; p = map.f_inv(p))
        if (p > lo)
            breaks.push_back(p);
    auto const q = integrate_or_throw([&](double tau) { return quantum_density(moore, tau); }, lo, hi, options,
                                      breaks);
    return {q.value, q.error, 0, q.evaluations};
}

} // namespace dce
