#pragma once

#include "dce/billiard.hpp"
#include "dce/errors.hpp"
#include "dce/jet.hpp"
#include "dce/quadrature.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <type_traits>

namespace dce {

/// -pi / (48 L^2): vacuum density profile of the static cavity.
inline double static_casimir_density(double rest_length) {
    return -std::numbers::pi / (48 * rest_length * rest_length);
}

/// -pi / (24 L): vacuum energy of the static cavity.
inline double static_casimir_energy(double rest_length) {
    return -std::numbers::pi / (24 * rest_length);
}

/// Schwarzian of a jet; throws DomainError where g' vanishes.
inline double checked_schwarzian(Jet const& j) {
    if (j.d1 == 0.0 || !std::isfinite(j.d1))
        throw DomainError("schwarzian: first derivative vanishes");
    return schwarzian(j);
}

/// Schwarzian of a thrice-differentiable map given as tau -> Jet.
template<class JetFn>
    requires std::is_invocable_r_v<Jet, JetFn, double>
double schwarzian(JetFn&& g, double tau) {
    return checked_schwarzian(g(tau));
}

/// Solution of R(tau) - R(f(tau)) = 2 with the static branch R = tau / L.
///
/// Below `static_end` (t0 + L for a single wall) the map is the static
/// shift f(tau) = tau - 2L and the linear branch solves the equation
/// exactly; later points are pulled back onto it.
class MooreFunction {
public:
    explicit MooreFunction(BilliardMap const& map);
    MooreFunction(std::shared_ptr<OpticalMap const> map, double static_end, double rest_length);

    OpticalMap const& map() const { return *map_; }
    double static_end() const noexcept { return static_end_; }
    double rest_length() const noexcept { return rest_length_; }

    double value(double tau) const;
    /// R with its first three derivatives, by composing jets along the pull-back.
    Jet jet(double tau) const;
    /// R(tau) - R(f(tau)) - 2.
    double residual(double tau) const;
    double schwarzian(double tau) const;
    /// Number of pull-back steps to reach the static branch.
    std::size_t steps(double tau) const;

private:
    std::shared_ptr<OpticalMap const> map_;
    double static_end_;
    double rest_length_;
};

/// rho(tau) = -(pi/48) R'^2 - S[R] / (24 pi).
double quantum_density(MooreFunction const& moore, double tau);

/// <T00(t, x)> = rho(t + x) + rho(t - x).
double quantum_field(MooreFunction const& moore, double t, double x);

struct AnomalyTrace {
    double anomaly = 0;     // A_n(tau)
    double log_doppler = 0; // log D_n(tau)
    double time = 0;        // T_n(tau)
};

/// A_n(tau) = -(1/24 pi) sum_k D_k^-2 S[f](T_k), with compensated summation.
AnomalyTrace cumulative_anomaly(OpticalMap const& map, double tau, std::size_t n);

/// S[T_n](tau) / (24 pi) from the composed jet of the n-fold inverse map.
double direct_anomaly(OpticalMap const& map, double tau, std::size_t n);

struct QuantumEvolution {
    double time = 0;          // T_n(tau)
    double density = 0;       // rho(T_n(tau))
    double doppler_term = 0;  // rho(tau) D_n^2
    double anomaly_term = 0;  // A_n(tau) D_n^2
};

/// rho(T_n(tau)) = rho(tau) D_n^2 + A_n(tau) D_n^2.
QuantumEvolution quantum_evolution(MooreFunction const& moore, double tau, std::size_t n);

struct QuantumEnergy {
    double value = 0;
    double error = 0;
    std::size_t pullbacks = 0;
    std::size_t evaluations = 0;
};

/// E(t) = int [rho(s) + A_n(s)] D_n(s) ds over the pulled-back window.
QuantumEnergy quantum_total_energy(MooreFunction const& moore, BilliardMap const& map, double t,
                                   QuadratureOptions const& options = {});

/// Same window integral for the light-cone coordinate tau1 = t + L(t).
QuantumEnergy quantum_window_energy(MooreFunction const& moore, double tau1,
                                    QuadratureOptions const& options = {});

/// E(t) by direct quadrature of rho over [t - L(t), t + L(t)].
QuantumEnergy quantum_total_energy_direct(MooreFunction const& moore, BilliardMap const& map, double t,
                                          QuadratureOptions const& options = {});

} // namespace dce
