#pragma once

#include "dce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace dce {

struct QuadratureOptions {
    double abs_tolerance = 1e-13;
    double rel_tolerance = 1e-11;
    int max_depth = 60;
    int min_depth = 4;
    // Panels whose Richardson correction is below this fraction of their
    // own value are accepted: the integrand carries roundoff at that level.
    double noise_floor = 1e-11;
    std::size_t max_evaluations = 5'000'000;
};

struct QuadratureResult {
    double value = 0;
    double error = 0;
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail {

// Simpson panel [a, b] with its quarter-point samples, so that the
// Richardson-corrected estimate and its error are known without new calls.
struct Panel {
    double a, b;
    double fa, flm, fm, frm, fb;
    int depth;
    double value = 0;
    double error = 0;

    void estimate() {
        double const h = b - a;
        double const whole = h / 6 * (fa + 4 * fm + fb);
        double const both = h / 12 * (fa + 4 * flm + 2 * fm + 4 * frm + fb);
        double const delta = both - whole;
        value = both + delta / 15;
        // The uncorrected difference: the Richardson factor 1/15 assumes a
        // smooth integrand and underestimates panels holding a jump.
        error = std::abs(delta);
    }
    double magnitude() const {
        return (b - a) / 12 *
               (std::abs(fa) + 4 * std::abs(flm) + 2 * std::abs(fm) + 4 * std::abs(frm) + std::abs(fb));
    }
    bool operator<(Panel const& other) const { return error < other.error; }
};

// Neumaier-compensated running sum.
struct Sum {
    double sum = 0, carry = 0;
    void add(double x) {
        double const t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

} // namespace detail

/// Globally adaptive Simpson quadrature with Richardson error control.
///
/// The panel with the largest error estimate is bisected until the summed
/// error of the refinable panels meets max(abs_tol, rel_tol |I|). Panels
/// are retired without further refinement when their error is at the
/// integrand's roundoff level (noise_floor times their magnitude), when
/// they reach max_depth, or when their width is at the roundoff of the
/// abscissa (jumps). Retired panels still count in the reported error.
///
/// `breakpoints` inside (a, b) are forced panel edges, which keeps the
/// refinement from skipping over narrow structure near known spots.
/// Non-convergence is reported in the result, not thrown.
template<class Fn>
QuadratureResult integrate(Fn&& fn, double a, double b, QuadratureOptions const& opts = {},
                           std::vector<double> breakpoints = {}) {
    QuadratureResult result;
    if (a == b)
        return result;
    double sign = 1;
    if (b < a) {
        std::swap(a, b);
        sign = -1;
    }

    std::vector<double> edges{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double p : breakpoints)
        if (p > edges.back() && p < b)
            edges.push_back(p);
    edges.push_back(b);

    auto eval = [&](double x) {
        ++result.evaluations;
        return fn(x);
    };
    auto make = [&](double x0, double x1, double f0, double fm, double f1, int depth) {
        double const m = 0.5 * (x0 + x1);
        detail::Panel p{x0, x1, f0, eval(0.5 * (x0 + m)), fm, eval(0.5 * (m + x1)), f1, depth};
        p.estimate();
        return p;
    };

    std::vector<detail::Panel> heap;
    detail::Sum total, retired_error, depth_limited_error;
    double open_error = 0;
    auto retire = [&](detail::Panel const& p) {
        total.add(p.value);
        retired_error.add(p.error);
    };
    auto push = [&](detail::Panel const& p) {
        double const eps_x = 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(p.a), std::abs(p.b));
        bool const settled = p.depth >= opts.min_depth && p.error <= opts.noise_floor * p.magnitude();
        if (settled || p.b - p.a <= eps_x) {
            retire(p);
            return;
        }
        if (p.depth >= opts.max_depth) {
            depth_limited_error.add(p.error);
            retire(p);
            return;
        }
        open_error += p.error;
        total.add(p.value);
        heap.push_back(p);
        std::push_heap(heap.begin(), heap.end());
    };

    // Split every segment down to min_depth before adapting.
    auto seed = [&](auto&& self, detail::Panel const& p) -> void {
        if (p.depth >= opts.min_depth) {
            push(p);
            return;
        }
        double const m = 0.5 * (p.a + p.b);
        self(self, make(p.a, m, p.fa, p.flm, p.fm, p.depth + 1));
        self(self, make(m, p.b, p.fm, p.frm, p.fb, p.depth + 1));
    };
    // Interior breakpoints are sampled one ulp inside each segment, so a
    // jump sitting exactly on a breakpoint is seen from the correct side.
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double const x0 = edges[i], x1 = edges[i + 1];
        double const s0 = i == 0 ? x0 : std::nextafter(x0, x1);
        double const s1 = i + 2 == edges.size() ? x1 : std::nextafter(x1, x0);
        seed(seed, make(x0, x1, eval(s0), eval(0.5 * (x0 + x1)), eval(s1), 0));
    }

    for (std::size_t iteration = 1; !heap.empty(); ++iteration) {
        if (iteration % 4096 == 0) {
            open_error = 0;
            for (auto const& p : heap)
                open_error += p.error;
        }
        double const tol = std::max(opts.abs_tolerance, opts.rel_tolerance * std::abs(total.value()));
        if (open_error <= tol)
            break;
        if (result.evaluations >= opts.max_evaluations) {
            result.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        detail::Panel const p = heap.back();
        heap.pop_back();
        // Retract the parent's contribution and push its halves.
        open_error -= p.error;
        total.add(-p.value);
        double const m = 0.5 * (p.a + p.b);
        push(make(p.a, m, p.fa, p.flm, p.fm, p.depth + 1));
        push(make(m, p.b, p.fm, p.frm, p.fb, p.depth + 1));
    }

    double open = 0;
    for (auto const& p : heap)
        open += p.error;
    result.value = sign * total.value();
    result.error = retired_error.value() + open;
    double const tol = std::max(opts.abs_tolerance, opts.rel_tolerance * std::abs(result.value));
    if (depth_limited_error.value() > tol)
        result.converged = false;
    return result;
}

/// As `integrate`, but throws NumericError with the achieved estimate on
/// non-convergence.
template<class Fn>
QuadratureResult integrate_or_throw(Fn&& fn, double a, double b, QuadratureOptions const& opts = {},
                                    std::vector<double> breakpoints = {}) {
    auto r = integrate(std::forward<Fn>(fn), a, b, opts, std::move(breakpoints));
    if (!r.converged) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << r.value
            << ", error bound " << r.error;
        throw NumericError(msg.str());
    }
    return r;
}

} // namespace dce
