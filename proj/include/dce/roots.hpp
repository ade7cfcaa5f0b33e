#pragma once

#include "dce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace dce {

struct MonotoneSolveOptions {
    double tolerance = 1e-12;       // absolute, in the units of the unknown
    int max_bracket_expansions = 64;
    int max_iterations = 200;
};

/// Solves g(x) = target for a strictly increasing g.
///
/// `eval(x)` returns {g(x), g'(x)}. The bracket is grown geometrically
/// around `guess` starting from `step`, then the root is refined with
/// Newton steps that fall back to bisection whenever they leave the bracket.
/// Iteration continues past `tolerance` while Newton still makes progress,
/// so well-behaved problems finish at machine precision.
template<class Eval>
double solve_increasing(Eval&& eval, double target, double guess, double step,
                        MonotoneSolveOptions const& opts = {}) {
    auto residual = [&](double x) {
        auto [g, dg] = eval(x);
        return std::pair{g - target, dg};
    };

    auto [h0, dh0] = residual(guess);
    if (h0 == 0.0)
        return guess;

    double lo = guess, hi = guess;
    double hlo = h0, hhi = h0;
    double width = step > 0 ? step : 1.0;
    int expansions = 0;
    if (h0 < 0) {
        while (hhi < 0) {
            if (expansions++ >= opts.max_bracket_expansions) {
                std::ostringstream msg;
                msg << "monotone solve: bracket expansion failed above x=" << guess
                    << " (target " << target << ", residual " << hhi << ")";
                throw NumericError(msg.str());
            }
            lo = hi;
            hlo = hhi;
            hi = guess + width;
            hhi = residual(hi).first;
            width *= 2;
        }
    } else {
        while (hlo > 0) {
            if (expansions++ >= opts.max_bracket_expansions) {
                std::ostringstream msg;
                msg << "monotone solve: bracket expansion failed below x=" << guess
                    << " (target " << target << ", residual " << hlo << ")";
                throw NumericError(msg.str());
            }
            hi = lo;
            hhi = hlo;
            lo = guess - width;
            hlo = residual(lo).first;
            width *= 2;
        }
    }
    if (hlo == 0.0)
        return lo;
    if (hhi == 0.0)
        return hi;

    // The seed guess is an endpoint of (or inside) the bracket and is usually
    // already close, so Newton starts from it.
    double x = guess;
    double h = h0, dh = dh0;
    int polish = 0;
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (h == 0.0)
            return x;
        if (h < 0) lo = std::max(lo, x); else hi = std::min(hi, x);

        double next = dh > 0 ? x - h / dh : lo - 1.0;
        // A Newton step at the roundoff level means x is already the root.
        if (dh > 0 && std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            return x;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        double const dx = next - x;
        x = next;
        std::tie(h, dh) = residual(x);

        double const floor = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
        if (std::abs(dx) <= opts.tolerance) {
            converged = true;
            if (++polish >= 2 || std::abs(dx) <= floor)
                break;
        }
        if (hi - lo <= floor) {
            converged = true;
            break;
        }
    }
    if (!converged && hi - lo > opts.tolerance) {
        std::ostringstream msg;
        msg << "monotone solve: no convergence for target " << target << ", bracket [" << lo
            << ", " << hi << "]";
        throw NumericError(msg.str());
    }
    return x;
}

/// Bisection on a sign change of `fn` inside [lo, hi]. Used where no
/// derivative is available (return-point scans).
template<class Fn>
double bisect_sign_change(Fn&& fn, double lo, double hi, double tolerance, int max_iterations = 200) {
    double flo = fn(lo);
    if (flo == 0.0)
        return lo;
    double fhi = fn(hi);
    if (fhi == 0.0)
        return hi;
    if ((flo < 0) == (fhi < 0))
        throw NumericError("bisection: interval does not bracket a sign change");
    for (int it = 0; it < max_iterations && hi - lo > tolerance; ++it) {
        double const mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        double const fm = fn(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace dce
