#pragma once

#include <cmath>

namespace dce {

/// Value and first three derivatives of a scalar map at one point.
template<class Scalar>
struct Jet3 {
    Scalar value{};
    Scalar d1{};
    Scalar d2{};
    Scalar d3{};

    static constexpr Jet3 identity(Scalar x) { return {x, Scalar(1), Scalar(0), Scalar(0)}; }
    static constexpr Jet3 affine(Scalar x, Scalar slope, Scalar offset) {
        return {slope * x + offset, slope, Scalar(0), Scalar(0)};
    }
};

using Jet = Jet3<double>;

/// Jet of outer∘inner, where `outer` is taken at inner.value.
template<class Scalar>
constexpr Jet3<Scalar> compose(Jet3<Scalar> const& outer, Jet3<Scalar> const& inner) {
    auto const a = inner.d1;
    return {
        outer.value,
        outer.d1 * a,
        outer.d2 * a * a + outer.d1 * inner.d2,
        outer.d3 * a * a * a + Scalar(3) * outer.d2 * a * inner.d2 + outer.d1 * inner.d3,
    };
}

/// Jet of the inverse map at y = j.value, given the jet of the map at x.
template<class Scalar>
constexpr Jet3<Scalar> invert(Jet3<Scalar> const& j, Scalar x) {
    auto const p = j.d1;
    auto const p2 = p * p;
    return {
        x,
        Scalar(1) / p,
        -j.d2 / (p2 * p),
        -j.d3 / (p2 * p2) + Scalar(3) * j.d2 * j.d2 / (p2 * p2 * p),
    };
}

/// S = g'''/g' - 3/2 (g''/g')^2. Caller guarantees g' != 0.
template<class Scalar>
constexpr Scalar schwarzian(Jet3<Scalar> const& j) {
    auto const r = j.d2 / j.d1;
    return j.d3 / j.d1 - Scalar(1.5) * r * r;
}

} // namespace dce
