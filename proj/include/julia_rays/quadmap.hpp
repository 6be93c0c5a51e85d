#pragma once

// The quadratic family z -> z^2 + c: construction from c or from a unit-circle
// multiplier, the alpha/beta fixed-point convention (alpha is the fixed point
// further to the left; defined only for c off the real ray [1/4, inf)),
// iteration with an explicit escape sentinel, and Green's function estimation.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>

#include "julia_rays/errors.hpp"

namespace julia_rays {

template <class Real = double>
struct EscapeResult {
    bool escaped = false;
    long steps = 0;
    Real green_estimate = 0;  // 0 iff not escaped
    Real error_bound = 0;
};

// Both fixed points of z^2 + c as roots of z^2 - z + c = 0, unordered
// (the principal square root fixes the pairing, not a convention).
template <class Real>
std::pair<std::complex<Real>, std::complex<Real>> fixed_points_unordered(std::complex<Real> c) {
    std::complex<Real> s = std::sqrt(std::complex<Real>(1) - Real(4) * c);
    return {(std::complex<Real>(1) - s) / Real(2), (std::complex<Real>(1) + s) / Real(2)};
}

template <class Real>
bool alpha_convention_defined(std::complex<Real> c) {
    return !(c.imag() == 0 && c.real() >= Real(0.25));
}

// (alpha, beta) ordered by the further-to-the-left convention.
template <class Real>
std::pair<std::complex<Real>, std::complex<Real>> fixed_points(std::complex<Real> c) {
    if (!alpha_convention_defined(c))
        throw ConventionUndefinedError("fixed_points: alpha/beta naming undefined for real c >= 1/4");
    auto [a, b] = fixed_points_unordered(c);  // principal sqrt has Re >= 0, so Re(a) <= Re(b)
    return {a, b};
}

template <class Real = double>
class QuadraticMapT {
public:
    using Complex = std::complex<Real>;

    enum class Source { from_c, from_multiplier };

    static QuadraticMapT from_c(Complex c) {
        QuadraticMapT m;
        m.c_ = c;
        m.source_ = Source::from_c;
        auto [a, b] = fixed_points_unordered(c);
        m.alpha_ = a;
        m.beta_ = b;
        m.convention_defined_ = alpha_convention_defined(c);
        return m;
    }

    // c = lambda(2 - lambda)/4 with lambda on the unit circle.
    static QuadraticMapT from_multiplier(Complex lambda) {
        if (std::abs(std::abs(lambda) - Real(1)) > Real(1e-12))
            throw InvalidInputError("from_multiplier: |lambda| must equal 1 within 1e-12");
        return from_multiplier_unchecked(lambda);
    }

    // Formula-only variant without the unit-circle check; used by tests that
    // exercise c = lambda(2-lambda)/4 off the circle.
    static QuadraticMapT from_multiplier_unchecked(Complex lambda) {
        QuadraticMapT m;
        m.c_ = lambda * (Complex(2) - lambda) / Real(4);
        m.alpha_ = lambda / Real(2);
        m.beta_ = Complex(1) - m.alpha_;
        m.source_ = Source::from_multiplier;
        m.convention_defined_ = true;
        return m;
    }

    // lambda = e^{2 pi i theta}; theta is kept as the source reference.
    static QuadraticMapT from_rotation(Real theta) {
        Real arg = Real(2) * std::numbers::pi_v<Real> * theta;
        QuadraticMapT m = from_multiplier_unchecked(Complex(std::cos(arg), std::sin(arg)));
        m.rotation_theta_ = theta;
        return m;
    }

    Complex c() const { return c_; }
    Source source() const { return source_; }
    std::optional<Real> rotation_theta() const { return rotation_theta_; }
    bool has_alpha_convention() const { return convention_defined_; }

    Complex alpha() const {
        require_convention();
        return alpha_;
    }
    Complex beta() const {
        require_convention();
        return beta_;
    }
    Complex multiplier() const {
        require_convention();
        return Real(2) * alpha_;
    }

    Complex apply(Complex z) const { return z * z + c_; }

    // Iterates may leave the double range; overflow is reported as the escape
    // sentinel (inf, inf), never as a silent NaN.
    static Complex escape_sentinel() {
        constexpr Real inf = std::numeric_limits<Real>::infinity();
        return {inf, inf};
    }
    static bool is_escape_sentinel(Complex z) {
        return std::isinf(z.real()) || std::isinf(z.imag());
    }

    Complex iterate(Complex z, long n) const {
        if (n < 0) throw InvalidInputError("iterate: n must be >= 0");
        constexpr Real guard = Real(1e150);
        for (long i = 0; i < n; ++i) {
            if (std::abs(z.real()) > guard || std::abs(z.imag()) > guard) return escape_sentinel();
            z = apply(z);
        }
        return z;
    }

    Real escape_radius() const { return std::max(Real(4), std::abs(c_) + Real(2)); }

    // Green's function (potential) estimate: 2^-n log|f^n(z)| once the orbit
    // has escaped, with the tail bound from log(|w^2+c|/|w|^2) <= log(1+|c|/|w|^2).
    EscapeResult<Real> green(Complex z, Real tol, long budget = 10000) const {
        if (tol <= 0) throw InvalidInputError("green: tol must be positive");
        const Real radius = escape_radius();
        Complex w = z;
        long n = 0;
        bool escaped = false;
        while (n < budget) {
            if (std::abs(w) >= radius) {
                escaped = true;
                break;
            }
            w = apply(w);
            ++n;
        }
        if (!escaped) return {false, budget, Real(0), Real(0)};

        const Real ac = std::abs(c_);
        for (;;) {
            Real aw = std::abs(w);
            Real err = Real(2) * std::ldexp(std::log1p(ac / (aw * aw)), static_cast<int>(-std::min<long>(n, 2000)));
            if (err <= tol || aw > Real(1e140)) {
                Real g = std::ldexp(std::log(aw), static_cast<int>(-std::min<long>(n, 2000)));
                if (g <= 0) g = std::numeric_limits<Real>::min();
                return {true, n, g, err};
            }
            w = apply(w);
            ++n;
        }
    }

private:
    void require_convention() const {
        if (!convention_defined_)
            throw ConventionUndefinedError("alpha/beta undefined: c lies on the real ray [1/4, inf)");
    }

    Complex c_{};
    Complex alpha_{};
    Complex beta_{};
    Source source_ = Source::from_c;
    std::optional<Real> rotation_theta_;
    bool convention_defined_ = true;
};

using QuadraticMap = QuadraticMapT<double>;

}  // namespace julia_rays
