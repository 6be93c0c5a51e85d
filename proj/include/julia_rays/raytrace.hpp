#pragma once

// Numerical external rays for z^2 + c by Boettcher-conjugacy pullback.
//
// The potential grid is geometric with ratio 2^(1/m), so doubling the
// potential lands back on the grid and the conjugacy  f(x(g,t)) = x(2g,2t)
// relates grid cells directly. A triangular table is filled over the angles
// t, 2t, 4t, ...: the outermost band of every column is seeded with the
// asymptotic x ~ e^{g+2 pi i t} (two extra potential halvings above g0 are
// absorbed as burn-in), and each deeper sample solves z^2 + c = parent in
// closed form, taking the square root branch nearer the same-angle sample one
// grid step out. Every emitted sample is certified against the conjugacy
// residual |f(x(g,t)) - x(2g,2t)| <= tol_conj * max(1,|x|).

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "julia_rays/circle.hpp"
#include "julia_rays/errors.hpp"
#include "julia_rays/quadmap.hpp"
#include "julia_rays/rotnum.hpp"

namespace julia_rays {

struct TraceConfig {
    double g0 = 9.210340371976184;  // log(1e4): potential of the outermost emitted sample
    int depth = 25;                 // potential halvings below g0
    int substeps = 4;               // grid levels per halving
    double tol_conj = 1e-9;         // conjugacy residual tolerance
    int max_grid_refinements = 3;   // internal substep doublings tried on branch ambiguity
};

struct LandingConfig {
    double eps_land = 1e-6;     // landed iff the deep tail has diameter <= eps_land
    double tail_fraction = 0.1; // fraction of deepest samples examined
};

enum class TrailStatus { traced_to_depth, aborted_branch_ambiguity };

inline const char* trail_status_name(TrailStatus s) {
    return s == TrailStatus::traced_to_depth ? "traced-to-depth" : "aborted-branch-ambiguity";
}

enum class LandingStatus { landed, undecided };

inline const char* landing_status_name(LandingStatus s) {
    return s == LandingStatus::landed ? "landed" : "undecided";
}

template <class Real = double>
struct RayTrail {
    Angle angle;  // exact angle of the traced ray
    std::vector<std::pair<Real, std::complex<Real>>> samples;  // strictly decreasing potential
    TrailStatus status = TrailStatus::traced_to_depth;
    TraceConfig config;
    std::complex<Real> c{};
    Real max_residual = 0;  // largest certified conjugacy residual (normalized)
};

template <class Real = double>
struct LandingEstimate {
    std::complex<Real> point{};
    LandingStatus status = LandingStatus::undecided;
    Real tail_diameter = 0;
    Real potential_reached = 0;
};

namespace detail {

constexpr int kBurnInHalvings = 2;

template <class Real>
std::complex<Real> asymptotic_start(Real g, const Angle& t) {
    Real arg = Real(2) * std::numbers::pi_v<Real> * t.template to_real<Real>();
    return std::exp(g) * std::complex<Real>(std::cos(arg), std::sin(arg));
}

// One tower fill at `s` internal substeps per halving. Returns false on branch
// ambiguity (columns filled as far as the blockage allows).
template <class Real>
bool fill_tower(const QuadraticMapT<Real>& map, const Angle& t, const TraceConfig& cfg, int s,
                std::vector<std::vector<std::complex<Real>>>& cols) {
    using Complex = std::complex<Real>;
    const int burn = kBurnInHalvings;
    const int total_halvings = burn + cfg.depth;
    const Real g_top = Real(cfg.g0) * Real(4);  // two halvings above g0
    const int n_cols = total_halvings + 1;

    cols.assign(n_cols, {});
    std::vector<Angle> angles(n_cols);
    angles[0] = t;
    for (int j = 1; j < n_cols; ++j) angles[j] = double_angle(angles[j - 1]);

    bool ambiguous = false;
    for (int j = n_cols - 1; j >= 0; --j) {
        const int full = (total_halvings - j) * s;  // levels 0..full
        int cap = full;
        if (j + 1 < n_cols) {
            // the parent column may itself be blocked
            int parent_filled = static_cast<int>(cols[j + 1].size()) - 1;
            cap = std::min(full, parent_filled + s);
        }
        auto& col = cols[j];
        col.reserve(cap + 1);
        for (int i = 0; i <= cap; ++i) {
            Real g = g_top * std::exp2(-Real(i) / Real(s));
            if (i < s) {
                col.push_back(asymptotic_start(g, angles[j]));
                continue;
            }
            Complex target = cols[j + 1][i - s] - map.c();
            Complex root = std::sqrt(target);
            Complex pred = col[i - 1];
            // The predictor sits one grid step further out; rescale it onto
            // the candidates' magnitude so the comparison measures direction,
            // not the branch-independent radial gap (a no-op once |pred| and
            // |root| agree, i.e. everywhere the branch choice is delicate).
            Real pred_mag = std::abs(pred);
            Real root_mag = std::abs(root);
            if (pred_mag > 0 && root_mag > 0) pred *= root_mag / pred_mag;
            Real d_pos = std::abs(root - pred);
            Real d_neg = std::abs(-root - pred);
            Real d_near = std::min(d_pos, d_neg);
            Real d_far = std::max(d_pos, d_neg);
            if (d_near > 0 && d_far < Real(2) * d_near) {
                ambiguous = true;  // never silently pick a branch in the ambiguous regime
                break;
            }
            col.push_back(d_pos <= d_neg ? root : -root);
        }
    }
    return !ambiguous;
}

}  // namespace detail

// Traces the external ray R_t down to potential g0 * 2^-depth. On branch
// ambiguity the internal grid is refined (substeps doubled) up to the retry
// cap; if ambiguity persists, the partial trail is returned with status
// aborted-branch-ambiguity.
template <class Real = double>
RayTrail<Real> trace_ray(const QuadraticMapT<Real>& map, const Angle& t, const TraceConfig& cfg = {}) {
    if (cfg.depth < 1) throw InvalidInputError("trace_ray: depth must be >= 1");
    if (cfg.substeps < 1) throw InvalidInputError("trace_ray: substeps must be >= 1");
    // the outer initializer is the asymptotic x ~ e^{g+2 pi i t}; it needs a
    // genuinely large starting potential or the whole tower is seeded wrong
    if (cfg.g0 < 4) throw InvalidInputError("trace_ray: g0 must be >= 4 (default log 1e4)");
    if (cfg.tol_conj <= 0) throw InvalidInputError("trace_ray: tol_conj must be positive");

    using Complex = std::complex<Real>;
    const int burn = detail::kBurnInHalvings;

    std::vector<std::vector<Complex>> cols;
    bool complete = false;
    int refine = 1;
    for (int attempt = 0; attempt <= cfg.max_grid_refinements; ++attempt) {
        refine = 1 << attempt;
        if (detail::fill_tower(map, t, cfg, cfg.substeps * refine, cols)) {
            complete = true;
            break;
        }
    }

    const int s = cfg.substeps * refine;
    RayTrail<Real> trail;
    trail.angle = t;
    trail.status = complete ? TrailStatus::traced_to_depth : TrailStatus::aborted_branch_ambiguity;
    trail.config = cfg;
    trail.c = map.c();

    // Certify the conjugacy residual across all cells at emitted potentials.
    Real max_resid = 0;
    for (std::size_t j = 0; j + 1 < cols.size(); ++j) {
        for (std::size_t i = static_cast<std::size_t>(burn) * s; i < cols[j].size(); ++i) {
            const Complex& x = cols[j][i];
            const Complex& parent = cols[j + 1][i - s];
            Real resid = std::abs(x * x + map.c() - parent) / std::max(Real(1), std::abs(x));
            max_resid = std::max(max_resid, resid);
        }
    }
    trail.max_residual = max_resid;
    if (max_resid > Real(cfg.tol_conj))
        throw ConsistencyFailureError("trace_ray: conjugacy residual " + std::to_string(double(max_resid)) +
                                      " exceeds tol_conj");

    const int emit_count = cfg.depth * cfg.substeps;
    trail.samples.reserve(emit_count + 1);
    for (int k = 0; k <= emit_count; ++k) {
        std::size_t internal = static_cast<std::size_t>(burn) * s + static_cast<std::size_t>(k) * refine;
        if (internal >= cols[0].size()) break;  // partial trail on abort
        Real g = Real(cfg.g0) * std::exp2(-Real(k) / Real(cfg.substeps));
        trail.samples.emplace_back(g, cols[0][internal]);
    }
    if (complete && trail.samples.size() != static_cast<std::size_t>(emit_count) + 1)
        throw ConsistencyFailureError("trace_ray: incomplete emission from a complete tower");
    return trail;
}

// Traces the exact dyadic truncation of an irrational angle. Doubling
// multiplies the angle error by 2 per level, so the accumulated drift over
// depth*substeps levels must stay below 2^-guard.
template <class Real = double>
RayTrail<Real> trace_irrational(const QuadraticMapT<Real>& map, const AngleApproximation& t_approx,
                                const TraceConfig& cfg = {}, int guard_digits = 8) {
    long levels = static_cast<long>(cfg.depth) * cfg.substeps;
    BigRat limit = pow2_rat(-(levels + guard_digits));
    if (t_approx.error_bound > limit)
        throw InsufficientPrecisionError(
            "trace_irrational: angle error bound " + rat_to_string(t_approx.error_bound) +
            " exceeds 2^-(depth*substeps+" + std::to_string(guard_digits) + ") = " + rat_to_string(limit));
    if (t_approx.error_bound >= BigRat(1, 4))
        throw InsufficientPrecisionError("trace_irrational: error bound must be < 1/4");
    return trace_ray(map, Angle(t_approx.value), cfg);
}

template <class Real = double>
LandingEstimate<Real> landing_estimate(const RayTrail<Real>& trail, const LandingConfig& lcfg = {}) {
    if (trail.samples.size() < 10)
        throw InvalidInputError("landing_estimate: trail must contain at least 10 samples");
    std::size_t n = trail.samples.size();
    std::size_t k = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(lcfg.tail_fraction * n)));
    k = std::min(k, n);
    Real diam = 0;
    for (std::size_t i = n - k; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            diam = std::max(diam, std::abs(trail.samples[i].second - trail.samples[j].second));
    LandingEstimate<Real> est;
    est.point = trail.samples.back().second;
    est.tail_diameter = diam;
    est.potential_reached = trail.samples.back().first;
    est.status = (trail.status == TrailStatus::traced_to_depth && diam <= Real(lcfg.eps_land))
                     ? LandingStatus::landed
                     : LandingStatus::undecided;
    return est;
}

// Points at angles k/n on the equipotential of level g, via the same pullback
// machinery (the deepest grid level is placed exactly at g).
template <class Real = double>
std::vector<std::complex<Real>> equipotential(const QuadraticMapT<Real>& map, Real g, int n,
                                              TraceConfig cfg = {}) {
    if (g <= 0) throw InvalidInputError("equipotential: g must be positive");
    if (n < 8) throw InvalidInputError("equipotential: need at least 8 samples");
    // base potential in (g0/2, g0]: tol_conj is calibrated for |x| up to e^{g0}
    int halvings = std::max(1, static_cast<int>(std::floor(std::log2(double(cfg.g0) / double(g)))));
    cfg.g0 = double(g) * std::exp2(double(halvings));
    cfg.depth = halvings;
    std::vector<std::complex<Real>> pts;
    pts.reserve(n);
    for (int k = 0; k < n; ++k) {
        RayTrail<Real> trail = trace_ray(map, Angle(BigInt(k), BigInt(n)), cfg);
        if (trail.status != TrailStatus::traced_to_depth)
            throw InconclusiveGeometryError("equipotential: branch ambiguity at angle " +
                                            std::to_string(k) + "/" + std::to_string(n));
        pts.push_back(trail.samples.back().second);
    }
    return pts;
}

}  // namespace julia_rays
