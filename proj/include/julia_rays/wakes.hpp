#pragma once

// Ray pairs and wakes. A wake is the complementary component of
// R_t u R_t' u {root} not containing the fixed point alpha; its angle a(W) is
// the exact measure of the arc it cuts on the circle at infinity. Angles are
// exact rationals end-to-end; the side designation (which component lacks
// alpha) is geometric, by winding number against the traced curve closed with
// a large-radius arc. A point must clear the curve by 10x the local sample
// spacing or the test refuses to answer, so discretization can never flip a
// side.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "julia_rays/circle.hpp"
#include "julia_rays/errors.hpp"
#include "julia_rays/quadmap.hpp"
#include "julia_rays/raytrace.hpp"

namespace julia_rays {

struct WakeConfig {
    double pairing_tol = 1e-3;      // max distance between co-landing estimates
    double clearance_factor = 10.0; // required clearance in units of local sample spacing
    int arc_points = 256;           // discretization of the closing arc at the outer radius
    LandingConfig landing{};
};

struct RayPair {
    Angle t;
    Angle t_prime;
    std::optional<LandingEstimate<double>> root_estimate;
};

enum class AlphaEvidence { geometric_test, caller_asserted };

struct Wake {
    RayPair pair;
    Angle arc_from;  // side arc, counterclockwise from arc_from to arc_to
    Angle arc_to;
    BigRat a;        // exact arc measure of the wake
    AlphaEvidence alpha_excluded = AlphaEvidence::geometric_test;
    std::complex<double> root{};
    std::vector<std::complex<double>> boundary;     // closed polygon around the wake side
    std::vector<std::complex<double>> co_boundary;  // closed polygon around the co-wake side
};

namespace wake_detail {

using C = std::complex<double>;

inline double point_segment_distance(C p, C a, C b) {
    C ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0) return std::abs(p - a);
    double u = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + u * ab));
}

// Distance from p to the nearest polygon segment, plus that segment's length
// ("local sample spacing" at the point of closest approach).
struct Clearance {
    double dist = 0;
    double local_spacing = 0;
};

inline Clearance polygon_clearance(C p, const std::vector<C>& poly) {
    Clearance best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        C a = poly[i];
        C b = poly[(i + 1) % poly.size()];
        double d = point_segment_distance(p, a, b);
        if (d < best.dist) best = {d, std::abs(b - a)};
    }
    return best;
}

inline int winding_number(C p, const std::vector<C>& poly) {
    double total = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        C a = poly[i] - p;
        C b = poly[(i + 1) % poly.size()] - p;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

// Closed polygon around the region of rays with angles in the ccw arc
// (u -> v): down trail u, across the landing gap, up trail v, and back along
// the outer circle through the arc's angles.
inline std::vector<C> region_polygon(const RayTrail<double>& trail_u, const RayTrail<double>& trail_v,
                                     int arc_points) {
    std::vector<C> poly;
    poly.reserve(trail_u.samples.size() + trail_v.samples.size() + arc_points);
    for (const auto& s : trail_u.samples) poly.push_back(s.second);
    for (auto it = trail_v.samples.rbegin(); it != trail_v.samples.rend(); ++it) poly.push_back(it->second);

    const C outer_v = trail_v.samples.front().second;
    const C outer_u = trail_u.samples.front().second;
    double ru = std::abs(outer_u), rv = std::abs(outer_v);
    double base = trail_u.angle.to_double();
    double arc = rat_to_double(arc_measure(trail_u.angle, trail_v.angle, Orientation::ccw));
    for (int k = arc_points - 1; k >= 1; --k) {
        double s = static_cast<double>(k) / arc_points;
        double ang = 2 * std::numbers::pi * (base + s * arc);
        double r = ru + s * (rv - ru);
        poly.push_back(r * C(std::cos(ang), std::sin(ang)));
    }
    return poly;
}

// Locates p relative to the closed polygon, refusing to answer when p does not
// clear the curve by `factor` times the local sample spacing.
inline bool locate(C p, const std::vector<C>& poly, double factor, const char* what) {
    Clearance cl = polygon_clearance(p, poly);
    if (cl.dist < factor * cl.local_spacing)
        throw InconclusiveGeometryError(std::string("point location of ") + what +
                                        ": clearance " + std::to_string(cl.dist) +
                                        " below " + std::to_string(factor) + "x local spacing " +
                                        std::to_string(cl.local_spacing));
    return winding_number(p, poly) != 0;
}

}  // namespace wake_detail

// Designates the complementary component not containing alpha and computes the
// exact wake angle.
inline Wake wake_from_pair(const QuadraticMap& map, const Angle& t, const Angle& t_prime,
                           const RayTrail<double>& trail_t, const RayTrail<double>& trail_tp,
                           const WakeConfig& cfg = {}) {
    if (t == t_prime) throw InvalidInputError("wake_from_pair: ray pair angles must differ");
    if (trail_t.angle != t || trail_tp.angle != t_prime)
        throw InvalidInputError("wake_from_pair: trails do not match the pair angles");

    LandingEstimate<double> l1 = landing_estimate(trail_t, cfg.landing);
    LandingEstimate<double> l2 = landing_estimate(trail_tp, cfg.landing);
    double near_landed = std::max(cfg.landing.eps_land, cfg.pairing_tol);
    if (l1.tail_diameter > near_landed || l2.tail_diameter > near_landed)
        throw InconclusiveGeometryError("wake_from_pair: trails too shallow to pin the root");
    if (std::abs(l1.point - l2.point) > cfg.pairing_tol)
        throw NotARayPairError("wake_from_pair: landing estimates disagree by " +
                               std::to_string(std::abs(l1.point - l2.point)));

    std::complex<double> root = (l1.point + l2.point) / 2.0;
    std::complex<double> alpha = map.alpha();
    if (std::abs(root - alpha) <= cfg.pairing_tol)
        throw InvalidInputError("wake_from_pair: root coincides with alpha (wakes require z != alpha)");

    auto p1 = wake_detail::region_polygon(trail_t, trail_tp, cfg.arc_points);   // arc ccw t -> t'
    auto p2 = wake_detail::region_polygon(trail_tp, trail_t, cfg.arc_points);   // arc ccw t' -> t
    bool alpha_in_p1 = wake_detail::locate(alpha, p1, cfg.clearance_factor, "alpha");
    bool alpha_in_p2 = wake_detail::locate(alpha, p2, cfg.clearance_factor, "alpha");
    if (alpha_in_p1 == alpha_in_p2)
        throw ConsistencyFailureError("wake_from_pair: alpha located in both/neither component");

    Wake w;
    w.pair = {t, t_prime, l1};
    w.root = root;
    w.alpha_excluded = AlphaEvidence::geometric_test;
    if (!alpha_in_p1) {
        w.arc_from = t;
        w.arc_to = t_prime;
        w.boundary = std::move(p1);
        w.co_boundary = std::move(p2);
    } else {
        w.arc_from = t_prime;
        w.arc_to = t;
        w.boundary = std::move(p2);
        w.co_boundary = std::move(p1);
    }
    w.a = arc_measure(w.arc_from, w.arc_to, Orientation::ccw);
    return w;
}

// Angle-only construction for a side arc the caller has already designated
// (e.g. from prior geometry). Carries no polygons, so geometric membership
// tests on it are inconclusive by definition.
inline Wake wake_from_side_arc(const Angle& t, const Angle& t_prime, const Angle& arc_from,
                               const Angle& arc_to) {
    if (t == t_prime) throw InvalidInputError("wake_from_side_arc: ray pair angles must differ");
    bool arc_matches = (arc_from == t && arc_to == t_prime) || (arc_from == t_prime && arc_to == t);
    if (!arc_matches)
        throw InvalidInputError("wake_from_side_arc: side arc endpoints must be the pair angles");
    Wake w;
    w.pair = {t, t_prime, std::nullopt};
    w.arc_from = arc_from;
    w.arc_to = arc_to;
    w.a = arc_measure(arc_from, arc_to, Orientation::ccw);
    w.alpha_excluded = AlphaEvidence::caller_asserted;
    return w;
}

// Geometric membership test against the wake polygon; throws
// InconclusiveGeometryError below the clearance threshold or when the wake
// carries no geometry.
inline bool point_in_wake(const Wake& w, std::complex<double> p, const WakeConfig& cfg = {},
                          const char* what = "point") {
    if (w.boundary.size() < 3)
        throw InconclusiveGeometryError("point location: wake carries no boundary geometry");
    return wake_detail::locate(p, w.boundary, cfg.clearance_factor, what);
}

// a(W) > 1/2 iff W contains the critical point (exact comparison), with the
// geometric point-location test as a two-sided consistency trap. a(W) = 1/2
// signals that the root is the critical point itself.
inline bool contains_critical(const Wake& w, const WakeConfig& cfg = {}) {
    if (w.a == BigRat(1, 2))
        throw RootIsCriticalSignal("contains_critical: wake angle exactly 1/2, root is the critical point");
    bool by_angle = w.a > BigRat(1, 2);
    try {
        bool by_geometry = point_in_wake(w, {0.0, 0.0}, cfg, "critical point");
        if (by_geometry != by_angle)
            throw ConsistencyFailureError("contains_critical: exact angle test and geometric test disagree");
    } catch (const InconclusiveGeometryError&) {
        // trails do not permit the cross-check; the exact answer stands
    }
    return by_angle;
}

// Caches trails per exact angle; safe to call concurrently.
class TrailProvider {
public:
    TrailProvider(QuadraticMap map, TraceConfig cfg = {}) : map_(std::move(map)), cfg_(cfg) {}

    const RayTrail<double>& get(const Angle& t) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(t);
        if (it == cache_.end())
            it = cache_.emplace(t, std::make_unique<RayTrail<double>>(trace_ray(map_, t, cfg_))).first;
        return *it->second;
    }

    const QuadraticMap& map() const { return map_; }
    const TraceConfig& config() const { return cfg_; }

private:
    QuadraticMap map_;
    TraceConfig cfg_;
    std::map<Angle, std::unique_ptr<RayTrail<double>>> cache_;
    std::mutex mu_;
};

inline Wake make_wake(TrailProvider& trails, const Angle& u, const Angle& v, const WakeConfig& cfg = {}) {
    return wake_from_pair(trails.map(), u, v, trails.get(u), trails.get(v), cfg);
}

enum class ImageKind { wake, co_wake };

struct ImageWakeResult {
    Wake image;           // canonical wake of the doubled pair (the component without alpha)
    ImageKind kind;       // f(W) is that wake, or its co-wake when -alpha lies in W
    BigRat image_angle;   // exact angle of f(W): always 2 a(W)
};

// Image step: for a(W) < 1/2 the image f(W) is the wake or co-wake of the
// doubled ray pair -- co-wake exactly when -alpha lies in W -- with angle
// exactly 2 a(W).
inline ImageWakeResult image_wake(TrailProvider& trails, const Wake& w, const WakeConfig& cfg = {}) {
    if (w.a >= BigRat(1, 2))
        throw InvalidInputError("image_wake: requires a(W) < 1/2");
    const QuadraticMap& map = trails.map();
    std::complex<double> f_root = map.apply(w.root);
    if (std::abs(f_root - map.alpha()) <= cfg.pairing_tol)
        throw InvalidInputError("image_wake: f(root) = alpha is excluded (the image is not classified there)");

    bool minus_alpha_in = point_in_wake(w, -map.alpha(), cfg, "-alpha");
    Angle u2 = double_angle(w.pair.t);
    Angle v2 = double_angle(w.pair.t_prime);
    Wake img = make_wake(trails, u2, v2, cfg);

    BigRat expected = w.a * 2;
    ImageKind kind = minus_alpha_in ? ImageKind::co_wake : ImageKind::wake;
    BigRat got = (kind == ImageKind::wake) ? img.a : BigRat(1) - img.a;
    if (got != expected)
        throw ConsistencyFailureError("image_wake: image angle " + rat_to_string(got) +
                                      " != 2 a(W) = " + rat_to_string(expected));
    return {std::move(img), kind, expected};
}

struct SeparationStep {
    RayPair pair;
    BigRat a;
    std::string action;  // advance | tau-reflect | wake-contains-critical | root-is-critical | inconclusive
};

enum class SeparationStatus { separated, root_is_critical, inconclusive };

struct SeparationResult {
    SeparationStatus status = SeparationStatus::inconclusive;
    RayPair pair;                // final ray pair
    std::optional<Wake> wake;    // its wake, when available
    std::vector<SeparationStep> trace;

    // Pair transitions performed (the returning check is not a transition).
    int iterations() const {
        int n = 0;
        for (const auto& s : trace)
            if (s.action == "advance" || s.action == "tau-reflect") ++n;
        return n;
    }
};

// Smallest k >= 0 with 2^k * (2 a0) >= 1, i.e. ceil(log2(1/(2 a0))); the
// separation loop performs at most that many doublings plus one reflection.
inline int separation_iteration_bound(const BigRat& a0) {
    if (a0 >= BigRat(1, 2)) return 1;
    BigRat v = a0 * 2;
    int k = 0;
    while (v < 1) {
        v *= 2;
        ++k;
    }
    return k + 1;
}

// Separation loop: push the wake forward (doubling its angle) or reflect by
// tau once, until the wake contains the critical point; the final ray pair
// then separates alpha from 0.
inline SeparationResult separation_search(TrailProvider& trails, const Angle& t0, const Angle& t0_prime,
                                          const WakeConfig& cfg = {}) {
    SeparationResult res;
    Angle u = t0, v = t0_prime;
    Wake w;
    try {
        w = make_wake(trails, u, v, cfg);
    } catch (const InconclusiveGeometryError&) {
        res.status = SeparationStatus::inconclusive;
        res.pair = {u, v, std::nullopt};
        return res;
    }
    const int max_transitions = separation_iteration_bound(w.a);
    int transitions = 0;
    for (;;) {
        if (w.a > BigRat(1, 2)) {
            res.trace.push_back({w.pair, w.a, "wake-contains-critical"});
            res.status = SeparationStatus::separated;
            res.pair = w.pair;
            res.wake = std::move(w);
            return res;
        }
        if (w.a == BigRat(1, 2)) {
            res.trace.push_back({w.pair, w.a, "root-is-critical"});
            res.status = SeparationStatus::root_is_critical;
            res.pair = w.pair;
            res.wake = std::move(w);
            return res;
        }
        if (transitions >= max_transitions)
            throw ConsistencyFailureError("separation_search: exceeded the doubling bound " +
                                          std::to_string(max_transitions));
        bool minus_alpha_in;
        try {
            minus_alpha_in = point_in_wake(w, -trails.map().alpha(), cfg, "-alpha");
        } catch (const InconclusiveGeometryError&) {
            res.trace.push_back({w.pair, w.a, "inconclusive"});
            res.status = SeparationStatus::inconclusive;
            res.pair = w.pair;
            res.wake = std::move(w);
            return res;
        }
        BigRat prev_a = w.a;
        if (minus_alpha_in) {
            // the symmetric pair separates alpha from 0
            u = tau_angle(u);
            v = tau_angle(v);
            res.trace.push_back({w.pair, w.a, "tau-reflect"});
        } else {
            u = double_angle(u);
            v = double_angle(v);
            res.trace.push_back({w.pair, w.a, "advance"});
        }
        try {
            w = make_wake(trails, u, v, cfg);
        } catch (const InconclusiveGeometryError&) {
            res.trace.push_back({{u, v, std::nullopt}, prev_a, "inconclusive"});
            res.status = SeparationStatus::inconclusive;
            res.pair = {u, v, std::nullopt};
            return res;
        }
        if (minus_alpha_in && w.a != BigRat(1) - prev_a)
            throw ConsistencyFailureError("separation_search: tau wake angle is not 1 - a");
        if (!minus_alpha_in && w.a != prev_a * 2)
            throw ConsistencyFailureError("separation_search: image wake angle is not 2a");
        ++transitions;
    }
}

}  // namespace julia_rays
