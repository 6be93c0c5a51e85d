#pragma once

// JSON document writers. Big integers are emitted as decimal strings so exact
// values survive the trip; all documents are deterministic given their inputs.

#include <json.hpp>

#include <complex>
#include <string>

#include "julia_rays/brolin.hpp"
#include "julia_rays/circle.hpp"
#include "julia_rays/experiments.hpp"
#include "julia_rays/raytrace.hpp"
#include "julia_rays/rotnum.hpp"
#include "julia_rays/wakes.hpp"

namespace julia_rays {

using nlohmann::json;

inline json angle_json(const Angle& a) {
    return json{{"num", a.num().str()}, {"den", a.den().str()}};
}

inline json rat_json(const BigRat& r) {
    return json{{"num", numerator(r).str()}, {"den", denominator(r).str()}};
}

inline json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline json approximation_json(const AngleApproximation& a) {
    return json{{"value", rat_json(a.value)},
                {"error_bound", rat_json(a.error_bound)},
                {"value_double", rat_to_double(a.value)},
                {"error_bound_double", rat_to_double(a.error_bound)}};
}

inline json classification_json(const ClassificationReport& r) {
    return json{{"constant_type", tri_state_name(r.constant_type)},
                {"diophantine", tri_state_name(r.diophantine)},
                {"brjuno", tri_state_name(r.brjuno)},
                {"witness", r.witness},
                {"depth_used", r.depth_used}};
}

inline json landing_json(const LandingEstimate<double>& l) {
    return json{{"point", complex_json(l.point)},
                {"status", landing_status_name(l.status)},
                {"tail_diameter", l.tail_diameter},
                {"potential_reached", l.potential_reached}};
}

inline json trail_json(const RayTrail<double>& t, const LandingEstimate<double>* landing = nullptr) {
    json samples = json::array();
    for (const auto& [g, x] : t.samples) samples.push_back(json::array({g, x.real(), x.imag()}));
    json j{{"c", complex_json(t.c)},
           {"angle", angle_json(t.angle)},
           {"samples", samples},
           {"status", trail_status_name(t.status)},
           {"landing", nullptr},
           {"config", {{"g0", t.config.g0},
                       {"depth", t.config.depth},
                       {"substeps", t.config.substeps},
                       {"tol_conj", t.config.tol_conj}}},
           {"max_residual", t.max_residual}};
    if (landing) j["landing"] = landing_json(*landing);
    return j;
}

inline json wake_json(const Wake& w) {
    return json{{"pair", {{"t", angle_json(w.pair.t)}, {"t_prime", angle_json(w.pair.t_prime)}}},
                {"side_arc",
                 {{"from", angle_json(w.arc_from)}, {"to", angle_json(w.arc_to)}, {"orientation", "ccw"}}},
                {"a", rat_json(w.a)},
                {"alpha_excluded",
                 w.alpha_excluded == AlphaEvidence::geometric_test ? "geometric-test" : "caller-asserted"},
                {"root", complex_json(w.root)}};
}

inline json separation_json(const SeparationResult& r) {
    json steps = json::array();
    for (const auto& s : r.trace)
        steps.push_back(json{{"pair", {{"t", angle_json(s.pair.t)}, {"t_prime", angle_json(s.pair.t_prime)}}},
                             {"a", rat_json(s.a)},
                             {"action", s.action}});
    const char* status = r.status == SeparationStatus::separated
                             ? "separated"
                             : (r.status == SeparationStatus::root_is_critical ? "root-is-critical"
                                                                               : "inconclusive");
    json j{{"status", status},
           {"pair", {{"t", angle_json(r.pair.t)}, {"t_prime", angle_json(r.pair.t_prime)}}},
           {"iterations", r.iterations()},
           {"trace", steps}};
    if (r.wake) j["wake"] = wake_json(*r.wake);
    return j;
}

inline json measurement_json(const Measurement& m) {
    return json{{"label", m.label},
                {"value", m.value},
                {"tolerance", m.tolerance},
                {"pass", m.passed},
                {"decided", m.decided}};
}

inline json experiment_json(const ExperimentReport& r) {
    json ms = json::array();
    for (const auto& m : r.measurements) ms.push_back(measurement_json(m));
    return json{{"name", r.name},
                {"c", complex_json(r.c)},
                {"inputs", r.inputs},
                {"measurements", ms},
                {"overall", experiment_outcome_name(r.overall)},
                {"runtime_ms", r.runtime_ms}};
}

inline json brolin_json(const BrolinSample& b) {
    json recs = json::array();
    for (const auto& rec : b.records) {
        json r{{"t", angle_json(rec.t)},
               {"status", landing_status_name(rec.status)},
               {"status_doubled", landing_status_name(rec.status_doubled)},
               {"point", complex_json(rec.point)},
               {"point_doubled", complex_json(rec.point_doubled)},
               {"residual", nullptr}};
        if (rec.residual) r["residual"] = *rec.residual;
        recs.push_back(std::move(r));
    }
    return json{{"seed", b.seed},
                {"n", b.n},
                {"c", complex_json(b.c)},
                {"config", {{"g0", b.trace.g0},
                            {"depth", b.trace.depth},
                            {"substeps", b.trace.substeps},
                            {"tol_conj", b.trace.tol_conj},
                            {"eps_land", b.landing.eps_land},
                            {"tail_fraction", b.landing.tail_fraction}}},
                {"records", recs}};
}

}  // namespace julia_rays
