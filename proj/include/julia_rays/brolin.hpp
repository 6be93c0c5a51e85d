#pragma once

// Brolin-measure sampling: push uniform angles through the ray tracer and
// check the invariance |f(land(t)) - land(2t)|. Sampling angles are 64-bit
// dyadic rationals from a seeded deterministic generator, so the doubled-angle
// traces stay exact and reruns are bit-identical.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "julia_rays/parallel.hpp"
#include "julia_rays/raytrace.hpp"

namespace julia_rays {

struct BrolinRecord {
    Angle t;
    LandingStatus status = LandingStatus::undecided;          // landing of R_t
    LandingStatus status_doubled = LandingStatus::undecided;  // landing of R_2t
    std::complex<double> point{};
    std::complex<double> point_doubled{};
    std::optional<double> residual;  // present only when both landings succeeded

    bool decided() const { return residual.has_value(); }
};

struct BrolinSample {
    std::uint64_t seed = 0;
    int n = 0;
    std::complex<double> c{};
    TraceConfig trace;
    LandingConfig landing;
    std::vector<BrolinRecord> records;
};

inline TraceConfig brolin_default_trace() {
    TraceConfig cfg;
    cfg.depth = 38;  // deep enough that c = 0 residuals sit below 1e-10
    return cfg;
}

inline BrolinSample brolin_sample(const QuadraticMap& map, int n, std::uint64_t seed,
                                  TraceConfig cfg = brolin_default_trace(), LandingConfig lcfg = {}) {
    if (n < 1) throw InvalidInputError("brolin_sample: n must be >= 1");
    BrolinSample out;
    out.seed = seed;
    out.n = n;
    out.c = map.c();
    out.trace = cfg;
    out.landing = lcfg;
    out.records.resize(n);

    std::mt19937_64 rng(seed);
    const BigInt den = BigInt(1) << 64;
    for (int i = 0; i < n; ++i) out.records[i].t = Angle(BigInt(rng()), den);

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        BrolinRecord& rec = out.records[i];
        RayTrail<double> trail = trace_ray(map, rec.t, cfg);
        RayTrail<double> trail2 = trace_ray(map, double_angle(rec.t), cfg);
        LandingEstimate<double> l1 = landing_estimate(trail, lcfg);
        LandingEstimate<double> l2 = landing_estimate(trail2, lcfg);
        rec.status = l1.status;
        rec.status_doubled = l2.status;
        rec.point = l1.point;
        rec.point_doubled = l2.point;
        if (l1.status == LandingStatus::landed && l2.status == LandingStatus::landed)
            rec.residual = std::abs(map.apply(l1.point) - l2.point);
    });
    return out;
}

}  // namespace julia_rays
