#pragma once

// Exact arithmetic on the circle R/Z of external angles: the doubling map, the
// tau involution t -> t + 1/2, halving preimages, orbit/period detection, and
// arc measures. Everything here is an exact rational; the doubling map doubles
// floating error per step, so exactness is the contract.

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "julia_rays/exact.hpp"

namespace julia_rays {

class Angle {
public:
    Angle() : v_(0) {}

    explicit Angle(BigRat v) : v_(normalize(std::move(v))) {}

    Angle(BigInt num, BigInt den) {
        if (den <= 0) throw InvalidInputError("Angle: denominator must be >= 1");
        v_ = normalize(BigRat(std::move(num), std::move(den)));
    }

    // Accepts "p/q", a bare integer, or ".b1b2...bk" (binary expansion, read as
    // an exact dyadic rational).
    static Angle parse(std::string_view s) {
        if (s.empty()) throw InvalidInputError("Angle: empty text");
        if (s[0] == '.') {
            BigInt num = 0;
            long k = 0;
            for (char ch : s.substr(1)) {
                if (ch != '0' && ch != '1')
                    throw InvalidInputError("Angle: binary expansion may contain only 0/1 digits");
                num = (num << 1) + (ch == '1' ? 1 : 0);
                ++k;
            }
            if (k == 0) throw InvalidInputError("Angle: empty binary expansion");
            return Angle(num, BigInt(1) << k);
        }
        return Angle(rat_from_string(s));
    }

    const BigRat& value() const { return v_; }
    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }
    double to_double() const { return rat_to_double(v_); }

    template <class Real>
    Real to_real() const {
        return v_.template convert_to<Real>();
    }

    // i-th binary digit after the point (1-based).
    int binary_digit(unsigned i) const {
        BigInt shifted = floor_rat(v_ * pow2_rat(static_cast<long>(i)));
        return static_cast<int>(shifted & 1);
    }

    std::string str() const { return rat_to_string(v_); }

    friend bool operator==(const Angle& a, const Angle& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Angle& a, const Angle& b) { return a.v_ != b.v_; }
    friend bool operator<(const Angle& a, const Angle& b) { return a.v_ < b.v_; }

private:
    static BigRat normalize(BigRat v) {
        BigInt f = floor_rat(v);
        if (f != 0) v -= BigRat(f, 1);
        return v;
    }

    BigRat v_;  // reduced, in [0,1)
};

inline Angle double_angle(const Angle& t) { return Angle(t.value() * 2); }

inline Angle tau_angle(const Angle& t) { return Angle(t.value() + BigRat(1, 2)); }

// The two doubling preimages (t/2, t/2 + 1/2); the first lies in [0, 1/2).
inline std::pair<Angle, Angle> halve(const Angle& t) {
    BigRat h = t.value() / 2;
    return {Angle(h), Angle(h + BigRat(1, 2))};
}

struct OrbitSummary {
    int preperiod = 0;
    int period = 0;  // 0 means not yet periodic within the horizon
    std::vector<Angle> orbit;
};

inline OrbitSummary orbit(const Angle& t, int horizon) {
    if (horizon < 1) throw InvalidInputError("orbit: horizon must be >= 1");
    OrbitSummary out;
    std::map<Angle, int> seen;
    Angle cur = t;
    for (int step = 0; step <= horizon; ++step) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            out.preperiod = it->second;
            out.period = step - it->second;
            return out;
        }
        if (step == horizon) break;
        seen.emplace(cur, step);
        out.orbit.push_back(cur);
        cur = double_angle(cur);
    }
    out.preperiod = 0;
    out.period = 0;
    return out;
}

enum class Orientation { ccw, cw };

// Exact length of the arc from `from` to `to` in the given orientation.
// For equal angles the ccw arc is 0 and the cw arc is 1 by convention.
inline BigRat arc_measure(const Angle& from, const Angle& to, Orientation o = Orientation::ccw) {
    if (from == to) return o == Orientation::ccw ? BigRat(0) : BigRat(1);
    BigRat d = (o == Orientation::ccw) ? to.value() - from.value() : from.value() - to.value();
    if (d < 0) d += 1;
    return d;
}

// True iff x lies strictly inside the counterclockwise arc from `from` to `to`.
inline bool angle_in_arc(const Angle& x, const Angle& from, const Angle& to) {
    if (from == to) throw InvalidInputError("angle_in_arc: arc endpoints must differ");
    BigRat len = arc_measure(from, to, Orientation::ccw);
    BigRat off = arc_measure(from, x, Orientation::ccw);
    return off > 0 && off < len;
}

}  // namespace julia_rays
