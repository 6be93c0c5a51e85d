#pragma once

// Continued-fraction arithmetic for rotation numbers: convergents p_n/q_n with
// the standard recurrence, tail rules that extend a finite prefix to an
// infinite expansion, membership tests for the constant-type / Diophantine /
// Brjuno classes, Brjuno partial sums, and the explicit critical-angle series
//   t = sum over integer pairs 0 < p/q < theta of 2^-(q+1).

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "julia_rays/circle.hpp"
#include "julia_rays/exact.hpp"

namespace julia_rays {

enum class TriState { yes, no, unknown };

inline const char* tri_state_name(TriState t) {
    switch (t) {
        case TriState::yes: return "true";
        case TriState::no: return "false";
        default: return "unknown";
    }
}

// Generator for partial quotients beyond the stored prefix. Supported forms:
//   const:K                  a_n = K
//   arith:C*n^P+D            a_n = C*n^P + D, polynomial in the 1-based index
//                            (shorthands: n, 2n, n+3, n^2, 2*n^2+1)
//   rule:a[n+1]=q[n]         recurrence on the previous convergent denominator
//   rule:a[n+1]=q[n]^K       fixed power of q[n]
//   rule:a[n+1]=q[n]^n       power growing with the index
//   rule:a[n+1]=B^q[n]       exponential in q[n]
struct TailRule {
    enum class Kind { constant, arithmetic, power_of_q, growing_power_of_q, exp_of_q };

    Kind kind = Kind::constant;
    BigInt k1 = 1;   // constant value / polynomial coefficient / exponent / base
    BigInt k2 = 0;   // polynomial offset
    unsigned k3 = 1; // polynomial degree

    static TailRule constant(BigInt k) {
        if (k < 1) throw InvalidInputError("tail rule: constant quotient must be >= 1");
        return {Kind::constant, std::move(k), 0, 1};
    }
    static TailRule arithmetic(BigInt c, BigInt d, unsigned degree = 1) {
        if (c < 0 || (c == 0 && d < 1) || c + d < 1 || degree < 1)
            throw InvalidInputError("tail rule: polynomial rule must produce quotients >= 1");
        return {Kind::arithmetic, std::move(c), std::move(d), degree};
    }
    static TailRule power_of_q(BigInt k) {
        if (k < 1) throw InvalidInputError("tail rule: exponent must be >= 1");
        return {Kind::power_of_q, std::move(k), 0, 1};
    }
    static TailRule growing_power_of_q() { return {Kind::growing_power_of_q, 1, 0, 1}; }
    static TailRule exp_of_q(BigInt base) {
        if (base < 2) throw InvalidInputError("tail rule: exponential base must be >= 2");
        return {Kind::exp_of_q, std::move(base), 0, 1};
    }

    static TailRule parse(std::string_view s);
    std::string str() const;
};

struct Convergent {
    BigInt p;
    BigInt q;
};

// Rotation number theta as a partial-quotient stream. The convergent cache is
// append-only and safely extendable under concurrent readers; everything else
// is immutable after construction.
class ContinuedFraction {
public:
    static constexpr std::size_t kDefaultBitBudget = std::size_t(1) << 20;

    explicit ContinuedFraction(std::vector<BigInt> coeffs, std::optional<TailRule> tail = std::nullopt,
                               std::size_t bit_budget = kDefaultBitBudget)
        : prefix_(std::move(coeffs)), tail_(std::move(tail)), bit_budget_(bit_budget),
          cache_(std::make_shared<Cache>()) {
        if (prefix_.empty()) throw InvalidInputError("continued fraction: empty quotient list");
        for (const BigInt& a : prefix_)
            if (a < 1) throw InvalidInputError("continued fraction: all quotients must be >= 1");
    }

    // Text format: comma-separated quotients with an optional tail suffix,
    // e.g. "1,1,1;tail=const:1" or "2,3;tail=rule:a[n+1]=q[n]".
    static ContinuedFraction parse(std::string_view s);

    const std::vector<BigInt>& prefix() const { return prefix_; }
    const std::optional<TailRule>& tail() const { return tail_; }
    bool has_tail() const { return tail_.has_value(); }
    std::size_t prefix_size() const { return prefix_.size(); }

    // A finite expansion denotes the exact rational p_N/q_N only in canonical
    // form (last quotient >= 2); a finite list ending in 1 is treated as a
    // prefix of an undetermined number.
    bool is_exact_rational() const { return !tail_ && prefix_.back() >= 2; }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < prefix_.size(); ++i) {
            if (i) os << ',';
            os << prefix_[i];
        }
        if (tail_) os << ";tail=" << tail_->str();
        return os.str();
    }

    // a_n, 1-based. Extends through the tail rule on demand.
    BigInt coefficient(std::size_t n) const {
        if (n == 0) throw InvalidInputError("coefficient index is 1-based");
        ensure_depth(n);
        std::shared_lock lock(cache_->mu);
        return cache_->coeffs[n - 1];
    }

    // Convergent p_n/q_n, with p_0/q_0 = 0/1.
    Convergent convergent(std::size_t n) const {
        ensure_depth(n);
        std::shared_lock lock(cache_->mu);
        return cache_->conv[n];
    }

private:
    struct Cache {
        mutable std::shared_mutex mu;
        std::vector<BigInt> coeffs;
        std::vector<Convergent> conv;  // conv[0] = {0,1}
    };

    void ensure_depth(std::size_t n) const {
        {
            std::shared_lock lock(cache_->mu);
            if (cache_->conv.size() > n) return;
        }
        std::unique_lock lock(cache_->mu);
        if (cache_->conv.empty()) cache_->conv.push_back({0, 1});
        while (cache_->conv.size() <= n) {
            std::size_t m = cache_->conv.size();  // index of the quotient being added
            BigInt a = next_coefficient(m);
            const Convergent& c1 = cache_->conv[m - 1];
            const Convergent* c2 = m >= 2 ? &cache_->conv[m - 2] : nullptr;
            BigInt p = a * c1.p + (c2 ? c2->p : BigInt(1));  // p_{-1} = 1
            BigInt q = a * c1.q + (c2 ? c2->q : BigInt(0));  // q_{-1} = 0
            if (bit_length(q) > bit_budget_)
                throw PrecisionUnreachableError("continued fraction: convergent exceeds the bit budget at depth " +
                                                std::to_string(m));
            cache_->coeffs.push_back(std::move(a));
            cache_->conv.push_back({std::move(p), std::move(q)});
        }
    }

    // Quotient a_m (1-based), assuming convergents < m are cached. Caller holds
    // the unique lock.
    BigInt next_coefficient(std::size_t m) const {
        if (m <= prefix_.size()) return prefix_[m - 1];
        if (!tail_)
            throw PrecisionUnreachableError("continued fraction: prefix exhausted at depth " + std::to_string(m) +
                                            " and no tail rule is present");
        const BigInt& q_prev = cache_->conv[m - 1].q;  // q_{m-1}
        switch (tail_->kind) {
            case TailRule::Kind::constant:
                return tail_->k1;
            case TailRule::Kind::arithmetic:
                return tail_->k1 * boost::multiprecision::pow(BigInt(m), tail_->k3) + tail_->k2;
            case TailRule::Kind::power_of_q: {
                check_pow_budget(bit_length(q_prev), tail_->k1);
                return boost::multiprecision::pow(q_prev, tail_->k1.convert_to<unsigned>());
            }
            case TailRule::Kind::growing_power_of_q: {
                check_pow_budget(bit_length(q_prev), BigInt(m - 1));
                return boost::multiprecision::pow(q_prev, static_cast<unsigned>(m - 1));
            }
            case TailRule::Kind::exp_of_q: {
                if (q_prev > BigInt(bit_budget_))
                    throw PrecisionUnreachableError("continued fraction: exponential tail exceeds the bit budget");
                check_pow_budget(bit_length(tail_->k1), q_prev);
                return boost::multiprecision::pow(tail_->k1, q_prev.convert_to<unsigned>());
            }
        }
        throw Error("unreachable tail kind");
    }

    void check_pow_budget(std::size_t base_bits, const BigInt& expo) const {
        if (BigInt(base_bits) * expo > BigInt(bit_budget_))
            throw PrecisionUnreachableError("continued fraction: tail rule exceeds the bit budget");
    }

    std::vector<BigInt> prefix_;
    std::optional<TailRule> tail_;
    std::size_t bit_budget_;
    std::shared_ptr<Cache> cache_;  // shared across copies; append-only
};

// An exact rational enclosure of a (possibly irrational) circle point:
// the represented real lies in [value - error_bound, value + error_bound].
struct AngleApproximation {
    BigRat value;        // in [0,1)
    BigRat error_bound;  // >= 0

    Angle angle() const { return Angle(value); }
};

struct ClassificationReport {
    TriState constant_type = TriState::unknown;
    TriState diophantine = TriState::unknown;
    TriState brjuno = TriState::unknown;
    std::string witness;
    std::size_t depth_used = 0;
};

namespace detail {

// theta bracketed by two consecutive convergents (they straddle theta).
inline std::pair<BigRat, BigRat> convergent_bracket(const ContinuedFraction& cf, std::size_t n) {
    Convergent a = cf.convergent(n);
    Convergent b = cf.convergent(n + 1);
    BigRat x(a.p, a.q), y(b.p, b.q);
    return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
}

}  // namespace detail

// Best rational approximation p_n/q_n with certified error 1/(q_n q_{n+1}) <= eps.
// Canonical finite expansions are exact and report error 0.
inline AngleApproximation cf_value(const ContinuedFraction& cf, const BigRat& eps) {
    if (eps <= 0) throw InvalidInputError("cf_value: eps must be positive");
    if (cf.is_exact_rational()) {
        Convergent last = cf.convergent(cf.prefix_size());
        BigRat v(last.p, last.q);
        BigInt f = floor_rat(v);
        if (f != 0) v -= BigRat(f, 1);
        return {v, BigRat(0)};
    }
    for (std::size_t n = 1;; ++n) {
        if (!cf.has_tail() && n + 1 > cf.prefix_size())
            throw PrecisionUnreachableError("cf_value: finite prefix cannot certify error <= " + rat_to_string(eps));
        Convergent c = cf.convergent(n);       // may throw PrecisionUnreachable via bit budget
        Convergent d = cf.convergent(n + 1);
        BigRat bound(BigInt(1), c.q * d.q);
        if (bound <= eps) return {BigRat(c.p, c.q), bound};
    }
}

// Sum_{n=1}^{N} log(q_{n+1}) / q_n. Terms whose q_n exceeds the double range
// contribute less than 1e-300 and evaluate as 0.
inline double brjuno_partial_sum(const ContinuedFraction& cf, std::size_t N) {
    double sum = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        BigInt qn = cf.convergent(n).q;
        BigInt qn1 = cf.convergent(n + 1).q;
        double ln_q = ln_big(qn1);
        double term = bit_length(qn) <= 1000 ? ln_q / qn.convert_to<double>() : 0.0;
        sum += term;
    }
    return sum;
}

// Single term log(q_{n+1})/q_n of the Brjuno series.
inline double brjuno_term(const ContinuedFraction& cf, std::size_t n) {
    BigInt qn = cf.convergent(n).q;
    BigInt qn1 = cf.convergent(n + 1).q;
    return bit_length(qn) <= 1000 ? ln_big(qn1) / qn.convert_to<double>() : 0.0;
}

// Classifies theta into the constant-type / Diophantine / Brjuno chain.
// Membership is a tail property: a definite answer requires a tail rule whose
// asymptotics are decidable from its form; a bare prefix yields "unknown".
inline ClassificationReport classify(const ContinuedFraction& cf, std::size_t depth) {
    if (depth < 2) throw InvalidInputError("classify: depth must be >= 2");
    ClassificationReport rep;

    // Numeric evidence over whatever depth the bit budget allows.
    std::size_t reached = 0;
    double sup_a_prefix = 0.0;
    double last_log_ratio = 0.0, last_term = 0.0, partial = 0.0;
    for (std::size_t n = 1; n <= depth; ++n) {
        try {
            BigInt a = cf.coefficient(n);
            BigInt qn = cf.convergent(n).q;
            BigInt qn1 = cf.convergent(n + 1).q;
            sup_a_prefix = std::max(sup_a_prefix, bit_length(a) <= 1000 ? a.convert_to<double>() : 1e300);
            if (qn > 1) last_log_ratio = ln_big(qn1) / ln_big(qn);
            last_term = bit_length(qn) <= 1000 ? ln_big(qn1) / qn.convert_to<double>() : 0.0;
            partial += last_term;
            reached = n;
        } catch (const PrecisionUnreachableError&) {
            break;
        }
    }
    rep.depth_used = reached;

    std::ostringstream w;
    if (!cf.has_tail()) {
        w << "finite prefix of length " << cf.prefix_size()
          << ": constant-type/Diophantine/Brjuno membership is a tail property and cannot be decided; "
          << "partial sum through N=" << reached << " is " << partial;
        rep.witness = w.str();
        return rep;
    }

    const TailRule& rule = *cf.tail();
    switch (rule.kind) {
        case TailRule::Kind::constant:
            rep.constant_type = TriState::yes;
            rep.diophantine = TriState::yes;
            rep.brjuno = TriState::yes;
            w << "sup_n a_n = max(prefix, " << rule.k1 << ") = "
              << std::max(sup_a_prefix, rule.k1.convert_to<double>())
              << " is finite, so theta is of constant type (hence Diophantine and Brjuno); "
              << "log q_{n+1}/log q_n = " << last_log_ratio << " at depth " << reached
              << ", Brjuno partial sum " << partial;
            break;
        case TailRule::Kind::arithmetic:
            rep.constant_type = TriState::no;
            rep.diophantine = TriState::yes;
            rep.brjuno = TriState::yes;
            w << "a_n = " << rule.str().substr(6)
              << " is polynomially unbounded (not constant type), but log q_{n+1}/log q_n -> 1 "
              << "(observed " << last_log_ratio << " at depth " << reached
              << "), so theta is Diophantine and the Brjuno series converges (partial sum " << partial
              << ", last term " << last_term << ")";
            break;
        case TailRule::Kind::power_of_q:
            rep.constant_type = TriState::no;
            rep.diophantine = TriState::yes;
            rep.brjuno = TriState::yes;
            w << "a_{n+1} = q_n^" << rule.k1 << " gives log q_{n+1}/log q_n -> " << (rule.k1 + 1)
              << " (observed " << last_log_ratio << " at depth " << reached
              << "): a bounded ratio, so theta is Diophantine; q_n grows doubly exponentially and the "
              << "Brjuno terms vanish (last term " << last_term << ", partial sum " << partial << ")";
            break;
        case TailRule::Kind::growing_power_of_q:
            rep.constant_type = TriState::no;
            rep.diophantine = TriState::no;
            rep.brjuno = TriState::yes;
            w << "a_{n+1} = q_n^n gives log q_{n+1}/log q_n ~ n+1, unbounded "
              << "(observed " << last_log_ratio << " at depth " << reached
              << "), so theta is not Diophantine; q_n still grows fast enough that "
              << "log(q_{n+1})/q_n -> 0 superexponentially (last term " << last_term
              << ", partial sum " << partial << " stable), so the Brjuno series converges";
            break;
        case TailRule::Kind::exp_of_q:
            rep.constant_type = TriState::no;
            rep.diophantine = TriState::no;
            rep.brjuno = TriState::no;
            w << "a_{n+1} = " << rule.k1 << "^q_n gives log q_{n+1} >= q_n*log(" << rule.k1
              << "), so every Brjuno term log(q_{n+1})/q_n >= log(" << rule.k1 << ") = "
              << ln_big(rule.k1) << " (observed last term " << last_term << " at depth " << reached
              << "); the series diverges and theta is neither Brjuno nor Diophantine nor of constant type";
            break;
    }
    rep.witness = w.str();

    // CT => D => B must hold structurally.
    auto rank = [](TriState t) { return t == TriState::yes ? 2 : (t == TriState::unknown ? 1 : 0); };
    if (rank(rep.constant_type) > rank(rep.diophantine) || rank(rep.diophantine) > rank(rep.brjuno))
        throw ConsistencyFailureError("classify: inclusion chain CT within D within B violated");
    return rep;
}

// Exact partial sum over q <= Q of floor(q*theta) * 2^-(q+1), counting all
// integer pairs (p,q) with 0 < p/q < theta (fractions not required reduced).
// Counts are certified through an exact convergent bracket of theta; an
// ambiguous floor deepens the bracket until resolved.
inline BigRat critical_angle_partial_sum(const ContinuedFraction& cf, unsigned Q) {
    if (!cf.has_tail())
        throw InvalidInputError("critical angle: rotation number must be irrational (tail rule required)");
    std::size_t depth = 2;
    auto [lo, hi] = detail::convergent_bracket(cf, depth);
    BigRat sum(0);
    for (unsigned q = 1; q <= Q; ++q) {
        BigInt fl, fh;
        for (;;) {
            fl = floor_rat(lo * q);
            fh = floor_rat(hi * q);
            if (fl == fh) break;
            ++depth;  // irrational theta: q*theta is never an integer, so this resolves
            std::tie(lo, hi) = detail::convergent_bracket(cf, depth);
        }
        if (fl > 0) sum += BigRat(fl, 1) * pow2_rat(-static_cast<long>(q) - 1);
    }
    return sum;
}

// The critical angle t = sum_{0 < p/q < theta} 2^-(q+1) as a certified dyadic
// enclosure: the truncation at Q is exact and the dropped tail is bounded by
// (Q+2) * 2^-(Q+1) <= err.
inline AngleApproximation critical_angle(const ContinuedFraction& cf, const BigRat& err) {
    if (err <= 0) throw InvalidInputError("critical angle: err must be positive");
    if (!cf.has_tail())
        throw InvalidInputError("critical angle: the series is defined for irrational rotation numbers; "
                                "rational (or undetermined) input rejected");
    unsigned Q = 1;
    while (BigRat(BigInt(Q) + 2, BigInt(1) << (Q + 1)) > err) ++Q;
    BigRat tail_bound(BigInt(Q) + 2, BigInt(1) << (Q + 1));
    return {critical_angle_partial_sum(cf, Q), tail_bound};
}

// --- text formats ---------------------------------------------------------

inline TailRule TailRule::parse(std::string_view s) {
    auto fail = [&] { throw InvalidInputError("cannot parse tail rule: '" + std::string(s) + "'"); };
    auto starts = [&](std::string_view p) { return s.substr(0, p.size()) == p; };
    try {
        if (starts("const:")) return TailRule::constant(BigInt(std::string(s.substr(6))));
        if (starts("arith:")) {
            // C*n^P+D with shorthands "n", "2n", "n+3", "n^2", "2*n^2+1"
            std::string body(s.substr(6));
            auto npos = body.find('n');
            if (npos == std::string::npos) fail();
            std::string cs = body.substr(0, npos);
            if (!cs.empty() && cs.back() == '*') cs.pop_back();
            BigInt c = cs.empty() ? BigInt(1) : BigInt(cs);
            unsigned degree = 1;
            std::size_t rest = npos + 1;
            if (rest < body.size() && body[rest] == '^') {
                std::size_t plus = body.find('+', rest);
                std::string ds = body.substr(rest + 1, plus == std::string::npos ? std::string::npos
                                                                                 : plus - rest - 1);
                degree = static_cast<unsigned>(std::stoul(ds));
                rest = plus == std::string::npos ? body.size() : plus;
            }
            BigInt d = 0;
            if (rest < body.size()) {
                if (body[rest] != '+') fail();
                d = BigInt(body.substr(rest + 1));
            }
            return TailRule::arithmetic(c, d, degree);
        }
        if (starts("rule:a[n+1]=")) {
            std::string body(s.substr(12));
            if (body == "q[n]") return TailRule::power_of_q(1);
            if (body == "q[n]^n") return TailRule::growing_power_of_q();
            if (body.rfind("q[n]^", 0) == 0) return TailRule::power_of_q(BigInt(body.substr(5)));
            if (auto caret = body.find("^q[n]"); caret != std::string::npos && caret + 5 == body.size())
                return TailRule::exp_of_q(BigInt(body.substr(0, caret)));
            fail();
        }
    } catch (const InvalidInputError&) {
        throw;
    } catch (const std::exception&) {
        fail();
    }
    fail();
    return {};  // unreachable
}

inline std::string TailRule::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << "const:" << k1; break;
        case Kind::arithmetic:
            os << "arith:" << k1 << "*n";
            if (k3 != 1) os << '^' << k3;
            os << '+' << k2;
            break;
        case Kind::power_of_q:
            if (k1 == 1)
                os << "rule:a[n+1]=q[n]";
            else
                os << "rule:a[n+1]=q[n]^" << k1;
            break;
        case Kind::growing_power_of_q: os << "rule:a[n+1]=q[n]^n"; break;
        case Kind::exp_of_q: os << "rule:a[n+1]=" << k1 << "^q[n]"; break;
    }
    return os.str();
}

inline ContinuedFraction ContinuedFraction::parse(std::string_view s) {
    std::optional<TailRule> tail;
    std::string_view head = s;
    if (auto semi = s.find(';'); semi != std::string_view::npos) {
        std::string_view rest = s.substr(semi + 1);
        if (rest.rfind("tail=", 0) != 0)
            throw InvalidInputError("continued fraction: expected ';tail=...' suffix");
        tail = TailRule::parse(rest.substr(5));
        head = s.substr(0, semi);
    }
    std::vector<BigInt> coeffs;
    std::size_t start = 0;
    while (start <= head.size()) {
        auto comma = head.find(',', start);
        std::string tok(head.substr(start, comma == std::string_view::npos ? head.size() - start : comma - start));
        if (tok.empty()) throw InvalidInputError("continued fraction: empty quotient");
        try {
            coeffs.emplace_back(tok);
        } catch (const std::exception&) {
            throw InvalidInputError("continued fraction: bad quotient '" + tok + "'");
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return ContinuedFraction(std::move(coeffs), std::move(tail));
}

}  // namespace julia_rays
