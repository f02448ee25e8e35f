#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "tropgw/intvec.hpp"
#include "tropgw/rational.hpp"

namespace tropgw {

struct BadConstantTerm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponent of a monomial z^(m, a): boundary vector m in the local chart
// lattice and the non-negative order grade a. The grade replaces the Novikov
// exponent; it counts initial-wall factors consumed. a = 0 only for the unit.
struct ClassExponent {
    IntVec2 m;
    int a = 0;

    ClassExponent operator+(const ClassExponent& o) const { return {m + o.m, a + o.a}; }
    ClassExponent operator*(int k) const { return {m * k, a * k}; }
    bool is_unit() const { return a == 0 && m.is_zero(); }

    friend bool operator==(const ClassExponent&, const ClassExponent&) = default;
    // canonical term order: lexicographic on (a, m.x, m.y)
    friend bool operator<(const ClassExponent& l, const ClassExponent& r) {
        if (l.a != r.a) return l.a < r.a;
        if (l.m.x != r.m.x) return l.m.x < r.m.x;
        return l.m.y < r.m.y;
    }
};

// Truncated formal power series over Rat on the exponent lattice.
// Terms with grade above trunc are dropped; no zero coefficients stored.
class FormalSeries {
public:
    using Terms = std::map<ClassExponent, Rat>;

    explicit FormalSeries(int trunc = 0) : trunc_(trunc) {}

    static FormalSeries one(int trunc) {
        FormalSeries s(trunc);
        s.terms_[{{0, 0}, 0}] = 1;
        return s;
    }
    static FormalSeries monomial(int trunc, ClassExponent e, Rat c) {
        FormalSeries s(trunc);
        s.add_term(e, c);
        return s;
    }

    int trunc() const { return trunc_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coeff(const ClassExponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }
    Rat constant_term() const { return coeff({{0, 0}, 0}); }

    void add_term(const ClassExponent& e, const Rat& c) {
        if (e.a > trunc_ || c == 0) return;
        auto [it, ins] = terms_.emplace(e, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    FormalSeries& operator+=(const FormalSeries& o) {
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    FormalSeries operator+(const FormalSeries& o) const {
        FormalSeries s = *this;
        s += o;
        return s;
    }
    FormalSeries operator-(const FormalSeries& o) const {
        FormalSeries s = *this;
        for (auto& [e, c] : o.terms_) s.add_term(e, -c);
        return s;
    }
    FormalSeries operator*(const FormalSeries& o) const {
        FormalSeries s(std::min(trunc_, o.trunc_));
        for (auto& [e1, c1] : terms_) {
            if (e1.a > s.trunc()) continue;
            for (auto& [e2, c2] : o.terms_) {
                if (e1.a + e2.a > s.trunc()) break; // terms_ sorted by grade first
                s.add_term(e1 + e2, c1 * c2);
            }
        }
        return s;
    }
    FormalSeries scaled(const Rat& c) const {
        FormalSeries s(trunc_);
        if (c == 0) return s;
        for (auto& [e, v] : terms_) s.terms_[e] = v * c;
        return s;
    }

    FormalSeries truncated(int n) const {
        FormalSeries s(n);
        for (auto& [e, c] : terms_) s.add_term(e, c);
        return s;
    }

    // f^e for integer e (possibly negative); requires constant term 1.
    // Binomial series in u = f - 1, which is nilpotent mod the truncation.
    FormalSeries int_pow(long e) const {
        if (constant_term() != 1) throw BadConstantTerm("int_pow needs constant term 1");
        FormalSeries u = *this;
        u.add_term({{0, 0}, 0}, -1);
        FormalSeries out = one(trunc_);
        FormalSeries upow = one(trunc_);
        Rat binom = 1;
        for (long k = 1; k <= trunc_; ++k) {
            binom *= Rat(e - (k - 1), k);
            upow = upow * u;
            if (upow.is_zero() || binom == 0) break;
            out += upow.scaled(binom);
        }
        return out;
    }

    // log f; requires constant term 1.
    FormalSeries log() const {
        if (constant_term() != 1) throw BadConstantTerm("log needs constant term 1");
        FormalSeries u = *this;
        u.add_term({{0, 0}, 0}, -1);
        FormalSeries out(trunc_);
        FormalSeries upow = one(trunc_);
        int sign = 1;
        for (int k = 1; k <= trunc_; ++k) {
            upow = upow * u;
            if (upow.is_zero()) break;
            out += upow.scaled(Rat(sign, k));
            sign = -sign;
        }
        return out;
    }

    // exp s; requires constant term 0.
    FormalSeries exp() const {
        if (constant_term() != 0) throw BadConstantTerm("exp needs constant term 0");
        FormalSeries out = one(trunc_);
        FormalSeries pow = one(trunc_);
        Rat fact = 1;
        for (int k = 1; k <= trunc_; ++k) {
            pow = pow * *this;
            if (pow.is_zero()) break;
            fact /= k;
            out += pow.scaled(fact);
        }
        return out;
    }

    // Applies an integral linear map to every monomial's boundary vector.
    FormalSeries mapped(const Mat2& t) const {
        FormalSeries s(trunc_);
        for (auto& [e, c] : terms_) s.add_term({t.apply(e.m), e.a}, c);
        return s;
    }

    friend bool operator==(const FormalSeries& l, const FormalSeries& r) {
        return l.terms_ == r.terms_;
    }

private:
    int trunc_;
    Terms terms_;
};

// Wall function: constant term 1, every other term's m a positive multiple of
// the primitive direction dir (in the frame the function is expressed in).
struct WallFunction {
    FormalSeries f;
    IntVec2 dir; // primitive

    bool valid() const {
        if (f.constant_term() != 1) return false;
        for (auto& [e, c] : f.terms()) {
            if (e.is_unit()) continue;
            if (e.a < 1 || !positively_parallel(dir, e.m)) return false;
        }
        return true;
    }
    bool is_trivial_mod(int n) const {
        for (auto& [e, c] : f.terms())
            if (!e.is_unit() && e.a <= n) return false;
        return true;
    }
};

// Wall-crossing automorphism z^g -> z^g * f^(sign * <m(g), gamma_dir>) with
// gamma_dir primitive. Unit monomial and parallel classes are fixed.
struct WallAutomorphism {
    WallFunction wall;
    int sign = 1; // +1 or -1

    FormalSeries apply(const FormalSeries& g) const {
        FormalSeries out(std::min(g.trunc(), wall.f.trunc()));
        std::map<long, FormalSeries> pow_cache;
        for (auto& [e, c] : g.terms()) {
            long ex = sign * pairing(e.m, wall.dir);
            if (ex == 0) {
                out.add_term(e, c);
                continue;
            }
            auto it = pow_cache.find(ex);
            if (it == pow_cache.end()) it = pow_cache.emplace(ex, wall.f.int_pow(ex)).first;
            for (auto& [ef, cf] : it->second.terms()) out.add_term(e + ef, c * cf);
        }
        return out;
    }
    WallAutomorphism inverse() const { return {wall, -sign}; }
};

inline FormalSeries apply_automorphism(const WallAutomorphism& k, const FormalSeries& g) {
    return k.apply(g);
}

} // namespace tropgw
