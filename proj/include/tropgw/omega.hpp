#pragma once

#include <map>
#include <vector>

#include "tropgw/series.hpp"

namespace tropgw {

// Disc-counting invariants read off wall functions.
//
// For a wall whose monomials are the multiples of a generator class
// gamma0 = (m0, a0) with boundary content w0 = content(m0):
//
//   log f = sum_d  d * w0 * OmegaTilde(d * gamma0) * Z^d,   Z = z^gamma0.
//
// The factor w0 converts between the primitive-direction pairing used by the
// crossing automorphisms and the class-level pairing of the log expansion.
// For initial walls (w0 = 1, f = 1 + Z) this gives (-1)^(d-1)/d^2.

// Coefficients of log f on the multiples of gen; slot d -> coefficient of Z^d.
inline std::map<int, Rat> log_slots(const FormalSeries& f, const ClassExponent& gen) {
    std::map<int, Rat> out;
    FormalSeries lg = f.log();
    for (auto& [e, c] : lg.terms()) {
        if (e.is_unit()) continue;
        // e must be an exact multiple of gen
        if (gen.a == 0) throw std::invalid_argument("generator must have positive grade");
        if (e.a % gen.a != 0) throw std::invalid_argument("term off the generator lattice");
        int d = e.a / gen.a;
        if (!(gen * d == e)) throw std::invalid_argument("term off the generator lattice");
        out[d] = c;
    }
    return out;
}

// OmegaTilde(d * gamma0) for d = 1..trunc, from a wall function supported on
// multiples of gamma0.
inline std::map<int, Rat> extract_omega_tilde(const FormalSeries& f, const ClassExponent& gamma0) {
    auto slots = log_slots(f, gamma0);
    std::int64_t w0 = gamma0.m.is_zero() ? 1 : content(gamma0.m);
    std::map<int, Rat> out;
    for (auto& [d, c] : slots) out[d] = c / Rat(d) / Rat(w0);
    return out;
}

inline int moebius(int n) {
    int mu = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

struct BpsValue {
    Rat value;
    bool integral = false;
};

// Moebius inversion of the multiple cover formula with quadratic refinement
// c = +-1:  Omega(d) = - sum_{k|d} c^(d/k) mu(k) OmegaTilde(d/k) / k^2.
// Non-integral outputs are reported through the flag, not as errors; the
// integrality statement is conjectural.
inline std::map<int, BpsValue> mobius_invert(const std::map<int, Rat>& omega_tilde, int c) {
    std::map<int, BpsValue> out;
    for (auto& [d, unused] : omega_tilde) {
        Rat acc = 0;
        for (int k = 1; k <= d; ++k) {
            if (d % k != 0) continue;
            int mu = moebius(k);
            if (mu == 0) continue;
            auto it = omega_tilde.find(d / k);
            if (it == omega_tilde.end()) continue;
            int cpow = (c == -1 && (d / k) % 2 != 0) ? -1 : 1;
            acc += Rat(cpow * mu) * it->second / Rat(k * k);
        }
        Rat v = -acc;
        out[d] = {v, is_integer(v)};
    }
    return out;
}

} // namespace tropgw
