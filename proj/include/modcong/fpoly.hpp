#ifndef MODCONG_FPOLY_HPP
#define MODCONG_FPOLY_HPP

#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"

namespace modcong {

// Polynomials over F_p, coefficients ascending in [0, p).  p is passed
// explicitly; arbitrary precision so congruence primes can be huge.
using FpPoly = std::vector<Int>;

namespace fp {

inline void trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

inline bool is_zero(const FpPoly& f) { return f.empty(); }

inline FpPoly reduce(std::vector<Int> coeffs, const Int& p) {
    for (auto& c : coeffs) c = fdiv_r(c, p);
    trim(coeffs);
    return coeffs;
}

inline FpPoly x() { return FpPoly{0, 1}; }

inline FpPoly constant(Int c, const Int& p) {
    c = fdiv_r(c, p);
    if (c == 0) return {};
    return {c};
}

inline FpPoly add(const FpPoly& a, const FpPoly& b, const Int& p) {
    FpPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = fdiv_r(r[i] + b[i], p);
    trim(r);
    return r;
}

inline FpPoly sub(const FpPoly& a, const FpPoly& b, const Int& p) {
    FpPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = fdiv_r(r[i] - b[i], p);
    trim(r);
    return r;
}

inline FpPoly mul(const FpPoly& a, const FpPoly& b, const Int& p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& c : r) c = fdiv_r(c, p);
    trim(r);
    return r;
}

inline FpPoly scalar_mul(const FpPoly& a, const Int& s, const Int& p) {
    FpPoly r(a);
    for (auto& c : r) c = fdiv_r(c * s, p);
    trim(r);
    return r;
}

// divisor must be nonzero
inline std::pair<FpPoly, FpPoly> divrem(FpPoly a, const FpPoly& b, const Int& p) {
    if (b.empty()) throw std::invalid_argument("fp::divrem: division by zero");
    if (degree(a) < degree(b)) return {{}, std::move(a)};
    Int lcinv = invmod(b.back(), p);
    FpPoly q(a.size() - b.size() + 1, Int(0));
    for (int k = degree(a) - degree(b); k >= 0; --k) {
        size_t top = b.size() - 1 + static_cast<size_t>(k);
        if (top >= a.size() || a[top] == 0) continue;
        Int f = fdiv_r(a[top] * lcinv, p);
        q[static_cast<size_t>(k)] = f;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + static_cast<size_t>(k)] = fdiv_r(a[i + static_cast<size_t>(k)] - f * b[i], p);
    }
    trim(a);
    return {std::move(q), std::move(a)};
}

inline FpPoly mod(const FpPoly& a, const FpPoly& b, const Int& p) {
    return divrem(a, b, p).second;
}

inline FpPoly monic(const FpPoly& f, const Int& p) {
    if (f.empty() || f.back() == 1) return f;
    return scalar_mul(f, invmod(f.back(), p), p);
}

inline FpPoly gcd(FpPoly a, FpPoly b, const Int& p) {
    while (!b.empty()) {
        FpPoly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

// g = u*a + v*b, g monic (or zero)
inline FpPoly xgcd(FpPoly a, FpPoly b, const Int& p, FpPoly& u, FpPoly& v) {
    FpPoly u0{1}, v0{}, u1{}, v1{1};
    while (!b.empty()) {
        auto [q, r] = divrem(a, b, p);
        a = std::move(b);
        b = std::move(r);
        FpPoly u2 = sub(u0, mul(q, u1, p), p);
        FpPoly v2 = sub(v0, mul(q, v1, p), p);
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    if (!a.empty() && a.back() != 1) {
        Int inv = invmod(a.back(), p);
        a = scalar_mul(a, inv, p);
        u0 = scalar_mul(u0, inv, p);
        v0 = scalar_mul(v0, inv, p);
    }
    u = std::move(u0);
    v = std::move(v0);
    return a;
}

// inverse of a modulo m (requires gcd(a, m) = 1)
inline FpPoly invmod_poly(const FpPoly& a, const FpPoly& m, const Int& p) {
    FpPoly u, v;
    FpPoly g = xgcd(mod(a, m, p), m, p, u, v);
    if (degree(g) != 0) throw std::invalid_argument("fp::invmod_poly: not invertible");
    return mod(u, m, p);
}

inline FpPoly derivative(const FpPoly& f, const Int& p) {
    if (f.size() <= 1) return {};
    FpPoly r(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = fdiv_r(f[i] * Int(static_cast<long>(i)), p);
    trim(r);
    return r;
}

inline FpPoly powmod(FpPoly base, Int e, const FpPoly& m, const Int& p) {
    FpPoly r{1};
    base = mod(base, m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

// p-th root of a polynomial in x^p (Frobenius is identity on F_p).
inline FpPoly pth_root(const FpPoly& f, const Int& p) {
    if (f.empty()) return {};
    if (!p.fits_slong_p()) throw std::invalid_argument("fp::pth_root: modulus too large");
    long pl = p.get_si();
    FpPoly r((f.size() - 1) / static_cast<size_t>(pl) + 1, Int(0));
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        if (i % static_cast<size_t>(pl) != 0)
            throw std::invalid_argument("fp::pth_root: not a polynomial in x^p");
        r[i / static_cast<size_t>(pl)] = f[i];
    }
    trim(r);
    return r;
}

namespace detail {

inline FpPoly random_poly(int max_deg, const Int& p, std::mt19937_64& rng) {
    FpPoly r(static_cast<size_t>(max_deg) + 1);
    for (auto& c : r) {
        Int v = 0;
        // enough 32-bit chunks to cover p
        size_t bits = mpz_sizeinbase(p.get_mpz_t(), 2) + 16;
        for (size_t got = 0; got < bits; got += 32)
            v = (v << 32) + static_cast<unsigned long>(rng() & 0xffffffffu);
        c = fdiv_r(v, p);
    }
    trim(r);
    return r;
}

// Split a monic squarefree product of distinct irreducibles of degree d.
inline void equal_degree_split(const FpPoly& f, int d, const Int& p,
                               std::mt19937_64& rng, std::vector<FpPoly>& out) {
    if (degree(f) == d) {
        out.push_back(f);
        return;
    }
    FpPoly h;
    for (;;) {
        FpPoly a = random_poly(degree(f) - 1, p, rng);
        if (a.empty()) continue;
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1))
            FpPoly t = a, sq = a;
            for (int i = 1; i < d; ++i) {
                sq = mod(mul(sq, sq, p), f, p);
                t = add(t, sq, p);
            }
            h = gcd(t, f, p);
        } else {
            Int e = (pow_int(p, static_cast<unsigned long>(d)) - 1) / 2;
            FpPoly b = powmod(a, e, f, p);
            if (b.empty()) continue;
            b = sub(b, FpPoly{1}, p);
            h = gcd(b, f, p);
        }
        if (degree(h) > 0 && degree(h) < degree(f)) break;
    }
    equal_degree_split(h, d, p, rng, out);
    equal_degree_split(divrem(f, h, p).first, d, p, rng, out);
}

}  // namespace detail

// Factor a monic squarefree polynomial into monic irreducibles
// (distinct-degree then equal-degree splitting).
inline std::vector<FpPoly> factor_squarefree(FpPoly f, const Int& p) {
    std::vector<FpPoly> out;
    std::mt19937_64 rng(0x5eedf00dULL);
    FpPoly h = x();
    int d = 0;
    while (degree(f) > 0) {
        ++d;
        if (2 * d > degree(f)) {
            out.push_back(f);
            break;
        }
        h = powmod(h, p, f, p);
        FpPoly g = gcd(sub(h, x(), p), f, p);
        if (degree(g) > 0) {
            detail::equal_degree_split(g, d, p, rng, out);
            f = divrem(f, g, p).first;
            h = mod(h, f, p);
        }
    }
    std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return out;
}

// Full factorization of a nonzero polynomial mod p: unit * prod f_i^e_i.
inline std::vector<std::pair<FpPoly, int>> factor(FpPoly f, const Int& p) {
    if (f.empty()) throw std::invalid_argument("fp::factor: zero polynomial");
    std::vector<std::pair<FpPoly, int>> out;
    f = monic(f, p);
    int e = 1;
    while (degree(f) > 0) {
        FpPoly fp = derivative(f, p);
        if (is_zero(fp)) {
            f = pth_root(f, p);
            if (!p.fits_sint_p()) throw std::invalid_argument("fp::factor: huge p with inseparable input");
            e *= static_cast<int>(p.get_si());
            continue;
        }
        FpPoly c = gcd(f, fp, p);
        FpPoly w = divrem(f, c, p).first;
        int i = 1;
        while (degree(w) > 0) {
            FpPoly y = gcd(w, c, p);
            FpPoly z = divrem(w, y, p).first;
            if (degree(z) > 0)
                for (auto& irr : factor_squarefree(z, p)) out.emplace_back(std::move(irr), i * e);
            w = std::move(y);
            c = divrem(c, w, p).first;
            ++i;
        }
        f = std::move(c);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        for (size_t i = a.first.size(); i-- > 0;)
            if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
        return a.second < b.second;
    });
    return out;
}

}  // namespace fp
}  // namespace modcong

#endif
