#ifndef MODCONG_ARITH_HPP
#define MODCONG_ARITH_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace modcong {

using Int = mpz_class;
using Rat = mpq_class;

// Rational with explicit numerator/denominator, canonicalized.
inline Rat rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// g = a*u + b*v
inline Int xgcd(const Int& a, const Int& b, Int& u, Int& v) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int abs(const Int& a) {
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// Floor division and the matching remainder (sign of divisor).
inline Int fdiv_q(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int fdiv_r(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int powmod(const Int& base, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int invmod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("invmod: not invertible");
    return r;
}

inline bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

inline bool is_prime(int64_t n) { return is_prime(Int(n)); }

inline Int next_prime(const Int& n) {
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline int kronecker(const Int& a, const Int& b) {
    return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t());
}

inline std::vector<int64_t> primes_up_to(int64_t bound) {
    std::vector<int64_t> primes;
    if (bound < 2) return primes;
    std::vector<bool> comp(static_cast<size_t>(bound) + 1, false);
    for (int64_t p = 2; p <= bound; ++p) {
        if (comp[static_cast<size_t>(p)]) continue;
        primes.push_back(p);
        for (int64_t k = p * p; k <= bound; k += p) comp[static_cast<size_t>(k)] = true;
    }
    return primes;
}

// v_p(n) for n != 0.
inline int valuation_int(Int n, const Int& p) {
    if (n == 0) throw std::invalid_argument("valuation_int: zero argument");
    int v = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        if (r != 0) return v;
        n = q;
        ++v;
    }
}

inline std::vector<int64_t> divisors(int64_t n) {
    std::vector<int64_t> small, large;
    for (int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

inline std::vector<int64_t> prime_divisors(int64_t n) {
    std::vector<int64_t> ps;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

namespace detail {

// Brent's cycle variant of Pollard rho; n odd composite, not a prime power of small primes.
inline Int pollard_brent(const Int& n) {
    if (n % 2 == 0) return 2;
    Int y = 2, c = 1, m = 128;
    for (;; ++c) {
        y = 2 + c;  // deterministic restart schedule
        Int g = 1, r = 1, q = 1, x, ys;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int lim = std::min(m, Int(r - k));
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * modcong::abs(x - y) % n;
                }
                g = modcong::gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = modcong::gcd(modcong::abs(x - ys), n);
            }
        }
        if (g != n) return g;
    }
}

inline void factor_rec(const Int& n, std::vector<Int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Int d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace detail

// Full factorization, (prime, exponent) pairs sorted by prime.
inline std::vector<std::pair<Int, int>> factor(Int n) {
    if (n <= 0) throw std::invalid_argument("factor: argument must be positive");
    std::vector<std::pair<Int, int>> out;
    for (int64_t p : {2, 3, 5, 7, 11, 13}) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    }
    for (int64_t p = 17; p < 100000 && Int(p) * p <= n; p += 2) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) {
        std::vector<Int> rest;
        detail::factor_rec(n, rest);
        std::sort(rest.begin(), rest.end());
        for (size_t i = 0; i < rest.size();) {
            size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            out.emplace_back(rest[i], static_cast<int>(j - i));
            i = j;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace modcong

#endif
