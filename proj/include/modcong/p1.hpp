#ifndef MODCONG_P1_HPP
#define MODCONG_P1_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "modcong/arith.hpp"

namespace modcong {

// P^1(Z/N): canonical representatives and index lookup.  The canonical
// representative of (c:d) has first coordinate gcd(c, N) and the smallest
// second coordinate in its unit-scaling orbit.
class P1 {
  public:
    explicit P1(int64_t n) : n_(n) {
        if (n < 1) throw std::invalid_argument("P1: level must be >= 1");
        if (n == 1) {
            reps_ = {{0, 0}};
            return;
        }
        for (int64_t g : divisors(n)) {
            if (g == n) {
                reps_.emplace_back(0, 1);  // the (0:1) class
                continue;
            }
            for (int64_t d = 0; d < n; ++d) {
                if (std::gcd(g, d) != 1) continue;
                auto [cc, dd] = normalize(g, d);
                if (cc == g && dd == d) reps_.emplace_back(g, d);
            }
        }
        std::sort(reps_.begin(), reps_.end());
    }

    int64_t level() const { return n_; }
    size_t size() const { return reps_.size(); }
    const std::vector<std::pair<int64_t, int64_t>>& reps() const { return reps_; }

    // canonical representative; requires gcd(c, d, N) = 1
    std::pair<int64_t, int64_t> normalize(int64_t c, int64_t d) const {
        if (n_ == 1) return {0, 0};
        c %= n_; if (c < 0) c += n_;
        d %= n_; if (d < 0) d += n_;
        if (c == 0) {
            if (std::gcd(d, n_) != 1) throw std::invalid_argument("P1::normalize: not coprime");
            return {0, 1};
        }
        int64_t g = std::gcd(c, n_);
        if (std::gcd(g, d) != 1) throw std::invalid_argument("P1::normalize: not coprime");
        int64_t c1 = c / g, n1 = n_ / g;
        // u0 * c1 == 1 (mod n1)
        int64_t u0 = mod_inverse(c1 % n1, n1);
        int64_t best = -1;
        for (int64_t t = 0; t < g; ++t) {
            int64_t u = (u0 + t * n1) % n_;
            if (std::gcd(u, n_) != 1) continue;
            int64_t dd = mul_mod(u, d);
            if (best < 0 || dd < best) best = dd;
        }
        return {g, best};
    }

    // index of the class of (c, d), or -1 when gcd(c, d, N) > 1
    int index_of(int64_t c, int64_t d) const {
        c %= n_; if (c < 0) c += n_;
        d %= n_; if (d < 0) d += n_;
        if (n_ > 1 && std::gcd(std::gcd(c, d), n_) != 1) return -1;
        auto key = normalize(c, d);
        auto it = std::lower_bound(reps_.begin(), reps_.end(), key);
        if (it == reps_.end() || *it != key) return -1;
        return static_cast<int>(it - reps_.begin());
    }

  private:
    int64_t mul_mod(int64_t a, int64_t b) const {
        return static_cast<int64_t>((static_cast<__int128>(a) * b) % n_);
    }

    static int64_t mod_inverse(int64_t a, int64_t m) {
        if (m == 1) return 0;
        int64_t t = 0, newt = 1, r = m, newr = a % m;
        while (newr != 0) {
            int64_t q = r / newr;
            t -= q * newt; std::swap(t, newt);
            r -= q * newr; std::swap(r, newr);
        }
        if (r != 1) throw std::invalid_argument("P1: element not invertible");
        return t < 0 ? t + m : t;
    }

    int64_t n_;
    std::vector<std::pair<int64_t, int64_t>> reps_;
};

// number of P^1(Z/N) points: N * prod (1 + 1/p)
inline int64_t p1_size_formula(int64_t n) {
    int64_t s = n;
    for (int64_t p : prime_divisors(n)) s += s / p;
    return n == 1 ? 1 : s;
}

}  // namespace modcong

#endif
