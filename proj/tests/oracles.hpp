#ifndef MODCONG_TEST_ORACLES_HPP
#define MODCONG_TEST_ORACLES_HPP

// Independent oracles used only by the tests.

#include <cstdint>
#include <numeric>
#include <vector>

#include "modcong/arith.hpp"

namespace oracles {

using modcong::Int;

// genus of X_0(N) by the closed formula
inline int64_t genus_x0(int64_t n) {
    int64_t mu = n;
    for (int64_t p : modcong::prime_divisors(n)) mu += mu / p;

    int64_t nu2 = 1;
    if (n % 4 == 0) {
        nu2 = 0;
    } else {
        for (int64_t p : modcong::prime_divisors(n)) {
            if (p == 2) continue;
            nu2 *= 1 + modcong::kronecker(Int(-1), Int(p));
        }
    }
    int64_t nu3 = 1;
    if (n % 9 == 0) {
        nu3 = 0;
    } else {
        for (int64_t p : modcong::prime_divisors(n)) {
            if (p == 3) continue;
            nu3 *= 1 + modcong::kronecker(Int(-3), Int(p));
        }
    }
    int64_t euler_phi, nuinf = 0;
    for (int64_t d : modcong::divisors(n)) {
        int64_t g = std::gcd(d, n / d);
        euler_phi = g;
        for (int64_t p : modcong::prime_divisors(g)) euler_phi -= euler_phi / p;
        nuinf += euler_phi;
    }
    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 nuinf
    int64_t twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nuinf;
    return twelve_g / 12;
}

// q-expansion of eta(z)^2 eta(11 z)^2 = q prod (1-q^n)^2 (1-q^(11n))^2,
// the unique newform of level 11; coefficient of q^k for k <= bound.
inline std::vector<Int> eta_11_coefficients(int bound) {
    std::vector<Int> f(static_cast<size_t>(bound) + 1, Int(0));
    f[0] = 1;
    auto mul_by_one_minus_qn = [&](int n) {
        // f *= (1 - q^n): f[k] -= f[k-n] from the top down
        for (int k = bound; k >= n; --k) f[static_cast<size_t>(k)] -= f[static_cast<size_t>(k - n)];
    };
    for (int rep = 0; rep < 2; ++rep)
        for (int n = 1; n <= bound; ++n) mul_by_one_minus_qn(n);
    for (int rep = 0; rep < 2; ++rep)
        for (int n = 1; 11 * n <= bound; ++n) mul_by_one_minus_qn(11 * n);
    // multiply by q: shift
    std::vector<Int> out(static_cast<size_t>(bound) + 1, Int(0));
    for (int k = 1; k <= bound; ++k) out[static_cast<size_t>(k)] = f[static_cast<size_t>(k - 1)];
    return out;
}

}  // namespace oracles

#endif
