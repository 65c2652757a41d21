#ifndef MODCONG_POLYFACTOR_HPP
#define MODCONG_POLYFACTOR_HPP

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"
#include "modcong/fpoly.hpp"
#include "modcong/poly.hpp"

namespace modcong {

namespace zfac {

using ZPoly = std::vector<Int>;  // ascending, trimmed

inline int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

inline void trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

inline void reduce_mod(ZPoly& f, const Int& q) {
    for (auto& c : f) c = fdiv_r(c, q);
    trim(f);
}

inline Int content(const ZPoly& f) {
    Int g(0);
    for (const auto& c : f) g = gcd(g, c);
    return g;
}

inline ZPoly primitive_part(ZPoly f) {
    trim(f);
    if (f.empty()) return f;
    Int g = content(f);
    if (f.back() < 0) g = -g;
    for (auto& c : f) c /= g;
    return f;
}

inline PolyQ to_polyq(const ZPoly& f) { return PolyQ::from_int_coeffs(f); }

// Mignotte-style bound on factor coefficients: 2^deg(f) * |f|_2.
inline Int factor_coeff_bound(const ZPoly& f) {
    Int s(0);
    for (const auto& c : f) s += c * c;
    Int root;
    mpz_sqrt(root.get_mpz_t(), s.get_mpz_t());
    root += 1;
    return (root << static_cast<unsigned>(degree(f))) + 1;
}

struct ModularFactorization {
    Int p;
    std::vector<FpPoly> factors;  // monic irreducible mod p
};

// Linear Hensel lifting: f == lc * prod(G_i) mod q, G_i monic, lifted until
// q >= target.  Returns final modulus through q_out.
inline std::vector<ZPoly> hensel_lift(const ZPoly& f, const Int& p,
                                      const std::vector<FpPoly>& gs,
                                      const Int& target, Int& q_out) {
    size_t r = gs.size();
    Int lc = f.back();
    Int lcinv_p = invmod(fdiv_r(lc, p), p);

    // Bezout cofactors mod p: s_i * prod_{j != i} g_j == 1 (mod g_i)
    std::vector<FpPoly> s(r);
    {
        FpPoly prod{1};
        for (const auto& g : gs) prod = fp::mul(prod, g, p);
        for (size_t i = 0; i < r; ++i) {
            FpPoly pi = fp::divrem(prod, gs[i], p).first;
            s[i] = fp::invmod_poly(fp::mod(pi, gs[i], p), gs[i], p);
        }
    }

    std::vector<ZPoly> G(r);
    for (size_t i = 0; i < r; ++i) G[i] = gs[i];

    Int q = p;
    while (q < target) {
        Int qp = q * p;
        // P = lc * prod G_i mod qp
        ZPoly P{lc};
        for (const auto& g : G) {
            P = mul(P, g);
            reduce_mod(P, qp);
        }
        // E = (f - P) / q mod p
        FpPoly E;
        {
            ZPoly diff(std::max(f.size(), P.size()), Int(0));
            for (size_t i = 0; i < f.size(); ++i) diff[i] = f[i];
            for (size_t i = 0; i < P.size(); ++i) diff[i] -= P[i];
            for (auto& c : diff) c = fdiv_r(c / q, p);
            trim(diff);
            E = std::move(diff);
        }
        for (size_t i = 0; i < r; ++i) {
            FpPoly gi = fp::reduce(G[i], p);
            FpPoly delta = fp::mod(fp::mul(fp::scalar_mul(E, lcinv_p, p), s[i], p), gi, p);
            if (G[i].size() < delta.size() + 1) G[i].resize(delta.size(), Int(0));
            for (size_t k = 0; k < delta.size(); ++k) G[i][k] += q * delta[k];
        }
        q = qp;
    }
    q_out = q;
    return G;
}

// Exact division test over Z; quotient returned when it divides.
inline bool try_divide(const ZPoly& f, const ZPoly& g, ZPoly& quotient) {
    PolyQ qf = to_polyq(f), qg = to_polyq(g);
    auto [q, rem] = qf.divrem(qg);
    if (!rem.is_zero() || !q.is_integral()) return false;
    quotient.clear();
    for (int i = 0; i <= q.degree(); ++i) quotient.push_back(q.coeff(i).get_num());
    return true;
}

// Factor a primitive squarefree integer polynomial with positive leading
// coefficient into primitive irreducible integer polynomials.
inline std::vector<ZPoly> factor_squarefree_primitive(const ZPoly& f0) {
    std::vector<ZPoly> result;
    if (degree(f0) <= 0) return result;
    if (degree(f0) == 1) {
        result.push_back(f0);
        return result;
    }

    // pick up to 3 usable primes, keep the factorization with fewest factors
    std::vector<ModularFactorization> tried;
    Int p(1009);
    while (tried.size() < 3) {
        p = next_prime(p);
        if (fdiv_r(f0.back(), p) == 0) continue;
        FpPoly fp_ = fp::reduce(f0, p);
        if (fp::degree(fp::gcd(fp_, fp::derivative(fp_, p), p)) != 0) continue;
        tried.push_back({p, fp::factor_squarefree(fp::monic(fp_, p), p)});
        if (tried.back().factors.size() == 1) {
            result.push_back(f0);
            return result;
        }
    }
    size_t best = 0;
    for (size_t i = 1; i < tried.size(); ++i)
        if (tried[i].factors.size() < tried[best].factors.size()) best = i;

    // degrees reachable as subset sums of modular factor degrees, all primes
    int n = degree(f0);
    std::vector<bool> possible(static_cast<size_t>(n) + 1, true);
    for (const auto& mf : tried) {
        std::vector<bool> reach(static_cast<size_t>(n) + 1, false);
        reach[0] = true;
        for (const auto& g : mf.factors) {
            int d = fp::degree(g);
            for (int k = n; k >= d; --k)
                if (reach[static_cast<size_t>(k - d)]) reach[static_cast<size_t>(k)] = true;
        }
        for (int k = 0; k <= n; ++k)
            possible[static_cast<size_t>(k)] = possible[static_cast<size_t>(k)] && reach[static_cast<size_t>(k)];
    }

    Int bound = factor_coeff_bound(f0) * abs(Int(f0.back()));
    Int q;
    std::vector<ZPoly> lifted = hensel_lift(f0, tried[best].p, tried[best].factors, 2 * bound + 1, q);
    Int qhalf = q / 2;
    auto balanced = [&](Int v) {
        v = fdiv_r(v, q);
        if (v > qhalf) v -= q;
        return v;
    };

    ZPoly fcur = f0;
    std::vector<int> remaining(lifted.size());
    for (size_t i = 0; i < lifted.size(); ++i) remaining[static_cast<size_t>(i)] = static_cast<int>(i);

    size_t s = 1;
    while (2 * s <= remaining.size()) {
        // enumerate size-s subsets of remaining in lex order
        std::vector<size_t> idx(s);
        for (size_t i = 0; i < s; ++i) idx[i] = i;
        bool found = false;
        for (;;) {
            int dsum = 0;
            for (size_t i : idx) dsum += degree(lifted[static_cast<size_t>(remaining[i])]);
            bool deg_ok = dsum <= n && possible[static_cast<size_t>(dsum)];
            if (deg_ok) {
                // trailing-coefficient divisibility screen
                bool screen_ok = true;
                if (!fcur.empty() && fcur[0] != 0) {
                    Int t = fdiv_r(Int(fcur.back()), q);
                    for (size_t i : idx) t = fdiv_r(t * lifted[static_cast<size_t>(remaining[i])][0], q);
                    t = balanced(t);
                    if (t == 0 || fdiv_r(fcur.back() * fcur[0], t) != 0) screen_ok = false;
                }
                if (screen_ok) {
                    ZPoly cand{fcur.back()};
                    for (size_t i : idx) {
                        cand = mul(cand, lifted[static_cast<size_t>(remaining[i])]);
                        reduce_mod(cand, q);
                    }
                    for (auto& c : cand) c = balanced(c);
                    trim(cand);
                    cand = primitive_part(cand);
                    ZPoly quo;
                    if (!cand.empty() && try_divide(fcur, cand, quo)) {
                        result.push_back(cand);
                        fcur = primitive_part(quo);
                        std::vector<int> rest;
                        for (size_t i = 0, k = 0; i < remaining.size(); ++i) {
                            if (k < idx.size() && idx[k] == i) { ++k; continue; }
                            rest.push_back(remaining[i]);
                        }
                        remaining = std::move(rest);
                        found = true;
                        break;
                    }
                }
            }
            // next combination
            size_t i = s;
            while (i-- > 0) {
                if (idx[i] != i + remaining.size() - s) {
                    ++idx[i];
                    for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) { i = SIZE_MAX; break; }
            }
            if (i == SIZE_MAX) break;
        }
        if (!found) ++s;
    }
    if (degree(fcur) > 0) result.push_back(primitive_part(fcur));
    return result;
}

}  // namespace zfac

// Factorization over Q: p = lc(p) * prod factor_i^mult_i with every factor
// monic irreducible.  Factors sorted by degree, then coefficients.
inline std::vector<std::pair<PolyQ, int>> factor_poly_q(const PolyQ& p) {
    if (p.is_zero()) throw std::invalid_argument("factor_poly_q: zero polynomial");
    std::vector<std::pair<PolyQ, int>> out;
    if (p.degree() < 1) return out;
    for (const auto& [part, mult] : squarefree_decomposition(p)) {
        auto [pz, cont] = part.primitive_z();
        (void)cont;
        if (pz.back() < 0)
            for (auto& c : pz) c = -c;
        for (auto& irr : zfac::factor_squarefree_primitive(pz))
            out.emplace_back(zfac::to_polyq(irr).monic(), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        for (int i = 0; i <= a.first.degree(); ++i) {
            if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
        }
        return a.second < b.second;
    });
    return out;
}

inline bool is_irreducible(const PolyQ& p) {
    if (p.degree() < 1) return false;
    if (p.degree() == 1) return true;
    auto f = factor_poly_q(p);
    return f.size() == 1 && f[0].second == 1;
}

// Factorization mod a prime: p reduced into F_prime[x], returned factors have
// integer coefficients in [0, prime).
inline std::vector<std::pair<PolyQ, int>> factor_poly_mod_p(const PolyQ& p, const Int& prime) {
    if (p.is_zero()) throw std::invalid_argument("factor_poly_mod_p: zero polynomial");
    if (!is_prime(prime)) throw std::invalid_argument("factor_poly_mod_p: modulus not prime");
    std::vector<Int> coeffs;
    for (int i = 0; i <= p.degree(); ++i) {
        const Rat& c = p.coeff(i);
        if (fdiv_r(c.get_den(), prime) == 0)
            throw std::invalid_argument("factor_poly_mod_p: prime divides a denominator");
        coeffs.push_back(fdiv_r(c.get_num() * invmod(fdiv_r(c.get_den(), prime), prime), prime));
    }
    FpPoly f = fp::reduce(std::move(coeffs), prime);
    if (fp::degree(f) != p.degree())
        throw std::invalid_argument("factor_poly_mod_p: leading coefficient vanishes mod prime");
    std::vector<std::pair<PolyQ, int>> out;
    for (auto& [g, m] : fp::factor(std::move(f), prime))
        out.emplace_back(PolyQ::from_int_coeffs(g), m);
    return out;
}

}  // namespace modcong

#endif
