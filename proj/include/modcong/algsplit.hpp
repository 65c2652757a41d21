#ifndef MODCONG_ALGSPLIT_HPP
#define MODCONG_ALGSPLIT_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "modcong/arith.hpp"
#include "modcong/fpoly.hpp"
#include "modcong/order.hpp"

namespace modcong {

// Decomposition of a finite commutative F_ell algebra given by a black-box
// multiplication: the radical, and one basis per simple component of the
// semisimple quotient.  Component vectors live in the ambient coordinates.
struct AlgebraSplit {
    std::vector<std::vector<Int>> radical;                   // mod-ell vectors
    std::vector<std::vector<std::vector<Int>>> components;   // per component, basis vectors
};

using AlgebraMul = std::function<std::vector<Int>(const std::vector<Int>&, const std::vector<Int>&)>;

// Roots of a monic polynomial that splits into distinct linear factors mod p.
inline std::vector<Int> roots_of_split_poly(const FpPoly& m0, const Int& p) {
    std::vector<Int> roots;
    if (p == 2) {
        for (long r = 0; r <= 1; ++r) {
            Int acc(0), x(r);
            for (size_t i = m0.size(); i-- > 0;) acc = fdiv_r(acc * x + m0[i], p);
            if (acc == 0) roots.push_back(x);
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    std::vector<FpPoly> stack{fp::monic(m0, p)};
    while (!stack.empty()) {
        FpPoly g = std::move(stack.back());
        stack.pop_back();
        if (fp::degree(g) == 0) continue;
        if (fp::degree(g) == 1) {
            roots.push_back(fdiv_r(-g[0], p));
            continue;
        }
        Int e = (p - 1) / 2;
        for (Int delta(0);; delta += 1) {
            FpPoly shifted{delta, Int(1)};
            FpPoly h = fp::powmod(shifted, e, g, p);
            h = fp::sub(h, FpPoly{1}, p);
            h = fp::gcd(h, g, p);
            if (fp::degree(h) > 0 && fp::degree(h) < fp::degree(g)) {
                stack.push_back(fp::divrem(g, h, p).first);
                stack.push_back(std::move(h));
                break;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace algdetail {

inline std::vector<Int> algebra_pow_ell(const AlgebraMul& mul, std::vector<Int> x,
                                        const std::vector<Int>& one, Int e, const Int& ell) {
    std::vector<Int> r = one;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) {
            r = mul(r, x);
            for (auto& c : r) c = fdiv_r(c, ell);
        }
        x = mul(x, x);
        for (auto& c : x) c = fdiv_r(c, ell);
        e >>= 1;
    }
    return r;
}

}  // namespace algdetail

// mul must return the product of two mod-ell coordinate vectors (reduction
// mod ell may be deferred to the caller of mul; it is reapplied here).
// one is the multiplicative identity.
inline AlgebraSplit split_algebra(int dim, const Int& ell, const AlgebraMul& mul,
                                  const std::vector<Int>& one) {
    AlgebraSplit out;
    auto d = static_cast<size_t>(dim);

    // radical = kernel of Frobenius iterated until ell^k >= dim
    {
        int k = 0;
        Int pw(1);
        while (pw < dim) { pw *= ell; ++k; }
        if (k == 0) k = 1;
        fplin::Mat frob(d, std::vector<Int>(d, Int(0)));
        for (size_t i = 0; i < d; ++i) {
            std::vector<Int> e(d, Int(0));
            e[i] = 1;
            auto img = algdetail::algebra_pow_ell(mul, std::move(e), one, ell, ell);
            for (size_t r = 0; r < d; ++r) frob[r][i] = img[r];
        }
        auto matmul = [&](const fplin::Mat& x, const fplin::Mat& y) {
            fplin::Mat z(d, std::vector<Int>(d, Int(0)));
            for (size_t i = 0; i < d; ++i)
                for (size_t l = 0; l < d; ++l) {
                    if (x[i][l] == 0) continue;
                    for (size_t j = 0; j < d; ++j) z[i][j] = fdiv_r(z[i][j] + x[i][l] * y[l][j], ell);
                }
            return z;
        };
        fplin::Mat fk = frob;
        for (int s = 1; s < k; ++s) fk = matmul(fk, frob);
        out.radical = fplin::kernel(std::move(fk), ell);
    }

    // complement coordinates after removing radical pivots
    fplin::Mat rad_rref = out.radical;
    auto rad_pivots = fplin::rref(rad_rref, ell);
    std::vector<bool> is_rad_pivot(d, false);
    for (int c : rad_pivots) is_rad_pivot[static_cast<size_t>(c)] = true;
    std::vector<int> comp_cols;
    for (size_t c = 0; c < d; ++c)
        if (!is_rad_pivot[c]) comp_cols.push_back(static_cast<int>(c));
    int s = static_cast<int>(comp_cols.size());

    auto reduce_mod_radical = [&](std::vector<Int> v) {
        for (size_t i = 0; i < rad_pivots.size(); ++i) {
            int pcol = rad_pivots[i];
            Int f = fdiv_r(v[static_cast<size_t>(pcol)], ell);
            if (f == 0) continue;
            for (size_t k2 = 0; k2 < d; ++k2) v[k2] = fdiv_r(v[k2] - f * rad_rref[i][k2], ell);
        }
        for (auto& c : v) c = fdiv_r(c, ell);
        return v;
    };
    auto to_b = [&](const std::vector<Int>& v) {
        std::vector<Int> b(static_cast<size_t>(s));
        for (int k2 = 0; k2 < s; ++k2) b[static_cast<size_t>(k2)] = v[static_cast<size_t>(comp_cols[static_cast<size_t>(k2)])];
        return b;
    };
    auto lift_b = [&](const std::vector<Int>& b) {
        std::vector<Int> v(d, Int(0));
        for (int k2 = 0; k2 < s; ++k2) v[static_cast<size_t>(comp_cols[static_cast<size_t>(k2)])] = b[static_cast<size_t>(k2)];
        return v;
    };
    auto b_mul = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
        auto prod = mul(lift_b(x), lift_b(y));
        for (auto& c : prod) c = fdiv_r(c, ell);
        return to_b(reduce_mod_radical(std::move(prod)));
    };
    auto b_frob = [&](const std::vector<Int>& x) {
        auto pw = algdetail::algebra_pow_ell(mul, lift_b(x), one, ell, ell);
        return to_b(reduce_mod_radical(std::move(pw)));
    };

    struct Component {
        fplin::Mat basis;  // rows RREF over F_ell, in B coordinates
        std::vector<int> pivots;
    };
    auto make_component = [&](fplin::Mat rows) {
        Component c;
        c.basis = std::move(rows);
        c.pivots = fplin::rref(c.basis, ell);
        while (!c.basis.empty() && c.basis.size() > c.pivots.size()) c.basis.pop_back();
        return c;
    };
    auto comp_coords = [&](const Component& c, std::vector<Int> w) {
        std::vector<Int> u(c.basis.size(), Int(0));
        for (size_t i = 0; i < c.basis.size(); ++i) {
            Int f = fdiv_r(w[static_cast<size_t>(c.pivots[i])], ell);
            u[i] = f;
            if (f != 0)
                for (int k2 = 0; k2 < s; ++k2)
                    w[static_cast<size_t>(k2)] = fdiv_r(w[static_cast<size_t>(k2)] - f * c.basis[i][static_cast<size_t>(k2)], ell);
        }
        for (const auto& x : w)
            if (x != 0) throw std::logic_error("split_algebra: component not closed");
        return u;
    };

    std::vector<Component> work, fields;
    if (s > 0) {
        fplin::Mat full(static_cast<size_t>(s), std::vector<Int>(static_cast<size_t>(s), Int(0)));
        for (int i = 0; i < s; ++i) full[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        work.push_back(make_component(std::move(full)));
    }
    while (!work.empty()) {
        Component c = std::move(work.back());
        work.pop_back();
        size_t m = c.basis.size();
        fplin::Mat frob(m, std::vector<Int>(m, Int(0)));
        for (size_t i = 0; i < m; ++i) {
            auto u = comp_coords(c, b_frob(c.basis[i]));
            for (size_t k2 = 0; k2 < m; ++k2) frob[k2][i] = u[k2];
        }
        fplin::Mat fmi = frob;
        for (size_t i = 0; i < m; ++i) fmi[i][i] = fdiv_r(fmi[i][i] - 1, ell);
        auto fixed = fplin::kernel(std::move(fmi), ell);
        if (fixed.size() <= 1) {
            fields.push_back(std::move(c));
            continue;
        }
        bool split_done = false;
        for (const auto& ucoords : fixed) {
            std::vector<Int> u(static_cast<size_t>(s), Int(0));
            for (size_t i = 0; i < m; ++i)
                if (ucoords[i] != 0)
                    for (int k2 = 0; k2 < s; ++k2)
                        u[static_cast<size_t>(k2)] = fdiv_r(u[static_cast<size_t>(k2)] + ucoords[i] * c.basis[i][static_cast<size_t>(k2)], ell);
            fplin::Mat mu(m, std::vector<Int>(m, Int(0)));
            for (size_t i = 0; i < m; ++i) {
                auto w = comp_coords(c, b_mul(u, c.basis[i]));
                for (size_t k2 = 0; k2 < m; ++k2) mu[k2][i] = w[k2];
            }
            FpPoly mpoly = fplin::minpoly(mu, ell);
            fp::trim(mpoly);
            auto roots = roots_of_split_poly(mpoly, ell);
            if (roots.size() < 2) continue;
            for (const auto& root : roots) {
                fplin::Mat shifted = mu;
                for (size_t i = 0; i < m; ++i) shifted[i][i] = fdiv_r(shifted[i][i] - root, ell);
                auto kerv = fplin::kernel(std::move(shifted), ell);
                fplin::Mat rows;
                for (const auto& kv : kerv) {
                    std::vector<Int> b(static_cast<size_t>(s), Int(0));
                    for (size_t i = 0; i < m; ++i)
                        if (kv[i] != 0)
                            for (int k2 = 0; k2 < s; ++k2)
                                b[static_cast<size_t>(k2)] = fdiv_r(b[static_cast<size_t>(k2)] + kv[i] * c.basis[i][static_cast<size_t>(k2)], ell);
                    rows.push_back(std::move(b));
                }
                work.push_back(make_component(std::move(rows)));
            }
            split_done = true;
            break;
        }
        if (!split_done) throw std::logic_error("split_algebra: fixed space did not split");
    }

    for (auto& fc : fields) {
        std::vector<std::vector<Int>> basis;
        for (auto& row : fc.basis) basis.push_back(lift_b(row));
        out.components.push_back(std::move(basis));
    }
    return out;
}

// Multiplication with an explicit modulus, for idempotent lifting.
using AlgebraMulMod = std::function<std::vector<Int>(const std::vector<Int>&, const std::vector<Int>&, const Int&)>;

// The idempotent projecting onto one component, lifted to the given modulus
// ell^M (Hensel: e <- 3e^2 - 2e^3 kills both the radical fuzz and the
// ell-adic error).
inline std::vector<Int> component_idempotent(int dim, const Int& ell, const AlgebraMulMod& mulmod,
                                             const AlgebraSplit& split, size_t comp_index,
                                             const Int& target_modulus) {
    auto d = static_cast<size_t>(dim);
    const auto& comp = split.components[comp_index];
    size_t m = comp.size();

    // radical reduction data
    fplin::Mat rad_rref = split.radical;
    auto rad_pivots = fplin::rref(rad_rref, ell);
    auto reduce_mod_radical = [&](std::vector<Int> v) {
        for (size_t i = 0; i < rad_pivots.size(); ++i) {
            Int f = fdiv_r(v[static_cast<size_t>(rad_pivots[i])], ell);
            if (f == 0) continue;
            for (size_t k = 0; k < d; ++k) v[k] = fdiv_r(v[k] - f * rad_rref[i][k], ell);
        }
        for (auto& c : v) c = fdiv_r(c, ell);
        return v;
    };

    // identity of the component in the semisimple quotient: solve
    // (sum x_i c_i) * c_j == c_j  (mod radical) for all j
    fplin::Mat sys;
    std::vector<std::vector<Int>> rhs_cols;
    for (size_t j = 0; j < m; ++j) {
        std::vector<std::vector<Int>> prods(m);
        for (size_t i = 0; i < m; ++i)
            prods[i] = reduce_mod_radical(mulmod(comp[i], comp[j], ell));
        auto target = reduce_mod_radical(comp[j]);
        for (size_t r = 0; r < d; ++r) {
            std::vector<Int> row(m + 1);
            for (size_t i = 0; i < m; ++i) row[i] = prods[i][r];
            row[m] = target[r];
            sys.push_back(std::move(row));
        }
    }
    auto pivots = fplin::rref(sys, ell);
    std::vector<Int> x(m, Int(0));
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == static_cast<int>(m))
            throw std::logic_error("component_idempotent: inconsistent identity system");
        x[static_cast<size_t>(pivots[r])] = sys[r][m];
    }
    std::vector<Int> e(d, Int(0));
    for (size_t i = 0; i < m; ++i)
        if (x[i] != 0)
            for (size_t k = 0; k < d; ++k) e[k] = fdiv_r(e[k] + x[i] * comp[i][k], ell);

    // Hensel iteration: e <- 3e^2 - 2e^3; the error ideal (radical, ell) is
    // nilpotent mod ell^M, so this stabilizes quadratically
    for (int guard = 0;; ++guard) {
        std::vector<Int> e2 = mulmod(e, e, target_modulus);
        std::vector<Int> e3 = mulmod(e2, e, target_modulus);
        bool stable = true;
        std::vector<Int> enew(d);
        for (size_t k = 0; k < d; ++k) {
            enew[k] = fdiv_r(3 * e2[k] - 2 * e3[k], target_modulus);
            if (enew[k] != fdiv_r(e[k], target_modulus)) stable = false;
        }
        e = std::move(enew);
        if (stable) break;
        if (guard > 200) throw std::logic_error("component_idempotent: lifting did not stabilize");
    }
    // verify
    auto esq = mulmod(e, e, target_modulus);
    for (size_t k = 0; k < d; ++k)
        if (fdiv_r(esq[k] - e[k], target_modulus) != 0)
            throw std::logic_error("component_idempotent: result is not idempotent");
    return e;
}

}  // namespace modcong

#endif
