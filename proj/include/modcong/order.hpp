#ifndef MODCONG_ORDER_HPP
#define MODCONG_ORDER_HPP

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"
#include "modcong/matrix.hpp"
#include "modcong/numberfield.hpp"

namespace modcong {

namespace fplin {

// Dense linear algebra mod a prime, entries Int in [0, p).
using Mat = std::vector<std::vector<Int>>;

inline std::vector<int> rref(Mat& a, const Int& p) {
    std::vector<int> pivots;
    if (a.empty()) return pivots;
    size_t rows = a.size(), cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        Int inv = invmod(a[r][c], p);
        for (size_t j = c; j < cols; ++j) a[r][j] = fdiv_r(a[r][j] * inv, p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Int f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] = fdiv_r(a[i][j] - f * a[r][j], p);
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

// Basis of {v : M v = 0} over F_p; vectors of length cols.
inline std::vector<std::vector<Int>> kernel(Mat m, const Int& p) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    auto pivots = rref(m, p);
    std::vector<bool> is_piv(cols, false);
    for (int c : pivots) is_piv[static_cast<size_t>(c)] = true;
    std::vector<std::vector<Int>> out;
    for (size_t c = 0; c < cols; ++c) {
        if (is_piv[c]) continue;
        std::vector<Int> v(cols, Int(0));
        v[c] = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            v[static_cast<size_t>(pivots[i])] = fdiv_r(-m[i][c], p);
        out.push_back(std::move(v));
    }
    return out;
}

// Characteristic polynomial mod p (Hessenberg), coefficients ascending.
inline std::vector<Int> charpoly(Mat a, const Int& p) {
    size_t n = a.size();
    for (size_t j = 0; j + 2 < n; ++j) {
        size_t piv = n;
        for (size_t i = j + 1; i < n; ++i)
            if (a[i][j] != 0) { piv = i; break; }
        if (piv == n) continue;
        if (piv != j + 1) {
            std::swap(a[piv], a[j + 1]);
            for (size_t k = 0; k < n; ++k) std::swap(a[k][piv], a[k][j + 1]);
        }
        Int inv = invmod(a[j + 1][j], p);
        for (size_t i = j + 2; i < n; ++i) {
            if (a[i][j] == 0) continue;
            Int t = fdiv_r(a[i][j] * inv, p);
            for (size_t k = j; k < n; ++k) a[i][k] = fdiv_r(a[i][k] - t * a[j + 1][k], p);
            for (size_t k = 0; k < n; ++k) a[k][j + 1] = fdiv_r(a[k][j + 1] + t * a[k][i], p);
        }
    }
    std::vector<std::vector<Int>> polys(n + 1);
    polys[0] = {Int(1)};
    for (size_t m = 1; m <= n; ++m) {
        const auto& prev = polys[m - 1];
        auto& pm = polys[m];
        pm.assign(m + 1, Int(0));
        const Int& hm = a[m - 1][m - 1];
        for (size_t k = 0; k < prev.size(); ++k) {
            pm[k + 1] = fdiv_r(pm[k + 1] + prev[k], p);
            if (hm != 0) pm[k] = fdiv_r(pm[k] - hm * prev[k], p);
        }
        Int prod(1);
        for (size_t i = 1; i < m; ++i) {
            prod = fdiv_r(prod * a[m - i][m - i - 1], p);
            if (prod == 0) break;
            Int coef = fdiv_r(prod * a[m - 1 - i][m - 1], p);
            if (coef == 0) continue;
            const auto& pi = polys[m - 1 - i];
            for (size_t k = 0; k < pi.size(); ++k) pm[k] = fdiv_r(pm[k] - coef * pi[k], p);
        }
    }
    return polys[n];
}

// Minimal polynomial of a square matrix mod p via Krylov dependence over the
// matrix powers; correct in any characteristic.
inline std::vector<Int> minpoly(const Mat& m, const Int& p) {
    size_t n = m.size();
    // rows: vectorized I, M, M^2, ... ; find first dependence
    Mat powers;
    Mat cur(n, std::vector<Int>(n, Int(0)));
    for (size_t i = 0; i < n; ++i) cur[i][i] = 1;
    auto vectorize = [&](const Mat& x) {
        std::vector<Int> v;
        v.reserve(n * n);
        for (const auto& row : x)
            for (const auto& e : row) v.push_back(e);
        return v;
    };
    auto matmul = [&](const Mat& x, const Mat& y) {
        Mat z(n, std::vector<Int>(n, Int(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) {
                if (x[i][l] == 0) continue;
                for (size_t j = 0; j < n; ++j) z[i][j] = fdiv_r(z[i][j] + x[i][l] * y[l][j], p);
            }
        return z;
    };
    for (size_t k = 0;; ++k) {
        powers.push_back(vectorize(cur));
        // solve: c_0 .. c_k with sum c_i power_i = 0 and c_k = 1
        Mat sys(powers[0].size(), std::vector<Int>(k + 1, Int(0)));
        for (size_t i = 0; i <= k; ++i)
            for (size_t r = 0; r < powers[i].size(); ++r) sys[r][i] = powers[i][r];
        auto ker = kernel(sys, p);
        for (const auto& v : ker) {
            if (v[k] != 0) {
                Int inv = invmod(v[k], p);
                std::vector<Int> mp(k + 1);
                for (size_t i = 0; i <= k; ++i) mp[i] = fdiv_r(v[i] * inv, p);
                return mp;
            }
        }
        cur = matmul(cur, m);
        if (k > n) throw std::logic_error("fplin::minpoly: no dependence found");
    }
}

}  // namespace fplin

class Order;
using OrderPtr = std::shared_ptr<const Order>;

// Z-order in a number field, presented by a basis matrix whose rows are the
// coordinates of the basis elements on the power basis 1, theta, ...  The
// order is ell-maximal once produced by ell_maximal_order.
class Order {
  public:
    // basis rows must span a full-rank lattice that is a ring containing Z[theta'].
    Order(NumberFieldPtr field, Int ell, const MatQ& basis_rows)
        : field_(std::move(field)), ell_(std::move(ell)) {
        int d = field_->degree();
        if (basis_rows.rows() != d || basis_rows.cols() != d)
            throw std::invalid_argument("Order: basis must be d x d");

        // integral generator theta' = scale * theta
        theta_scale_ = 1;
        for (int i = 0; i < d; ++i)
            theta_scale_ = lcm(theta_scale_, field_->min_poly().coeff(i).get_den());

        // canonical HNF presentation
        den_ = 1;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) den_ = lcm(den_, basis_rows.at(i, j).get_den());
        MatZ num(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Rat& e = basis_rows.at(i, j);
                num.at(i, j) = e.get_num() * (den_ / e.get_den());
            }
        num_hnf_ = hnf(num);
        if (num_hnf_.rows() != d) throw std::invalid_argument("Order: basis not full rank");
        // reduce den_ against content for a canonical pair
        Int g = den_;
        for (int i = 0; i < d && g != 1; ++i)
            for (int j = 0; j < d && g != 1; ++j) g = gcd(g, num_hnf_.at(i, j));
        if (g > 1) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) num_hnf_.at(i, j) /= g;
            den_ /= g;
        }

        basis_ = num_hnf_.to_matq() * rat(1, den_);
        basis_inv_ = basis_.inverse();
        build_mult_table();
    }

    const NumberFieldPtr& field() const { return field_; }
    const Int& ell() const { return ell_; }
    int degree() const { return field_->degree(); }
    const MatQ& basis() const { return basis_; }
    const Int& theta_scale() const { return theta_scale_; }

    bool same_lattice(const Order& o) const {
        return den_ == o.den_ && num_hnf_ == o.num_hnf_;
    }

    FieldElement basis_element(int i) const {
        std::vector<Rat> coords(static_cast<size_t>(degree()));
        for (int j = 0; j < degree(); ++j) coords[static_cast<size_t>(j)] = basis_.at(i, j);
        return FieldElement(field_, std::move(coords));
    }

    // power-basis coordinates -> order coordinates (row vector times basis_inv)
    std::vector<Rat> to_order_coords(const FieldElement& x) const {
        int d = degree();
        std::vector<Rat> out(static_cast<size_t>(d), Rat(0));
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i)
                if (x.coords()[static_cast<size_t>(i)] != 0)
                    out[static_cast<size_t>(j)] += x.coords()[static_cast<size_t>(i)] * basis_inv_.at(i, j);
        return out;
    }

    // order coordinates with denominator split off: x = (1/den) * sum c_i w_i
    std::pair<std::vector<Int>, Int> to_order_coords_integral(const FieldElement& x) const {
        auto q = to_order_coords(x);
        Int den(1);
        for (const auto& c : q) den = lcm(den, c.get_den());
        std::vector<Int> num(q.size());
        for (size_t i = 0; i < q.size(); ++i) num[i] = q[i].get_num() * (den / q[i].get_den());
        return {std::move(num), den};
    }

    FieldElement from_order_coords(const std::vector<Int>& v) const {
        int d = degree();
        std::vector<Rat> coords(static_cast<size_t>(d), Rat(0));
        for (int i = 0; i < d; ++i)
            if (v[static_cast<size_t>(i)] != 0)
                for (int j = 0; j < d; ++j) coords[static_cast<size_t>(j)] += Rat(v[static_cast<size_t>(i)]) * basis_.at(i, j);
        return FieldElement(field_, std::move(coords));
    }

    // product in order coordinates (integral since the lattice is a ring)
    std::vector<Int> mul_coords(const std::vector<Int>& a, const std::vector<Int>& b) const {
        int d = degree();
        std::vector<Int> out(static_cast<size_t>(d), Int(0));
        for (int i = 0; i < d; ++i) {
            if (a[static_cast<size_t>(i)] == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (b[static_cast<size_t>(j)] == 0) continue;
                Int f = a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
                const Int* t = table_at(i, j);
                for (int k = 0; k < d; ++k) out[static_cast<size_t>(k)] += f * t[k];
            }
        }
        return out;
    }

    std::vector<Int> pow_coords_mod(std::vector<Int> base, Int e, const Int& m) const {
        int d = degree();
        std::vector<Int> r(static_cast<size_t>(d), Int(0));
        // multiplicative identity in order coords
        {
            auto one = to_order_coords_integral(FieldElement::one(field_));
            if (one.second != 1) throw std::logic_error("Order: 1 not in the order");
            r = one.first;
        }
        for (auto& c : base) c = fdiv_r(c, m);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) {
                r = mul_coords(r, base);
                for (auto& c : r) c = fdiv_r(c, m);
            }
            base = mul_coords(base, base);
            for (auto& c : base) c = fdiv_r(c, m);
            e >>= 1;
        }
        return r;
    }

    // index [O : Z[theta']] (theta' the integral generator)
    Int index_over_equation_order() const {
        int d = degree();
        MatQ b = basis_;
        Int pw(1);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) b.at(i, j) /= Rat(pw);
            pw *= theta_scale_;
        }
        Rat det = b.det();
        Rat idx = Rat(1) / det;
        if (idx < 0) idx = -idx;
        if (idx.get_den() != 1) throw std::logic_error("Order: fractional index over equation order");
        return idx.get_num();
    }

    // monic integral minimal polynomial of theta'
    PolyQ integral_min_poly() const {
        // g(x) = scale^d * f(x / scale)
        PolyQ f = field_->min_poly();
        int d = f.degree();
        std::vector<Rat> cs(static_cast<size_t>(d) + 1);
        Int pw(1);
        for (int i = d; i >= 0; --i) {
            cs[static_cast<size_t>(i)] = f.coeff(i) * Rat(pw);
            pw *= theta_scale_;
        }
        PolyQ g(std::move(cs));
        if (!g.is_integral()) throw std::logic_error("Order: scaled polynomial not integral");
        return g;
    }

    FieldElement theta_prime() const { return FieldElement::gen(field_) * Rat(theta_scale_); }

  private:
    void build_mult_table() {
        int d = degree();
        table_.assign(static_cast<size_t>(d) * d * d, Int(0));
        for (int i = 0; i < d; ++i) {
            FieldElement wi = basis_element(i);
            for (int j = i; j < d; ++j) {
                FieldElement p = wi * basis_element(j);
                auto [num, den] = to_order_coords_integral(p);
                if (den != 1) throw std::invalid_argument("Order: lattice is not closed under multiplication");
                for (int k = 0; k < d; ++k) {
                    table_mut(i, j)[k] = num[static_cast<size_t>(k)];
                    table_mut(j, i)[k] = num[static_cast<size_t>(k)];
                }
            }
        }
    }

    const Int* table_at(int i, int j) const {
        return &table_[(static_cast<size_t>(i) * degree() + j) * degree()];
    }
    Int* table_mut(int i, int j) {
        return &table_[(static_cast<size_t>(i) * degree() + j) * degree()];
    }

    NumberFieldPtr field_;
    Int ell_;
    Int theta_scale_;
    MatQ basis_;
    MatQ basis_inv_;
    MatZ num_hnf_;
    Int den_;
    std::vector<Int> table_;
};

namespace orddetail {

// Frobenius kernel of O/ellO, vectors in order coordinates mod ell.
inline std::vector<std::vector<Int>> ell_radical(const Order& o) {
    int d = o.degree();
    const Int& ell = o.ell();
    // x -> x^(ell^k) with ell^k >= d, as a matrix (columns = images of basis)
    int k = 0;
    Int pw(1);
    while (pw < d) { pw *= ell; ++k; }
    fplin::Mat frob(static_cast<size_t>(d), std::vector<Int>(static_cast<size_t>(d), Int(0)));
    for (int i = 0; i < d; ++i) {
        std::vector<Int> e(static_cast<size_t>(d), Int(0));
        e[static_cast<size_t>(i)] = 1;
        auto img = o.pow_coords_mod(std::move(e), ell, ell);
        for (int r = 0; r < d; ++r) frob[static_cast<size_t>(r)][static_cast<size_t>(i)] = img[static_cast<size_t>(r)];
    }
    // compose k times
    auto matmul = [&](const fplin::Mat& x, const fplin::Mat& y) {
        fplin::Mat z(static_cast<size_t>(d), std::vector<Int>(static_cast<size_t>(d), Int(0)));
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < d; ++l) {
                if (x[static_cast<size_t>(i)][static_cast<size_t>(l)] == 0) continue;
                for (int j = 0; j < d; ++j)
                    z[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        fdiv_r(z[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                               x[static_cast<size_t>(i)][static_cast<size_t>(l)] * y[static_cast<size_t>(l)][static_cast<size_t>(j)], ell);
            }
        return z;
    };
    fplin::Mat fk = frob;
    for (int s = 1; s < k; ++s) fk = matmul(fk, frob);
    return fplin::kernel(std::move(fk), ell);
}

// HNF lattice (order coords) spanned by ell*Z^d plus the given mod-ell vectors.
inline MatZ lattice_with(const std::vector<std::vector<Int>>& vecs, int d, const Int& ell) {
    MatZ m(d + static_cast<int>(vecs.size()), d);
    for (int i = 0; i < d; ++i) m.at(i, i) = ell;
    for (size_t v = 0; v < vecs.size(); ++v)
        for (int j = 0; j < d; ++j) m.at(d + static_cast<int>(v), j) = vecs[v][static_cast<size_t>(j)];
    return hnf(m);
}

}  // namespace orddetail

// Pohst-Zassenhaus round 2 restricted to ell: iterate radical / multiplier
// ring until stable.  The result is ell-maximal; its index in the maximal
// order is coprime to ell.
inline OrderPtr ell_maximal_order(const NumberFieldPtr& field, const Int& ell) {
    if (!is_prime(ell)) throw std::invalid_argument("ell_maximal_order: ell must be prime");
    int d = field->degree();

    // start from Z[theta']
    Int scale(1);
    for (int i = 0; i < d; ++i) scale = lcm(scale, field->min_poly().coeff(i).get_den());
    MatQ start(d, d);
    Int pw(1);
    for (int i = 0; i < d; ++i) {
        start.at(i, i) = Rat(pw);
        pw *= scale;
    }
    auto order = std::make_shared<const Order>(field, ell, start);

    for (;;) {
        auto radical = orddetail::ell_radical(*order);
        MatZ jbasis = orddetail::lattice_with(radical, d, ell);

        // multiplier ring: y in O with y*J inside ell*J, i.e. the map
        // J/ellJ -> J/ellJ induced by y vanishes
        MatQ jinv = jbasis.to_matq().inverse();
        // rows (m,k), columns i: coefficient of y_i
        fplin::Mat cond;
        cond.reserve(static_cast<size_t>(d) * d);
        for (int m = 0; m < d; ++m) {
            std::vector<Int> jm(static_cast<size_t>(d));
            for (int j = 0; j < d; ++j) jm[static_cast<size_t>(j)] = jbasis.at(m, j);
            // rows of the condition block for this m
            std::vector<std::vector<Int>> block(static_cast<size_t>(d),
                                                std::vector<Int>(static_cast<size_t>(d), Int(0)));
            for (int i = 0; i < d; ++i) {
                std::vector<Int> e(static_cast<size_t>(d), Int(0));
                e[static_cast<size_t>(i)] = 1;
                auto z = order->mul_coords(e, jm);  // w_i * j_m, integral
                // J-coordinates: w = z * J^{-1} (row vector convention)
                for (int k = 0; k < d; ++k) {
                    Rat w(0);
                    for (int j = 0; j < d; ++j)
                        if (z[static_cast<size_t>(j)] != 0) w += Rat(z[static_cast<size_t>(j)]) * jinv.at(j, k);
                    if (w.get_den() != 1) throw std::logic_error("ell_maximal_order: radical is not an ideal");
                    block[static_cast<size_t>(k)][static_cast<size_t>(i)] = fdiv_r(w.get_num(), ell);
                }
            }
            for (auto& row : block) cond.push_back(std::move(row));
        }
        auto ys = fplin::kernel(std::move(cond), ell);

        // O' = (1/ell) * (ell O + <ys>) in order coordinates
        MatZ newlat = orddetail::lattice_with(ys, d, ell);
        MatQ new_basis_order_coords = newlat.to_matq() * rat(1, ell);
        MatQ new_basis = new_basis_order_coords * order->basis();
        auto next = std::make_shared<const Order>(field, ell, new_basis);
        if (next->same_lattice(*order)) return order;
        order = std::move(next);
    }
}

}  // namespace modcong

#endif
