#ifndef MODCONG_LOCALPAIR_HPP
#define MODCONG_LOCALPAIR_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "modcong/algsplit.hpp"
#include "modcong/arith.hpp"
#include "modcong/order.hpp"
#include "modcong/primeideal.hpp"

namespace modcong {

// Completion data of one field at one unramified prime above ell: an explicit
// ring map O -> GR(ell^M, f) given as coordinates on the powers of a residue
// generator.  Built from the idempotent of the local component of O/ell^M.
class LocalPlace {
  public:
    LocalPlace(OrderPtr order, PrimeIdealPtr prime, std::vector<Int> idempotent, Int modulus)
        : order_(std::move(order)), prime_(std::move(prime)), e_(std::move(idempotent)),
          modulus_(std::move(modulus)) {
        if (prime_->ramification_index() != 1)
            throw std::invalid_argument("LocalPlace: prime must be unramified");
        int d = order_->degree();
        int f = prime_->residue_degree();
        const Int& ell = prime_->ell();

        // residue generator u: e * lift(candidate) whose powers span rank f mod ell
        std::vector<Int> u;
        for (int attempt = 0;; ++attempt) {
            std::vector<Int> cand(static_cast<size_t>(d), Int(0));
            if (attempt < d) {
                cand[static_cast<size_t>(attempt)] = 1;
            } else {
                std::mt19937_64 rng(0x1234 + static_cast<uint64_t>(attempt));
                for (auto& c : cand) c = Int(static_cast<unsigned long>(rng() % 16));
            }
            u = mul_mod(e_, cand);
            // powers u^0 = e, u^1, ..., u^(f-1): rank f mod ell?
            std::vector<std::vector<Int>> pows(static_cast<size_t>(f));
            pows[0] = e_;
            for (int j = 1; j < f; ++j) pows[static_cast<size_t>(j)] = mul_mod(pows[static_cast<size_t>(j - 1)], u);
            fplin::Mat m(static_cast<size_t>(d), std::vector<Int>(static_cast<size_t>(f)));
            for (int r = 0; r < d; ++r)
                for (int j = 0; j < f; ++j)
                    m[static_cast<size_t>(r)][static_cast<size_t>(j)] = fdiv_r(pows[static_cast<size_t>(j)][static_cast<size_t>(r)], ell);
            if (static_cast<int>(fplin::rref(m, ell).size()) == f) {
                basis_.resize(static_cast<size_t>(f));
                for (int j = 0; j < f; ++j) basis_[static_cast<size_t>(j)] = pows[static_cast<size_t>(j)];
                break;
            }
            if (attempt > d + 64) throw std::logic_error("LocalPlace: no residue generator found");
        }

        // pivot rows with invertible f x f minor mod ell
        {
            fplin::Mat m(static_cast<size_t>(d), std::vector<Int>(static_cast<size_t>(f)));
            for (int r = 0; r < d; ++r)
                for (int j = 0; j < f; ++j)
                    m[static_cast<size_t>(r)][static_cast<size_t>(j)] = fdiv_r(basis_[static_cast<size_t>(j)][static_cast<size_t>(r)], ell);
            // row echelon on the transpose to find f independent rows
            fplin::Mat t(static_cast<size_t>(f), std::vector<Int>(static_cast<size_t>(d)));
            for (int r = 0; r < d; ++r)
                for (int j = 0; j < f; ++j) t[static_cast<size_t>(j)][static_cast<size_t>(r)] = m[static_cast<size_t>(r)][static_cast<size_t>(j)];
            piv_rows_ = fplin::rref(t, ell);
        }

        // S = pivot-row submatrix of basis; S_inv mod ell^M by Newton from the
        // mod-ell inverse
        int f2 = f;
        fplin::Mat s(static_cast<size_t>(f2), std::vector<Int>(static_cast<size_t>(f2)));
        for (int i = 0; i < f2; ++i)
            for (int j = 0; j < f2; ++j)
                s[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    fdiv_r(basis_[static_cast<size_t>(j)][static_cast<size_t>(piv_rows_[static_cast<size_t>(i)])], modulus_);
        sinv_ = invert_mod(s, f2);

        // defining polynomial: u^f = sum G_j u^j
        auto uf = mul_mod(basis_.back(), u);
        auto c = coords_of_local(uf);
        gpoly_.assign(static_cast<size_t>(f) + 1, Int(0));
        for (int j = 0; j < f; ++j) gpoly_[static_cast<size_t>(j)] = fdiv_r(-c[static_cast<size_t>(j)], modulus_);
        gpoly_[static_cast<size_t>(f)] = 1;
    }

    const PrimeIdealPtr& prime() const { return prime_; }
    const Int& modulus() const { return modulus_; }
    int residue_degree() const { return prime_->residue_degree(); }

    // monic degree-f polynomial over Z/ell^M defining GR(ell^M, f)
    const std::vector<Int>& defining_poly() const { return gpoly_; }

    // image of x in GR(ell^M, f) as coordinates on 1, u, ..., u^(f-1)
    std::vector<Int> apply(const FieldElement& x) const {
        auto [num, den] = order_->to_order_coords_integral(x);
        if (gcd(den, prime_->ell()) != 1)
            throw std::invalid_argument("LocalPlace::apply: element not integral at ell");
        Int deninv = invmod(fdiv_r(den, modulus_), modulus_);
        for (auto& c : num) c = fdiv_r(c * deninv, modulus_);
        auto proj = mul_mod(e_, num);
        return coords_of_local(proj);
    }

  private:
    std::vector<Int> mul_mod(const std::vector<Int>& a, const std::vector<Int>& b) const {
        auto r = order_->mul_coords(a, b);
        for (auto& c : r) c = fdiv_r(c, modulus_);
        return r;
    }

    // coordinates of an element of e*O/ell^M on the u-power basis
    std::vector<Int> coords_of_local(const std::vector<Int>& v) const {
        int f = prime_->residue_degree();
        std::vector<Int> rhs(static_cast<size_t>(f));
        for (int i = 0; i < f; ++i) rhs[static_cast<size_t>(i)] = v[static_cast<size_t>(piv_rows_[static_cast<size_t>(i)])];
        std::vector<Int> out(static_cast<size_t>(f), Int(0));
        for (int i = 0; i < f; ++i) {
            Int acc(0);
            for (int j = 0; j < f; ++j) acc += sinv_[static_cast<size_t>(i)][static_cast<size_t>(j)] * rhs[static_cast<size_t>(j)];
            out[static_cast<size_t>(i)] = fdiv_r(acc, modulus_);
        }
        return out;
    }

    // inverse of an invertible-mod-ell matrix, modulo ell^M (Newton iteration)
    fplin::Mat invert_mod(const fplin::Mat& s, int n) const {
        const Int& ell = prime_->ell();
        // mod-ell inverse by augmented rref
        fplin::Mat aug(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(2 * n), Int(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) aug[static_cast<size_t>(i)][static_cast<size_t>(j)] = fdiv_r(s[static_cast<size_t>(i)][static_cast<size_t>(j)], ell);
            aug[static_cast<size_t>(i)][static_cast<size_t>(n + i)] = 1;
        }
        auto piv = fplin::rref(aug, ell);
        if (static_cast<int>(piv.size()) != n || piv.back() >= n)
            throw std::logic_error("LocalPlace: pivot minor not invertible");
        fplin::Mat x(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) x[static_cast<size_t>(i)][static_cast<size_t>(j)] = aug[static_cast<size_t>(i)][static_cast<size_t>(n + j)];
        auto matmul = [&](const fplin::Mat& a, const fplin::Mat& b) {
            fplin::Mat z(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), Int(0)));
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) {
                    if (a[static_cast<size_t>(i)][static_cast<size_t>(l)] == 0) continue;
                    for (int j = 0; j < n; ++j)
                        z[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                            fdiv_r(z[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                                   a[static_cast<size_t>(i)][static_cast<size_t>(l)] * b[static_cast<size_t>(l)][static_cast<size_t>(j)], modulus_);
                }
            return z;
        };
        for (int it = 0; it < 64; ++it) {
            // X <- X (2I - S X)
            fplin::Mat sx = matmul(s, x);
            bool identity = true;
            for (int i = 0; i < n && identity; ++i)
                for (int j = 0; j < n; ++j)
                    if (sx[static_cast<size_t>(i)][static_cast<size_t>(j)] != (i == j ? 1 : 0)) { identity = false; break; }
            if (identity) return x;
            fplin::Mat two_minus(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    two_minus[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        fdiv_r((i == j ? Int(2) : Int(0)) - sx[static_cast<size_t>(i)][static_cast<size_t>(j)], modulus_);
            x = matmul(x, two_minus);
        }
        throw std::logic_error("LocalPlace: matrix inversion did not converge");
    }

    OrderPtr order_;
    PrimeIdealPtr prime_;
    std::vector<Int> e_;
    Int modulus_;
    std::vector<std::vector<Int>> basis_;  // e, u, ..., u^(f-1) in order coords mod ell^M
    std::vector<int> piv_rows_;
    fplin::Mat sinv_;
    std::vector<Int> gpoly_;
};

// All completion data of one field at ell with one shared precision:
// per prime of the ell-maximal order, a LocalPlace when unramified.
class LocalFieldData {
  public:
    LocalFieldData(OrderPtr order, const Int& ell, int precision)
        : order_(std::move(order)), precision_(precision) {
        modulus_ = pow_int(ell, static_cast<unsigned long>(precision));
        primes_ = primes_above(order_, ell);
        auto split = split_mod_ell_components(order_);
        if (split.components.size() != primes_.size())
            throw std::logic_error("LocalFieldData: component/prime count mismatch");

        // match components to primes: a component belongs to the unique prime
        // not containing it
        std::vector<int> comp_for_prime(primes_.size(), -1);
        for (size_t c = 0; c < split.components.size(); ++c) {
            const auto& vec = split.components[c][0];
            int match = -1;
            for (size_t p = 0; p < primes_.size(); ++p) {
                if (!hnf_contains(primes_[p]->hnf_basis(), vec)) {
                    if (match >= 0) throw std::logic_error("LocalFieldData: ambiguous component match");
                    match = static_cast<int>(p);
                }
            }
            if (match < 0) throw std::logic_error("LocalFieldData: component matched no prime");
            comp_for_prime[static_cast<size_t>(match)] = static_cast<int>(c);
        }

        AlgebraMulMod mulmod = [this](const std::vector<Int>& a, const std::vector<Int>& b, const Int& m) {
            auto r = order_->mul_coords(a, b);
            for (auto& c : r) c = fdiv_r(c, m);
            return r;
        };
        places_.resize(primes_.size());
        residue_data_.resize(primes_.size());
        for (size_t p = 0; p < primes_.size(); ++p) {
            size_t c = static_cast<size_t>(comp_for_prime[p]);
            if (primes_[p]->ramification_index() == 1) {
                auto idem = component_idempotent(order_->degree(), ell, mulmod, split, c, modulus_);
                places_[p].emplace(order_, primes_[p], std::move(idem), modulus_);
            }
            residue_data_[p] = split.components[c];
        }
        radical_ = split.radical;
    }

    const OrderPtr& order() const { return order_; }
    int precision() const { return precision_; }
    const Int& modulus() const { return modulus_; }
    const std::vector<PrimeIdealPtr>& primes() const { return primes_; }
    const std::optional<LocalPlace>& place(size_t i) const { return places_[i]; }

    // residue image of x in O/lambda_i as coordinates over F_ell on the
    // residue field basis (the component basis mod the radical)
    std::vector<Int> residue_coords(size_t i, const FieldElement& x) const {
        const Int& ell = order_->ell();
        auto [num, den] = order_->to_order_coords_integral(x);
        if (gcd(den, ell) != 1)
            throw std::invalid_argument("LocalFieldData::residue_coords: not integral at ell");
        Int deninv = invmod(fdiv_r(den, ell), ell);
        for (auto& c : num) c = fdiv_r(c * deninv, ell);

        // reduce modulo radical and the other components
        fplin::Mat sys;  // columns: this component's basis | radical | others, augmented
        const auto& comp = residue_data_[i];
        std::vector<const std::vector<Int>*> others;
        for (size_t j = 0; j < residue_data_.size(); ++j) {
            if (j == i) continue;
            for (const auto& v : residue_data_[j]) others.push_back(&v);
        }
        for (const auto& v : radical_) others.push_back(&v);
        size_t cols = comp.size() + others.size() + 1;
        int d = order_->degree();
        sys.assign(static_cast<size_t>(d), std::vector<Int>(cols, Int(0)));
        for (int r = 0; r < d; ++r) {
            for (size_t j = 0; j < comp.size(); ++j) sys[static_cast<size_t>(r)][j] = fdiv_r(comp[j][static_cast<size_t>(r)], ell);
            for (size_t j = 0; j < others.size(); ++j)
                sys[static_cast<size_t>(r)][comp.size() + j] = fdiv_r((*others[j])[static_cast<size_t>(r)], ell);
            sys[static_cast<size_t>(r)][cols - 1] = num[static_cast<size_t>(r)];
        }
        auto piv = fplin::rref(sys, ell);
        std::vector<Int> out(comp.size(), Int(0));
        for (size_t r = 0; r < piv.size(); ++r) {
            if (piv[r] == static_cast<int>(cols) - 1)
                throw std::logic_error("LocalFieldData: residue solve inconsistent");
            if (piv[r] < static_cast<int>(comp.size())) out[static_cast<size_t>(piv[r])] = sys[r][cols - 1];
        }
        return out;
    }

    // multiplication of residue coordinate vectors at place i
    std::vector<Int> residue_mul(size_t i, const std::vector<Int>& a, const std::vector<Int>& b) const {
        const Int& ell = order_->ell();
        const auto& comp = residue_data_[i];
        int d = order_->degree();
        std::vector<Int> va(static_cast<size_t>(d), Int(0)), vb(static_cast<size_t>(d), Int(0));
        for (size_t j = 0; j < comp.size(); ++j) {
            if (a[j] != 0)
                for (int r = 0; r < d; ++r) va[static_cast<size_t>(r)] += a[j] * comp[j][static_cast<size_t>(r)];
            if (b[j] != 0)
                for (int r = 0; r < d; ++r) vb[static_cast<size_t>(r)] += b[j] * comp[j][static_cast<size_t>(r)];
        }
        auto prod = order_->mul_coords(va, vb);
        FieldElement pe = order_->from_order_coords(prod);
        return residue_coords(i, pe);
    }

  private:
    OrderPtr order_;
    int precision_;
    Int modulus_;
    std::vector<PrimeIdealPtr> primes_;
    std::vector<std::optional<LocalPlace>> places_;
    std::vector<std::vector<std::vector<Int>>> residue_data_;
    std::vector<std::vector<Int>> radical_;
};

// (Z/ell^M)[S,T]/(G1(S), G2(T)): the tensor of two unramified completions,
// split into its components.  A composite place above the pair of primes is a
// component; valuations there are coefficient-wise ell-valuations after
// multiplying by the component idempotent.
class PairTensor {
  public:
    PairTensor(const LocalPlace& a, const LocalPlace& b)
        : f1_(a.residue_degree()), f2_(b.residue_degree()),
          modulus_(a.modulus()), ell_(a.prime()->ell()), g1_(a.defining_poly()), g2_(b.defining_poly()) {
        if (b.modulus() != modulus_) throw std::invalid_argument("PairTensor: precision mismatch");
        // S-power and T-power reduction tables up to degree 2f-2
        spow_ = power_table(g1_, f1_);
        tpow_ = power_table(g2_, f2_);

        int dim = f1_ * f2_;
        std::vector<Int> one(static_cast<size_t>(dim), Int(0));
        one[0] = 1;
        AlgebraMul mul_ell = [this](const std::vector<Int>& x, const std::vector<Int>& y) {
            auto r = mul(x, y, ell_);
            return r;
        };
        auto split = split_algebra(dim, ell_, mul_ell, one);
        if (!split.radical.empty())
            throw std::logic_error("PairTensor: tensor of unramified completions must be etale");
        AlgebraMulMod mulmod = [this](const std::vector<Int>& x, const std::vector<Int>& y, const Int& m) {
            return mul(x, y, m);
        };
        for (size_t c = 0; c < split.components.size(); ++c) {
            comp_f_.push_back(static_cast<int>(split.components[c].size()));
            idems_.push_back(component_idempotent(dim, ell_, mulmod, split, c, modulus_));
        }
    }

    size_t num_components() const { return idems_.size(); }
    int component_f(size_t c) const { return comp_f_[c]; }
    int precision_valuation_cap() const {
        int n = 0;
        Int m(1);
        while (m < modulus_) { m *= ell_; ++n; }
        return n;
    }

    // x an f1-vector (image in the first factor), y an f2-vector: valuation of
    // x (x) 1 - 1 (x) y at component c; returns the precision cap when the
    // difference vanishes to full precision.
    int difference_valuation(size_t c, const std::vector<Int>& x, const std::vector<Int>& y) const {
        int dim = f1_ * f2_;
        std::vector<Int> z(static_cast<size_t>(dim), Int(0));
        for (int i = 0; i < f1_; ++i) z[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
        for (int j = 0; j < f2_; ++j) {
            auto& slot = z[static_cast<size_t>(j * f1_)];
            slot = fdiv_r(slot - y[static_cast<size_t>(j)], modulus_);
        }
        auto w = mul(idems_[c], z, modulus_);
        int best = precision_valuation_cap();
        for (const auto& coord : w) {
            if (coord == 0) continue;
            int v = valuation_int(coord, ell_);
            if (v < best) best = v;
        }
        return best;
    }

  private:
    // reduction table: X^k mod (G, ell^M) for k = 0 .. 2f-2, each an f-vector
    std::vector<std::vector<Int>> power_table(const std::vector<Int>& g, int f) const {
        std::vector<std::vector<Int>> out;
        for (int k = 0; k <= 2 * f - 2; ++k) {
            std::vector<Int> v(static_cast<size_t>(f), Int(0));
            if (k < f) {
                v[static_cast<size_t>(k)] = 1;
            } else {
                // X^k = X * X^(k-1) reduced
                const auto& prev = out.back();
                std::vector<Int> shifted(static_cast<size_t>(f) + 1, Int(0));
                for (int i = 0; i < f; ++i) shifted[static_cast<size_t>(i + 1)] = prev[static_cast<size_t>(i)];
                // reduce the X^f term: X^f = -sum g_i X^i
                Int top = shifted[static_cast<size_t>(f)];
                for (int i = 0; i < f; ++i)
                    v[static_cast<size_t>(i)] = fdiv_r(shifted[static_cast<size_t>(i)] - top * g[static_cast<size_t>(i)], modulus_);
            }
            out.push_back(std::move(v));
        }
        return out;
    }

    std::vector<Int> mul(const std::vector<Int>& x, const std::vector<Int>& y, const Int& m) const {
        // 2D convolution then reduction through the power tables
        std::vector<Int> conv(static_cast<size_t>((2 * f1_ - 1) * (2 * f2_ - 1)), Int(0));
        for (int i = 0; i < f1_; ++i)
            for (int j = 0; j < f2_; ++j) {
                const Int& xc = x[static_cast<size_t>(j * f1_ + i)];
                if (xc == 0) continue;
                for (int k = 0; k < f1_; ++k)
                    for (int l = 0; l < f2_; ++l) {
                        const Int& yc = y[static_cast<size_t>(l * f1_ + k)];
                        if (yc == 0) continue;
                        conv[static_cast<size_t>((j + l) * (2 * f1_ - 1) + (i + k))] += xc * yc;
                    }
            }
        std::vector<Int> out(static_cast<size_t>(f1_ * f2_), Int(0));
        for (int sdeg = 0; sdeg <= 2 * f1_ - 2; ++sdeg)
            for (int tdeg = 0; tdeg <= 2 * f2_ - 2; ++tdeg) {
                const Int& c = conv[static_cast<size_t>(tdeg * (2 * f1_ - 1) + sdeg)];
                if (c == 0) continue;
                const auto& sred = spow_[static_cast<size_t>(sdeg)];
                const auto& tred = tpow_[static_cast<size_t>(tdeg)];
                for (int i = 0; i < f1_; ++i) {
                    if (sred[static_cast<size_t>(i)] == 0) continue;
                    Int ci = c * sred[static_cast<size_t>(i)];
                    for (int j = 0; j < f2_; ++j)
                        if (tred[static_cast<size_t>(j)] != 0)
                            out[static_cast<size_t>(j * f1_ + i)] += ci * tred[static_cast<size_t>(j)];
                }
            }
        for (auto& c : out) c = fdiv_r(c, m);
        return out;
    }

    int f1_, f2_;
    Int modulus_, ell_;
    std::vector<Int> g1_, g2_;
    std::vector<std::vector<Int>> spow_, tpow_;
    std::vector<int> comp_f_;
    std::vector<std::vector<Int>> idems_;
};

}  // namespace modcong

#endif
