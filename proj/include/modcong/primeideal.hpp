#ifndef MODCONG_PRIMEIDEAL_HPP
#define MODCONG_PRIMEIDEAL_HPP

#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/algsplit.hpp"
#include "modcong/arith.hpp"
#include "modcong/fpoly.hpp"
#include "modcong/matrix.hpp"
#include "modcong/numberfield.hpp"
#include "modcong/order.hpp"

namespace modcong {

inline constexpr int VAL_INFINITY = std::numeric_limits<int>::max();

// Prime ideal above ell in an ell-maximal order, with a two-element
// representation (ell, pi) and an HNF module basis in order coordinates.
class PrimeIdeal {
  public:
    PrimeIdeal(OrderPtr order, Int ell, FieldElement pi, int res_degree, MatZ hnf_basis)
        : order_(std::move(order)), ell_(std::move(ell)), pi_(std::move(pi)),
          f_(res_degree), e_(0), hnf_basis_(std::move(hnf_basis)) {
        powers_.push_back(hnf_basis_);
        // ramification index: exact power of this prime dividing (ell)
        e_ = valuation(FieldElement::from_rat(order_->field(), Rat(ell_)));
    }

    const OrderPtr& order() const { return order_; }
    const Int& ell() const { return ell_; }
    const FieldElement& second_generator() const { return pi_; }
    int residue_degree() const { return f_; }
    int ramification_index() const { return e_; }
    const MatZ& hnf_basis() const { return hnf_basis_; }

    // Largest n with x in lambda^n; VAL_INFINITY iff x = 0.  x must be
    // integral at ell (order coordinates with denominator coprime to ell).
    int valuation(const FieldElement& x) const {
        if (x.is_zero()) return VAL_INFINITY;
        auto [num, den] = order_->to_order_coords_integral(x);
        if (gcd(den, ell_) != 1)
            throw std::invalid_argument("PrimeIdeal::valuation: element not integral at ell");
        int n = 0;
        while (hnf_contains(power(n + 1), num)) ++n;
        return n;
    }

    // HNF basis of lambda^n (n >= 1), cached.
    MatZ power(int n) const {
        if (n < 1) throw std::invalid_argument("PrimeIdeal::power: exponent must be >= 1");
        std::lock_guard<std::mutex> lock(mutex_);
        while (static_cast<int>(powers_.size()) < n) {
            const MatZ& prev = powers_.back();
            int d = order_->degree();
            MatZ prod(d * d, d);
            std::vector<Int> a(static_cast<size_t>(d)), b(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) {
                for (int k = 0; k < d; ++k) a[static_cast<size_t>(k)] = prev.at(i, k);
                for (int j = 0; j < d; ++j) {
                    for (int k = 0; k < d; ++k) b[static_cast<size_t>(k)] = hnf_basis_.at(j, k);
                    auto c = order_->mul_coords(a, b);
                    for (int k = 0; k < d; ++k) prod.at(i * d + j, k) = c[static_cast<size_t>(k)];
                }
            }
            powers_.push_back(hnf(prod));
        }
        return powers_[static_cast<size_t>(n - 1)];
    }

    bool contains(const FieldElement& x) const {
        if (x.is_zero()) return true;
        auto [num, den] = order_->to_order_coords_integral(x);
        if (gcd(den, ell_) != 1)
            throw std::invalid_argument("PrimeIdeal::contains: element not integral at ell");
        return hnf_contains(hnf_basis_, num);
    }

  private:
    OrderPtr order_;
    Int ell_;
    FieldElement pi_;
    int f_;
    int e_;
    MatZ hnf_basis_;
    mutable std::mutex mutex_;
    mutable std::vector<MatZ> powers_;
};

using PrimeIdealPtr = std::shared_ptr<const PrimeIdeal>;

namespace orddetail {

// lattice ellO + pi*O in order coordinates (rows)
inline MatZ two_generator_lattice(const Order& o, const std::vector<Int>& pi_coords) {
    int d = o.degree();
    MatZ m(2 * d, d);
    for (int i = 0; i < d; ++i) m.at(i, i) = o.ell();
    std::vector<Int> e(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) e[static_cast<size_t>(k)] = (k == j) ? 1 : 0;
        auto prod = o.mul_coords(pi_coords, e);
        for (int k = 0; k < d; ++k) m.at(d + j, k) = prod[static_cast<size_t>(k)];
    }
    return hnf(m);
}

// Deterministic search for pi with ellO + piO = lambda, given lambda's HNF.
inline std::vector<Int> find_second_generator(const Order& o, const MatZ& lambda) {
    int d = o.degree();
    auto row = [&](int i) {
        std::vector<Int> v(static_cast<size_t>(d));
        for (int k = 0; k < d; ++k) v[static_cast<size_t>(k)] = lambda.at(i, k);
        return v;
    };
    auto good = [&](const std::vector<Int>& pi) {
        return two_generator_lattice(o, pi) == lambda;
    };
    for (int i = 0; i < d; ++i) {
        auto v = row(i);
        if (good(v)) return v;
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            auto v = row(i);
            for (int k = 0; k < d; ++k) v[static_cast<size_t>(k)] += lambda.at(j, k);
            if (good(v)) return v;
        }
    // widening deterministic pseudorandom combinations
    std::mt19937_64 rng(0xabcdef12ULL);
    for (int attempt = 0; attempt < 200000; ++attempt) {
        int span = 2 + attempt / 1000;
        std::vector<Int> v(static_cast<size_t>(d), Int(0));
        for (int i = 0; i < d; ++i) {
            long c = static_cast<long>(rng() % static_cast<uint64_t>(span));
            if (c == 0) continue;
            for (int k = 0; k < d; ++k) v[static_cast<size_t>(k)] += c * lambda.at(i, k);
        }
        if (good(v)) return v;
    }
    throw std::logic_error("find_second_generator: search exhausted");
}

}  // namespace orddetail

// Components of O/ellO (radical plus simple components of the semisimple
// quotient), via the generic algebra splitter on the order multiplication.
inline AlgebraSplit split_mod_ell_components(const OrderPtr& order) {
    const Int& ell = order->ell();
    auto one = order->to_order_coords_integral(FieldElement::one(order->field()));
    if (one.second != 1) throw std::logic_error("split_mod_ell_components: 1 not in order");
    AlgebraMul mul = [&order, ell](const std::vector<Int>& a, const std::vector<Int>& b) {
        auto r = order->mul_coords(a, b);
        for (auto& c : r) c = fdiv_r(c, ell);
        return r;
    };
    return split_algebra(order->degree(), ell, mul, one.first);
}

// Complete splitting of ell in an ell-maximal order.  Kummer-Dedekind on the
// integral defining polynomial when ell does not divide the index of the
// equation order; otherwise idempotent-free splitting of O/ellO via the
// Frobenius fixed space.  Errors if sum(e_i f_i) != degree.
inline std::vector<PrimeIdealPtr> primes_above(const OrderPtr& order, const Int& ell) {
    if (ell != order->ell())
        throw std::invalid_argument("primes_above: order is only maximal at its own ell");
    int d = order->degree();
    std::vector<PrimeIdealPtr> out;

    Int index = order->index_over_equation_order();
    if (gcd(index, ell) == 1) {
        // Kummer-Dedekind on theta'
        PolyQ g = order->integral_min_poly();
        std::vector<Int> coeffs;
        for (int i = 0; i <= g.degree(); ++i) coeffs.push_back(g.coeff(i).get_num());
        FpPoly gbar = fp::reduce(std::move(coeffs), ell);
        FieldElement theta = order->theta_prime();
        for (auto& [fac, mult] : fp::factor(std::move(gbar), ell)) {
            // pi = fac(theta')
            FieldElement pi = FieldElement::zero(order->field());
            for (size_t i = fac.size(); i-- > 0;) {
                pi = pi * theta;
                pi = pi + FieldElement::from_rat(order->field(), Rat(fac[i]));
            }
            auto [pic, piden] = order->to_order_coords_integral(pi);
            if (piden != 1) throw std::logic_error("primes_above: generator not in order");
            MatZ lam = orddetail::two_generator_lattice(*order, pic);
            auto ideal = std::make_shared<PrimeIdeal>(order, ell, pi, fp::degree(fac), std::move(lam));
            if (ideal->ramification_index() != mult)
                throw std::logic_error("primes_above: ramification mismatch in Kummer-Dedekind");
            out.push_back(std::move(ideal));
        }
    } else {
        // split A = O/ellO into its local components
        auto split = split_mod_ell_components(order);
        for (size_t ci = 0; ci < split.components.size(); ++ci) {
            const auto& fc = split.components[ci];
            int fdeg = static_cast<int>(fc.size());
            // the prime is the kernel of O -> component: radical + other components
            std::vector<std::vector<Int>> v = split.radical;
            for (size_t cj = 0; cj < split.components.size(); ++cj) {
                if (cj == ci) continue;
                for (const auto& row : split.components[cj]) v.push_back(row);
            }
            MatZ lam = orddetail::lattice_with(v, d, ell);
            auto pic = orddetail::find_second_generator(*order, lam);
            FieldElement pi = order->from_order_coords(pic);
            out.push_back(std::make_shared<PrimeIdeal>(order, ell, pi, fdeg, std::move(lam)));
        }
    }

    int total = 0;
    for (const auto& ideal : out) total += ideal->ramification_index() * ideal->residue_degree();
    if (total != d) throw std::invalid_argument("primes_above: sum(e*f) != degree; order is not ell-maximal");

    std::sort(out.begin(), out.end(), [&](const PrimeIdealPtr& a, const PrimeIdealPtr& b) {
        if (a->residue_degree() != b->residue_degree()) return a->residue_degree() < b->residue_degree();
        if (a->ramification_index() != b->ramification_index()) return a->ramification_index() < b->ramification_index();
        for (int i = 0; i < a->hnf_basis().rows(); ++i)
            for (int j = 0; j < a->hnf_basis().cols(); ++j)
                if (a->hnf_basis().at(i, j) != b->hnf_basis().at(i, j))
                    return a->hnf_basis().at(i, j) < b->hnf_basis().at(i, j);
        return false;
    });
    return out;
}

// The prime of the subfield F under lam, where embed : F -> K.  Identified by
// testing the valuations of the second generators of the candidate primes.
inline PrimeIdealPtr restrict_place(const PrimeIdealPtr& lam, const FieldEmbedding& embed,
                                    const OrderPtr& sub_order) {
    if (!sub_order->field()->same_as(*embed.from()))
        throw std::invalid_argument("restrict_place: order does not match embedding domain");
    auto candidates = primes_above(sub_order, lam->ell());
    PrimeIdealPtr found;
    for (const auto& mu : candidates) {
        FieldElement img = embed.apply(mu->second_generator());
        int v = lam->valuation(img);
        if (v >= 1) {
            if (found) throw std::logic_error("restrict_place: restriction not unique");
            found = mu;
        }
    }
    if (!found) throw std::logic_error("restrict_place: no candidate matched");
    return found;
}

inline PrimeIdealPtr restrict_place(const PrimeIdealPtr& lam, const FieldEmbedding& embed) {
    return restrict_place(lam, embed, ell_maximal_order(embed.from(), lam->ell()));
}

}  // namespace modcong

#endif
