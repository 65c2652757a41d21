#ifndef MODCONG_NUMBERFIELD_HPP
#define MODCONG_NUMBERFIELD_HPP

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"
#include "modcong/matrix.hpp"
#include "modcong/poly.hpp"
#include "modcong/polyfactor.hpp"

namespace modcong {

class NumberField;
using NumberFieldPtr = std::shared_ptr<const NumberField>;

// Q[x]/(f) for monic irreducible f; elements are coordinate vectors on
// 1, theta, ..., theta^(degree-1).
class NumberField {
  public:
    const PolyQ& min_poly() const { return min_poly_; }
    int degree() const { return degree_; }

    bool same_as(const NumberField& o) const { return min_poly_ == o.min_poly_; }

    // Power sums of the roots (Newton's identities), p_0 .. p_(d-1); used
    // for traces.
    const std::vector<Rat>& power_sums() const { return power_sums_; }

    static NumberFieldPtr make_trusted(PolyQ min_poly) {
        if (!min_poly.is_monic() || min_poly.degree() < 1)
            throw std::invalid_argument("NumberField: defining polynomial must be monic of degree >= 1");
        return NumberFieldPtr(new NumberField(std::move(min_poly)));
    }

  private:
    explicit NumberField(PolyQ p) : min_poly_(std::move(p)), degree_(min_poly_.degree()) {
        power_sums_.resize(static_cast<size_t>(degree_));
        // p_k + e_1 p_{k-1} + ... + e_{k-1} p_1 + k e_k = 0 with
        // min_poly = x^d + e_1 x^(d-1) + ... + e_d
        auto e = [&](int k) { return min_poly_.coeff(degree_ - k); };
        power_sums_[0] = Rat(degree_);
        for (int k = 1; k < degree_; ++k) {
            Rat s = Rat(-k) * e(k);
            for (int i = 1; i < k; ++i) s -= e(i) * power_sums_[static_cast<size_t>(k - i)];
            power_sums_[static_cast<size_t>(k)] = s;
        }
    }

    PolyQ min_poly_;
    int degree_;
    std::vector<Rat> power_sums_;
};

// Validating constructor (checks irreducibility).
inline NumberFieldPtr make_field(const PolyQ& p) {
    if (!p.is_monic() || p.degree() < 1)
        throw std::invalid_argument("make_field: polynomial must be monic of degree >= 1");
    if (p.degree() > 1 && !is_irreducible(p))
        throw std::invalid_argument("make_field: polynomial is reducible");
    return NumberField::make_trusted(p);
}

class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(NumberFieldPtr parent, std::vector<Rat> coords)
        : parent_(std::move(parent)), coords_(std::move(coords)) {
        if (static_cast<int>(coords_.size()) != parent_->degree())
            throw std::invalid_argument("FieldElement: coordinate count mismatch");
    }

    static FieldElement zero(const NumberFieldPtr& k) {
        return FieldElement(k, std::vector<Rat>(static_cast<size_t>(k->degree()), Rat(0)));
    }

    static FieldElement one(const NumberFieldPtr& k) { return from_rat(k, Rat(1)); }

    static FieldElement from_rat(const NumberFieldPtr& k, const Rat& c) {
        std::vector<Rat> v(static_cast<size_t>(k->degree()), Rat(0));
        v[0] = c;
        return FieldElement(k, std::move(v));
    }

    static FieldElement gen(const NumberFieldPtr& k) {
        if (k->degree() == 1) {
            // theta is the rational root of the degree-1 defining polynomial
            return from_rat(k, -k->min_poly().coeff(0));
        }
        std::vector<Rat> v(static_cast<size_t>(k->degree()), Rat(0));
        v[1] = 1;
        return FieldElement(k, std::move(v));
    }

    static FieldElement from_poly(const NumberFieldPtr& k, const PolyQ& p) {
        PolyQ r = p % k->min_poly();
        std::vector<Rat> v(static_cast<size_t>(k->degree()), Rat(0));
        for (int i = 0; i <= r.degree(); ++i) v[static_cast<size_t>(i)] = r.coeff(i);
        return FieldElement(k, std::move(v));
    }

    const NumberFieldPtr& parent() const { return parent_; }
    const std::vector<Rat>& coords() const { return coords_; }

    PolyQ as_poly() const { return PolyQ(coords_); }

    bool is_zero() const {
        for (const auto& c : coords_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }

    Rat rational_value() const {
        if (!is_rational()) throw std::invalid_argument("rational_value: element not rational");
        return coords_[0];
    }

    bool operator==(const FieldElement& o) const {
        check_parent(o);
        return coords_ == o.coords_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement operator+(const FieldElement& o) const {
        check_parent(o);
        std::vector<Rat> v(coords_);
        for (size_t i = 0; i < v.size(); ++i) v[i] += o.coords_[i];
        return FieldElement(parent_, std::move(v));
    }

    FieldElement operator-(const FieldElement& o) const {
        check_parent(o);
        std::vector<Rat> v(coords_);
        for (size_t i = 0; i < v.size(); ++i) v[i] -= o.coords_[i];
        return FieldElement(parent_, std::move(v));
    }

    FieldElement operator-() const {
        std::vector<Rat> v(coords_);
        for (auto& c : v) c = -c;
        return FieldElement(parent_, std::move(v));
    }

    FieldElement operator*(const FieldElement& o) const {
        check_parent(o);
        return from_poly(parent_, as_poly() * o.as_poly());
    }

    FieldElement operator*(const Rat& s) const {
        std::vector<Rat> v(coords_);
        for (auto& c : v) c *= s;
        return FieldElement(parent_, std::move(v));
    }

    FieldElement inverse() const {
        if (is_zero()) throw std::invalid_argument("FieldElement: division by zero");
        // u * self + v * min_poly = 1
        PolyQ a = as_poly(), m = parent_->min_poly();
        PolyQ u0 = PolyQ::constant(Rat(1)), u1;
        PolyQ r0 = a, r1 = m;
        while (!r1.is_zero()) {
            auto [q, r2] = r0.divrem(r1);
            PolyQ u2 = u0 - q * u1;
            r0 = std::move(r1);
            r1 = std::move(r2);
            u0 = std::move(u1);
            u1 = std::move(u2);
        }
        // r0 = gcd (a constant since min_poly irreducible and a != 0)
        if (r0.degree() != 0) throw std::logic_error("FieldElement::inverse: defining polynomial not irreducible");
        return from_poly(parent_, u0 * (Rat(1) / r0.coeff(0)));
    }

    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    // Norm over Q: resultant of the defining polynomial (monic) with the
    // coordinate polynomial.
    Rat norm() const {
        if (is_zero()) return Rat(0);
        return resultant(parent_->min_poly(), as_poly());
    }

    Rat trace() const {
        Rat t(0);
        const auto& ps = parent_->power_sums();
        for (size_t i = 0; i < coords_.size(); ++i)
            if (coords_[i] != 0) t += coords_[i] * ps[i];
        return t;
    }

    // Minimal polynomial over Q (monic).
    PolyQ min_poly() const {
        // kernel of [1, x, x^2, ...] expressed on the power basis
        int d = parent_->degree();
        MatQ rows(d + 1, d);
        FieldElement pw = one(parent_);
        for (int k = 0; k <= d; ++k) {
            for (int j = 0; j < d; ++j) rows.at(k, j) = pw.coords_[static_cast<size_t>(j)];
            if (k < d) pw = pw * *this;
        }
        auto ker = kernel(rows.transpose());
        if (ker.empty()) throw std::logic_error("FieldElement::min_poly: no relation found");
        // smallest-degree relation: kernel rows are in reduced echelon form;
        // scan for the relation with the lowest top nonzero index
        int best = -1, best_top = d + 1;
        for (size_t i = 0; i < ker.size(); ++i) {
            int top = 0;
            for (int k = 0; k <= d; ++k)
                if (ker[i].at(k, 0) != 0) top = k;
            if (top < best_top) { best_top = top; best = static_cast<int>(i); }
        }
        std::vector<Rat> cs(static_cast<size_t>(best_top) + 1);
        for (int k = 0; k <= best_top; ++k) cs[static_cast<size_t>(k)] = ker[static_cast<size_t>(best)].at(k, 0);
        return PolyQ(std::move(cs)).monic();
    }

  private:
    void check_parent(const FieldElement& o) const {
        if (parent_.get() != o.parent_.get() && !parent_->same_as(*o.parent_))
            throw std::invalid_argument("FieldElement: mixed parents");
    }

    NumberFieldPtr parent_;
    std::vector<Rat> coords_;
};

inline FieldElement operator*(const Rat& s, const FieldElement& x) { return x * s; }

// Ring embedding determined by the image of the generator.
class FieldEmbedding {
  public:
    FieldEmbedding() = default;
    FieldEmbedding(NumberFieldPtr from, FieldElement gen_image)
        : from_(std::move(from)), gen_image_(std::move(gen_image)) {
        // cache powers of the generator image
        powers_.reserve(static_cast<size_t>(from_->degree()));
        FieldElement pw = FieldElement::one(gen_image_.parent());
        for (int i = 0; i < from_->degree(); ++i) {
            powers_.push_back(pw);
            if (i + 1 < from_->degree()) pw = pw * gen_image_;
        }
    }

    const NumberFieldPtr& from() const { return from_; }
    const NumberFieldPtr& to() const { return gen_image_.parent(); }
    const FieldElement& gen_image() const { return gen_image_; }

    FieldElement apply(const FieldElement& x) const {
        if (!x.parent()->same_as(*from_)) throw std::invalid_argument("FieldEmbedding: wrong domain");
        FieldElement acc = FieldElement::zero(to());
        for (size_t i = 0; i < x.coords().size(); ++i)
            if (x.coords()[i] != 0) acc = acc + powers_[i] * x.coords()[i];
        return acc;
    }

    // exact check that the generator image is a root of the defining polynomial
    bool verified() const {
        FieldElement acc = FieldElement::zero(to());
        const PolyQ& f = from_->min_poly();
        for (int i = f.degree(); i >= 0; --i) {
            acc = acc * gen_image_;
            acc = acc + FieldElement::from_rat(to(), f.coeff(i));
        }
        return acc.is_zero();
    }

  private:
    NumberFieldPtr from_;
    FieldElement gen_image_;
    std::vector<FieldElement> powers_;
};

struct Compositum {
    NumberFieldPtr field;
    FieldEmbedding embed_a;
    FieldEmbedding embed_b;
    int c = 0;  // theta_K = theta_A + c * theta_B
};

namespace nfdetail {

// Polynomials with FieldElement coefficients, just enough for gcd.
using KPoly = std::vector<FieldElement>;

inline void ktrim(KPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

inline KPoly kmod(KPoly a, const KPoly& b) {
    FieldElement lcinv = b.back().inverse();
    while (a.size() >= b.size()) {
        FieldElement f = a.back() * lcinv;
        size_t off = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[off + i] = a[off + i] - f * b[i];
        ktrim(a);
        if (a.empty()) break;
    }
    return a;
}

inline KPoly kgcd(KPoly a, KPoly b) {
    ktrim(a);
    ktrim(b);
    while (!b.empty()) {
        KPoly r = kmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// f interpreted over K, composed with the affine argument arg0 + arg1*x.
inline KPoly affine_substitute(const PolyQ& f, const NumberFieldPtr& k,
                               const FieldElement& arg0, const FieldElement& arg1) {
    KPoly acc;  // result of Horner
    for (int i = f.degree(); i >= 0; --i) {
        // acc = acc * (arg0 + arg1 x) + f_i
        KPoly next(acc.size() + 1, FieldElement::zero(k));
        for (size_t j = 0; j < acc.size(); ++j) {
            next[j] = next[j] + acc[j] * arg0;
            next[j + 1] = next[j + 1] + acc[j] * arg1;
        }
        next[0] = next[0] + FieldElement::from_rat(k, f.coeff(i));
        acc = std::move(next);
        ktrim(acc);
    }
    return acc;
}

}  // namespace nfdetail

// Composite field K = Q(theta_A + c*theta_B) with verified embeddings.
// c = 1, 2, ... until some irreducible resultant factor of maximal degree
// admits both embeddings.
inline Compositum compose_fields(const NumberFieldPtr& a, const NumberFieldPtr& b) {
    if (a->degree() == 1) {
        Compositum r;
        r.field = b;
        r.embed_a = FieldEmbedding(a, FieldElement::from_rat(b, -a->min_poly().coeff(0)));
        r.embed_b = FieldEmbedding(b, FieldElement::gen(b));
        r.c = 1;
        return r;
    }
    if (b->degree() == 1) {
        Compositum r;
        r.field = a;
        r.embed_a = FieldEmbedding(a, FieldElement::gen(a));
        r.embed_b = FieldEmbedding(b, FieldElement::from_rat(a, -b->min_poly().coeff(0)));
        r.c = 1;
        return r;
    }

    int da = a->degree(), db = b->degree();
    int dlcm = da / static_cast<int>(mpz_class(gcd(Int(da), Int(db))).get_si()) * db;

    for (int c = 1;; ++c) {
        // R(x) = Res_y(f_A(x - c y), f_B(y)) by evaluation / interpolation
        int dr = da * db;
        std::vector<Rat> points, values;
        points.reserve(static_cast<size_t>(dr) + 1);
        for (long t = 0; static_cast<int>(points.size()) <= dr; ++t) {
            Rat x0(t);
            // f_A(x0 - c y) as polynomial in y
            PolyQ base({x0, Rat(-c)});
            PolyQ ay;
            for (int i = a->min_poly().degree(); i >= 0; --i)
                ay = ay * base + PolyQ::constant(a->min_poly().coeff(i));
            points.push_back(x0);
            values.push_back(resultant(ay, b->min_poly()));
        }
        PolyQ r = interpolate(points, values).monic();

        auto factors = factor_poly_q(r);
        // try irreducible factors in decreasing degree
        std::sort(factors.begin(), factors.end(), [](const auto& x, const auto& y) {
            return x.first.degree() > y.first.degree();
        });
        for (const auto& [h, mult] : factors) {
            (void)mult;
            if (h.degree() < dlcm || h.degree() % dlcm != 0) continue;
            NumberFieldPtr k = NumberField::make_trusted(h);
            FieldElement theta = FieldElement::gen(k);
            // alpha is a root of both f_A(x) and f_B((theta - x)/c)
            nfdetail::KPoly g1 = nfdetail::affine_substitute(
                a->min_poly(), k, FieldElement::zero(k), FieldElement::one(k));
            nfdetail::KPoly g2 = nfdetail::affine_substitute(
                b->min_poly(), k, theta * rat(1, c), FieldElement::from_rat(k, rat(-1, c)));
            nfdetail::KPoly g = nfdetail::kgcd(std::move(g1), std::move(g2));
            if (g.size() != 2) continue;  // need a single common root in K
            FieldElement alpha = -(g[0] / g[1]);
            FieldElement beta = (theta - alpha) * rat(1, c);
            FieldEmbedding ea(a, alpha), eb(b, beta);
            if (!ea.verified() || !eb.verified()) continue;
            Compositum out;
            out.field = k;
            out.embed_a = std::move(ea);
            out.embed_b = std::move(eb);
            out.c = c;
            return out;
        }
    }
}

}  // namespace modcong

#endif
