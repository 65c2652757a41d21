#ifndef MODCONG_POLY_HPP
#define MODCONG_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"

namespace modcong {

// Univariate polynomial over Q, coefficients ascending, no trailing zeros.
class PolyQ {
  public:
    PolyQ() = default;
    explicit PolyQ(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static PolyQ constant(const Rat& c) { return PolyQ(std::vector<Rat>{c}); }
    static PolyQ x() { return PolyQ({Rat(0), Rat(1)}); }

    // x^n with coefficient c
    static PolyQ monomial(const Rat& c, int n) {
        std::vector<Rat> v(static_cast<size_t>(n) + 1, Rat(0));
        v.back() = c;
        return PolyQ(std::move(v));
    }

    static PolyQ from_int_coeffs(const std::vector<Int>& coeffs) {
        std::vector<Rat> v;
        v.reserve(coeffs.size());
        for (const auto& c : coeffs) v.emplace_back(c);
        return PolyQ(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const Rat& lc() const {
        if (c_.empty()) throw std::invalid_argument("lc of zero polynomial");
        return c_.back();
    }

    Rat coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return Rat(0);
        return c_[static_cast<size_t>(i)];
    }

    const std::vector<Rat>& coeffs() const { return c_; }

    bool operator==(const PolyQ& o) const { return c_ == o.c_; }
    bool operator!=(const PolyQ& o) const { return !(*this == o); }

    PolyQ operator-() const {
        std::vector<Rat> v(c_);
        for (auto& x : v) x = -x;
        return PolyQ(std::move(v));
    }

    PolyQ operator+(const PolyQ& o) const {
        std::vector<Rat> v(std::max(c_.size(), o.c_.size()), Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
        return PolyQ(std::move(v));
    }

    PolyQ operator-(const PolyQ& o) const { return *this + (-o); }

    PolyQ operator*(const PolyQ& o) const {
        if (is_zero() || o.is_zero()) return PolyQ();
        std::vector<Rat> v(c_.size() + o.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
        }
        return PolyQ(std::move(v));
    }

    PolyQ operator*(const Rat& s) const {
        if (s == 0) return PolyQ();
        std::vector<Rat> v(c_);
        for (auto& x : v) x *= s;
        return PolyQ(std::move(v));
    }

    // Quotient and remainder; divisor must be nonzero.
    std::pair<PolyQ, PolyQ> divrem(const PolyQ& d) const {
        if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
        PolyQ r = *this;
        if (degree() < d.degree()) return {PolyQ(), r};
        std::vector<Rat> q(static_cast<size_t>(degree() - d.degree()) + 1, Rat(0));
        Rat dlc_inv = Rat(1) / d.lc();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int k = r.degree() - d.degree();
            Rat f = r.lc() * dlc_inv;
            q[static_cast<size_t>(k)] = f;
            // r -= f * x^k * d
            for (int i = 0; i <= d.degree(); ++i)
                r.c_[static_cast<size_t>(i + k)] -= f * d.c_[static_cast<size_t>(i)];
            r.trim();
        }
        return {PolyQ(std::move(q)), r};
    }

    PolyQ operator/(const PolyQ& d) const { return divrem(d).first; }
    PolyQ operator%(const PolyQ& d) const { return divrem(d).second; }

    PolyQ derivative() const {
        if (c_.size() <= 1) return PolyQ();
        std::vector<Rat> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return PolyQ(std::move(v));
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    PolyQ monic() const {
        if (is_zero()) return *this;
        return *this * (Rat(1) / lc());
    }

    bool is_monic() const { return !is_zero() && lc() == 1; }

    bool is_integral() const {
        for (const auto& c : c_)
            if (c.get_den() != 1) return false;
        return true;
    }

    // f(x) -> f(x + a)
    PolyQ shift(const Rat& a) const {
        PolyQ result;
        PolyQ base({a, Rat(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            result = result * base + PolyQ::constant(*it);
        return result;
    }

    // f(x) -> f(s*x)
    PolyQ scale_arg(const Rat& s) const {
        std::vector<Rat> v(c_);
        Rat pw(1);
        for (size_t i = 0; i < v.size(); ++i) {
            v[i] *= pw;
            pw *= s;
        }
        return PolyQ(std::move(v));
    }

    // Primitive integer polynomial u with *this = cont * u, cont > 0 unless
    // the sign rides along in cont.  Leading coefficient of u is positive
    // times sign of lc.
    std::pair<std::vector<Int>, Rat> primitive_z() const {
        if (is_zero()) return {{}, Rat(0)};
        Int den(1);
        for (const auto& c : c_) den = lcm(den, c.get_den());
        std::vector<Int> z(c_.size());
        Int g(0);
        for (size_t i = 0; i < c_.size(); ++i) {
            z[i] = c_[i].get_num() * (den / c_[i].get_den());
            g = gcd(g, z[i]);
        }
        for (auto& zi : z) zi /= g;
        return {std::move(z), rat(g, den)};
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            Rat c = coeff(i);
            if (c == 0) continue;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            Rat a = c < 0 ? Rat(-c) : c;
            if (i == 0 || a != 1) os << a.get_str();
            if (i > 0) {
                if (a != 1) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        return os.str();
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rat> c_;
};

inline PolyQ operator*(const Rat& s, const PolyQ& p) { return p * s; }

// Monic gcd over Q.
inline PolyQ poly_gcd(PolyQ a, PolyQ b) {
    while (!b.is_zero()) {
        PolyQ r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

// Yun squarefree decomposition: f (nonzero) = lc * prod g_i^i with the g_i
// monic, squarefree and pairwise coprime.  Returns the (g_i, i) with g_i
// nonconstant.
inline std::vector<std::pair<PolyQ, int>> squarefree_decomposition(const PolyQ& f0) {
    if (f0.is_zero()) throw std::invalid_argument("squarefree decomposition of zero");
    std::vector<std::pair<PolyQ, int>> out;
    PolyQ f = f0.monic();
    if (f.degree() < 1) return out;
    PolyQ fp = f.derivative();
    PolyQ a = poly_gcd(f, fp);
    PolyQ b = f / a;
    PolyQ c = fp / a;
    PolyQ d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        a = poly_gcd(b, d);
        if (a.degree() > 0) out.emplace_back(a, i);
        b = b / a;
        c = d / a;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

// Resultant over Q via the Euclidean scheme; fine for the small degrees
// this project feeds it.
inline Rat resultant(PolyQ a, PolyQ b) {
    if (a.is_zero() || b.is_zero()) return Rat(0);
    Rat res(1);
    int sign = 1;
    while (b.degree() > 0) {
        PolyQ r = a % b;
        int da = a.degree(), db = b.degree();
        if ((da & 1) && (db & 1)) sign = -sign;
        if (r.is_zero()) return Rat(0);
        Rat lcb = b.lc();
        Rat pw(1);
        for (int i = 0; i < da - r.degree(); ++i) pw *= lcb;
        res *= pw;
        a = std::move(b);
        b = std::move(r);
    }
    // b constant nonzero
    Rat pw(1);
    for (int i = 0; i < a.degree(); ++i) pw *= b.lc();
    res *= pw;
    return sign < 0 ? Rat(-res) : res;
}

// Newton interpolation through (points[i], values[i]), pairwise distinct points.
inline PolyQ interpolate(const std::vector<Rat>& points, const std::vector<Rat>& values) {
    if (points.size() != values.size()) throw std::invalid_argument("interpolate: size mismatch");
    size_t n = points.size();
    std::vector<Rat> dd(values);  // divided differences, in place
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (points[i] - points[i - j]);
            if (i == j) break;
        }
    PolyQ result = PolyQ::constant(dd[n - 1]);
    for (size_t i = n - 1; i-- > 0;) {
        // result = result * (x - points[i]) + dd[i]
        result = result * PolyQ({-points[i], Rat(1)}) + PolyQ::constant(dd[i]);
    }
    return result;
}

}  // namespace modcong

#endif
