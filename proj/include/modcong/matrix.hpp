#ifndef MODCONG_MATRIX_HPP
#define MODCONG_MATRIX_HPP

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"
#include "modcong/poly.hpp"

namespace modcong {

// Dense matrix over Q, row major.
class MatQ {
  public:
    MatQ() : rows_(0), cols_(0) {}
    MatQ(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Rat(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("MatQ: negative dimension");
    }

    static MatQ identity(int n) {
        MatQ m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Rat& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const MatQ& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const MatQ& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : e_)
            if (x != 0) return false;
        return true;
    }

    MatQ operator+(const MatQ& o) const {
        check_same_shape(o);
        MatQ r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }

    MatQ operator-(const MatQ& o) const {
        check_same_shape(o);
        MatQ r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
        return r;
    }

    MatQ operator*(const Rat& s) const {
        MatQ r(rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * s;
        return r;
    }

    MatQ operator*(const MatQ& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("MatQ multiply: shape mismatch");
        MatQ r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rat& a = at(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    const Rat& b = o.at(k, j);
                    if (b != 0) r.at(i, j) += a * b;
                }
            }
        return r;
    }

    std::vector<Rat> mul_vec(const std::vector<Rat>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("mul_vec: shape mismatch");
        std::vector<Rat> r(static_cast<size_t>(rows_), Rat(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != 0 && v[static_cast<size_t>(j)] != 0)
                    r[static_cast<size_t>(i)] += at(i, j) * v[static_cast<size_t>(j)];
        return r;
    }

    MatQ transpose() const {
        MatQ r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    MatQ col(int j) const {
        MatQ r(rows_, 1);
        for (int i = 0; i < rows_; ++i) r.at(i, 0) = at(i, j);
        return r;
    }

    std::vector<Rat> col_vec(int j) const {
        std::vector<Rat> r(static_cast<size_t>(rows_));
        for (int i = 0; i < rows_; ++i) r[static_cast<size_t>(i)] = at(i, j);
        return r;
    }

    MatQ cols_subset(const std::vector<int>& idx) const {
        MatQ r(rows_, static_cast<int>(idx.size()));
        for (int i = 0; i < rows_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) r.at(i, static_cast<int>(j)) = at(i, idx[j]);
        return r;
    }

    MatQ rows_subset(const std::vector<int>& idx) const {
        MatQ r(static_cast<int>(idx.size()), cols_);
        for (size_t i = 0; i < idx.size(); ++i)
            for (int j = 0; j < cols_; ++j) r.at(static_cast<int>(i), j) = at(idx[i], j);
        return r;
    }

    // In-place reduced row echelon form; returns pivot columns.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int piv = -1;
            for (int i = r; i < rows_; ++i)
                if (at(i, c) != 0) { piv = i; break; }
            if (piv < 0) continue;
            if (piv != r)
                for (int j = 0; j < cols_; ++j) std::swap(at(piv, j), at(r, j));
            Rat inv = Rat(1) / at(r, c);
            for (int j = c; j < cols_; ++j) at(r, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == r || at(i, c) == 0) continue;
                Rat f = at(i, c);
                for (int j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        MatQ copy = *this;
        return static_cast<int>(copy.rref().size());
    }

    Rat det() const {
        if (rows_ != cols_) throw std::invalid_argument("det: non-square matrix");
        MatQ a = *this;
        Rat d(1);
        for (int c = 0; c < cols_; ++c) {
            int piv = -1;
            for (int i = c; i < rows_; ++i)
                if (a.at(i, c) != 0) { piv = i; break; }
            if (piv < 0) return Rat(0);
            if (piv != c) {
                for (int j = 0; j < cols_; ++j) std::swap(a.at(piv, j), a.at(c, j));
                d = -d;
            }
            d *= a.at(c, c);
            Rat inv = Rat(1) / a.at(c, c);
            for (int i = c + 1; i < rows_; ++i) {
                if (a.at(i, c) == 0) continue;
                Rat f = a.at(i, c) * inv;
                for (int j = c; j < cols_; ++j) a.at(i, j) -= f * a.at(c, j);
            }
        }
        return d;
    }

    MatQ inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse: non-square matrix");
        MatQ aug(rows_, 2 * cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = 1;
        }
        auto piv = aug.rref();
        if (static_cast<int>(piv.size()) != rows_ || piv.back() >= cols_)
            throw std::invalid_argument("inverse: singular matrix");
        MatQ inv(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

  private:
    void check_same_shape(const MatQ& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("MatQ: shape mismatch");
    }

    int rows_, cols_;
    std::vector<Rat> e_;
};

inline MatQ operator*(const Rat& s, const MatQ& m) { return m * s; }

// Kernel basis of {v : Mv = 0}.  Each vector is a column matrix; reading the
// vectors as the rows of a matrix gives reduced echelon form.
inline std::vector<MatQ> kernel(const MatQ& m) {
    MatQ red = m;
    std::vector<int> pivots = red.rref();
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;

    // standard basis from free columns
    MatQ basis(m.cols() - static_cast<int>(pivots.size()), m.cols());
    int row = 0;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[static_cast<size_t>(c)]) continue;
        basis.at(row, c) = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            basis.at(row, pivots[i]) = -red.at(static_cast<int>(i), c);
        ++row;
    }
    basis.rref();
    std::vector<MatQ> out;
    out.reserve(static_cast<size_t>(basis.rows()));
    for (int i = 0; i < basis.rows(); ++i) {
        MatQ v(m.cols(), 1);
        for (int j = 0; j < m.cols(); ++j) v.at(j, 0) = basis.at(i, j);
        out.push_back(std::move(v));
    }
    return out;
}

// Kernel as a matrix whose columns are the basis vectors.
inline MatQ kernel_matrix(const MatQ& m) {
    auto vs = kernel(m);
    MatQ r(m.cols(), static_cast<int>(vs.size()));
    for (size_t j = 0; j < vs.size(); ++j)
        for (int i = 0; i < m.cols(); ++i) r.at(i, static_cast<int>(j)) = vs[j].at(i, 0);
    return r;
}

// Dense matrix over Z, row major.
class MatZ {
  public:
    MatZ() : rows_(0), cols_(0) {}
    MatZ(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Int(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("MatZ: negative dimension");
    }

    static MatZ identity(int n) {
        MatZ m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const MatZ& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const MatZ& o) const { return !(*this == o); }

    MatZ operator*(const MatZ& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("MatZ multiply: shape mismatch");
        MatZ r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Int& a = at(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols_; ++j)
                    if (o.at(k, j) != 0) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    MatQ to_matq() const {
        MatQ r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = Rat(at(i, j));
        return r;
    }

    static MatZ vstack(const MatZ& a, const MatZ& b) {
        if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
        MatZ r(a.rows() + b.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) r.at(a.rows() + i, j) = b.at(i, j);
        return r;
    }

  private:
    int rows_, cols_;
    std::vector<Int> e_;
};

// Row-style Hermite normal form: same row lattice, zero rows dropped,
// pivots positive with strictly increasing columns, entries above each
// pivot reduced into [0, pivot).
inline MatZ hnf(const MatZ& m0) {
    MatZ a = m0;
    int rows = a.rows(), cols = a.cols();
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        // clear the column below row r by gcd steps
        for (;;) {
            int best = -1;
            for (int i = r; i < rows; ++i) {
                if (a.at(i, c) == 0) continue;
                if (best < 0 || abs(a.at(i, c)) < abs(a.at(best, c))) best = i;
            }
            if (best < 0) break;
            if (best != r)
                for (int j = 0; j < cols; ++j) std::swap(a.at(best, j), a.at(r, j));
            bool clean = true;
            for (int i = r + 1; i < rows; ++i) {
                if (a.at(i, c) == 0) continue;
                Int q = fdiv_q(a.at(i, c), a.at(r, c));
                if (q != 0)
                    for (int j = 0; j < cols; ++j) a.at(i, j) -= q * a.at(r, j);
                if (a.at(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (a.at(r, c) == 0) continue;
        if (a.at(r, c) < 0)
            for (int j = 0; j < cols; ++j) a.at(r, j) = -a.at(r, j);
        for (int i = 0; i < r; ++i) {
            Int q = fdiv_q(a.at(i, c), a.at(r, c));
            if (q != 0)
                for (int j = 0; j < cols; ++j) a.at(i, j) -= q * a.at(r, j);
        }
        ++r;
    }
    MatZ out(r, cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < cols; ++j) out.at(i, j) = a.at(i, j);
    return out;
}

// Does v lie in the row lattice of an HNF basis?
inline bool hnf_contains(const MatZ& h, const std::vector<Int>& v) {
    if (static_cast<int>(v.size()) != h.cols()) throw std::invalid_argument("hnf_contains: size mismatch");
    std::vector<Int> w(v);
    int row = 0;
    for (int c = 0; c < h.cols(); ++c) {
        int piv = -1;
        if (row < h.rows() && h.at(row, c) != 0) piv = row;
        if (piv < 0) {
            if (w[static_cast<size_t>(c)] != 0) return false;
            continue;
        }
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w[static_cast<size_t>(c)].get_mpz_t(),
                    h.at(piv, c).get_mpz_t());
        if (r != 0) return false;
        if (q != 0)
            for (int j = c; j < h.cols(); ++j) w[static_cast<size_t>(j)] -= q * h.at(piv, j);
        ++row;
    }
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

namespace detail {

// Word-size modular arithmetic for the CRT characteristic polynomial.
inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod_u64(uint64_t a, uint64_t p) { return powmod_u64(a, p - 2, p); }

// Shared, grow-only prime pool; callers copy what they need under the lock.
inline std::vector<uint64_t> crt_primes(size_t count) {
    static std::mutex mtx;
    static std::vector<uint64_t> primes;
    static Int cursor = (Int(1) << 62);
    std::lock_guard<std::mutex> lock(mtx);
    while (primes.size() < count) {
        cursor = next_prime(cursor);
        primes.push_back(mpz_get_ui(cursor.get_mpz_t()));  // cursor < 2^63, exact
    }
    return primes;
}

// charpoly of an n x n matrix mod p via Hessenberg reduction (Cohen 2.2.9).
inline std::vector<uint64_t> charpoly_mod_p(std::vector<uint64_t> a, int n, uint64_t p) {
    auto at = [&](int i, int j) -> uint64_t& { return a[static_cast<size_t>(i) * n + j]; };
    for (int j = 0; j + 2 < n; ++j) {
        int piv = -1;
        for (int i = j + 1; i < n; ++i)
            if (at(i, j) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != j + 1) {
            for (int k = 0; k < n; ++k) std::swap(at(piv, k), at(j + 1, k));
            for (int k = 0; k < n; ++k) std::swap(at(k, piv), at(k, j + 1));
        }
        uint64_t inv = invmod_u64(at(j + 1, j), p);
        for (int i = j + 2; i < n; ++i) {
            if (at(i, j) == 0) continue;
            uint64_t t = mulmod_u64(at(i, j), inv, p);
            uint64_t tneg = p - t;
            for (int k = j; k < n; ++k)
                at(i, k) = (at(i, k) + mulmod_u64(tneg, at(j + 1, k), p)) % p;
            for (int k = 0; k < n; ++k)
                at(k, j + 1) = (at(k, j + 1) + mulmod_u64(t, at(k, i), p)) % p;
        }
    }
    // p_m for leading principal m x m of the Hessenberg form
    std::vector<std::vector<uint64_t>> polys(static_cast<size_t>(n) + 1);
    polys[0] = {1};
    for (int m = 1; m <= n; ++m) {
        auto& pm = polys[static_cast<size_t>(m)];
        const auto& prev = polys[static_cast<size_t>(m - 1)];
        pm.assign(static_cast<size_t>(m) + 1, 0);
        // (x - h[m-1][m-1]) * prev
        uint64_t hm = at(m - 1, m - 1) % p;
        for (size_t k = 0; k < prev.size(); ++k) {
            pm[k + 1] = (pm[k + 1] + prev[k]) % p;
            if (hm) pm[k] = (pm[k] + mulmod_u64(p - hm, prev[k], p)) % p;
        }
        uint64_t prod = 1;
        for (int i = 1; i < m; ++i) {
            prod = mulmod_u64(prod, at(m - i, m - i - 1), p);
            if (prod == 0) break;
            uint64_t coef = mulmod_u64(prod, at(m - 1 - i, m - 1) % p, p);
            if (coef == 0) continue;
            uint64_t cneg = p - coef;
            const auto& pi = polys[static_cast<size_t>(m - 1 - i)];
            for (size_t k = 0; k < pi.size(); ++k)
                pm[k] = (pm[k] + mulmod_u64(cneg, pi[k], p)) % p;
        }
    }
    return polys[static_cast<size_t>(n)];
}

}  // namespace detail

// Characteristic polynomial det(xI - M), monic of degree n, computed exactly:
// clear denominators, CRT over word primes against a Hadamard-style bound.
inline PolyQ charpoly(const MatQ& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("charpoly: non-square matrix");
    int n = m.rows();
    if (n == 0) return PolyQ::constant(Rat(1));

    Int den(1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) den = lcm(den, m.at(i, j).get_den());
    std::vector<Int> a(static_cast<size_t>(n) * n);
    Int maxabs(1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Int v = m.at(i, j).get_num() * (den / m.at(i, j).get_den());
            a[static_cast<size_t>(i) * n + j] = v;
            if (abs(v) > maxabs) maxabs = abs(v);
        }

    // |c_k| <= binom(n,k) * (sqrt(k) * maxabs)^k: bound via k^(k/2) <= n^(k/2)
    Int bound(1);
    {
        Int nk = maxabs * maxabs * n;  // (sqrt(n)*maxabs)^2
        Int term(1), binom(1);
        for (int k = 1; k <= n; ++k) {
            binom = binom * (n - k + 1) / k;
            term *= nk;  // (sqrt(n)*maxabs)^(2k); overshoots (^k) for safety
            Int cand = binom * term;
            if (cand > bound) bound = cand;
        }
        bound = 2 * bound + 1;
    }

    // collect enough primes
    std::vector<uint64_t> primes;
    {
        Int prod(1);
        size_t count = 8;
        for (;;) {
            const auto& ps = detail::crt_primes(count);
            prod = 1;
            primes.clear();
            for (uint64_t p : ps) {
                primes.push_back(p);
                prod *= Int(mpz_class(static_cast<unsigned long>(p)));
                if (prod > bound) break;
            }
            if (prod > bound) break;
            count *= 2;
        }
    }

    // CRT accumulate
    Int modulus(1);
    std::vector<Int> coeffs(static_cast<size_t>(n) + 1, Int(0));
    for (uint64_t p : primes) {
        std::vector<uint64_t> ap(static_cast<size_t>(n) * n);
        Int pz(static_cast<unsigned long>(p));
        for (size_t i = 0; i < ap.size(); ++i) {
            Int r = fdiv_r(a[i], pz);
            ap[i] = mpz_get_ui(r.get_mpz_t());
        }
        auto cp = detail::charpoly_mod_p(std::move(ap), n, p);
        if (modulus == 1) {
            for (size_t k = 0; k < cp.size(); ++k) coeffs[k] = Int(static_cast<unsigned long>(cp[k]));
            modulus = pz;
        } else {
            Int inv = invmod(fdiv_r(modulus, pz), pz);
            for (size_t k = 0; k < cp.size(); ++k) {
                Int delta = fdiv_r((Int(static_cast<unsigned long>(cp[k])) - coeffs[k]) * inv, pz);
                coeffs[k] += modulus * delta;
            }
            modulus *= pz;
        }
    }
    Int half = modulus / 2;
    for (auto& c : coeffs)
        if (c > half) c -= modulus;

    // charpoly(M) = den^(-n) * charpoly(den*M)(den*x):
    // coefficient of x^k is coeffs[k] / den^(n-k)
    std::vector<Rat> out(static_cast<size_t>(n) + 1);
    Int scale(1);
    for (int k = n; k >= 0; --k) {
        out[static_cast<size_t>(k)] = rat(coeffs[static_cast<size_t>(k)], scale);
        scale *= den;
    }
    return PolyQ(std::move(out));
}

// Evaluate a polynomial at a square matrix.
inline MatQ eval_poly_at(const PolyQ& f, const MatQ& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eval_poly_at: non-square matrix");
    int n = m.rows();
    MatQ acc(n, n);
    for (int d = f.degree(); d >= 0; --d) {
        acc = acc * m;
        Rat c = f.coeff(d);
        if (c != 0)
            for (int i = 0; i < n; ++i) acc.at(i, i) += c;
    }
    return acc;
}

}  // namespace modcong

#endif
