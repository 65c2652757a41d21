#ifndef MODCONG_MODSYM_HPP
#define MODCONG_MODSYM_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/arith.hpp"
#include "modcong/heilbronn.hpp"
#include "modcong/matrix.hpp"
#include "modcong/p1.hpp"

namespace modcong {

using SparseVec = std::vector<std::pair<int, Rat>>;  // sorted by index

// Column echelon form: returns (columns, pivot rows).  Reading coordinates of
// a vector in the span off the pivot rows works because pivot rows carry the
// identity pattern.
inline std::pair<MatQ, std::vector<int>> echelon_columns(const MatQ& cols) {
    MatQ t = cols.transpose();
    auto piv = t.rref();
    MatQ out(cols.rows(), static_cast<int>(piv.size()));
    for (size_t k = 0; k < piv.size(); ++k)
        for (int i = 0; i < cols.rows(); ++i) out.at(i, static_cast<int>(k)) = t.at(static_cast<int>(k), i);
    return {std::move(out), std::move(piv)};
}

// SL2(Z) lift of (c, d) with gcd(c, d, N) = 1: returns [[a, b], [c', d']] with
// determinant 1 and (c', d') congruent to (c, d) mod N.
inline std::array<int64_t, 4> lift_to_sl2(int64_t c, int64_t d, int64_t n) {
    c %= n; if (c < 0) c += n;
    d %= n; if (d < 0) d += n;
    if (n == 1) return {1, 0, 0, 1};
    if (c == 0 && d == 0) throw std::invalid_argument("lift_to_sl2: zero pair");
    int64_t dd = d;
    for (;; dd += n) {
        if (std::gcd(c, dd) == 1) break;
        if (dd > d + 64 * n) throw std::logic_error("lift_to_sl2: no coprime shift found");
    }
    // a*dd - b*c = 1
    int64_t a = 0, b = 0;
    {
        int64_t old_r = dd, r = c, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            int64_t q = old_r / r;
            int64_t tmp = old_r - q * r; old_r = r; r = tmp;
            tmp = old_s - q * s; old_s = s; s = tmp;
            tmp = old_t - q * t; old_t = t; t = tmp;
        }
        if (old_r == 1) { a = old_s; b = -old_t; }
        else if (old_r == -1) { a = -old_s; b = old_t; }
        else throw std::logic_error("lift_to_sl2: gcd != 1");
    }
    return {a, b, c, dd};
}

namespace cuspdetail {

struct Cusp {
    Int num, den;  // lowest terms, den >= 0, infinity = (1, 0)
};

inline Cusp normalize_cusp(Int num, Int den) {
    if (den == 0) return {Int(1), Int(0)};
    if (den < 0) { num = -num; den = -den; }
    Int g = gcd(abs(num), den);
    if (g > 1) { num /= g; den /= g; }
    return {std::move(num), std::move(den)};
}

// p*s == 1 (mod q); for q in {0, 1} any value works, return fixed ones.
inline Int cusp_inverse_part(const Int& p, const Int& q) {
    if (q == 0) return 1;
    if (q == 1) return 0;
    return invmod(fdiv_r(p, q), q);
}

// Gamma_0(N) equivalence of cusps: s1 q2 == s2 q1 (mod gcd(q1 q2, N)).
inline bool cusp_equiv(int64_t n, const Cusp& a, const Cusp& b) {
    Int g = gcd(a.den * b.den, Int(n));
    if (g == 0) g = n;
    Int s1 = cusp_inverse_part(a.num, a.den);
    Int s2 = cusp_inverse_part(b.num, b.den);
    return fdiv_r(s1 * b.den - s2 * a.den, g) == 0;
}

// equivalence in the plus quotient: up to Gamma_0(N) and negation
inline bool cusp_equiv_pm(int64_t n, const Cusp& a, const Cusp& b) {
    if (cusp_equiv(n, a, b)) return true;
    Cusp nb = normalize_cusp(-b.num, b.den);
    return cusp_equiv(n, a, nb);
}

}  // namespace cuspdetail

// Weight-2 modular symbols for Gamma_0(N) in the +1 quotient: free module on
// P^1(Z/N) modulo the eta identification, the two-term S relation and the
// three-term T relation.  Cuspidal subspace is the kernel of the boundary map.
class ModSymSpace : public std::enable_shared_from_this<ModSymSpace> {
  public:
    static std::shared_ptr<const ModSymSpace> get(int64_t n) {
        static std::mutex mtx;
        static std::map<int64_t, std::shared_ptr<const ModSymSpace>> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        auto sp = std::shared_ptr<const ModSymSpace>(new ModSymSpace(n));
        cache[n] = sp;
        return sp;
    }

    int64_t level() const { return n_; }
    const P1& p1() const { return p1_; }
    int quotient_dim() const { return dim_; }
    int cuspidal_dim() const { return cuspidal_.cols(); }
    int num_cusp_classes() const { return static_cast<int>(cusps_.size()); }

    const MatQ& cuspidal_basis() const { return cuspidal_; }
    const std::vector<int>& cuspidal_pivots() const { return cusp_piv_; }
    const MatQ& boundary_matrix() const { return boundary_; }

    // image of the p1 generator in the quotient basis
    const SparseVec& gen_image(int p1_index) const { return gen2basis_[static_cast<size_t>(p1_index)]; }

    // full Hecke matrix on the quotient presentation (T_q, or U_q when q | N)
    std::shared_ptr<const MatQ> hecke_quotient(int64_t q) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = hecke_cache_.find(q);
            if (it != hecke_cache_.end()) return it->second;
        }
        auto m = std::make_shared<const MatQ>(compute_hecke(q));
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = hecke_cache_.emplace(q, m);
        return it->second;
    }

    // T_q restricted to the cuspidal subspace (g x g)
    MatQ hecke_cuspidal(int64_t q) const {
        return restrict_to(cuspidal_, cusp_piv_, *hecke_quotient(q));
    }

    // restriction of a quotient operator to a column-echelon subspace
    static MatQ restrict_to(const MatQ& cols, const std::vector<int>& piv, const MatQ& op) {
        MatQ img = op * cols;
        return img.rows_subset(piv);
    }

    // new subspace inside the cuspidal one: intersection of the kernels of
    // both degeneracy maps to level N/p for every prime p | N
    std::pair<MatQ, std::vector<int>> new_subspace() const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (new_cache_) return *new_cache_;
        }
        auto result = compute_new_subspace();
        std::lock_guard<std::mutex> lock(mu_);
        if (!new_cache_) new_cache_ = std::make_shared<std::pair<MatQ, std::vector<int>>>(std::move(result));
        return *new_cache_;
    }

    int new_dim() const { return new_subspace().first.cols(); }

    // {alpha, beta} as an element of the quotient, via Manin's trick
    std::vector<Rat> path_element(const cuspdetail::Cusp& alpha, const cuspdetail::Cusp& beta) const {
        std::vector<Rat> acc(static_cast<size_t>(dim_), Rat(0));
        add_infinity_path(beta, Rat(1), acc);
        add_infinity_path(alpha, Rat(-1), acc);
        return acc;
    }

    // degeneracy map to level M = N/t' for t | N/M: column images of the basis
    MatQ degeneracy_to(const ModSymSpace& target, int64_t t) const {
        if (n_ % target.n_ != 0 || (n_ / target.n_) % t != 0)
            throw std::invalid_argument("degeneracy_to: invalid divisor data");
        MatQ out(target.dim_, dim_);
        for (int k = 0; k < dim_; ++k) {
            auto [c, d] = p1_.reps()[static_cast<size_t>(basis_gens_[static_cast<size_t>(k)])];
            auto g = lift_to_sl2(c, d, n_);
            // {t * b/d', t * a/c'}
            auto alpha = cuspdetail::normalize_cusp(Int(t) * Int(g[1]), Int(g[3]));
            auto beta = cuspdetail::normalize_cusp(Int(t) * Int(g[0]), Int(g[2]));
            auto img = target.path_element(alpha, beta);
            for (int i = 0; i < target.dim_; ++i) out.at(i, k) = img[static_cast<size_t>(i)];
        }
        return out;
    }

  private:
    explicit ModSymSpace(int64_t n) : n_(n), p1_(n) {
        build_presentation();
        build_boundary();
    }

    // ---- presentation ----

    struct SignedUF {
        std::vector<int> parent;
        std::vector<int> sign;  // sign relative to parent
        std::vector<bool> zero;

        explicit SignedUF(size_t n) : parent(n), sign(n, 1), zero(n, false) {
            for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
        }

        std::pair<int, int> find(int i) {
            if (parent[static_cast<size_t>(i)] == i) return {i, 1};
            auto [r, s] = find(parent[static_cast<size_t>(i)]);
            parent[static_cast<size_t>(i)] = r;
            sign[static_cast<size_t>(i)] *= s;
            return {r, sign[static_cast<size_t>(i)]};
        }

        // impose x_i = s * x_j
        void merge(int i, int j, int s) {
            auto [ri, si] = find(i);
            auto [rj, sj] = find(j);
            if (ri == rj) {
                if (si != s * sj) zero[static_cast<size_t>(ri)] = true;
                return;
            }
            parent[static_cast<size_t>(rj)] = ri;
            sign[static_cast<size_t>(rj)] = si * s * sj;
            if (zero[static_cast<size_t>(rj)]) zero[static_cast<size_t>(ri)] = true;
        }
    };

    void build_presentation() {
        const auto& reps = p1_.reps();
        int m = static_cast<int>(reps.size());
        SignedUF uf(static_cast<size_t>(m));

        for (int i = 0; i < m; ++i) {
            auto [c, d] = reps[static_cast<size_t>(i)];
            uf.merge(i, p1_.index_of(-c, d), 1);    // eta (plus quotient)
            uf.merge(i, p1_.index_of(d, -c), -1);   // S relation
        }

        // class numbering over nonzero roots
        std::vector<int> class_of(static_cast<size_t>(m), -1);
        std::vector<int> class_root;
        for (int i = 0; i < m; ++i) {
            auto [r, s] = uf.find(i);
            (void)s;
            if (uf.zero[static_cast<size_t>(r)]) continue;
            if (class_of[static_cast<size_t>(r)] < 0) {
                class_of[static_cast<size_t>(r)] = static_cast<int>(class_root.size());
                class_root.push_back(r);
            }
        }
        auto gen_class = [&](int i) -> std::pair<int, int> {
            auto [r, s] = uf.find(i);
            if (uf.zero[static_cast<size_t>(r)]) return {-1, 0};
            return {class_of[static_cast<size_t>(r)], s};
        };

        // T relation rows over the classes
        using Row = std::vector<std::pair<int, Rat>>;
        std::vector<Row> rows;
        for (int i = 0; i < m; ++i) {
            auto [c, d] = reps[static_cast<size_t>(i)];
            int i1 = p1_.index_of(d, -c - d);
            auto [c1, d1] = reps[static_cast<size_t>(i1)];
            (void)c1;
            (void)d1;
            int i2 = p1_.index_of(-c - d, c);
            if (i > i1 || i > i2) continue;  // one row per T orbit
            std::map<int, Rat> acc;
            for (int j : {i, i1, i2}) {
                auto [cls, sgn] = gen_class(j);
                if (cls >= 0) acc[cls] += Rat(sgn);
            }
            Row row;
            for (auto& [cls, v] : acc)
                if (v != 0) row.emplace_back(cls, v);
            if (!row.empty()) rows.push_back(std::move(row));
        }

        // sparse reduced echelon over the classes
        std::map<int, Row> pivot_rows;
        for (auto& row : rows) {
            for (;;) {
                auto it = std::find_if(row.begin(), row.end(), [&](const auto& t) {
                    return pivot_rows.count(t.first) > 0;
                });
                if (it == row.end()) break;
                Rat f = it->second;
                const Row& pr = pivot_rows[it->first];
                std::map<int, Rat> acc(row.begin(), row.end());
                for (const auto& [c2, v2] : pr) acc[c2] -= f * v2;
                row.clear();
                for (auto& [c2, v2] : acc)
                    if (v2 != 0) row.emplace_back(c2, v2);
                if (row.empty()) break;
            }
            if (row.empty()) continue;
            Rat lead = row.front().second;
            for (auto& [c2, v2] : row) v2 /= lead;
            pivot_rows[row.front().first] = row;
        }
        // back substitution, decreasing pivot index
        for (auto it = pivot_rows.rbegin(); it != pivot_rows.rend(); ++it) {
            Row& r = it->second;
            std::map<int, Rat> acc(r.begin(), r.end());
            bool changed = true;
            while (changed) {
                changed = false;
                for (auto& [c2, v2] : acc) {
                    if (c2 == it->first || v2 == 0) continue;
                    auto pit = pivot_rows.find(c2);
                    if (pit == pivot_rows.end() || pit->first == it->first) continue;
                    Rat f = v2;
                    for (const auto& [c3, v3] : pit->second) acc[c3] -= f * v3;
                    changed = true;
                    break;
                }
            }
            r.clear();
            for (auto& [c2, v2] : acc)
                if (v2 != 0) r.emplace_back(c2, v2);
        }

        // free classes become the basis
        int nclasses = static_cast<int>(class_root.size());
        std::vector<int> basis_index(static_cast<size_t>(nclasses), -1);
        for (int cls = 0; cls < nclasses; ++cls) {
            if (pivot_rows.count(cls)) continue;
            basis_index[static_cast<size_t>(cls)] = static_cast<int>(basis_gens_.size());
            basis_gens_.push_back(class_root[static_cast<size_t>(cls)]);
        }
        dim_ = static_cast<int>(basis_gens_.size());

        // class -> combination of basis elements
        std::vector<SparseVec> class2basis(static_cast<size_t>(nclasses));
        for (int cls = 0; cls < nclasses; ++cls) {
            if (basis_index[static_cast<size_t>(cls)] >= 0) {
                class2basis[static_cast<size_t>(cls)] = {{basis_index[static_cast<size_t>(cls)], Rat(1)}};
                continue;
            }
            const Row& r = pivot_rows[cls];
            SparseVec v;
            for (size_t t = 0; t < r.size(); ++t) {
                if (r[t].first == cls) continue;
                int bi = basis_index[static_cast<size_t>(r[t].first)];
                if (bi < 0) throw std::logic_error("ModSymSpace: elimination left a pivot term");
                v.emplace_back(bi, -r[t].second);
            }
            std::sort(v.begin(), v.end());
            class2basis[static_cast<size_t>(cls)] = std::move(v);
        }

        gen2basis_.resize(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            auto [cls, sgn] = gen_class(i);
            if (cls < 0) continue;
            SparseVec v = class2basis[static_cast<size_t>(cls)];
            if (sgn < 0)
                for (auto& [b, coef] : v) coef = -coef;
            gen2basis_[static_cast<size_t>(i)] = std::move(v);
        }
    }

    // ---- boundary ----

    void build_boundary() {
        std::vector<std::vector<Rat>> cols(static_cast<size_t>(dim_));
        auto cusp_class = [&](const cuspdetail::Cusp& c) {
            for (size_t k = 0; k < cusps_.size(); ++k) {
                cuspdetail::Cusp rep{cusps_[k].first, cusps_[k].second};
                if (cuspdetail::cusp_equiv_pm(n_, rep, c)) return static_cast<int>(k);
            }
            cusps_.emplace_back(c.num, c.den);
            return static_cast<int>(cusps_.size()) - 1;
        };
        std::vector<std::map<int, Rat>> entries(static_cast<size_t>(dim_));
        for (int k = 0; k < dim_; ++k) {
            auto [c, d] = p1_.reps()[static_cast<size_t>(basis_gens_[static_cast<size_t>(k)])];
            auto g = lift_to_sl2(c, d, n_);
            auto beta = cuspdetail::normalize_cusp(Int(g[0]), Int(g[2]));
            auto alpha = cuspdetail::normalize_cusp(Int(g[1]), Int(g[3]));
            entries[static_cast<size_t>(k)][cusp_class(beta)] += 1;
            entries[static_cast<size_t>(k)][cusp_class(alpha)] -= 1;
        }
        boundary_ = MatQ(static_cast<int>(cusps_.size()), dim_);
        for (int k = 0; k < dim_; ++k)
            for (auto& [ci, v] : entries[static_cast<size_t>(k)]) boundary_.at(ci, k) = v;

        auto [cb, piv] = echelon_columns(kernel_matrix(boundary_));
        cuspidal_ = std::move(cb);
        cusp_piv_ = std::move(piv);
    }

    // ---- Hecke ----

    MatQ compute_hecke(int64_t q) const {
        if (!is_prime(q)) throw std::invalid_argument("hecke: q must be prime");
        MatQ out(dim_, dim_);
        if (n_ % q != 0) {
            auto mats = heilbronn_matrices(q);
            for (int k = 0; k < dim_; ++k) {
                auto [c, d] = p1_.reps()[static_cast<size_t>(basis_gens_[static_cast<size_t>(k)])];
                for (const auto& h : *mats) {
                    int idx = p1_.index_of(c * h.a + d * h.c, c * h.b + d * h.d);
                    if (idx < 0) continue;
                    for (const auto& [b, coef] : gen2basis_[static_cast<size_t>(idx)])
                        out.at(b, k) += coef;
                }
            }
        } else {
            // U_q via the coset matrices [[1, j], [0, q]]
            for (int k = 0; k < dim_; ++k) {
                auto [c, d] = p1_.reps()[static_cast<size_t>(basis_gens_[static_cast<size_t>(k)])];
                auto g = lift_to_sl2(c, d, n_);
                for (int64_t j = 0; j < q; ++j) {
                    auto alpha = cuspdetail::normalize_cusp(Int(g[1]) + Int(j) * Int(g[3]),
                                                            Int(q) * Int(g[3]));
                    auto beta = cuspdetail::normalize_cusp(Int(g[0]) + Int(j) * Int(g[2]),
                                                           Int(q) * Int(g[2]));
                    auto img = path_element(alpha, beta);
                    for (int i = 0; i < dim_; ++i) out.at(i, k) += img[static_cast<size_t>(i)];
                }
            }
        }
        return out;
    }

    // add sign * {infinity, num/den} to acc via continued-fraction convergents
    void add_infinity_path(const cuspdetail::Cusp& target, const Rat& sign_val,
                           std::vector<Rat>& acc) const {
        if (target.den == 0) return;
        // convergents p_k/q_k; term k has Manin symbol ((-1)^(k-1) q_k, q_(k-1))
        int64_t signk = -1;  // (-1)^(k-1)
        Int pkm2(0), qkm2(1);  // p_(-2)/q_(-2) = 0/1
        Int pkm1(1), qkm1(0);  // p_(-1)/q_(-1) = infinity
        Int cur_p = target.num, cur_q = target.den;
        while (true) {
            Int a = fdiv_q(cur_p, cur_q);
            Int pk = a * pkm1 + pkm2;
            Int qk = a * qkm1 + qkm2;
            // symbol ((-1)^(k-1) q_k, q_(k-1))
            Int first = (signk < 0) ? Int(-qk) : qk;
            int64_t c = mod_level(first);
            int64_t d = mod_level(qkm1);
            int idx = p1_.index_of(c, d);
            if (idx >= 0)
                for (const auto& [b, coef] : gen2basis_[static_cast<size_t>(idx)])
                    acc[static_cast<size_t>(b)] += sign_val * coef;
            Int rem = cur_p - a * cur_q;
            pkm2 = pkm1; qkm2 = qkm1;
            pkm1 = pk; qkm1 = qk;
            if (rem == 0) break;
            cur_p = cur_q;
            cur_q = rem;
            signk = -signk;
        }
    }

    int64_t mod_level(const Int& x) const {
        Int r = fdiv_r(x, Int(n_));
        return r.get_si();
    }

    std::pair<MatQ, std::vector<int>> compute_new_subspace() const {
        if (cuspidal_.cols() == 0) return {MatQ(dim_, 0), {}};
        std::vector<MatQ> stacked;
        int total_rows = 0;
        for (int64_t p : prime_divisors(n_)) {
            auto target = ModSymSpace::get(n_ / p);
            if (target->quotient_dim() == 0) continue;
            for (int64_t t : {int64_t(1), p}) {
                MatQ dmap = degeneracy_to(*target, t);
                MatQ restricted = dmap * cuspidal_;
                total_rows += restricted.rows();
                stacked.push_back(std::move(restricted));
            }
        }
        if (stacked.empty()) {
            return {cuspidal_, cusp_piv_};
        }
        MatQ big(total_rows, cuspidal_.cols());
        int row0 = 0;
        for (const auto& m : stacked) {
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j) big.at(row0 + i, j) = m.at(i, j);
            row0 += m.rows();
        }
        MatQ ker = kernel_matrix(big);
        return echelon_columns(cuspidal_ * ker);
    }

    int64_t n_;
    P1 p1_;
    int dim_ = 0;
    std::vector<int> basis_gens_;
    std::vector<SparseVec> gen2basis_;
    std::vector<std::pair<Int, Int>> cusps_;
    MatQ boundary_;
    MatQ cuspidal_;
    std::vector<int> cusp_piv_;

    mutable std::mutex mu_;
    mutable std::map<int64_t, std::shared_ptr<const MatQ>> hecke_cache_;
    mutable std::shared_ptr<std::pair<MatQ, std::vector<int>>> new_cache_;
};

// closed-form index of Gamma_0(N) in SL2(Z)
inline int64_t gamma0_index(int64_t n) {
    int64_t mu = n;
    for (int64_t p : prime_divisors(n)) mu += mu / p;
    return n == 1 ? 1 : mu;
}

}  // namespace modcong

#endif
