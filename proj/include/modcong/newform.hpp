#ifndef MODCONG_NEWFORM_HPP
#define MODCONG_NEWFORM_HPP

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modcong/matrix.hpp"
#include "modcong/modsym.hpp"
#include "modcong/numberfield.hpp"
#include "modcong/polyfactor.hpp"

namespace modcong {

// weight-2 Sturm bound ceil(mu / 6) for Gamma_0(N)
inline int64_t sturm_bound(int64_t n) {
    if (n < 1) throw std::invalid_argument("sturm_bound: level must be >= 1");
    int64_t mu = gamma0_index(n);
    return (mu + 5) / 6;
}

// Z-combination of Hecke operators used as a field generator on a block.
struct HeckeCombo {
    std::vector<std::pair<int64_t, Int>> terms;  // (prime, coefficient)

    std::string describe() const {
        std::string s;
        for (size_t i = 0; i < terms.size(); ++i) {
            if (i) s += " + ";
            if (terms[i].second != 1) s += terms[i].second.get_str() + "*";
            s += "T" + std::to_string(terms[i].first);
        }
        return s;
    }
};

// Galois conjugacy class of newforms: a T-stable block of the new subspace
// whose generator operator acts with irreducible characteristic polynomial.
// Eigenvalues are solved through a cyclic vector and cached.
class NewformClass {
  public:
    // modular-symbols-backed class
    NewformClass(std::shared_ptr<const ModSymSpace> space, MatQ block_cols,
                 std::vector<int> block_piv, HeckeCombo combo, PolyQ min_poly)
        : level_(space->level()), space_(std::move(space)), block_(std::move(block_cols)),
          piv_(std::move(block_piv)), combo_(std::move(combo)) {
        eigen_field_ = NumberField::make_trusted(std::move(min_poly));
        int d = eigen_field_->degree();
        // cyclic solve structure: C = [w, tw, ..., t^(d-1) w] at the pivot rows
        w_ = block_.col_vec(0);
        MatQ tmat = combo_matrix();
        MatQ cp(d, d);
        std::vector<Rat> cur = w_;
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) cp.at(i, j) = cur[static_cast<size_t>(piv_[static_cast<size_t>(i)])];
            if (j + 1 < d) cur = tmat.mul_vec(cur);
        }
        csolve_inv_ = cp.inverse();
    }

    // record-backed class (no modular symbols space behind it)
    NewformClass(int64_t level, int index, NumberFieldPtr field,
                 std::map<int64_t, FieldElement> eigenvalues, int64_t bound, bool imported)
        : level_(level), index_(index), eigen_field_(std::move(field)),
          eigs_(std::move(eigenvalues)), stored_bound_(bound), imported_(imported) {}

    int64_t level() const { return level_; }
    int index() const { return index_; }
    void set_index(int i) { index_ = i; }
    const NumberFieldPtr& eigen_field() const { return eigen_field_; }
    int degree() const { return eigen_field_->degree(); }
    bool detached() const { return space_ == nullptr; }
    bool imported() const { return imported_; }
    const HeckeCombo& generator_combo() const { return combo_; }
    const MatQ& block() const { return block_; }
    const std::vector<int>& block_pivots() const { return piv_; }
    const std::shared_ptr<const ModSymSpace>& space() const { return space_; }

    // largest prime (inclusive) up to which eigenvalues are available without
    // recomputation; detached classes cannot go further
    int64_t stored_bound() const {
        std::lock_guard<std::mutex> lock(mu_);
        return stored_bound_;
    }

    bool is_bad_prime(int64_t q) const { return level_ % q == 0; }

    // a_q as an element of the eigenvalue field (U_q eigenvalue when q | N)
    FieldElement eigenvalue(int64_t q) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = eigs_.find(q);
            if (it != eigs_.end()) return it->second;
        }
        if (detached())
            throw std::runtime_error("NewformClass: eigenvalue beyond stored bound on a record-backed class");
        FieldElement val = compute_eigenvalue(q);
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = eigs_.emplace(q, std::move(val));
        // largest prime with every prime up to it cached
        Int p(1);
        int64_t prefix = 0;
        for (;;) {
            p = next_prime(p);
            if (!eigs_.count(p.get_si())) break;
            prefix = p.get_si();
        }
        stored_bound_ = prefix;
        return it->second;
    }

    Rat eigenvalue_trace(int64_t q) const { return eigenvalue(q).trace(); }

    std::map<int64_t, FieldElement> cached_eigenvalues() const {
        std::lock_guard<std::mutex> lock(mu_);
        return eigs_;
    }

    // restriction of T_q to the block, in block coordinates
    MatQ hecke_on_block(int64_t q) const {
        if (detached()) throw std::runtime_error("NewformClass: no space behind a record-backed class");
        return ModSymSpace::restrict_to(block_, piv_, *space_->hecke_quotient(q));
    }

  private:
    MatQ combo_matrix() const {
        MatQ acc(space_->quotient_dim(), space_->quotient_dim());
        for (const auto& [q, c] : combo_.terms) acc = acc + *space_->hecke_quotient(q) * Rat(c);
        return acc;
    }

    FieldElement compute_eigenvalue(int64_t q) const {
        auto tq = space_->hecke_quotient(q);
        std::vector<Rat> v = tq->mul_vec(w_);
        int d = eigen_field_->degree();
        MatQ rhs(d, 1);
        for (int i = 0; i < d; ++i) rhs.at(i, 0) = v[static_cast<size_t>(piv_[static_cast<size_t>(i)])];
        MatQ coords = csolve_inv_ * rhs;
        std::vector<Rat> cs(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) cs[static_cast<size_t>(i)] = coords.at(i, 0);
        return FieldElement(eigen_field_, std::move(cs));
    }

    int64_t level_;
    int index_ = -1;
    std::shared_ptr<const ModSymSpace> space_;
    MatQ block_;
    std::vector<int> piv_;
    HeckeCombo combo_;
    NumberFieldPtr eigen_field_;
    std::vector<Rat> w_;
    MatQ csolve_inv_;

    mutable std::mutex mu_;
    mutable std::map<int64_t, FieldElement> eigs_;
    mutable int64_t stored_bound_ = 0;
    bool imported_ = false;
};

using NewformClassPtr = std::shared_ptr<NewformClass>;

namespace nfdecomp {

// kernel of h(M) inside the block, where cp = charpoly(M) is squarefree with
// h | cp: computed as the Krylov span of (cp/h)(M) u for a cyclic vector u.
// Returns an empty matrix when the chosen u fails (caller retries).
inline MatQ factor_kernel_cyclic(const MatQ& m, const PolyQ& h, const PolyQ& cofactor, int ustart) {
    int n = m.rows();
    int target = h.degree();
    std::vector<Rat> u(static_cast<size_t>(n), Rat(0));
    u[static_cast<size_t>(ustart % n)] = 1;
    // z = cofactor(M) u by Horner
    std::vector<Rat> z(static_cast<size_t>(n), Rat(0));
    for (int i = cofactor.degree(); i >= 0; --i) {
        z = m.mul_vec(z);
        Rat c = cofactor.coeff(i);
        if (c != 0)
            for (int k = 0; k < n; ++k) z[static_cast<size_t>(k)] += c * u[static_cast<size_t>(k)];
    }
    MatQ kry(n, target);
    for (int j = 0; j < target; ++j) {
        for (int i = 0; i < n; ++i) kry.at(i, j) = z[static_cast<size_t>(i)];
        if (j + 1 < target) z = m.mul_vec(z);
    }
    auto [cols, piv] = echelon_columns(kry);
    if (cols.cols() != target) return MatQ(n, 0);
    return cols;
}

// kernel of h(M)^mult by explicit evaluation (fallback for non-squarefree cases)
inline MatQ factor_kernel_direct(const MatQ& m, const PolyQ& h, int mult) {
    PolyQ hp = h;
    for (int i = 1; i < mult; ++i) hp = hp * h;
    return kernel_matrix(eval_poly_at(hp, m));
}

struct Block {
    MatQ cols;
    std::vector<int> piv;
};

// deterministic generator schedule: single T_q, then pairs with small weights
inline std::vector<HeckeCombo> generator_schedule(int64_t level) {
    std::vector<HeckeCombo> out;
    auto primes = primes_up_to(sturm_bound(level) + 20);
    std::vector<int64_t> good;
    for (int64_t q : primes)
        if (level % q != 0) good.push_back(q);
    for (int64_t q : good) out.push_back(HeckeCombo{{{q, Int(1)}}});
    size_t few = std::min<size_t>(good.size(), 6);
    for (size_t i = 0; i < few; ++i)
        for (size_t j = i + 1; j < few; ++j)
            for (long c = 1; c <= 4; ++c)
                out.push_back(HeckeCombo{{{good[i], Int(1)}, {good[j], Int(c)}}});
    return out;
}

}  // namespace nfdecomp

// Decompose the new subspace into Galois conjugacy classes of newforms,
// deterministically ordered: by eigenvalue field degree, then by the
// lexicographic sequence of eigenvalue traces at 2, 3, 5, ...
inline std::vector<NewformClassPtr> decompose(const std::shared_ptr<const ModSymSpace>& space) {
    std::vector<NewformClassPtr> classes;
    auto [new_cols, new_piv] = space->new_subspace();
    if (new_cols.cols() == 0) return classes;

    auto schedule = nfdecomp::generator_schedule(space->level());
    std::vector<nfdecomp::Block> work;
    work.push_back({std::move(new_cols), std::move(new_piv)});

    while (!work.empty()) {
        nfdecomp::Block blk = std::move(work.back());
        work.pop_back();
        int dim = blk.cols.cols();
        bool resolved = false;

        for (const auto& combo : schedule) {
            // operator restricted to the block
            MatQ m(dim, dim);
            for (const auto& [q, c] : combo.terms)
                m = m + ModSymSpace::restrict_to(blk.cols, blk.piv, *space->hecke_quotient(q)) * Rat(c);
            PolyQ cp = charpoly(m);
            PolyQ g = poly_gcd(cp, cp.derivative());
            PolyQ sf = g.degree() > 0 ? cp / g : cp;
            auto factors = factor_poly_q(sf);

            if (factors.size() == 1 && g.degree() == 0) {
                if (factors[0].first.degree() != dim)
                    throw std::logic_error("decompose: irreducible charpoly of wrong degree");
                classes.push_back(std::make_shared<NewformClass>(space, std::move(blk.cols),
                                                                 std::move(blk.piv), combo,
                                                                 std::move(factors[0].first)));
                resolved = true;
                break;
            }
            if (factors.size() < 2) continue;  // power of one irreducible: no split information

            // split by factor kernels
            std::vector<nfdecomp::Block> pieces;
            int total = 0;
            bool ok = true;
            for (const auto& [h, mult] : factors) {
                (void)mult;
                MatQ inside(dim, 0);
                if (g.degree() == 0) {
                    PolyQ cofactor = cp / h;
                    for (int ustart = 0; ustart < dim && inside.cols() == 0; ++ustart)
                        inside = nfdecomp::factor_kernel_cyclic(m, h, cofactor, ustart);
                }
                if (inside.cols() == 0) {
                    int mult_in_cp = 0;
                    PolyQ rem = cp;
                    for (;;) {
                        auto [quo, r] = rem.divrem(h);
                        if (!r.is_zero()) break;
                        rem = quo;
                        ++mult_in_cp;
                    }
                    inside = nfdecomp::factor_kernel_direct(m, h, mult_in_cp);
                }
                auto [cols, piv] = echelon_columns(inside);
                if (cols.cols() == 0) { ok = false; break; }
                total += cols.cols();
                // back to quotient coordinates
                auto [qcols, qpiv] = echelon_columns(blk.cols * cols);
                pieces.push_back({std::move(qcols), std::move(qpiv)});
            }
            if (!ok || total != dim) continue;
            for (auto& p : pieces) work.push_back(std::move(p));
            resolved = true;
            break;
        }
        if (!resolved)
            throw std::runtime_error("decompose: generator schedule exhausted before the block split");
    }

    // deterministic ordering
    int64_t bound = sturm_bound(space->level());
    auto primes = primes_up_to(std::max<int64_t>(bound, 11));
    auto cmp = [&](const NewformClassPtr& a, const NewformClassPtr& b) {
        if (a->degree() != b->degree()) return a->degree() < b->degree();
        for (int64_t q : primes) {
            Rat ta = a->eigenvalue_trace(q), tb = b->eigenvalue_trace(q);
            if (ta != tb) return ta < tb;
        }
        for (int64_t q : primes) {
            PolyQ pa = charpoly(a->hecke_on_block(q)), pb = charpoly(b->hecke_on_block(q));
            for (int i = 0; i <= std::max(pa.degree(), pb.degree()); ++i)
                if (pa.coeff(i) != pb.coeff(i)) return pa.coeff(i) < pb.coeff(i);
        }
        throw std::logic_error("decompose: classes indistinguishable up to the Sturm bound");
    };
    std::sort(classes.begin(), classes.end(), cmp);
    for (size_t i = 0; i < classes.size(); ++i) classes[i]->set_index(static_cast<int>(i));
    return classes;
}

}  // namespace modcong

#endif
