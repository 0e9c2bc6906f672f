#pragma once

#include "heckelab/linalg.hpp"
#include "heckelab/report.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace heckelab {

// Based root datum (X, R, Y, R~, basis) with X = Y = Z^n and an explicit
// integral pairing matrix P, <x, y> = x^T P y.  Roots live in X, coroots in
// Y, aligned by index.
struct BasedRootDatum {
    size_t rank = 0;       // rank of X and Y
    QMat pairing;          // n x n, integral entries
    std::vector<QVec> roots;
    std::vector<QVec> coroots;
    std::vector<size_t> basis; // indices into roots

    Rat pair(const QVec& x, const QVec& y) const { return dot(x, mat_vec(pairing, y)); }

    size_t num_roots() const { return roots.size(); }

    std::optional<size_t> root_index(const QVec& x) const
    {
        for (size_t i = 0; i < roots.size(); ++i)
            if (roots[i] == x)
                return i;
        return std::nullopt;
    }

    // s_alpha(y) = y - <alpha, y> alpha~
    QVec reflect_y(size_t root_idx, const QVec& y) const
    {
        return sub(y, scale(pair(roots[root_idx], y), coroots[root_idx]));
    }
    // s_alpha(x) = x - <x, alpha~> alpha
    QVec reflect_x(size_t root_idx, const QVec& x) const
    {
        return sub(x, scale(pair(x, coroots[root_idx]), roots[root_idx]));
    }

    // x in 2X in the coordinate lattice: every coordinate even.
    bool in_two_x(const QVec& x) const
    {
        for (const auto& c : x) {
            if (!is_integral(c))
                return false;
            if (numerator(c) % 2 != 0)
                return false;
        }
        return true;
    }

    // Expansion of a root over the basis; one-signed integral coefficients
    // when the datum is valid.
    std::optional<QVec> basis_coords(const QVec& root) const
    {
        QMat m = qmat(rank, basis.size());
        for (size_t j = 0; j < basis.size(); ++j)
            for (size_t i = 0; i < rank; ++i)
                m[i][j] = roots[basis[j]][i];
        return solve(m, root);
    }

    bool is_positive_root(const QVec& root) const
    {
        auto c = basis_coords(root);
        if (!c)
            return false;
        bool nonneg = true;
        for (const auto& v : *c)
            if (v < 0)
                nonneg = false;
        return nonneg;
    }
};

inline Report check_root_datum(const BasedRootDatum& d)
{
    Report rep;
    rep.suite = "root-datum";

    bool shape_ok = d.pairing.size() == d.rank && d.roots.size() == d.coroots.size();
    for (const auto& row : d.pairing)
        if (row.size() != d.rank)
            shape_ok = false;
    rep.add("shape", shape_ok, "pairing/root/coroot dimensions inconsistent");
    if (!shape_ok)
        return rep;

    Rat det = determinant(d.pairing);
    rep.add("pairing-perfect", det == 1 || det == -1, "det = " + rat_to_string(det));

    bool norm_ok = true;
    std::string norm_witness;
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (d.pair(d.roots[i], d.coroots[i]) != 2) {
            norm_ok = false;
            norm_witness = "root " + qvec_to_string(d.roots[i]);
            break;
        }
    }
    rep.add("pairing-normalization", norm_ok, norm_witness);

    bool stab_ok = true;
    std::string stab_witness;
    for (size_t i = 0; i < d.roots.size() && stab_ok; ++i) {
        for (size_t j = 0; j < d.roots.size() && stab_ok; ++j) {
            QVec rx = d.reflect_x(i, d.roots[j]);
            QVec ry = d.reflect_y(i, d.coroots[j]);
            bool x_in = d.root_index(rx).has_value();
            bool y_in = false;
            for (const auto& cr : d.coroots)
                if (cr == ry)
                    y_in = true;
            if (!x_in || !y_in) {
                stab_ok = false;
                stab_witness = "s_" + qvec_to_string(d.roots[i]) + " applied to index " + std::to_string(j);
            }
        }
    }
    rep.add("reflection-stability", stab_ok, stab_witness);

    bool reduced = true;
    std::string red_witness;
    for (const auto& r : d.roots) {
        if (d.root_index(scale(Rat(2), r))) {
            reduced = false;
            red_witness = "2*" + qvec_to_string(r) + " is a root";
            break;
        }
    }
    rep.add("reduced", reduced, red_witness);

    bool basis_ok = true;
    std::string basis_witness;
    for (size_t b : d.basis)
        if (b >= d.roots.size())
            basis_ok = false;
    if (basis_ok) {
        for (const auto& r : d.roots) {
            auto c = d.basis_coords(r);
            bool good = c.has_value();
            if (good) {
                bool nonneg = true, nonpos = true;
                for (const auto& v : *c) {
                    if (!is_integral(v))
                        good = false;
                    if (v > 0)
                        nonpos = false;
                    if (v < 0)
                        nonneg = false;
                }
                good = good && (nonneg || nonpos);
            }
            if (!good) {
                basis_ok = false;
                basis_witness = "root " + qvec_to_string(r) + " not one-signed over basis";
                break;
            }
        }
    }
    rep.add("basis-decomposition", basis_ok, basis_witness);
    return rep;
}

// reflect() of the contract: v interpreted in X or Y.
enum class Side { InX, InY };

inline QVec reflect(const BasedRootDatum& d, const QVec& alpha, const QVec& v, Side side)
{
    auto idx = d.root_index(alpha);
    if (!idx)
        throw Error(Errc::UnknownRoot, qvec_to_string(alpha));
    return side == Side::InX ? d.reflect_x(*idx, v) : d.reflect_y(*idx, v);
}

// One enumerated Weyl group element.
struct WeylElt {
    QMat mat_x; // action on X
    QMat mat_y; // action on Y
    size_t length = 0;
    std::vector<size_t> word; // simple-reflection indices, product left to right
};

// Finite Weyl group with cached reduced words, lengths and generator tables.
// Elements are indices into `elts`; deterministic order (length, then lex
// word).
class WeylGroup {
public:
    static constexpr size_t kDefaultBudget = 10000;

    explicit WeylGroup(const BasedRootDatum& datum, size_t budget = kDefaultBudget) : datum_(datum)
    {
        build(budget);
    }

    const BasedRootDatum& datum() const { return datum_; }
    size_t size() const { return elts_.size(); }
    size_t num_gens() const { return datum_.basis.size(); }
    const WeylElt& elt(size_t i) const { return elts_[i]; }
    size_t identity() const { return id_; }

    size_t gen(size_t g) const { return gen_elt_[g]; }
    // index of s_g * w
    size_t gen_mul(size_t g, size_t w) const { return gen_mul_[g][w]; }
    // index of w * s_g
    size_t mul_gen(size_t w, size_t g) const { return mul_gen_[w][g]; }
    size_t inverse(size_t w) const { return inv_[w]; }

    size_t mul(size_t a, size_t b) const
    {
        size_t r = b;
        const auto& wa = elts_[a].word;
        for (auto it = wa.rbegin(); it != wa.rend(); ++it)
            r = gen_mul(*it, r);
        return r;
    }

    // l(s_g w) < l(w)
    bool left_descent(size_t g, size_t w) const { return elts_[gen_mul_[g][w]].length < elts_[w].length; }
    // l(w s_g) < l(w)
    bool right_descent(size_t w, size_t g) const { return elts_[mul_gen_[w][g]].length < elts_[w].length; }

    QVec act_x(size_t w, const QVec& x) const { return mat_vec(elts_[w].mat_x, x); }
    QVec act_y(size_t w, const QVec& y) const { return mat_vec(elts_[w].mat_y, y); }

    std::optional<size_t> find_by_mat_y(const QMat& m) const
    {
        auto it = index_.find(m);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    // descent word: repeatedly strip the smallest left descent
    std::vector<size_t> reduced_word(size_t w) const { return elts_[w].word; }

    // order of s_g s_h, used for braid relations
    size_t braid_order(size_t g, size_t h) const
    {
        size_t x = gen_mul_[g][gen_mul_[h][id_]];
        size_t m = 1;
        size_t cur = x;
        while (cur != id_) {
            cur = mul(x, cur);
            ++m;
            if (m > 2 * size())
                throw Error(Errc::Budget, "braid order runaway");
        }
        return m;
    }

    // Two generators are conjugate iff joined by a path of odd braid orders.
    std::vector<size_t> generator_conjugacy_classes() const
    {
        size_t n = num_gens();
        std::vector<size_t> cls(n);
        for (size_t i = 0; i < n; ++i)
            cls[i] = i;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i + 1; j < n; ++j) {
                    if (braid_order(i, j) % 2 == 1 && cls[i] != cls[j]) {
                        size_t lo = std::min(cls[i], cls[j]);
                        size_t hi = std::max(cls[i], cls[j]);
                        for (size_t k = 0; k < n; ++k)
                            if (cls[k] == hi)
                                cls[k] = lo;
                        changed = true;
                    }
                }
        }
        return cls;
    }

private:
    void build(size_t budget)
    {
        size_t n = datum_.rank;
        size_t g = datum_.basis.size();

        std::vector<QMat> gen_x(g), gen_y(g);
        for (size_t i = 0; i < g; ++i) {
            size_t ri = datum_.basis[i];
            gen_x[i] = qidentity(n);
            gen_y[i] = qidentity(n);
            for (size_t col = 0; col < n; ++col) {
                QVec e(n, Rat(0));
                e[col] = 1;
                QVec rx = datum_.reflect_x(ri, e);
                QVec ry = datum_.reflect_y(ri, e);
                for (size_t row = 0; row < n; ++row) {
                    gen_x[i][row][col] = rx[row];
                    gen_y[i][row][col] = ry[row];
                }
            }
        }

        // positive roots, for length counting
        std::vector<bool> pos(datum_.roots.size());
        for (size_t i = 0; i < datum_.roots.size(); ++i)
            pos[i] = datum_.is_positive_root(datum_.roots[i]);

        auto length_of = [&](const QMat& mx) {
            size_t l = 0;
            for (size_t i = 0; i < datum_.roots.size(); ++i) {
                if (!pos[i])
                    continue;
                QVec img = mat_vec(mx, datum_.roots[i]);
                auto idx = datum_.root_index(img);
                if (!idx)
                    throw Error(Errc::BadInput, "Weyl action does not permute roots");
                if (!pos[*idx])
                    ++l;
            }
            return l;
        };

        WeylElt e;
        e.mat_x = qidentity(n);
        e.mat_y = qidentity(n);
        e.length = 0;
        std::vector<WeylElt> found{e};
        index_[e.mat_y] = 0;

        // BFS closure under left multiplication by generators
        for (size_t head = 0; head < found.size(); ++head) {
            if (found.size() > budget)
                throw Error(Errc::Budget, "Weyl group exceeds element budget");
            WeylElt cur = found[head];
            for (size_t i = 0; i < g; ++i) {
                QMat my = mat_mul(gen_y[i], cur.mat_y);
                if (index_.count(my))
                    continue;
                WeylElt nxt;
                nxt.mat_y = my;
                nxt.mat_x = mat_mul(gen_x[i], cur.mat_x);
                nxt.length = length_of(nxt.mat_x);
                index_[my] = found.size();
                found.push_back(nxt);
            }
        }

        // recompute canonical reduced words by smallest-descent stripping
        for (auto& w : found)
            w.word = descent_word(w, gen_x, gen_y, found, length_of);

        std::vector<size_t> order(found.size());
        for (size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (found[a].length != found[b].length)
                return found[a].length < found[b].length;
            return found[a].word < found[b].word;
        });

        elts_.resize(found.size());
        index_.clear();
        for (size_t i = 0; i < order.size(); ++i) {
            elts_[i] = found[order[i]];
            index_[elts_[i].mat_y] = i;
        }
        id_ = index_.at(qidentity(n));

        gen_elt_.resize(g);
        gen_mul_.assign(g, std::vector<size_t>(elts_.size()));
        mul_gen_.assign(elts_.size(), std::vector<size_t>(g));
        for (size_t i = 0; i < g; ++i)
            gen_elt_[i] = index_.at(gen_y[i]);
        for (size_t w = 0; w < elts_.size(); ++w)
            for (size_t i = 0; i < g; ++i) {
                gen_mul_[i][w] = index_.at(mat_mul(gen_y[i], elts_[w].mat_y));
                mul_gen_[w][i] = index_.at(mat_mul(elts_[w].mat_y, gen_y[i]));
            }

        inv_.resize(elts_.size());
        for (size_t w = 0; w < elts_.size(); ++w)
            inv_[w] = index_.at(invert(elts_[w].mat_y));
    }

    template <typename LengthFn>
    std::vector<size_t> descent_word(const WeylElt& w, const std::vector<QMat>& gen_x,
                                     const std::vector<QMat>& gen_y, const std::vector<WeylElt>&,
                                     LengthFn&& length_of) const
    {
        std::vector<size_t> word;
        QMat mx = w.mat_x;
        size_t len = w.length;
        while (len > 0) {
            bool found_descent = false;
            for (size_t i = 0; i < gen_x.size(); ++i) {
                QMat cand = mat_mul(gen_x[i], mx);
                size_t l = length_of(cand);
                if (l < len) {
                    word.push_back(i);
                    mx = cand;
                    len = l;
                    found_descent = true;
                    break;
                }
            }
            if (!found_descent)
                throw Error(Errc::NotInGroup, "no descent found");
        }
        return word;
    }

    BasedRootDatum datum_;
    std::vector<WeylElt> elts_;
    std::map<QMat, size_t> index_;
    std::vector<size_t> gen_elt_;
    std::vector<std::vector<size_t>> gen_mul_;
    std::vector<std::vector<size_t>> mul_gen_;
    std::vector<size_t> inv_;
    size_t id_ = 0;
};

// Builds the simply-connected style datum from a Cartan matrix
// C[i][j] = <alpha_j, alpha_i~>: Y has the simple coroots as standard basis,
// X is its dual, roots are generated by reflection closure.
inline BasedRootDatum datum_from_cartan(const IMat& cartan, size_t budget = 10000)
{
    size_t n = cartan.size();
    BasedRootDatum d;
    d.rank = n;
    d.pairing = qidentity(n);
    std::vector<QVec> simples(n, QVec(n, Rat(0)));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i)
            simples[j][i] = cartan[i][j];
    std::vector<QVec> simple_coroots(n, QVec(n, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        simple_coroots[i][i] = 1;

    // closure of simple roots under simple reflections, tracking coroots
    std::vector<std::pair<QVec, QVec>> closure;
    auto contains = [&](const QVec& x) {
        for (auto& [r, c] : closure)
            if (r == x)
                return true;
        return false;
    };
    for (size_t i = 0; i < n; ++i)
        closure.push_back({simples[i], simple_coroots[i]});
    for (size_t head = 0; head < closure.size(); ++head) {
        if (closure.size() > budget)
            throw Error(Errc::Budget, "root closure exceeds budget");
        auto [r, c] = closure[head];
        for (size_t i = 0; i < n; ++i) {
            // s_i(r) = r - <r, alpha_i~> alpha_i ; coroot transforms dually
            Rat rp = r[i]; // <r, alpha_i~> in these coordinates
            QVec nr = sub(r, scale(rp, simples[i]));
            if (!contains(nr)) {
                Rat cp = dot(simples[i], c); // <alpha_i, c>
                QVec nc = sub(c, scale(cp, simple_coroots[i]));
                closure.push_back({nr, nc});
            }
        }
    }
    for (auto& [r, c] : closure) {
        d.roots.push_back(r);
        d.coroots.push_back(c);
    }
    for (size_t i = 0; i < n; ++i)
        d.basis.push_back(i);
    return d;
}

} // namespace heckelab
