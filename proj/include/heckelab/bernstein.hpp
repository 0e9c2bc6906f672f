#pragma once

#include "heckelab/rootdatum.hpp"
#include "heckelab/scalar.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace heckelab {

// Label functions lambda, lambda* on the basis of a root datum.  Equal on
// W0-associate simple roots; lambda = lambda* away from 2X.
struct LabelFunctions {
    IVec lambda;
    IVec lambda_star;
};

// Group-algebra element of Y: finite map y -> Scalar.
using ThetaPoly = std::map<IVec, Scalar>;

inline void theta_add_term(ThetaPoly& p, const IVec& y, const Scalar& c)
{
    if (c.is_zero())
        return;
    auto it = p.find(y);
    if (it == p.end()) {
        p[y] = c;
    } else {
        it->second += c;
        if (it->second.is_zero())
            p.erase(it);
    }
}

inline ThetaPoly theta_monomial(const IVec& y, const Scalar& c = Scalar(1))
{
    ThetaPoly p;
    if (!c.is_zero())
        p[y] = c;
    return p;
}

inline ThetaPoly theta_add(const ThetaPoly& a, const ThetaPoly& b)
{
    ThetaPoly r = a;
    for (const auto& [y, c] : b)
        theta_add_term(r, y, c);
    return r;
}

inline ThetaPoly theta_sub(const ThetaPoly& a, const ThetaPoly& b)
{
    ThetaPoly r = a;
    for (const auto& [y, c] : b)
        theta_add_term(r, y, -c);
    return r;
}

inline ThetaPoly theta_mul(const ThetaPoly& a, const ThetaPoly& b)
{
    ThetaPoly r;
    for (const auto& [ya, ca] : a)
        for (const auto& [yb, cb] : b) {
            IVec y(ya.size());
            for (size_t i = 0; i < y.size(); ++i)
                y[i] = ya[i] + yb[i];
            theta_add_term(r, y, ca * cb);
        }
    return r;
}

inline ThetaPoly theta_scale(const Scalar& c, const ThetaPoly& a)
{
    ThetaPoly r;
    for (const auto& [y, x] : a)
        theta_add_term(r, y, c * x);
    return r;
}

// Exact division of P by (theta_0 - theta_d) along a strictly decreasing key
// functional.  key(d) < 0 is required; throws NonDivisible when the division
// does not close.
inline ThetaPoly theta_div_one_minus(const ThetaPoly& p0, const IVec& d,
                                     const std::function<Rat(const IVec&)>& key)
{
    if (p0.empty())
        return {};
    Rat min_key;
    bool first = true;
    for (const auto& [y, c] : p0) {
        Rat k = key(y);
        if (first || k < min_key)
            min_key = k;
        first = false;
    }
    ThetaPoly rem = p0;
    ThetaPoly quot;
    while (!rem.empty()) {
        // pick a monomial with maximal key
        auto best = rem.begin();
        Rat bk = key(best->first);
        for (auto it = std::next(rem.begin()); it != rem.end(); ++it) {
            Rat k = key(it->first);
            if (k > bk) {
                bk = k;
                best = it;
            }
        }
        if (bk < min_key)
            throw Error(Errc::NonDivisible, "group-algebra division does not close");
        IVec y = best->first;
        Scalar c = best->second;
        theta_add_term(quot, y, c);
        theta_add_term(rem, y, -c);
        IVec yd(y.size());
        for (size_t i = 0; i < y.size(); ++i)
            yd[i] = y[i] + d[i];
        theta_add_term(rem, yd, c);
    }
    return quot;
}

// Element of the affine Hecke algebra in Bernstein normal form:
// sum over w of c_w(theta) T_w with the theta-coefficients kept on the left.
using BernsteinElt = std::map<size_t, ThetaPoly>;

// Affine Hecke algebra H(R, lambda, lambda*, q) on the vector space
// C[Y] (x) H(W0, q) with the Bernstein cross relation.
class AffineHecke {
public:
    AffineHecke(BasedRootDatum datum, LabelFunctions labels)
        : datum_(std::move(datum)), labels_(std::move(labels)),
          weyl_(std::make_shared<WeylGroup>(datum_))
    {
        size_t n = datum_.basis.size();
        if (labels_.lambda.size() != n || labels_.lambda_star.size() != n)
            throw Error(Errc::BadLabels, "label count does not match basis");
        for (size_t i = 0; i < n; ++i)
            if (labels_.lambda[i] < 0 || labels_.lambda_star[i] < 0)
                throw Error(Errc::BadLabels, "labels must be nonnegative");
        // W0-associate simples carry equal labels
        auto orbit_id = simple_orbits();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (orbit_id[i] == orbit_id[j] &&
                    (labels_.lambda[i] != labels_.lambda[j] || labels_.lambda_star[i] != labels_.lambda_star[j]))
                    throw Error(Errc::BadLabels, "W0-associate simple roots " + std::to_string(i + 1) + ", " +
                                                     std::to_string(j + 1) + " carry different labels");
        // lambda = lambda* unless alpha in 2X
        for (size_t i = 0; i < n; ++i) {
            if (labels_.lambda[i] != labels_.lambda_star[i] && !datum_.in_two_x(datum_.roots[datum_.basis[i]]))
                throw Error(Errc::BadLabels, "lambda != lambda* at simple root " + std::to_string(i + 1) +
                                                 " outside 2X");
        }
    }

    const BasedRootDatum& datum() const { return datum_; }
    const WeylGroup& weyl() const { return *weyl_; }
    std::shared_ptr<WeylGroup> weyl_ptr() const { return weyl_; }
    const LabelFunctions& labels() const { return labels_; }
    size_t rank() const { return datum_.rank; }
    size_t num_gens() const { return datum_.basis.size(); }

    Scalar q_s(size_t i) const { return Scalar::t_pow(2 * labels_.lambda[i]); }

    BernsteinElt zero() const { return {}; }
    BernsteinElt one() const { return theta_elt(theta_monomial(IVec(rank(), 0))); }
    BernsteinElt theta_elt(const ThetaPoly& p) const
    {
        BernsteinElt e;
        if (!p.empty())
            e[weyl_->identity()] = p;
        return e;
    }
    BernsteinElt theta(const IVec& y, const Scalar& c = Scalar(1)) const
    {
        return theta_elt(theta_monomial(y, c));
    }
    BernsteinElt t_w(size_t w, const Scalar& c = Scalar(1)) const
    {
        BernsteinElt e;
        ThetaPoly p = theta_monomial(IVec(rank(), 0), c);
        if (!p.empty())
            e[w] = p;
        return e;
    }
    BernsteinElt t_gen(size_t i) const { return t_w(weyl_->gen(i)); }

    static void add_term(BernsteinElt& e, size_t w, const ThetaPoly& p)
    {
        if (p.empty())
            return;
        auto it = e.find(w);
        if (it == e.end()) {
            e[w] = p;
        } else {
            it->second = theta_add(it->second, p);
            if (it->second.empty())
                e.erase(it);
        }
    }
    static BernsteinElt add(const BernsteinElt& a, const BernsteinElt& b)
    {
        BernsteinElt r = a;
        for (const auto& [w, p] : b)
            add_term(r, w, p);
        return r;
    }
    static BernsteinElt sub(const BernsteinElt& a, const BernsteinElt& b)
    {
        BernsteinElt r = a;
        for (const auto& [w, p] : b) {
            ThetaPoly n;
            for (const auto& [y, c] : p)
                theta_add_term(n, y, -c);
            add_term(r, w, n);
        }
        return r;
    }
    static BernsteinElt scalar_mul(const Scalar& c, const BernsteinElt& a)
    {
        BernsteinElt r;
        for (const auto& [w, p] : a)
            add_term(r, w, theta_scale(c, p));
        return r;
    }
    static BernsteinElt theta_left_mul(const ThetaPoly& p, const BernsteinElt& a)
    {
        BernsteinElt r;
        for (const auto& [w, q] : a)
            add_term(r, w, theta_mul(p, q));
        return r;
    }

    IVec reflect_y(size_t simple, const IVec& y) const
    {
        QVec img = datum_.reflect_y(datum_.basis[simple], to_qvec(y));
        auto iv = integral_vec(img);
        if (!iv)
            throw Error(Errc::BadInput, "reflection left the lattice");
        return *iv;
    }

    Rat pair_alpha(size_t simple, const IVec& y) const
    {
        return datum_.pair(datum_.roots[datum_.basis[simple]], to_qvec(y));
    }

    IVec coroot(size_t simple) const
    {
        auto iv = integral_vec(datum_.coroots[datum_.basis[simple]]);
        if (!iv)
            throw Error(Errc::BadInput, "coroot not integral");
        return *iv;
    }

    // Bernstein cross relation: theta_y T_s - T_s theta_{s(y)} as a pure
    // theta element.  Exact division; NonDivisible is unreachable for valid
    // labels.
    ThetaPoly cross(const IVec& y, size_t simple) const
    {
        IVec sy = reflect_y(simple, y);
        if (sy == y)
            return {};
        long l = labels_.lambda[simple];
        long ls = labels_.lambda_star[simple];
        IVec minus_coroot = coroot(simple);
        for (auto& v : minus_coroot)
            v = -v;
        // G = (q^l - 1) + theta_{-alpha~} (q^{(l+l*)/2} - q^{(l-l*)/2})
        ThetaPoly g = theta_monomial(IVec(rank(), 0), Scalar::t_pow(2 * l) - Scalar(1));
        theta_add_term(g, minus_coroot, Scalar::t_pow(l + ls) - Scalar::t_pow(l - ls));
        ThetaPoly num = theta_mul(g, theta_sub(theta_monomial(y), theta_monomial(sy)));
        IVec d(minus_coroot.size());
        for (size_t i = 0; i < d.size(); ++i)
            d[i] = 2 * minus_coroot[i];
        QVec alpha = datum_.roots[datum_.basis[simple]];
        auto key = [this, alpha](const IVec& v) { return datum_.pair(alpha, to_qvec(v)); };
        return theta_div_one_minus(num, d, key);
    }

    // T_s * theta_z = theta_{s(z)} T_s - cross(s(z), s)
    BernsteinElt gen_mul(size_t i, const BernsteinElt& x) const
    {
        BernsteinElt r;
        size_t id = weyl_->identity();
        for (const auto& [w, p] : x) {
            bool shorter = weyl_->left_descent(i, w);
            size_t sw = weyl_->gen_mul(i, w);
            for (const auto& [z, c] : p) {
                IVec sz = reflect_y(i, z);
                // T_s theta_z = theta_sz T_s - cross(sz, i)
                ThetaPoly head = theta_monomial(sz, c);
                ThetaPoly tail = theta_scale(-c, cross(sz, i));
                // multiply the T_s of head into T_w
                if (!shorter) {
                    add_term(r, sw, head);
                } else {
                    add_term(r, w, theta_scale(q_s(i) - Scalar(1), head));
                    add_term(r, sw, theta_scale(q_s(i), head));
                }
                add_term(r, w, tail);
            }
        }
        (void)id;
        return r;
    }

    BernsteinElt mul(const BernsteinElt& a, const BernsteinElt& b) const
    {
        BernsteinElt r;
        for (const auto& [w, p] : a) {
            BernsteinElt t = b;
            auto word = weyl_->reduced_word(w);
            for (auto it = word.rbegin(); it != word.rend(); ++it)
                t = gen_mul(*it, t);
            for (const auto& [u, q] : t)
                add_term(r, u, theta_mul(p, q));
        }
        return r;
    }

    // T_s^{-1} = q_s^{-1} T_s - (1 - q_s^{-1})
    BernsteinElt gen_inverse(size_t i) const
    {
        Scalar qi = q_s(i).inverse();
        BernsteinElt r = t_w(weyl_->gen(i), qi);
        return add(r, t_w(weyl_->identity(), qi * (Scalar(1) - q_s(i))));
    }

    BernsteinElt t_w_inverse(size_t w) const
    {
        BernsteinElt r = one();
        auto word = weyl_->reduced_word(w);
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            r = mul(r, gen_inverse(*it));
        return r;
    }

    Scalar q_of(size_t w) const
    {
        Scalar r(1);
        for (size_t i : weyl_->reduced_word(w))
            r *= q_s(i);
        return r;
    }

    static bool equal(const BernsteinElt& a, const BernsteinElt& b) { return a == b; }

    std::string render(const BernsteinElt& x) const
    {
        if (x.empty())
            return "0";
        std::vector<std::pair<size_t, ThetaPoly>> terms(x.begin(), x.end());
        std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
            size_t la = weyl_->elt(a.first).length, lb = weyl_->elt(b.first).length;
            if (la != lb)
                return la > lb;
            return weyl_->reduced_word(a.first) < weyl_->reduced_word(b.first);
        });
        std::string out;
        bool outer_first = true;
        for (const auto& [w, p] : terms) {
            for (const auto& [y, c] : p) {
                if (!outer_first)
                    out += " + ";
                outer_first = false;
                out += render_term(w, y, c);
            }
        }
        return out;
    }

    std::string elt_name(size_t w) const
    {
        auto wd = weyl_->reduced_word(w);
        if (wd.empty())
            return "e";
        std::string s;
        for (size_t i = 0; i < wd.size(); ++i) {
            if (i)
                s += ".";
            s += "s" + std::to_string(wd[i] + 1);
        }
        return s;
    }

private:
    std::string render_term(size_t w, const IVec& y, const Scalar& c) const
    {
        std::vector<std::string> pieces;
        if (!c.is_one()) {
            std::string s = c.to_string_q();
            if (c.terms().size() > 1)
                s = "(" + s + ")";
            pieces.push_back(s);
        }
        bool y_zero = true;
        for (long v : y)
            if (v != 0)
                y_zero = false;
        if (!y_zero || (c.is_one() && w == weyl_->identity())) {
            std::string s = "th[";
            for (size_t i = 0; i < y.size(); ++i) {
                if (i)
                    s += ",";
                s += std::to_string(y[i]);
            }
            s += "]";
            pieces.push_back(s);
        }
        if (w != weyl_->identity())
            pieces.push_back("T[" + elt_name(w) + "]");
        if (pieces.empty())
            pieces.push_back("T[e]");
        std::string out;
        for (size_t i = 0; i < pieces.size(); ++i) {
            if (i)
                out += "*";
            out += pieces[i];
        }
        return out;
    }

    std::vector<size_t> simple_orbits() const
    {
        // W0-orbit identifiers of the simple roots
        size_t n = datum_.basis.size();
        std::vector<size_t> ids(n);
        std::vector<std::set<QVec>> orbits;
        for (size_t i = 0; i < n; ++i) {
            QVec root = datum_.roots[datum_.basis[i]];
            size_t found = orbits.size();
            for (size_t k = 0; k < orbits.size(); ++k)
                if (orbits[k].count(root))
                    found = k;
            if (found == orbits.size()) {
                std::set<QVec> orbit;
                std::vector<QVec> queue{root};
                orbit.insert(root);
                while (!queue.empty()) {
                    QVec x = queue.back();
                    queue.pop_back();
                    for (size_t g = 0; g < n; ++g) {
                        QVec img = datum_.reflect_x(datum_.basis[g], x);
                        if (orbit.insert(img).second)
                            queue.push_back(img);
                    }
                }
                orbits.push_back(std::move(orbit));
            }
            ids[i] = found;
        }
        return ids;
    }

    BasedRootDatum datum_;
    LabelFunctions labels_;
    std::shared_ptr<WeylGroup> weyl_;
};

} // namespace heckelab
