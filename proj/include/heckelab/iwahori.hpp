#pragma once

#include "heckelab/affine.hpp"
#include "heckelab/rootdatum.hpp"
#include "heckelab/scalar.hpp"

#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace heckelab {

// Coxeter context over an enumerated finite Weyl group; elements are
// enumeration indices.
class FiniteCoxeter {
public:
    using Elt = size_t;

    explicit FiniteCoxeter(std::shared_ptr<WeylGroup> w) : w_(std::move(w)) {}

    size_t num_gens() const { return w_->num_gens(); }
    Elt identity() const { return w_->identity(); }
    Elt gen(size_t i) const { return w_->gen(i); }
    Elt gen_mul(size_t i, Elt x) const { return w_->gen_mul(i, x); }
    Elt mul_gen(Elt x, size_t i) const { return w_->mul_gen(x, i); }
    Elt mul(Elt a, Elt b) const { return w_->mul(a, b); }
    Elt inverse(Elt x) const { return w_->inverse(x); }
    bool left_descent(size_t i, Elt x) const { return w_->left_descent(i, x); }
    bool right_descent(Elt x, size_t i) const { return w_->right_descent(x, i); }
    size_t length(Elt x) const { return w_->elt(x).length; }
    std::vector<size_t> word(Elt x) const { return w_->reduced_word(x); }
    // finite orders only; 0 encodes infinity (never happens here)
    size_t braid_order(size_t i, size_t j) const { return w_->braid_order(i, j); }
    const WeylGroup& group() const { return *w_; }
    std::string elt_name(Elt x) const
    {
        auto wd = word(x);
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
    std::shared_ptr<WeylGroup> w_;
};

// Coxeter context for the affine Weyl group in semidirect coordinates at a
// special point.  Elements are finitely many but unbounded; descents are
// decided by the sign of the image of the simple affine roots.
class AffineCoxeter {
public:
    using Elt = AffineWeylElt;
    static constexpr long kTranslationCap = 16;

    explicit AffineCoxeter(std::shared_ptr<SpecialPointData> spd) : spd_(std::move(spd))
    {
        const auto& d = spd_->datum;
        pos_root_.resize(d.roots.size());
        for (size_t i = 0; i < d.roots.size(); ++i)
            pos_root_[i] = d.is_positive_root(d.roots[i]);
    }

    const SpecialPointData& spd() const { return *spd_; }
    size_t num_gens() const { return spd_->gen_alpha.size(); }
    size_t rank() const { return spd_->datum.rank; }

    Elt identity() const { return {IVec(rank(), 0), spd_->weyl->identity()}; }
    Elt gen(size_t i) const { return {spd_->gen_transl[i], spd_->gen_fin[i]}; }

    Elt mul(const Elt& a, const Elt& b) const
    {
        IVec t = a.transl;
        QVec by = to_qvec(b.transl);
        QVec img = spd_->weyl->act_y(a.fin, by);
        for (size_t i = 0; i < t.size(); ++i)
            t[i] += to_long(numerator(img[i]));
        return {t, spd_->weyl->mul(a.fin, b.fin)};
    }
    Elt gen_mul(size_t i, const Elt& x) const { return mul(gen(i), x); }
    Elt mul_gen(const Elt& x, size_t i) const { return mul(x, gen(i)); }
    Elt inverse(const Elt& x) const
    {
        size_t wi = spd_->weyl->inverse(x.fin);
        QVec img = spd_->weyl->act_y(wi, to_qvec(x.transl));
        IVec t(x.transl.size());
        for (size_t i = 0; i < t.size(); ++i)
            t[i] = -to_long(numerator(img[i]));
        return {t, wi};
    }

    // image of the affine root (alpha, k) under x: (u alpha, k - (u alpha)(y))
    std::pair<QVec, Rat> act_affine_root(const Elt& x, const QVec& alpha, const Rat& k) const
    {
        QVec ua = spd_->weyl->act_x(x.fin, alpha);
        Rat val(0);
        for (size_t i = 0; i < ua.size(); ++i)
            val += ua[i] * x.transl[i];
        return {ua, k - val};
    }

    bool affine_root_negative(const QVec& alpha, const Rat& k) const
    {
        if (k != 0)
            return k < 0;
        auto idx = spd_->datum.root_index(alpha);
        if (!idx)
            throw Error(Errc::UnknownRoot, "affine gradient not a root");
        return !pos_root_[*idx];
    }

    bool left_descent(size_t i, const Elt& x) const
    {
        Elt xi = inverse(x);
        auto [a, k] = act_affine_root(xi, spd_->gen_alpha[i], spd_->gen_k[i]);
        return affine_root_negative(a, k);
    }
    bool right_descent(const Elt& x, size_t i) const
    {
        auto [a, k] = act_affine_root(x, spd_->gen_alpha[i], spd_->gen_k[i]);
        return affine_root_negative(a, k);
    }

    std::vector<size_t> word(const Elt& x) const
    {
        for (long c : x.transl)
            if (c > kTranslationCap || c < -kTranslationCap)
                throw Error(Errc::Budget, "translation coordinates exceed the cap");
        std::vector<size_t> out;
        Elt cur = x;
        Elt id = identity();
        size_t guard = 0;
        while (!(cur == id)) {
            bool found = false;
            for (size_t i = 0; i < num_gens(); ++i) {
                if (left_descent(i, cur)) {
                    out.push_back(i);
                    cur = gen_mul(i, cur);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw Error(Errc::NotInGroup, "element admits no descent");
            if (++guard > 100000)
                throw Error(Errc::Budget, "descent walk runaway");
        }
        return out;
    }
    size_t length(const Elt& x) const { return word(x).size(); }

    size_t braid_order(size_t i, size_t j) const
    {
        Elt x = mul(gen(i), gen(j));
        Elt cur = x;
        Elt id = identity();
        size_t m = 1;
        while (!(cur == id)) {
            cur = mul(x, cur);
            ++m;
            if (m > 64)
                return 0; // infinite order
        }
        return m;
    }

    std::string elt_name(const Elt& x) const
    {
        auto wd = word(x);
        if (wd.empty())
            return "e";
        std::string s;
        for (size_t i = 0; i < wd.size(); ++i) {
            if (i)
                s += ".";
            s += "s" + std::to_string(wd[i]);
        }
        return s;
    }

private:
    std::shared_ptr<SpecialPointData> spd_;
    std::vector<bool> pos_root_;
};

// Parameter function s -> q_s; values are monomial powers of q, constant on
// conjugacy classes of simple reflections.
struct ParameterFunction {
    std::vector<Scalar> values;
};

// Iwahori-Hecke algebra over a Coxeter context: basis {T_w}, quadratic
// relation (T_s + 1)(T_s - q_s) = 0 and braid relations.
template <typename Ctx>
class HeckeAlgebra {
public:
    using Elt = typename Ctx::Elt;
    using Element = std::map<Elt, Scalar>;

    HeckeAlgebra(Ctx ctx, ParameterFunction q) : ctx_(std::move(ctx)), q_(std::move(q))
    {
        if (q_.values.size() != ctx_.num_gens())
            throw Error(Errc::BadParameters, "parameter count does not match generators");
        for (const auto& v : q_.values) {
            if (!v.is_monomial() || v.lead_coeff() != 1)
                throw Error(Errc::BadParameters, "parameter not a monomial power of q: " + v.to_string());
            long e = v.exponent();
            if (e < 0 || e % 2 != 0)
                throw Error(Errc::BadParameters, "parameter exponent must be a nonnegative power of q");
        }
        // conjugation-invariance: generators joined by an odd braid order are
        // conjugate and must carry equal parameters
        for (size_t i = 0; i < ctx_.num_gens(); ++i)
            for (size_t j = i + 1; j < ctx_.num_gens(); ++j) {
                size_t m = ctx_.braid_order(i, j);
                if (m != 0 && m % 2 == 1 && !(q_.values[i] == q_.values[j]))
                    throw Error(Errc::BadParameters,
                                "conjugate generators s" + std::to_string(i) + ", s" + std::to_string(j) +
                                    " carry different parameters");
            }
        // propagate along odd paths
        std::vector<size_t> cls(ctx_.num_gens());
        std::iota(cls.begin(), cls.end(), size_t{0});
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < ctx_.num_gens(); ++i)
                for (size_t j = i + 1; j < ctx_.num_gens(); ++j) {
                    size_t m = ctx_.braid_order(i, j);
                    if (m != 0 && m % 2 == 1 && cls[i] != cls[j]) {
                        size_t lo = std::min(cls[i], cls[j]), hi = std::max(cls[i], cls[j]);
                        for (auto& c : cls)
                            if (c == hi)
                                c = lo;
                        changed = true;
                    }
                }
        }
        for (size_t i = 0; i < ctx_.num_gens(); ++i)
            for (size_t j = i + 1; j < ctx_.num_gens(); ++j)
                if (cls[i] == cls[j] && !(q_.values[i] == q_.values[j]))
                    throw Error(Errc::BadParameters,
                                "conjugate generators s" + std::to_string(i) + ", s" + std::to_string(j) +
                                    " carry different parameters");
    }

    const Ctx& ctx() const { return ctx_; }
    const Scalar& q(size_t i) const { return q_.values[i]; }

    Element zero() const { return {}; }
    Element one() const { return basis(ctx_.identity()); }
    Element basis(const Elt& w, const Scalar& c = Scalar(1)) const
    {
        Element e;
        if (!c.is_zero())
            e[w] = c;
        return e;
    }
    Element gen(size_t i) const { return basis(ctx_.gen(i)); }

    static void add_term(Element& e, const Elt& w, const Scalar& c)
    {
        if (c.is_zero())
            return;
        auto it = e.find(w);
        if (it == e.end()) {
            e[w] = c;
        } else {
            it->second += c;
            if (it->second.is_zero())
                e.erase(it);
        }
    }
    static Element add(const Element& a, const Element& b)
    {
        Element r = a;
        for (const auto& [w, c] : b)
            add_term(r, w, c);
        return r;
    }
    static Element sub(const Element& a, const Element& b)
    {
        Element r = a;
        for (const auto& [w, c] : b)
            add_term(r, w, -c);
        return r;
    }
    static Element scalar_mul(const Scalar& c, const Element& a)
    {
        Element r;
        for (const auto& [w, x] : a)
            add_term(r, w, c * x);
        return r;
    }

    // T_s * T_w
    Element gen_mul(size_t i, const Element& x) const
    {
        Element r;
        for (const auto& [w, c] : x) {
            Elt sw = ctx_.gen_mul(i, w);
            if (!ctx_.left_descent(i, w)) {
                add_term(r, sw, c);
            } else {
                add_term(r, w, c * (q(i) - Scalar(1)));
                add_term(r, sw, c * q(i));
            }
        }
        return r;
    }
    // T_w * T_s
    Element mul_gen(const Element& x, size_t i) const
    {
        Element r;
        for (const auto& [w, c] : x) {
            Elt ws = ctx_.mul_gen(w, i);
            if (!ctx_.right_descent(w, i)) {
                add_term(r, ws, c);
            } else {
                add_term(r, w, c * (q(i) - Scalar(1)));
                add_term(r, ws, c * q(i));
            }
        }
        return r;
    }

    Element mul(const Element& a, const Element& b) const
    {
        Element r;
        for (const auto& [w, c] : a) {
            Element t = b;
            auto word = ctx_.word(w);
            for (auto it = word.rbegin(); it != word.rend(); ++it)
                t = gen_mul(*it, t);
            for (const auto& [u, d] : t)
                add_term(r, u, c * d);
        }
        return r;
    }

    // T_s^{-1} = (T_s - (q_s - 1)) / q_s
    Element gen_inverse(size_t i) const
    {
        Scalar qi = q(i).inverse();
        Element r = basis(ctx_.gen(i), qi);
        add_term(r, ctx_.identity(), qi * (Scalar(1) - q(i)));
        return r;
    }

    // (T_{s_{i1}}...T_{s_{ir}})^{-1} = T_{s_{ir}}^{-1}...T_{s_{i1}}^{-1}
    Element basis_inverse(const Elt& w) const
    {
        Element r = one();
        auto word = ctx_.word(w);
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            r = mul(r, gen_inverse(*it));
        return r;
    }

    // q_w for the reduced word of w
    Scalar q_of(const Elt& w) const
    {
        Scalar r(1);
        for (size_t i : ctx_.word(w))
            r *= q(i);
        return r;
    }

    std::string render(const Element& x) const
    {
        if (x.empty())
            return "0";
        // order: length descending, then word lexicographic
        std::vector<std::pair<Elt, Scalar>> terms(x.begin(), x.end());
        std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
            size_t la = ctx_.length(a.first), lb = ctx_.length(b.first);
            if (la != lb)
                return la > lb;
            return ctx_.word(a.first) < ctx_.word(b.first);
        });
        std::string out;
        for (size_t i = 0; i < terms.size(); ++i) {
            if (i)
                out += " + ";
            const Scalar& c = terms[i].second;
            std::string coeff = c.to_string_q();
            if (c.is_one())
                coeff.clear();
            else if (c.terms().size() > 1)
                coeff = "(" + coeff + ")";
            out += coeff.empty() ? "" : coeff + "*";
            out += "T[" + ctx_.elt_name(terms[i].first) + "]";
        }
        return out;
    }

private:
    Ctx ctx_;
    ParameterFunction q_;
};

using FiniteHecke = HeckeAlgebra<FiniteCoxeter>;
using AffineIwahoriHecke = HeckeAlgebra<AffineCoxeter>;

} // namespace heckelab
