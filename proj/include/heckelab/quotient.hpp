#pragma once

#include "heckelab/affine.hpp"
#include "heckelab/bernstein.hpp"
#include "heckelab/scalar.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace heckelab {

// Enumeration of the finite parabolic subgroup generated by the reflections
// of K, as ambient transformations.  Finite iff DK is linearly independent.
inline std::vector<AffineMap> parabolic_subgroup(const AffineRootSystem& sys, const std::vector<AffineRoot>& k,
                                                 size_t budget = 2000)
{
    QMat dk;
    for (const auto& b : k)
        dk.push_back(b.grad);
    if (rank(dk) != k.size())
        throw Error(Errc::InfiniteParabolic, "gradients of K are dependent");

    std::vector<AffineMap> gens;
    for (const auto& b : k)
        gens.push_back(sys.reflection(b));
    std::set<AffineMap> seen;
    std::vector<AffineMap> out{AffineMap::identity(sys.dim())};
    seen.insert(out[0]);
    for (size_t head = 0; head < out.size(); ++head) {
        AffineMap cur = out[head];
        for (const auto& g : gens) {
            AffineMap next = g.compose(cur);
            if (seen.insert(next).second) {
                out.push_back(next);
                if (out.size() > budget)
                    throw Error(Errc::Budget, "parabolic subgroup exceeds budget");
            }
        }
    }
    return out;
}

// Longest element of W_K: the unique element mapping K to -K setwise.
inline AffineMap longest_in_parabolic(const AffineRootSystem& sys, const std::vector<AffineRoot>& k)
{
    if (k.empty())
        return AffineMap::identity(sys.dim());
    auto group = parabolic_subgroup(sys, k);
    for (const auto& w : group) {
        bool ok = true;
        for (const auto& b : k) {
            AffineRoot img = w.act(b);
            bool neg = false;
            for (const auto& c : k)
                if (img == -c)
                    neg = true;
            if (!neg) {
                ok = false;
                break;
            }
        }
        if (ok)
            return w;
    }
    throw Error(Errc::InfiniteParabolic, "no element maps K onto -K");
}

// v[a, J] = u t with u the longest element of W_{J u {a}} and t the longest
// element of W_J.
inline AffineMap v_element(const AffineRootSystem& sys, const std::vector<AffineRoot>& j, const AffineRoot& a)
{
    std::vector<AffineRoot> k = j;
    k.push_back(a);
    {
        QMat dk;
        for (const auto& b : k)
            dk.push_back(b.grad);
        if (rank(dk) != k.size())
            throw Error(Errc::NotExtendable, "gradients of J u {a} are dependent");
    }
    auto ext = extend_to_basis(sys, k);
    if (!ext.extended())
        throw Error(Errc::NotExtendable, "J u {a} is not contained in any basis");
    AffineMap u = longest_in_parabolic(sys, k);
    AffineMap t = longest_in_parabolic(sys, j);
    return u.compose(t);
}

inline bool fixes_setwise(const AffineMap& w, const std::vector<AffineRoot>& j)
{
    for (const auto& b : j) {
        AffineRoot img = w.act(b);
        bool found = false;
        for (const auto& c : j)
            if (img == c)
                found = true;
        if (!found)
            return false;
    }
    return true;
}

// A marked affine root with its parameter p_a and associate parameter p'_a.
struct MarkedRoot {
    AffineRoot root;
    Scalar p;
    Scalar p_star;
};

struct MarkedRoots {
    std::vector<AffineRoot> j;
    std::vector<MarkedRoot> gamma;
};

// Quotient chart: coordinates on A^J_Gamma realized inside the ambient
// space as origin + span(axes), with kernel = V^{J,Gamma}.
struct QuotientSystem {
    AffineRootSystem base;            // fitted quotient system in chart coordinates
    QVec origin;                      // point of A^J
    std::vector<QVec> axes;           // basis of (V^{J,Gamma})-perp inside V^J
    std::vector<QVec> kernel;         // basis of V^{J,Gamma}
    std::vector<AffineRoot> projections; // per marked root, in chart coordinates
    std::vector<bool> positive;       // per marked root: in ambient Phi+
    std::vector<AffineRoot> positives; // projections of Gamma+
    AffineBasis basis;                // B(J, Gamma) with chamber witness

    // chart coordinates of an ambient point of A^J
    QVec coords(const QVec& x) const
    {
        size_t n = origin.size();
        QMat m = qmat(n, axes.size() + kernel.size());
        for (size_t j = 0; j < axes.size(); ++j)
            for (size_t i = 0; i < n; ++i)
                m[i][j] = axes[j][i];
        for (size_t j = 0; j < kernel.size(); ++j)
            for (size_t i = 0; i < n; ++i)
                m[i][axes.size() + j] = kernel[j][i];
        auto sol = solve(m, sub(x, origin));
        if (!sol)
            throw Error(Errc::BadInput, "point not on A^J");
        return QVec(sol->begin(), sol->begin() + axes.size());
    }

    // projection of an ambient affine root constant on the kernel
    AffineRoot project(const AffineRoot& a) const
    {
        for (const auto& u : kernel)
            if (dot(a.grad, u) != 0)
                throw Error(Errc::BadInput, "root does not descend to the quotient");
        QVec g(axes.size());
        for (size_t i = 0; i < axes.size(); ++i)
            g[i] = dot(a.grad, axes[i]);
        return {g, a.at(origin)};
    }

    // induced affine map on chart coordinates; nullopt when A^J or the
    // kernel is not preserved
    std::optional<AffineMap> induced(const AffineMap& w, const std::vector<AffineRoot>& j) const
    {
        // must map A^J into itself
        auto on_aj = [&](const QVec& x) {
            for (const auto& b : j)
                if (b.at(x) != 0)
                    return false;
            return true;
        };
        QVec w0 = w.apply(origin);
        if (!on_aj(w0))
            return std::nullopt;
        // linear part must preserve V^J and V^{J,Gamma}
        for (const auto& u : kernel) {
            QVec img = mat_vec(w.lin, u);
            // img must lie in span(kernel)
            QMat m = qmat(origin.size(), kernel.size());
            for (size_t jj = 0; jj < kernel.size(); ++jj)
                for (size_t i = 0; i < origin.size(); ++i)
                    m[i][jj] = kernel[jj][i];
            if (!solve(m, img))
                return std::nullopt;
        }
        size_t r = axes.size();
        AffineMap out;
        out.lin = qmat(r, r);
        QVec c0 = coords(w0);
        for (size_t jj = 0; jj < r; ++jj) {
            QVec p = add(origin, axes[jj]);
            QVec wp = w.apply(p);
            if (!on_aj(wp))
                return std::nullopt;
            QVec cj = coords(wp);
            for (size_t i = 0; i < r; ++i)
                out.lin[i][jj] = cj[i] - c0[i];
        }
        out.tr = c0;
        return out;
    }
};

struct QuotientResult {
    QuotientSystem system;
    Report report;
};

namespace detail {

// Fit arithmetic families to a finite set of (gradient, offset) pairs.
inline std::vector<RootFamily> fit_families(const std::vector<AffineRoot>& roots)
{
    std::map<QVec, std::vector<Rat>> by_grad;
    for (const auto& r : roots)
        by_grad[r.grad].push_back(r.c);
    std::vector<RootFamily> out;
    for (auto& [g, offsets] : by_grad) {
        std::sort(offsets.begin(), offsets.end());
        offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
        if (offsets.size() < 2)
            throw Error(Errc::BadInput,
                        "cannot fit a family period from fewer than two offsets; enlarge the window");
        // gcd of the differences
        Rat period(0);
        auto rat_gcd = [](Rat a, Rat b) {
            // gcd on rationals: gcd(n1/d1, n2/d2) = gcd(n1 d2, n2 d1)/(d1 d2)
            Int n1 = numerator(a), d1 = denominator(a);
            Int n2 = numerator(b), d2 = denominator(b);
            Int num = gcd(n1 * d2, n2 * d1);
            return Rat(num, d1 * d2);
        };
        for (size_t i = 1; i < offsets.size(); ++i) {
            Rat d = offsets[i] - offsets[i - 1];
            period = period == 0 ? d : rat_gcd(period, d);
        }
        // group by residue class mod the fitted period
        std::map<Rat, bool> residues;
        for (const auto& o : offsets) {
            Rat r = o - period * AffineRootSystem::floor_div(o, period);
            residues[r] = true;
        }
        for (const auto& [r, _] : residues)
            out.push_back({g, r, period});
    }
    return out;
}

// Search the alcoves of the fitted system for a chamber whose window
// positives match the projected positive set.
inline std::optional<AffineBasis> matching_chamber(const AffineRootSystem& fitted,
                                                   const std::vector<AffineRoot>& positives, const Rat& bound)
{
    std::set<AffineRoot> pos_set(positives.begin(), positives.end());
    Rat window(0);
    for (const auto& p : positives) {
        Rat a = p.c < 0 ? -p.c : p.c;
        if (a > window)
            window = a;
    }
    for (const auto& basis : enumerate_alcoves(fitted, bound)) {
        bool match = true;
        for (const auto& a : fitted.window_roots(window)) {
            bool val_pos = a.at(basis.witness) > 0;
            bool in_pos = pos_set.count(a) > 0;
            bool in_neg = pos_set.count(-a) > 0;
            if (in_pos && !val_pos)
                match = false;
            if (in_neg && val_pos)
                match = false;
            if (!match)
                break;
        }
        if (match)
            return basis;
    }
    return std::nullopt;
}

} // namespace detail

inline QuotientResult build_quotient(const AffineRootSystem& sys, const AffineBasis& ambient_basis,
                                     const MarkedRoots& marked, long window = 3)
{
    Report rep;
    rep.suite = "quotient";
    size_t n = sys.dim();

    // J must consist of basis elements
    bool j_ok = true;
    for (const auto& b : marked.j) {
        bool found = false;
        for (const auto& a : ambient_basis.roots)
            if (a == b)
                found = true;
        if (!found)
            j_ok = false;
    }
    rep.add("J-subset-of-basis", j_ok, "J contains a root outside the supplied basis");

    // marked roots: members of the system, outside span(J), p monomials > 1
    QMat span_j;
    for (const auto& b : marked.j) {
        QVec row = b.grad;
        row.push_back(b.c);
        span_j.push_back(row);
    }
    bool members_ok = true;
    std::string member_witness;
    for (const auto& m : marked.gamma) {
        if (!sys.contains(m.root)) {
            members_ok = false;
            member_witness = m.root.to_string() + " not in the system";
            break;
        }
        QMat ext = span_j;
        QVec row = m.root.grad;
        row.push_back(m.root.c);
        ext.push_back(row);
        if (rank(ext) != span_j.size() + 1) {
            members_ok = false;
            member_witness = m.root.to_string() + " lies in the span of J";
            break;
        }
        try {
            hecke_exponent(m.p);
            hecke_exponent(m.p_star);
        } catch (const Error&) {
            members_ok = false;
            member_witness = "parameter of " + m.root.to_string() + " is not q^m with m >= 1";
            break;
        }
    }
    rep.add("marked-roots-valid", members_ok, member_witness);

    // extendability and the fixes-J necessary condition for membership
    bool ext_ok = true, fix_ok = true;
    std::string ext_witness, fix_witness;
    std::vector<AffineMap> v_maps;
    for (const auto& m : marked.gamma) {
        try {
            std::vector<AffineRoot> k = marked.j;
            k.push_back(m.root);
            auto ext = extend_to_basis(sys, k);
            if (!ext.extended()) {
                ext_ok = false;
                ext_witness = m.root.to_string();
            }
            AffineMap v = v_element(sys, marked.j, m.root);
            v_maps.push_back(v);
            if (!fixes_setwise(v, marked.j)) {
                fix_ok = false;
                fix_witness = "v[" + m.root.to_string() + ", J] moves J";
            }
        } catch (const Error& e) {
            ext_ok = false;
            ext_witness = m.root.to_string() + ": " + e.what();
            v_maps.push_back(AffineMap::identity(n));
        }
    }
    rep.add("marked-extendable", ext_ok, ext_witness);
    rep.add("v-fixes-J", fix_ok, fix_witness);

    // chart
    QuotientSystem qs;
    qs.origin = detail::zero_point(marked.j, n);
    QMat dj, dgamma;
    for (const auto& b : marked.j)
        dj.push_back(b.grad);
    for (const auto& m : marked.gamma)
        dgamma.push_back(m.root.grad);
    std::vector<QVec> vj = marked.j.empty() ? [&] {
        std::vector<QVec> id;
        for (size_t i = 0; i < n; ++i) {
            QVec e(n, Rat(0));
            e[i] = 1;
            id.push_back(e);
        }
        return id;
    }()
                                            : kernel_basis(dj);
    // V^{J,Gamma} = V^J cap V^Gamma
    QMat stacked = dj;
    for (const auto& row : dgamma)
        stacked.push_back(row);
    std::vector<QVec> vjg = stacked.empty() ? vj : kernel_basis(stacked);
    qs.kernel = vjg;
    // axes: orthogonal complement of V^{J,Gamma} inside V^J
    {
        QMat constraints;
        for (const auto& u : vjg)
            constraints.push_back(mat_vec(sys.inner(), u));
        // solve within span(vj): coefficients c with constraints . (vj c) = 0
        QMat m = qmat(constraints.size(), vj.size());
        for (size_t r = 0; r < constraints.size(); ++r)
            for (size_t c = 0; c < vj.size(); ++c)
                m[r][c] = dot(constraints[r], vj[c]);
        std::vector<QVec> coeffs = m.empty() ? [&] {
            std::vector<QVec> id;
            for (size_t i = 0; i < vj.size(); ++i) {
                QVec e(vj.size(), Rat(0));
                e[i] = 1;
                id.push_back(e);
            }
            return id;
        }()
                                             : kernel_basis(m);
        for (const auto& c : coeffs) {
            QVec v(n, Rat(0));
            for (size_t i = 0; i < vj.size(); ++i)
                v = add(v, scale(c[i], vj[i]));
            if (!is_zero_vec(v))
                qs.axes.push_back(v);
        }
    }

    // transported inner product on the chart
    QMat inner_q = qmat(qs.axes.size(), qs.axes.size());
    for (size_t i = 0; i < qs.axes.size(); ++i)
        for (size_t j2 = 0; j2 < qs.axes.size(); ++j2)
            inner_q[i][j2] = dot(qs.axes[i], mat_vec(sys.inner(), qs.axes[j2]));

    // projections
    bool proj_ok = true;
    std::string proj_witness;
    for (const auto& m : marked.gamma) {
        try {
            qs.projections.push_back(qs.project(m.root));
        } catch (const Error& e) {
            proj_ok = false;
            proj_witness = e.what();
            qs.projections.push_back({QVec(qs.axes.size(), Rat(0)), Rat(0)});
        }
        bool pos = m.root.at(ambient_basis.witness) > 0;
        qs.positive.push_back(pos);
        if (pos)
            qs.positives.push_back(qs.projections.back());
    }
    rep.add("projections-descend", proj_ok, proj_witness);

    // (i) reducedness of the projected set
    {
        bool reduced = true;
        std::string witness;
        for (size_t i = 0; i < qs.projections.size() && reduced; ++i)
            for (size_t j2 = 0; j2 < qs.projections.size() && reduced; ++j2) {
                if (i == j2)
                    continue;
                const auto& a = qs.projections[i];
                const auto& b = qs.projections[j2];
                // a = lambda b with lambda not +-1?
                // compare as projective pairs on (grad, c)
                QVec va = a.grad;
                va.push_back(a.c);
                QVec vb = b.grad;
                vb.push_back(b.c);
                Rat lambda(0);
                bool proportional = true;
                for (size_t t = 0; t < va.size(); ++t) {
                    if (vb[t] == 0) {
                        if (va[t] != 0)
                            proportional = false;
                        continue;
                    }
                    Rat l = va[t] / vb[t];
                    if (lambda == 0)
                        lambda = l;
                    else if (l != lambda)
                        proportional = false;
                }
                if (proportional && lambda != 0 && lambda != 1 && lambda != -1) {
                    reduced = false;
                    witness = marked.gamma[i].root.to_string() + " = " + rat_to_string(lambda) + " * " +
                              marked.gamma[j2].root.to_string() + " after projection";
                }
            }
        rep.add("reduced", reduced, witness);
    }

    // (ii) injectivity on Gamma+
    {
        bool injective = true;
        std::string witness;
        for (size_t i = 0; i < qs.projections.size() && injective; ++i)
            for (size_t j2 = i + 1; j2 < qs.projections.size() && injective; ++j2) {
                if (!qs.positive[i] || !qs.positive[j2])
                    continue;
                if (qs.projections[i] == qs.projections[j2] &&
                    !(marked.gamma[i].root == marked.gamma[j2].root)) {
                    injective = false;
                    witness = marked.gamma[i].root.to_string() + " and " + marked.gamma[j2].root.to_string() +
                              " collide";
                }
            }
        rep.add("positive-projection-injective", injective, witness);
    }

    // fitted quotient system + (iii) axioms
    bool fitted_ok = true;
    try {
        auto fams = detail::fit_families(qs.projections);
        qs.base = AffineRootSystem(qs.axes.size(), fams, inner_q);
        Report axioms = verify_affine_system(qs.base, window);
        for (auto& c : axioms.checks)
            rep.add("quotient-" + c.name, c.pass, c.witness);
        fitted_ok = axioms.all_pass();
    } catch (const Error& e) {
        rep.add("quotient-family-fit", false, e.what());
        fitted_ok = false;
    }

    // basis of the positive system
    if (fitted_ok) {
        auto basis = detail::matching_chamber(qs.base, qs.positives, Rat(window + 1));
        if (basis) {
            qs.basis = *basis;
            rep.add("positive-system-chamber", true);
        } else {
            rep.add("positive-system-chamber", false, "no chamber induces the projected positive set");
        }
    }

    // (iv) induced action of v[a, J] coincides with the projected reflection
    {
        bool act_ok = true;
        std::string witness;
        for (size_t i = 0; i < marked.gamma.size() && fitted_ok; ++i) {
            auto ind = qs.induced(v_maps[i], marked.j);
            if (!ind) {
                act_ok = false;
                witness = "v[" + marked.gamma[i].root.to_string() + ", J] does not descend";
                break;
            }
            AffineMap refl = qs.base.reflection(qs.projections[i]);
            if (!(*ind == refl)) {
                act_ok = false;
                witness = "v[" + marked.gamma[i].root.to_string() + ", J] is not s_{a + A'_J}";
                break;
            }
        }
        rep.add("v-action-is-projected-reflection", act_ok, witness);
    }

    // (v) p constant on orbits of the group generated by the v-elements;
    // p* matches the parameter of the associate root k - a' when present
    {
        bool const_ok = true;
        std::string witness;
        auto find_marked = [&](const AffineRoot& ambient) -> long {
            for (size_t t = 0; t < marked.gamma.size(); ++t)
                if (marked.gamma[t].root == ambient)
                    return static_cast<long>(t);
            return -1;
        };
        for (size_t i = 0; i < marked.gamma.size() && const_ok; ++i) {
            for (const auto& v : v_maps) {
                AffineRoot img = v.act(marked.gamma[i].root);
                long t = find_marked(img);
                if (t >= 0 && !(marked.gamma[static_cast<size_t>(t)].p == marked.gamma[i].p)) {
                    const_ok = false;
                    witness = "p not constant on the orbit of " + marked.gamma[i].root.to_string();
                    break;
                }
            }
        }
        rep.add("p-orbit-constant", const_ok, witness);

        bool assoc_ok = true;
        std::string assoc_witness;
        if (fitted_ok) {
            for (size_t i = 0; i < marked.gamma.size(); ++i) {
                if (!qs.positive[i])
                    continue;
                AffineRoot aprime = qs.projections[i];
                Rat k = qs.base.period_of(aprime);
                AffineRoot partner = -aprime + k; // k_{a'} - a'
                for (size_t t = 0; t < marked.gamma.size(); ++t) {
                    if (!qs.positive[t])
                        continue;
                    if (qs.projections[t] == partner &&
                        !(marked.gamma[t].p == marked.gamma[i].p_star)) {
                        assoc_ok = false;
                        assoc_witness = "p* of " + marked.gamma[i].root.to_string() +
                                        " differs from p of its associate";
                    }
                }
            }
        }
        rep.add("p-star-matches-associate", assoc_ok, assoc_witness);
    }

    return {std::move(qs), std::move(rep)};
}

// The induced based root datum with labels at a special point of the
// quotient system.
struct InducedDatum {
    SpecialPointData spd;
    LabelFunctions labels;
    // marked index realizing each simple (the r-map fibers)
    std::vector<size_t> marked_for_simple;
};

inline InducedDatum induced_datum(const QuotientSystem& qs, const MarkedRoots& marked, const QVec& e)
{
    SpecialPointData spd = special_point_data(qs.base, qs.basis, e);
    InducedDatum out{std::move(spd), {}, {}};
    size_t rank = out.spd.datum.basis.size();
    out.labels.lambda.resize(rank);
    out.labels.lambda_star.resize(rank);
    out.marked_for_simple.resize(rank);
    for (size_t j = 0; j < rank; ++j) {
        const AffineRoot& bprime = out.spd.basis.roots[out.spd.basis_at_e[j]];
        long found = -1;
        for (size_t i = 0; i < marked.gamma.size(); ++i)
            if (qs.positive[i] && qs.projections[i] == bprime)
                found = static_cast<long>(i);
        if (found < 0)
            throw Error(Errc::BadInput, "no marked root projects onto the simple root " + bprime.to_string());
        out.marked_for_simple[j] = static_cast<size_t>(found);
        out.labels.lambda[j] = hecke_exponent(marked.gamma[static_cast<size_t>(found)].p);
        out.labels.lambda_star[j] = hecke_exponent(marked.gamma[static_cast<size_t>(found)].p_star);
    }
    return out;
}

// Translation vector of an ambient transformation acting on the quotient as
// a pure translation, expressed in chart coordinates and verified to lie in
// the coroot lattice of the quotient system.
inline QVec translation_vector(const QuotientSystem& qs, const std::vector<AffineRoot>& j, const AffineMap& t)
{
    auto ind = qs.induced(t, j);
    if (!ind)
        throw Error(Errc::NotTranslation, "transformation does not descend to the quotient");
    size_t r = qs.axes.size();
    for (size_t i = 0; i < r; ++i)
        for (size_t j2 = 0; j2 < r; ++j2)
            if (ind->lin[i][j2] != Rat(i == j2 ? 1 : 0))
                throw Error(Errc::NotTranslation, "induced action has a nontrivial linear part");
    // verify membership in Z R~ of the fitted system
    std::vector<QVec> coroots;
    for (const auto& f : qs.base.families()) {
        AffineRoot rep = f.member(0);
        Rat k = qs.base.period_of(rep);
        coroots.push_back(scale(k, qs.base.grad_coroot(rep.grad)));
    }
    if (!lattice_member(coroots, ind->tr))
        throw Error(Errc::BadInput, "translation vector outside the coroot lattice");
    return ind->tr;
}

} // namespace heckelab
