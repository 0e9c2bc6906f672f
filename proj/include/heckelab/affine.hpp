#pragma once

#include "heckelab/linalg.hpp"
#include "heckelab/report.hpp"
#include "heckelab/rootdatum.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace heckelab {

// Affine-linear function x -> grad.x + c on the ambient space.
struct AffineRoot {
    QVec grad;
    Rat c;

    Rat at(const QVec& x) const { return dot(grad, x) + c; }

    friend bool operator==(const AffineRoot& a, const AffineRoot& b) { return a.grad == b.grad && a.c == b.c; }
    friend bool operator!=(const AffineRoot& a, const AffineRoot& b) { return !(a == b); }
    friend bool operator<(const AffineRoot& a, const AffineRoot& b)
    {
        if (a.grad != b.grad)
            return a.grad < b.grad;
        return a.c < b.c;
    }
    AffineRoot operator+(const Rat& l) const { return {grad, c + l}; }
    AffineRoot operator-() const
    {
        AffineRoot r;
        r.grad = scale(Rat(-1), grad);
        r.c = -c;
        return r;
    }
    std::string to_string() const { return qvec_to_string(grad) + " + " + rat_to_string(c); }
};

inline AffineRoot root_sub(const AffineRoot& a, const AffineRoot& b) { return {sub(a.grad, b.grad), a.c - b.c}; }

// One arithmetic family {grad.x + offset + period*m : m in Z}.
struct RootFamily {
    QVec grad;
    Rat offset;
    Rat period;

    AffineRoot member(long m) const { return {grad, offset + period * m}; }
};

// Invertible affine transformation x -> lin.x + tr of the ambient space.
struct AffineMap {
    QMat lin;
    QVec tr;

    static AffineMap identity(size_t n) { return {qidentity(n), QVec(n, Rat(0))}; }

    QVec apply(const QVec& x) const { return add(mat_vec(lin, x), tr); }
    AffineMap compose(const AffineMap& inner) const // this o inner
    {
        return {mat_mul(lin, inner.lin), add(mat_vec(lin, inner.tr), tr)};
    }
    AffineMap inverse() const
    {
        QMat li = invert(lin);
        return {li, scale(Rat(-1), mat_vec(li, tr))};
    }
    // Action on affine functions: (w f)(x) = f(w^{-1} x).
    AffineRoot act(const AffineRoot& f) const
    {
        AffineMap inv = inverse();
        QVec g(f.grad.size(), Rat(0));
        for (size_t j = 0; j < f.grad.size(); ++j)
            for (size_t i = 0; i < f.grad.size(); ++i)
                g[j] += f.grad[i] * inv.lin[i][j];
        return {g, f.c + dot(f.grad, inv.tr)};
    }
    bool is_identity() const
    {
        for (size_t i = 0; i < lin.size(); ++i) {
            for (size_t j = 0; j < lin.size(); ++j)
                if (lin[i][j] != Rat(i == j ? 1 : 0))
                    return false;
            if (tr[i] != 0)
                return false;
        }
        return true;
    }
    friend bool operator==(const AffineMap& a, const AffineMap& b) { return a.lin == b.lin && a.tr == b.tr; }
    friend bool operator<(const AffineMap& a, const AffineMap& b)
    {
        if (a.lin != b.lin)
            return a.lin < b.lin;
        return a.tr < b.tr;
    }
};

struct AffineBasis {
    std::vector<AffineRoot> roots;
    QVec witness; // a(witness) > 0 for every basis root
};

// Affine root system presented by finitely many root families, with a
// W0-invariant inner product on the translation space (identity unless
// supplied).
class AffineRootSystem {
public:
    AffineRootSystem() = default;
    AffineRootSystem(size_t dim, std::vector<RootFamily> families, QMat inner = {})
        : dim_(dim), inner_(inner.empty() ? qidentity(dim) : std::move(inner))
    {
        inner_inv_ = invert(inner_);
        for (auto& f : families)
            add_family(f);
    }

    size_t dim() const { return dim_; }
    const std::vector<RootFamily>& families() const { return families_; }
    const QMat& inner() const { return inner_; }

    void add_family(const RootFamily& f)
    {
        if (is_zero_vec(f.grad))
            throw Error(Errc::BadInput, "family with zero gradient");
        if (f.period <= 0)
            throw Error(Errc::BadInput, "family with non-positive period");
        RootFamily n = f;
        // canonical offset in [0, period)
        Rat m = floor_div(n.offset, n.period);
        n.offset -= m * n.period;
        for (auto& g : families_) {
            if (g.grad == n.grad && g.period == n.period && g.offset == n.offset)
                return; // duplicate
        }
        families_.push_back(n);
    }

    static Rat floor_div(const Rat& a, const Rat& b)
    {
        // floor(a/b) as a rational integer, b > 0
        Rat q = a / b;
        Int n = numerator(q), d = denominator(q);
        Int fl = n >= 0 ? n / d : -((-n + d - 1) / d);
        return Rat(fl);
    }

    bool contains(const AffineRoot& a) const
    {
        for (const auto& f : families_) {
            if (f.grad != a.grad)
                continue;
            Rat diff = a.c - f.offset;
            if (is_integral(diff / f.period))
                return true;
        }
        return false;
    }

    // metric dual of the gradient: vector v with (v, .) = grad
    QVec grad_dual(const QVec& grad) const { return mat_vec(inner_inv_, grad); }

    // coroot (Da)~ = 2 v / (v, v)
    QVec grad_coroot(const QVec& grad) const
    {
        QVec v = grad_dual(grad);
        Rat nrm = dot(grad, v);
        return scale(Rat(2) / nrm, v);
    }

    // s_a(b) = b - <Db, (Da)~> a
    AffineRoot reflect_root(const AffineRoot& a, const AffineRoot& b) const
    {
        Rat p = dot(b.grad, grad_coroot(a.grad));
        return {sub(b.grad, scale(p, a.grad)), b.c - p * a.c};
    }

    // s_a as a transformation: x -> x - a(x) (Da)~
    AffineMap reflection(const AffineRoot& a) const
    {
        QVec cr = grad_coroot(a.grad);
        AffineMap m = AffineMap::identity(dim_);
        for (size_t i = 0; i < dim_; ++i)
            for (size_t j = 0; j < dim_; ++j)
                m.lin[i][j] -= cr[i] * a.grad[j];
        m.tr = scale(-a.c, cr);
        return m;
    }

    // all roots with |c| <= window
    std::vector<AffineRoot> window_roots(const Rat& window) const
    {
        std::vector<AffineRoot> out;
        for (const auto& f : families_) {
            long mlo = to_long(numerator(floor_div(-window - f.offset, f.period)));
            for (long m = mlo; ; ++m) {
                Rat c = f.offset + f.period * m;
                if (c < -window)
                    continue;
                if (c > window)
                    break;
                out.push_back({f.grad, c});
            }
        }
        return out;
    }

    // minimal positive value of the family at x, with the realizing root
    std::pair<Rat, AffineRoot> min_positive_at(const RootFamily& f, const QVec& x) const
    {
        Rat v0 = dot(f.grad, x) + f.offset;
        Rat fl = floor_div(v0, f.period);
        Rat r = v0 - fl * f.period; // in [0, period)
        if (r == 0)
            return {f.period, {f.grad, f.offset - (fl - 1) * f.period}};
        return {r, {f.grad, f.offset - fl * f.period}};
    }

    // minimal |value| over the family at x, ignoring exact zeros
    Rat min_abs_nonzero_at(const RootFamily& f, const QVec& x) const
    {
        Rat v0 = dot(f.grad, x) + f.offset;
        Rat fl = floor_div(v0, f.period);
        Rat r = v0 - fl * f.period;
        if (r == 0)
            return f.period;
        Rat other = f.period - r;
        return r < other ? r : other;
    }

    bool family_vanishes_at(const RootFamily& f, const QVec& x) const
    {
        Rat v0 = dot(f.grad, x) + f.offset;
        return is_integral(v0 / f.period);
    }

    std::optional<AffineRoot> vanishing_root_at(const RootFamily& f, const QVec& x) const
    {
        Rat v0 = dot(f.grad, x) + f.offset;
        if (!is_integral(v0 / f.period))
            return std::nullopt;
        return AffineRoot{f.grad, f.offset - v0};
    }

    // smallest positive l with a + l in the system
    Rat period_of(const AffineRoot& a) const
    {
        std::optional<Rat> best;
        for (const auto& f : families_) {
            if (f.grad != a.grad)
                continue;
            // l = offset - c mod period, minimal positive
            Rat d = f.offset - a.c;
            Rat fl = floor_div(d, f.period);
            Rat r = d - fl * f.period;
            Rat cand = r == 0 ? f.period : r;
            if (!best || cand < *best)
                best = cand;
        }
        if (!best)
            throw Error(Errc::UnknownRoot, a.to_string());
        return *best;
    }

private:
    size_t dim_ = 0;
    std::vector<RootFamily> families_;
    QMat inner_;
    QMat inner_inv_;
};

// Finite verification of the affine-root-system axioms on a window of
// offsets.  Failures are data, not exceptions.
inline Report verify_affine_system(const AffineRootSystem& sys, long window)
{
    Report rep;
    rep.suite = "affine-system";
    if (window < 2)
        throw Error(Errc::BadInput, "window must be >= 2");
    auto roots = sys.window_roots(Rat(window));

    bool closure = true;
    std::string closure_witness;
    for (const auto& a : roots) {
        for (const auto& b : roots) {
            AffineRoot im = sys.reflect_root(a, b);
            if (!sys.contains(im)) {
                closure = false;
                closure_witness = "s_[" + a.to_string() + "](" + b.to_string() + ") missing";
                break;
            }
        }
        if (!closure)
            break;
    }
    rep.add("reflection-closure", closure, closure_witness);

    bool integral = true;
    std::string int_witness;
    for (const auto& a : roots) {
        for (const auto& b : roots) {
            Rat p = dot(b.grad, sys.grad_coroot(a.grad));
            if (!is_integral(p)) {
                integral = false;
                int_witness = "<D " + b.to_string() + ", (D " + a.to_string() + ")~> = " + rat_to_string(p);
                break;
            }
        }
        if (!integral)
            break;
    }
    rep.add("pairing-integrality", integral, int_witness);

    // gradients form a finite root system: closed under their reflections
    bool grad_ok = true;
    std::string grad_witness;
    std::set<QVec> grads;
    for (const auto& f : sys.families())
        grads.insert(f.grad);
    for (const auto& g : grads) {
        for (const auto& h : grads) {
            Rat p = dot(h, sys.grad_coroot(g));
            QVec img = sub(h, scale(p, g));
            if (!grads.count(img)) {
                grad_ok = false;
                grad_witness = "gradient reflection image missing: " + qvec_to_string(img);
                break;
            }
        }
        if (!grad_ok)
            break;
    }
    rep.add("gradient-root-system", grad_ok, grad_witness);

    // offsets of each root form period_of * Z exactly within the window
    bool lattice = true;
    std::string lat_witness;
    for (const auto& f : sys.families()) {
        AffineRoot rep_root = f.member(0);
        Rat k = sys.period_of(rep_root);
        for (long m = -window; m <= window && lattice; ++m) {
            Rat l = k * m;
            if (l > Rat(window) || l < Rat(-window))
                continue;
            if (!sys.contains(rep_root + l)) {
                lattice = false;
                lat_witness = rep_root.to_string() + " + " + rat_to_string(l) + " missing";
            }
        }
        // any member within window must be on the k-lattice
        for (const auto& g : sys.families()) {
            if (g.grad != f.grad)
                continue;
            Rat d = g.offset - f.offset;
            if (!is_integral(d / k)) {
                lattice = false;
                lat_witness = "offset " + rat_to_string(g.offset) + " of gradient " + qvec_to_string(f.grad) +
                              " off the " + rat_to_string(k) + "-lattice";
            }
        }
        if (!lattice)
            break;
    }
    rep.add("period-lattice", lattice, lat_witness);
    return rep;
}

namespace detail {

// Is f a nonempty sum of roots positive at x?  Exact recursion on values;
// memoized per call site.
struct PositiveSumOracle {
    const AffineRootSystem& sys;
    const QVec& x;
    std::map<std::pair<QVec, Rat>, bool> memo;

    bool expressible(const AffineRoot& f, const Rat& value)
    {
        if (value <= 0)
            return false;
        auto key = std::make_pair(f.grad, f.c);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        memo[key] = false; // cycle guard; values strictly decrease anyway
        bool ok = false;
        if (sys.contains(f))
            ok = true;
        if (!ok) {
            for (const auto& fam : sys.families()) {
                // candidates c in the family with 0 < c(x) < value
                auto [v, root] = sys.min_positive_at(fam, x);
                while (v < value) {
                    AffineRoot rest = root_sub(f, root);
                    if (expressible(rest, value - v)) {
                        ok = true;
                        break;
                    }
                    v += fam.period;
                    root.c += fam.period;
                }
                if (ok)
                    break;
            }
        }
        memo[key] = ok;
        return ok;
    }
};

} // namespace detail

// Walls of the chamber containing x, oriented positive at x.  The basis of
// an affine root system equals the positive roots not expressible as a sum
// of two or more positive roots; only the family-minimal roots at x can be
// walls.
inline AffineBasis basis_from_point(const AffineRootSystem& sys, const QVec& x)
{
    for (const auto& f : sys.families())
        if (sys.family_vanishes_at(f, x))
            throw Error(Errc::OnWall, "point lies on the wall of " + f.member(0).to_string());

    detail::PositiveSumOracle oracle{sys, x, {}};
    std::vector<AffineRoot> walls;
    for (const auto& f : sys.families()) {
        auto [value, cand] = sys.min_positive_at(f, x);
        // decomposable: cand = c + (sum of positives) for some root c
        bool decomposable = false;
        for (const auto& g : sys.families()) {
            auto [v, c] = sys.min_positive_at(g, x);
            while (v < value && !decomposable) {
                if (!(c == cand) && oracle.expressible(root_sub(cand, c), value - v))
                    decomposable = true;
                v += g.period;
                c.c += g.period;
            }
            if (decomposable)
                break;
        }
        if (!decomposable)
            walls.push_back(cand);
    }
    std::sort(walls.begin(), walls.end());
    return {walls, x};
}

// Full validation of a candidate basis against the window: affine-linear
// independence, witness positivity, one-signed integral decomposition of
// every window root.
inline Report validate_basis(const AffineRootSystem& sys, const AffineBasis& basis, long window)
{
    Report rep;
    rep.suite = "affine-basis";
    size_t n = sys.dim();

    QMat rows;
    for (const auto& b : basis.roots) {
        QVec row = b.grad;
        row.push_back(b.c);
        rows.push_back(row);
    }
    rep.add("independent", rank(rows) == basis.roots.size(), "basis affinely dependent");

    bool wit = true;
    for (const auto& b : basis.roots)
        if (b.at(basis.witness) <= 0)
            wit = false;
    rep.add("witness-positive", wit, "witness not interior");

    QMat m = qmat(n + 1, basis.roots.size());
    for (size_t j = 0; j < basis.roots.size(); ++j) {
        for (size_t i = 0; i < n; ++i)
            m[i][j] = basis.roots[j].grad[i];
        m[n][j] = basis.roots[j].c;
    }
    bool decomp = true;
    std::string witness;
    for (const auto& a : sys.window_roots(Rat(window))) {
        QVec rhs = a.grad;
        rhs.push_back(a.c);
        auto sol = solve(m, rhs);
        bool good = sol.has_value();
        if (good) {
            bool nonneg = true, nonpos = true;
            for (const auto& v : *sol) {
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
            decomp = false;
            witness = a.to_string() + " not a one-signed integral combination";
            break;
        }
    }
    rep.add("window-decomposition", decomp, witness);
    return rep;
}

// Subsystem of roots whose gradients lie in the span of DJ, kept in ambient
// coordinates.  Points of the quotient space are represented by ambient
// points; restricted roots are constant on each fiber.
inline AffineRootSystem restrict_to_j(const AffineRootSystem& sys, const std::vector<AffineRoot>& j)
{
    QMat dj;
    for (const auto& b : j)
        dj.push_back(b.grad);
    if (rank(dj) != j.size())
        throw Error(Errc::DependentGradients, "DJ linearly dependent");

    std::vector<RootFamily> kept;
    for (const auto& f : sys.families()) {
        QMat m = dj;
        m.push_back(f.grad);
        if (rank(m) == j.size())
            kept.push_back(f);
    }
    AffineRootSystem out(sys.dim(), kept, sys.inner());
    return out;
}

namespace detail {

// Any ambient solution of {b(x) = 0 : b in J}; restricted roots take the
// same value on every solution.
inline QVec zero_point(const std::vector<AffineRoot>& j, size_t dim)
{
    QMat m;
    QVec rhs;
    for (const auto& b : j) {
        m.push_back(b.grad);
        rhs.push_back(-b.c);
    }
    if (j.empty())
        return QVec(dim, Rat(0));
    auto sol = solve(m, rhs);
    if (!sol)
        throw Error(Errc::DependentGradients, "inconsistent wall equations");
    return *sol;
}

// Direction d with b(d) = 1 for all b in J (gradient pairing).
inline QVec unit_direction(const std::vector<AffineRoot>& j, size_t dim)
{
    QMat m;
    QVec rhs;
    for (const auto& b : j) {
        m.push_back(b.grad);
        rhs.push_back(Rat(1));
    }
    if (j.empty())
        return QVec(dim, Rat(0));
    auto sol = solve(m, rhs);
    if (!sol)
        throw Error(Errc::DependentGradients, "no common unit direction");
    return *sol;
}

// Perturbation size keeping the sign of every family value at x that is not
// exactly zero, when moving by eps*d.
inline Rat safe_epsilon(const AffineRootSystem& sys, const QVec& x, const QVec& d)
{
    Rat min_abs(0);
    Rat max_slope(1);
    for (const auto& f : sys.families()) {
        Rat slope = dot(f.grad, d);
        Rat av = slope < 0 ? -slope : slope;
        if (av > max_slope)
            max_slope = av;
        Rat m = sys.min_abs_nonzero_at(f, x);
        if (min_abs == 0 || m < min_abs)
            min_abs = m;
    }
    if (min_abs == 0)
        min_abs = 1;
    return min_abs / (2 * max_slope);
}

// Point of the affine subspace {b = 0 : b in J} avoiding every root
// hyperplane that does not contain the whole subspace.  Deterministic search
// over a fixed sequence of rational parameters.
inline QVec generic_zero_point(const AffineRootSystem& sys, const std::vector<AffineRoot>& j)
{
    QVec x0 = zero_point(j, sys.dim());
    QMat dj;
    for (const auto& b : j)
        dj.push_back(b.grad);
    std::vector<QVec> dirs = j.empty() ? [&] {
        std::vector<QVec> full;
        for (size_t i = 0; i < sys.dim(); ++i) {
            QVec e(sys.dim(), Rat(0));
            e[i] = 1;
            full.push_back(e);
        }
        return full;
    }()
                                       : kernel_basis(dj);
    if (dirs.empty())
        return x0; // subspace is a point

    static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
    for (long p : primes) {
        QVec x = x0;
        Rat t(1, p);
        Rat tp = t;
        for (const auto& dir : dirs) {
            x = add(x, scale(tp, dir));
            tp *= t;
        }
        bool ok = true;
        for (const auto& f : sys.families()) {
            bool constant = true;
            for (const auto& dir : dirs)
                if (dot(f.grad, dir) != 0)
                    constant = false;
            if (constant)
                continue; // either no zero on the subspace or contains it; both allowed
            if (sys.family_vanishes_at(f, x)) {
                ok = false;
                break;
            }
        }
        if (ok)
            return x;
    }
    throw Error(Errc::Budget, "no generic point found on subspace");
}

} // namespace detail

// Basis of the restricted system (Phi_aff)_J containing J, constructed from
// the interior perturbation of the common zero point of J.
inline AffineBasis basis_containing_j(const AffineRootSystem& sys, const AffineBasis& ambient_basis,
                                      const std::vector<AffineRoot>& j)
{
    for (const auto& b : j) {
        bool in_basis = false;
        for (const auto& a : ambient_basis.roots)
            if (a == b)
                in_basis = true;
        if (!in_basis)
            throw Error(Errc::BadInput, "J must be a subset of the basis");
    }
    AffineRootSystem res = restrict_to_j(sys, j);
    if (j.empty())
        return basis_from_point(res, detail::generic_zero_point(res, {}));
    QVec x = detail::zero_point(j, sys.dim());
    QVec d = detail::unit_direction(j, sys.dim());
    Rat eps = detail::safe_epsilon(res, x, d);
    QVec y = add(x, scale(eps, d));
    AffineBasis basis = basis_from_point(res, y);
    for (const auto& b : j) {
        bool found = false;
        for (const auto& a : basis.roots)
            if (a == b)
                found = true;
        if (!found)
            throw Error(Errc::PreconditionFailed, "constructed basis misses an element of J");
    }
    return basis;
}

struct ExtendResult {
    std::optional<AffineBasis> basis;          // present on success
    std::optional<AffineBasis> restricted_basis; // canonical basis of the restriction (certificate)

    bool extended() const { return basis.has_value(); }
};

// Lemma-style converse: extends J' to a basis of the whole system when some
// basis of the restricted system contains J'; otherwise reports NoExtension
// with the canonical restricted basis as certificate.
inline ExtendResult extend_to_basis(const AffineRootSystem& sys, const std::vector<AffineRoot>& jprime)
{
    AffineRootSystem res = restrict_to_j(sys, jprime); // throws DependentGradients

    ExtendResult out;
    if (jprime.empty()) {
        QVec x = detail::generic_zero_point(sys, {});
        out.basis = basis_from_point(sys, x);
        out.restricted_basis = AffineBasis{{}, x};
        return out;
    }

    // Decide the hypothesis inside the restriction.
    QVec xr = detail::zero_point(jprime, sys.dim());
    QVec d = detail::unit_direction(jprime, sys.dim());
    Rat eps_r = detail::safe_epsilon(res, xr, d);
    AffineBasis restricted;
    try {
        restricted = basis_from_point(res, add(xr, scale(eps_r, d)));
    } catch (const Error& e) {
        if (e.code() != Errc::OnWall)
            throw;
        // a root vanishing on the J'-subspace has mixed-sign expansion: no
        // basis of the restriction can contain J'
        out.restricted_basis = AffineBasis{{}, xr};
        return out;
    }
    out.restricted_basis = restricted;
    for (const auto& b : jprime) {
        bool found = false;
        for (const auto& a : restricted.roots)
            if (a == b)
                found = true;
        if (!found)
            return out; // NoExtension; certificate attached
    }

    // Hypothesis holds: perturb a generic point of the full ambient space.
    QVec xj = detail::generic_zero_point(sys, jprime);
    Rat eps = detail::safe_epsilon(sys, xj, d);
    QVec y = add(xj, scale(eps, d));
    AffineBasis full = basis_from_point(sys, y);
    for (const auto& b : jprime) {
        bool found = false;
        for (const auto& a : full.roots)
            if (a == b)
                found = true;
        if (!found)
            throw Error(Errc::PreconditionFailed, "extension construction missed an element of J'");
    }
    out.basis = full;
    return out;
}

// Breadth-first enumeration of alcoves by wall reflections, keeping those
// whose witness stays inside the coordinate box |x_i| <= bound.
inline std::vector<AffineBasis> enumerate_alcoves(const AffineRootSystem& sys, const Rat& bound,
                                                  size_t budget = 200000)
{
    QVec start = detail::generic_zero_point(sys, {});
    std::vector<AffineBasis> out;
    std::set<std::vector<AffineRoot>> seen;
    std::vector<QVec> queue{start};
    std::set<QVec> visited{start};
    while (!queue.empty()) {
        QVec x = queue.back();
        queue.pop_back();
        AffineBasis basis = basis_from_point(sys, x);
        if (!seen.insert(basis.roots).second)
            continue;
        out.push_back(basis);
        if (out.size() > budget)
            throw Error(Errc::Budget, "alcove enumeration exceeded budget");
        for (const auto& w : basis.roots) {
            QVec y = sys.reflection(w).apply(x);
            bool inside = true;
            for (const auto& c : y)
                if (c > bound || c < -bound)
                    inside = false;
            if (inside && visited.insert(y).second)
                queue.push_back(y);
        }
    }
    return out;
}

// The finite data extracted at a special point: vanishing roots, their
// periods, and the based root datum on Hom(ZR~, Z) coordinates (pairing is
// the identity matrix in the simple-coroot basis).
struct SpecialPointData {
    QVec e;
    AffineBasis basis;                 // ambient basis B
    std::vector<AffineRoot> roots_at_e;
    std::vector<size_t> basis_at_e;    // indices into basis.roots vanishing at e
    std::vector<size_t> basis_off_e;   // the removed indices, one per component
    std::vector<Rat> periods;          // k_a per roots_at_e entry
    BasedRootDatum datum;              // (Hom(ZR~,Z), R, ZR~, R~, Delta)
    std::vector<QVec> coroot_vectors;  // ambient vector of k_a (Da)~ per roots_at_e entry
    std::vector<QVec> simple_coroot_vectors; // ambient Delta~ basis, order matches datum.basis

    // generator data: for each basis.roots position, the affine simple root
    // (alpha, k) in datum X-coordinates plus the semidirect coordinates of
    // the reflection
    std::vector<QVec> gen_alpha;  // X-coords of the gradient root r_b
    std::vector<Rat> gen_k;       // b(e)/k_b
    std::vector<IVec> gen_transl; // -k * coroot coords
    std::vector<size_t> gen_fin;  // index in the Weyl group enumeration

    std::shared_ptr<WeylGroup> weyl;
};

inline SpecialPointData special_point_data(const AffineRootSystem& sys, const AffineBasis& basis, const QVec& e)
{
    for (const auto& b : basis.roots)
        if (b.at(e) < 0)
            throw Error(Errc::PreconditionFailed, "point not in the closure of the basis chamber");

    // group gradient directions by line; each line must contain a vanishing root
    std::vector<QVec> lines;
    auto line_key = [&](const QVec& g) {
        // primitive representative with positive leading entry
        QVec k = g;
        Rat lead(0);
        for (const auto& v : k)
            if (v != 0) {
                lead = v;
                break;
            }
        return scale(Rat(1) / lead, k);
    };
    for (const auto& f : sys.families()) {
        QVec key = line_key(f.grad);
        bool found = false;
        for (const auto& l : lines)
            if (l == key)
                found = true;
        if (!found)
            lines.push_back(key);
    }
    for (const auto& l : lines) {
        bool vanishes = false;
        for (const auto& f : sys.families()) {
            if (line_key(f.grad) != l)
                continue;
            if (sys.vanishing_root_at(f, e))
                vanishes = true;
        }
        if (!vanishes)
            throw Error(Errc::NotSpecial, "no root of direction " + qvec_to_string(l) + " vanishes at the point");
    }

    SpecialPointData spd;
    spd.e = e;
    spd.basis = basis;
    for (const auto& f : sys.families()) {
        auto r = sys.vanishing_root_at(f, e);
        if (r && std::find(spd.roots_at_e.begin(), spd.roots_at_e.end(), *r) == spd.roots_at_e.end())
            spd.roots_at_e.push_back(*r);
    }
    for (const auto& a : spd.roots_at_e)
        spd.periods.push_back(sys.period_of(a));

    for (size_t i = 0; i < basis.roots.size(); ++i) {
        if (basis.roots[i].at(e) == 0) {
            bool found = false;
            for (const auto& a : spd.roots_at_e)
                if (a == basis.roots[i])
                    found = true;
            if (!found)
                throw Error(Errc::PreconditionFailed, "basis root vanishing at e missing from vanishing set");
            spd.basis_at_e.push_back(i);
        } else {
            spd.basis_off_e.push_back(i);
        }
    }

    // simple coroots: k_b (Db)~ for b in B_e, a Z-basis of ZR~
    for (size_t i : spd.basis_at_e) {
        const AffineRoot& b = basis.roots[i];
        Rat k = sys.period_of(b);
        spd.simple_coroot_vectors.push_back(scale(k, sys.grad_coroot(b.grad)));
    }
    size_t r = spd.simple_coroot_vectors.size();
    QMat cob; // columns = simple coroot vectors
    cob = qmat(sys.dim(), r);
    for (size_t j = 0; j < r; ++j)
        for (size_t i = 0; i < sys.dim(); ++i)
            cob[i][j] = spd.simple_coroot_vectors[j][i];

    auto y_coords = [&](const QVec& v) -> QVec {
        auto sol = solve(cob, v);
        if (!sol)
            throw Error(Errc::NotInGroup, "vector outside the coroot span");
        return *sol;
    };

    BasedRootDatum d;
    d.rank = r;
    d.pairing = qidentity(r);
    for (size_t i = 0; i < spd.roots_at_e.size(); ++i) {
        const AffineRoot& a = spd.roots_at_e[i];
        Rat k = spd.periods[i];
        QVec root_x(r, Rat(0));
        for (size_t j = 0; j < r; ++j)
            root_x[j] = dot(a.grad, spd.simple_coroot_vectors[j]) / k; // (Da/k)(delta_j~)
        QVec coroot_vec = scale(k, sys.grad_coroot(a.grad));
        spd.coroot_vectors.push_back(coroot_vec);
        QVec coroot_y = y_coords(coroot_vec);
        for (const auto& cval : coroot_y)
            if (!is_integral(cval))
                throw Error(Errc::PreconditionFailed, "coroot not integral over simple coroots");
        d.roots.push_back(root_x);
        d.coroots.push_back(coroot_y);
    }
    // basis entries: positions of B_e roots inside roots_at_e
    for (size_t i : spd.basis_at_e) {
        const AffineRoot& b = basis.roots[i];
        for (size_t p = 0; p < spd.roots_at_e.size(); ++p)
            if (spd.roots_at_e[p] == b)
                d.basis.push_back(p);
    }
    spd.datum = d;
    spd.weyl = std::make_shared<WeylGroup>(d);

    // defensive sanity on the finite layer
    {
        Report rep = check_root_datum(d);
        if (!rep.all_pass())
            throw Error(Errc::PreconditionFailed, "special-point datum invalid: " + rep.to_text());
    }

    // generator data per ambient basis position
    for (size_t i = 0; i < basis.roots.size(); ++i) {
        const AffineRoot& b = basis.roots[i];
        Rat k = sys.period_of(b);
        QVec root_x(r, Rat(0));
        for (size_t j = 0; j < r; ++j)
            root_x[j] = dot(b.grad, spd.simple_coroot_vectors[j]) / k;
        Rat m = b.at(e) / k;
        if (!is_integral(m))
            throw Error(Errc::PreconditionFailed, "basis root value at e not an integral multiple of its period");
        spd.gen_alpha.push_back(root_x);
        spd.gen_k.push_back(m);
        auto idx = spd.datum.root_index(root_x);
        if (!idx)
            throw Error(Errc::PreconditionFailed, "basis gradient missing from finite root system");
        // s_{c(r+m)}: x -> x - r(x) r~ - m r~ : semidirect pair (-m r~, s_r)
        QVec tvec = scale(-m, spd.datum.coroots[*idx]);
        auto ti = integral_vec(tvec);
        if (!ti)
            throw Error(Errc::PreconditionFailed, "translation part not integral");
        spd.gen_transl.push_back(*ti);
        QMat refl = qidentity(r);
        for (size_t col = 0; col < r; ++col) {
            QVec ecol(r, Rat(0));
            ecol[col] = 1;
            QVec im = spd.datum.reflect_y(*idx, ecol);
            for (size_t row = 0; row < r; ++row)
                refl[row][col] = im[row];
        }
        auto w = spd.weyl->find_by_mat_y(refl);
        if (!w)
            throw Error(Errc::PreconditionFailed, "reflection missing from Weyl enumeration");
        spd.gen_fin.push_back(*w);
    }
    return spd;
}

// Element of the affine Weyl group in semidirect coordinates relative to a
// special point: translation in the coroot lattice and a finite part.
struct AffineWeylElt {
    IVec transl;
    size_t fin = 0;

    friend bool operator==(const AffineWeylElt& a, const AffineWeylElt& b)
    {
        return a.transl == b.transl && a.fin == b.fin;
    }
    friend bool operator<(const AffineWeylElt& a, const AffineWeylElt& b)
    {
        if (a.transl != b.transl)
            return a.transl < b.transl;
        return a.fin < b.fin;
    }
};

// Splitting of an ambient affine transformation through the semidirect
// decomposition at the special point.
inline AffineWeylElt split_affine_weyl(const SpecialPointData& spd, const AffineRootSystem& sys, const AffineMap& w)
{
    // must stabilize the root system (finite window sample)
    for (const auto& f : sys.families()) {
        for (long m = -1; m <= 1; ++m) {
            if (!sys.contains(w.act(f.member(m))))
                throw Error(Errc::NotInGroup, "transformation does not preserve the root system");
        }
    }
    QVec v = sub(w.apply(spd.e), spd.e);
    size_t r = spd.datum.rank;
    QMat cob = qmat(sys.dim(), r);
    for (size_t j = 0; j < r; ++j)
        for (size_t i = 0; i < sys.dim(); ++i)
            cob[i][j] = spd.simple_coroot_vectors[j][i];
    auto coords = solve(cob, v);
    if (!coords)
        throw Error(Errc::NotInGroup, "translation part outside the coroot lattice span");
    auto ti = integral_vec(*coords);
    if (!ti)
        throw Error(Errc::NotInGroup, "translation part not in the coroot lattice");

    // finite part: conjugate the linear action into simple-coroot coordinates
    QMat m = qmat(r, r);
    for (size_t j = 0; j < r; ++j) {
        QVec img = mat_vec(w.lin, spd.simple_coroot_vectors[j]);
        auto c = solve(cob, img);
        if (!c)
            throw Error(Errc::NotInGroup, "linear part does not stabilize the coroot span");
        for (size_t i = 0; i < r; ++i)
            m[i][j] = (*c)[i];
    }
    auto fin = spd.weyl->find_by_mat_y(m);
    if (!fin)
        throw Error(Errc::NotInGroup, "finite part not in the Weyl group");
    return {*ti, *fin};
}

// Recompose semidirect coordinates into an ambient transformation.
inline AffineMap recompose(const SpecialPointData& spd, const AffineRootSystem& sys, const AffineWeylElt& x)
{
    size_t n = sys.dim();
    size_t r = spd.datum.rank;
    // linear part: conjugate matY back to ambient coordinates; it acts as
    // identity on the orthogonal complement of the coroot span.
    // Build ambient basis: coroot vectors + complement kernel.
    QMat rows;
    for (size_t j = 0; j < r; ++j)
        rows.push_back(mat_vec(sys.inner(), spd.simple_coroot_vectors[j]));
    std::vector<QVec> compl_basis = rows.empty() ? std::vector<QVec>{} : kernel_basis(rows);
    if (rows.empty())
        for (size_t i = 0; i < n; ++i) {
            QVec e(n, Rat(0));
            e[i] = 1;
            compl_basis.push_back(e);
        }

    QMat full = qmat(n, n);
    for (size_t j = 0; j < r; ++j)
        for (size_t i = 0; i < n; ++i)
            full[i][j] = spd.simple_coroot_vectors[j][i];
    for (size_t j = 0; j < compl_basis.size(); ++j)
        for (size_t i = 0; i < n; ++i)
            full[i][r + j] = compl_basis[j][i];
    QMat full_inv = invert(full);

    const QMat& my = spd.weyl->elt(x.fin).mat_y;
    QMat block = qidentity(n);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
            block[i][j] = my[i][j];
    QMat lin = mat_mul(full, mat_mul(block, full_inv));

    QVec tvec(n, Rat(0));
    for (size_t j = 0; j < r; ++j)
        tvec = add(tvec, scale(Rat(x.transl[j]), spd.simple_coroot_vectors[j]));

    // x = t_v o u around e: x(p) = e + v + L(p - e)
    AffineMap map;
    map.lin = lin;
    map.tr = add(sub(add(spd.e, tvec), mat_vec(lin, spd.e)), QVec(n, Rat(0)));
    return map;
}

} // namespace heckelab
