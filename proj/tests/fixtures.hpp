#pragma once

#include "heckelab/affine.hpp"
#include "heckelab/rootdatum.hpp"

namespace heckelab::fixtures {

// rank-1 affine system {±x + Z} on the line
inline AffineRootSystem affine_a1()
{
    return AffineRootSystem(1, {{{Rat(1)}, Rat(0), Rat(1)}, {{Rat(-1)}, Rat(0), Rat(1)}});
}

// A2 in simple-coroot coordinates; the invariant inner product is the
// symmetrized Cartan matrix
inline AffineRootSystem affine_a2()
{
    QVec a1 = {Rat(2), Rat(-1)};
    QVec a2 = {Rat(-1), Rat(2)};
    QVec a12 = {Rat(1), Rat(1)};
    std::vector<RootFamily> fams;
    for (const QVec& g : {a1, a2, a12}) {
        fams.push_back({g, Rat(0), Rat(1)});
        fams.push_back({scale(Rat(-1), g), Rat(0), Rat(1)});
    }
    QMat inner = {{Rat(2), Rat(-1)}, {Rat(-1), Rat(2)}};
    return AffineRootSystem(2, fams, inner);
}

// C2 in orthonormal coordinates: short ±e1±e2, long ±2e1, ±2e2
inline AffineRootSystem affine_c2()
{
    std::vector<QVec> roots = {{Rat(1), Rat(-1)}, {Rat(1), Rat(1)}, {Rat(2), Rat(0)}, {Rat(0), Rat(2)}};
    std::vector<RootFamily> fams;
    for (const QVec& g : roots) {
        fams.push_back({g, Rat(0), Rat(1)});
        fams.push_back({scale(Rat(-1), g), Rat(0), Rat(1)});
    }
    return AffineRootSystem(2, fams);
}

inline AffineBasis a1_fundamental()
{
    return {{{{Rat(1)}, Rat(0)}, {{Rat(-1)}, Rat(1)}}, {Rat(1, 3)}};
}

inline AffineBasis a2_fundamental()
{
    AffineRoot a1{{Rat(2), Rat(-1)}, Rat(0)};
    AffineRoot a2{{Rat(-1), Rat(2)}, Rat(0)};
    AffineRoot a0{{Rat(-1), Rat(-1)}, Rat(1)};
    std::vector<AffineRoot> roots = {a1, a2, a0};
    std::sort(roots.begin(), roots.end());
    return {roots, {Rat(1, 3), Rat(1, 3)}};
}

inline AffineBasis c2_fundamental()
{
    AffineRoot a1{{Rat(1), Rat(-1)}, Rat(0)};
    AffineRoot a2{{Rat(0), Rat(2)}, Rat(0)};
    AffineRoot a0{{Rat(-2), Rat(0)}, Rat(1)};
    std::vector<AffineRoot> roots = {a1, a2, a0};
    std::sort(roots.begin(), roots.end());
    return {roots, {Rat(7, 20), Rat(3, 20)}};
}

// X = Y = Z, alpha = 2, alpha~ = 1; alpha lies in 2X
inline BasedRootDatum datum_a1()
{
    BasedRootDatum d;
    d.rank = 1;
    d.pairing = {{Rat(1)}};
    d.roots = {{Rat(2)}, {Rat(-2)}};
    d.coroots = {{Rat(1)}, {Rat(-1)}};
    d.basis = {0};
    return d;
}

// X = Y = Z, alpha = 1, alpha~ = 2; theta_{alpha~/2} exists
inline BasedRootDatum datum_a1_dual()
{
    BasedRootDatum d;
    d.rank = 1;
    d.pairing = {{Rat(1)}};
    d.roots = {{Rat(1)}, {Rat(-1)}};
    d.coroots = {{Rat(2)}, {Rat(-2)}};
    d.basis = {0};
    return d;
}

inline BasedRootDatum datum_a2() { return datum_from_cartan({{2, -1}, {-1, 2}}); }
inline BasedRootDatum datum_c2() { return datum_from_cartan({{2, -2}, {-1, 2}}); }

// the same data with the opposite basis: root i negated
inline BasedRootDatum negate_datum(const BasedRootDatum& d)
{
    BasedRootDatum out = d;
    for (size_t i = 0; i < d.roots.size(); ++i) {
        out.roots[i] = scale(Rat(-1), d.roots[i]);
        out.coroots[i] = scale(Rat(-1), d.coroots[i]);
    }
    return out;
}

} // namespace heckelab::fixtures
