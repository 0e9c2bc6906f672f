#include "heckelab/affine.hpp"

#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace heckelab;
using namespace heckelab::fixtures;

namespace {

bool basis_contains(const AffineBasis& b, const AffineRoot& r)
{
    for (const auto& a : b.roots)
        if (a == r)
            return true;
    return false;
}

} // namespace

TEST_CASE("verify_affine_system on standard systems")
{
    CHECK(verify_affine_system(affine_a1(), 3).all_pass());
    CHECK(verify_affine_system(affine_a2(), 3).all_pass());
    CHECK(verify_affine_system(affine_c2(), 3).all_pass());
}

TEST_CASE("verify_affine_system flags missing reflection images")
{
    // drop the alpha1+alpha2 families from A2: closure fails
    QVec a1 = {Rat(2), Rat(-1)};
    QVec a2 = {Rat(-1), Rat(2)};
    std::vector<RootFamily> fams;
    for (const QVec& g : {a1, a2}) {
        fams.push_back({g, Rat(0), Rat(1)});
        fams.push_back({scale(Rat(-1), g), Rat(0), Rat(1)});
    }
    AffineRootSystem broken(2, fams, {{Rat(2), Rat(-1)}, {Rat(-1), Rat(2)}});
    Report r = verify_affine_system(broken, 2);
    CHECK_FALSE(r.all_pass());
    auto* c = r.find("reflection-closure");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
    CHECK_FALSE(c->witness.empty());
}

TEST_CASE("basis_from_point on the rank-1 system")
{
    AffineRootSystem sys = affine_a1();
    AffineBasis b = basis_from_point(sys, {Rat(1, 3)});
    REQUIRE(b.roots.size() == 2);
    CHECK(basis_contains(b, {{Rat(1)}, Rat(0)}));
    CHECK(basis_contains(b, {{Rat(-1)}, Rat(1)}));
    CHECK(validate_basis(sys, b, 3).all_pass());

    CHECK_THROWS_MATCHES(basis_from_point(sys, {Rat(0)}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::OnWall; }));
}

TEST_CASE("basis_from_point at the barycenter of the fundamental alcove")
{
    AffineRootSystem sys = affine_a2();
    AffineBasis b = basis_from_point(sys, {Rat(1, 3), Rat(1, 3)});
    REQUIRE(b.roots.size() == 3);
    for (const auto& r : a2_fundamental().roots)
        CHECK(basis_contains(b, r));
    CHECK(validate_basis(sys, b, 3).all_pass());
}

TEST_CASE("basis_from_point on a translated alcove agrees with window decomposition")
{
    AffineRootSystem sys = affine_c2();
    AffineBasis b = basis_from_point(sys, {Rat(23, 20), Rat(13, 40)});
    CHECK(b.roots.size() == 3);
    CHECK(validate_basis(sys, b, 3).all_pass());
}

TEST_CASE("restrict_to_J")
{
    AffineRootSystem a2 = affine_a2();
    // empty J: empty system
    CHECK(restrict_to_j(a2, {}).families().empty());

    // J = {a1}: the two families with gradient +-alpha1
    AffineRoot a1{{Rat(2), Rat(-1)}, Rat(0)};
    AffineRootSystem res = restrict_to_j(a2, {a1});
    CHECK(res.families().size() == 2);
    for (const auto& f : res.families())
        CHECK((f.grad == QVec{Rat(2), Rat(-1)} || f.grad == QVec{Rat(-2), Rat(1)}));

    // rank-1 ambient: restriction along its root is everything
    AffineRootSystem a1sys = affine_a1();
    CHECK(restrict_to_j(a1sys, {{{Rat(1)}, Rat(0)}}).families().size() == a1sys.families().size());
}

TEST_CASE("basis_containing_J")
{
    // rank 1: restriction is the whole system, result is the fundamental basis
    AffineRootSystem a1sys = affine_a1();
    AffineRoot a1{{Rat(1)}, Rat(0)};
    AffineBasis b = basis_containing_j(a1sys, a1_fundamental(), {a1});
    CHECK(basis_contains(b, a1));
    CHECK(basis_contains(b, {{Rat(-1)}, Rat(1)}));

    // A2 with J = {a1}: basis {a1, k - a1} of the rank-1 restriction
    AffineRootSystem a2 = affine_a2();
    AffineRoot a{{Rat(2), Rat(-1)}, Rat(0)};
    AffineBasis bj = basis_containing_j(a2, a2_fundamental(), {a});
    REQUIRE(bj.roots.size() == 2);
    CHECK(basis_contains(bj, a));
    CHECK(basis_contains(bj, {{Rat(-2), Rat(1)}, Rat(1)}));

    // empty J: a valid basis of the empty restriction
    AffineBasis be = basis_containing_j(a2, a2_fundamental(), {});
    CHECK(be.roots.empty());
}

TEST_CASE("extend_to_basis on a pair of fundamental simple roots")
{
    AffineRootSystem a2 = affine_a2();
    AffineRoot a1{{Rat(2), Rat(-1)}, Rat(0)};
    AffineRoot a2r{{Rat(-1), Rat(2)}, Rat(0)};
    auto ext = extend_to_basis(a2, {a1, a2r});
    REQUIRE(ext.extended());
    CHECK(ext.basis->roots == a2_fundamental().roots);
    CHECK(validate_basis(a2, *ext.basis, 3).all_pass());
}

TEST_CASE("extend_to_basis rejects parallel walls")
{
    AffineRootSystem a2 = affine_a2();
    AffineRoot a1{{Rat(2), Rat(-1)}, Rat(0)};
    AffineRoot a1k{{Rat(2), Rat(-1)}, Rat(1)};
    CHECK_THROWS_MATCHES(extend_to_basis(a2, {a1, a1k}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::DependentGradients; }));
}

TEST_CASE("extend_to_basis from a wall of a non-fundamental alcove, cross-checked")
{
    AffineRootSystem c2 = affine_c2();
    AffineRoot j{{Rat(1), Rat(-1)}, Rat(2)}; // short wall two steps out
    auto ext = extend_to_basis(c2, {j});
    REQUIRE(ext.extended());
    CHECK(basis_contains(*ext.basis, j));
    CHECK(validate_basis(c2, *ext.basis, 4).all_pass());

    // brute force: some enumerated alcove within the window has this wall
    bool found = false;
    for (const auto& basis : enumerate_alcoves(c2, Rat(3)))
        if (basis_contains(basis, j))
            found = true;
    CHECK(found);
}

TEST_CASE("extend_to_basis certifies NoExtension for orthogonal short roots")
{
    // two orthogonal short-root walls of C2 meet at angle pi/2 but every
    // alcove corner on their crossing has angle pi/4
    AffineRootSystem c2 = affine_c2();
    AffineRoot s1{{Rat(1), Rat(-1)}, Rat(0)};
    AffineRoot s2{{Rat(1), Rat(1)}, Rat(0)};
    auto ext = extend_to_basis(c2, {s1, s2});
    CHECK_FALSE(ext.extended());
    REQUIRE(ext.restricted_basis.has_value());

    // brute force agreement: no enumerated alcove contains both walls
    for (const auto& basis : enumerate_alcoves(c2, Rat(3)))
        CHECK_FALSE(basis_contains(basis, s1) && basis_contains(basis, s2));
}

TEST_CASE("round trip: every root of a computed extension is itself extendable")
{
    AffineRootSystem a2 = affine_a2();
    AffineRoot a{{Rat(-1), Rat(2)}, Rat(-1)};
    auto ext = extend_to_basis(a2, {a});
    REQUIRE(ext.extended());
    for (const auto& b : ext.basis->roots) {
        auto again = extend_to_basis(a2, {b});
        REQUIRE(again.extended());
        CHECK(basis_contains(*again.basis, b));
    }
}

TEST_CASE("special point data for the rank-1 system at the origin")
{
    AffineRootSystem sys = affine_a1();
    SpecialPointData spd = special_point_data(sys, a1_fundamental(), {Rat(0)});
    CHECK(spd.roots_at_e.size() == 2);
    CHECK(spd.basis_at_e.size() == 1);
    CHECK(spd.basis_off_e.size() == 1);
    REQUIRE(spd.periods.size() == 2);
    CHECK(spd.periods[0] == 1);
    // the finite datum is the A1 datum (alpha = 2, alpha~ = 1)
    CHECK(spd.datum.rank == 1);
    REQUIRE(spd.datum.roots.size() == 2);
    CHECK(spd.datum.roots[spd.datum.basis[0]] == QVec{Rat(2)});
    CHECK(spd.datum.coroots[spd.datum.basis[0]] == QVec{Rat(1)});
    CHECK(check_root_datum(spd.datum).all_pass());
}

TEST_CASE("special point data for A2 at a vertex")
{
    AffineRootSystem sys = affine_a2();
    SpecialPointData spd = special_point_data(sys, a2_fundamental(), {Rat(0), Rat(0)});
    CHECK(spd.roots_at_e.size() == 6);
    CHECK(spd.datum.roots.size() == 6);
    CHECK(check_root_datum(spd.datum).all_pass());
    // A2 Cartan pattern on the simples
    REQUIRE(spd.datum.basis.size() == 2);
    QVec r0 = spd.datum.roots[spd.datum.basis[0]];
    QVec c1 = spd.datum.coroots[spd.datum.basis[1]];
    CHECK(spd.datum.pair(r0, c1) == Rat(-1));

    CHECK_THROWS_MATCHES(special_point_data(sys, a2_fundamental(), {Rat(1, 3), Rat(1, 3)}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NotSpecial; }));
}

TEST_CASE("special point data for C2 sees the 2X structure")
{
    AffineRootSystem sys = affine_c2();
    SpecialPointData spd = special_point_data(sys, c2_fundamental(), {Rat(0), Rat(0)});
    CHECK(spd.datum.roots.size() == 8);
    CHECK(check_root_datum(spd.datum).all_pass());
    // the long simple root lies in 2X
    bool found_two_x = false;
    for (size_t b : spd.datum.basis)
        if (spd.datum.in_two_x(spd.datum.roots[b]))
            found_two_x = true;
    CHECK(found_two_x);
}

TEST_CASE("split_affine_weyl on generators and translations")
{
    AffineRootSystem sys = affine_a1();
    SpecialPointData spd = special_point_data(sys, a1_fundamental(), {Rat(0)});

    // s_a for a in B_e maps to (0, s_{Da/k_a})
    AffineRoot a{{Rat(1)}, Rat(0)};
    AffineWeylElt sa = split_affine_weyl(spd, sys, sys.reflection(a));
    CHECK(sa.transl == IVec{0});
    CHECK(sa.fin != spd.weyl->identity());

    // s_a o s_{a + k} is the translation by k (Da)~
    AffineMap comp = sys.reflection(a).compose(sys.reflection(a + Rat(1)));
    AffineWeylElt tr = split_affine_weyl(spd, sys, comp);
    CHECK(tr.fin == spd.weyl->identity());
    CHECK(tr.transl == IVec{1}); // k (Da)~ is the simple coroot itself

    AffineWeylElt id = split_affine_weyl(spd, sys, AffineMap::identity(1));
    CHECK(id.transl == IVec{0});
    CHECK(id.fin == spd.weyl->identity());

    // recomposition reproduces the input
    CHECK(recompose(spd, sys, sa) == sys.reflection(a));
    CHECK(recompose(spd, sys, tr) == comp);
}

TEST_CASE("splitting is multiplicative on generator pairs")
{
    AffineRootSystem sys = affine_a2();
    SpecialPointData spd = special_point_data(sys, a2_fundamental(), {Rat(0), Rat(0)});
    std::vector<AffineMap> gens;
    for (const auto& b : a2_fundamental().roots)
        gens.push_back(sys.reflection(b));
    for (const auto& g : gens)
        for (const auto& h : gens) {
            AffineWeylElt sg = split_affine_weyl(spd, sys, g);
            AffineWeylElt sh = split_affine_weyl(spd, sys, h);
            AffineWeylElt sgh = split_affine_weyl(spd, sys, g.compose(h));
            // product in semidirect coordinates
            QVec img = spd.weyl->act_y(sg.fin, to_qvec(sh.transl));
            IVec t = sg.transl;
            for (size_t i = 0; i < t.size(); ++i)
                t[i] += to_long(numerator(img[i]));
            CHECK(sgh.transl == t);
            CHECK(sgh.fin == spd.weyl->mul(sg.fin, sh.fin));
        }
}

TEST_CASE("split rejects maps outside the group")
{
    AffineRootSystem sys = affine_a1();
    SpecialPointData spd = special_point_data(sys, a1_fundamental(), {Rat(0)});
    AffineMap shift = AffineMap::identity(1);
    shift.tr = {Rat(1, 2)}; // half-integer translation does not preserve the system
    CHECK_THROWS_MATCHES(split_affine_weyl(spd, sys, shift), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NotInGroup; }));
}

TEST_CASE("offset lattices at a special point")
{
    AffineRootSystem sys = affine_c2();
    SpecialPointData spd = special_point_data(sys, c2_fundamental(), {Rat(0), Rat(0)});
    long window = 3;
    for (size_t i = 0; i < spd.roots_at_e.size(); ++i) {
        const AffineRoot& a = spd.roots_at_e[i];
        Rat k = spd.periods[i];
        for (long m = -window; m <= window; ++m)
            CHECK(sys.contains(a + k * m));
    }
}

TEST_CASE("alcove enumeration covers the rank-1 window")
{
    AffineRootSystem sys = affine_a1();
    auto alcoves = enumerate_alcoves(sys, Rat(2));
    // alcoves (m, m+1) whose interior meets [-2, 2]
    CHECK(alcoves.size() >= 4);
    for (const auto& b : alcoves)
        CHECK(validate_basis(sys, b, 3).all_pass());
}
