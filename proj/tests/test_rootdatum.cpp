#include "heckelab/rootdatum.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace heckelab;

namespace {

// type A1 datum of the contract: X = Y = Z, alpha = 2, alpha~ = 1
BasedRootDatum a1_datum()
{
    BasedRootDatum d;
    d.rank = 1;
    d.pairing = {{Rat(1)}};
    d.roots = {{Rat(2)}, {Rat(-2)}};
    d.coroots = {{Rat(1)}, {Rat(-1)}};
    d.basis = {0};
    return d;
}

IMat a2_cartan() { return {{2, -1}, {-1, 2}}; }
// C2: alpha1 short, alpha2 long; C[i][j] = <alpha_j, alpha_i~>
IMat c2_cartan() { return {{2, -2}, {-1, 2}}; }

// brute-force conjugacy of generators inside an enumerated group
bool gens_conjugate(const WeylGroup& w, size_t i, size_t j)
{
    size_t gi = w.gen(i), gj = w.gen(j);
    for (size_t x = 0; x < w.size(); ++x) {
        if (w.mul(w.mul(x, gi), w.inverse(x)) == gj)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("A1 datum passes all axioms")
{
    Report r = check_root_datum(a1_datum());
    CHECK(r.all_pass());
}

TEST_CASE("broken pairing normalization is reported with witness")
{
    BasedRootDatum d = a1_datum();
    d.coroots = {{Rat(1, 2)}, {Rat(-1, 2)}}; // <alpha, alpha~> = 1
    Report r = check_root_datum(d);
    CHECK_FALSE(r.all_pass());
    auto* c = r.find("pairing-normalization");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
    CHECK(c->witness.find("[2]") != std::string::npos);
}

TEST_CASE("C2 datum passes; stability cross-checked by brute force")
{
    BasedRootDatum d = datum_from_cartan(c2_cartan());
    REQUIRE(d.roots.size() == 8);
    Report r = check_root_datum(d);
    CHECK(r.all_pass());

    // independent oracle: apply both reflection formulas to all roots
    for (size_t i = 0; i < d.roots.size(); ++i)
        for (size_t j = 0; j < d.roots.size(); ++j) {
            QVec rx = sub(d.roots[j], scale(d.pair(d.roots[j], d.coroots[i]), d.roots[i]));
            CHECK(d.root_index(rx).has_value());
        }
}

TEST_CASE("reflect on A1")
{
    BasedRootDatum d = a1_datum();
    QVec alpha = {Rat(2)};
    CHECK(reflect(d, alpha, {Rat(1)}, Side::InY) == QVec{Rat(-1)});
    CHECK(reflect(d, alpha, {Rat(0)}, Side::InY) == QVec{Rat(0)});
    CHECK_THROWS_MATCHES(reflect(d, {Rat(3)}, {Rat(1)}, Side::InY), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::UnknownRoot; }));
}

TEST_CASE("reflect on C2: s_short(long simple) = long + 2 short")
{
    BasedRootDatum d = datum_from_cartan(c2_cartan());
    QVec alpha = d.roots[0]; // short simple
    QVec beta = d.roots[1];  // long simple
    // oracle: <beta, alpha~> = -2
    CHECK(d.pair(beta, d.coroots[0]) == Rat(-2));
    QVec expected = add(beta, scale(Rat(2), alpha));
    CHECK(reflect(d, alpha, beta, Side::InX) == expected);
}

TEST_CASE("Weyl enumeration sizes and longest lengths")
{
    WeylGroup a2(datum_from_cartan(a2_cartan()));
    CHECK(a2.size() == 6);
    size_t longest = 0;
    for (size_t i = 0; i < a2.size(); ++i)
        longest = std::max(longest, a2.elt(i).length);
    CHECK(longest == 3);

    WeylGroup c2(datum_from_cartan(c2_cartan()));
    CHECK(c2.size() == 8);
    longest = 0;
    for (size_t i = 0; i < c2.size(); ++i)
        longest = std::max(longest, c2.elt(i).length);
    CHECK(longest == 4);

    // independent oracle: closure of generator matrices
    {
        BasedRootDatum d = datum_from_cartan(a2_cartan());
        std::set<QMat> seen;
        std::vector<QMat> queue;
        QMat id = qidentity(2);
        seen.insert(id);
        queue.push_back(id);
        QMat g0 = a2.elt(a2.gen(0)).mat_y;
        QMat g1 = a2.elt(a2.gen(1)).mat_y;
        while (!queue.empty()) {
            QMat m = queue.back();
            queue.pop_back();
            for (const QMat& g : {g0, g1}) {
                QMat p = mat_mul(g, m);
                if (seen.insert(p).second)
                    queue.push_back(p);
            }
        }
        CHECK(seen.size() == 6);
    }

    // empty datum: trivial group
    BasedRootDatum empty;
    empty.rank = 0;
    WeylGroup trivial(empty);
    CHECK(trivial.size() == 1);
}

TEST_CASE("reduced words")
{
    WeylGroup a2(datum_from_cartan(a2_cartan()));
    CHECK(a2.reduced_word(a2.identity()).empty());
    CHECK(a2.reduced_word(a2.gen(0)) == std::vector<size_t>{0});

    // longest element: all length-3 words over {0,1} whose product matches
    size_t w0 = 0;
    for (size_t i = 0; i < a2.size(); ++i)
        if (a2.elt(i).length == 3)
            w0 = i;
    auto word = a2.reduced_word(w0);
    REQUIRE(word.size() == 3);
    size_t prod = a2.identity();
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        prod = a2.gen_mul(*it, prod);
    CHECK(prod == w0);
    // tie-break: smallest descent first gives the word starting with s1
    CHECK(word[0] == 0);
}

TEST_CASE("length properties")
{
    for (const IMat& cartan : {a2_cartan(), c2_cartan()}) {
        WeylGroup w(datum_from_cartan(cartan));
        const BasedRootDatum& d = w.datum();
        for (size_t x = 0; x < w.size(); ++x) {
            // s_alpha^2 = e on generators
            for (size_t g = 0; g < w.num_gens(); ++g) {
                CHECK(w.gen_mul(g, w.gen(g)) == w.identity());
                size_t ws = w.mul_gen(x, g);
                long diff = static_cast<long>(w.elt(ws).length) - static_cast<long>(w.elt(x).length);
                CHECK((diff == 1 || diff == -1));
            }
            // inversion count equals length
            size_t inversions = 0;
            for (size_t r = 0; r < d.roots.size(); ++r) {
                if (!d.is_positive_root(d.roots[r]))
                    continue;
                QVec img = w.act_x(x, d.roots[r]);
                if (!d.is_positive_root(img))
                    ++inversions;
            }
            CHECK(inversions == w.elt(x).length);
        }
    }
}

TEST_CASE("generator conjugacy via odd braid graph matches brute force")
{
    WeylGroup a2(datum_from_cartan(a2_cartan()));
    auto cls_a2 = a2.generator_conjugacy_classes();
    CHECK(cls_a2[0] == cls_a2[1]);
    CHECK(gens_conjugate(a2, 0, 1));

    WeylGroup c2(datum_from_cartan(c2_cartan()));
    auto cls_c2 = c2.generator_conjugacy_classes();
    CHECK(cls_c2[0] != cls_c2[1]);
    CHECK_FALSE(gens_conjugate(c2, 0, 1));
}

TEST_CASE("enumeration budget")
{
    CHECK_THROWS_MATCHES(WeylGroup(datum_from_cartan(c2_cartan()), 4), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::Budget; }));
}
