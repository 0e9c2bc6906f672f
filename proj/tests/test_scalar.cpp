#include "heckelab/scalar.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace heckelab;

namespace {

Scalar q(long k) { return Scalar::q_pow(k); }
Scalar t(long k) { return Scalar::t_pow(k); }

Scalar random_scalar(std::mt19937_64& rng, int max_terms = 4)
{
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<long> expo(-4, 4);
    std::uniform_int_distribution<long> num(-3, 3);
    std::uniform_int_distribution<long> den(1, 3);
    Scalar s;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i)
        s += Scalar::t_pow(expo(rng), Rat(num(rng), den(rng)));
    return s;
}

} // namespace

TEST_CASE("arithmetic on fixed examples")
{
    // (t + 1)(t - 1) = t^2 - 1
    CHECK((t(1) + Scalar(1)) * (t(1) - Scalar(1)) == t(2) - Scalar(1));

    // (2t^2 + 3) * t^{-1} = 2t + 3t^{-1}, by hand
    Scalar lhs = (Scalar::t_pow(2, Rat(2)) + Scalar(3)) * t(-1);
    Scalar expected = Scalar::t_pow(1, Rat(2)) + Scalar::t_pow(-1, Rat(3));
    CHECK(lhs == expected);
}

TEST_CASE("multiplicative identity on random scalars")
{
    std::mt19937_64 rng(0);
    for (int i = 0; i < 50; ++i) {
        Scalar a = random_scalar(rng);
        CHECK(a * Scalar(1) == a);
    }
}

TEST_CASE("degree bound on products")
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        Scalar a = random_scalar(rng);
        Scalar b = random_scalar(rng);
        if (a.is_zero() || b.is_zero())
            continue;
        CHECK((a * b).degree() == a.degree() + b.degree());
        CHECK((a * b).low_degree() == a.low_degree() + b.low_degree());
    }
}

TEST_CASE("ring axioms on random triples")
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 60; ++i) {
        Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("exact division")
{
    // (1 - t^4)/(1 - t^2) = 1 + t^2
    CHECK(exact_div(Scalar(1) - t(4), Scalar(1) - t(2)) == Scalar(1) + t(2));
    // (t^3 - t)/t = t^2 - 1
    CHECK(exact_div(t(3) - t(1), t(1)) == t(2) - Scalar(1));
    // (1 - t^3)/(1 - t^2) does not divide
    CHECK_THROWS_MATCHES(exact_div(Scalar(1) - t(3), Scalar(1) - t(2)), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NonDivisible; }));
    CHECK_THROWS_MATCHES(exact_div(t(1), Scalar()), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::DivByZero; }));
}

TEST_CASE("division round trip on random pairs")
{
    std::mt19937_64 rng(3);
    int done = 0;
    while (done < 60) {
        Scalar a = random_scalar(rng);
        Scalar b = random_scalar(rng);
        if (b.is_zero())
            continue;
        CHECK(exact_div(a * b, b) == a);
        ++done;
    }
}

TEST_CASE("no zero divisors")
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 80; ++i) {
        Scalar a = random_scalar(rng);
        Scalar b = random_scalar(rng);
        if ((a * b).is_zero())
            CHECK((a.is_zero() || b.is_zero()));
    }
}

TEST_CASE("rendering and parsing")
{
    Scalar s = q(1) - Scalar(1);
    CHECK(s.to_string_q() == "q^1 - 1");
    CHECK(s.to_string() == "t^2 - 1");
    CHECK((t(1) * Scalar(2) + t(-1)).to_string() == "2*t + t^-1");

    CHECK(parse_scalar("q^2 - q") == q(2) - q(1));
    CHECK(parse_scalar("q^(1/2)") == t(1));
    CHECK(parse_scalar("t^3") == t(3));
    CHECK(parse_scalar("q^(-3/2)") == t(-3));
    CHECK(parse_scalar("2*q^2 + 1/2") == Scalar::t_pow(4, Rat(2)) + Scalar(Rat(1, 2)));
    CHECK(parse_scalar("(q - 1)*(q + 1)") == q(2) - Scalar(1));
    CHECK_THROWS_AS(parse_scalar("q^^2"), Error);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        Scalar a = random_scalar(rng);
        CHECK(parse_scalar(a.to_string()) == a);
        CHECK(parse_scalar(a.to_string_q()) == a);
    }
}

TEST_CASE("hecke parameter exponent")
{
    CHECK(hecke_exponent(q(2)) == 2);
    CHECK_THROWS_AS(hecke_exponent(Scalar(1)), Error);
    CHECK_THROWS_AS(hecke_exponent(t(1)), Error);
    CHECK_THROWS_AS(hecke_exponent(q(1) + Scalar(1)), Error);
}
