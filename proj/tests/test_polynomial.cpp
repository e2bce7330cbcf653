#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qcat/errors.hpp"
#include "qcat/polynomial.hpp"

using namespace qcat;

namespace {

WeightPoly random_poly(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> n_terms(0, 6);
    std::uniform_int_distribution<Exponent> exp(0, 32);
    std::uniform_int_distribution<long> coef(-1000000, 1000000);
    WeightPoly p;
    for (int t = n_terms(rng); t > 0; --t) p.add_term(exp(rng), coef(rng));
    return p;
}

Rational random_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 40);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("add collects like terms and prunes zeros")
{
    CHECK(WeightPoly{{2, 1}, {4, 1}} + WeightPoly{{2, 1}} == WeightPoly{{2, 2}, {4, 1}});
    CHECK(WeightPoly{{1, 1}} + WeightPoly{} == WeightPoly{{1, 1}});
    const auto cancelled = WeightPoly{{1, 1}} + WeightPoly{{1, -1}};
    CHECK(cancelled.is_zero());
    CHECK(cancelled.terms().empty());
}

TEST_CASE("mul is the exact convolution")
{
    const WeightPoly one_plus_x{{0, 1}, {1, 1}};
    CHECK(one_plus_x * one_plus_x == WeightPoly{{0, 1}, {1, 2}, {2, 1}});
    CHECK((one_plus_x * WeightPoly{}).is_zero());
    CHECK(WeightPoly{{1, 1}, {3, 1}} * WeightPoly{{1, 1}} == WeightPoly{{2, 1}, {4, 1}});

    // Far-apart exponents take the sparse path.
    const auto far = WeightPoly{{0, 1}, {1000000, 3}} * WeightPoly{{0, 2}, {5000000, 1}};
    CHECK(far == WeightPoly{{0, 2}, {1000000, 6}, {5000000, 1}, {6000000, 3}});

    // Coefficients beyond 64 bits.
    WeightPoly big = WeightPoly::monomial(0, BigInt("18446744073709551616"));
    CHECK((big * big).coeff(0) == BigInt("340282366920938463463374607431768211456"));
}

TEST_CASE("shift, substitute_square and reverse")
{
    const WeightPoly one_plus_x{{0, 1}, {1, 1}};
    CHECK(shift(one_plus_x, 2) == WeightPoly{{2, 1}, {3, 1}});
    CHECK(shift(WeightPoly{}, 5).is_zero());
    CHECK(shift(WeightPoly{{2, 1}}, 1) == WeightPoly{{3, 1}});

    CHECK(substitute_square(one_plus_x) == WeightPoly{{0, 1}, {2, 1}});

    CHECK(reverse(WeightPoly{{0, 1}, {1, 2}, {2, 1}, {3, 1}}, 3) == WeightPoly{{0, 1}, {1, 1}, {2, 2}, {3, 1}});
    CHECK(reverse(WeightPoly::constant(7), 0) == WeightPoly::constant(7));
    CHECK_THROWS_AS(reverse(WeightPoly{{4, 1}}, 3), DegreeBoundTooSmall);
}

TEST_CASE("evaluation")
{
    const WeightPoly b2{{2, 1}, {4, 1}};
    CHECK(eval_f64(b2, 1.0) == 2.0);
    CHECK(eval_f64(WeightPoly{}, 3.5) == 0.0);
    CHECK(eval_exact(b2, 1, 2) == Rational(5, 16));
    CHECK(eval_exact(WeightPoly{}, 3, 7) == 0);
    CHECK(eval_exact(b2, 2, 4) == Rational(5, 16));
    CHECK(eval_exact(WeightPoly{{0, 3}}, 5, 1) == 3);
    CHECK_THROWS_AS(eval_exact(b2, 1, 0), ZeroDenominator);
}

TEST_CASE("json serialization uses decimal-string coefficients")
{
    WeightPoly p{{3, 1}, {5, 2}};
    p.add_term(40, BigInt("123456789012345678901234567890"));
    const auto j = to_json(p);
    CHECK(j.dump() == R"({"terms":[[3,"1"],[5,"2"],[40,"123456789012345678901234567890"]]})");
    CHECK(poly_from_json(j) == p);
}

TEST_CASE("ring axioms on random polynomials")
{
    std::mt19937_64 rng(20261017);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = random_poly(rng);
        const auto b = random_poly(rng);
        const auto c = random_poly(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + WeightPoly{} == a);
        CHECK(a * WeightPoly::constant(1) == a);
        CHECK((a - a).is_zero());
        const auto product = a * b;
        for (const auto& [e, coeff] : product.terms()) CHECK(coeff != 0);
    }
}

TEST_CASE("exact evaluation is a ring homomorphism")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_poly(rng);
        const auto b = random_poly(rng);
        const auto x = random_rational(rng);
        CHECK(eval_exact(a * b, x) == eval_exact(a, x) * eval_exact(b, x));
        CHECK(eval_exact(a + b, x) == eval_exact(a, x) + eval_exact(b, x));
    }
}

TEST_CASE("reverse is an involution for any sufficient bound")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_poly(rng);
        const Exponent d = a.degree().value_or(0) + (rng() % 5);
        CHECK(reverse(reverse(a, d), d) == a);
    }
}
