#include <random>

#include <gtest/gtest.h>

#include "keyform/polyparse.hpp"
#include "keyform/puiseux.hpp"
#include "oracles.hpp"

using namespace keyform;

TEST(ParsePuiseux, SingleTerm) {
    auto phi = parse_puiseux("u^(3/5)");
    EXPECT_EQ(phi.orientation(), Orientation::Local);
    ASSERT_EQ(phi.size(), 1u);
    EXPECT_EQ(phi.coeff(make_rat(3, 5)), 1);
}

TEST(ParsePuiseux, TwoTerms) {
    auto phi = parse_puiseux("u^(3/5) + u^2", Orientation::Local);
    EXPECT_EQ(phi.size(), 2u);
    EXPECT_EQ(phi.coeff(make_rat(3, 5)), 1);
    EXPECT_EQ(phi.coeff(Rat(2)), 1);
}

TEST(ParsePuiseux, DegreeWiseSixTerms) {
    auto psi = parse_puiseux("x^3 + x^2 + x^(5/3) + x + x^(-13/6) + x^(-7/3)");
    EXPECT_EQ(psi.orientation(), Orientation::DegreeWise);
    EXPECT_EQ(psi.size(), 6u);
    EXPECT_EQ(psi.coeff(make_rat(-13, 6)), 1);
    EXPECT_EQ(psi.leading_exponent(), 3);
}

TEST(ParsePuiseux, CoefficientsAndSigns) {
    auto phi = parse_puiseux("-2/3*u^(1/2) + 5*u - u^(7/4)");
    EXPECT_EQ(phi.coeff(make_rat(1, 2)), make_rat(-2, 3));
    EXPECT_EQ(phi.coeff(Rat(1)), 5);
    EXPECT_EQ(phi.coeff(make_rat(7, 4)), -1);
    EXPECT_TRUE(parse_puiseux("0").is_zero());
}

TEST(ParsePuiseux, Errors) {
    try {
        parse_puiseux("u^(3/0)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("zero denominator"), std::string::npos);
    }
    EXPECT_THROW(parse_puiseux("u^(1/2) + u^(2/4)"), ParseError);
    EXPECT_THROW(parse_puiseux("u^(1/2) + x"), ParseError);
    EXPECT_THROW(parse_puiseux("u^(1/2) +"), ParseError);
    EXPECT_THROW(parse_puiseux("u", Orientation::DegreeWise), ParseError);
    try {
        parse_puiseux("u^2 $ u");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
}

TEST(PuiseuxPairs, Examples) {
    auto a = puiseux_pairs(parse_puiseux("u^(3/5)"));
    EXPECT_EQ(to_string(a.pairs), "[(3,5)]");
    EXPECT_EQ(a.polydromy(), 5);
    auto b = puiseux_pairs(parse_puiseux("u^2"));
    EXPECT_TRUE(b.pairs.empty());
    EXPECT_EQ(b.polydromy(), 1);
    auto c = puiseux_pairs(parse_puiseux("x^3 + x^2 + x^(5/3) + x + x^(-13/6) + x^(-7/3)"));
    EXPECT_EQ(to_string(c.pairs), "[(5,3),(-13,2)]");
    EXPECT_EQ(c.polydromy(), 6);
}

TEST(Orientation, Examples) {
    EXPECT_EQ(to_string(local_to_degreewise(parse_puiseux("u^(3/5)"))), "x^(2/5)");
    EXPECT_EQ(to_string(local_to_degreewise(parse_puiseux("u^(3/5) + u^2"))), "x^(2/5) + x^(-1)");
    EXPECT_TRUE(local_to_degreewise(PuiseuxPoly(Orientation::Local)).is_zero());
}

TEST(ParsePairs, Basic) {
    auto p = parse_pairs("[(3,5), (23,2)]");
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[1].q, 23);
    EXPECT_THROW(parse_pairs("[(3,5)"), ParseError);
    EXPECT_THROW(validate_local_pairs({{5, 3}, {4, 2}}), PreconditionError);
    EXPECT_THROW(validate_local_pairs({{2, 4}}), PreconditionError);
}

TEST(ParsePolynomial, Basic) {
    auto f = parse_polynomial("(v - u^2)^5 - u^3", "u", "v");
    EXPECT_EQ(deg_y(f), 5);
    EXPECT_TRUE(is_polynomial(f));
    EXPECT_EQ(to_string(parse_polynomial("y^2 - 9*x^-1*y + 1/2")), "y^2 - 9*y*x^(-1) + 1/2");
    EXPECT_THROW(parse_polynomial("y^-1"), ParseError);
    EXPECT_THROW(parse_polynomial("z"), ParseError);
}

// ---- properties, fixed seed ----------------------------------------------------------------------

class PuiseuxProperty : public ::testing::Test {
protected:
    std::mt19937_64 rng{0x5eed0001};
};

TEST_F(PuiseuxProperty, PrintParseRoundTrip) {
    for (int i = 0; i < 200; ++i) {
        auto phi = oracle::random_curve(rng, oracle::random_pairs(rng, 3));
        EXPECT_EQ(parse_puiseux(to_string(phi)), phi) << to_string(phi);
        auto psi = local_to_degreewise(phi);
        EXPECT_EQ(parse_puiseux(to_string(psi)), psi) << to_string(psi);
    }
}

TEST_F(PuiseuxProperty, OrientationRoundTrip) {
    for (int i = 0; i < 200; ++i) {
        auto phi = oracle::random_curve(rng, oracle::random_pairs(rng, 3));
        EXPECT_EQ(degreewise_to_local(local_to_degreewise(phi)), phi);
        auto psi = local_to_degreewise(phi);
        EXPECT_EQ(local_to_degreewise(degreewise_to_local(psi)), psi);
    }
}

TEST_F(PuiseuxProperty, PairTransform) {
    for (int i = 0; i < 200; ++i) {
        auto pairs = oracle::random_pairs(rng, 3);
        auto phi = oracle::random_curve(rng, pairs);
        ASSERT_EQ(puiseux_pairs(phi).pairs, pairs) << to_string(phi);
        auto dw = puiseux_pairs(local_to_degreewise(phi));
        ASSERT_EQ(dw.size(), pairs.size());
        std::int64_t n = 1;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            n *= pairs[k].p;
            EXPECT_EQ(dw.pairs[k].q, n - pairs[k].q);
            EXPECT_EQ(dw.pairs[k].p, pairs[k].p);
        }
        EXPECT_EQ(pairs_local_to_degreewise(puiseux_pairs(phi)), dw);
    }
}

TEST_F(PuiseuxProperty, PolydromyMatchesDenominators) {
    for (int i = 0; i < 200; ++i) {
        auto phi = oracle::random_curve(rng, oracle::random_pairs(rng, 3));
        std::int64_t n = 1;
        for (const auto& [e, c] : phi.terms()) n = std::lcm(n, to_int64(den(e)));
        EXPECT_EQ(puiseux_pairs(phi).polydromy(), n);
        EXPECT_EQ(phi.polydromy(), n);
    }
}

TEST_F(PuiseuxProperty, LaurentPrintParseRoundTrip) {
    for (int i = 0; i < 200; ++i) {
        auto f = oracle::random_laurent(rng) * oracle::random_laurent(rng);
        EXPECT_EQ(parse_polynomial(to_string(f)), f) << to_string(f);
    }
}
