#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "heis/arith.hpp"
#include "oracles.hpp"

using namespace heis;
using namespace heis::arith;

TEST(Kronecker, Examples)
{
    EXPECT_EQ(kronecker(5, 1), 1);
    EXPECT_EQ(kronecker(2, 7), 1);
    EXPECT_EQ(kronecker(3, 5), -1);
}

TEST(Kronecker, MatchesFactorisationOracle)
{
    for (i64 a = -40; a <= 40; ++a)
        for (i64 n = -40; n <= 40; ++n)
            ASSERT_EQ(kronecker(a, n), oracle::kronecker(a, n)) << a << " " << n;
}

TEST(Kronecker, QuadraticReciprocityAgainstEuler)
{
    for (i64 p = 3; p < 100; p += 2) {
        if (!oracle::is_prime(p))
            continue;
        for (i64 q = 3; q < 100; q += 2) {
            if (!oracle::is_prime(q) || q == p)
                continue;
            ASSERT_EQ(kronecker(q, p), oracle::legendre(q, p));
            int sign = ((p - 1) / 2 * ((q - 1) / 2)) % 2 == 0 ? 1 : -1;
            ASSERT_EQ(kronecker(p, q) * kronecker(q, p), sign);
        }
    }
}

TEST(Kronecker, MultiplicativeInNumerator)
{
    for (i64 n = 1; n < 60; n += 2)
        for (i64 a = -15; a < 15; ++a)
            for (i64 b = -15; b < 15; ++b)
                ASSERT_EQ(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
}

TEST(Characters, CountsAndPrincipal)
{
    for (i64 D = 1; D <= 30; ++D) {
        auto cs = enumerate_characters(D);
        ASSERT_EQ(static_cast<i64>(cs.size()), oracle::phi(D));
        EXPECT_TRUE(cs.front().is_principal());
        for (std::size_t a = 0; a < cs.size(); ++a)
            for (std::size_t b = a + 1; b < cs.size(); ++b)
                EXPECT_FALSE(cs[a] == cs[b]);
    }
}

TEST(Characters, ModulusOneIsTrivial)
{
    auto cs = enumerate_characters(1);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0](0), cplx(1.0));
    EXPECT_EQ(cs[0](7), cplx(1.0));
}

TEST(Characters, ModFiveHasOrderFourGenerator)
{
    auto cs = enumerate_characters(5);
    ASSERT_EQ(cs.size(), 4u);
    int primitive_i = 0;
    for (auto& c : cs) {
        cplx v = c(2);
        if (std::abs(v - cplx(0, 1)) < 1e-15 || std::abs(v - cplx(0, -1)) < 1e-15) {
            ++primitive_i;
            EXPECT_EQ(c.order(), 4);
        }
    }
    EXPECT_EQ(primitive_i, 2);
}

TEST(Characters, ModTwelveAllReal)
{
    auto cs = enumerate_characters(12);
    ASSERT_EQ(cs.size(), 4u);
    for (auto& c : cs)
        for (i64 r : {1, 5, 7, 11})
            EXPECT_NEAR(c(r).imag(), 0.0, 1e-15);
}

TEST(Characters, MultiplicativeRootsOfUnityAndConductor)
{
    for (i64 D = 1; D <= 24; ++D)
        for (auto& c : enumerate_characters(D)) {
            EXPECT_EQ(D % c.conductor(), 0);
            EXPECT_EQ(c(1), cplx(1.0));
            for (i64 a = 0; a < D; ++a) {
                if (std::gcd(a, D) != 1) {
                    EXPECT_EQ(c(a), cplx(0.0));
                    continue;
                }
                EXPECT_NEAR(std::abs(c(a)), 1.0, 1e-15);
                for (i64 b = 0; b < D; ++b)
                    if (std::gcd(b, D) == 1)
                        ASSERT_LT(std::abs(c(a * b) - c(a) * c(b)), 1e-13);
            }
        }
}

TEST(Characters, ConductorOfPrimitive)
{
    for (i64 p : {3, 5, 7, 11})
        for (auto& c : enumerate_characters(p))
            EXPECT_EQ(c.conductor(), c.is_principal() ? 1 : p);
}

TEST(Characters, Orthogonality)
{
    for (i64 D = 1; D <= 24; ++D) {
        auto cs = enumerate_characters(D);
        for (std::size_t a = 0; a < cs.size(); ++a)
            for (std::size_t b = 0; b < cs.size(); ++b) {
                cplx s = 0.0;
                for (i64 m = 0; m < D; ++m)
                    s += cs[a](m) * std::conj(cs[b](m));
                double expect = a == b ? static_cast<double>(oracle::phi(D)) : 0.0;
                ASSERT_LT(std::abs(s - expect), 1e-12) << D << " " << a << " " << b;
            }
    }
}

TEST(Characters, JsonRoundTrip)
{
    for (auto& c : enumerate_characters(15)) {
        auto j = to_json(c);
        EXPECT_EQ(j["modulus"], 15);
        EXPECT_TRUE(character_from_json(j) == c);
    }
}

TEST(GaussSum, Examples)
{
    for (i64 D : {1, 4, 9, 10}) {
        auto p = DirichletCharacter::principal(D);
        EXPECT_LT(std::abs(gauss_sum(p, 0) - static_cast<double>(oracle::phi(D))), 1e-12);
    }
    auto cs = enumerate_characters(3);
    cplx expect = std::polar(1.0, 2 * pi / 3) - std::polar(1.0, 4 * pi / 3);
    EXPECT_LT(std::abs(gauss_sum(cs[1], 1) - expect), 1e-14);
}

TEST(GaussSum, MatchesDirectSummation)
{
    for (i64 D = 1; D <= 20; ++D)
        for (auto& c : enumerate_characters(D))
            for (i64 n = -3; n <= 2 * D; ++n) {
                cplx ref = oracle::gauss_sum([&](i64 m) { return c(m); }, D, n);
                ASSERT_LT(std::abs(gauss_sum(c, n) - ref), 1e-12);
            }
}

TEST(GaussSum, PrimitiveModulusSqrtD)
{
    for (i64 D : {3, 5, 7, 11})
        for (auto& c : enumerate_characters(D)) {
            if (!c.is_primitive())
                continue;
            for (i64 n = 1; n < 3 * D; ++n)
                if (std::gcd(n, D) == 1)
                    EXPECT_NEAR(std::abs(gauss_sum(c, n)), std::sqrt(double(D)), 1e-12);
        }
}

TEST(GaussSum, Separability)
{
    for (i64 D : {3, 5, 7, 11})
        for (auto& c : enumerate_characters(D)) {
            if (!c.is_primitive())
                continue;
            cplx t1 = gauss_sum(c, 1);
            for (i64 n = -D; n <= 2 * D; ++n)
                EXPECT_LT(std::abs(gauss_sum(c, n) - std::conj(c(n)) * t1), 1e-12) << D << " " << n;
        }
}

TEST(GaussSum, PrimitiveModulusInDivisorSquareRoots)
{
    for (i64 D = 1; D <= 15; ++D)
        for (auto& c : enumerate_characters(D)) {
            if (!c.is_primitive())
                continue;
            for (i64 n = 0; n < D; ++n) {
                double v = std::abs(gauss_sum(c, n));
                bool ok = v < 1e-10;
                for (i64 d = 1; d <= D && !ok; ++d)
                    ok = D % d == 0 && std::abs(v - std::sqrt(double(d))) < 1e-10;
                EXPECT_TRUE(ok) << "D=" << D << " n=" << n << " |tau|=" << v;
            }
        }
}

// Imprimitive characters leave the set {0} U {sqrt d : d | D}.
TEST(GaussSum, ImprimitiveCounterexample)
{
    for (auto& c : enumerate_characters(9)) {
        if (c.conductor() != 3)
            continue;
        cplx ref = oracle::gauss_sum([&](i64 m) { return c(m); }, 9, 3);
        EXPECT_NEAR(std::norm(gauss_sum(c, 3)), 27.0, 1e-10);
        EXPECT_NEAR(std::norm(ref), 27.0, 1e-10);
    }
}

TEST(Epsilon, Table)
{
    EXPECT_EQ(epsilon_factor(1, WeightClass::Half), cplx(1.0));
    EXPECT_EQ(epsilon_factor(3, WeightClass::Half), cplx(0, -1));
    EXPECT_EQ(epsilon_factor(7, WeightClass::ThreeHalves), cplx(0, 1));
    EXPECT_EQ(epsilon_factor(5, WeightClass::ThreeHalves), cplx(1.0));
    EXPECT_THROW(epsilon_factor(4, WeightClass::Half), DomainError);
}

TEST(DualCharacter, Involution)
{
    for (auto& c : enumerate_characters(5))
        EXPECT_TRUE(dual_character(dual_character(c)) == c);
}

TEST(DualCharacter, Examples)
{
    auto c3 = enumerate_characters(3);
    EXPECT_TRUE(dual_character(c3[1]).is_principal());
    auto d = dual_character(DirichletCharacter::principal(5));
    for (i64 r = 1; r < 5; ++r)
        EXPECT_NEAR(std::abs(d(r) - double(oracle::legendre(r, 5))), 0.0, 1e-15);
    EXPECT_THROW(dual_character(DirichletCharacter::principal(4)), DomainError);
}
