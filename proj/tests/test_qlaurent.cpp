#include <doctest.h>

#include <random>

#include "webskein/lpoly.hpp"
#include "webskein/modpoly.hpp"

using namespace webskein;

namespace {

LPoly random_poly(std::mt19937& rng, int span = 6, int coeff = 9) {
    std::map<int, mpz_class> t;
    int terms = 1 + int(rng() % 5);
    for (int i = 0; i < terms; ++i) t[int(rng() % (2 * span + 1)) - span] += long(rng() % (2 * coeff + 1)) - coeff;
    return LPoly::from_terms(t);
}

LPoly lift(const ModPoly& f) {
    std::map<int, mpz_class> t;
    for (auto& [e, c] : f.terms()) t[e] = c;
    return LPoly::from_terms(t);
}

long binom(int m, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
    return r;
}

// [m] straight from (v^m - v^-m)/(v - v^-1)
LPoly qint_by_hand(int m) {
    LPoly r;
    for (int k = 0; k < m; ++k) r += vpow(m - 1 - 2 * k);
    return r;
}

}  // namespace

TEST_CASE("qint small values") {
    CHECK(qint(0).is_zero());
    CHECK(qint(1) == LPoly(1));
    CHECK(qint(2) == vpow(1) + vpow(-1));
    CHECK(qint(3) == vpow(2) + LPoly(1) + vpow(-2));
    for (int m = 0; m <= 12; ++m) {
        CHECK(qint(m) == qint_by_hand(m));
        CHECK(qint(m).at_one() == m);
        // (v - v^-1)[m] = v^m - v^-m
        CHECK((vpow(1) - vpow(-1)) * qint(m) == vpow(m) - vpow(-m));
    }
}

TEST_CASE("qbinom examples and boundary convention") {
    CHECK(qbinom(4, 0) == LPoly(1));
    CHECK(qbinom(4, 2) == vpow(4) + vpow(2) + LPoly(2) + vpow(-2) + vpow(-4));
    CHECK(qbinom(0, 2).is_zero());
    CHECK(qbinom(0, 0) == LPoly(1));
    CHECK(qbinom(3, -1).is_zero());
    CHECK(qbinom(3, 4).is_zero());
    CHECK(qbinom(-2, 1).is_zero());
}

TEST_CASE("qbinom properties up to 12") {
    for (int m = 0; m <= 12; ++m)
        for (int k = 0; k <= m; ++k) {
            auto b = qbinom(m, k);
            CHECK(b.at_one() == binom(m, k));
            CHECK(b == qbinom(m, m - k));
            for (auto& [e, c] : b.terms()) CHECK(c > 0);
            CHECK(qconj(b) == b);
            // factorial definition
            CHECK(b * qfactorial(k) * qfactorial(m - k) == qfactorial(m));
            if (m > 0) {
                CHECK(b == vpow(-k) * qbinom(m - 1, k) + vpow(m - k) * qbinom(m - 1, k - 1));
                CHECK(b == vpow(k) * qbinom(m - 1, k) + vpow(k - m) * qbinom(m - 1, k - 1));
            }
        }
}

TEST_CASE("qconj is an involutive ring homomorphism") {
    CHECK(qconj(LPoly(1)) == LPoly(1));
    CHECK(qconj(vpow(3) + LPoly(2) * vpow(-1)) == vpow(-3) + LPoly(2) * vpow(1));
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        auto f = random_poly(rng), g = random_poly(rng);
        CHECK(qconj(qconj(f)) == f);
        CHECK(qconj(f * g) == qconj(f) * qconj(g));
        CHECK(qconj(f + g) == qconj(f) + qconj(g));
    }
}

TEST_CASE("arithmetic is exact with large coefficients") {
    LPoly big = LPoly(mpz_class("123456789012345678901234567890")) * vpow(3);
    LPoly sq = big * big;
    CHECK(sq.coeff(6) == mpz_class("15241578753238836750495351562536198787501905199875019052100"));
    CHECK((sq - sq).is_zero());
    CHECK(qint(5).pow(3) == qint(5) * qint(5) * qint(5));
}

TEST_CASE("text and JSON renderings") {
    CHECK(LPoly().to_string() == "0");
    CHECK(LPoly(1).to_string() == "1");
    CHECK(qbinom(4, 2).to_string() == "q^2 + q + 2 + q^{-1} + q^{-2}");
    LPoly f = vpow(4) - vpow(1) + LPoly(3) - LPoly(2) * vpow(-2);
    CHECK(f.to_string() == "q^2 - q^{1/2} + 3 - 2q^{-1}");
    CHECK(f.to_json().dump() == R"([[4,"1"],[1,"-1"],[0,"3"],[-2,"-2"]])");
    std::mt19937 rng(3);
    for (int t = 0; t < 100; ++t) {
        auto g = random_poly(rng) * LPoly(mpz_class("99999999999999999999"));
        CHECK(LPoly::from_json(g.to_json()) == g);
    }
}

TEST_CASE("reduce_mod_pqp") {
    for (long p : {2L, 3L, 5L, 7L, 4L}) {
        CHECK(reduce_mod_pqp(vpow(int(2 * p)) - LPoly(1), p).is_zero());
        CHECK(reduce_mod_pqp(LPoly(p) * vpow(5), p).is_zero());
        CHECK(reduce_mod_pqp(vpow(int(2 * p + 1)), p) == ModPoly(p, {{1, 1}}));
    }
    std::mt19937 rng(11);
    for (long p : {2L, 3L, 7L})
        for (int t = 0; t < 100; ++t) {
            auto f = random_poly(rng, 20), g = random_poly(rng, 20);
            auto rf = reduce_mod_pqp(f, p), rg = reduce_mod_pqp(g, p);
            CHECK(reduce_mod_pqp(f + g, p) == rf + rg);
            // the product of residues still has to wrap exponents
            CHECK(reduce_mod_pqp(f * g, p) == reduce_mod_pqp(lift(rf * rg), p));
        }
}

TEST_CASE("gcd_fp") {
    CHECK(gcd_fp({ModPoly(5), ModPoly(5)}, 5).is_zero());
    CHECK(gcd_fp({ModPoly(5, {{2, 1}, {0, 4}}), ModPoly(5, {{3, 1}, {0, 4}})}, 5) == ModPoly(5, {{1, 1}, {0, 4}}));
    // single generator gives its monic associate, v-power cleared
    CHECK(gcd_fp({ModPoly(7, {{5, 3}, {3, 6}})}, 7) == ModPoly(7, {{2, 1}, {0, 2}}));
    CHECK_THROWS_WITH(gcd_fp({ModPoly(6, {{1, 1}})}, 6), "composite modulus: gcd undefined");
}

TEST_CASE("ideal membership") {
    for (int n = 1; n <= 5; ++n)
        for (long p : {2L, 3L, 5L, 7L}) {
            auto spec = IdealSpec::In(n, p);
            CHECK(in_ideal(LPoly(), spec));
            CHECK(in_ideal(LPoly(p), spec));
            for (int i = 1; i <= n / 2; ++i) CHECK(in_ideal(qbinom(n, i).pow(unsigned(p)) - qbinom(n, i), spec));
        }
    CHECK_FALSE(in_ideal(LPoly(1), IdealSpec::In(2, 3)));
    // the generator of I_2 mod 3 is a non-unit
    auto g = ModPoly::from_lpoly(qint(2).pow(3) - qint(2), 3);
    CHECK(gcd_fp({g}, 3).degree() > 0);
    CHECK_THROWS_WITH(in_ideal(LPoly(1), IdealSpec::In(2, 4)), "membership test requires prime period");
    for (long p : {2L, 3L, 4L, 7L}) {
        CHECK(in_ideal(vpow(int(2 * p)) - LPoly(1), IdealSpec::PQp(p)));
        CHECK(in_ideal(LPoly(p), IdealSpec::PQp(p)));
        CHECK_FALSE(in_ideal(LPoly(1), IdealSpec::PQp(p)));
    }
}

TEST_CASE("ideal axioms by sampling") {
    std::mt19937 rng(5);
    for (int n = 2; n <= 4; ++n)
        for (long p : {2L, 3L, 5L}) {
            for (auto spec : {IdealSpec::In(n, p), IdealSpec::PQp(p)}) {
                auto gens = std::vector<LPoly>{LPoly(p)};
                if (spec.kind == IdealSpec::Kind::In)
                    for (int i = 1; i <= n / 2; ++i) gens.push_back(qbinom(n, i).pow(unsigned(p)) - qbinom(n, i));
                else
                    gens.push_back(vpow(int(2 * p)) - LPoly(1));
                for (int t = 0; t < 20; ++t) {
                    LPoly f, g;
                    for (auto& x : gens) {
                        f += random_poly(rng, 4, 3) * x;
                        g += random_poly(rng, 4, 3) * x;
                    }
                    REQUIRE(in_ideal(f, spec));
                    REQUIRE(in_ideal(g, spec));
                    CHECK(in_ideal(f + g, spec));
                    CHECK(in_ideal(random_poly(rng) * f, spec));
                    // residues are additive
                    auto h = random_poly(rng);
                    CHECK(residue(h + f, spec) == residue(h, spec));
                }
            }
        }
}
