#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cmbr/quadint.hpp"

using namespace cmbr;

namespace {

QuadInt gauss(long a, long b) { return {a, b, Ring::gaussian}; }
QuadInt eis(long a, long b) { return {a, b, Ring::eisenstein}; }

// d-th power residues mod p, for the solvability oracle.
std::set<Int> dth_powers(const Int& p, int d) {
    std::set<Int> s;
    for (Int x = 0; x < p; ++x) s.insert(powmod(x, d, p));
    return s;
}

Int residue_image(const QuadInt& z, const QuadInt& pi) {
    Int p = pi.norm();
    Int r = mod_floor(-pi.a * invmod(pi.b, p), p);
    return mod_floor(z.a + z.b * r, p);
}

}  // namespace

TEST_CASE("norm is multiplicative") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        long a = long(rng() % 41) - 20, b = long(rng() % 41) - 20;
        long c = long(rng() % 41) - 20, d = long(rng() % 41) - 20;
        for (Ring r : {Ring::gaussian, Ring::eisenstein}) {
            QuadInt x(a, b, r), y(c, d, r);
            CHECK((x * y).norm() == x.norm() * y.norm());
            CHECK(x.norm() >= 0);
        }
    }
}

TEST_CASE("conjugation fixes the norm and is an involution") {
    for (Ring r : {Ring::gaussian, Ring::eisenstein}) {
        QuadInt x(5, -3, r);
        CHECK(x.conj().conj() == x);
        CHECK(x.conj().norm() == x.norm());
        CHECK((x * x.conj()).b == 0);
        CHECK((x * x.conj()).a == x.norm());
    }
}

TEST_CASE("rational prime factorisation") {
    auto f5 = factor_rational_prime(5, Ring::gaussian);
    REQUIRE(f5.kind == PrimeFactor::split);
    CHECK(f5.pi->norm() == 5);

    auto f7 = factor_rational_prime(7, Ring::eisenstein);
    REQUIRE(f7.kind == PrimeFactor::split);
    CHECK(f7.pi->norm() == 7);

    CHECK(factor_rational_prime(2, Ring::eisenstein).kind == PrimeFactor::inert);
    CHECK(factor_rational_prime(3, Ring::gaussian).kind == PrimeFactor::inert);
    CHECK(factor_rational_prime(7, Ring::gaussian).kind == PrimeFactor::inert);

    auto r2 = factor_rational_prime(2, Ring::gaussian);
    REQUIRE(r2.kind == PrimeFactor::ramified);
    CHECK(r2.pi->norm() == 2);
    auto r3 = factor_rational_prime(3, Ring::eisenstein);
    REQUIRE(r3.kind == PrimeFactor::ramified);
    CHECK(r3.pi->norm() == 3);
}

TEST_CASE("primary associates") {
    CHECK(primary_associate(gauss(-1, 2)) == gauss(-1, 2));
    CHECK(primary_associate(gauss(1, 0)) == gauss(1, 0));
    CHECK(primary_associate(eis(1, 0)) == eis(1, 0));

    // all unit multiples of a norm-7 Eisenstein prime normalise to the same
    // primary representative, found among exactly one of the six units
    QuadInt pi7 = eis(3, 1);
    QuadInt prim = primary_associate(pi7);
    CHECK(prim == eis(-2, -3));
    for (const QuadInt& u : units(Ring::eisenstein)) {
        CHECK(primary_associate(u * pi7) == prim);
    }
    // defining congruence and associate property
    CHECK(detail::divisible(prim - eis(1, 0), eis(3, 0)));
    CHECK(prim.norm() == pi7.norm());

    // inputs not coprime to the modulus are rejected
    CHECK_THROWS_AS(primary_associate(gauss(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(primary_associate(eis(1, -1)), std::invalid_argument);
}

TEST_CASE("quartic symbol frozen values") {
    QuadInt pi = gauss(-1, 2);  // primary, norm 5
    CHECK(power_residue_symbol(gauss(1, 0), pi, 4).is_one());
    CHECK(power_residue_symbol(gauss(2, 0), pi, 4) == UnitRoot::make(4, 3));  // -i
    // fourth powers evaluate to 1
    for (long x = 1; x < 5; ++x) {
        QuadInt x4(x * x * x * x, 0, Ring::gaussian);
        CHECK(power_residue_symbol(x4, pi, 4).is_one());
    }
    // 0 iff pi divides the argument
    CHECK(power_residue_symbol(gauss(5, 0), pi, 4).zero);
}

TEST_CASE("symbol multiplicativity, sampled") {
    std::mt19937_64 rng(11);
    auto ps = primes_up_to(300);
    for (auto p : ps) {
        for (Ring ring : {Ring::gaussian, Ring::eisenstein}) {
            int d = ring == Ring::gaussian ? 4 : 6;
            if (p % d != 1) continue;
            auto f = factor_rational_prime(p, ring);
            QuadInt pi = primary_associate(*f.pi);
            for (int t = 0; t < 10; ++t) {
                QuadInt a(long(rng() % p), long(rng() % p), ring);
                QuadInt b(long(rng() % p), long(rng() % p), ring);
                auto sa = power_residue_symbol(a, pi, d);
                auto sb = power_residue_symbol(b, pi, d);
                auto sab = power_residue_symbol(a * b, pi, d);
                CHECK(sab == sa * sb);
            }
        }
    }
}

TEST_CASE("sextic symbol consistency: squares give the cubic symbol, cubes the quadratic character") {
    std::mt19937_64 rng(13);
    for (auto p : primes_up_to(400)) {
        if (p % 3 != 1 || p == 3) continue;
        auto f = factor_rational_prime(p, Ring::eisenstein);
        QuadInt pi = primary_associate(*f.pi);
        for (int t = 0; t < 8; ++t) {
            QuadInt a(long(rng() % p), long(rng() % p), Ring::eisenstein);
            if (residue_image(a, pi) == 0) continue;
            auto s6 = power_residue_symbol(a, pi, 6);
            auto s3 = power_residue_symbol(a, pi, 3);
            CHECK(s6.pow(2).as_cubic() == s3);
            // cube = quadratic character a^((N-1)/2)
            Int chi = powmod(residue_image(a, pi), (Int(p) - 1) / 2, p);
            bool plus = (chi == 1);
            CHECK(s6.pow(3).as_quadratic() == UnitRoot::make(2, plus ? 0 : 1));
        }
    }
}

TEST_CASE("symbol = 1 iff d-th power residue (exhaustive to norm 1000)") {
    std::mt19937_64 rng(17);
    for (auto p : primes_up_to(1000)) {
        for (Ring ring : {Ring::gaussian, Ring::eisenstein}) {
            int d = ring == Ring::gaussian ? 4 : 3;
            if (p % d != 1) continue;
            auto f = factor_rational_prime(p, ring);
            QuadInt pi = primary_associate(*f.pi);
            auto powers = dth_powers(p, d);
            for (int t = 0; t < 12; ++t) {
                QuadInt a(long(rng() % p), long(rng() % p), ring);
                Int img = residue_image(a, pi);
                if (img == 0) continue;
                bool solvable = powers.count(img) > 0;
                CHECK(power_residue_symbol(a, pi, d).is_one() == solvable);
            }
        }
    }
}

TEST_CASE("cubic reciprocity instance used for m(2): (2/pi)_3 = pi mod 2 and (4/pi)_6 = pi mod 2") {
    for (auto p : primes_up_to(10000)) {
        if (p % 3 != 1) continue;
        auto f = factor_rational_prime(p, Ring::eisenstein);
        QuadInt pi = primary_associate(*f.pi);
        auto s3 = power_residue_symbol(eis(2, 0), pi, 3);
        auto s6 = power_residue_symbol(eis(4, 0), pi, 6);
        CHECK(s6.as_cubic() == s3);  // (4/pi)_6 = (2/pi)_6^2 = (2/pi)_3
        // both congruent to pi mod 2
        QuadInt v3 = s3.as_quadint(Ring::eisenstein);
        QuadInt v6 = s6.as_quadint(Ring::eisenstein);
        for (const QuadInt& v : {v3, v6}) {
            QuadInt diff = v - pi;
            CHECK(mpz_even_p(diff.a.get_mpz_t()));
            CHECK(mpz_even_p(diff.b.get_mpz_t()));
        }
    }
}

TEST_CASE("suborder membership") {
    CHECK(in_suborder(eis(3, 0), 3, 5));
    CHECK(in_suborder(eis(1, 3), 3, 1));
    CHECK_FALSE(in_suborder(eis(1, 3), 3, 2));
    CHECK(in_suborder(gauss(7, 4), 2, 2));
    CHECK_FALSE(in_suborder(gauss(7, 4), 2, 3));
    CHECK(in_suborder(gauss(0, 0), 2, 10));
    CHECK(in_suborder(eis(5, 7), 11, 0));
}

TEST_CASE("unit root conversions") {
    // zeta_6 powers as Eisenstein integers multiply correctly
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            auto lhs = UnitRoot::make(6, i).as_quadint(Ring::eisenstein) *
                       UnitRoot::make(6, j).as_quadint(Ring::eisenstein);
            auto rhs = UnitRoot::make(6, i + j).as_quadint(Ring::eisenstein);
            CHECK(lhs == rhs);
        }
    }
    CHECK(UnitRoot::make(4, 1).as_quadint(Ring::gaussian) == gauss(0, 1));
    CHECK(UnitRoot::make(6, 3).as_quadint(Ring::eisenstein) == eis(-1, 0));
    CHECK(UnitRoot::make(6, 2).as_quadint(Ring::eisenstein) == eis(0, 1));
    CHECK(UnitRoot::make(6, 1).is_pm_one() == false);
    CHECK(UnitRoot::make(6, 3).is_pm_one() == true);
    CHECK(UnitRoot::make(4, 2).is_pm_one() == true);
}
