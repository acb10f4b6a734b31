#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cmbr/localpadic.hpp"

using namespace cmbr;

namespace {

Eis eis(long a, long b) { return {Rat(a), Rat(b)}; }

mext::MPoly mpoly_mul(const mext::MPoly& x, const mext::MPoly& y) {
    mext::MPoly out(x.size() + y.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            out[i + j] = mext::add(out[i + j], mext::mul(x[i], y[j]));
    return out;
}

// ---- complex arithmetic over GMP floats, test-only -------------------------

struct Cx {
    mpf_class re{0, 512}, im{0, 512};
};
Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Cx operator/(const Cx& a, const Cx& b) {
    mpf_class n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
mpf_class cx_abs(const Cx& a) {
    mpf_class n = a.re * a.re + a.im * a.im, r(0, 512);
    mpf_sqrt(r.get_mpf_t(), n.get_mpf_t());
    return r;
}
Cx cx_sqrt(const Cx& a) {
    mpf_class r = cx_abs(a);
    mpf_class u2 = (r + a.re) / 2, v2 = (r - a.re) / 2;
    if (u2 < 0) u2 = 0;  // guard rounding for nearly-real arguments
    if (v2 < 0) v2 = 0;
    mpf_class u(0, 512), v(0, 512);
    mpf_sqrt(u.get_mpf_t(), u2.get_mpf_t());
    mpf_sqrt(v.get_mpf_t(), v2.get_mpf_t());
    if (a.im < 0) v = -v;
    return {u, v};
}
Cx cx(long v) { return {mpf_class(v, 512), mpf_class(0, 512)}; }

// numeric group law on y^2 = x^3 + 54
struct CPt {
    Cx x, y;
};
CPt cx_add(const CPt& p, const CPt& q, bool dbl) {
    Cx lambda = dbl ? (cx(3) * p.x * p.x) / (cx(2) * p.y) : (q.y - p.y) / (q.x - p.x);
    Cx x3 = lambda * lambda - p.x - q.x;
    Cx y3 = lambda * (p.x - x3) - p.y;
    return {x3, y3};
}
CPt cx_triple(const CPt& p) { return cx_add(cx_add(p, p, true), p, false); }

}  // namespace

TEST_CASE("Eisenstein valuations") {
    CHECK(v_pi(eis(3, 0)) == 2);
    CHECK(v_pi(eis(1, -1)) == 1);   // 1 - zeta
    CHECK(v_pi(eis(3, 1)) == 0);    // zeta + 3 has norm 7
    CHECK(v_pi(eis(0, 1)) == 0);    // unit
    CHECK(v_pi(eis(9, 0)) == 4);
    CHECK(v_pi(Eis{Rat(1, 3), Rat(-1, 3)}) == -1);  // (1-zeta)/3
    CHECK(v_pi(Eis{}) == kValInfinity);
    // multiplicativity and ultrametric inequality, sampled
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        Eis x{Rat(long(rng() % 19) - 9), Rat(long(rng() % 19) - 9)};
        Eis y{Rat(long(rng() % 19) - 9), Rat(long(rng() % 19) - 9)};
        if (x.is_zero() || y.is_zero()) continue;
        CHECK(v_pi(x * y) == v_pi(x) + v_pi(y));
        if (!(x + y).is_zero()) CHECK(v_pi(x + y) >= std::min(v_pi(x), v_pi(y)));
    }
}

TEST_CASE("residues in F_3") {
    CHECK(residue_f3(eis(1, 0)) == 1);
    CHECK(residue_f3(eis(0, 1)) == 1);   // zeta = 1 mod pi
    CHECK(residue_f3(eis(1, 1)) == 2);
    CHECK(residue_f3(eis(1, -1)) == 0);  // pi itself
    CHECK(residue_f3(Eis{Rat(1, 2), Rat(0)}) == 2);  // 1/2 = 2 mod 3
    CHECK_THROWS_AS(residue_f3(Eis{Rat(1, 3), Rat(0)}), std::invalid_argument);
}

TEST_CASE("division polynomial displays") {
    CHECK(g_division_poly(eis(3, 0)) == std::vector<Eis>{eis(216, 0), Eis{}, eis(0, 9), eis(1, 0)});
    CHECK(g_division_poly(eis(4, 0)) == std::vector<Eis>{eis(216, 0), Eis{}, eis(0, 12), eis(1, 0)});
    CHECK(g_division_poly(Eis{}) == std::vector<Eis>{eis(216, 0), Eis{}, Eis{}, eis(1, 0)});

    // h_P and h_Q, the scaled models
    auto hP = scaled_division_cubic(eis(3, 0), true);
    CHECK(hP == std::vector<Eis>{eis(9, 3), eis(3, 6), eis(3, 3), eis(1, 0)});
    auto hQ = scaled_division_cubic(eis(4, 0), false);
    CHECK(hQ == std::vector<Eis>{eis(8, 0), Eis{}, eis(0, 4), eis(1, 0)});
}

TEST_CASE("f division polynomial: frozen coefficients") {
    auto f = f_division_poly(3);
    REQUIRE(f.size() == 10);
    CHECK(f[9] == 1);
    CHECK(f[0] == Rat(Int(10077696)));  // 2^9 3^9
    CHECK(f[8] == -27);                 // -9 x_T with x_T = 3
    CHECK(f[7] == 0);
    // the t^6 coefficient: 3*216 - 5832
    CHECK(f[6] == -5184);
}

TEST_CASE("product of conjugate division cubics over the roots of g_P equals f_P") {
    // prod_{s: g_{x_T}(s)=0} (t^3 + 3 zeta^2 s t^2 + 216)
    //   = b0^3 - 3 zeta x_T b0^2 b1 - 216 b1^3,  b0 = t^3+216, b1 = 3 zeta^2 t^2,
    // where the zeta powers collapse to rationals.
    using namespace polydet;
    for (long xt : {3L, 4L, 7L, -5L}) {
        std::vector<Eis> b0{eis(216, 0), Eis{}, Eis{}, eis(1, 0)};
        std::vector<Eis> b1{Eis{}, Eis{}, Rat(3) * Eis::zeta2()};
        auto b0sq = mul(b0, b0);
        auto term1 = mul(b0sq, b0);
        auto term2 = scale(mul(b0sq, b1), Rat(3) * (Eis::zeta() * Eis(Rat(xt))));
        auto term3 = scale(mul(mul(b1, b1), b1), Eis(Rat(216)));
        auto prod = sub(sub(term1, term2), term3);
        auto f = f_division_poly(Rat(xt));
        REQUIRE(prod.size() == f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(prod[i].b == 0);  // the product is rational
            CHECK(prod[i].a == f[i]);
        }
    }
}

TEST_CASE("newton polygons") {
    auto npP = newton_polygon(mext::modulus());
    REQUIRE(npP.slopes.size() == 1);
    CHECK(npP.slopes[0].root_valuation == Rat(2, 3));
    CHECK(npP.slopes[0].multiplicity == 3);

    // u^3 + 216: single slope, root valuation 2 (in v_pi units: 6/3)
    std::vector<Eis> p1{eis(216, 0), Eis{}, Eis{}, eis(1, 0)};
    auto np1 = newton_polygon(p1);
    REQUIRE(np1.slopes.size() == 1);
    CHECK(np1.slopes[0].root_valuation == Rat(2));
    CHECK(np1.slopes[0].multiplicity == 3);

    // u^3 + 1: slope 0
    std::vector<Eis> p2{eis(1, 0), Eis{}, Eis{}, eis(1, 0)};
    auto np2 = newton_polygon(p2);
    REQUIRE(np2.slopes.size() == 1);
    CHECK(np2.slopes[0].root_valuation == Rat(0));

    // mixed slopes: (u+1)^3 + 8 after the shift of the degenerate model
    auto h = scaled_division_cubic(Eis{}, true);
    auto np3 = newton_polygon(h);
    REQUIRE(np3.slopes.size() == 2);
    CHECK(np3.slopes[0].multiplicity + np3.slopes[1].multiplicity == 3);
    // slope multiplicities sum to the degree; total rise = v(const) - v(lead)
    Rat rise = 0;
    for (auto& s : np3.slopes) rise += s.root_valuation * s.multiplicity;
    CHECK(rise == Rat(v_pi(h[0])));
}

TEST_CASE("newton polygon properties on random polynomials") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Eis> p;
        int deg = 2 + int(rng() % 5);
        for (int i = 0; i <= deg; ++i)
            p.push_back(Eis{Rat(long(rng() % 25) - 12), Rat(long(rng() % 25) - 12)});
        if (p[0].is_zero()) p[0] = Eis{Rat(1), Rat(0)};
        if (p.back().is_zero()) p.back() = Eis{Rat(1), Rat(0)};
        auto np = newton_polygon(p);
        int total_mult = 0;
        Rat rise = 0;
        for (auto& s : np.slopes) {
            total_mult += s.multiplicity;
            rise += s.root_valuation * s.multiplicity;
        }
        CHECK(total_mult == deg);
        CHECK(rise == Rat(v_pi(p[0]) - v_pi(p.back())));
        // slopes weakly increasing means root valuations weakly decreasing
        for (std::size_t i = 0; i + 1 < np.slopes.size(); ++i)
            CHECK(np.slopes[i].root_valuation > np.slopes[i + 1].root_valuation);
    }
}

TEST_CASE("division cubics do not degenerate onto the 3-torsion fibre") {
    // the roots of t^3 + 216 are the 3-torsion x-coordinates -6 zeta^k; for
    // the generators' x-coordinates the division cubic must avoid them
    for (long xt : {3L, 4L}) {
        auto g = g_division_poly(Eis{Rat(xt), Rat(0)});
        for (int k = 0; k < 3; ++k) {
            Eis root = Rat(-6) * (k == 0 ? Eis{Rat(1), Rat(0)}
                                         : (k == 1 ? Eis::zeta() : Eis::zeta2()));
            CHECK_FALSE(polydet::eval(g, root).is_zero());
        }
    }
    // x_T = 0 is exactly the degenerate case
    auto g0 = g_division_poly(Eis{});
    CHECK(polydet::eval(g0, Rat(-6) * Eis::zeta()).is_zero());
}

TEST_CASE("residue cubic irreducibility") {
    auto hQ = scaled_division_cubic(eis(4, 0), false);
    CHECK(residue_cubic_irreducible(hQ));  // u^3 + u^2 - 1 over F_3
    // u^3 - u has roots
    std::vector<Eis> p{Eis{}, eis(-1, 0), Eis{}, eis(1, 0)};
    CHECK_FALSE(residue_cubic_irreducible(p));
    // u^3 + u^2 + u + 1 has the root u = -1
    std::vector<Eis> q{eis(1, 0), eis(1, 0), eis(1, 0), eis(1, 0)};
    CHECK_FALSE(residue_cubic_irreducible(q));
    std::vector<Eis> bad{Eis{Rat(1, 3), Rat(0)}, Eis{}, Eis{}, eis(1, 0)};
    CHECK_THROWS_AS(residue_cubic_irreducible(bad), std::invalid_argument);
}

TEST_CASE("ramification verdicts") {
    auto rP = ramification_report(3);
    CHECK(rP.verdict == RamificationReport::Verdict::ramified);
    CHECK_FALSE(rP.degenerate);

    auto rQ = ramification_report(4);
    CHECK(rQ.verdict == RamificationReport::Verdict::unramified);

    auto r0 = ramification_report(0);
    CHECK(r0.degenerate);
    CHECK(r0.verdict == RamificationReport::Verdict::ramified);
}

TEST_CASE("arithmetic in the ramified cubic extension") {
    using namespace mext;
    MElem u;
    u.c[1] = eis(1, 0);
    CHECK(val(u) == 2);
    CHECK(val(MElem(Rat(3))) == 6);
    CHECK(val(MElem(eis(1, -1))) == 3);
    MElem piM = uniformizer();
    CHECK(val(piM) == 1);
    CHECK(mul(piM, inverse(piM)) == MElem(Rat(1)));
    CHECK(mul(u, inverse(u)) == MElem(Rat(1)));
    // u satisfies h_P: u^3 + 3(1+z)u^2 + 3(1+2z)u + (9+3z) = 0
    MElem u3 = mul(u, mul(u, u));
    MElem expr = add(u3, add(mul(MElem(Rat(3) * eis(1, 1)), mul(u, u)),
                             add(mul(MElem(Rat(3) * eis(1, 2)), u), MElem(eis(9, 3)))));
    CHECK(expr.is_zero());
    // valuation is additive on products
    std::mt19937_64 rng(37);
    for (int i = 0; i < 60; ++i) {
        MElem x, y;
        for (int j = 0; j < 3; ++j) {
            x.c[j] = Eis{Rat(long(rng() % 7) - 3), Rat(long(rng() % 7) - 3)};
            y.c[j] = Eis{Rat(long(rng() % 7) - 3), Rat(long(rng() % 7) - 3)};
        }
        if (x.is_zero() || y.is_zero()) continue;
        CHECK(val(mul(x, y)) == val(x) + val(y));
    }
}

TEST_CASE("root search in M: positive and negative controls") {
    using namespace mext;
    MElem u;
    u.c[1] = eis(1, 0);
    // (t - u)(t - 1)(t - 2) has roots in M
    MPoly lin1{MElem(Rat(0)), MElem(Rat(1))};
    lin1[0] = sub(MElem(), u);
    MPoly lin2{MElem(Rat(-1)), MElem(Rat(1))};
    MPoly lin3{MElem(Rat(-2)), MElem(Rat(1))};
    auto G = mpoly_mul(mpoly_mul(lin1, lin2), lin3);
    CHECK(has_root_in_M(G, 64));

    // t^2 - zeta has the root -zeta^2 in F already
    MPoly G2{MElem(Eis{Rat(0), Rat(-1)}), MElem(), MElem(Rat(1))};
    CHECK(has_root_in_M(G2, 64));

    // t^3 - u: roots would need valuation 2/3 in v_M, impossible
    MPoly G3{sub(MElem(), u), MElem(), MElem(), MElem(Rat(1))};
    CHECK_FALSE(has_root_in_M(G3, 64));

    // t^2 - (1 - zeta): roots would need valuation 3/2
    MPoly G4{MElem(Eis{Rat(-1), Rat(1)}), MElem(), MElem(Rat(1))};
    CHECK_FALSE(has_root_in_M(G4, 64));

    // t^2 + t + 1 = 0: would adjoin zeta_9? no -- roots are the primitive
    // cube roots of unity, already in F
    MPoly G5{MElem(Rat(1)), MElem(Rat(1)), MElem(Rat(1))};
    CHECK(has_root_in_M(G5, 64));
}

TEST_CASE("two-step irreducibility certificate for f_P") {
    auto rep = fp_irreducible_two_step();
    CHECK(rep.step1_ramified_cubic);
    CHECK(rep.step2_no_root);
    CHECK(rep.certified);
}

TEST_CASE("prop-3 certificate") {
    auto cert = prop3_certificate(true, true, true);
    REQUIRE(cert.issued);
    CHECK(cert.forced_ab == std::pair<int, int>{-1, 0});
    CHECK(cert.theta_count_minus > 0);
    CHECK(cert.theta_count_plus > 0);
    CHECK(cert.plus_choice_also_contradicts);
    REQUIRE(cert.trace.size() == 6);
    CHECK(cert.trace.back() == "no consistent (a,b); evaluation map surjective");

    CHECK_FALSE(prop3_certificate(false, true, true).issued);
    CHECK_FALSE(prop3_certificate(true, false, true).issued);
    CHECK_FALSE(prop3_certificate(true, true, false).issued);
    CHECK(prop3_certificate(true, false, true).withheld_reason.find("g_Q") != std::string::npos);
}

TEST_CASE("3-adic Mordell-Weil quotient certificate") {
    auto cert = mod3_quotient_certificate();
    CHECK(cert.ok);
    CHECK(cert.tamagawa == 3);
    CHECK(cert.p_on_curve);
    CHECK(cert.p_reduces_to_singular_point);
    CHECK(cert.triple_p.x == Rat(19, 9));
    CHECK(cert.triple_p.y == Rat(-215, 27));
    CHECK(cert.v3_x_triple == -2);
    CHECK(cert.v3_y_triple == -3);
    CHECK(cert.triple_in_kernel_of_reduction);
    CHECK(cert.q_square_hensel);
    CHECK(cert.cited.size() == 2);
}

TEST_CASE("evaluation away from 3") {
    auto rep = evaluation_away_from_3_report();
    CHECK(rep.br_real_3torsion == 1);
    CHECK(rep.f2_point_counts[0] == 3);
    CHECK(rep.f2_point_counts[1] == 3);
    CHECK(rep.all_computed_ok);
    for (const auto& s : rep.two_adic_samples) {
        CHECK(s.reduction != Reduction::multiplicative);
        if (s.reduction == Reduction::additive) CHECK((s.tamagawa == 1 || s.tamagawa == 2));
    }
}

TEST_CASE("Kummer affine model is twist-invariant") { CHECK(kummer_model_identity()); }

TEST_CASE("complex-embedding oracle for the 3-division polynomial") {
    // 1. forward: for random complex R on the curve, f_{x(3R)}(x(R)) = 0
    std::mt19937_64 rng(41);
    auto f_eval = [](const Cx& xT, const Cx& t) {
        Cx t3 = t * t * t;
        Cx a = cx(9) * t * t * (t - xT) * (t3 + cx(216)) * (t3 + cx(216));
        Cx b = cx(8) * (t3 + cx(54)) * (t3 * t3 + cx(1080) * t3 - cx(23328));
        return a - b;
    };
    int checked = 0;
    for (int i = 0; i < 8; ++i) {
        Cx xr{mpf_class(long(rng() % 13) - 6, 512), mpf_class(long(rng() % 9) + 1, 512)};
        Cx yr = cx_sqrt(xr * xr * xr + cx(54));
        CPt R{xr, yr};
        CPt T = cx_triple(R);
        Cx res = f_eval(T.x, xr);
        // relative to the coefficient scale at this point
        mpf_class scale = cx_abs(T.x) * 1e9 + 1e9;
        CHECK(cx_abs(res) / scale < mpf_class(1e-20, 512));
        ++checked;
    }
    CHECK(checked == 8);

    // 2. backward: numeric roots of the implementation's f_P triple to x = 3
    auto f = f_division_poly(3);
    auto poly_eval = [&](const Cx& t) {
        Cx acc = cx(0);
        for (std::size_t i = f.size(); i-- > 0;) {
            acc = acc * t;
            Cx c{mpf_class(0, 512), mpf_class(0, 512)};
            c.re = mpf_class(f[i].get_d(), 512);
            acc = acc + c;
        }
        return acc;
    };
    // Durand-Kerner
    std::vector<Cx> roots(9);
    for (int i = 0; i < 9; ++i) {
        Cx w{mpf_class(0.4, 512), mpf_class(0.9, 512)};
        Cx acc = cx(1);
        for (int j = 0; j <= i; ++j) acc = acc * w;
        roots[i] = acc;
    }
    for (int iter = 0; iter < 500; ++iter) {
        for (int i = 0; i < 9; ++i) {
            Cx denom = cx(1);
            for (int j = 0; j < 9; ++j)
                if (j != i) denom = denom * (roots[i] - roots[j]);
            roots[i] = roots[i] - poly_eval(roots[i]) / denom;
        }
    }
    for (int i = 0; i < 9; ++i) {
        Cx xr = roots[i];
        Cx yr = cx_sqrt(xr * xr * xr + cx(54));
        CPt T = cx_triple({xr, yr});
        CHECK(cx_abs(T.x - cx(3)) < mpf_class(1e-15, 512));
        CHECK(cx_abs(T.y * T.y - (T.x * T.x * T.x + cx(54))) < mpf_class(1e-10, 512));
    }
}
