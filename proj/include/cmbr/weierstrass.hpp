// Long Weierstrass models over Q with exact rational arithmetic: standard
// invariants, the group law, and Tate's algorithm at an arbitrary prime.
//
// Tate's algorithm follows the classical step structure (types I0/In on the
// multiplicative side, then II, III, IV, I0*, In*, IV*, III*, II*, and the
// u = p rescaling loop for non-minimal models).  Every coordinate change is
// found by a bounded search over residues and validated against the
// valuation conditions the next step needs, so no closed-form translation
// formulas are trusted blindly.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "cmbr/integers.hpp"

namespace cmbr {

struct WeierstrassModel {
    Rat a1, a2, a3, a4, a6;

    Rat b2() const { return a1 * a1 + 4 * a2; }
    Rat b4() const { return 2 * a4 + a1 * a3; }
    Rat b6() const { return a3 * a3 + 4 * a6; }
    Rat b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    Rat c4() const { return b2() * b2() - 24 * b4(); }
    Rat c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
    Rat disc() const {
        Rat B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }
};

struct CurvePoint {
    bool infinity = true;
    Rat x, y;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(Rat x, Rat y) { return {false, std::move(x), std::move(y)}; }
    friend bool operator==(const CurvePoint& p, const CurvePoint& q) {
        if (p.infinity || q.infinity) return p.infinity == q.infinity;
        return p.x == q.x && p.y == q.y;
    }
};

inline bool on_curve(const WeierstrassModel& e, const CurvePoint& p) {
    if (p.infinity) return true;
    Rat lhs = p.y * p.y + e.a1 * p.x * p.y + e.a3 * p.y;
    Rat rhs = p.x * p.x * p.x + e.a2 * p.x * p.x + e.a4 * p.x + e.a6;
    return lhs == rhs;
}

inline CurvePoint negate(const WeierstrassModel& e, const CurvePoint& p) {
    if (p.infinity) return p;
    return CurvePoint::affine(p.x, -p.y - e.a1 * p.x - e.a3);
}

inline CurvePoint add(const WeierstrassModel& e, const CurvePoint& p, const CurvePoint& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    if (p.x == q.x) {
        if (q == negate(e, p)) return CurvePoint::at_infinity();
    }
    Rat lambda;
    if (p.x == q.x && p.y == q.y) {
        Rat den = 2 * p.y + e.a1 * p.x + e.a3;
        if (den == 0) return CurvePoint::at_infinity();
        lambda = (3 * p.x * p.x + 2 * e.a2 * p.x + e.a4 - e.a1 * p.y) / den;
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
    }
    Rat x3 = lambda * lambda + e.a1 * lambda - e.a2 - p.x - q.x;
    Rat y3 = lambda * (p.x - x3) - p.y - e.a1 * x3 - e.a3;
    return CurvePoint::affine(x3, y3);
}

inline CurvePoint multiply(const WeierstrassModel& e, const CurvePoint& p, int n) {
    if (n < 0) return multiply(e, negate(e, p), -n);
    CurvePoint acc = CurvePoint::at_infinity();
    for (int i = 0; i < n; ++i) acc = add(e, acc, p);
    return acc;
}

// Exact tripling via the doubling-then-add path of the group law.
inline CurvePoint triple_point(const WeierstrassModel& e, const CurvePoint& p) {
    if (!on_curve(e, p)) throw std::invalid_argument("triple_point: point not on the curve");
    return add(e, add(e, p, p), p);
}

enum class Reduction { good, multiplicative, additive };

struct TateReport {
    std::string kodaira;
    int tamagawa = 1;  // c = [E(Q_p) : E_0(Q_p)]
    Reduction reduction = Reduction::good;
    std::array<Int, 5> minimal_model{};  // a1, a2, a3, a4, a6 of a p-minimal model
    int v_disc_minimal = 0;
    bool split_multiplicative = false;
};

namespace tate_detail {

struct IntModel {
    Int a1, a2, a3, a4, a6;

    Int b2() const { return a1 * a1 + 4 * a2; }
    Int b6() const { return a3 * a3 + 4 * a6; }
    Int b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    Int disc() const {
        Int B2 = b2(), B4 = 2 * a4 + a1 * a3, B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }
    // x -> x + r, y -> y + s x + t
    void translate(const Int& r, const Int& s, const Int& t) {
        Int A1 = a1, A2 = a2, A3 = a3, A4 = a4, A6 = a6;
        a1 = A1 + 2 * s;
        a2 = A2 - s * A1 + 3 * r - s * s;
        a3 = A3 + r * A1 + 2 * t;
        a4 = A4 - s * A3 + 2 * r * A2 - (t + r * s) * A1 + 3 * r * r - 2 * s * t;
        a6 = A6 + r * A4 + r * r * A2 + r * r * r - t * A3 - t * t - r * t * A1;
    }
};

inline Int curve_eval(const IntModel& m, const Int& x, const Int& y) {
    return y * y + m.a1 * x * y + m.a3 * y - x * x * x - m.a2 * x * x - m.a4 * x - m.a6;
}

// roots of c2 X^2 + c1 X + c0 over F_p (brute force; p is small here)
inline int quadratic_roots_mod_p(const Int& c2, const Int& c1, const Int& c0, const Int& p,
                                 Int* first_root = nullptr) {
    int count = 0;
    for (Int x = 0; x < p; ++x) {
        if (mod_floor(c2 * x * x + c1 * x + c0, p) == 0) {
            if (count == 0 && first_root) *first_root = x;
            ++count;
        }
    }
    return count;
}

}  // namespace tate_detail

inline TateReport tate_algorithm(const WeierstrassModel& input, const Int& p) {
    if (p < 2 || !is_prime_u64(p.get_ui())) throw std::invalid_argument("tate_algorithm: p must be prime");
    if (p > 1000000) throw budget_exceeded("tate_algorithm: residue searches limited to p <= 10^6");
    if (input.disc() == 0) throw std::invalid_argument("tate_algorithm: singular curve");

    using tate_detail::IntModel;
    using tate_detail::curve_eval;
    using tate_detail::quadratic_roots_mod_p;

    // integral model: scale by the lcm of the denominators
    Int den = 1;
    for (const Rat* a : {&input.a1, &input.a2, &input.a3, &input.a4, &input.a6})
        den = lcm(den, Int(a->get_den()));
    IntModel m;
    m.a1 = Int(Rat(input.a1 * den).get_num());
    m.a2 = Int(Rat(input.a2 * den * den).get_num());
    m.a3 = Int(Rat(input.a3 * den * den * den).get_num());
    m.a4 = Int(Rat(input.a4 * pow_int(den, 4)).get_num());
    m.a6 = Int(Rat(input.a6 * pow_int(den, 6)).get_num());

    auto vP = [&](const Int& x) { return v_p(x, p); };
    auto finish = [&](TateReport rep) {
        rep.minimal_model = {m.a1, m.a2, m.a3, m.a4, m.a6};
        rep.v_disc_minimal = vP(m.disc());
        return rep;
    };

    for (int pass = 0; pass < 64; ++pass) {
        Int D = m.disc();
        int n = vP(D);

        // Step 1: good reduction
        if (n == 0) {
            TateReport rep;
            rep.kodaira = "I0";
            rep.tamagawa = 1;
            rep.reduction = Reduction::good;
            return finish(rep);
        }

        // Step 2: move the singular point of the reduction to (0,0)
        {
            bool found = false;
            for (Int x0 = 0; x0 < p && !found; ++x0) {
                for (Int y0 = 0; y0 < p && !found; ++y0) {
                    if (p > 2) {
                        // F_y = 2y + a1 x + a3 is linear in y; skip non-roots
                        if (mod_floor(2 * y0 + m.a1 * x0 + m.a3, p) != 0) continue;
                    }
                    bool sing = mod_floor(curve_eval(m, x0, y0), p) == 0 &&
                                mod_floor(m.a1 * y0 - 3 * x0 * x0 - 2 * m.a2 * x0 - m.a4, p) == 0 &&
                                mod_floor(2 * y0 + m.a1 * x0 + m.a3, p) == 0;
                    if (sing) {
                        m.translate(x0, 0, y0);
                        found = true;
                    }
                }
            }
            if (!found) throw std::logic_error("tate: reduction is singular but no singular point found");
        }

        // multiplicative reduction: type I_n
        if (vP(m.b2()) == 0) {
            TateReport rep;
            rep.kodaira = "I" + std::to_string(n);
            rep.reduction = Reduction::multiplicative;
            int roots = quadratic_roots_mod_p(1, m.a1, -m.a2, p);
            rep.split_multiplicative = roots > 0;
            rep.tamagawa = rep.split_multiplicative ? n : (n % 2 == 0 ? 2 : 1);
            return finish(rep);
        }

        // Step 3: type II
        if (vP(m.a6) < 2) {
            TateReport rep;
            rep.kodaira = "II";
            rep.tamagawa = 1;
            rep.reduction = Reduction::additive;
            return finish(rep);
        }
        // Step 4: type III
        if (vP(m.b8()) < 3) {
            TateReport rep;
            rep.kodaira = "III";
            rep.tamagawa = 2;
            rep.reduction = Reduction::additive;
            return finish(rep);
        }
        // Step 5: type IV
        if (vP(m.b6()) < 3) {
            TateReport rep;
            rep.kodaira = "IV";
            int roots = quadratic_roots_mod_p(1, m.a3 / p, -(m.a6 / (p * p)), p);
            rep.tamagawa = roots > 0 ? 3 : 1;
            rep.reduction = Reduction::additive;
            return finish(rep);
        }

        // Step 6: normalise to p | a1,a2, p^2 | a3,a4, p^3 | a6
        {
            bool ok = false;
            for (Int s = 0; s < p && !ok; ++s) {
                IntModel trial_s = m;
                trial_s.translate(0, s, 0);
                if (vP(trial_s.a1) < 1 || vP(trial_s.a2) < 1) continue;
                for (Int t0 = 0; t0 < p * p && !ok; ++t0) {
                    IntModel trial = trial_s;
                    trial.translate(0, 0, t0);
                    if (vP(trial.a3) >= 2 && vP(trial.a4) >= 2 && vP(trial.a6) >= 3) {
                        m = trial;
                        ok = true;
                    }
                }
            }
            if (!ok) throw std::logic_error("tate: step-6 normalisation failed");
        }

        // P(T) = T^3 + a2,1 T^2 + a4,2 T + a6,3 over F_p
        Int P2 = m.a2 / p, P1 = m.a4 / (p * p), P0 = m.a6 / (p * p * p);
        auto peval = [&](const Int& t) { return mod_floor(t * t * t + P2 * t * t + P1 * t + P0, p); };
        auto pderiv = [&](const Int& t) { return mod_floor(3 * t * t + 2 * P2 * t + P1, p); };
        int distinct_roots = 0;
        Int multiple_root = -1;
        int multiple_count = 0;
        for (Int t = 0; t < p; ++t) {
            if (peval(t) != 0) continue;
            if (pderiv(t) != 0) {
                ++distinct_roots;
            } else {
                multiple_root = t;
                ++multiple_count;
            }
        }

        if (multiple_count == 0) {
            // Step 7a: type I0*
            TateReport rep;
            rep.kodaira = "I0*";
            rep.tamagawa = 1 + distinct_roots;
            rep.reduction = Reduction::additive;
            return finish(rep);
        }

        // decide double vs triple root: P = (T - r)^2 (T - s) or (T - r)^3
        bool triple = false;
        {
            // triple iff P(T) = (T - r)^3, i.e. after translating r to zero
            // all lower coefficients vanish mod p
            Int r = multiple_root;
            Int q2 = mod_floor(P2 + 3 * r, p);
            triple = (q2 == 0);
        }

        if (!triple) {
            // Step 7b: type I_n* chain; move the double root to T = 0
            {
                bool ok = false;
                for (Int r0 = 0; r0 < p && !ok; ++r0) {
                    IntModel trial = m;
                    trial.translate(r0 * p, 0, 0);
                    if (vP(trial.a2) == 1 && vP(trial.a4) >= 3 && vP(trial.a6) >= 4) {
                        m = trial;
                        ok = true;
                    }
                }
                if (!ok) throw std::logic_error("tate: I_n* entry translation failed");
            }
            int nn = 1;
            int j = 1;
            for (int guard = 0; guard < 4 * n + 24; ++guard) {
                if (nn % 2 == 1) {
                    // test I_{2j-1}*: quadratic Y^2 + a3,(j+1) Y - a6,(2j+2)
                    Int c1 = m.a3 / pow_int(p, j + 1);
                    Int c0 = -(m.a6 / pow_int(p, 2 * j + 2));
                    Int disc_q = c1 * c1 - 4 * c0;
                    if (mod_floor(disc_q, p) != 0) {
                        TateReport rep;
                        rep.kodaira = "I" + std::to_string(nn) + "*";
                        rep.tamagawa = 2 + (quadratic_roots_mod_p(1, c1, c0, p) > 0 ? 2 : 0);
                        rep.reduction = Reduction::additive;
                        return finish(rep);
                    }
                    bool ok = false;
                    for (Int y0 = 0; y0 < p && !ok; ++y0) {
                        IntModel trial = m;
                        trial.translate(0, 0, y0 * pow_int(p, j + 1));
                        if (vP(trial.a3) >= j + 2 && vP(trial.a6) >= 2 * j + 3) {
                            m = trial;
                            ok = true;
                        }
                    }
                    if (!ok) throw std::logic_error("tate: I_n* odd-stage translation failed");
                    ++nn;
                } else {
                    // test I_{2j}*: quadratic a2,1 X^2 + a4,(j+2) X + a6,(2j+3)
                    Int c2 = m.a2 / p;
                    Int c1 = m.a4 / pow_int(p, j + 2);
                    Int c0 = m.a6 / pow_int(p, 2 * j + 3);
                    Int disc_q = c1 * c1 - 4 * c2 * c0;
                    if (mod_floor(disc_q, p) != 0) {
                        TateReport rep;
                        rep.kodaira = "I" + std::to_string(nn) + "*";
                        rep.tamagawa = 2 + (quadratic_roots_mod_p(c2, c1, c0, p) > 0 ? 2 : 0);
                        rep.reduction = Reduction::additive;
                        return finish(rep);
                    }
                    bool ok = false;
                    for (Int x0 = 0; x0 < p && !ok; ++x0) {
                        IntModel trial = m;
                        trial.translate(x0 * pow_int(p, j + 1), 0, 0);
                        if (vP(trial.a4) >= j + 3 && vP(trial.a6) >= 2 * j + 4) {
                            m = trial;
                            ok = true;
                        }
                    }
                    if (!ok) throw std::logic_error("tate: I_n* even-stage translation failed");
                    ++nn;
                    ++j;
                }
            }
            throw std::logic_error("tate: I_n* chain did not terminate");
        }

        // Step 8: triple root; move it to T = 0
        {
            bool ok = false;
            for (Int r0 = 0; r0 < p && !ok; ++r0) {
                IntModel trial = m;
                trial.translate(r0 * p, 0, 0);
                if (vP(trial.a2) >= 2 && vP(trial.a4) >= 3 && vP(trial.a6) >= 4) {
                    m = trial;
                    ok = true;
                }
            }
            if (!ok) throw std::logic_error("tate: triple-root translation failed");
        }
        {
            // type IV* test: Y^2 + a3,2 Y - a6,4
            Int c1 = m.a3 / (p * p);
            Int c0 = -(m.a6 / pow_int(p, 4));
            Int disc_q = c1 * c1 - 4 * c0;
            if (mod_floor(disc_q, p) != 0) {
                TateReport rep;
                rep.kodaira = "IV*";
                rep.tamagawa = quadratic_roots_mod_p(1, c1, c0, p) > 0 ? 3 : 1;
                rep.reduction = Reduction::additive;
                return finish(rep);
            }
            bool ok = false;
            for (Int y0 = 0; y0 < p && !ok; ++y0) {
                IntModel trial = m;
                trial.translate(0, 0, y0 * p * p);
                if (vP(trial.a3) >= 3 && vP(trial.a6) >= 5) {
                    m = trial;
                    ok = true;
                }
            }
            if (!ok) throw std::logic_error("tate: IV* translation failed");
        }
        // Step 9: type III*
        if (vP(m.a4) < 4) {
            TateReport rep;
            rep.kodaira = "III*";
            rep.tamagawa = 2;
            rep.reduction = Reduction::additive;
            return finish(rep);
        }
        // Step 10: type II*
        if (vP(m.a6) < 6) {
            TateReport rep;
            rep.kodaira = "II*";
            rep.tamagawa = 1;
            rep.reduction = Reduction::additive;
            return finish(rep);
        }
        // Step 11: non-minimal; rescale and restart
        if (vP(m.a1) < 1 || vP(m.a2) < 2 || vP(m.a3) < 3 || vP(m.a4) < 4 || vP(m.a6) < 6)
            throw std::logic_error("tate: rescaling divisibility violated");
        m.a1 /= p;
        m.a2 /= p * p;
        m.a3 /= p * p * p;
        m.a4 /= pow_int(p, 4);
        m.a6 /= pow_int(p, 6);
    }
    throw std::logic_error("tate: did not terminate");
}

}  // namespace cmbr
