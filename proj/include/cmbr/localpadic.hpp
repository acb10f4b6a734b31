// The 3-adic pipeline for the curve y^2 = x^3 + 54: exact arithmetic in
// Q(zeta_3) with the (1 - zeta_3)-adic valuation, Newton polygons, the
// 3-division and (1 - zeta_3)-division polynomials, ramification analysis
// of the division fields, and the finite F_3-linear-algebra certificate
// that the Brauer evaluation map at 3 is surjective.
//
// No floating point appears anywhere on a certificate path.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cmbr/integers.hpp"
#include "cmbr/matrixcert.hpp"
#include "cmbr/weierstrass.hpp"

namespace cmbr {

// ---------------------------------------------------------------------------
// Elements a + b zeta_3 of Q(zeta_3), with v(1 - zeta_3) = 1, v(3) = 2.

struct Eis {
    Rat a, b;

    Eis() = default;
    Eis(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}
    explicit Eis(const Rat& r) : a(r), b(0) {}
    static Eis zeta() { return {0, 1}; }
    static Eis zeta2() { return {-1, -1}; }

    bool is_zero() const { return a == 0 && b == 0; }
    Eis conj() const { return {a - b, -b}; }
    Rat norm() const { return a * a - a * b + b * b; }

    friend Eis operator+(const Eis& x, const Eis& y) { return {x.a + y.a, x.b + y.b}; }
    friend Eis operator-(const Eis& x, const Eis& y) { return {x.a - y.a, x.b - y.b}; }
    friend Eis operator-(const Eis& x) { return {-x.a, -x.b}; }
    friend Eis operator*(const Eis& x, const Eis& y) {
        Rat bd = x.b * y.b;
        return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd};
    }
    friend Eis operator*(const Rat& s, const Eis& x) { return {s * x.a, s * x.b}; }
    Eis inv() const {
        if (is_zero()) throw std::invalid_argument("Eis: division by zero");
        Rat n = norm();
        Eis c = conj();
        return {c.a / n, c.b / n};
    }
    friend Eis operator/(const Eis& x, const Eis& y) { return x * y.inv(); }
    friend bool operator==(const Eis& x, const Eis& y) { return x.a == y.a && x.b == y.b; }

    std::string str() const {
        if (b == 0) return a.get_str();
        return a.get_str() + (b > 0 ? "+" : "") + b.get_str() + "*zeta3";
    }
};

// v_pi(x) = v_3(Norm(x)) exactly: the norm of pi = 1 - zeta_3 is 3 and
// conjugation preserves the valuation.
inline int v_pi(const Eis& x) {
    if (x.is_zero()) return kValInfinity;
    return v_p(x.norm(), 3);
}

// reduction to the residue field F_3 (zeta_3 -> 1); requires v_pi >= 0,
// which guarantees 3-integral coordinates
inline int residue_f3(const Eis& x) {
    if (x.is_zero()) return 0;
    if (v_pi(x) < 0) throw std::invalid_argument("residue_f3: negative valuation");
    if (v_pi(x) > 0) return 0;
    Rat s = x.a + x.b;
    Int num = mod_floor(Int(s.get_num()), 3);
    Int den = Int(s.get_den());
    Int r = mod_floor(num * invmod(mod_floor(den, 3), 3), 3);
    return static_cast<int>(r.get_ui());
}

// ---------------------------------------------------------------------------
// polynomial helpers (coefficients low to high)

namespace polydet {

inline bool coeff_is_zero(const Rat& x) { return x == 0; }
inline bool coeff_is_zero(const Eis& x) { return x.is_zero(); }

template <class T>
void trim(std::vector<T>& p) {
    while (!p.empty() && coeff_is_zero(p.back())) p.pop_back();
}

template <class T>
std::vector<T> mul(const std::vector<T>& x, const std::vector<T>& y) {
    if (x.empty() || y.empty()) return {};
    std::vector<T> out(x.size() + y.size() - 1, T{});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out[i + j] = out[i + j] + x[i] * y[j];
    trim(out);
    return out;
}

template <class T>
std::vector<T> add(std::vector<T> x, const std::vector<T>& y) {
    if (x.size() < y.size()) x.resize(y.size(), T{});
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = x[i] + y[i];
    trim(x);
    return x;
}

template <class T>
std::vector<T> sub(std::vector<T> x, const std::vector<T>& y) {
    if (x.size() < y.size()) x.resize(y.size(), T{});
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = x[i] - y[i];
    trim(x);
    return x;
}

template <class T, class S>
std::vector<T> scale(std::vector<T> x, const S& s) {
    for (auto& c : x) c = s * c;
    trim(x);
    return x;
}

template <class T>
T eval(const std::vector<T>& p, const T& x) {
    T acc{};
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

template <class T>
std::vector<T> derivative(const std::vector<T>& p) {
    std::vector<T> out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(Rat(static_cast<long>(i)) * p[i]);
    trim(out);
    return out;
}

// p(alpha*u + beta)
template <class T>
std::vector<T> compose_linear(const std::vector<T>& p, const T& alpha, const T& beta) {
    std::vector<T> out{T{}};
    std::vector<T> lin{beta, alpha};
    for (std::size_t i = p.size(); i-- > 0;) {
        out = mul(out, lin);
        if (out.empty()) out = {p[i]};
        else out[0] = out[0] + p[i];
        trim(out);
    }
    return out;
}

}  // namespace polydet

// ---------------------------------------------------------------------------
// Newton polygon with respect to a valuation on the coefficients

struct NewtonSlope {
    Rat root_valuation;  // = -(edge slope), the valuation of the roots on this edge
    int multiplicity;    // horizontal length of the edge
};

struct NewtonPolygon {
    std::vector<std::pair<int, Rat>> vertices;  // (index, valuation) of hull corners
    std::vector<NewtonSlope> slopes;            // increasing edge slope order
};

// points: (i, v(c_i)) for nonzero coefficients; infinite (zero) coefficients
// are skipped.  Lower convex hull from the lowest nonzero index to the degree.
inline NewtonPolygon newton_polygon_from_points(const std::vector<std::pair<int, Rat>>& pts_in) {
    if (pts_in.empty()) throw std::invalid_argument("newton polygon: zero polynomial");
    auto pts = pts_in;
    std::sort(pts.begin(), pts.end(), [](auto& x, auto& y) { return x.first < y.first; });
    NewtonPolygon np;
    // Andrew-style lower hull
    std::vector<std::pair<int, Rat>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep b only if it is strictly below the segment a--p
            Rat lhs = (b.second - a.second) * (p.first - a.first);
            Rat rhs = (p.second - a.second) * (b.first - a.first);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    np.vertices = hull;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        Rat slope = (hull[i + 1].second - hull[i].second) / (hull[i + 1].first - hull[i].first);
        np.slopes.push_back({-slope, hull[i + 1].first - hull[i].first});
    }
    return np;
}

inline NewtonPolygon newton_polygon(const std::vector<Eis>& poly) {
    std::vector<std::pair<int, Rat>> pts;
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (!poly[i].is_zero()) pts.push_back({static_cast<int>(i), Rat(v_pi(poly[i]))});
    return newton_polygon_from_points(pts);
}

// A cubic with unit leading coefficient is irreducible over the residue
// field F_3 iff it has no root there.
inline bool residue_cubic_irreducible(const std::vector<Eis>& cubic) {
    if (cubic.size() != 4) throw std::invalid_argument("residue_cubic_irreducible: need degree 3");
    for (const auto& c : cubic)
        if (!c.is_zero() && v_pi(c) < 0)
            throw std::invalid_argument("residue_cubic_irreducible: negative valuation coefficient");
    if (v_pi(cubic[3]) != 0)
        throw std::invalid_argument("residue_cubic_irreducible: leading coefficient not a unit");
    int r[4];
    for (int i = 0; i < 4; ++i) r[i] = residue_f3(cubic[i]);
    for (int x = 0; x < 3; ++x) {
        int val = (r[0] + r[1] * x + r[2] * x * x + r[3] * x * x * x) % 3;
        if (val == 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// division polynomials for E: y^2 = x^3 + 54

// f_T(t) = 9 t^2 (t - x_T)(t^3 + 216)^2 - 8 (t^3 + 54)(t^6 + 1080 t^3 - 23328):
// the degree-9 polynomial satisfied by x(R) with 3R = T.
inline std::vector<Rat> f_division_poly(const Rat& xT) {
    using namespace polydet;
    std::vector<Rat> t{0, 1};
    std::vector<Rat> c1 = mul(mul(std::vector<Rat>{0, 0, Rat(9)}, std::vector<Rat>{-xT, 1}),
                              mul(std::vector<Rat>{216, 0, 0, 1}, std::vector<Rat>{216, 0, 0, 1}));
    std::vector<Rat> c2 = mul(std::vector<Rat>{54, 0, 0, 1},
                              std::vector<Rat>{-23328, 0, 0, 1080, 0, 0, 1});
    return sub(c1, scale(c2, Rat(8)));
}

// g_T(t) = t^3 + 3 zeta_3 x_T t^2 + 216: x(S) for (1 - zeta_3) S = T.
inline std::vector<Eis> g_division_poly(const Eis& xT) {
    return {Eis(Rat(216)), Eis{}, Rat(3) * (Eis::zeta() * xT), Eis(Rat(1))};
}

// the Galois-conjugate version: x(R) for (1 - zeta_3^2) R = S.
inline std::vector<Eis> g_conj_division_poly(const Eis& xS) {
    return {Eis(Rat(216)), Eis{}, Rat(3) * (Eis::zeta2() * xS), Eis(Rat(1))};
}

// h_P(u) = g_P(3(u+1))/27 and h_Q(u) = g_Q(3u)/27 -- the scaled models used
// for the ramification analysis.
inline std::vector<Eis> scaled_division_cubic(const Eis& xT, bool shift) {
    auto g = g_division_poly(xT);
    auto h = polydet::compose_linear(g, Eis(Rat(3)), shift ? Eis(Rat(3)) : Eis{});
    return polydet::scale(h, Eis(Rat(1, 27)));
}

struct RamificationReport {
    enum class Verdict { ramified, unramified, inconclusive } verdict;
    bool degenerate = false;  // x_T = 0: division points are 3-torsion
    std::string detail;
    std::vector<Eis> unshifted;  // g(3u)/27
    std::vector<Eis> shifted;    // g(3(u+1))/27
};

// Decide whether the (1-zeta_3)-division field of T = (x_T, *) is ramified
// or unramified over Q_3(zeta_3): irreducible residue cubic => unramified;
// a Newton-polygon slope with denominator 3 after the unit shift =>
// totally ramified.
inline RamificationReport ramification_report(const Rat& xT) {
    RamificationReport rep{RamificationReport::Verdict::inconclusive, false, "", {}, {}};
    Eis x{xT, 0};
    rep.unshifted = scaled_division_cubic(x, false);
    rep.shifted = scaled_division_cubic(x, true);
    if (xT == 0) {
        // g_0(t) = t^3 + 216 cuts out the 3-torsion x-coordinates -6 zeta^k
        // themselves; there is no field-theoretic content.  Reported with
        // the ramified tag by convention, and flagged.
        rep.degenerate = true;
        rep.verdict = RamificationReport::Verdict::ramified;
        rep.detail = "degenerate: the division points are 3-torsion (roots -6 zeta_3^k)";
        return rep;
    }
    if (residue_cubic_irreducible(rep.unshifted)) {
        rep.verdict = RamificationReport::Verdict::unramified;
        rep.detail = "residue cubic irreducible over F_3";
        return rep;
    }
    auto np = newton_polygon(rep.shifted);
    for (const auto& s : np.slopes) {
        if (Int(s.root_valuation.get_den()) == 3) {
            rep.verdict = RamificationReport::Verdict::ramified;
            std::ostringstream os;
            os << "Newton polygon root valuation " << s.root_valuation.get_str()
               << " has denominator 3";
            rep.detail = os.str();
            return rep;
        }
    }
    auto np0 = newton_polygon(rep.unshifted);
    for (const auto& s : np0.slopes) {
        if (Int(s.root_valuation.get_den()) == 3) {
            rep.verdict = RamificationReport::Verdict::ramified;
            rep.detail = "Newton polygon of the unshifted model has a denominator-3 slope";
            return rep;
        }
    }
    rep.detail = "no residue or polygon criterion applies";
    return rep;
}

// ---------------------------------------------------------------------------
// The ramified cubic extension M = F[u]/(h_P) and exact root search in M.
//
// Valuations: v_M extends 3*v_pi, v_M(u) = 2 and v_M of a reduced element
// sum a_i u^i is min_i (3 v_pi(a_i) + 2i) -- the three residues mod 3 are
// distinct, so the minimum is exact and no cancellation can occur.

struct MElem {
    std::array<Eis, 3> c{};  // c[0] + c[1] u + c[2] u^2

    MElem() = default;
    explicit MElem(const Eis& x) : c{x, Eis{}, Eis{}} {}
    explicit MElem(const Rat& x) : c{Eis(x), Eis{}, Eis{}} {}
    bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }
    friend bool operator==(const MElem& x, const MElem& y) { return x.c == y.c; }
};

namespace mext {

// h_P(u) = u^3 + 3(1+zeta) u^2 + 3(1+2 zeta) u + (9 + 3 zeta)
inline const std::vector<Eis>& modulus() {
    static const std::vector<Eis> h = [] {
        auto h0 = scaled_division_cubic(Eis(Rat(3)), true);
        return h0;
    }();
    return h;
}

inline MElem reduce(std::vector<Eis> p) {
    const auto& h = modulus();
    // h is monic of degree 3
    while (p.size() > 3) {
        std::size_t d = p.size() - 1;
        Eis lead = p.back();
        for (int i = 0; i < 3; ++i)
            p[d - 3 + i] = p[d - 3 + i] - lead * h[i];
        p.pop_back();
        polydet::trim(p);
    }
    MElem out;
    for (std::size_t i = 0; i < p.size(); ++i) out.c[i] = p[i];
    return out;
}

inline MElem add(const MElem& x, const MElem& y) {
    MElem r;
    for (int i = 0; i < 3; ++i) r.c[i] = x.c[i] + y.c[i];
    return r;
}
inline MElem sub(const MElem& x, const MElem& y) {
    MElem r;
    for (int i = 0; i < 3; ++i) r.c[i] = x.c[i] - y.c[i];
    return r;
}
inline MElem mul(const MElem& x, const MElem& y) {
    std::vector<Eis> px(x.c.begin(), x.c.end()), py(y.c.begin(), y.c.end());
    polydet::trim(px);
    polydet::trim(py);
    return reduce(polydet::mul(px, py));
}

inline int val(const MElem& x) {
    int v = kValInfinity;
    for (int i = 0; i < 3; ++i)
        if (!x.c[i].is_zero()) v = std::min(v, 3 * v_pi(x.c[i]) + 2 * i);
    return v;
}

// division with remainder in F[x] (divisor with invertible leading coeff)
inline std::pair<std::vector<Eis>, std::vector<Eis>> divmod(std::vector<Eis> num,
                                                            const std::vector<Eis>& den) {
    std::vector<Eis> q;
    while (num.size() >= den.size() && !num.empty()) {
        std::size_t shift = num.size() - den.size();
        Eis coef = num.back() / den.back();
        std::vector<Eis> term(shift + 1, Eis{});
        term[shift] = coef;
        q = polydet::add(q, term);
        num = polydet::sub(num, polydet::mul(term, den));
    }
    return {q, num};
}

// extended Euclid in F[x] to invert modulo h_P
inline MElem inverse(const MElem& x) {
    if (x.is_zero()) throw std::invalid_argument("MElem: inverse of zero");
    std::vector<Eis> r0 = modulus();
    std::vector<Eis> r1(x.c.begin(), x.c.end());
    polydet::trim(r1);
    std::vector<Eis> s0{}, s1{Eis(Rat(1))};
    while (!r1.empty()) {
        auto [q, rem] = divmod(r0, r1);
        auto s2 = polydet::sub(s0, polydet::mul(q, s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd, a nonzero constant since h_P is irreducible
    if (r0.size() != 1) throw std::logic_error("MElem inverse: gcd not constant");
    auto inv = polydet::scale(s0, r0[0].inv());
    return reduce(inv);
}

inline MElem uniformizer() {
    // pi_M = u^2 (2 + zeta)/3: v_M = 4 + 3(v_pi(2+zeta) - v_pi(3)) = 1
    MElem r;
    r.c[2] = Rat(1, 3) * Eis{2, 1};
    return r;
}

inline int residue(const MElem& x) {
    int v = val(x);
    if (v < 0) throw std::invalid_argument("MElem residue: negative valuation");
    if (v > 0 || x.is_zero()) return 0;
    return residue_f3(x.c[0]);
}

using MPoly = std::vector<MElem>;

inline MElem eval(const MPoly& p, const MElem& x) {
    MElem acc;
    for (std::size_t i = p.size(); i-- > 0;) acc = add(mul(acc, x), p[i]);
    return acc;
}

inline MPoly derivative(const MPoly& p) {
    MPoly out;
    for (std::size_t i = 1; i < p.size(); ++i)
        out.push_back(mul(MElem(Rat(static_cast<long>(i))), p[i]));
    return out;
}

// digit-by-digit root search in the complete field M.  Returns true iff the
// squarefree polynomial G has a root in M; a `false` answer is a
// certificate (every digit path is explored until it dies or Hensel's
// criterion guarantees a root).
inline bool root_search(const MPoly& G, int depth, int budget);

inline bool has_root_in_M(const MPoly& G_in, int budget) {
    MPoly G = G_in;
    while (!G.empty() && G.back().is_zero()) G.pop_back();
    if (G.size() <= 1) return false;
    // Newton polygon over v_M: candidate root valuations
    std::vector<std::pair<int, Rat>> pts;
    for (std::size_t i = 0; i < G.size(); ++i)
        if (!G[i].is_zero()) pts.push_back({static_cast<int>(i), Rat(val(G[i]))});
    auto np = newton_polygon_from_points(pts);
    for (const auto& s : np.slopes) {
        if (Int(s.root_valuation.get_den()) != 1) continue;  // fractional: no root in M
        long lambda = static_cast<long>(Int(s.root_valuation.get_num()).get_si());
        // substitute t = pi_M^lambda z and search unit-and-higher roots z
        MElem piM = uniformizer();
        MElem scale_elt = MElem(Rat(1));
        if (lambda >= 0)
            for (long i = 0; i < lambda; ++i) scale_elt = mul(scale_elt, piM);
        else {
            MElem piInv = inverse(piM);
            for (long i = 0; i < -lambda; ++i) scale_elt = mul(scale_elt, piInv);
        }
        MPoly H;
        MElem pw = MElem(Rat(1));
        for (std::size_t i = 0; i < G.size(); ++i) {
            H.push_back(mul(G[i], pw));
            pw = mul(pw, scale_elt);
        }
        // normalise so the minimal coefficient valuation is zero
        int mn = kValInfinity;
        for (const auto& cc : H)
            if (!cc.is_zero()) mn = std::min(mn, val(cc));
        MElem unit = MElem(Rat(1));
        MElem adj = mn >= 0 ? inverse(piM) : piM;
        for (int i = 0; i < std::abs(mn); ++i) unit = mul(unit, adj);
        for (auto& cc : H) cc = mul(cc, unit);
        if (root_search(H, 0, budget)) return true;
    }
    return false;
}

// coefficients of G(alpha + w) in powers of w, by repeated synthetic
// division of G by (t - alpha)
inline MPoly taylor_shift(const MPoly& G, const MElem& alpha) {
    MPoly taylor;
    MPoly work = G;
    while (!work.empty()) {
        MElem carry;
        MPoly quot(work.size() - 1);
        for (std::size_t j = work.size(); j-- > 0;) {
            MElem cc = add(work[j], mul(carry, alpha));
            if (j > 0)
                quot[j - 1] = cc;
            else
                taylor.push_back(cc);
            carry = cc;
        }
        work = std::move(quot);
    }
    return taylor;
}

inline bool root_search(const MPoly& G, int depth, int budget) {
    if (depth > budget)
        throw std::logic_error("root_search: depth budget exceeded (is the input squarefree?)");
    MPoly deriv = derivative(G);
    MElem piM = uniformizer();
    for (int digit = 0; digit < 3; ++digit) {
        // residue polynomial evaluated at the digit, over F_3
        int acc = 0;
        for (std::size_t i = G.size(); i-- > 0;) acc = (acc * digit + residue(G[i])) % 3;
        if (acc != 0) continue;
        MElem alpha{Rat(digit)};
        MElem fa = eval(G, alpha);
        if (fa.is_zero()) return true;
        MElem fpa = eval(deriv, alpha);
        int va = val(fa);
        int vpa = fpa.is_zero() ? kValInfinity : val(fpa);
        if (vpa < kValInfinity && va > 2 * vpa) return true;  // Hensel lift succeeds
        // refine around the digit: H(z) = G(digit + pi_M z), renormalised
        MPoly taylor = taylor_shift(G, alpha);
        MPoly shifted;
        MElem pw = MElem(Rat(1));
        for (std::size_t i = 0; i < taylor.size(); ++i) {
            shifted.push_back(mul(taylor[i], pw));
            pw = mul(pw, piM);
        }
        int mn = kValInfinity;
        for (const auto& cc : shifted)
            if (!cc.is_zero()) mn = std::min(mn, val(cc));
        if (mn == kValInfinity) return true;  // identically zero: degenerate input
        MElem unit = MElem(Rat(1));
        MElem adj = mn >= 0 ? inverse(piM) : piM;
        for (int i = 0; i < std::abs(mn); ++i) unit = mul(unit, adj);
        for (auto& cc : shifted) cc = mul(cc, unit);
        if (root_search(shifted, depth + 1, budget)) return true;
    }
    return false;
}

}  // namespace mext

// Two-step certification that the 9-division polynomial f_P of P = (3, 9)
// is irreducible over Q_3:
//   step 1: h_P has a single Newton slope of denominator 3, so the
//           (1-zeta_3)-division field F(S_P) is a totally ramified cubic.
//   step 2: the conjugate division cubic of x(S_P), a polynomial over
//           M = F(S_P), has no root in M (exact digit search), so
//           [F(x_R) : F] = 9 and f_P is irreducible over F and over Q_3.
struct TwoStepReport {
    bool step1_ramified_cubic = false;
    bool step2_no_root = false;
    bool certified = false;
    std::string detail;
};

inline TwoStepReport fp_irreducible_two_step() {
    TwoStepReport rep;
    auto hP = mext::modulus();
    auto np = newton_polygon(hP);
    rep.step1_ramified_cubic =
        np.slopes.size() == 1 && np.slopes[0].root_valuation == Rat(2, 3) &&
        np.slopes[0].multiplicity == 3;
    if (!rep.step1_ramified_cubic) {
        rep.detail = "h_P Newton polygon is not a single 2/3 slope";
        return rep;
    }
    // x_S = 3(1 + u) in M; G(t) = t^3 + 3 zeta^2 x_S t^2 + 216 over M
    MElem xS;
    xS.c[0] = Eis(Rat(3));
    xS.c[1] = Eis(Rat(3));
    mext::MPoly G{MElem(Rat(216)), MElem(), MElem(), MElem(Rat(1))};
    G[2] = mext::mul(MElem(Rat(3) * Eis::zeta2()), xS);
    // squarefree: disc = -4 B^3 D - 27 D^2 with B = 3 zeta^2 x_S, D = 216
    MElem B = G[2], D = MElem(Rat(216));
    MElem disc = mext::sub(
        mext::mul(MElem(Rat(-4)), mext::mul(B, mext::mul(B, mext::mul(B, D)))),
        mext::mul(MElem(Rat(27)), mext::mul(D, D)));
    if (disc.is_zero()) {
        rep.detail = "second-step cubic is not squarefree";
        return rep;
    }
    int budget = std::abs(mext::val(disc)) + 24;
    rep.step2_no_root = !mext::has_root_in_M(G, budget);
    rep.certified = rep.step1_ramified_cubic && rep.step2_no_root;
    rep.detail = rep.certified
                     ? "[F(S_P):F] = 3 ramified and the second division step has no root in "
                       "F(S_P); total degree 9, so f_P is irreducible over Q_3(zeta_3) and Q_3"
                     : "second-step cubic acquired a root in F(S_P); two-step route failed";
    return rep;
}

// ---------------------------------------------------------------------------
// The finite F_3 certificate for the surjectivity of the evaluation map.

struct Prop3Certificate {
    bool issued = false;
    std::pair<int, int> forced_ab{0, 0};  // the unique survivor of the kernel constraint
    std::vector<std::string> trace;
    std::string withheld_reason;
    int theta_count_minus = 0;  // models with theta acting as -1 on the kernel
    int theta_count_plus = 0;
    bool plus_choice_also_contradicts = false;
};

namespace prop3det {

using Vec = std::array<int, 2>;

inline Vec mat_apply(const Mat2& m, const Vec& v) {
    return {static_cast<int>((m.e[0] * v[0] + m.e[1] * v[1]) % 3),
            static_cast<int>((m.e[2] * v[0] + m.e[3] * v[1]) % 3)};
}
inline Vec scale(int s, const Vec& v) { return {(s * v[0]) % 3, (s * v[1]) % 3}; }
inline Vec addv(const Vec& x, const Vec& y) { return {(x[0] + y[0]) % 3, (x[1] + y[1]) % 3}; }
inline bool is_zero(const Vec& v) { return v[0] == 0 && v[1] == 0; }

}  // namespace prop3det

// Model E_3 = F_3^2 with Z = multiplication by zeta_3 (Z^2 + Z + I = 0) and
// theta ranging over the invertible solutions of theta Z = Z^2 theta.  The
// kernel of (1 - zeta_3) is the eigenspace ker(Z - I); theta preserves it
// and acts there as +-1.  For the sign -1 (the normalisation used in the
// analytic argument), the constraint "theta o chi_P = a chi_P + b chi_Q with
// chi_P(sigma) in the kernel, chi_Q(sigma) outside" forces (a,b) = (-1,0),
// which is then killed because theta != -1 somewhere on E_3 once chi_P is
// surjective.  The certificate verifies all of this by exhaustion, for every
// admissible Z and theta.
inline Prop3Certificate prop3_certificate(bool gP_ramified, bool gQ_unramified,
                                          bool fP_irreducible) {
    Prop3Certificate cert;
    if (!gP_ramified || !gQ_unramified || !fP_irreducible) {
        cert.withheld_reason = std::string("hypothesis failure:") +
                               (gP_ramified ? "" : " g_P-ramified") +
                               (gQ_unramified ? "" : " g_Q-unramified") +
                               (fP_irreducible ? "" : " f_P-irreducible");
        return cert;
    }
    using namespace prop3det;
    const Mat2 I3 = Mat2::identity(3);
    std::vector<Mat2> zetas;
    for (std::uint32_t i = 0; i < 81; ++i) {
        Mat2 Z(3, i % 3, (i / 3) % 3, (i / 9) % 3, (i / 27) % 3);
        // zeta_3 satisfies Z^2 + Z + I = 0 and acts nontrivially: 1 - zeta_3
        // is an isogeny of degree 3, so Z != I
        if (Z * Z + Z + I3 == Mat2::zero(3) && !(Z == I3)) zetas.push_back(Z);
    }
    if (zetas.empty()) {
        cert.withheld_reason = "no zeta_3 model on F_3^2";
        return cert;
    }
    bool all_ok = true;
    std::set<std::pair<int, int>> survivors_global;
    for (const Mat2& Z : zetas) {
        // kernel of (1 - zeta_3) = ker(Z - I), one-dimensional
        Vec ker{0, 0};
        for (int v0 = 0; v0 < 3 && is_zero(ker); ++v0)
            for (int v1 = (v0 == 0 ? 1 : 0); v1 < 3 && is_zero(ker); ++v1) {
                Vec v{v0, v1};
                if (mat_apply(Z, v) == v) ker = v;
            }
        if (is_zero(ker)) {
            all_ok = false;
            continue;
        }
        std::vector<Vec> kernel_pts{ker, scale(2, ker)};
        std::vector<Vec> outside;
        for (int v0 = 0; v0 < 3; ++v0)
            for (int v1 = 0; v1 < 3; ++v1) {
                Vec v{v0, v1};
                if (is_zero(v)) continue;
                if (!(v == kernel_pts[0]) && !(v == kernel_pts[1])) outside.push_back(v);
            }
        const Mat2 Z2 = Z * Z;
        for (std::uint32_t i = 0; i < 81; ++i) {
            Mat2 th(3, i % 3, (i / 3) % 3, (i / 9) % 3, (i / 27) % 3);
            if (!(th * Z == Z2 * th)) continue;
            if (th.det() % 3 == 0) continue;
            // sign on the kernel
            Vec timg = mat_apply(th, ker);
            int sign = (timg == ker) ? 1 : (timg == scale(2, ker) ? 2 : 0);
            if (sign == 0) {
                all_ok = false;
                continue;
            }
            if (sign == 1) ++cert.theta_count_plus;
            else ++cert.theta_count_minus;

            // survivors of the kernel constraint theta(k) = a k + b q
            std::set<std::pair<int, int>> survivors;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    bool possible = false;
                    for (const Vec& kp : kernel_pts)
                        for (const Vec& q : outside)
                            if (mat_apply(th, kp) == addv(scale(a, kp), scale(b, q))) possible = true;
                    if (possible) survivors.insert({a, b});
                }
            std::pair<int, int> expect = (sign == 2) ? std::pair<int, int>{2, 0}
                                                     : std::pair<int, int>{1, 0};
            if (!(survivors.size() == 1 && *survivors.begin() == expect)) all_ok = false;
            if (sign == 2) survivors_global.insert(survivors.begin(), survivors.end());

            // the survivor requires theta = sign * id on all of E_3 (chi_P is
            // surjective); exhibit a torsion point where it fails
            bool witness_found = false;
            for (const Vec& q : outside)
                if (!(mat_apply(th, q) == scale(expect.first, q))) witness_found = true;
            if (!witness_found) all_ok = false;
            if (sign == 1) cert.plus_choice_also_contradicts = witness_found;
        }
    }
    if (!all_ok || survivors_global != std::set<std::pair<int, int>>{{2, 0}}) {
        cert.withheld_reason = "exhaustive verification failed";
        return cert;
    }
    cert.issued = true;
    cert.forced_ab = {-1, 0};
    cert.trace = {
        "chi_P(sigma) lies in the (1-zeta_3)-kernel and chi_Q(sigma) does not",
        "b != 0 impossible: b*chi_Q(sigma) would lie in the (1-zeta_3)-kernel, so b = 0",
        "theta acts as -1 on the kernel, forcing a = -1: surviving pair (a,b) = (-1,0)",
        "f_P irreducible makes chi_P surjective onto E_3",
        "every admissible theta moves some 3-torsion point T with theta(T) != -T",
        "no consistent (a,b); evaluation map surjective",
    };
    return cert;
}

// ---------------------------------------------------------------------------
// The local certificate at 3: E(Q_3)/3 = (Z/3)^2 with generators P = (3,9)
// (a non-identity component) and Q = (4, sqrt(118)) (smooth reduction).

struct Mod3Certificate {
    bool ok = false;
    int tamagawa = 0;
    bool p_on_curve = false;
    bool p_reduces_to_singular_point = false;
    CurvePoint triple_p;
    int v3_x_triple = 0, v3_y_triple = 0;
    bool triple_in_kernel_of_reduction = false;
    bool q_square_hensel = false;  // 118 is a unit square in Z_3
    bool q_reduction_nonsingular = false;
    std::vector<std::string> cited;
};

inline Mod3Certificate mod3_quotient_certificate() {
    Mod3Certificate cert;
    WeierstrassModel e{0, 0, 0, 0, 54};
    auto tate = tate_algorithm(e, 3);
    cert.tamagawa = tate.tamagawa;

    CurvePoint P = CurvePoint::affine(3, 9);
    cert.p_on_curve = on_curve(e, P);
    // reduction of P mod 3 is (0,0), the singular point of y^2 = x^3 mod 3
    cert.p_reduces_to_singular_point = v_p(P.x, 3) >= 1 && v_p(P.y, 3) >= 1;

    cert.triple_p = triple_point(e, P);
    cert.v3_x_triple = v_p(cert.triple_p.x, 3);
    cert.v3_y_triple = v_p(cert.triple_p.y, 3);
    cert.triple_in_kernel_of_reduction = cert.v3_x_triple < 0 && cert.v3_y_triple < 0 &&
                                         3 * cert.v3_x_triple == 2 * cert.v3_y_triple;

    // Q = (4, sqrt(118)): 118 = 4^3 + 54; a unit square in Z_3 by Hensel
    Int w = 118;
    cert.q_square_hensel = (v_p(w, 3) == 0) && (powmod(mod_floor(w, 3), 1, 3) == 1);
    // reduction (1, +-1) is a smooth point of y^2 = x^3 mod 3
    cert.q_reduction_nonsingular = true;  // (1, 1): not the singular point (0,0)

    cert.cited = {
        "E_0(Q_3) is topologically isomorphic to Z_3 for additive reduction (formal groups)",
        "E_0(Q_3)/E_1(Q_3) = F_3 and E_0 = Z_3 give 3 E_0(Q_3) = E_1(Q_3)",
    };
    cert.ok = cert.tamagawa == 3 && cert.p_on_curve && cert.p_reduces_to_singular_point &&
              cert.triple_p.x == Rat(19, 9) && cert.triple_p.y == Rat(-215, 27) &&
              cert.v3_x_triple == -2 && cert.v3_y_triple == -3 &&
              cert.triple_in_kernel_of_reduction && cert.q_square_hensel;
    return cert;
}

// ---------------------------------------------------------------------------
// Evaluation away from 3: the checkable ingredients.

struct AwayFrom3Report {
    int br_real_3torsion = -1;          // order of the 3-torsion of Br(R) = Z/2
    std::array<int, 2> f2_point_counts{};  // y^2 + y = x^3 + a over F_2, a = 0, 1
    struct Sample {
        Int d;
        std::string kodaira;
        int tamagawa;
        Reduction reduction;
    };
    std::vector<Sample> two_adic_samples;  // y^2 = x^3 + 2 d^3 at p = 2
    bool all_computed_ok = false;
    std::vector<std::string> cited;
};

inline AwayFrom3Report evaluation_away_from_3_report() {
    AwayFrom3Report rep;
    // Br(R) = Z/2: count 3-torsion elements
    rep.br_real_3torsion = 0;
    for (int x = 0; x < 2; ++x)
        if ((3 * x) % 2 == 0) ++rep.br_real_3torsion;

    for (int a = 0; a <= 1; ++a) {
        int count = 1;  // point at infinity
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                if ((y * y + y) % 2 == ((x * x * x + a) % 2)) ++count;
        rep.f2_point_counts[a] = count;
    }

    bool ok = rep.br_real_3torsion == 1 && rep.f2_point_counts[0] == 3 && rep.f2_point_counts[1] == 3;
    for (Int d : {Int(1), Int(2), Int(3), Int(5), Int(7), Int(10)}) {
        WeierstrassModel e{0, 0, 0, 0, Rat(2 * d * d * d)};
        auto t = tate_algorithm(e, 2);
        rep.two_adic_samples.push_back({d, t.kodaira, t.tamagawa, t.reduction});
        if (t.reduction == Reduction::multiplicative) ok = false;
        if (t.reduction == Reduction::additive && t.tamagawa > 2) ok = false;
    }
    rep.all_computed_ok = ok;
    rep.cited = {
        "E^d_2(Q_2) = 4 Z_2 (formal groups), hence 3-divisible",
        "E^d_0(Q_2) is topologically isomorphic to Z_2 for additive reduction",
        "good-reduction places evaluate trivially on the Brauer-Manin set",
    };
    return rep;
}

// ---------------------------------------------------------------------------
// The Kummer affine model is independent of the twisting parameter:
// (x,t,u) -> (x/c, t/c, u/c^3) carries u^2 = (x^3+2c^3)(t^3+2c^3) to
// u^2 = (x^3+2)(t^3+2).  Verified as a polynomial identity in x,t,u,c.

inline bool kummer_model_identity() {
    using Key = std::array<int, 4>;  // exponents of (x, t, u, c)
    using Poly = std::map<Key, Rat>;
    auto addterm = [](Poly& p, Key k, const Rat& v) {
        p[k] += v;
        if (p[k] == 0) p.erase(k);
    };
    auto mulp = [&](const Poly& f, const Poly& g) {
        Poly out;
        for (auto& [kf, vf] : f)
            for (auto& [kg, vg] : g) {
                Key k{kf[0] + kg[0], kf[1] + kg[1], kf[2] + kg[2], kf[3] + kg[3]};
                addterm(out, k, vf * vg);
            }
        return out;
    };
    // P = u^2 - (x^3 + 2c^3)(t^3 + 2c^3)
    Poly x3{{Key{3, 0, 0, 0}, Rat(1)}}, t3{{Key{0, 3, 0, 0}, Rat(1)}};
    Poly c3{{Key{0, 0, 0, 3}, Rat(2)}};
    Poly fx = x3, ft = t3;
    for (auto& [k, v] : c3) {
        addterm(fx, k, v);
        addterm(ft, k, v);
    }
    Poly P{{Key{0, 0, 2, 0}, Rat(1)}};
    Poly prod = mulp(fx, ft);
    for (auto& [k, v] : prod) addterm(P, k, -v);
    // substitute x -> c x, t -> c t, u -> c^3 u
    Poly lhs;
    for (auto& [k, v] : P) {
        Key nk = k;
        nk[3] += k[0] + k[1] + 3 * k[2];
        addterm(lhs, nk, v);
    }
    // c^6 * (u^2 - (x^3+2)(t^3+2))
    Poly Q{{Key{0, 0, 2, 0}, Rat(1)}};
    Poly gx{{Key{3, 0, 0, 0}, Rat(1)}, {Key{0, 0, 0, 0}, Rat(2)}};
    Poly gt{{Key{0, 3, 0, 0}, Rat(1)}, {Key{0, 0, 0, 0}, Rat(2)}};
    Poly prod2 = mulp(gx, gt);
    for (auto& [k, v] : prod2) addterm(Q, k, -v);
    Poly rhs;
    for (auto& [k, v] : Q) {
        Key nk = k;
        nk[3] += 6;
        addterm(rhs, nk, v);
    }
    return lhs == rhs;
}

}  // namespace cmbr
