// Imaginary quadratic fields, orders, class numbers and ring class field
// degrees.  Class numbers are available through two independent routes:
// exhaustive reduced-form enumeration and the analytic degree formula for
// orders; the test suite cross-validates one against the other.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "cmbr/integers.hpp"

namespace cmbr {

inline bool is_fundamental_discriminant(const Int& d) {
    if (d >= 0) return false;
    Int m = mod_floor(d, 4);
    if (m == 1) return is_squarefree(d);
    if (m == 0) {
        Int q = d / 4;
        Int r = mod_floor(q, 4);
        return (r == 2 || r == 3) && is_squarefree(q);
    }
    return false;
}

struct ImQuadField {
    Int d;     // field is Q(sqrt(-d)), d squarefree positive
    Int disc;  // fundamental discriminant
    int unit_count;

    static ImQuadField from_d(const Int& d) {
        if (d <= 0 || !is_squarefree(d))
            throw std::invalid_argument("ImQuadField: d must be a squarefree positive integer");
        ImQuadField f;
        f.d = d;
        f.disc = (mod_floor(-d, 4) == 1) ? Int(-d) : Int(-4 * d);
        f.unit_count = (f.disc == -4) ? 4 : (f.disc == -3) ? 6 : 2;
        return f;
    }

    static ImQuadField from_disc(const Int& disc) {
        if (!is_fundamental_discriminant(disc))
            throw std::invalid_argument("ImQuadField: not a fundamental imaginary quadratic discriminant");
        Int d = (mod_floor(disc, 4) == 1) ? Int(-disc) : Int(-disc / 4);
        return from_d(d);
    }
};

struct QuadOrder {
    ImQuadField field;
    Int conductor;  // c >= 1, order Z + c*O_K

    QuadOrder(ImQuadField f, Int c) : field(std::move(f)), conductor(std::move(c)) {
        if (conductor < 1) throw std::invalid_argument("QuadOrder: conductor must be >= 1");
    }
    Int disc() const { return field.disc * conductor * conductor; }
};

// Kronecker symbol (disc/p) for a fundamental imaginary quadratic
// discriminant; the p = 2 case follows the residue-class definition.
inline int kronecker_symbol(const Int& disc, const Int& p) {
    if (!is_fundamental_discriminant(disc))
        throw std::invalid_argument("kronecker_symbol: disc is not fundamental");
    if (p < 2 || !is_prime_u64(p.get_ui()))
        throw std::invalid_argument("kronecker_symbol: p must be prime");
    if (p == 2) {
        if (mpz_even_p(disc.get_mpz_t())) return 0;
        Int r = mod_floor(disc, 8);
        if (r == 1) return 1;
        if (r == 5) return -1;
        throw std::logic_error("kronecker_symbol: odd fundamental disc must be 1 mod 4");
    }
    Int e = powmod(mod_floor(disc, p), (p - 1) / 2, p);
    if (e == 0) return 0;
    return (e == 1) ? 1 : -1;
}

// Number of reduced primitive binary quadratic forms (a,b,c) of the given
// negative discriminant: b^2 - 4ac = D, |b| <= a <= c, gcd(a,b,c) = 1, and
// b >= 0 whenever |b| = a or a = c.  This is h(O) for the order of
// discriminant D, independent of the degree formula.
inline long reduced_form_count(const Int& D) {
    if (D >= 0 || (mod_floor(D, 4) != 0 && mod_floor(D, 4) != 1))
        throw std::invalid_argument("reduced_form_count: D must be negative, 0 or 1 mod 4");
    long count = 0;
    Int a_max_sq = (-D) / 3;
    for (Int a = 1; a * a <= a_max_sq; ++a) {
        for (Int b = -a; b <= a; ++b) {
            Int num = b * b - D;
            if (mod_floor(num, 4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if ((b < 0) && (b == -a || a == c)) continue;  // tie rules
            Int g = gcd(gcd(a, b), c);
            if (g != 1) continue;
            ++count;
        }
    }
    return count;
}

inline long class_number_maximal(const ImQuadField& f) {
    return reduced_form_count(f.disc);
}

// h(O_c) by the class-field-theoretic degree formula
//   h(O_c) = h(O_K) c / [O_K^* : O_c^*] * prod_{p | c} (1 - (disc/p)/p).
inline Int class_number_order(const QuadOrder& o) {
    Int h = class_number_maximal(o.field);
    if (o.conductor == 1) return h;
    Rat acc(h * o.conductor, (o.field.unit_count / 2));
    for (const Int& p : prime_factors(o.conductor)) {
        acc *= Rat(p - kronecker_symbol(o.field.disc, p), p);
    }
    acc.canonicalize();
    if (acc.get_den() != 1)
        throw std::logic_error("class_number_order: formula did not yield an integer");
    return Int(acc.get_num());
}

// n(ell): the largest k such that the ring class field K_{ell^k} embeds in
// KL.  Exact when L is contained in the Hilbert class field (containment is
// then equivalent to the degree equality h(O_{ell^k}) = h(O_K)); otherwise
// only the divisibility necessary condition h(O_{ell^k}) | [KL:K] is
// available and the result is flagged as a bound.
struct RingClassBound {
    int k = 0;
    bool exact = false;  // false means "bound-only"
};

inline RingClassBound n_of_ell(const ImQuadField& f, const Int& ell,
                               const Int& galois_closure_degree_over_K,
                               bool L_in_hilbert) {
    if (ell < 2 || !is_prime_u64(ell.get_ui()))
        throw std::invalid_argument("n_of_ell: ell must be prime");
    Int h = class_number_maximal(f);
    RingClassBound out;
    out.exact = L_in_hilbert;
    Int target = L_in_hilbert ? h : galois_closure_degree_over_K;
    Int c = 1;
    for (int k = 1; k < 64; ++k) {
        c *= ell;
        Int hk = class_number_order(QuadOrder(f, c));
        bool ok = L_in_hilbert ? (hk == h) : mpz_divisible_p(target.get_mpz_t(), hk.get_mpz_t());
        if (!ok) break;
        out.k = k;
    }
    return out;
}

}  // namespace cmbr
