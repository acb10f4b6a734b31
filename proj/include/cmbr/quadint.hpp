// Exact arithmetic in Z[i] and Z[zeta_3], prime factorisation of rational
// primes, primary associates and power residue symbols.  Symbols are
// evaluated by the Euler criterion inside the residue field Z/N(pi) of a
// split prime and matched exactly against root-of-unity images.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmbr/integers.hpp"
#include "cmbr/quadfield.hpp"

namespace cmbr {

enum class Ring { gaussian, eisenstein };  // omega = i resp. zeta_3

// Element a + b*omega.
struct QuadInt {
    Int a, b;
    Ring ring;

    QuadInt(Int a_, Int b_, Ring r) : a(std::move(a_)), b(std::move(b_)), ring(r) {}

    Int norm() const {
        return ring == Ring::gaussian ? Int(a * a + b * b) : Int(a * a - a * b + b * b);
    }
    bool is_zero() const { return a == 0 && b == 0; }

    QuadInt conj() const {
        // conj(i) = -i;  conj(zeta_3) = zeta_3^2 = -1 - zeta_3
        if (ring == Ring::gaussian) return {a, -b, ring};
        return {a - b, -b, ring};
    }

    friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
        check(x, y);
        return {x.a + y.a, x.b + y.b, x.ring};
    }
    friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
        check(x, y);
        return {x.a - y.a, x.b - y.b, x.ring};
    }
    friend QuadInt operator-(const QuadInt& x) { return {-x.a, -x.b, x.ring}; }
    friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
        check(x, y);
        if (x.ring == Ring::gaussian)
            return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a, x.ring};
        // zeta^2 = -1 - zeta
        Int bd = x.b * y.b;
        return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd, x.ring};
    }
    friend bool operator==(const QuadInt& x, const QuadInt& y) {
        return x.ring == y.ring && x.a == y.a && x.b == y.b;
    }

    std::string str() const {
        std::string w = ring == Ring::gaussian ? "i" : "w";
        return a.get_str() + (b >= 0 ? "+" : "") + b.get_str() + w;
    }
    friend std::ostream& operator<<(std::ostream& os, const QuadInt& x) { return os << x.str(); }

  private:
    static void check(const QuadInt& x, const QuadInt& y) {
        if (x.ring != y.ring) throw std::invalid_argument("QuadInt: mixed rings");
    }
};

inline int unit_group_order(Ring r) { return r == Ring::gaussian ? 4 : 6; }

inline std::vector<QuadInt> units(Ring r) {
    if (r == Ring::gaussian)
        return {{1, 0, r}, {0, 1, r}, {-1, 0, r}, {0, -1, r}};
    // +-1, +-zeta, +-zeta^2 with zeta^2 = -1 - zeta
    return {{1, 0, r}, {0, 1, r}, {-1, -1, r}, {-1, 0, r}, {0, -1, r}, {1, 1, r}};
}

// A root of unity zeta_n^e (orders 2, 3, 4, 6), or the symbol value 0.
struct UnitRoot {
    int order;
    int exponent;  // mod order
    bool zero = false;

    static UnitRoot make(int order, int exponent) {
        UnitRoot u;
        u.order = order;
        u.exponent = ((exponent % order) + order) % order;
        return u;
    }
    static UnitRoot zero_value(int order) {
        UnitRoot u = make(order, 0);
        u.zero = true;
        return u;
    }

    bool is_one() const { return !zero && exponent == 0; }
    bool is_pm_one() const {
        if (zero) return false;
        return exponent == 0 || 2 * exponent == order;
    }
    UnitRoot inv() const {
        if (zero) return *this;
        return make(order, -exponent);
    }
    UnitRoot pow(int k) const {
        if (zero) return *this;
        return make(order, exponent * k);
    }
    // zeta_6^(2e) = zeta_3^e and zeta_6^(3e) = (-1)^e.
    UnitRoot as_cubic() const {
        if (order != 6) throw std::invalid_argument("as_cubic: order 6 expected");
        if (!zero && exponent % 2 != 0) throw std::invalid_argument("as_cubic: value is not a cube root of unity");
        UnitRoot u = make(3, exponent / 2);
        u.zero = zero;
        return u;
    }
    UnitRoot as_quadratic() const {
        if (order != 6) throw std::invalid_argument("as_quadratic: order 6 expected");
        if (!zero && exponent % 3 != 0) throw std::invalid_argument("as_quadratic: value is not +-1");
        UnitRoot u = make(2, exponent / 3);
        u.zero = zero;
        return u;
    }
    friend UnitRoot operator*(const UnitRoot& x, const UnitRoot& y) {
        if (x.order != y.order) throw std::invalid_argument("UnitRoot: mixed orders");
        if (x.zero || y.zero) return zero_value(x.order);
        return make(x.order, x.exponent + y.exponent);
    }
    friend bool operator==(const UnitRoot& x, const UnitRoot& y) {
        if (x.zero != y.zero) return false;
        if (x.zero) return true;
        return x.order == y.order && x.exponent == y.exponent;
    }

    // The root of unity as an element of the ring (orders 4 over Z[i];
    // 2, 3, 6 over Z[zeta_3]).
    QuadInt as_quadint(Ring r) const {
        if (zero) return {0, 0, r};
        if (r == Ring::gaussian) {
            if (order != 4 && order != 2) throw std::invalid_argument("as_quadint: order 4|2 over Z[i]");
            static const std::array<std::pair<int, int>, 4> i_pow{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
            int e = (order == 2) ? 2 * exponent : exponent;
            return {i_pow[e % 4].first, i_pow[e % 4].second, r};
        }
        // zeta_6 = 1 + zeta_3; powers 0..5
        static const std::array<std::pair<int, int>, 6> z6{{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}};
        int e = exponent * (6 / order);
        return {z6[e % 6].first, z6[e % 6].second, r};
    }

    std::string str() const {
        if (zero) return "0";
        if (exponent == 0) return "1";
        if (2 * exponent == order) return "-1";
        return "zeta" + std::to_string(order) + "^" + std::to_string(exponent);
    }
};

struct PrimeFactor {
    enum Kind { split, inert, ramified } kind;
    std::optional<QuadInt> pi;  // a prime of norm p (split/ramified)
};

// Factor a rational prime in Z[i] or Z[zeta_3]; split/ramified generators
// are found by bounded search on the norm form.
inline PrimeFactor factor_rational_prime(const Int& p, Ring ring) {
    if (p < 2 || !is_prime_u64(p.get_ui()))
        throw std::invalid_argument("factor_rational_prime: p must be prime");
    Int disc = ring == Ring::gaussian ? Int(-4) : Int(-3);
    int kr = kronecker_symbol(disc, p);
    if (kr == -1) return {PrimeFactor::inert, std::nullopt};
    if (kr == 0) {
        QuadInt pi = ring == Ring::gaussian ? QuadInt(1, 1, ring) : QuadInt(1, -1, ring);
        return {PrimeFactor::ramified, pi};
    }
    if (ring == Ring::gaussian) {
        for (Int x = 1; x * x <= p; ++x) {
            Int y2 = p - x * x;
            if (is_perfect_square(y2)) {
                Int y = sqrt(y2);
                return {PrimeFactor::split, QuadInt(x, y, ring)};
            }
        }
    } else {
        // a^2 - a b + b^2 = p: solve the quadratic in b for each a
        for (Int x = 0; 3 * x * x <= 4 * p; ++x) {
            Int d = 4 * p - 3 * x * x;
            if (!is_perfect_square(d)) continue;
            Int s = sqrt(d);
            if (mpz_even_p(Int(x + s).get_mpz_t())) {
                Int y = (x + s) / 2;
                QuadInt pi(x, y, ring);
                if (pi.norm() == p) return {PrimeFactor::split, pi};
            }
        }
    }
    throw std::logic_error("factor_rational_prime: split prime without norm representation");
}

namespace detail {
inline bool divisible(const QuadInt& x, const QuadInt& m) {
    // x / m integral: multiply by conjugate, divide by the norm.
    QuadInt num = x * m.conj();
    Int n = m.norm();
    return mpz_divisible_p(num.a.get_mpz_t(), n.get_mpz_t()) &&
           mpz_divisible_p(num.b.get_mpz_t(), n.get_mpz_t());
}
}  // namespace detail

// The primary associate: the unique unit multiple u*x with
//   u*x = 1 mod (2+2i)   over Z[i]   (x odd), or
//   u*x = 1 mod 3        over Z[zeta_3]  (x coprime to 3).
// Uniqueness among all units is asserted at runtime.
inline QuadInt primary_associate(const QuadInt& x) {
    if (x.is_zero()) throw std::invalid_argument("primary_associate: zero input");
    QuadInt modulus = x.ring == Ring::gaussian ? QuadInt(2, 2, x.ring) : QuadInt(3, 0, x.ring);
    std::optional<QuadInt> found;
    int hits = 0;
    for (const QuadInt& u : units(x.ring)) {
        QuadInt cand = u * x;
        QuadInt one(1, 0, x.ring);
        if (detail::divisible(cand - one, modulus)) {
            ++hits;
            found = cand;
        }
    }
    if (hits != 1)
        throw std::invalid_argument("primary_associate: input not coprime to the normalising modulus");
    return *found;
}

// Power residue symbol (a / pi)_d for d in {3,4,6}: the unique root of
// unity congruent to a^((N(pi)-1)/d) mod pi, or 0 when pi | a.  pi must be
// a split prime, so the residue field is Z/N(pi) and omega reduces to an
// explicit root r of its minimal polynomial with pi = 0.
inline UnitRoot power_residue_symbol(const QuadInt& x, const QuadInt& pi, int degree) {
    if (degree != 3 && degree != 4 && degree != 6)
        throw std::invalid_argument("power_residue_symbol: degree must be 3, 4 or 6");
    if ((degree == 4) != (pi.ring == Ring::gaussian))
        throw std::invalid_argument("power_residue_symbol: degree incompatible with ring");
    Int p = pi.norm();
    if (!is_prime_u64(p.get_ui()))
        throw std::invalid_argument("power_residue_symbol: N(pi) must be a rational prime (split pi)");
    if (mod_floor(p - 1, degree) != 0)
        throw std::invalid_argument("power_residue_symbol: N(pi) != 1 mod degree");

    // omega = -a/b mod p (b is invertible: p | b would make pi rational)
    if (mod_floor(pi.b, p) == 0) throw std::invalid_argument("power_residue_symbol: pi not split");
    Int r = mod_floor(-pi.a * invmod(pi.b, p), p);
    auto image = [&](const QuadInt& z) { return mod_floor(z.a + z.b * r, p); };
    // sanity: omega's minimal polynomial vanishes at r
    if (pi.ring == Ring::gaussian) {
        if (mod_floor(r * r + 1, p) != 0) throw std::logic_error("residue root: r^2+1 != 0");
    } else {
        if (mod_floor(r * r + r + 1, p) != 0) throw std::logic_error("residue root: r^2+r+1 != 0");
    }

    Int ax = image(x);
    if (ax == 0) return UnitRoot::zero_value(degree);
    Int e = powmod(ax, (p - 1) / degree, p);
    for (int j = 0; j < degree; ++j) {
        UnitRoot cand = UnitRoot::make(degree, j);
        if (image(cand.as_quadint(pi.ring)) == e) return cand;
    }
    throw std::logic_error("power_residue_symbol: value matched no root of unity");
}

// Membership a + b*omega in Z + ell^k O_K: (1, omega) is a Z-basis of O_K
// for both rings, so this is ell^k | b.
inline bool in_suborder(const QuadInt& x, const Int& ell, int k) {
    if (k <= 0) return true;
    return mpz_divisible_p(x.b.get_mpz_t(), Int(pow_int(ell, k)).get_mpz_t());
}

}  // namespace cmbr
