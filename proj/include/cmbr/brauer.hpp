// Closed-form transcendental and geometric Brauer structures for E x E,
// E a CM elliptic curve with End = O_K.  Structures are emitted straight
// from the structure theorems; the matrixcert module re-derives them by
// exhaustive enumeration at small level as an independent confirmation.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmbr/grossenchar.hpp"
#include "cmbr/quadfield.hpp"

namespace cmbr {

// Finite abelian group as a product of prime-power cyclic factors,
// canonically ordered (ell ascending, exponent ascending).
struct BrauerStructure {
    std::vector<std::pair<std::uint64_t, int>> factors;  // (ell, e): Z/ell^e

    static BrauerStructure trivial() { return {}; }
    static BrauerStructure of(std::initializer_list<std::pair<std::uint64_t, int>> fs) {
        BrauerStructure s;
        for (auto& f : fs)
            if (f.second > 0) s.factors.push_back(f);
        s.canonicalize();
        return s;
    }
    void canonicalize() {
        std::erase_if(factors, [](auto& f) { return f.second == 0; });
        std::sort(factors.begin(), factors.end());
    }
    Int order() const {
        Int o = 1;
        for (auto& [l, e] : factors) o *= pow_int(Int(static_cast<unsigned long>(l)), e);
        return o;
    }
    bool is_trivial() const { return factors.empty(); }
    friend bool operator==(const BrauerStructure& a, const BrauerStructure& b) {
        return a.factors == b.factors;
    }
    std::string str() const {
        if (factors.empty()) return "0";
        std::ostringstream os;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << " x ";
            Int m = pow_int(Int(static_cast<unsigned long>(factors[i].first)), factors[i].second);
            os << "Z/" << m.get_str();
        }
        return os.str();
    }
};

inline int ord_ell_of_disc(const Int& disc, const Int& ell) {
    if (!is_fundamental_discriminant(disc))
        throw std::invalid_argument("disc is not a fundamental imaginary quadratic discriminant");
    int v = v_p(disc, ell);
    if (ell == 2) {
        if (v != 0 && v != 2 && v != 3) throw std::logic_error("ord_2(disc) outside {0,2,3}");
    } else if (v > 1) {
        throw std::logic_error("ord_ell(disc) outside {0,1} for odd ell");
    }
    return v;
}

// m(ell) for y^2 = x^3 + D:  m(2) = 1 iff D is a cube, m(3) = 1 iff 4D is
// a cube, zero at every other prime.
inline int m_exact_j0(const Int& D, const Int& ell) {
    if (D == 0) throw std::invalid_argument("m_exact_j0: D must be nonzero");
    if (ell == 2) return is_perfect_cube(D) ? 1 : 0;
    if (ell == 3) return is_perfect_cube(4 * D) ? 1 : 0;
    return 0;
}

// m(ell) for y^2 = x^3 - Dx:  m(2) = 1 iff D is a square in Z[i]
// (equivalently D or -D is a square in Z), zero at odd primes.
inline int m_exact_j1728(const Int& D, const Int& ell) {
    if (D == 0) throw std::invalid_argument("m_exact_j1728: D must be nonzero");
    if (ell != 2) return 0;
    return (is_perfect_square(D) || is_perfect_square(-D)) ? 1 : 0;
}

enum class MProvenance { closed_form, user_supplied, empirical };

struct CurveContext {
    Int disc;
    bool cm_in_base = false;  // K contained in the field of definition
    std::map<std::uint64_t, int> m;
    bool full_two_torsion = false;  // E_2 = E_2(L)
    MProvenance provenance = MProvenance::user_supplied;

    int m_of(const Int& ell) const {
        auto it = m.find(ell.get_ui());
        if (it == m.end()) throw std::invalid_argument("CurveContext: m(ell) not supplied");
        if (it->second < 0) throw std::invalid_argument("CurveContext: m(ell) must be >= 0");
        return it->second;
    }
};

// (Br / Br_1)_{ell^infty}: (Z/ell^m)^2 when K is in the base field, Z/ell^m
// otherwise -- except ell = 2, 2 | disc, m >= 1 with full rational
// 2-torsion, where an extra Z/2 appears.
inline BrauerStructure transcendental_structure(const CurveContext& ctx, const Int& ell) {
    ord_ell_of_disc(ctx.disc, ell);
    int m = ctx.m_of(ell);
    std::uint64_t l = ell.get_ui();
    if (ctx.cm_in_base) return BrauerStructure::of({{l, m}, {l, m}});
    if (ell == 2 && mpz_even_p(ctx.disc.get_mpz_t()) && m >= 1 && ctx.full_two_torsion)
        return BrauerStructure::of({{l, m}, {l, 1}});
    return BrauerStructure::of({{l, m}});
}

// Br(Ebar x Ebar)^{Gamma_L}_{ell^infty}: with v = ord_ell(disc),
//   K in L:      Z/ell^{m+floor(v/2)} x Z/ell^{m+ceil(v/2)}
//   K not in L:  Z/ell^{m+v}, except ell = 2 | disc: Z/2^{m+v-1} x Z/2.
inline BrauerStructure geometric_structure(const CurveContext& ctx, const Int& ell) {
    int v = ord_ell_of_disc(ctx.disc, ell);
    int m = ctx.m_of(ell);
    std::uint64_t l = ell.get_ui();
    if (ctx.cm_in_base) return BrauerStructure::of({{l, m + v / 2}, {l, m + (v + 1) / 2}});
    int k = m + v;
    if (ell == 2 && v > 0) return BrauerStructure::of({{l, k - 1}, {l, 1}});
    return BrauerStructure::of({{l, k}});
}

// The odd-order classification: a transcendental class of odd order exists
// iff the curve is a twist y^2 = x^3 + 2c^3 (i.e. 4D is a cube); returns c.
inline std::optional<Rat> classify_odd_transcendental(const Int& D) {
    Int Dn = kth_power_free(D, 6);
    Int root;
    if (!integer_cbrt(4 * Dn, root)) return std::nullopt;
    Rat c(root, 2);
    c.canonicalize();
    return c;
}

// |H^1(<conj>, O)| for the order O = Z[f alpha], alpha = (disc+sqrt(disc))/2:
// the quotient of the kernel lattice of 1+conj by the image lattice of
// conj-1, computed on the basis (1, f alpha).  conj acts by
// 1 -> 1, f alpha -> f disc - f alpha.
inline int h1_conjugation(const Int& disc, const Int& f) {
    if (!is_fundamental_discriminant(disc)) throw std::invalid_argument("h1_conjugation: bad disc");
    if (f < 1) throw std::invalid_argument("h1_conjugation: conductor must be >= 1");
    Int fd = f * disc;
    // kernel of x + conj(x): coordinates (u, v) with 2u + fd v = 0
    Int ker_u, ker_v;
    if (mpz_even_p(fd.get_mpz_t())) {
        ker_u = -fd / 2;
        ker_v = 1;
    } else {
        ker_u = -fd;
        ker_v = 2;
    }
    // image of conj(x) - x: generated by (fd, -2)
    Int im_u = fd, im_v = -2;
    // both lattices are rank one; the quotient order is the ratio of the
    // primitive vectors' contents along the common line
    if (ker_u * im_v != ker_v * im_u && ker_u * im_v != -ker_v * im_u)
        throw std::logic_error("h1_conjugation: kernel and image not collinear");
    Int idx;
    if (ker_v != 0) {
        if (mod_floor(im_v, ker_v) != 0) throw std::logic_error("h1_conjugation: image not inside kernel");
        idx = abs(im_v / ker_v);
    } else {
        idx = abs(im_u / ker_u);
    }
    return static_cast<int>(idx.get_si());
}

// Report for the L-inside-Hilbert-class-field theorem: n(ell) with the
// special-case tag, and the corollary Br = Br_1 when the unit group is
// {+-1} and disc != 1 mod 8.
struct LinKReport {
    RingClassBound n;
    std::optional<int> special_case;  // 1: disc=-3 & ell<=3; 2: disc=-4 & ell=2; 3: disc=1 mod 8 & ell=2
    bool brauer_equals_algebraic = false;
};

inline LinKReport link_report(const Int& disc, const Int& ell) {
    auto f = ImQuadField::from_disc(disc);
    LinKReport r;
    r.n = n_of_ell(f, ell, 1, true);
    if (disc == -3 && ell <= 3) r.special_case = 1;
    else if (disc == -4 && ell == 2) r.special_case = 2;
    else if (mod_floor(disc, 8) == 1 && ell == 2) r.special_case = 3;
    r.brauer_equals_algebraic = (f.unit_count == 2) && (mod_floor(disc, 8) != 1);
    return r;
}

}  // namespace cmbr
