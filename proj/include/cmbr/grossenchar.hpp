// Grossencharacter evaluation for the two CM families over Q,
//   y^2 = x^3 - Dx  (CM by Z[i])      psi(q) = (D/pi)_4^{-1} pi,
//   y^2 = x^3 + D   (CM by Z[zeta_3]) psi(q) = (4D/pi)_6^{-1} pi,
// with pi the primary generator of a split prime of good reduction.
// Sampling over split primes yields empirical estimates of m(ell) and
// witness primes certifying m(ell) = 0.
//
// Only split primes are sampled: at inert good primes the character value
// is a rational integer times a unit, which lies in Z + ell^k O_K for every
// odd ell and never witnesses failure.  Primes are enumerated in increasing
// norm and results are merged by minimum, so the output is independent of
// evaluation order.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "cmbr/quadint.hpp"

namespace cmbr {

struct CurveJ0 {
    Int D_raw;
    Int D;  // sixth-power-free representative (same curve up to Q-isomorphism)
    explicit CurveJ0(const Int& d) : D_raw(d), D(kth_power_free(d, 6)) {
        if (d == 0) throw std::invalid_argument("CurveJ0: D must be nonzero");
    }
    static constexpr Ring ring = Ring::eisenstein;
    Int bad_primes_product() const { return 6 * D; }
};

struct CurveJ1728 {
    Int D_raw;
    Int D;  // fourth-power-free
    explicit CurveJ1728(const Int& d) : D_raw(d), D(kth_power_free(d, 4)) {
        if (d == 0) throw std::invalid_argument("CurveJ1728: D must be nonzero");
    }
    static constexpr Ring ring = Ring::gaussian;
    Int bad_primes_product() const { return 2 * D; }
};

struct PsiSample {
    std::uint64_t prime_norm = 0;
    QuadInt pi_primary{0, 0, Ring::gaussian};
    QuadInt psi{0, 0, Ring::gaussian};
    // largest k (capped) with psi in Z + ell^k O_K, per requested ell
    std::map<std::uint64_t, int> max_k_membership;
    // whether some unit multiple of pi lies in Z + (2 ell) O_K resp.
    // Z + (3 ell) O_K, the complete-splitting condition in the auxiliary
    // ring class field
    bool aux_order_split = false;
};

namespace detail {

inline int membership_k(const QuadInt& psi, const Int& ell, int cap) {
    int k = 0;
    while (k < cap && in_suborder(psi, ell, k + 1)) ++k;
    return k;
}

inline bool admissible_prime(std::uint64_t q, Ring ring, const Int& bad, const Int& extra_coprime) {
    Int Q(static_cast<unsigned long>(q));
    if (ring == Ring::gaussian && q % 4 != 1) return false;     // split in Q(i)
    if (ring == Ring::eisenstein && q % 3 != 1) return false;   // split in Q(zeta_3)
    if (gcd(Q, bad) != 1) return false;
    if (gcd(Q, extra_coprime) != 1) return false;
    return true;
}

}  // namespace detail

// Of the two conjugate primes above a split q, fix the one whose primary
// generator has positive omega-coefficient.  The conjugate of a primary
// element is again primary, so exactly one choice qualifies; membership in
// Z + ell^k O_K is conjugation-invariant, so estimates do not depend on
// this convention.
inline QuadInt canonical_primary_prime(const Int& q, Ring ring) {
    auto f = factor_rational_prime(q, ring);
    if (f.kind != PrimeFactor::split)
        throw std::invalid_argument("canonical_primary_prime: prime does not split");
    QuadInt p = primary_associate(*f.pi);
    return p.b > 0 ? p : p.conj();
}

// psi for y^2 = x^3 - Dx at a split prime of norm q coprime to 2D.
inline QuadInt psi_j1728(const CurveJ1728& e, std::uint64_t q) {
    Int Q(static_cast<unsigned long>(q));
    if (gcd(Q, e.bad_primes_product()) != 1)
        throw std::invalid_argument("psi_j1728: prime of bad reduction");
    QuadInt pi = canonical_primary_prime(Q, Ring::gaussian);
    UnitRoot s = power_residue_symbol(QuadInt(e.D, 0, Ring::gaussian), pi, 4);
    return s.inv().as_quadint(Ring::gaussian) * pi;
}

// psi for y^2 = x^3 + D at a split prime of norm q coprime to 6D.
inline QuadInt psi_j0(const CurveJ0& e, std::uint64_t q) {
    Int Q(static_cast<unsigned long>(q));
    if (gcd(Q, e.bad_primes_product()) != 1)
        throw std::invalid_argument("psi_j0: prime of bad reduction");
    QuadInt pi = canonical_primary_prime(Q, Ring::eisenstein);
    UnitRoot s = power_residue_symbol(QuadInt(4 * e.D, 0, Ring::eisenstein), pi, 6);
    return s.inv().as_quadint(Ring::eisenstein) * pi;
}

template <class Curve>
inline QuadInt psi_value(const Curve& e, std::uint64_t q) {
    if constexpr (std::is_same_v<Curve, CurveJ0>)
        return psi_j0(e, q);
    else
        return psi_j1728(e, q);
}

template <class Curve>
inline PsiSample make_sample(const Curve& e, std::uint64_t q, const std::vector<Int>& ells, int cap,
                             const Int& aux_conductor) {
    PsiSample s;
    s.prime_norm = q;
    Int Q(static_cast<unsigned long>(q));
    s.pi_primary = canonical_primary_prime(Q, Curve::ring);
    s.psi = psi_value(e, q);
    for (const Int& ell : ells)
        s.max_k_membership[ell.get_ui()] = detail::membership_k(s.psi, ell, cap);
    for (const QuadInt& u : units(Curve::ring)) {
        if (in_suborder(u * s.pi_primary, aux_conductor, 1)) {
            s.aux_order_split = true;
            break;
        }
    }
    return s;
}

struct MEstimate {
    int max_consistent_k = 0;  // min over samples; empirical upper bound for m(ell)
    std::vector<PsiSample> witnesses;
    std::size_t sample_count = 0;
};

// Empirical estimate of m(ell): iterate split good primes of norm <= bound,
// take the minimum over samples of the largest k with psi in O_{ell^k}
// (capped).  Equals m(ell) whenever a witness violating O_{ell^{k+1}}
// appears below the bound; with no admissible primes the result is empty.
template <class Curve>
inline std::optional<MEstimate> estimate_m(const Curve& e, const Int& ell, std::uint64_t norm_bound,
                                           int cap = 8) {
    MEstimate out;
    out.max_consistent_k = cap;
    Int aux = (Curve::ring == Ring::gaussian ? 2 : 3) * ell;
    for (auto q : primes_up_to(static_cast<std::uint32_t>(norm_bound))) {
        if (!detail::admissible_prime(q, Curve::ring, e.bad_primes_product(), 1)) continue;
        PsiSample s = make_sample(e, q, {ell}, cap, aux);
        ++out.sample_count;
        int k = s.max_k_membership.at(ell.get_ui());
        if (k < out.max_consistent_k) {
            out.max_consistent_k = k;
            out.witnesses.clear();
        }
        if (k == out.max_consistent_k) out.witnesses.push_back(s);
    }
    if (out.sample_count == 0) return std::nullopt;
    return out;
}

// Witness prime certifying m(ell_target) = 0: the minimal-norm split prime
// of good reduction, coprime to 2*ell (resp. 3*ell), whose character value
// fails the O_{ell_target} membership.  By the definition of m this alone
// forces m(ell_target) = 0; the sample additionally records whether the
// complete-splitting condition in K_{2 ell} (resp. K_{3 ell}) holds, which
// is the hypothesis shape of the class-field-theoretic vanishing criteria.
template <class Curve>
inline std::optional<PsiSample> witness_prime(const Curve& e, const Int& ell_target,
                                              std::uint64_t norm_bound) {
    if (ell_target != 2 && ell_target != 3)
        throw std::invalid_argument("witness_prime: target must be 2 or 3");
    Int base = Curve::ring == Ring::gaussian ? 2 : 3;
    Int aux = base * ell_target;
    for (auto q : primes_up_to(static_cast<std::uint32_t>(norm_bound))) {
        if (!detail::admissible_prime(q, Curve::ring, e.bad_primes_product(), aux)) continue;
        PsiSample s = make_sample(e, q, {ell_target}, 8, aux);
        if (s.max_k_membership.at(ell_target.get_ui()) == 0) return s;
    }
    return std::nullopt;
}

}  // namespace cmbr
