// Arbitrary-precision integer and rational helpers shared by all modules.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cmbr {

using Int = mpz_class;
using Rat = mpq_class;

// Sentinel valuation for 0 (larger than anything we ever compare against).
inline constexpr int kValInfinity = std::numeric_limits<int>::max() / 4;

struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline int v_p(const Int& x, const Int& p) {
    if (x == 0) return kValInfinity;
    Int t = abs(x);
    int v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

inline int v_p(const Rat& x, const Int& p) {
    if (x == 0) return kValInfinity;
    return v_p(Int(x.get_num()), p) - v_p(Int(x.get_den()), p);
}

inline Int powmod(const Int& b, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Least non-negative residue.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int invmod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("invmod: not invertible");
    return r;
}

inline bool is_perfect_square(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// Cube root over Z including negative arguments; returns true iff exact.
inline bool integer_cbrt(const Int& n, Int& root) {
    Int a = abs(n);
    Int r;
    int exact = mpz_root(r.get_mpz_t(), a.get_mpz_t(), 3);
    root = (n < 0) ? Int(-r) : r;
    return exact != 0;
}

inline bool is_perfect_cube(const Int& n) {
    Int r;
    return integer_cbrt(n, r);
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
    std::vector<bool> sieve(n + 1, true);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= n; j += i) sieve[j] = false;
    }
    return out;
}

inline std::vector<Int> prime_factors(Int n) {
    std::vector<Int> out;
    n = abs(n);
    for (Int p = 2; p * p <= n; ++p) {
        if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            out.push_back(p);
            while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()))
                mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline bool is_squarefree(const Int& n) {
    Int m = abs(n);
    if (m == 0) return false;
    for (Int p = 2; p * p <= m; ++p) {
        int v = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
            if (++v > 1) return false;
        }
    }
    return true;
}

// Strips k-th power factors, returning the minimal-|.|  representative of n
// modulo k-th powers of integers (used for twist normalisation).
inline Int kth_power_free(Int n, unsigned k) {
    if (n == 0) throw std::invalid_argument("kth_power_free: zero");
    for (Int p = 2;; ++p) {
        Int pk = pow_int(p, k);
        if (pk > abs(n)) break;
        while (mpz_divisible_p(n.get_mpz_t(), pk.get_mpz_t()))
            mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), pk.get_mpz_t());
    }
    return n;
}

}  // namespace cmbr
