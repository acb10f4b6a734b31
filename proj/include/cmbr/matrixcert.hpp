// Brute-force verification of the endomorphism-ring lemmas behind the
// Brauer structure theorems, over M_2(Z/ell^k) at small level.
//
// The CM order acts on ell^k-torsion through the matrix A of
// alpha = (disc + sqrt(disc))/2 in the basis (P, alpha P); the Galois group
// of the CM field acts by conjugation by the invertible elements a + b alpha
// with ord_ell(b) >= m, and an outer involution acts through any invertible
// T with T A = Abar T.  Everything here is established by exhaustive
// enumeration; budgets fail loudly because the certification value depends
// on exhaustiveness.
#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmbr/brauer.hpp"
#include "cmbr/integers.hpp"

namespace cmbr {

struct Mat2 {
    std::uint32_t n = 0;               // modulus
    std::array<std::uint32_t, 4> e{};  // row major: e[0] e[1] / e[2] e[3]

    Mat2() = default;
    Mat2(std::uint32_t n_, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d)
        : n(n_), e{a % n_, b % n_, c % n_, d % n_} {}

    static Mat2 identity(std::uint32_t n) { return n == 1 ? Mat2(1, 0, 0, 0, 0) : Mat2(n, 1, 0, 0, 1); }
    static Mat2 zero(std::uint32_t n) { return Mat2(n, 0, 0, 0, 0); }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 r;
        r.n = x.n;
        std::uint64_t n = x.n;
        r.e[0] = static_cast<std::uint32_t>((std::uint64_t(x.e[0]) * y.e[0] + std::uint64_t(x.e[1]) * y.e[2]) % n);
        r.e[1] = static_cast<std::uint32_t>((std::uint64_t(x.e[0]) * y.e[1] + std::uint64_t(x.e[1]) * y.e[3]) % n);
        r.e[2] = static_cast<std::uint32_t>((std::uint64_t(x.e[2]) * y.e[0] + std::uint64_t(x.e[3]) * y.e[2]) % n);
        r.e[3] = static_cast<std::uint32_t>((std::uint64_t(x.e[2]) * y.e[1] + std::uint64_t(x.e[3]) * y.e[3]) % n);
        return r;
    }
    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        Mat2 r;
        r.n = x.n;
        for (int i = 0; i < 4; ++i) r.e[i] = (x.e[i] + y.e[i]) % x.n;
        return r;
    }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        Mat2 r;
        r.n = x.n;
        for (int i = 0; i < 4; ++i) r.e[i] = (x.e[i] + x.n - y.e[i]) % x.n;
        return r;
    }
    friend bool operator==(const Mat2& x, const Mat2& y) { return x.n == y.n && x.e == y.e; }
    friend bool operator<(const Mat2& x, const Mat2& y) { return x.e < y.e; }

    Mat2 scaled(std::uint64_t s) const {
        Mat2 r;
        r.n = n;
        for (int i = 0; i < 4; ++i) r.e[i] = static_cast<std::uint32_t>((s % n) * e[i] % n);
        return r;
    }
    std::uint32_t det() const {
        return static_cast<std::uint32_t>(
            ((std::uint64_t(e[0]) * e[3]) % n + n - (std::uint64_t(e[1]) * e[2]) % n) % n);
    }
    bool is_zero() const { return e[0] == 0 && e[1] == 0 && e[2] == 0 && e[3] == 0; }
};

namespace m2 {

inline std::uint32_t pow_u32(std::uint64_t b, int k) {
    std::uint64_t r = 1;
    while (k-- > 0) r *= b;
    if (r > (1u << 30)) throw budget_exceeded("modulus ell^k too large");
    return static_cast<std::uint32_t>(r);
}

inline bool unit_mod(std::uint32_t x, std::uint32_t ell) { return x % ell != 0; }

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t n) {
    if (n == 1) return 0;
    std::int64_t t = 0, newt = 1, r = n, newr = a % n;
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: not invertible");
    return static_cast<std::uint32_t>((t % n + n) % n);
}

inline Mat2 inverse(const Mat2& x, std::uint32_t ell) {
    if (x.n == 1) return x;
    std::uint32_t d = x.det();
    if (!unit_mod(d, ell)) throw std::invalid_argument("Mat2 inverse: determinant not a unit");
    std::uint32_t di = inv_mod(d, x.n);
    Mat2 adj(x.n, x.e[3], (x.n - x.e[1]) % x.n, (x.n - x.e[2]) % x.n, x.e[0]);
    return adj.scaled(di);
}

}  // namespace m2

// Matrix of alpha = (disc + sqrt(disc))/2 in the basis (P, alpha P):
//   [ 0  disc(1-disc)/4 ]
//   [ 1  disc           ]
inline Mat2 alpha_matrix(const Int& disc, const Int& ell, int k) {
    ord_ell_of_disc(disc, 2);  // validates disc as a fundamental discriminant
    std::uint32_t n = m2::pow_u32(ell.get_ui(), k);
    Int c = disc * (1 - disc) / 4;
    std::uint32_t c_mod = static_cast<std::uint32_t>(mod_floor(c, n).get_ui());
    std::uint32_t d_mod = static_cast<std::uint32_t>(mod_floor(disc, n).get_ui());
    return Mat2(n, 0, c_mod, n == 1 ? 0 : 1, d_mod);
}

namespace m2 {

// N lies in {aI + bA} iff its entries satisfy n12 = n21 c, n22 = n11 + n21 d
// with c = disc(1-disc)/4 and d = disc (reading a = n11, b = n21).
struct SpanTester {
    std::uint32_t n, c, d;
    explicit SpanTester(const Mat2& A) : n(A.n), c(A.e[1]), d(A.e[3]) {}
    bool operator()(const Mat2& M) const {
        if (n == 1) return true;
        return M.e[1] == static_cast<std::uint32_t>(std::uint64_t(M.e[2]) * c % n) &&
               M.e[3] == static_cast<std::uint32_t>((M.e[0] + std::uint64_t(M.e[2]) * d) % n);
    }
    // coordinates (a, b) of a span element, plus the class representative
    // (t, u) of an arbitrary matrix modulo the span: M = aI + bA + [[0,t],[0,u]]
    std::pair<std::uint32_t, std::uint32_t> class_rep(const Mat2& M) const {
        if (n == 1) return {0, 0};
        std::uint32_t a = M.e[0], b = M.e[2];
        std::uint32_t t = (M.e[1] + n - static_cast<std::uint32_t>(std::uint64_t(b) * c % n)) % n;
        std::uint32_t u = (M.e[3] + n - static_cast<std::uint32_t>((a + std::uint64_t(b) * d) % n)) % n;
        return {t, u};
    }
};

// Conjugation by a + b alpha depends on (a : b) only up to unit scalars, so
// the full admissible set {a + b alpha invertible, ord_ell(b) >= m} is
// covered by I + b'A (b' of valuation >= m) together with a'I + A (a'
// divisible by ell, admissible only when m = 0), filtered by unit
// determinant.
inline std::vector<Mat2> conjugator_reps(const Mat2& A, std::uint32_t ell, int m) {
    std::vector<Mat2> out;
    if (A.n == 1) return out;
    std::uint64_t lm = 1;
    for (int i = 0; i < m && lm <= A.n; ++i) lm *= ell;
    Mat2 I = Mat2::identity(A.n);
    for (std::uint64_t b = 0; b < A.n; ++b) {
        if (b % lm != 0) continue;
        Mat2 g = I + A.scaled(b);
        if (b != 0 && unit_mod(g.det(), ell)) out.push_back(g);
    }
    if (m == 0) {
        for (std::uint64_t a = 0; a < A.n; a += ell) {
            Mat2 g = I.scaled(a) + A;
            if (unit_mod(g.det(), ell)) out.push_back(g);
        }
    }
    return out;
}

inline void check_budget(const Int& ell, int k, std::uint32_t limit = 32) {
    if (k < 0) throw std::invalid_argument("negative exponent");
    Int lk = pow_int(ell, k);
    if (lk > limit) throw budget_exceeded("enumeration budget ell^k <= " + std::to_string(limit) +
                                          " exceeded");
}

}  // namespace m2

// Smallest possible ord_ell(b) among the invertible a + b alpha.  For
// disc = 1 mod 8 and ell = 2, elements of odd norm force b even, so no
// curve can have m(2) = 0 there; values of m below this floor do not
// correspond to any Grossencharacter image and are rejected.
inline int forced_m_floor(const Int& disc, const Int& ell) {
    return (ell == 2 && mod_floor(disc, 8) == 1) ? 1 : 0;
}

inline void require_realizable_m(const Int& disc, const Int& ell, int m) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (m < forced_m_floor(disc, ell))
        throw std::invalid_argument(
            "m below the forced floor: for disc = 1 mod 8 every invertible a+b*alpha has even b, "
            "so m(2) >= 1 for every curve");
}

// Exhaustive check that the centraliser of A in M_2(Z/ell^k) is exactly the
// subring {aI + bA}; both sets must have ell^(2k) elements.
struct PlusSubringReport {
    bool ok = false;
    std::uint64_t centralizer_count = 0;
    std::uint64_t span_count = 0;
};

inline PlusSubringReport plus_subring_check(const Int& disc, const Int& ell, int k) {
    m2::check_budget(ell, k);
    Mat2 A = alpha_matrix(disc, ell, k);
    std::uint32_t n = A.n;
    PlusSubringReport rep;
    if (n == 1) {
        rep.ok = true;
        rep.centralizer_count = rep.span_count = 1;
        return rep;
    }
    m2::SpanTester in_span(A);
    std::uint64_t both = 0, central = 0, span = 0;
    Mat2 M(n, 0, 0, 0, 0);
    for (std::uint64_t i = 0; i < std::uint64_t(n) * n * n * n; ++i) {
        std::uint64_t v = i;
        for (int j = 0; j < 4; ++j) {
            M.e[j] = static_cast<std::uint32_t>(v % n);
            v /= n;
        }
        bool commutes = (A * M == M * A);
        bool spans = in_span(M);
        central += commutes;
        span += spans;
        both += (commutes && spans);
    }
    rep.centralizer_count = central;
    rep.span_count = span;
    std::uint64_t expect = std::uint64_t(n) * n;
    rep.ok = (central == span) && (both == central) && (central == expect);
    return rep;
}

// Counts of endomorphisms and of classes modulo {aI + bA} fixed by every
// admissible conjugation, each verified against the commutation criterion
// (ell^m (A M - M A) = 0, resp. in the span) element by element.
struct FixedCountReport {
    std::uint64_t fixed_endos = 0;
    std::uint64_t fixed_classes = 0;
    bool model_matches_criterion = false;
};

inline FixedCountReport fixed_class_count(const Int& disc, const Int& ell, int k, int m) {
    m2::check_budget(ell, k);
    require_realizable_m(disc, ell, m);
    Mat2 A = alpha_matrix(disc, ell, k);
    std::uint32_t n = A.n;
    FixedCountReport rep;
    if (n == 1) {
        rep.fixed_endos = rep.fixed_classes = 1;
        rep.model_matches_criterion = true;
        return rep;
    }
    std::uint32_t l = static_cast<std::uint32_t>(ell.get_ui());
    auto gs = m2::conjugator_reps(A, l, m);
    std::vector<Mat2> ginv;
    ginv.reserve(gs.size());
    for (const auto& g : gs) ginv.push_back(m2::inverse(g, l));
    m2::SpanTester in_span(A);
    std::uint64_t lm = 1;
    for (int i = 0; i < m; ++i) lm = lm * l % n;  // ell^m mod n (0 when m >= k)
    if (m >= k) lm = 0;

    bool agree = true;
    // classes: representatives [[0,t],[0,u]]
    for (std::uint64_t t = 0; t < n; ++t) {
        for (std::uint64_t u = 0; u < n; ++u) {
            Mat2 M(n, 0, static_cast<std::uint32_t>(t), 0, static_cast<std::uint32_t>(u));
            bool fixed_by_model = true;
            for (std::size_t i = 0; i < gs.size() && fixed_by_model; ++i)
                fixed_by_model = in_span(gs[i] * M * ginv[i] - M);
            Mat2 comm = (A * M - M * A).scaled(lm);
            bool criterion = in_span(comm);
            agree = agree && (fixed_by_model == criterion);
            rep.fixed_classes += fixed_by_model;
        }
    }
    // endomorphisms: all of M_2
    Mat2 M(n, 0, 0, 0, 0);
    for (std::uint64_t i = 0; i < std::uint64_t(n) * n * n * n; ++i) {
        std::uint64_t v = i;
        for (int j = 0; j < 4; ++j) {
            M.e[j] = static_cast<std::uint32_t>(v % n);
            v /= n;
        }
        bool fixed_by_model = true;
        for (std::size_t gi = 0; gi < gs.size() && fixed_by_model; ++gi)
            fixed_by_model = (gs[gi] * M == M * gs[gi]);
        Mat2 comm = (A * M - M * A).scaled(lm);
        bool criterion = comm.is_zero();
        // the endomorphism criterion in subring form: ell^m M in {aI + bA}
        bool subring_form = in_span(M.scaled(lm));
        agree = agree && (fixed_by_model == criterion) && (criterion == subring_form);
        rep.fixed_endos += fixed_by_model;
    }
    rep.model_matches_criterion = agree;
    return rep;
}

// All invertible T with T A = Abar T (Abar = disc*I - A), or a single
// solution when the full enumeration exceeds the budget.
inline std::vector<Mat2> tau_models(const Int& disc, const Int& ell, int k, bool enumerate_all) {
    m2::check_budget(ell, k);
    Mat2 A = alpha_matrix(disc, ell, k);
    std::uint32_t n = A.n;
    if (n == 1) return {Mat2(1, 0, 0, 0, 0)};
    std::uint32_t l = static_cast<std::uint32_t>(ell.get_ui());
    std::uint32_t d_mod = static_cast<std::uint32_t>(mod_floor(disc, n).get_ui());
    Mat2 Abar = Mat2::identity(n).scaled(d_mod) - A;
    std::vector<Mat2> out;
    Mat2 T(n, 0, 0, 0, 0);
    for (std::uint64_t i = 0; i < std::uint64_t(n) * n * n * n; ++i) {
        std::uint64_t v = i;
        for (int j = 0; j < 4; ++j) {
            T.e[j] = static_cast<std::uint32_t>(v % n);
            v /= n;
        }
        if (!(T * A == Abar * T)) continue;
        if (!m2::unit_mod(T.det(), l)) continue;
        out.push_back(T);
        if (!enumerate_all) break;
    }
    if (out.empty()) throw std::invalid_argument("tau_models: no invertible intertwiner exists");
    return out;
}

// The five valuation equivalences for elements (a + b alpha) tau, checked
// by direct matrix computation against the stated thresholds.
struct TauLemmaReport {
    bool all_hold = true;
    std::uint64_t models_checked = 0;
    std::uint64_t pairs_checked = 0;
    std::string counterexample;  // empty when all_hold
};

namespace m2 {
inline int val_u32(std::uint32_t x, std::uint32_t ell, int k) {
    if (x == 0) return k;  // treated as >= k (everything mod ell^k)
    int v = 0;
    while (x % ell == 0) {
        x /= ell;
        ++v;
    }
    return v;
}
}  // namespace m2

inline TauLemmaReport tau_lemma_check(const Int& disc, const Int& ell, int k, int m) {
    m2::check_budget(ell, k);
    require_realizable_m(disc, ell, m);
    TauLemmaReport rep;
    Mat2 A = alpha_matrix(disc, ell, k);
    std::uint32_t n = A.n;
    if (n == 1) {
        rep.models_checked = 1;
        return rep;
    }
    std::uint32_t l = static_cast<std::uint32_t>(ell.get_ui());
    int v = ord_ell_of_disc(disc, ell);
    bool all_T = (n <= 16);
    auto Ts = tau_models(disc, ell, k, all_T);
    auto gs = m2::conjugator_reps(A, l, m);
    std::vector<Mat2> ginv;
    for (const auto& g : gs) ginv.push_back(m2::inverse(g, l));
    m2::SpanTester in_span(A);
    std::uint32_t d_mod = static_cast<std::uint32_t>(mod_floor(disc, n).get_ui());
    Mat2 sqrt_disc = A.scaled(2) - Mat2::identity(n).scaled(d_mod);  // 2 alpha - disc

    auto fail = [&](const char* part, const Mat2& T, std::uint32_t a, std::uint32_t b) {
        rep.all_hold = false;
        if (rep.counterexample.empty())
            rep.counterexample = std::string(part) + " fails at a=" + std::to_string(a) +
                                 " b=" + std::to_string(b);
    };

    for (const Mat2& T : Ts) {
        ++rep.models_checked;
        Mat2 Tinv = m2::inverse(T, l);
        for (std::uint64_t a = 0; a < n; ++a) {
            for (std::uint64_t b = 0; b < n; ++b) {
                ++rep.pairs_checked;
                std::uint32_t au = static_cast<std::uint32_t>(a), bu = static_cast<std::uint32_t>(b);
                Mat2 elem = (Mat2::identity(n).scaled(a) + A.scaled(b)) * T;
                int va = m2::val_u32(au, l, k), vb = m2::val_u32(bu, l, k);

                // (1) class fixed by all admissible conjugations
                bool lhs = true;
                for (std::size_t i = 0; i < gs.size() && lhs; ++i)
                    lhs = in_span(gs[i] * elem * ginv[i] - elem);
                bool rhs = va >= k - m - v && vb >= k - m - v;
                if (lhs != rhs) fail("part 1", T, au, bu);

                // (2) class fixed by tau
                lhs = in_span(T * elem * Tinv - elem);
                rhs = vb >= k - v;
                if (lhs != rhs) fail("part 2", T, au, bu);

                // (3) membership in the subring {xI + yA}
                lhs = in_span(elem);
                rhs = va >= k - v / 2 && vb >= k - (v + 1) / 2;
                if (lhs != rhs) fail("part 3", T, au, bu);

                // (4) endomorphism fixed by all admissible conjugations
                lhs = true;
                for (std::size_t i = 0; i < gs.size() && lhs; ++i)
                    lhs = (gs[i] * elem == elem * gs[i]);
                rhs = va >= k - m - v / 2 && vb >= k - m - (v + 1) / 2;
                if (lhs != rhs) fail("part 4", T, au, bu);

                // (5) endomorphism fixed by tau
                lhs = (T * elem * Tinv == elem);
                rhs = vb >= k - v / 2;
                if (lhs != rhs) fail("part 5", T, au, bu);
            }
        }
    }
    return rep;
}

// Group structure of the fixed classes: the subgroup of
// End/(aI+bA) ~ (Z/ell^k)^2 fixed by all admissible conjugations, and the
// subgroup additionally fixed by tau-conjugation.
struct CensusReport {
    BrauerStructure cm_galois_fixed;   // classes fixed by the CM-field Galois action
    BrauerStructure full_galois_fixed; // additionally fixed by tau
};

namespace m2 {

inline BrauerStructure subgroup_structure(const std::set<std::pair<std::uint32_t, std::uint32_t>>& S,
                                          std::uint32_t n, std::uint32_t ell) {
    // a subgroup of (Z/n)^2 with n = ell^k is Z/ell^e1 x Z/ell^e2,
    // determined by its order and exponent
    std::uint64_t order = S.size();
    std::uint64_t expo = 1;
    for (auto& [t, u] : S) {
        std::uint64_t ot = n / std::gcd<std::uint64_t>(n, t);
        std::uint64_t ou = n / std::gcd<std::uint64_t>(n, u);
        expo = std::max(expo, std::max(ot, ou));
    }
    int e_total = 0, e2 = 0;
    for (std::uint64_t x = order; x > 1; x /= ell) {
        if (x % ell != 0) throw std::logic_error("subgroup order is not an ell-power");
        ++e_total;
    }
    for (std::uint64_t x = expo; x > 1; x /= ell) ++e2;
    int e1 = e_total - e2;
    if (e1 < 0 || e1 > e2) throw std::logic_error("inconsistent subgroup invariants");
    return BrauerStructure::of({{ell, e1}, {ell, e2}});
}

}  // namespace m2

inline CensusReport structure_census(const Int& disc, const Int& ell, int k, int m, const Mat2& T) {
    m2::check_budget(ell, k);
    require_realizable_m(disc, ell, m);
    Mat2 A = alpha_matrix(disc, ell, k);
    std::uint32_t n = A.n;
    CensusReport rep;
    if (n == 1) return rep;
    if (T.n != n) throw std::invalid_argument("structure_census: tau model has wrong modulus");
    std::uint32_t l = static_cast<std::uint32_t>(ell.get_ui());
    auto gs = m2::conjugator_reps(A, l, m);
    std::vector<Mat2> ginv;
    for (const auto& g : gs) ginv.push_back(m2::inverse(g, l));
    Mat2 Tinv = m2::inverse(T, l);
    m2::SpanTester in_span(A);

    std::set<std::pair<std::uint32_t, std::uint32_t>> fixed_kl, fixed_full;
    for (std::uint64_t t = 0; t < n; ++t) {
        for (std::uint64_t u = 0; u < n; ++u) {
            Mat2 M(n, 0, static_cast<std::uint32_t>(t), 0, static_cast<std::uint32_t>(u));
            bool ok = true;
            for (std::size_t i = 0; i < gs.size() && ok; ++i)
                ok = in_span(gs[i] * M * ginv[i] - M);
            if (!ok) continue;
            fixed_kl.insert({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(u)});
            if (in_span(T * M * Tinv - M))
                fixed_full.insert({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(u)});
        }
    }
    rep.cm_galois_fixed = m2::subgroup_structure(fixed_kl, n, l);
    rep.full_galois_fixed = m2::subgroup_structure(fixed_full, n, l);
    return rep;
}

// The theorem-side expectations at finite level: the invariants of the
// ell^k-torsion truncate the closed forms componentwise.
inline BrauerStructure geometric_structure_at_level(const Int& disc, const Int& ell, int k, int m,
                                                    bool cm_in_base) {
    int v = ord_ell_of_disc(disc, ell);
    std::uint64_t l = ell.get_ui();
    CurveContext c;
    c.disc = disc;
    c.cm_in_base = cm_in_base;
    c.m[l] = m;
    BrauerStructure full = geometric_structure(c, ell);
    BrauerStructure out;
    for (auto [p, e] : full.factors) out.factors.push_back({p, std::min(e, k)});
    out.canonicalize();
    return out;
}

}  // namespace cmbr
