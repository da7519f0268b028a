#pragma once

#include <vector>

#include "charsum/field.hpp"
#include "charsum/weights.hpp"

namespace charsum {

// Desk-scale brute-force evaluators for the quantities the proofs bound:
// shifted-character moments, Weil polynomial sums, gcd sums and the tuple
// counting functions. Every enumeration enforces a hard ceiling on the state
// space (kOracleCeiling tuples) and fails with TooLarge instead of running
// unbounded. Moment left-hand sides with integer weights are computed in the
// ring Z[e(1/(p-1))] (coefficient vectors with cyclic convolution), so the
// reported values carry no accumulation error beyond the final rendering.

inline constexpr u64 kOracleCeiling = 10'000'000;

// The dyadic window x ~ X, i.e. X < x <= 2X, over the integers.
struct Window {
    u64 lo, hi;
};
inline Window dyadic(u64 X) { return {X + 1, 2 * X}; }

// sum_{x in F_p} |sum_i weights[i] * chi(x + points[i])|^{2r}, exact.
long double char_shift_moment(const MultChar& chi, const std::vector<u64>& points,
                              const std::vector<long long>& weights, unsigned r);

struct MomentResult {
    long double lhs = 0;
    long double rhs = 0;
    bool holds = false;
};

// Single moment against (2r)^r (A^r p + A^{2r} sqrt(p)). gamma is indexed
// positionally over setA and must satisfy |gamma|_inf <= 1.
MomentResult moment_single(const MultChar& chi, const std::vector<u64>& setA,
                           const WeightTable& gamma, unsigned r);

// Double moment sum_{x,y} |sum_a gamma_a chi1(x+a) chi2(y+a)|^{2r} against
// (2r)^r (A^r p^2 + 2r A^{2r} p). Both characters must be non-trivial.
MomentResult moment_double(const MultChar& chi1, const MultChar& chi2,
                           const std::vector<u64>& setA, const WeightTable& gamma, unsigned r);

struct WeilResult {
    long double sum_abs = 0;
    long double bound = 0;  // (deg - 1) sqrt(p)
    bool holds = false;
};

// |sum_{x in F_p} chi((x+a_1)...(x+a_d))| for distinct roots a_j.
WeilResult weil_poly_sum(const MultChar& chi, const std::vector<u64>& roots);

struct GcdSumResult {
    unsigned long long G = 0;
    long double bound_sans_o1 = 0;  // A*B*L*M*(KW + NU)
    long double upsilon = 0;        // |ab|*A*B*K*L*M*N*U*W
    bool a_window_in_range = false;  // A <= |a|KL + |b|MN  (constant 1)
    bool b_window_in_range = false;  // B <= LU + MW        (constant 1)
};

// G = sum over k<=K, l1,l2<=L, m1,m2<=M, n<=N, u~U, w~W with
// a_i = a k l_i + b m_i n, b_i = a l_i u + b m_i w, |a_1|~A, |b_2|~B, kw != nu
// of gcd(a_1,b_1)*gcd(a_2,b_2).
GcdSumResult gcd_sum(i64 a, i64 b, u64 A, u64 B, u64 K, u64 L, u64 M, u64 N, u64 U, u64 W);

struct IMoments {
    unsigned long long i1 = 0, i2 = 0;
};

// rho(x) = #{(m,n,k,u): m<=M, n<=N, k<=K, u~U, ak+bmn = unx != 0 mod p};
// returns I_j = sum_x rho(x)^j for j = 1, 2.
IMoments i_moments(const PrimeField& field, i64 a, i64 b, u64 K, u64 M, u64 N, u64 U);

struct JMoments {
    unsigned long long j1 = 0, j2 = 0;
};

// rho(x1,x2) counts (n,k,m1,m2,u) with |n| <= 2N, k <= K, m1 != m2 <= M,
// u ~ U, ak+b m1 n = u m1 x1 != 0 and ak+b m2 n = u m2 x2 != 0 (mod p).
// paper_literal switches to the uncorrected variant of the count, which
// keeps m1 on the left side of the second congruence.
JMoments j_moments(const PrimeField& field, i64 a, i64 b, u64 K, u64 M, u64 N, u64 U,
                   bool paper_literal = false);

// Sigma_2 = sum over (x1,x2) in (F_p^*)^2 of rho(x1,x2)^2 where rho counts
// (k,n,l1,l2,m1,m2,u,w) with |k|~C, |n| <= 2N/d2, l_i <= L, m_i <= M, u~U,
// w~W subject to the congruences a*k l_i + b* m_i n = (a l_i u + b m_i w) x_i
// (mod p), the side conditions l1 m2 != l2 m1 (mod p),
// kw gcd(b,d) != nu gcd(a,d), gcd(a*k, b*n) = 1, the magnitude windows
// |a*k l1 + b* m1 n| ~ A and |a l2 u + b m2 w| ~ B, and p dividing none of
// the four bracketed quantities. Here d1 = d/gcd(a,d), d2 = d/gcd(b,d),
// a* = a/gcd(a,d), b* = b/gcd(b,d); requires p not dividing d.
unsigned long long sigma2_count(const PrimeField& field, i64 a, i64 b, u64 d, u64 A, u64 B,
                                u64 C, u64 K, u64 L, u64 M, u64 N, u64 U, u64 W);

}  // namespace charsum
