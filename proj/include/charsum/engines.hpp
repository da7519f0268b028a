#pragma once

#include <functional>
#include <string>
#include <vector>

#include "charsum/field.hpp"
#include "charsum/sum_value.hpp"
#include "charsum/weights.hpp"

namespace charsum {

struct EngineOpts {
    unsigned threads = 1;
};

// Reduced fraction r/s used for Farey sums.
struct Fraction {
    u64 num = 0, den = 1;

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
};

// Polynomials and rational functions over F_p, as coefficient lists
// (coeff[i] * X^i, respectively coeff[i][j] * X^i * Y^j).
struct Poly1 {
    std::vector<u64> coeff{0};
};
struct Poly2 {
    std::vector<std::vector<u64>> coeff{{0}};
};
struct RationalFn1 {
    Poly1 num{};
    Poly1 den{{{1}}};
};
struct RationalFn2 {
    Poly2 num{};
    Poly2 den{{{{1}}}};
};

enum class MixedVariant { additive_twist, multiplicative_product };

// B(alpha,beta) = sum_{m in M} sum_{n in N} alpha_m beta_n chi(m+n).
// Weight tables must be materialized over exactly setM / setN.
SumValue bilinear_sum(const MultChar& chi, const std::vector<u64>& setM,
                      const std::vector<u64>& setN, const WeightTable& alpha,
                      const WeightTable& beta, EngineOpts opts = {});
SumValue bilinear_sum_naive(const MultChar& chi, const std::vector<u64>& setM,
                            const std::vector<u64>& setN, const WeightTable& alpha,
                            const WeightTable& beta);

// T(alpha,beta) = sum_{k<=K} sum_{m<=M} sum_{n<=N} alpha_m beta_{k,n} chi(ak+bmn),
// alpha over 1..M, beta over (1..K)x(1..N). Requires p not dividing a*b.
SumValue trilinear_sum(const MultChar& chi, i64 a, i64 b, u64 K, u64 M, u64 N,
                       const WeightTable& alpha, const WeightTable& beta, EngineOpts opts = {});
SumValue trilinear_sum_naive(const MultChar& chi, i64 a, i64 b, u64 K, u64 M, u64 N,
                             const WeightTable& alpha, const WeightTable& beta);

// Q(alpha,beta) = sum_{k<=K,l<=L,m<=M,n<=N} alpha_{l,m} beta_{k,n} chi(akl+bmn).
SumValue quadrilinear_sum(const MultChar& chi, i64 a, i64 b, u64 K, u64 L, u64 M, u64 N,
                          const WeightTable& alpha, const WeightTable& beta,
                          EngineOpts opts = {});
SumValue quadrilinear_sum_naive(const MultChar& chi, i64 a, i64 b, u64 K, u64 L, u64 M, u64 N,
                                const WeightTable& alpha, const WeightTable& beta);

// sum_{r,s,u,v<=x} gamma_{r,s,u} chi(rs-uv), either with gamma = alpha_r*beta_u
// or with an arbitrary callable weight.
SumValue fs_quad_sum(const MultChar& chi, u64 x, const WeightTable& alpha_r,
                     const WeightTable& beta_u, EngineOpts opts = {});
SumValue fs_quad_sum(const MultChar& chi, u64 x,
                     const std::function<long long(u64, u64, u64)>& gamma, EngineOpts opts = {});
SumValue fs_quad_sum(const MultChar& chi, u64 x,
                     const std::function<std::complex<double>(u64, u64, u64)>& gamma,
                     EngineOpts opts = {});
SumValue fs_quad_sum_naive(const MultChar& chi, u64 x, const WeightTable& alpha_r,
                           const WeightTable& beta_u);
SumValue fs_quad_sum_naive(const MultChar& chi, u64 x,
                           const std::function<long long(u64, u64, u64)>& gamma);

// sum_{k<=K,m<=M,n<=N} of either chi(k+mn)*psi(P(m)+Q(k,n))  (additive twist,
// psi(x) = e(t x / p)) or chi((k+mn)*P(m)*Q(k,n)) (multiplicative product).
// Summands whose P or Q denominator vanishes mod p contribute 0.
SumValue mixed_sum(const MultChar& chi, u64 psi_t, const RationalFn1& P, const RationalFn2& Q,
                   u64 K, u64 M, u64 N, MixedVariant variant, EngineOpts opts = {});
SumValue mixed_sum_naive(const MultChar& chi, u64 psi_t, const RationalFn1& P,
                         const RationalFn2& Q, u64 K, u64 M, u64 N, MixedVariant variant);

// S(U,V) = sum_{u<=U} sum_{v<=V} tau(u) tau(v) chi(u-v).
SumValue divisor_sum(const MultChar& chi, u64 U, u64 V, EngineOpts opts = {});
SumValue divisor_sum_naive(const MultChar& chi, u64 U, u64 V);

// Farey fractions of order R, sorted by value.
std::vector<Fraction> farey_set(u64 R);
// Canonical embedding r/s -> r * s^{-1} (mod p).
u64 farey_embed(const PrimeField& field, Fraction f);
// sum over ordered pairs of F(R) of xi_rho zeta_sigma chi(rho - sigma) on the
// embedded residues; requires 2 <= R < sqrt(p) so the embedding is injective.
// Weights are positional over the sorted Farey list (1-based).
SumValue farey_sum(const MultChar& chi, u64 R, const WeightTable& xi, const WeightTable& zeta,
                   EngineOpts opts = {});
SumValue farey_sum_naive(const MultChar& chi, u64 R, const WeightTable& xi,
                         const WeightTable& zeta);

// W(x) = sum over primes p1..p4 <= x of (p1/p3)(p2/p4) chi(p1 p2 - p3 p4).
// The prime 2 is excluded since (a/2) is undefined; pass kronecker_two = true
// to include it under the Kronecker extension of the symbol.
SumValue prime_quad_sum(const MultChar& chi, u64 x, bool kronecker_two = false,
                        EngineOpts opts = {});
SumValue prime_quad_sum_naive(const MultChar& chi, u64 x, bool kronecker_two = false);

// Declarative sum description, used by the CLI and the randomized
// equivalence sweeps.
enum class SumKind {
    bilinear,
    trilinear,
    quadrilinear,
    fs_quad,
    mixed_additive,
    mixed_multiplicative,
    divisor,
    farey,
    prime_quad,
};

const char* kind_name(SumKind kind);

struct SumSpec {
    SumKind kind = SumKind::trilinear;
    u64 p = 5;
    bool legendre_char = true;
    u64 j = 0;  // used when legendre_char is false
    i64 a = 1, b = 1;
    u64 K = 1, L = 1, M = 1, N = 1;
    u64 U = 1, V = 1;
    u64 x = 1;
    u64 R = 2;
    WeightSpec alpha = OneWeight{};
    WeightSpec beta = OneWeight{};
    std::vector<u64> setM, setN;  // bilinear; empty means {1..M}, {1..N}
    u64 psi_t = 1;
    RationalFn1 P{};
    RationalFn2 Q{};
    bool kronecker_two = false;
};

u64 char_index(const PrimeField& field, const SumSpec& spec);
SumValue evaluate(const PrimeField& field, const SumSpec& spec, EngineOpts opts = {});
SumValue evaluate_naive(const PrimeField& field, const SumSpec& spec);

}  // namespace charsum
