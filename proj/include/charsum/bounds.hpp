#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charsum/field.hpp"

namespace charsum {

// Everything here is plain real arithmetic in long double (80-bit mantissa on
// x86-64). Inequality checks that gate region predicates use a relative slack
// of 1e-12 at the comparison site. No p^{o(1)} factor is ever included: the
// asymptotic bounds are evaluated as written and exposed through ratios only.

struct BoundInputs {
    long double p = 0;
    unsigned r = 1;
    long double a = 1, b = 1;
    std::optional<long double> K, L, M, N, x, eta;
    std::optional<long double> total_terms;  // KMN, KLMN or #M * #N, for trivial bounds
    std::optional<long double> norm1_alpha, norm2_alpha, normInf_alpha;
    std::optional<long double> norm2_beta, normInf_beta;
    std::optional<long double> normInf_gamma;
    // delta1/delta2 are trilinear-shape bounds; callers reporting a
    // quadrilinear sum clear this so only delta3 appears.
    bool trilinear_deltas = true;
};

// L1 = |a|K + |b|MN and L2 = |a|KL + |b|MN.
std::pair<long double, long double> script_l(long double a, long double b, long double K,
                                             long double L, long double M, long double N);

struct DeltaResult {
    long double delta = 0;
    long double bound = 0;
    bool applicable = false;  // stated range precondition; the value is computed regardless
};

// Delta_1 = (1+N/K)^{1/2r} (1+L1·MN·p^{-1-1/2r})^{1/2r} (p^{1+1/r}/(M^4N^4))^{1/4r},
// bound = |beta|_inf * KMN * Delta_1; applicable iff M > 4 p^{1/2r}.
DeltaResult delta1(const BoundInputs& in);

// Delta_2 = (1+K/M^2)^{1/4r} (1+L1·MN·p^{-1-1/r})^{1/2r} (p^{1+1/r}/(K(MN)^2))^{1/4r} + M^{-1/2},
// bound = |alpha|_inf |beta|_2 M (NK)^{1/2} Delta_2; applicable iff r >= 2 and N > 4 p^{1/r}.
DeltaResult delta2(const BoundInputs& in);

// Delta_3 = (KLMN)^{-3/4r} (M/K+1)^{1/2r} (1+L2^2/p^{1+1/r})^{1/2r} L2^{1/2r} p^{1/4r+1/2r^2}
//           + (KN)^{-1/2} p^{1/2r} + (MN)^{-1/2} p^{1/2r} + (LM)^{-1/2} + p^{-1/2},
// bound = |alpha|_inf |beta|_2 L M (KN)^{1/2} Delta_3; applicable iff r >= 2, K,N > 4 p^{1/r}.
DeltaResult delta3(const BoundInputs& in);

// |alpha|_1^{1-1/r} |alpha|_2^{1/r} |beta|_inf (N p^{1/4r} + N^{1/2} p^{1/2r}).
long double karatsuba_bound(long double p, unsigned r, long double N, long double norm1_alpha,
                            long double norm2_alpha, long double normInf_beta);

// |alpha|_2 |beta|_2 sqrt(p).
long double vinogradov_bound(long double p, long double norm2_alpha, long double norm2_beta);

struct Q2Result {
    long double value = 0;
    bool applicable = false;  // p > x^2
};

// |gamma|_inf x^{4-2/r} (1 + x^4 p^{-1-1/2r})^{1/2r} p^{1/4r + 1/4r^2}.
Q2Result q2_bound(long double p, unsigned r, long double x, long double normInf_gamma);

// The seven simultaneous range conditions under which the quadrilinear bound
// beats the trivial one. The "much less than" in the first condition is
// checked as <= with constant 1, which is recorded in the report.
struct RegionReport {
    bool passes = false;
    std::vector<std::string> failed;         // names of violated conditions
    long double vinogradov_symbol_constant = 1.0L;
};

RegionReport region_nontrivial(long double p, long double eta, long double K, long double L,
                               long double M, long double N);

// K = floor(p^{1+1/r+eta} (MN)^{-2} + p^eta).
u64 k_choice(long double p, unsigned r, long double eta, long double M, long double N);

struct NamedBound {
    std::string name;
    long double value = 0;
    double ratio = 0;  // sum_abs / value (0 when the sum is 0)
    bool applicable = true;
};

struct BoundReport {
    double sum_abs = 0;
    std::vector<NamedBound> entries;  // canonical order, only computable bounds

    const NamedBound* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

// Pairs |sum| with every bound whose inputs are present in `in`.
BoundReport bound_report(double sum_abs, const BoundInputs& in);

}  // namespace charsum
