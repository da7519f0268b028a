#include "charsum/bounds.hpp"

#include <cmath>

namespace charsum {

namespace {

constexpr long double kRelTol = 1e-12L;

bool leq(long double lhs, long double rhs) { return lhs <= rhs + std::fabs(rhs) * kRelTol; }
bool geq(long double lhs, long double rhs) { return lhs >= rhs - std::fabs(rhs) * kRelTol; }

long double require(const std::optional<long double>& v, const char* name) {
    if (!v) fail(errc::bad_range, std::string("missing bound input ") + name);
    return *v;
}

}  // namespace

std::pair<long double, long double> script_l(long double a, long double b, long double K,
                                             long double L, long double M, long double N) {
    const long double l1 = std::fabs(a) * K + std::fabs(b) * M * N;
    const long double l2 = std::fabs(a) * K * L + std::fabs(b) * M * N;
    return {l1, l2};
}

DeltaResult delta1(const BoundInputs& in) {
    const long double K = require(in.K, "K"), M = require(in.M, "M"), N = require(in.N, "N");
    const long double r = in.r;
    const auto [l1, l2] = script_l(in.a, in.b, K, in.L.value_or(1.0L), M, N);
    (void)l2;
    const long double f1 = std::pow(1.0L + N / K, 1.0L / (2 * r));
    const long double f2 =
        std::pow(1.0L + l1 * M * N * std::pow(in.p, -1.0L - 1.0L / (2 * r)), 1.0L / (2 * r));
    const long double f3 =
        std::pow(std::pow(in.p, 1.0L + 1.0L / r) / (std::pow(M, 4.0L) * std::pow(N, 4.0L)),
                 1.0L / (4 * r));
    DeltaResult out;
    out.delta = f1 * f2 * f3;
    out.bound = require(in.normInf_beta, "normInf_beta") * K * M * N * out.delta;
    out.applicable = M > 4.0L * std::pow(in.p, 1.0L / (2 * r));
    return out;
}

DeltaResult delta2(const BoundInputs& in) {
    const long double K = require(in.K, "K"), M = require(in.M, "M"), N = require(in.N, "N");
    const long double r = in.r;
    const auto [l1, l2] = script_l(in.a, in.b, K, in.L.value_or(1.0L), M, N);
    (void)l2;
    const long double f1 = std::pow(1.0L + K / (M * M), 1.0L / (4 * r));
    const long double f2 =
        std::pow(1.0L + l1 * M * N * std::pow(in.p, -1.0L - 1.0L / r), 1.0L / (2 * r));
    const long double f3 =
        std::pow(std::pow(in.p, 1.0L + 1.0L / r) / (K * M * M * N * N), 1.0L / (4 * r));
    DeltaResult out;
    out.delta = f1 * f2 * f3 + 1.0L / std::sqrt(M);
    out.bound = require(in.normInf_alpha, "normInf_alpha") * require(in.norm2_beta, "norm2_beta") *
                M * std::sqrt(N * K) * out.delta;
    out.applicable = in.r >= 2 && N > 4.0L * std::pow(in.p, 1.0L / r);
    return out;
}

DeltaResult delta3(const BoundInputs& in) {
    const long double K = require(in.K, "K"), L = require(in.L, "L"), M = require(in.M, "M"),
                      N = require(in.N, "N");
    const long double r = in.r;
    const auto [l1, l2] = script_l(in.a, in.b, K, L, M, N);
    (void)l1;
    const long double lead =
        std::pow(K * L * M * N, -3.0L / (4 * r)) * std::pow(M / K + 1.0L, 1.0L / (2 * r)) *
        std::pow(1.0L + l2 * l2 / std::pow(in.p, 1.0L + 1.0L / r), 1.0L / (2 * r)) *
        std::pow(l2, 1.0L / (2 * r)) * std::pow(in.p, 1.0L / (4 * r) + 1.0L / (2 * r * r));
    DeltaResult out;
    out.delta = lead + std::pow(in.p, 1.0L / (2 * r)) / std::sqrt(K * N) +
                std::pow(in.p, 1.0L / (2 * r)) / std::sqrt(M * N) + 1.0L / std::sqrt(L * M) +
                1.0L / std::sqrt(in.p);
    out.bound = require(in.normInf_alpha, "normInf_alpha") * require(in.norm2_beta, "norm2_beta") *
                L * M * std::sqrt(K * N) * out.delta;
    out.applicable = in.r >= 2 && K > 4.0L * std::pow(in.p, 1.0L / r) &&
                     N > 4.0L * std::pow(in.p, 1.0L / r);
    return out;
}

long double karatsuba_bound(long double p, unsigned r, long double N, long double norm1_alpha,
                            long double norm2_alpha, long double normInf_beta) {
    const long double rr = r;
    return std::pow(norm1_alpha, 1.0L - 1.0L / rr) * std::pow(norm2_alpha, 1.0L / rr) *
           normInf_beta *
           (N * std::pow(p, 1.0L / (4 * rr)) + std::sqrt(N) * std::pow(p, 1.0L / (2 * rr)));
}

long double vinogradov_bound(long double p, long double norm2_alpha, long double norm2_beta) {
    return norm2_alpha * norm2_beta * std::sqrt(p);
}

Q2Result q2_bound(long double p, unsigned r, long double x, long double normInf_gamma) {
    const long double rr = r;
    Q2Result out;
    out.value = normInf_gamma * std::pow(x, 4.0L - 2.0L / rr) *
                std::pow(1.0L + std::pow(x, 4.0L) * std::pow(p, -1.0L - 1.0L / (2 * rr)),
                         1.0L / (2 * rr)) *
                std::pow(p, 1.0L / (4 * rr) + 1.0L / (4 * rr * rr));
    out.applicable = p > x * x;
    return out;
}

RegionReport region_nontrivial(long double p, long double eta, long double K, long double L,
                               long double M, long double N) {
    if (!(eta > 0)) fail(errc::bad_range, "eta must be positive");
    RegionReport rep;
    auto check = [&](bool ok, const char* name) {
        if (!ok) rep.failed.push_back(name);
    };
    check(leq(K * L, M * N), "KL<=MN");
    check(leq(M * N, K * L * std::pow(p, 1.0L / 3 - eta)), "MN<=KL*p^(1/3-eta)");
    check(geq(std::pow(K, 5.0L) * std::pow(L, 3.0L) * N, M * std::pow(p, 1.0L + eta)),
          "K^5*L^3*N>=M*p^(1+eta)");
    check(leq(std::pow(M / K, 5.0L) * std::pow(N / L, 3.0L), std::pow(p, 1.0L - eta)),
          "(M/K)^5*(N/L)^3<=p^(1-eta)");
    check(geq(std::pow(K * L, 3.0L) * M * N, std::pow(p, 1.0L + eta)), "(KL)^3*MN>=p^(1+eta)");
    check(geq(K * N, std::pow(p, eta)), "KN>=p^eta");
    check(geq(M * N, std::pow(p, eta)), "MN>=p^eta");
    check(geq(L * M, std::pow(p, eta)), "LM>=p^eta");
    rep.passes = rep.failed.empty();
    return rep;
}

u64 k_choice(long double p, unsigned r, long double eta, long double M, long double N) {
    const long double rr = r;
    const long double value =
        std::pow(p, 1.0L + 1.0L / rr + eta) / ((M * N) * (M * N)) + std::pow(p, eta);
    return static_cast<u64>(std::floor(value));
}

BoundReport bound_report(double sum_abs, const BoundInputs& in) {
    BoundReport rep;
    rep.sum_abs = sum_abs;
    auto push = [&](const std::string& name, long double value, bool applicable) {
        NamedBound nb;
        nb.name = name;
        nb.value = value;
        nb.ratio = value > 0 ? static_cast<double>(sum_abs / static_cast<double>(value)) : 0.0;
        if (sum_abs == 0.0) nb.ratio = 0.0;
        nb.applicable = applicable;
        rep.entries.push_back(std::move(nb));
    };

    if (in.normInf_alpha && in.normInf_beta && in.total_terms)
        push("trivial_inf", *in.normInf_alpha * *in.normInf_beta * *in.total_terms, true);
    if (in.norm2_alpha && in.norm2_beta && in.total_terms)
        push("trivial_l2", *in.norm2_alpha * *in.norm2_beta * std::sqrt(*in.total_terms), true);
    if (in.norm2_alpha && in.norm2_beta)
        push("vinogradov", vinogradov_bound(in.p, *in.norm2_alpha, *in.norm2_beta), true);
    if (in.norm1_alpha && in.norm2_alpha && in.normInf_beta && in.N)
        push("karatsuba",
             karatsuba_bound(in.p, in.r, *in.N, *in.norm1_alpha, *in.norm2_alpha, *in.normInf_beta),
             true);
    if (in.trilinear_deltas && in.K && in.M && in.N && in.normInf_beta) {
        const auto d1 = delta1(in);
        push("delta1", d1.bound, d1.applicable);
    }
    if (in.trilinear_deltas && in.K && in.M && in.N && in.normInf_alpha && in.norm2_beta) {
        const auto d2 = delta2(in);
        push("delta2", d2.bound, d2.applicable);
    }
    if (in.K && in.L && in.M && in.N && in.normInf_alpha && in.norm2_beta) {
        const auto d3 = delta3(in);
        push("delta3", d3.bound, d3.applicable);
    }
    if (in.x && in.normInf_gamma) {
        const auto q2 = q2_bound(in.p, in.r, *in.x, *in.normInf_gamma);
        push("q2", q2.value, q2.applicable);
    }
    return rep;
}

}  // namespace charsum
