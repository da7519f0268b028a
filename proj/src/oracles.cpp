#include "charsum/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <unordered_map>

namespace charsum {

namespace {

using i128 = __int128;

constexpr long double kRelTol = 1e-12L;
constexpr long double kTwoPi = 6.283185307179586476925286766559005768L;

void ensure_budget(long double states, const char* what) {
    if (states > static_cast<long double>(kOracleCeiling))
        fail(errc::too_large, std::string(what) + " state space exceeds the 1e7 ceiling");
}

u64 reduce_i128(i128 v, u64 p) {
    i128 r = v % static_cast<i128>(p);
    if (r < 0) r += static_cast<i128>(p);
    return static_cast<u64>(r);
}

u64 abs_u64(i128 v) { return static_cast<u64>(v < 0 ? -v : v); }

// Cyclic convolution of integer coefficient vectors over exponents mod n;
// the vector f represents sum_t f[t] e(t/n).
std::vector<long long> cyclic_mul(const std::vector<long long>& f,
                                  const std::vector<long long>& g) {
    const std::size_t n = f.size();
    std::vector<long long> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (g[j] == 0) continue;
            std::size_t k = i + j;
            if (k >= n) k -= n;
            out[k] += f[i] * g[j];
        }
    }
    return out;
}

std::vector<long long> conjugate(const std::vector<long long>& f) {
    const std::size_t n = f.size();
    std::vector<long long> out(n, 0);
    for (std::size_t t = 0; t < n; ++t)
        if (f[t] != 0) out[(n - t) % n] += f[t];
    return out;
}

long double render_real(const std::vector<long long>& f) {
    const std::size_t n = f.size();
    long double acc = 0.0L;
    for (std::size_t t = 0; t < n; ++t)
        if (f[t] != 0)
            acc += static_cast<long double>(f[t]) *
                   std::cos(kTwoPi * static_cast<long double>(t) / static_cast<long double>(n));
    return acc;
}

std::complex<long double> render_complex(const std::vector<long long>& f) {
    const std::size_t n = f.size();
    long double re = 0.0L, im = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
        if (f[t] == 0) continue;
        const long double angle = kTwoPi * static_cast<long double>(t) / static_cast<long double>(n);
        re += static_cast<long double>(f[t]) * std::cos(angle);
        im += static_cast<long double>(f[t]) * std::sin(angle);
    }
    return {re, im};
}

void check_weight_bound(const WeightTable& gamma) {
    if (gamma.exact()) {
        for (std::size_t i = 0; i < gamma.size(); ++i)
            if (std::llabs(gamma.ivalue_at(i)) > 1)
                fail(errc::weight_bound, "|gamma|_inf must be <= 1");
    } else {
        for (std::size_t i = 0; i < gamma.size(); ++i)
            if (std::abs(gamma.cvalue_at(i)) > 1.0 + 1e-12)
                fail(errc::weight_bound, "|gamma|_inf must be <= 1");
    }
}

}  // namespace

long double char_shift_moment(const MultChar& chi, const std::vector<u64>& points,
                              const std::vector<long long>& weights, unsigned r) {
    const PrimeField& field = chi.field();
    const u64 p = field.p();
    const std::size_t n = p - 1;
    ensure_budget(static_cast<long double>(p) * points.size() +
                      static_cast<long double>(p) * n * n * r,
                  "shifted-moment");
    std::vector<long long> total(n, 0);
    std::vector<long long> inner(n, 0);
    for (u64 x = 0; x < p; ++x) {
        std::fill(inner.begin(), inner.end(), 0);
        bool any = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (weights[i] == 0) continue;
            const CharValue cv = chi.eval_residue(field.add(x, points[i] % p));
            if (cv.zero) continue;
            inner[cv.t] += weights[i];
            any = true;
        }
        if (!any) continue;
        const auto sq = cyclic_mul(inner, conjugate(inner));  // |S|^2
        auto power = sq;
        for (unsigned k = 1; k < r; ++k) power = cyclic_mul(power, sq);
        for (std::size_t t = 0; t < n; ++t) total[t] += power[t];
    }
    return render_real(total);
}

MomentResult moment_single(const MultChar& chi, const std::vector<u64>& setA,
                           const WeightTable& gamma, unsigned r) {
    if (r < 1) fail(errc::bad_range, "r must be >= 1");
    if (setA.empty()) fail(errc::bad_range, "the shift set must be nonempty");
    if (gamma.dims() != 1 || gamma.size() < setA.size())
        fail(errc::weight_coverage, "gamma does not cover the shift set");
    check_weight_bound(gamma);

    const PrimeField& field = chi.field();
    const u64 p = field.p();
    const long double A = static_cast<long double>(setA.size());

    MomentResult out;
    if (gamma.exact()) {
        std::vector<long long> w(setA.size());
        for (std::size_t i = 0; i < setA.size(); ++i) w[i] = gamma.ivalue_at(i);
        out.lhs = char_shift_moment(chi, setA, w, r);
    } else {
        ensure_budget(static_cast<long double>(p) * setA.size(), "shifted-moment");
        long double acc = 0.0L;
        for (u64 x = 0; x < p; ++x) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t i = 0; i < setA.size(); ++i) {
                const CharValue cv = chi.eval_residue(field.add(x, setA[i] % p));
                if (!cv.zero) s += gamma.cvalue_at(i) * cv.to_complex(p);
            }
            acc += std::pow(static_cast<long double>(std::norm(s)), static_cast<long double>(r));
        }
        out.lhs = acc;
    }
    out.rhs = std::pow(2.0L * r, static_cast<long double>(r)) *
              (std::pow(A, static_cast<long double>(r)) * p +
               std::pow(A, 2.0L * r) * std::sqrt(static_cast<long double>(p)));
    out.holds = out.lhs <= out.rhs * (1.0L + kRelTol);
    return out;
}

MomentResult moment_double(const MultChar& chi1, const MultChar& chi2,
                           const std::vector<u64>& setA, const WeightTable& gamma, unsigned r) {
    if (chi1.trivial() || chi2.trivial())
        fail(errc::trivial_character, "both characters must be non-trivial");
    if (r < 1) fail(errc::bad_range, "r must be >= 1");
    if (setA.empty()) fail(errc::bad_range, "the shift set must be nonempty");
    if (gamma.dims() != 1 || gamma.size() < setA.size())
        fail(errc::weight_coverage, "gamma does not cover the shift set");
    check_weight_bound(gamma);

    const PrimeField& field = chi1.field();
    const u64 p = field.p();
    const std::size_t n = p - 1;
    const long double A = static_cast<long double>(setA.size());
    ensure_budget(static_cast<long double>(p) * p * setA.size(), "double-moment");

    MomentResult out;
    if (gamma.exact()) {
        std::vector<long long> total(n, 0);
        std::vector<long long> inner(n, 0);
        for (u64 x = 0; x < p; ++x) {
            for (u64 y = 0; y < p; ++y) {
                std::fill(inner.begin(), inner.end(), 0);
                bool any = false;
                for (std::size_t i = 0; i < setA.size(); ++i) {
                    const long long w = gamma.ivalue_at(i);
                    if (w == 0) continue;
                    const u64 shift = setA[i] % p;
                    const CharValue c1 = chi1.eval_residue(field.add(x, shift));
                    if (c1.zero) continue;
                    const CharValue c2 = chi2.eval_residue(field.add(y, shift));
                    if (c2.zero) continue;
                    u64 t = c1.t + c2.t;
                    if (t >= n) t -= n;
                    inner[t] += w;
                    any = true;
                }
                if (!any) continue;
                const auto sq = cyclic_mul(inner, conjugate(inner));
                auto power = sq;
                for (unsigned k = 1; k < r; ++k) power = cyclic_mul(power, sq);
                for (std::size_t t = 0; t < n; ++t) total[t] += power[t];
            }
        }
        out.lhs = render_real(total);
    } else {
        long double acc = 0.0L;
        for (u64 x = 0; x < p; ++x) {
            for (u64 y = 0; y < p; ++y) {
                std::complex<double> s{0.0, 0.0};
                for (std::size_t i = 0; i < setA.size(); ++i) {
                    const u64 shift = setA[i] % p;
                    const CharValue c1 = chi1.eval_residue(field.add(x, shift));
                    if (c1.zero) continue;
                    const CharValue c2 = chi2.eval_residue(field.add(y, shift));
                    if (c2.zero) continue;
                    s += gamma.cvalue_at(i) * c1.to_complex(p) * c2.to_complex(p);
                }
                acc += std::pow(static_cast<long double>(std::norm(s)),
                                static_cast<long double>(r));
            }
        }
        out.lhs = acc;
    }
    out.rhs = std::pow(2.0L * r, static_cast<long double>(r)) *
              (std::pow(A, static_cast<long double>(r)) * p * p +
               2.0L * r * std::pow(A, 2.0L * r) * p);
    out.holds = out.lhs <= out.rhs * (1.0L + kRelTol);
    return out;
}

WeilResult weil_poly_sum(const MultChar& chi, const std::vector<u64>& roots) {
    const PrimeField& field = chi.field();
    const u64 p = field.p();
    std::vector<u64> reduced;
    for (u64 a : roots) reduced.push_back(a % p);
    std::sort(reduced.begin(), reduced.end());
    if (std::adjacent_find(reduced.begin(), reduced.end()) != reduced.end())
        fail(errc::repeated_root, "roots must be distinct mod p");
    if (reduced.empty()) fail(errc::bad_range, "at least one root is required");
    ensure_budget(static_cast<long double>(p) * reduced.size(), "weil-sum");

    std::vector<long long> coeffs(p - 1, 0);
    for (u64 x = 0; x < p; ++x) {
        u64 prod = 1;
        for (u64 a : reduced) {
            prod = field.mul(prod, field.add(x, a));
            if (prod == 0) break;
        }
        const CharValue cv = chi.eval_residue(prod);
        if (!cv.zero) ++coeffs[cv.t];
    }
    WeilResult out;
    out.sum_abs = std::abs(render_complex(coeffs));
    out.bound = (static_cast<long double>(reduced.size()) - 1.0L) *
                std::sqrt(static_cast<long double>(p));
    out.holds = out.sum_abs <= out.bound * (1.0L + kRelTol) + 1e-9L;
    return out;
}

GcdSumResult gcd_sum(i64 a, i64 b, u64 A, u64 B, u64 K, u64 L, u64 M, u64 N, u64 U, u64 W) {
    if (a == 0 || b == 0) fail(errc::bad_range, "a and b must be nonzero");
    for (auto [v, name] : {std::pair<u64, const char*>{A, "A"}, {B, "B"}, {K, "K"}, {L, "L"},
                           {M, "M"}, {N, "N"}, {U, "U"}, {W, "W"}})
        if (v == 0) fail(errc::bad_range, std::string(name) + " must be >= 1");

    const Window wu = dyadic(U), ww = dyadic(W);
    const long double states = static_cast<long double>(K) * N * (wu.hi - wu.lo + 1) *
                               (ww.hi - ww.lo + 1) * L * M * 2.0L;
    ensure_budget(states, "gcd-sum");

    GcdSumResult out;
    const long double la = std::fabs(static_cast<long double>(a));
    const long double lb = std::fabs(static_cast<long double>(b));
    out.bound_sans_o1 = static_cast<long double>(A) * B * L * M *
                        (static_cast<long double>(K) * W + static_cast<long double>(N) * U);
    out.upsilon = la * lb * A * B * K * L * M * N * U * W;
    out.a_window_in_range = A <= la * K * L + lb * M * N;
    out.b_window_in_range = B <= static_cast<long double>(L) * U + static_cast<long double>(M) * W;

    // For fixed (k, n, u, w) the two gcd factors range over independent
    // (l, m) pairs, so the inner double sum factorizes.
    unsigned long long total = 0;
    for (u64 k = 1; k <= K; ++k) {
        for (u64 n = 1; n <= N; ++n) {
            for (u64 u = wu.lo; u <= wu.hi; ++u) {
                for (u64 w = ww.lo; w <= ww.hi; ++w) {
                    if (static_cast<i128>(k) * w == static_cast<i128>(n) * u) continue;
                    unsigned long long s1 = 0, s2 = 0;
                    for (u64 l = 1; l <= L; ++l) {
                        for (u64 m = 1; m <= M; ++m) {
                            const i128 av = static_cast<i128>(a) * k * l + static_cast<i128>(b) * m * n;
                            const i128 bv = static_cast<i128>(a) * l * u + static_cast<i128>(b) * m * w;
                            const u64 aa = abs_u64(av), ab = abs_u64(bv);
                            if (aa > A && aa <= 2 * A) s1 += std::gcd(aa, ab);
                            if (ab > B && ab <= 2 * B) s2 += std::gcd(aa, ab);
                        }
                    }
                    total += s1 * s2;
                }
            }
        }
    }
    out.G = total;
    return out;
}

IMoments i_moments(const PrimeField& field, i64 a, i64 b, u64 K, u64 M, u64 N, u64 U) {
    if (a == 0 || b == 0) fail(errc::bad_range, "a and b must be nonzero");
    const Window wu = dyadic(U);
    ensure_budget(static_cast<long double>(M) * N * K * (wu.hi - wu.lo + 1), "i-moment");
    const u64 p = field.p();
    std::unordered_map<u64, unsigned long long> rho;
    for (u64 m = 1; m <= M; ++m) {
        for (u64 n = 1; n <= N; ++n) {
            for (u64 k = 1; k <= K; ++k) {
                const u64 num =
                    reduce_i128(static_cast<i128>(a) * k + static_cast<i128>(b) * m * n, p);
                if (num == 0) continue;
                for (u64 u = wu.lo; u <= wu.hi; ++u) {
                    const u64 un = mul_mod(u % p, n % p, p);
                    if (un == 0) continue;
                    ++rho[field.mul(num, field.inv(un))];
                }
            }
        }
    }
    IMoments out;
    for (const auto& [x, cnt] : rho) {
        out.i1 += cnt;
        out.i2 += cnt * cnt;
    }
    return out;
}

JMoments j_moments(const PrimeField& field, i64 a, i64 b, u64 K, u64 M, u64 N, u64 U,
                   bool paper_literal) {
    if (a == 0 || b == 0) fail(errc::bad_range, "a and b must be nonzero");
    const Window wu = dyadic(U);
    ensure_budget(static_cast<long double>(4 * N + 1) * K * M * M * (wu.hi - wu.lo + 1),
                  "j-moment");
    const u64 p = field.p();
    if (p >= (u64(1) << 32)) fail(errc::too_large, "j-moment keys need p < 2^32");

    std::unordered_map<u64, unsigned long long> rho;
    const i64 nmax = static_cast<i64>(2 * N);
    for (i64 n = -nmax; n <= nmax; ++n) {
        for (u64 k = 1; k <= K; ++k) {
            for (u64 m1 = 1; m1 <= M; ++m1) {
                const u64 v1 =
                    reduce_i128(static_cast<i128>(a) * k + static_cast<i128>(b) * m1 * n, p);
                if (v1 == 0) continue;
                for (u64 m2 = 1; m2 <= M; ++m2) {
                    if (m2 == m1) continue;
                    const u64 v2 =
                        paper_literal
                            ? v1
                            : reduce_i128(static_cast<i128>(a) * k + static_cast<i128>(b) * m2 * n,
                                          p);
                    if (v2 == 0) continue;
                    for (u64 u = wu.lo; u <= wu.hi; ++u) {
                        const u64 um1 = mul_mod(u % p, m1 % p, p);
                        const u64 um2 = mul_mod(u % p, m2 % p, p);
                        if (um1 == 0 || um2 == 0) continue;
                        const u64 x1 = field.mul(v1, field.inv(um1));
                        const u64 x2 = field.mul(v2, field.inv(um2));
                        ++rho[(x1 << 32) | x2];
                    }
                }
            }
        }
    }
    JMoments out;
    for (const auto& [key, cnt] : rho) {
        out.j1 += cnt;
        out.j2 += cnt * cnt;
    }
    return out;
}

unsigned long long sigma2_count(const PrimeField& field, i64 a, i64 b, u64 d, u64 A, u64 B,
                                u64 C, u64 K, u64 L, u64 M, u64 N, u64 U, u64 W) {
    if (a == 0 || b == 0) fail(errc::bad_range, "a and b must be nonzero");
    if (d == 0) fail(errc::bad_range, "d must be >= 1");
    const u64 p = field.p();
    if (d % p == 0) fail(errc::bad_range, "p must not divide d");
    if (p >= (u64(1) << 32)) fail(errc::too_large, "sigma2 keys need p < 2^32");

    const u64 ga = std::gcd(static_cast<u64>(std::llabs(a)), d);
    const u64 gb = std::gcd(static_cast<u64>(std::llabs(b)), d);
    const u64 d1 = d / ga, d2 = d / gb;
    const i64 as = a / static_cast<i64>(ga);
    const i64 bs = b / static_cast<i64>(gb);
    (void)d1;  // d1 bounds C <= K/d1 in the proof; C is a free input here

    const Window wk = dyadic(C), wu = dyadic(U), ww = dyadic(W);
    const u64 nmax = (2 * N) / d2;
    ensure_budget(static_cast<long double>(2 * (wk.hi - wk.lo + 1)) * (2 * nmax + 1) * L * L * M *
                      M * (wu.hi - wu.lo + 1) * (ww.hi - ww.lo + 1),
                  "sigma2");
    (void)K;

    std::unordered_map<u64, unsigned long long> rho;
    auto run_k = [&](i64 k) {
        for (i64 n = -static_cast<i64>(nmax); n <= static_cast<i64>(nmax); ++n) {
            // gcd(a*k, b*n) = 1 over the integers; gcd(x, 0) = |x|.
            const u64 g = std::gcd(abs_u64(static_cast<i128>(as) * k),
                                   abs_u64(static_cast<i128>(bs) * n));
            if (g != 1) continue;
            for (u64 u = wu.lo; u <= wu.hi; ++u) {
                for (u64 w = ww.lo; w <= ww.hi; ++w) {
                    if (static_cast<i128>(k) * w * gb == static_cast<i128>(n) * u * ga) continue;
                    for (u64 l1 = 1; l1 <= L; ++l1) {
                        for (u64 m1 = 1; m1 <= M; ++m1) {
                            const i128 lhs1 = static_cast<i128>(as) * k * l1 +
                                              static_cast<i128>(bs) * m1 * n;
                            const u64 abs1 = abs_u64(lhs1);
                            if (abs1 <= A || abs1 > 2 * A) continue;
                            const u64 lhs1_mod = reduce_i128(lhs1, p);
                            if (lhs1_mod == 0) continue;
                            const u64 den1 = reduce_i128(
                                static_cast<i128>(a) * l1 * u + static_cast<i128>(b) * m1 * w, p);
                            if (den1 == 0) continue;
                            const u64 x1 = field.mul(lhs1_mod, field.inv(den1));
                            for (u64 l2 = 1; l2 <= L; ++l2) {
                                for (u64 m2 = 1; m2 <= M; ++m2) {
                                    if (mul_mod(l1 % p, m2 % p, p) == mul_mod(l2 % p, m1 % p, p))
                                        continue;
                                    const i128 den2_full = static_cast<i128>(a) * l2 * u +
                                                           static_cast<i128>(b) * m2 * w;
                                    const u64 abs2 = abs_u64(den2_full);
                                    if (abs2 <= B || abs2 > 2 * B) continue;
                                    const u64 den2 = reduce_i128(den2_full, p);
                                    if (den2 == 0) continue;
                                    const u64 lhs2_mod = reduce_i128(
                                        static_cast<i128>(as) * k * l2 +
                                            static_cast<i128>(bs) * m2 * n,
                                        p);
                                    if (lhs2_mod == 0) continue;
                                    const u64 x2 = field.mul(lhs2_mod, field.inv(den2));
                                    ++rho[(x1 << 32) | x2];
                                }
                            }
                        }
                    }
                }
            }
        }
    };
    for (u64 kk = wk.lo; kk <= wk.hi; ++kk) {
        run_k(static_cast<i64>(kk));
        run_k(-static_cast<i64>(kk));
    }

    unsigned long long sigma2 = 0;
    for (const auto& [key, cnt] : rho) sigma2 += cnt * cnt;
    return sigma2;
}

}  // namespace charsum
