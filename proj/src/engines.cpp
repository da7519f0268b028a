#include "charsum/engines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "charsum/parallel.hpp"

namespace charsum {

namespace {

using i128 = __int128;

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_coprime(const PrimeField& field, i64 a, i64 b) {
    if (field.reduce(a) == 0 || field.reduce(b) == 0)
        fail(errc::bad_range, "p must not divide a*b");
}

void require_positive(u64 v, const char* name) {
    if (v == 0) fail(errc::bad_range, std::string(name) + " must be >= 1");
}

void require_1d_range(const WeightTable& t, u64 count, const char* name) {
    if (t.dims() != 1 || t.indices().size() < count)
        fail(errc::weight_coverage, std::string(name) + " does not cover 1.." + std::to_string(count));
    for (u64 i = 0; i < count; ++i)
        if (t.indices()[i] != i + 1)
            fail(errc::weight_coverage, std::string(name) + " is not indexed over 1.." + std::to_string(count));
}

void require_1d_set(const WeightTable& t, const std::vector<u64>& set, const char* name) {
    if (t.dims() != 1 || t.indices() != set)
        fail(errc::weight_coverage, std::string(name) + " is not materialized over the summation set");
}

void require_2d(const WeightTable& t, u64 rows, u64 cols, const char* name) {
    if (t.dims() != 2 || t.rows() < rows || t.cols() < cols)
        fail(errc::weight_coverage, std::string(name) + " does not cover the (" +
                                        std::to_string(rows) + ", " + std::to_string(cols) +
                                        ") rectangle");
}

// ----------------------------------------------------------------------
// Deterministic evaluation drivers. Exact accumulators are per worker and
// merge componentwise; float partials are per fixed-size block and merge in
// block order, so every thread count produces identical bits.
// ----------------------------------------------------------------------

template <class Body>  // Body(u64 begin, u64 end, ExactAccumulator&)
SumValue run_exact(const MultChar& chi, u64 outer_count, unsigned threads, Body&& body) {
    const unsigned workers = resolve_threads(threads);
    std::vector<ExactAccumulator> accs(workers,
                                       ExactAccumulator(chi.field().p(), chi.order() <= 2));
    for_each_block(outer_count, workers,
                   [&](u64, u64 begin, u64 end, unsigned w) { body(begin, end, accs[w]); });
    for (unsigned w = 1; w < workers; ++w) accs[0].merge(accs[w]);
    return accs[0].finalize();
}

template <class Body>  // Body(u64 begin, u64 end, FloatPartial&)
SumValue run_float(u64 outer_count, unsigned threads, Body&& body) {
    std::vector<FloatPartial> partials(block_count(outer_count));
    for_each_block(outer_count, resolve_threads(threads),
                   [&](u64 blk, u64 begin, u64 end, unsigned) { body(begin, end, partials[blk]); });
    SumValue out;
    for (const auto& part : partials) {
        out.approx += part.sum;
        out.terms += part.terms;
    }
    return out;
}

void add_exact_term(const MultChar& chi, ExactAccumulator& acc, u64 arg, long long w) {
    if (w == 0) return;
    const CharValue cv = chi.eval_residue(arg);
    if (!cv.zero) acc.add(cv.t, w);
}

void add_float_term(const MultChar& chi, FloatPartial& fp, u64 arg, std::complex<double> w) {
    if (w.real() == 0.0 && w.imag() == 0.0) return;
    const CharValue cv = chi.eval_residue(arg);
    if (cv.zero) return;
    fp.sum += w * cv.to_complex(chi.field().p());
    ++fp.terms;
}

// Single accumulator used by the naive reference evaluators. Kept structurally
// different from the parallel path on purpose: coefficients live in a map and
// floats accumulate in plain loop order.
struct NaiveAcc {
    const MultChar& chi;
    bool exact_mode;
    std::map<u64, long long> coeffs{};
    std::complex<double> fsum{0.0, 0.0};
    u64 terms = 0;

    void add_exact(u64 arg_residue, long long w) {
        if (w == 0) return;
        const CharValue cv = chi.eval_residue(arg_residue);
        if (cv.zero) return;
        coeffs[cv.t] += w;
        ++terms;
    }

    void add_float(u64 arg_residue, std::complex<double> w) {
        if (w.real() == 0.0 && w.imag() == 0.0) return;
        const CharValue cv = chi.eval_residue(arg_residue);
        if (cv.zero) return;
        fsum += w * cv.to_complex(chi.field().p());
        ++terms;
    }

    SumValue finalize() const {
        SumValue out;
        out.terms = terms;
        if (exact_mode) {
            std::vector<std::pair<u64, long long>> sparse;
            for (const auto& [t, c] : coeffs)
                if (c != 0) sparse.emplace_back(t, c);
            out.approx = ExactAccumulator::render(sparse, chi.field().p());
            out.exact = std::move(sparse);
        } else {
            out.approx = fsum;
        }
        return out;
    }
};

// ----------------------------------------------------------------------
// Rational functions over F_p
// ----------------------------------------------------------------------

u64 eval_poly1(const Poly1& poly, u64 x, u64 p) {
    u64 acc = 0;
    for (auto it = poly.coeff.rbegin(); it != poly.coeff.rend(); ++it)
        acc = (mul_mod(acc, x, p) + *it % p) % p;
    return acc;
}

u64 eval_poly2(const Poly2& poly, u64 x, u64 y, u64 p) {
    u64 acc = 0;
    for (auto row = poly.coeff.rbegin(); row != poly.coeff.rend(); ++row) {
        u64 row_val = 0;
        for (auto it = row->rbegin(); it != row->rend(); ++it)
            row_val = (mul_mod(row_val, y, p) + *it % p) % p;
        acc = (mul_mod(acc, x, p) + row_val) % p;
    }
    return acc;
}

bool poly1_vanishes(const Poly1& poly, u64 p) {
    for (u64 c : poly.coeff)
        if (c % p != 0) return false;
    return true;
}

bool poly2_vanishes(const Poly2& poly, u64 p) {
    for (const auto& row : poly.coeff)
        for (u64 c : row)
            if (c % p != 0) return false;
    return true;
}

std::optional<u64> eval_rat1(const RationalFn1& f, u64 x, const PrimeField& field) {
    const u64 den = eval_poly1(f.den, x, field.p());
    if (den == 0) return std::nullopt;
    return field.mul(eval_poly1(f.num, x, field.p()), field.inv(den));
}

std::optional<u64> eval_rat2(const RationalFn2& f, u64 x, u64 y, const PrimeField& field) {
    const u64 den = eval_poly2(f.den, x, y, field.p());
    if (den == 0) return std::nullopt;
    return field.mul(eval_poly2(f.num, x, y, field.p()), field.inv(den));
}

std::complex<double> additive_char(u64 t_times_x_mod_p, u64 p) {
    const double angle = kTwoPi * (static_cast<double>(t_times_x_mod_p) / static_cast<double>(p));
    return {std::cos(angle), std::sin(angle)};
}

std::vector<u64> sieve_tau(u64 limit) {
    std::vector<u64> tau(limit + 1, 0);
    for (u64 d = 1; d <= limit; ++d)
        for (u64 k = d; k <= limit; k += d) ++tau[k];
    return tau;
}

int kronecker_at_two(u64 a) {
    if (a % 2 == 0) return 0;
    const u64 r = a % 8;
    return (r == 1 || r == 7) ? 1 : -1;
}

std::vector<u64> primes_upto(u64 x) {
    std::vector<u64> out;
    if (x < 2) return out;
    std::vector<bool> composite(x + 1, false);
    for (u64 i = 2; i <= x; ++i) {
        if (!composite[i]) {
            out.push_back(i);
            for (u64 j = i * i; j <= x; j += i) composite[j] = true;
        }
    }
    return out;
}

}  // namespace

// ----------------------------------------------------------------------
// bilinear
// ----------------------------------------------------------------------

SumValue bilinear_sum(const MultChar& chi, const std::vector<u64>& setM,
                      const std::vector<u64>& setN, const WeightTable& alpha,
                      const WeightTable& beta, EngineOpts opts) {
    const PrimeField& field = chi.field();
    if (setM.empty() || setN.empty()) fail(errc::bad_range, "summation sets must be nonempty");
    require_1d_set(alpha, setM, "alpha");
    require_1d_set(beta, setN, "beta");

    std::vector<u64> mr(setM.size()), nr(setN.size());
    for (std::size_t i = 0; i < setM.size(); ++i) mr[i] = setM[i] % field.p();
    for (std::size_t i = 0; i < setN.size(); ++i) nr[i] = setN[i] % field.p();

    if (alpha.exact() && beta.exact()) {
        return run_exact(chi, setM.size(), opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
            for (u64 i = begin; i < end; ++i) {
                const long long wa = alpha.ivalue_at(i);
                if (wa == 0) continue;
                for (std::size_t j = 0; j < nr.size(); ++j) {
                    add_exact_term(chi, acc, field.add(mr[i], nr[j]), wa * beta.ivalue_at(j));
                }
            }
        });
    }
    return run_float(setM.size(), opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const auto wa = alpha.cvalue_at(i);
            if (wa.real() == 0.0 && wa.imag() == 0.0) continue;
            for (std::size_t j = 0; j < nr.size(); ++j)
                add_float_term(chi, fp, field.add(mr[i], nr[j]), wa * beta.cvalue_at(j));
        }
    });
}

SumValue bilinear_sum_naive(const MultChar& chi, const std::vector<u64>& setM,
                            const std::vector<u64>& setN, const WeightTable& alpha,
                            const WeightTable& beta) {
    const PrimeField& field = chi.field();
    if (setM.empty() || setN.empty()) fail(errc::bad_range, "summation sets must be nonempty");
    require_1d_set(alpha, setM, "alpha");
    require_1d_set(beta, setN, "beta");
    NaiveAcc acc{chi, alpha.exact() && beta.exact()};
    for (std::size_t i = 0; i < setM.size(); ++i) {
        for (std::size_t j = 0; j < setN.size(); ++j) {
            const u64 arg = (setM[i] % field.p() + setN[j] % field.p()) % field.p();
            if (acc.exact_mode)
                acc.add_exact(arg, alpha.ivalue_at(i) * beta.ivalue_at(j));
            else
                acc.add_float(arg, alpha.cvalue_at(i) * beta.cvalue_at(j));
        }
    }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// trilinear
// ----------------------------------------------------------------------

SumValue trilinear_sum(const MultChar& chi, i64 a, i64 b, u64 K, u64 M, u64 N,
                       const WeightTable& alpha, const WeightTable& beta, EngineOpts opts) {
    const PrimeField& field = chi.field();
    require_coprime(field, a, b);
    require_positive(K, "K");
    require_positive(M, "M");
    require_positive(N, "N");
    require_1d_range(alpha, M, "alpha");
    require_2d(beta, K, N, "beta");

    const u64 ar = field.reduce(a), br = field.reduce(b);
    const u64 p = field.p();

    if (alpha.exact() && beta.exact()) {
        return run_exact(chi, K, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
            for (u64 i = begin; i < end; ++i) {
                const u64 k = i + 1;
                const u64 base = mul_mod(ar, k % p, p);
                for (u64 m = 1; m <= M; ++m) {
                    const long long wa = alpha.ivalue_at(m - 1);
                    if (wa == 0) continue;
                    const u64 bm = mul_mod(br, m % p, p);
                    for (u64 n = 1; n <= N; ++n) {
                        const u64 arg = field.add(base, mul_mod(bm, n % p, p));
                        add_exact_term(chi, acc, arg, wa * beta.ivalue2(k, n));
                    }
                }
            }
        });
    }
    return run_float(K, opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const u64 k = i + 1;
            const u64 base = mul_mod(ar, k % p, p);
            for (u64 m = 1; m <= M; ++m) {
                const auto wa = alpha.cvalue_at(m - 1);
                if (wa.real() == 0.0 && wa.imag() == 0.0) continue;
                const u64 bm = mul_mod(br, m % p, p);
                for (u64 n = 1; n <= N; ++n) {
                    const u64 arg = field.add(base, mul_mod(bm, n % p, p));
                    add_float_term(chi, fp, arg, wa * beta.cvalue2(k, n));
                }
            }
        }
    });
}

SumValue trilinear_sum_naive(const MultChar& chi, i64 a, i64 b, u64 K, u64 M, u64 N,
                             const WeightTable& alpha, const WeightTable& beta) {
    const PrimeField& field = chi.field();
    require_coprime(field, a, b);
    require_positive(K, "K");
    require_positive(M, "M");
    require_positive(N, "N");
    require_1d_range(alpha, M, "alpha");
    require_2d(beta, K, N, "beta");
    NaiveAcc acc{chi, alpha.exact() && beta.exact()};
    const i128 pp = static_cast<i128>(field.p());
    for (u64 k = 1; k <= K; ++k) {
        for (u64 m = 1; m <= M; ++m) {
            for (u64 n = 1; n <= N; ++n) {
                i128 arg = static_cast<i128>(a) * static_cast<i128>(k) +
                           static_cast<i128>(b) * static_cast<i128>(m) * static_cast<i128>(n);
                arg %= pp;
                if (arg < 0) arg += pp;
                if (acc.exact_mode)
                    acc.add_exact(static_cast<u64>(arg), alpha.ivalue_at(m - 1) * beta.ivalue2(k, n));
                else
                    acc.add_float(static_cast<u64>(arg), alpha.cvalue_at(m - 1) * beta.cvalue2(k, n));
            }
        }
    }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// quadrilinear
// ----------------------------------------------------------------------

SumValue quadrilinear_sum(const MultChar& chi, i64 a, i64 b, u64 K, u64 L, u64 M, u64 N,
                          const WeightTable& alpha, const WeightTable& beta, EngineOpts opts) {
    const PrimeField& field = chi.field();
    require_coprime(field, a, b);
    require_positive(K, "K");
    require_positive(L, "L");
    require_positive(M, "M");
    require_positive(N, "N");
    require_2d(alpha, L, M, "alpha");
    require_2d(beta, K, N, "beta");

    const u64 ar = field.reduce(a), br = field.reduce(b);
    const u64 p = field.p();

    if (alpha.exact() && beta.exact()) {
        return run_exact(chi, K, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
            for (u64 i = begin; i < end; ++i) {
                const u64 k = i + 1;
                const u64 ak = mul_mod(ar, k % p, p);
                for (u64 l = 1; l <= L; ++l) {
                    const u64 akl = mul_mod(ak, l % p, p);
                    for (u64 m = 1; m <= M; ++m) {
                        const long long wa = alpha.ivalue2(l, m);
                        if (wa == 0) continue;
                        const u64 bm = mul_mod(br, m % p, p);
                        for (u64 n = 1; n <= N; ++n) {
                            const u64 arg = field.add(akl, mul_mod(bm, n % p, p));
                            add_exact_term(chi, acc, arg, wa * beta.ivalue2(k, n));
                        }
                    }
                }
            }
        });
    }
    return run_float(K, opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const u64 k = i + 1;
            const u64 ak = mul_mod(ar, k % p, p);
            for (u64 l = 1; l <= L; ++l) {
                const u64 akl = mul_mod(ak, l % p, p);
                for (u64 m = 1; m <= M; ++m) {
                    const auto wa = alpha.cvalue2(l, m);
                    if (wa.real() == 0.0 && wa.imag() == 0.0) continue;
                    const u64 bm = mul_mod(br, m % p, p);
                    for (u64 n = 1; n <= N; ++n) {
                        const u64 arg = field.add(akl, mul_mod(bm, n % p, p));
                        add_float_term(chi, fp, arg, wa * beta.cvalue2(k, n));
                    }
                }
            }
        }
    });
}

SumValue quadrilinear_sum_naive(const MultChar& chi, i64 a, i64 b, u64 K, u64 L, u64 M, u64 N,
                                const WeightTable& alpha, const WeightTable& beta) {
    const PrimeField& field = chi.field();
    require_coprime(field, a, b);
    require_positive(K, "K");
    require_positive(L, "L");
    require_positive(M, "M");
    require_positive(N, "N");
    require_2d(alpha, L, M, "alpha");
    require_2d(beta, K, N, "beta");
    NaiveAcc acc{chi, alpha.exact() && beta.exact()};
    const i128 pp = static_cast<i128>(field.p());
    for (u64 k = 1; k <= K; ++k)
        for (u64 l = 1; l <= L; ++l)
            for (u64 m = 1; m <= M; ++m)
                for (u64 n = 1; n <= N; ++n) {
                    i128 arg = static_cast<i128>(a) * k * l + static_cast<i128>(b) * m * n;
                    arg %= pp;
                    if (arg < 0) arg += pp;
                    if (acc.exact_mode)
                        acc.add_exact(static_cast<u64>(arg),
                                      alpha.ivalue2(l, m) * beta.ivalue2(k, n));
                    else
                        acc.add_float(static_cast<u64>(arg),
                                      alpha.cvalue2(l, m) * beta.cvalue2(k, n));
                }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// fs_quad: sum_{r,s,u,v<=x} gamma_{r,s,u} chi(rs - uv)
// ----------------------------------------------------------------------

SumValue fs_quad_sum(const MultChar& chi, u64 x, const WeightTable& alpha_r,
                     const WeightTable& beta_u, EngineOpts opts) {
    const PrimeField& field = chi.field();
    require_positive(x, "x");
    require_1d_range(alpha_r, x, "alpha");
    require_1d_range(beta_u, x, "beta");
    const u64 p = field.p();

    if (alpha_r.exact() && beta_u.exact()) {
        return run_exact(chi, x, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
            for (u64 i = begin; i < end; ++i) {
                const u64 r = i + 1;
                const long long wr = alpha_r.ivalue_at(r - 1);
                if (wr == 0) continue;
                for (u64 u = 1; u <= x; ++u) {
                    const long long w = wr * beta_u.ivalue_at(u - 1);
                    if (w == 0) continue;
                    const u64 um = u % p;
                    for (u64 s = 1; s <= x; ++s) {
                        const u64 rs = mul_mod(r % p, s % p, p);
                        for (u64 v = 1; v <= x; ++v)
                            add_exact_term(chi, acc, field.sub(rs, mul_mod(um, v % p, p)), w);
                    }
                }
            }
        });
    }
    return run_float(x, opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const u64 r = i + 1;
            const auto wr = alpha_r.cvalue_at(r - 1);
            if (wr.real() == 0.0 && wr.imag() == 0.0) continue;
            for (u64 u = 1; u <= x; ++u) {
                const auto w = wr * beta_u.cvalue_at(u - 1);
                const u64 um = u % p;
                for (u64 s = 1; s <= x; ++s) {
                    const u64 rs = mul_mod(r % p, s % p, p);
                    for (u64 v = 1; v <= x; ++v)
                        add_float_term(chi, fp, field.sub(rs, mul_mod(um, v % p, p)), w);
                }
            }
        }
    });
}

SumValue fs_quad_sum(const MultChar& chi, u64 x,
                     const std::function<long long(u64, u64, u64)>& gamma, EngineOpts opts) {
    const PrimeField& field = chi.field();
    require_positive(x, "x");
    const u64 p = field.p();
    return run_exact(chi, x, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
        for (u64 i = begin; i < end; ++i) {
            const u64 r = i + 1;
            for (u64 s = 1; s <= x; ++s) {
                const u64 rs = mul_mod(r % p, s % p, p);
                for (u64 u = 1; u <= x; ++u) {
                    const long long w = gamma(r, s, u);
                    if (w == 0) continue;
                    const u64 um = u % p;
                    for (u64 v = 1; v <= x; ++v)
                        add_exact_term(chi, acc, field.sub(rs, mul_mod(um, v % p, p)), w);
                }
            }
        }
    });
}

SumValue fs_quad_sum(const MultChar& chi, u64 x,
                     const std::function<std::complex<double>(u64, u64, u64)>& gamma,
                     EngineOpts opts) {
    const PrimeField& field = chi.field();
    require_positive(x, "x");
    const u64 p = field.p();
    return run_float(x, opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const u64 r = i + 1;
            for (u64 s = 1; s <= x; ++s) {
                const u64 rs = mul_mod(r % p, s % p, p);
                for (u64 u = 1; u <= x; ++u) {
                    const auto w = gamma(r, s, u);
                    const u64 um = u % p;
                    for (u64 v = 1; v <= x; ++v)
                        add_float_term(chi, fp, field.sub(rs, mul_mod(um, v % p, p)), w);
                }
            }
        }
    });
}

SumValue fs_quad_sum_naive(const MultChar& chi, u64 x, const WeightTable& alpha_r,
                           const WeightTable& beta_u) {
    const PrimeField& field = chi.field();
    require_positive(x, "x");
    require_1d_range(alpha_r, x, "alpha");
    require_1d_range(beta_u, x, "beta");
    NaiveAcc acc{chi, alpha_r.exact() && beta_u.exact()};
    const i128 pp = static_cast<i128>(field.p());
    for (u64 r = 1; r <= x; ++r)
        for (u64 s = 1; s <= x; ++s)
            for (u64 u = 1; u <= x; ++u)
                for (u64 v = 1; v <= x; ++v) {
                    i128 arg = static_cast<i128>(r) * s - static_cast<i128>(u) * v;
                    arg %= pp;
                    if (arg < 0) arg += pp;
                    if (acc.exact_mode)
                        acc.add_exact(static_cast<u64>(arg),
                                      alpha_r.ivalue_at(r - 1) * beta_u.ivalue_at(u - 1));
                    else
                        acc.add_float(static_cast<u64>(arg),
                                      alpha_r.cvalue_at(r - 1) * beta_u.cvalue_at(u - 1));
                }
    return acc.finalize();
}

SumValue fs_quad_sum_naive(const MultChar& chi, u64 x,
                           const std::function<long long(u64, u64, u64)>& gamma) {
    const PrimeField& field = chi.field();
    require_positive(x, "x");
    NaiveAcc acc{chi, true};
    const i128 pp = static_cast<i128>(field.p());
    for (u64 r = 1; r <= x; ++r)
        for (u64 s = 1; s <= x; ++s)
            for (u64 u = 1; u <= x; ++u)
                for (u64 v = 1; v <= x; ++v) {
                    i128 arg = static_cast<i128>(r) * s - static_cast<i128>(u) * v;
                    arg %= pp;
                    if (arg < 0) arg += pp;
                    acc.add_exact(static_cast<u64>(arg), gamma(r, s, u));
                }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// mixed sums with a rational additive twist or multiplicative product
// ----------------------------------------------------------------------

namespace {

void validate_mixed(const PrimeField& field, u64 psi_t, const RationalFn1& P,
                    const RationalFn2& Q, u64 K, u64 M, u64 N, MixedVariant variant) {
    require_positive(K, "K");
    require_positive(M, "M");
    require_positive(N, "N");
    if (poly1_vanishes(P.den, field.p()) || poly2_vanishes(Q.den, field.p()))
        fail(errc::zero_denominator_polynomial, "a denominator is identically zero mod p");
    if (variant == MixedVariant::additive_twist && psi_t % field.p() == 0)
        fail(errc::bad_range, "psi index must be nonzero mod p");
}

}  // namespace

SumValue mixed_sum(const MultChar& chi, u64 psi_t, const RationalFn1& P, const RationalFn2& Q,
                   u64 K, u64 M, u64 N, MixedVariant variant, EngineOpts opts) {
    const PrimeField& field = chi.field();
    validate_mixed(field, psi_t, P, Q, K, M, N, variant);
    const u64 p = field.p();
    const u64 t = psi_t % p;

    // P depends on m only; evaluate once.
    std::vector<std::optional<u64>> Pm(M + 1);
    for (u64 m = 1; m <= M; ++m) Pm[m] = eval_rat1(P, m % p, field);

    if (variant == MixedVariant::multiplicative_product) {
        return run_exact(chi, K, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
            for (u64 i = begin; i < end; ++i) {
                const u64 k = i + 1;
                const u64 kr = k % p;
                for (u64 n = 1; n <= N; ++n) {
                    const auto Qkn = eval_rat2(Q, kr, n % p, field);
                    if (!Qkn) continue;
                    for (u64 m = 1; m <= M; ++m) {
                        if (!Pm[m]) continue;
                        const u64 base = field.add(kr, mul_mod(m % p, n % p, p));
                        const u64 arg = field.mul(field.mul(base, *Pm[m]), *Qkn);
                        add_exact_term(chi, acc, arg, 1);
                    }
                }
            }
        });
    }

    return run_float(K, opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const u64 k = i + 1;
            const u64 kr = k % p;
            for (u64 n = 1; n <= N; ++n) {
                const auto Qkn = eval_rat2(Q, kr, n % p, field);
                if (!Qkn) continue;
                for (u64 m = 1; m <= M; ++m) {
                    if (!Pm[m]) continue;
                    const u64 arg = field.add(kr, mul_mod(m % p, n % p, p));
                    const u64 phase = mul_mod(t, field.add(*Pm[m], *Qkn), p);
                    add_float_term(chi, fp, arg, additive_char(phase, p));
                }
            }
        }
    });
}

SumValue mixed_sum_naive(const MultChar& chi, u64 psi_t, const RationalFn1& P,
                         const RationalFn2& Q, u64 K, u64 M, u64 N, MixedVariant variant) {
    const PrimeField& field = chi.field();
    validate_mixed(field, psi_t, P, Q, K, M, N, variant);
    const u64 p = field.p();
    const u64 t = psi_t % p;
    NaiveAcc acc{chi, variant == MixedVariant::multiplicative_product};
    for (u64 k = 1; k <= K; ++k)
        for (u64 m = 1; m <= M; ++m)
            for (u64 n = 1; n <= N; ++n) {
                const auto Pm = eval_rat1(P, m % p, field);
                const auto Qkn = eval_rat2(Q, k % p, n % p, field);
                if (!Pm || !Qkn) continue;
                const u64 base = (k % p + mul_mod(m % p, n % p, p)) % p;
                if (variant == MixedVariant::multiplicative_product) {
                    acc.add_exact(field.mul(field.mul(base, *Pm), *Qkn), 1);
                } else {
                    const u64 phase = mul_mod(t, (*Pm + *Qkn) % p, p);
                    acc.add_float(base, additive_char(phase, p));
                }
            }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// divisor sums S(U,V)
// ----------------------------------------------------------------------

SumValue divisor_sum(const MultChar& chi, u64 U, u64 V, EngineOpts opts) {
    const PrimeField& field = chi.field();
    require_positive(U, "U");
    require_positive(V, "V");
    const auto tau = sieve_tau(std::max(U, V));
    const u64 p = field.p();
    return run_exact(chi, U, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
        for (u64 i = begin; i < end; ++i) {
            const u64 u = i + 1;
            const u64 ur = u % p;
            const long long wu = static_cast<long long>(tau[u]);
            for (u64 v = 1; v <= V; ++v)
                add_exact_term(chi, acc, field.sub(ur, v % p),
                               wu * static_cast<long long>(tau[v]));
        }
    });
}

SumValue divisor_sum_naive(const MultChar& chi, u64 U, u64 V) {
    const PrimeField& field = chi.field();
    require_positive(U, "U");
    require_positive(V, "V");
    NaiveAcc acc{chi, true};
    const i128 pp = static_cast<i128>(field.p());
    for (u64 u = 1; u <= U; ++u)
        for (u64 v = 1; v <= V; ++v) {
            i128 arg = static_cast<i128>(u) - static_cast<i128>(v);
            arg %= pp;
            if (arg < 0) arg += pp;
            acc.add_exact(static_cast<u64>(arg),
                          static_cast<long long>(divisor_tau(u) * divisor_tau(v)));
        }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// Farey fractions
// ----------------------------------------------------------------------

std::vector<Fraction> farey_set(u64 R) {
    if (R < 2) fail(errc::bad_range, "Farey order must be >= 2");
    std::vector<Fraction> out;
    for (u64 s = 1; s <= R; ++s)
        for (u64 r = 0; r <= s; ++r)
            if (std::gcd(r, s) == 1) out.push_back({r, s});
    std::sort(out.begin(), out.end(), [](const Fraction& a, const Fraction& b) {
        return u128(a.num) * b.den < u128(b.num) * a.den;
    });
    return out;
}

u64 farey_embed(const PrimeField& field, Fraction f) {
    if (f.den % field.p() == 0)
        fail(errc::divisor_divisible, "p divides the denominator " + std::to_string(f.den));
    return field.mul(f.num % field.p(), field.inv(f.den % field.p()));
}

namespace {

std::vector<u64> embedded_farey(const PrimeField& field, u64 R) {
    if (u128(R) * R >= field.p())
        fail(errc::bad_range, "Farey order must satisfy R < sqrt(p), got R = " + std::to_string(R));
    std::vector<u64> em;
    for (const Fraction& f : farey_set(R)) em.push_back(farey_embed(field, f));
    return em;
}

}  // namespace

SumValue farey_sum(const MultChar& chi, u64 R, const WeightTable& xi, const WeightTable& zeta,
                   EngineOpts opts) {
    const PrimeField& field = chi.field();
    const auto em = embedded_farey(field, R);
    require_1d_range(xi, em.size(), "xi");
    require_1d_range(zeta, em.size(), "zeta");

    if (xi.exact() && zeta.exact()) {
        return run_exact(chi, em.size(), opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
            for (u64 i = begin; i < end; ++i) {
                const long long wi = xi.ivalue_at(i);
                if (wi == 0) continue;
                for (std::size_t j = 0; j < em.size(); ++j)
                    add_exact_term(chi, acc, field.sub(em[i], em[j]), wi * zeta.ivalue_at(j));
            }
        });
    }
    return run_float(em.size(), opts.threads, [&](u64 begin, u64 end, FloatPartial& fp) {
        for (u64 i = begin; i < end; ++i) {
            const auto wi = xi.cvalue_at(i);
            if (wi.real() == 0.0 && wi.imag() == 0.0) continue;
            for (std::size_t j = 0; j < em.size(); ++j)
                add_float_term(chi, fp, field.sub(em[i], em[j]), wi * zeta.cvalue_at(j));
        }
    });
}

SumValue farey_sum_naive(const MultChar& chi, u64 R, const WeightTable& xi,
                         const WeightTable& zeta) {
    const PrimeField& field = chi.field();
    const auto em = embedded_farey(field, R);
    require_1d_range(xi, em.size(), "xi");
    require_1d_range(zeta, em.size(), "zeta");
    NaiveAcc acc{chi, xi.exact() && zeta.exact()};
    for (std::size_t i = 0; i < em.size(); ++i)
        for (std::size_t j = 0; j < em.size(); ++j) {
            const u64 arg = (em[i] + field.p() - em[j]) % field.p();
            if (acc.exact_mode)
                acc.add_exact(arg, xi.ivalue_at(i) * zeta.ivalue_at(j));
            else
                acc.add_float(arg, xi.cvalue_at(i) * zeta.cvalue_at(j));
        }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// prime quadrilinear sums W(x)
// ----------------------------------------------------------------------

namespace {

struct PrimeSymbols {
    std::vector<u64> primes;
    std::vector<int> symbol;  // symbol[i * n + j] = (primes[i] / primes[j])

    int at(std::size_t i, std::size_t j) const { return symbol[i * primes.size() + j]; }
};

PrimeSymbols prime_symbol_table(u64 x, bool kronecker_two) {
    PrimeSymbols t;
    for (u64 q : primes_upto(x))
        if (q != 2 || kronecker_two) t.primes.push_back(q);
    const std::size_t n = t.primes.size();
    t.symbol.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            t.symbol[i * n + j] = (t.primes[j] == 2)
                                      ? kronecker_at_two(t.primes[i])
                                      : jacobi(static_cast<i64>(t.primes[i] % t.primes[j]),
                                               t.primes[j]);
    return t;
}

}  // namespace

SumValue prime_quad_sum(const MultChar& chi, u64 x, bool kronecker_two, EngineOpts opts) {
    const PrimeField& field = chi.field();
    const PrimeSymbols tab = prime_symbol_table(x, kronecker_two);
    const u64 p = field.p();
    const std::size_t n = tab.primes.size();
    return run_exact(chi, n, opts.threads, [&](u64 begin, u64 end, ExactAccumulator& acc) {
        for (u64 i1 = begin; i1 < end; ++i1) {
            const u64 p1 = tab.primes[i1] % p;
            for (std::size_t i3 = 0; i3 < n; ++i3) {
                const int s13 = tab.at(i1, i3);
                if (s13 == 0) continue;
                const u64 p3 = tab.primes[i3] % p;
                for (std::size_t i2 = 0; i2 < n; ++i2) {
                    const u64 p12 = mul_mod(p1, tab.primes[i2] % p, p);
                    for (std::size_t i4 = 0; i4 < n; ++i4) {
                        const int w = s13 * tab.at(i2, i4);
                        if (w == 0) continue;
                        const u64 p34 = mul_mod(p3, tab.primes[i4] % p, p);
                        add_exact_term(chi, acc, field.sub(p12, p34), w);
                    }
                }
            }
        }
    });
}

SumValue prime_quad_sum_naive(const MultChar& chi, u64 x, bool kronecker_two) {
    const PrimeField& field = chi.field();
    std::vector<u64> primes;
    for (u64 q : primes_upto(x))
        if (q != 2 || kronecker_two) primes.push_back(q);
    NaiveAcc acc{chi, true};
    const i128 pp = static_cast<i128>(field.p());
    for (u64 p1 : primes)
        for (u64 p2 : primes)
            for (u64 p3 : primes)
                for (u64 p4 : primes) {
                    const int s1 = (p3 == 2) ? kronecker_at_two(p1)
                                             : jacobi(static_cast<i64>(p1 % p3), p3);
                    const int s2 = (p4 == 2) ? kronecker_at_two(p2)
                                             : jacobi(static_cast<i64>(p2 % p4), p4);
                    if (s1 * s2 == 0) continue;
                    i128 arg = static_cast<i128>(p1) * p2 - static_cast<i128>(p3) * p4;
                    arg %= pp;
                    if (arg < 0) arg += pp;
                    acc.add_exact(static_cast<u64>(arg), s1 * s2);
                }
    return acc.finalize();
}

// ----------------------------------------------------------------------
// SumSpec dispatch
// ----------------------------------------------------------------------

const char* kind_name(SumKind kind) {
    switch (kind) {
        case SumKind::bilinear: return "bilinear";
        case SumKind::trilinear: return "trilinear";
        case SumKind::quadrilinear: return "quadrilinear";
        case SumKind::fs_quad: return "fs_quad";
        case SumKind::mixed_additive: return "mixed_additive";
        case SumKind::mixed_multiplicative: return "mixed_multiplicative";
        case SumKind::divisor: return "divisor";
        case SumKind::farey: return "farey";
        case SumKind::prime_quad: return "prime_quad";
    }
    return "unknown";
}

u64 char_index(const PrimeField& field, const SumSpec& spec) {
    return spec.legendre_char ? (field.p() - 1) / 2 : spec.j;
}

namespace {

template <bool Naive>
SumValue dispatch(const PrimeField& field, const SumSpec& spec, EngineOpts opts) {
    const MultChar chi(field, char_index(field, spec));
    switch (spec.kind) {
        case SumKind::bilinear: {
            std::vector<u64> setM = spec.setM, setN = spec.setN;
            if (setM.empty())
                for (u64 m = 1; m <= spec.M; ++m) setM.push_back(m);
            if (setN.empty())
                for (u64 n = 1; n <= spec.N; ++n) setN.push_back(n);
            const auto alpha = WeightTable::materialize(spec.alpha, setM);
            const auto beta = WeightTable::materialize(spec.beta, setN);
            return Naive ? bilinear_sum_naive(chi, setM, setN, alpha, beta)
                         : bilinear_sum(chi, setM, setN, alpha, beta, opts);
        }
        case SumKind::trilinear: {
            const auto alpha = WeightTable::materialize_range(spec.alpha, 1, spec.M);
            const auto beta = WeightTable::materialize2(spec.beta, spec.K, spec.N);
            return Naive ? trilinear_sum_naive(chi, spec.a, spec.b, spec.K, spec.M, spec.N, alpha, beta)
                         : trilinear_sum(chi, spec.a, spec.b, spec.K, spec.M, spec.N, alpha, beta, opts);
        }
        case SumKind::quadrilinear: {
            const auto alpha = WeightTable::materialize2(spec.alpha, spec.L, spec.M);
            const auto beta = WeightTable::materialize2(spec.beta, spec.K, spec.N);
            return Naive ? quadrilinear_sum_naive(chi, spec.a, spec.b, spec.K, spec.L, spec.M,
                                                  spec.N, alpha, beta)
                         : quadrilinear_sum(chi, spec.a, spec.b, spec.K, spec.L, spec.M, spec.N,
                                            alpha, beta, opts);
        }
        case SumKind::fs_quad: {
            const auto alpha = WeightTable::materialize_range(spec.alpha, 1, spec.x);
            const auto beta = WeightTable::materialize_range(spec.beta, 1, spec.x);
            return Naive ? fs_quad_sum_naive(chi, spec.x, alpha, beta)
                         : fs_quad_sum(chi, spec.x, alpha, beta, opts);
        }
        case SumKind::mixed_additive:
            return Naive ? mixed_sum_naive(chi, spec.psi_t, spec.P, spec.Q, spec.K, spec.M,
                                           spec.N, MixedVariant::additive_twist)
                         : mixed_sum(chi, spec.psi_t, spec.P, spec.Q, spec.K, spec.M, spec.N,
                                     MixedVariant::additive_twist, opts);
        case SumKind::mixed_multiplicative:
            return Naive ? mixed_sum_naive(chi, spec.psi_t, spec.P, spec.Q, spec.K, spec.M,
                                           spec.N, MixedVariant::multiplicative_product)
                         : mixed_sum(chi, spec.psi_t, spec.P, spec.Q, spec.K, spec.M, spec.N,
                                     MixedVariant::multiplicative_product, opts);
        case SumKind::divisor:
            return Naive ? divisor_sum_naive(chi, spec.U, spec.V)
                         : divisor_sum(chi, spec.U, spec.V, opts);
        case SumKind::farey: {
            const auto count = farey_set(spec.R).size();
            const auto xi = WeightTable::materialize_range(spec.alpha, 1, count);
            const auto zeta = WeightTable::materialize_range(spec.beta, 1, count);
            return Naive ? farey_sum_naive(chi, spec.R, xi, zeta)
                         : farey_sum(chi, spec.R, xi, zeta, opts);
        }
        case SumKind::prime_quad:
            return Naive ? prime_quad_sum_naive(chi, spec.x, spec.kronecker_two)
                         : prime_quad_sum(chi, spec.x, spec.kronecker_two, opts);
    }
    fail(errc::bad_range, "unknown sum kind");
}

}  // namespace

SumValue evaluate(const PrimeField& field, const SumSpec& spec, EngineOpts opts) {
    return dispatch<false>(field, spec, opts);
}

SumValue evaluate_naive(const PrimeField& field, const SumSpec& spec) {
    return dispatch<true>(field, spec, {});
}

}  // namespace charsum
