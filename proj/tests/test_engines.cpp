#include "doctest.h"

#include <cmath>
#include <algorithm>
#include <complex>

#include "charsum/engines.hpp"
#include "charsum/rng.hpp"
#include "test_helpers.hpp"

using namespace charsum;
using charsum::testing::odd_primes_upto;
using charsum::testing::thrown_kind;

namespace {

// Independent reference for quadratic-character sums: plain signed loops over
// the Legendre symbol, no engine machinery.
long long leg(i64 x, u64 p) { return legendre(x, p); }

WeightTable ones(u64 n) { return WeightTable::materialize_range(OneWeight{}, 1, n); }
WeightTable ones2(u64 r, u64 c) { return WeightTable::materialize2(OneWeight{}, r, c); }
WeightTable zeros(u64 n) {
    TableValues t;
    t.values.assign(n, {0.0, 0.0});
    return WeightTable::materialize_range(t, 1, n);
}

bool same_exact(const SumValue& a, const SumValue& b) {
    return a.exact.has_value() && b.exact.has_value() && *a.exact == *b.exact &&
           a.terms == b.terms;
}

}  // namespace

TEST_CASE("bilinear examples") {
    const PrimeField f5(5);
    const MultChar chi(f5, 2);  // quadratic

    SUBCASE("p=5 product set {1,2}x{1,2} gives -2") {
        // Independent oracle: chi(2) + 2 chi(3) + chi(4) over Legendre symbols.
        long long expect = 0;
        for (u64 m : {1, 2})
            for (u64 n : {1, 2}) expect += leg(static_cast<i64>(m + n), 5);
        CHECK(expect == -2);

        const std::vector<u64> s{1, 2};
        const auto w = WeightTable::materialize(OneWeight{}, s);
        const auto sum = bilinear_sum(chi, s, s, w, w);
        CHECK(sum.exact_integer(5) == expect);
        CHECK(sum.approx.real() == doctest::Approx(-2.0));
    }

    SUBCASE("zero beta kills the sum") {
        const std::vector<u64> s{1, 2};
        const auto alpha = WeightTable::materialize(OneWeight{}, s);
        TableValues z;
        z.values = {{0, 0}, {0, 0}};
        const auto beta = WeightTable::materialize(z, s);
        const auto sum = bilinear_sum(chi, s, s, alpha, beta);
        CHECK(sum.exact_integer(5) == 0);
        CHECK(sum.terms == 0);
    }

    SUBCASE("complete residue set vanishes by orthogonality") {
        const std::vector<u64> full{0, 1, 2, 3, 4}, zero{0};
        const auto alpha = WeightTable::materialize(OneWeight{}, full);
        const auto beta = WeightTable::materialize(OneWeight{}, zero);
        CHECK(bilinear_sum(chi, full, zero, alpha, beta).exact_integer(5) == 0);
    }

    SUBCASE("weight coverage is enforced") {
        const std::vector<u64> s{1, 2}, other{1, 3};
        const auto w = WeightTable::materialize(OneWeight{}, other);
        CHECK(thrown_kind([&] { bilinear_sum(chi, s, s, w, w); }) == errc::weight_coverage);
    }
}

TEST_CASE("trilinear examples") {
    const PrimeField f7(7);
    const MultChar chi(f7, 3);  // quadratic: j = (7-1)/2

    SUBCASE("K=M=N=1 gives chi(2) = +1") {
        CHECK(leg(2, 7) == 1);
        const auto sum = trilinear_sum(chi, 1, 1, 1, 1, 1, ones(1), ones2(1, 1));
        CHECK(sum.exact_integer(7) == 1);
    }
    SUBCASE("K=2 gives chi(2)+chi(3) = 0") {
        CHECK(leg(2, 7) + leg(3, 7) == 0);
        const auto sum = trilinear_sum(chi, 1, 1, 2, 1, 1, ones(1), ones2(2, 1));
        CHECK(sum.exact_integer(7) == 0);
    }
    SUBCASE("b=6 hits chi(0) = 0") {
        const auto sum = trilinear_sum(chi, 1, 6, 1, 1, 1, ones(1), ones2(1, 1));
        CHECK(sum.exact_integer(7) == 0);
        CHECK(sum.terms == 0);
    }
    SUBCASE("p dividing ab is rejected") {
        CHECK(thrown_kind([&] {
                  trilinear_sum(chi, 7, 1, 1, 1, 1, ones(1), ones2(1, 1));
              }) == errc::bad_range);
    }
}

TEST_CASE("quadrilinear examples") {
    const PrimeField f5(5);
    const MultChar chi(f5, 2);

    SUBCASE("K=L=M=N=1 gives chi(2) = -1") {
        const auto sum = quadrilinear_sum(chi, 1, 1, 1, 1, 1, 1, ones2(1, 1), ones2(1, 1));
        CHECK(sum.exact_integer(5) == -1);
    }
    SUBCASE("L=1 reduces to the trilinear sum") {
        const u64 K = 3, M = 2, N = 3;
        const auto tri = trilinear_sum(chi, 2, 3, K, M, N, ones(M), ones2(K, N));
        const auto quad = quadrilinear_sum(chi, 2, 3, K, 1, M, N, ones2(1, M), ones2(K, N));
        CHECK(same_exact(tri, quad));
        CHECK(tri.approx == quad.approx);
    }
    SUBCASE("zero beta") {
        TableValues z;
        z.rows = 1;
        z.cols = 1;
        z.values = {{0, 0}};
        const auto beta = WeightTable::materialize2(z, 1, 1);
        const auto sum = quadrilinear_sum(chi, 1, 1, 1, 1, 1, 1, ones2(1, 1), beta);
        CHECK(sum.exact_integer(5) == 0);
        CHECK(sum.terms == 0);
    }
}

TEST_CASE("fs_quad examples") {
    const PrimeField f5(5);
    const MultChar chi(f5, 2);

    SUBCASE("x=1 is chi(0) = 0") {
        const auto sum = fs_quad_sum(chi, 1, ones(1), ones(1));
        CHECK(sum.exact_integer(5) == 0);
        CHECK(sum.terms == 0);
    }
    SUBCASE("p=5, x=2 gives -2") {
        long long expect = 0;
        for (u64 r = 1; r <= 2; ++r)
            for (u64 s = 1; s <= 2; ++s)
                for (u64 u = 1; u <= 2; ++u)
                    for (u64 v = 1; v <= 2; ++v)
                        expect += leg(static_cast<i64>(r * s) - static_cast<i64>(u * v), 5);
        CHECK(expect == -2);
        CHECK(fs_quad_sum(chi, 2, ones(2), ones(2)).exact_integer(5) == expect);
    }
    SUBCASE("zero gamma") {
        CHECK(fs_quad_sum(chi, 2, zeros(2), zeros(2)).exact_integer(5) == 0);
    }
    SUBCASE("callable gamma matches the product form") {
        const auto alpha = WeightTable::materialize_range(DivisorFn{}, 1, 3);
        const auto beta = WeightTable::materialize_range(PrimeIndicator{}, 1, 3);
        const auto via_tables = fs_quad_sum(chi, 3, alpha, beta);
        const auto via_callable = fs_quad_sum(
            chi, 3, std::function<long long(u64, u64, u64)>([&](u64 r, u64, u64 u) {
                return alpha.ivalue_at(r - 1) * beta.ivalue_at(u - 1);
            }));
        CHECK(same_exact(via_tables, via_callable));
    }
}

TEST_CASE("mixed sum examples") {
    const PrimeField f5(5);
    const MultChar chi(f5, 2);
    RationalFn1 P0;  // identically 0
    RationalFn2 Q0;  // identically 0

    SUBCASE("P=Q=0 additive twist reduces to the plain trilinear term") {
        const auto sum = mixed_sum(chi, 1, P0, Q0, 1, 1, 1, MixedVariant::additive_twist);
        CHECK(sum.approx.real() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(sum.approx.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("P(X)=X twists by e(1/5)") {
        RationalFn1 P;
        P.num.coeff = {0, 1};
        const auto sum = mixed_sum(chi, 1, P, Q0, 1, 1, 1, MixedVariant::additive_twist);
        const double ang = 2.0 * 3.14159265358979323846 / 5.0;
        CHECK(sum.approx.real() == doctest::Approx(-std::cos(ang)));
        CHECK(sum.approx.imag() == doctest::Approx(-std::sin(ang)));
    }
    SUBCASE("P=Q=1 multiplicative product equals the trilinear sum") {
        RationalFn1 P1;
        P1.num.coeff = {1};
        RationalFn2 Q1;
        Q1.num.coeff = {{1}};
        const u64 K = 3, M = 2, N = 2;
        const auto mixed =
            mixed_sum(chi, 1, P1, Q1, K, M, N, MixedVariant::multiplicative_product);
        const auto tri = trilinear_sum(chi, 1, 1, K, M, N, ones(M), ones2(K, N));
        CHECK(same_exact(mixed, tri));
    }
    SUBCASE("identically zero denominator is rejected") {
        RationalFn1 bad;
        bad.den.coeff = {5, 10};  // = 0 mod 5
        CHECK(thrown_kind([&] {
                  mixed_sum(chi, 1, bad, Q0, 1, 1, 1, MixedVariant::additive_twist);
              }) == errc::zero_denominator_polynomial);
    }
    SUBCASE("pointwise poles contribute zero") {
        RationalFn1 P;
        P.num.coeff = {1};
        P.den.coeff = {4, 1};  // X + 4 = X - 1 mod 5, pole at m = 1
        RationalFn2 Q1;
        Q1.num.coeff = {{1}};
        const auto sum = mixed_sum(chi, 1, P, Q1, 1, 2, 1, MixedVariant::multiplicative_product);
        // Only m=2 contributes: chi((1+2) * inv(2-1) * 1) = chi(3).
        CHECK(sum.exact_integer(5) == leg(3, 5));
        CHECK(sum.terms == 1);
    }
}

TEST_CASE("divisor sum examples") {
    SUBCASE("p=5") {
        const PrimeField f5(5);
        const MultChar chi(f5, 2);
        CHECK(divisor_sum(chi, 1, 1).exact_integer(5) == 0);

        long long expect = 0;
        for (u64 u = 1; u <= 2; ++u)
            for (u64 v = 1; v <= 2; ++v)
                expect += static_cast<long long>(divisor_tau(u) * divisor_tau(v)) *
                          leg(static_cast<i64>(u) - static_cast<i64>(v), 5);
        CHECK(expect == 4);
        CHECK(divisor_sum(chi, 2, 2).exact_integer(5) == expect);
    }
    SUBCASE("p=7, U=2, V=1") {
        const PrimeField f7(7);
        const MultChar chi(f7, 3);
        CHECK(divisor_sum(chi, 2, 1).exact_integer(7) == 2);
    }
}

TEST_CASE("farey set and embedding") {
    SUBCASE("R=2") {
        const auto f = farey_set(2);
        REQUIRE(f.size() == 3);
        CHECK(f[0] == Fraction{0, 1});
        CHECK(f[1] == Fraction{1, 2});
        CHECK(f[2] == Fraction{1, 1});
    }
    SUBCASE("R=3 adds thirds") {
        const auto f = farey_set(3);
        REQUIRE(f.size() == 5);
        CHECK(f[1] == Fraction{1, 3});
        CHECK(f[3] == Fraction{2, 3});
    }
    SUBCASE("R=1 is rejected") {
        CHECK(thrown_kind([] { farey_set(1); }) == errc::bad_range);
    }
    SUBCASE("embedding") {
        const PrimeField f5(5);
        CHECK(farey_embed(f5, {1, 2}) == 3);
        CHECK(farey_embed(f5, {0, 1}) == 0);
        CHECK(farey_embed(f5, {1, 1}) == 1);
        CHECK(thrown_kind([&] { farey_embed(f5, {1, 5}); }) == errc::divisor_divisible);
    }
}

TEST_CASE("farey sums") {
    SUBCASE("p=5, R=2 gives -2") {
        const PrimeField f5(5);
        const MultChar chi(f5, 2);
        const u64 em[3] = {0, 3, 1};  // embedded {0/1, 1/2, 1/1}
        long long expect = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                expect += leg(static_cast<i64>(em[i]) - static_cast<i64>(em[j]), 5);
        CHECK(expect == -2);
        CHECK(farey_sum(chi, 2, ones(3), ones(3)).exact_integer(5) == expect);
    }
    SUBCASE("zero xi") {
        const PrimeField f5(5);
        const MultChar chi(f5, 2);
        CHECK(farey_sum(chi, 2, zeros(3), ones(3)).exact_integer(5) == 0);
    }
    SUBCASE("R beyond sqrt(p) is rejected") {
        const PrimeField f11(11);
        const MultChar chi(f11, 5);
        CHECK(thrown_kind([&] { farey_sum(chi, 4, ones(1), ones(1)); }) == errc::bad_range);
    }
}

TEST_CASE("farey embedding is injective below sqrt(p), exhaustive to 1009") {
    for (u64 p = 7; p <= 1009; p += 2) {
        if (!is_prime(p)) continue;
        const PrimeField field(p);
        u64 R = 2;
        while ((R + 1) * (R + 1) < p) ++R;  // largest R with R^2 < p
        const auto fr = farey_set(R);
        std::vector<bool> seen(p, false);
        bool injective = true;
        for (const auto& f : fr) {
            const u64 e = farey_embed(field, f);
            injective = injective && !seen[e];
            seen[e] = true;
        }
        CHECK(injective);
    }
}

TEST_CASE("prime quadrilinear sums") {
    const PrimeField f11(11);
    const MultChar chi(f11, 5);

    SUBCASE("x=3 dies on (3/3)=0") {
        const auto sum = prime_quad_sum(chi, 3);
        CHECK(sum.exact_integer(11) == 0);
        CHECK(sum.terms == 0);
    }
    SUBCASE("p=11, x=5") {
        long long expect = 0;
        const u64 pr[2] = {3, 5};
        for (u64 p1 : pr)
            for (u64 p2 : pr)
                for (u64 p3 : pr)
                    for (u64 p4 : pr) {
                        const long long w =
                            leg(static_cast<i64>(p1), p3) * leg(static_cast<i64>(p2), p4);
                        if (w == 0) continue;
                        expect +=
                            w * leg(static_cast<i64>(p1 * p2) - static_cast<i64>(p3 * p4), 11);
                    }
        CHECK(expect == 0);
        CHECK(prime_quad_sum(chi, 5).exact_integer(11) == expect);
    }
    SUBCASE("x=4 equals x=3") {
        CHECK(same_exact(prime_quad_sum(chi, 3), prime_quad_sum(chi, 4)));
    }
    SUBCASE("kronecker extension includes the prime 2") {
        const auto with2 = prime_quad_sum(chi, 3, /*kronecker_two=*/true);
        CHECK(with2.terms > 0);
        CHECK(with2.exact_integer(11).has_value());
    }
}

TEST_CASE("parallel path matches naive path and is thread-count invariant") {
    Rng rng(2024);
    const auto& primes = odd_primes_upto(31);
    for (int trial = 0; trial < 40; ++trial) {
        SumSpec spec;
        spec.kind = static_cast<SumKind>(trial % 9);
        spec.p = primes[rng.below(primes.size())];
        if (spec.kind == SumKind::farey && spec.p < 7) spec.p = 7;
        spec.legendre_char = (trial % 2 == 0);
        if (!spec.legendre_char) spec.j = 1 + rng.below(spec.p - 2);
        spec.a = 1 + static_cast<i64>(rng.below(std::min<u64>(4, spec.p - 1)));
        spec.b = 1 + static_cast<i64>(rng.below(std::min<u64>(4, spec.p - 1)));
        spec.K = rng.between(1, 5);
        spec.L = rng.between(1, 3);
        spec.M = rng.between(1, 5);
        spec.N = rng.between(1, 5);
        spec.U = rng.between(1, 4);
        spec.V = rng.between(1, 4);
        spec.x = rng.between(1, 4);
        spec.R = 2;
        if (trial % 3 == 0) spec.alpha = RandomUnit{rng.next()};
        if (trial % 4 == 0) spec.beta = DivisorFn{};

        const PrimeField field(spec.p);
        const auto naive = evaluate_naive(field, spec);
        const auto t1 = evaluate(field, spec, {1});
        const auto t3 = evaluate(field, spec, {3});

        if (naive.exact.has_value()) {
            CHECK(same_exact(naive, t1));
            CHECK(same_exact(t1, t3));
            CHECK(t1.approx == t3.approx);
        } else {
            CHECK(t1.approx == t3.approx);  // fixed blocks: bit-identical
            CHECK(t1.terms == t3.terms);
            CHECK(std::abs(t1.approx - naive.approx) <= 1e-9 * (1.0 + std::abs(naive.approx)));
            CHECK(t1.terms == naive.terms);
        }
    }
}

TEST_CASE("trivial bound conformance on random exact instances") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const auto& primes = odd_primes_upto(61);
        const u64 p = primes[rng.below(primes.size())];
        const PrimeField field(p);
        const MultChar chi(field, (p - 1) / 2);
        const u64 K = rng.between(1, 6), M = rng.between(1, 6), N = rng.between(1, 6);

        TableValues ta;
        for (u64 i = 0; i < M; ++i)
            ta.values.push_back({static_cast<double>(rng.between(0, 6)) - 3.0, 0.0});
        const auto alpha = WeightTable::materialize_range(ta, 1, M);

        TableValues tb;
        tb.rows = K;
        tb.cols = N;
        for (u64 i = 0; i < K * N; ++i)
            tb.values.push_back({static_cast<double>(rng.between(0, 6)) - 3.0, 0.0});
        const auto beta = WeightTable::materialize2(tb, K, N);

        const auto sum = trilinear_sum(chi, 1, 1, K, M, N, alpha, beta);
        const double inf_bound = static_cast<double>(alpha.norm(Rho::inf) * beta.norm(Rho::inf)) *
                                 static_cast<double>(K * M * N);
        const double l2_bound = static_cast<double>(alpha.norm(Rho::two) * beta.norm(Rho::two)) *
                                std::sqrt(static_cast<double>(K * M * N));
        CHECK(sum.abs() <= std::min(inf_bound, l2_bound) * (1 + 1e-12) + 1e-9);
    }
}

TEST_CASE("quadratic character sums with integer weights are rational integers") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto& primes = odd_primes_upto(31);
        const u64 p = primes[rng.below(primes.size())];
        const PrimeField field(p);
        const MultChar chi(field, (p - 1) / 2);
        const auto sum = divisor_sum(chi, rng.between(1, 6), rng.between(1, 6));
        REQUIRE(sum.exact_integer(p).has_value());
        CHECK(static_cast<double>(*sum.exact_integer(p)) ==
              doctest::Approx(sum.approx.real()).epsilon(1e-9));
        CHECK(sum.approx.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
}
