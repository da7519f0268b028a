#include "charsum/search.hpp"

#include <algorithm>

namespace charsum {

namespace {

using i128 = __int128;

// legendre(mn + k) via residues, avoiding overflow for large m, n.
int qr_sign(const PrimeField& field, u64 m, u64 n, u64 k) {
    const u64 arg = field.add(field.mul(m % field.p(), n % field.p()), k % field.p());
    return legendre(static_cast<i64>(arg), field.p());
}

std::vector<u64> primes_in_window(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 q : sieve_primes(hi))
        if (q > lo) out.push_back(q);
    return out;
}

}  // namespace

std::vector<u64> sieve_primes(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

SearchOutcome qr_gap_search(const PrimeField& field, const std::vector<u64>& setM,
                            const std::vector<u64>& setN, u64 kmax) {
    if (setM.empty() || setN.empty()) fail(errc::bad_range, "sets must be nonempty");
    if (kmax < 1) fail(errc::bad_range, "kmax must be >= 1");
    SearchOutcome out;
    for (u64 k = 1; k <= kmax; ++k) {
        for (u64 m : setM) {
            for (u64 n : setN) {
                ++out.steps;
                if (qr_sign(field, m, n, k) == 1) {
                    out.found = true;
                    out.witness = {k, m, n};
                    return out;
                }
            }
        }
    }
    return out;
}

DensityResult qr_triple_density(const PrimeField& field, const std::vector<u64>& setM,
                                const std::vector<u64>& setN, u64 K) {
    if (setM.empty() || setN.empty()) fail(errc::bad_range, "sets must be nonempty");
    if (K < 1) fail(errc::bad_range, "K must be >= 1");
    DensityResult out;
    for (u64 m : setM)
        for (u64 n : setN)
            for (u64 k = 1; k <= K; ++k)
                if (qr_sign(field, m, n, k) == 1) ++out.count;
    out.density = static_cast<double>(out.count) /
                  (static_cast<double>(K) * setM.size() * setN.size());
    return out;
}

SearchOutcome chen_search(const PrimeField& field, u64 lo, u64 hi, bool distinct) {
    if (lo >= hi) fail(errc::bad_range, "need lo < hi");
    const auto primes = primes_in_window(lo, hi);
    if (primes.empty()) fail(errc::empty_range, "no primes in the window");
    SearchOutcome out;
    for (u64 p1 : primes)
        for (u64 p2 : primes) {
            if (distinct && p2 == p1) continue;
            for (u64 p3 : primes) {
                if (distinct && (p3 == p1 || p3 == p2)) continue;
                ++out.steps;
                const u64 arg = field.add(field.mul(p1 % field.p(), p2 % field.p()),
                                          p3 % field.p());
                if (legendre(static_cast<i64>(arg), field.p()) == -1) {
                    out.found = true;
                    out.witness = {p1, p2, p3};
                    return out;
                }
            }
        }
    return out;
}

SearchOutcome quad_prime_search(const PrimeField& field, u64 lo, u64 hi, bool distinct) {
    if (lo >= hi) fail(errc::bad_range, "need lo < hi");
    const auto primes = primes_in_window(lo, hi);
    if (primes.empty()) fail(errc::empty_range, "no primes in the window");
    SearchOutcome out;
    for (u64 p1 : primes)
        for (u64 p2 : primes) {
            if (distinct && p2 == p1) continue;
            for (u64 p3 : primes) {
                if (distinct && (p3 == p1 || p3 == p2)) continue;
                for (u64 p4 : primes) {
                    if (distinct && (p4 == p1 || p4 == p2 || p4 == p3)) continue;
                    ++out.steps;
                    const u64 arg = field.add(field.mul(p1 % field.p(), p2 % field.p()),
                                              field.mul(p3 % field.p(), p4 % field.p()));
                    if (legendre(static_cast<i64>(arg), field.p()) == -1) {
                        out.found = true;
                        out.witness = {p1, p2, p3, p4};
                        return out;
                    }
                }
            }
        }
    return out;
}

}  // namespace charsum
