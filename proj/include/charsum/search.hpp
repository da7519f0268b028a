#pragma once

#include <vector>

#include "charsum/field.hpp"

namespace charsum {

// Constructive searches behind the existence statements: quadratic-residue
// gaps over product sets and prime-tuple sign conditions. Searches scan
// candidates in lexicographic order so results are reproducible; witnesses
// are plain integer tuples re-checkable through legendre().

struct SearchOutcome {
    bool found = false;
    std::vector<u64> witness;  // (k, m, n), (p1,p2,p3) or (p1..p4)
    unsigned long long steps = 0;
};

std::vector<u64> sieve_primes(u64 limit);

// Smallest k in [1, kmax] such that legendre(mn + k, p) = +1 for some
// (m, n) in setM x setN, with a witnessing pair. Witness layout: (k, m, n).
SearchOutcome qr_gap_search(const PrimeField& field, const std::vector<u64>& setM,
                            const std::vector<u64>& setN, u64 kmax);

struct DensityResult {
    unsigned long long count = 0;
    double density = 0.0;  // count / (K * #M * #N)
};

// #{(m,n,k) in M x N x [1,K] : mn + k is a quadratic residue mod p}.
DensityResult qr_triple_density(const PrimeField& field, const std::vector<u64>& setM,
                                const std::vector<u64>& setN, u64 K);

// First triple of primes in (lo, hi], repetition allowed unless `distinct`,
// with p1 p2 + p3 a quadratic non-residue mod p.
SearchOutcome chen_search(const PrimeField& field, u64 lo, u64 hi, bool distinct = false);

// As above with four primes and p1 p2 + p3 p4.
SearchOutcome quad_prime_search(const PrimeField& field, u64 lo, u64 hi, bool distinct = false);

}  // namespace charsum
