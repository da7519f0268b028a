#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "charsum/errors.hpp"

namespace charsum {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 mod);

// Deterministic Miller-Rabin, valid for every 64-bit integer.
bool is_prime(u64 n);

// Jacobi symbol (x/n) for odd n >= 1 via the reciprocity chain; works for any
// 64-bit n without a discrete-log table. For prime n this is the Legendre
// symbol: 0 iff n | x, +1 on nonzero squares, -1 otherwise.
int jacobi(i64 x, u64 n);

inline int legendre(i64 x, u64 p) { return jacobi(x, p); }

// Pollard rho + trial division; returns the distinct prime factors of n.
std::vector<u64> distinct_prime_factors(u64 n);

// An odd prime p together with its smallest primitive root and, for p within
// table_limit, a discrete-log table built by a single multiplication sweep.
class PrimeField {
public:
    static constexpr u64 kDefaultTableLimit = u64(1) << 22;

    explicit PrimeField(u64 p, u64 table_limit = kDefaultTableLimit);

    u64 p() const { return p_; }
    u64 generator() const { return g_; }
    u64 table_limit() const { return table_limit_; }
    bool has_table() const { return !dlog_.empty(); }

    // Index k in {0..p-2} with g^k = x (mod p). Requires 1 <= x <= p-1.
    u64 dlog(u64 x) const;

    u64 reduce(i64 x) const {
        i64 r = x % static_cast<i64>(p_);
        return static_cast<u64>(r < 0 ? r + static_cast<i64>(p_) : r);
    }

    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p_ ? s - p_ : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
    u64 mul(u64 a, u64 b) const { return mul_mod(a, b, p_); }
    u64 pow(u64 b, u64 e) const { return pow_mod(b, e, p_); }
    u64 inv(u64 a) const;

private:
    u64 p_ = 0;
    u64 g_ = 0;
    u64 table_limit_ = 0;
    std::vector<std::uint32_t> dlog_;  // dlog_[x] for x in 1..p-1; p <= 2^32 whenever built
};

inline PrimeField make_field(u64 p, u64 table_limit = PrimeField::kDefaultTableLimit) {
    return PrimeField(p, table_limit);
}

// Value of a multiplicative character: exactly zero, or the root of unity
// e(t/(p-1)) identified by its index t.
struct CharValue {
    bool zero = true;
    u64 t = 0;

    static CharValue zero_value() { return CharValue{true, 0}; }
    static CharValue root(u64 t) { return CharValue{false, t}; }

    std::complex<double> to_complex(u64 p) const {
        if (zero) return {0.0, 0.0};
        const double angle = 2.0 * 3.141592653589793238462643383279502884 *
                             (static_cast<double>(t) / static_cast<double>(p - 1));
        return {std::cos(angle), std::sin(angle)};
    }
};

// Character chi_j mod p with chi_j(g^k) = e(jk/(p-1)). Non-trivial iff j != 0;
// j = (p-1)/2 is the Legendre symbol and is evaluated without the dlog table.
class MultChar {
public:
    MultChar(const PrimeField& field, u64 j);

    const PrimeField& field() const { return *field_; }
    u64 j() const { return j_; }
    u64 order() const { return order_; }
    bool trivial() const { return j_ == 0; }
    bool is_quadratic() const { return j_ == (field_->p() - 1) / 2; }

    CharValue eval(i64 x) const { return eval_residue(field_->reduce(x)); }

    // x must already lie in [0, p).
    CharValue eval_residue(u64 x) const {
        if (x == 0) return CharValue::zero_value();
        if (!index_.empty()) return CharValue::root(index_[x]);
        if (trivial()) return CharValue::root(0);
        if (is_quadratic()) {
            int s = legendre(static_cast<i64>(x), field_->p());
            return CharValue::root(s == 1 ? 0 : (field_->p() - 1) / 2);
        }
        return CharValue::root(mul_mod(j_, field_->dlog(x), field_->p() - 1));
    }

    std::complex<double> value(i64 x) const { return eval(x).to_complex(field_->p()); }

private:
    const PrimeField* field_;
    u64 j_;
    u64 order_;
    std::vector<std::uint32_t> index_;  // root index per residue, when the field has a table
};

}  // namespace charsum
