#include "charsum/field.hpp"

#include <algorithm>
#include <numeric>

namespace charsum {

u64 pow_mod(u64 base, u64 exp, u64 mod) {
    u64 result = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, mod);
        base = mul_mod(base, base, mod);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This witness set is deterministic for all n < 2^64 (Sinclair / Jaeschke).
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

int jacobi(i64 x, u64 n) {
    u64 a = static_cast<u64>(x % static_cast<i64>(n));
    if (static_cast<i64>(a) < 0) a += n;  // defensive; x % n above is already in range for n>0
    a %= n;
    u64 b = n;
    int result = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            u64 r = b & 7;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, b);
        if ((a & 3) == 3 && (b & 3) == 3) result = -result;
        a %= b;
    }
    return b == 1 ? result : 0;
}

namespace {

u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    u64 seed = 1;
    while (true) {
        u64 x = 2 + seed, y = x, c = 1 + seed * 0x9e3779b9ULL % (n - 1);
        u64 d = 1;
        while (d == 1) {
            x = (mul_mod(x, x, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
        ++seed;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    for (u64 q = 2; q < 100 && q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
            factor_into(n, out);
            return;
        }
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    u64 rest = n;
    while (rest % d == 0) rest /= d;
    factor_into(rest, out);
}

}  // namespace

std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> out;
    factor_into(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PrimeField::PrimeField(u64 p, u64 table_limit) : p_(p), table_limit_(table_limit) {
    if (p == 2) fail(errc::even_prime, "p = 2 is not supported; an odd prime is required");
    if (p < 3 || !is_prime(p)) fail(errc::not_prime, std::to_string(p) + " is not an odd prime");

    const auto factors = distinct_prime_factors(p - 1);
    for (u64 g = 2; ; ++g) {
        bool primitive = true;
        for (u64 q : factors) {
            if (pow_mod(g, (p - 1) / q, p) == 1) { primitive = false; break; }
        }
        if (primitive) { g_ = g; break; }
    }

    if (p <= table_limit_) {
        dlog_.assign(p, 0);
        u64 x = 1;
        for (u64 k = 0; k + 1 < p; ++k) {
            dlog_[x] = static_cast<std::uint32_t>(k);
            x = mul_mod(x, g_, p);
        }
    }
}

u64 PrimeField::dlog(u64 x) const {
    x %= p_;
    if (x == 0) fail(errc::zero_argument, "discrete log of 0 is undefined");
    if (dlog_.empty())
        fail(errc::no_table, "no dlog table for p = " + std::to_string(p_) +
                                 " (table_limit = " + std::to_string(table_limit_) + ")");
    return dlog_[x];
}

u64 PrimeField::inv(u64 a) const {
    a %= p_;
    if (a == 0) fail(errc::zero_argument, "0 has no inverse");
    return pow_mod(a, p_ - 2, p_);
}

MultChar::MultChar(const PrimeField& field, u64 j) : field_(&field), j_(j % (field.p() - 1)) {
    const u64 n = field.p() - 1;
    order_ = n / std::gcd(j_, n);
    if (field_->has_table() && field_->p() <= (u64(1) << 26)) {
        // Dense per-residue root indices; p-1 < 2^32 here so uint32 suffices.
        index_.assign(field_->p(), 0);
        u64 x = 1;
        u64 t = 0;
        for (u64 k = 0; k + 1 < field_->p(); ++k) {
            index_[x] = static_cast<std::uint32_t>(t);
            x = mul_mod(x, field_->generator(), field_->p());
            t += j_;
            if (t >= n) t -= n;
        }
    } else if (!is_quadratic() && !trivial() && !field.has_table()) {
        fail(errc::no_table,
             "character j = " + std::to_string(j_) + " mod " + std::to_string(field.p()) +
                 " needs a dlog table; only the quadratic character works beyond table_limit");
    }
}

}  // namespace charsum
