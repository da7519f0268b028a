#include "charsum/weights.hpp"

#include <algorithm>
#include <cmath>

#include "charsum/rng.hpp"

namespace charsum {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool set_contains(const std::vector<u64>& sorted, u64 x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::complex<double> unit_from_bits(u64 bits) {
    const double angle = kTwoPi * (static_cast<double>(bits >> 11) * 0x1.0p-53);
    return {std::cos(angle), std::sin(angle)};
}

// Scalar family value at a single index; null meaning "not integer valued".
struct ScalarEval {
    bool exact;
    long long ival;
    std::complex<double> cval;
};

ScalarEval eval_scalar(const WeightSpec& spec, const std::vector<u64>& sorted_members, u64 idx,
                       u64 pair_key, u64 seed) {
    if (std::holds_alternative<OneWeight>(spec)) return {true, 1, {1.0, 0.0}};
    if (std::holds_alternative<IndicatorSet>(spec)) {
        long long v = set_contains(sorted_members, idx) ? 1 : 0;
        return {true, v, {static_cast<double>(v), 0.0}};
    }
    if (const auto* iv = std::get_if<IndicatorInterval>(&spec)) {
        long long v = (idx >= iv->lo && idx <= iv->hi) ? 1 : 0;
        return {true, v, {static_cast<double>(v), 0.0}};
    }
    if (std::holds_alternative<PrimeIndicator>(spec)) {
        long long v = is_prime(idx) ? 1 : 0;
        return {true, v, {static_cast<double>(v), 0.0}};
    }
    if (std::holds_alternative<DivisorFn>(spec)) {
        long long v = static_cast<long long>(divisor_tau(idx));
        return {true, v, {static_cast<double>(v), 0.0}};
    }
    if (std::holds_alternative<RandomUnit>(spec)) {
        return {false, 0, unit_from_bits(mix3(seed, idx, pair_key))};
    }
    if (const auto* lp = std::get_if<LegendrePair>(&spec)) {
        long long v = legendre(static_cast<i64>(idx % lp->q), lp->q);
        return {true, v, {static_cast<double>(v), 0.0}};
    }
    fail(errc::arity_mismatch, "table weights require positional materialization");
}

void validate(const WeightSpec& spec) {
    if (const auto* lp = std::get_if<LegendrePair>(&spec)) {
        if (lp->q % 2 == 0) fail(errc::even_prime, "legendre weight modulus must be odd");
        if (!is_prime(lp->q)) fail(errc::not_prime, "legendre weight modulus must be prime");
    }
}

bool is_integer_value(std::complex<double> v) {
    return v.imag() == 0.0 && v.real() == std::nearbyint(v.real()) && std::abs(v.real()) < 9e15;
}

}  // namespace

u64 divisor_tau(u64 k) {
    if (k == 0) return 0;
    u64 count = 0;
    for (u64 d = 1; d * d <= k; ++d) {
        if (k % d == 0) count += (d * d == k) ? 1 : 2;
    }
    return count;
}

WeightTable WeightTable::materialize(const WeightSpec& spec, std::vector<u64> indices) {
    if (indices.empty()) fail(errc::bad_range, "empty index range");
    validate(spec);
    WeightTable t;
    t.dims_ = 1;
    t.indices_ = std::move(indices);
    t.ivalues_.reserve(t.indices_.size());
    t.cvalues_.reserve(t.indices_.size());

    if (const auto* tab = std::get_if<TableValues>(&spec)) {
        if (tab->rows != 0) fail(errc::arity_mismatch, "two-dimensional table for a 1-d range");
        if (tab->values.size() != t.indices_.size())
            fail(errc::arity_mismatch, "table has " + std::to_string(tab->values.size()) +
                                           " values for a range of " +
                                           std::to_string(t.indices_.size()));
        t.exact_ = true;
        for (auto v : tab->values) {
            t.cvalues_.push_back(v);
            if (is_integer_value(v)) {
                t.ivalues_.push_back(static_cast<long long>(std::nearbyint(v.real())));
            } else {
                t.exact_ = false;
            }
        }
        if (!t.exact_) t.ivalues_.clear();
        return t;
    }

    std::vector<u64> sorted;
    if (const auto* is = std::get_if<IndicatorSet>(&spec)) {
        sorted = is->members;
        std::sort(sorted.begin(), sorted.end());
    }
    u64 seed = 0;
    if (const auto* ru = std::get_if<RandomUnit>(&spec)) seed = ru->seed;

    t.exact_ = !std::holds_alternative<RandomUnit>(spec);
    for (u64 idx : t.indices_) {
        auto e = eval_scalar(spec, sorted, idx, /*pair_key=*/0x1d, seed);
        t.cvalues_.push_back(e.cval);
        if (t.exact_) t.ivalues_.push_back(e.ival);
    }
    return t;
}

WeightTable WeightTable::materialize2(const WeightSpec& spec, u64 rows, u64 cols) {
    if (rows == 0 || cols == 0) fail(errc::bad_range, "empty two-dimensional range");
    validate(spec);
    WeightTable t;
    t.dims_ = 2;
    t.rows_ = rows;
    t.cols_ = cols;
    t.ivalues_.reserve(rows * cols);
    t.cvalues_.reserve(rows * cols);

    if (const auto* tab = std::get_if<TableValues>(&spec)) {
        if (tab->rows == 0) fail(errc::arity_mismatch, "one-dimensional table for a 2-d range");
        if (tab->rows != rows || tab->cols != cols)
            fail(errc::arity_mismatch, "table dimensions do not match the range");
        t.exact_ = true;
        for (auto v : tab->values) {
            t.cvalues_.push_back(v);
            if (is_integer_value(v)) {
                t.ivalues_.push_back(static_cast<long long>(std::nearbyint(v.real())));
            } else {
                t.exact_ = false;
            }
        }
        if (!t.exact_) t.ivalues_.clear();
        return t;
    }

    std::vector<u64> sorted;
    if (const auto* is = std::get_if<IndicatorSet>(&spec)) {
        sorted = is->members;
        std::sort(sorted.begin(), sorted.end());
    }
    u64 seed = 0;
    const bool random = std::holds_alternative<RandomUnit>(spec);
    if (const auto* ru = std::get_if<RandomUnit>(&spec)) seed = ru->seed;

    t.exact_ = !random;
    for (u64 i = 1; i <= rows; ++i) {
        for (u64 j = 1; j <= cols; ++j) {
            if (random) {
                t.cvalues_.push_back(unit_from_bits(mix3(seed, i, j)));
            } else {
                auto ei = eval_scalar(spec, sorted, i, 0, 0);
                auto ej = eval_scalar(spec, sorted, j, 0, 0);
                t.ivalues_.push_back(ei.ival * ej.ival);
                t.cvalues_.push_back({static_cast<double>(ei.ival * ej.ival), 0.0});
            }
        }
    }
    return t;
}

WeightTable WeightTable::materialize_range(const WeightSpec& spec, u64 lo, u64 hi) {
    if (lo > hi) fail(errc::bad_range, "lo > hi");
    std::vector<u64> idx;
    idx.reserve(hi - lo + 1);
    for (u64 k = lo; k <= hi; ++k) idx.push_back(k);
    return materialize(spec, std::move(idx));
}

long double WeightTable::norm(Rho rho) const {
    long double acc = 0.0L;
    for (auto v : cvalues_) {
        const long double m = std::hypot(static_cast<long double>(v.real()),
                                         static_cast<long double>(v.imag()));
        switch (rho) {
            case Rho::one: acc += m; break;
            case Rho::two: acc += m * m; break;
            case Rho::inf: acc = std::max(acc, m); break;
        }
    }
    return rho == Rho::two ? std::sqrt(acc) : acc;
}

}  // namespace charsum
