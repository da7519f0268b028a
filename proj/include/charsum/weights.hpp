#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "charsum/errors.hpp"
#include "charsum/field.hpp"

namespace charsum {

// Declarative weight families. Scalar families applied to a two-dimensional
// range broadcast as a product f(i)*f(j); RandomUnit is keyed by both indices.
struct OneWeight {};
struct IndicatorSet { std::vector<u64> members; };
struct IndicatorInterval { u64 lo = 0, hi = 0; };
struct PrimeIndicator {};
struct DivisorFn {};
struct RandomUnit { u64 seed = 0; };
struct LegendrePair { u64 q = 3; };
struct TableValues {
    std::vector<std::complex<double>> values;
    u64 rows = 0, cols = 0;  // rows == 0 means one-dimensional
};

using WeightSpec = std::variant<OneWeight, IndicatorSet, IndicatorInterval, PrimeIndicator,
                                DivisorFn, RandomUnit, LegendrePair, TableValues>;

enum class Rho { one, two, inf };

// Materialized weights over either an explicit index list (one-dimensional)
// or the rectangle (1..rows) x (1..cols) in row-major order. Immutable after
// construction. Exact tables carry integer values alongside the complex view.
class WeightTable {
public:
    static WeightTable materialize(const WeightSpec& spec, std::vector<u64> indices);
    static WeightTable materialize2(const WeightSpec& spec, u64 rows, u64 cols);
    static WeightTable materialize_range(const WeightSpec& spec, u64 lo, u64 hi);

    int dims() const { return dims_; }
    bool exact() const { return exact_; }
    std::size_t size() const { return cvalues_.size(); }
    u64 rows() const { return rows_; }
    u64 cols() const { return cols_; }
    const std::vector<u64>& indices() const { return indices_; }

    // Position-based access (one-dimensional tables).
    long long ivalue_at(std::size_t pos) const { return ivalues_[pos]; }
    std::complex<double> cvalue_at(std::size_t pos) const { return cvalues_[pos]; }

    // (i, j) access with 1-based indices (two-dimensional tables).
    long long ivalue2(u64 i, u64 j) const { return ivalues_[(i - 1) * cols_ + (j - 1)]; }
    std::complex<double> cvalue2(u64 i, u64 j) const { return cvalues_[(i - 1) * cols_ + (j - 1)]; }

    long double norm(Rho rho) const;

private:
    int dims_ = 1;
    bool exact_ = true;
    u64 rows_ = 0, cols_ = 0;
    std::vector<u64> indices_;
    std::vector<long long> ivalues_;
    std::vector<std::complex<double>> cvalues_;
};

inline long double norm(const WeightTable& table, Rho rho) { return table.norm(rho); }

// Number of positive divisors; tau(0) is defined as 0.
u64 divisor_tau(u64 k);

}  // namespace charsum
