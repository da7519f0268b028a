#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "charsum/field.hpp"

namespace charsum {

// Result of a character-sum evaluation. When every weight is an exact
// integer the sum is carried as integer coefficients c_t over the basis
// e(t/(p-1)); `approx` is the one-time complex rendering of that vector.
// Coefficients are stored sparsely (index ascending, zeros dropped) so the
// quadratic character works far beyond any dlog-table limit.
struct SumValue {
    std::optional<std::vector<std::pair<u64, long long>>> exact;
    std::complex<double> approx{0.0, 0.0};
    u64 terms = 0;

    double abs() const { return std::abs(approx); }

    long long coefficient(u64 t) const {
        if (!exact) return 0;
        for (const auto& [idx, c] : *exact)
            if (idx == t) return c;
        return 0;
    }

    // The plain integer value when only the indices of +1 and -1 carry
    // coefficients (always the case for the quadratic character).
    std::optional<long long> exact_integer(u64 p) const {
        if (!exact) return std::nullopt;
        const u64 half = (p - 1) / 2;
        long long value = 0;
        for (const auto& [t, c] : *exact) {
            if (t == 0) value += c;
            else if (t == half) value -= c;
            else return std::nullopt;
        }
        return value;
    }
};

// Accumulates integer-weighted character values exactly. For characters of
// order <= 2 only two counters are live, so no dense vector is allocated.
class ExactAccumulator {
public:
    ExactAccumulator(u64 p, bool order_le_2)
        : p_(p), half_((p - 1) / 2), compact_(order_le_2) {
        if (!compact_) dense_.assign(p - 1, 0);
    }

    void add(u64 t, long long w) {
        if (w == 0) return;
        ++terms_;
        if (compact_) {
            if (t == 0) c_plus_ += w;
            else c_minus_ += w;
        } else {
            dense_[t] += w;
        }
    }

    void merge(const ExactAccumulator& other) {
        terms_ += other.terms_;
        if (compact_) {
            c_plus_ += other.c_plus_;
            c_minus_ += other.c_minus_;
        } else {
            for (std::size_t t = 0; t < dense_.size(); ++t) dense_[t] += other.dense_[t];
        }
    }

    SumValue finalize() const {
        SumValue out;
        out.terms = terms_;
        std::vector<std::pair<u64, long long>> coeffs;
        if (compact_) {
            if (c_plus_ != 0) coeffs.emplace_back(0, c_plus_);
            if (c_minus_ != 0) coeffs.emplace_back(half_, c_minus_);
        } else {
            for (u64 t = 0; t < dense_.size(); ++t)
                if (dense_[t] != 0) coeffs.emplace_back(t, dense_[t]);
        }
        out.approx = render(coeffs, p_);
        out.exact = std::move(coeffs);
        return out;
    }

    static std::complex<double> render(const std::vector<std::pair<u64, long long>>& coeffs,
                                       u64 p) {
        long double re = 0.0L, im = 0.0L;
        const long double twopi = 6.283185307179586476925286766559005768L;
        for (const auto& [t, c] : coeffs) {
            const long double angle =
                twopi * (static_cast<long double>(t) / static_cast<long double>(p - 1));
            re += static_cast<long double>(c) * std::cos(angle);
            im += static_cast<long double>(c) * std::sin(angle);
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

private:
    u64 p_;
    u64 half_;
    bool compact_;
    long long c_plus_ = 0, c_minus_ = 0;
    std::vector<long long> dense_;
    u64 terms_ = 0;
};

// Float-path partial sum for one block of the outer index range.
struct FloatPartial {
    std::complex<double> sum{0.0, 0.0};
    u64 terms = 0;
};

}  // namespace charsum
