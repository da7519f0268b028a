#pragma once

#include <stdexcept>
#include <string>

namespace charsum {

// Failure kinds surfaced by the library. The CLI maps these onto exit codes:
// usage/config problems -> 2, resource ceilings -> 3.
enum class errc {
    not_prime,
    even_prime,
    zero_argument,
    no_table,
    arity_mismatch,
    weight_coverage,
    zero_denominator_polynomial,
    bad_range,
    divisor_divisible,
    repeated_root,
    trivial_character,
    weight_bound,
    too_large,
    empty_range,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::even_prime: return "EvenPrime";
        case errc::zero_argument: return "ZeroArgument";
        case errc::no_table: return "NoTable";
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::weight_coverage: return "WeightCoverage";
        case errc::zero_denominator_polynomial: return "ZeroDenominatorPolynomial";
        case errc::bad_range: return "BadRange";
        case errc::divisor_divisible: return "DivisorDivisible";
        case errc::repeated_root: return "RepeatedRoot";
        case errc::trivial_character: return "TrivialCharacter";
        case errc::weight_bound: return "WeightBound";
        case errc::too_large: return "TooLarge";
        case errc::empty_range: return "EmptyRange";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace charsum
