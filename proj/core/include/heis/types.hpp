#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace heis {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Weight l is tracked by its class mod 2.
enum class WeightClass { Half, ThreeHalves };

inline double weight_value(WeightClass l) { return l == WeightClass::Half ? 0.5 : 1.5; }

inline std::string weight_name(WeightClass l) { return l == WeightClass::Half ? "1/2" : "3/2"; }

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside an operation's contract.
struct DomainError : Error {
    using Error::Error;
};

struct PoleError : DomainError {
    using DomainError::DomainError;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

inline WeightClass parse_weight(std::string_view s)
{
    if (s == "1/2" || s == "0.5")
        return WeightClass::Half;
    if (s == "3/2" || s == "1.5")
        return WeightClass::ThreeHalves;
    throw DomainError("weight must be \"1/2\" or \"3/2\", got \"" + std::string(s) + "\"");
}

}  // namespace heis
