#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rra {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when inputs violate an operation's preconditions.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

/// Signed frequency for FFT-natural index j of a length-n periodic axis.
/// Index n/2 (even n) maps to +n/2.
constexpr int signed_frequency(int j, int n) { return j <= n / 2 ? j : j - n; }

/// Position of signed frequency q in a length-n FFT-natural array.
constexpr int frequency_slot(int q, int n) { return ((q % n) + n) % n; }

}  // namespace rra
