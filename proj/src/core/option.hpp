#pragma once

#include <algorithm>

#include "core/errors.hpp"

namespace optlat {

enum class OptionKind { put, call };
enum class ExerciseStyle { american, european };

struct OptionSpec {
    OptionKind kind = OptionKind::put;
    ExerciseStyle style = ExerciseStyle::american;
    double spot = 1.0;
    double strike = 1.0;
    double maturity = 1.0;

    void validate() const {
        if (!(spot > 0.0)) throw DomainError("spot must be positive");
        if (!(strike >= 0.0)) throw DomainError("strike must be nonnegative");
        if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
    }

    double payoff(double s) const noexcept {
        return kind == OptionKind::put ? std::max(strike - s, 0.0) : std::max(s - strike, 0.0);
    }
};

/// Absolute tolerance for value-equals-payoff classification; rollback values
/// are exact maxima against the payoff, so only accumulated rounding needs
/// absorbing.
inline double exercise_tolerance(const OptionSpec& spec) noexcept {
    const double scale = spec.kind == OptionKind::put ? spec.strike : spec.spot;
    return 0x1p-40 * scale;
}

}  // namespace optlat
