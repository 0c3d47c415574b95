#pragma once

#include <string>
#include <vector>

namespace optlat {

enum class CurveInterp { step, linear };

struct CurveKnot {
    double t;
    double value;
};

/// Deterministic coefficient curve on [0, +inf).
///
/// A curve is a list of knots with strictly increasing times, the first at
/// t = 0. "step" holds each knot's value until the next knot; "linear" ramps
/// between consecutive knots. The segment starting at a knot applies at the
/// knot itself, so a step curve {(0, 0.2), (2, 0.1)} evaluates to 0.1 at
/// t = 2. Past the last knot the curve extends at the last knot's value.
class CoefficientCurve {
public:
    CoefficientCurve(CurveInterp interp, std::vector<CurveKnot> knots, std::string label = "curve");

    static CoefficientCurve constant(double value, std::string label = "curve");

    double value(double t) const;

    /// Exact range over [0, inf); for step and linear curves the extrema sit
    /// on knots.
    double min_value() const noexcept { return min_; }
    double max_value() const noexcept { return max_; }

    CurveInterp interp() const noexcept { return interp_; }
    const std::vector<CurveKnot>& knots() const noexcept { return knots_; }
    const std::string& label() const noexcept { return label_; }

private:
    CurveInterp interp_;
    std::vector<CurveKnot> knots_;
    std::string label_;
    double min_ = 0.0;
    double max_ = 0.0;
};

struct CoefficientSample {
    double r;
    double q;
    double sigma;
};

/// Market coefficients r(t), q(t), sigma(t).
///
/// Construction rejects sigma(t) <= 0 anywhere and negative r or q anywhere;
/// the lattice step factors 1 + r dt and 1 + q dt must stay >= 1.
/// sigma_lo/sigma_hi are derived from the sigma curve's knots. Immutable
/// after construction and safe to share across threads.
class CoefficientSet {
public:
    CoefficientSet(CoefficientCurve rate, CoefficientCurve yield, CoefficientCurve sigma);

    CoefficientSample at(double t) const;

    const CoefficientCurve& rate() const noexcept { return rate_; }
    const CoefficientCurve& yield() const noexcept { return yield_; }
    const CoefficientCurve& sigma() const noexcept { return sigma_; }

    double sigma_lo() const noexcept { return sigma_lo_; }
    double sigma_hi() const noexcept { return sigma_hi_; }

private:
    CoefficientCurve rate_;
    CoefficientCurve yield_;
    CoefficientCurve sigma_;
    double sigma_lo_;
    double sigma_hi_;
};

/// Sample all three curves at t, rejecting t outside [0, horizon].
CoefficientSample eval_coefficients(const CoefficientSet& cs, double t, double horizon);

}  // namespace optlat
