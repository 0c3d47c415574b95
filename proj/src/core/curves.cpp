#include "core/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace optlat {

CoefficientCurve::CoefficientCurve(CurveInterp interp, std::vector<CurveKnot> knots, std::string label)
    : interp_(interp), knots_(std::move(knots)), label_(std::move(label)) {
    if (knots_.empty()) {
        throw DomainError(label_ + ": curve needs at least one knot");
    }
    if (knots_.front().t != 0.0) {
        throw DomainError(label_ + ": first knot must sit at t = 0");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].value)) {
            throw DomainError(label_ + ": non-finite knot");
        }
        if (i > 0 && knots_[i].t <= knots_[i - 1].t) {
            std::ostringstream msg;
            msg << label_ << ": knot times must be strictly increasing (t=" << knots_[i].t << ")";
            throw DomainError(msg.str());
        }
    }
    min_ = knots_.front().value;
    max_ = knots_.front().value;
    for (const CurveKnot& k : knots_) {
        min_ = std::min(min_, k.value);
        max_ = std::max(max_, k.value);
    }
}

CoefficientCurve CoefficientCurve::constant(double value, std::string label) {
    return CoefficientCurve(CurveInterp::step, {{0.0, value}}, std::move(label));
}

double CoefficientCurve::value(double t) const {
    if (!(t >= 0.0)) {
        std::ostringstream msg;
        msg << label_ << ": evaluation time " << t << " is before t = 0";
        throw DomainError(msg.str());
    }
    // Last knot with knot.t <= t.
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double lhs, const CurveKnot& k) { return lhs < k.t; });
    const std::size_t idx = static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (interp_ == CurveInterp::step || idx + 1 == knots_.size()) {
        return knots_[idx].value;
    }
    const CurveKnot& lo = knots_[idx];
    const CurveKnot& hi = knots_[idx + 1];
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.value + w * (hi.value - lo.value);
}

CoefficientSet::CoefficientSet(CoefficientCurve rate, CoefficientCurve yield, CoefficientCurve sigma)
    : rate_(std::move(rate)), yield_(std::move(yield)), sigma_(std::move(sigma)) {
    if (rate_.min_value() < 0.0) {
        throw DomainError("rate curve must be nonnegative");
    }
    if (yield_.min_value() < 0.0) {
        throw DomainError("yield curve must be nonnegative");
    }
    if (!(sigma_.min_value() > 0.0)) {
        throw DomainError("sigma curve must be strictly positive");
    }
    sigma_lo_ = sigma_.min_value();
    sigma_hi_ = sigma_.max_value();
}

CoefficientSample CoefficientSet::at(double t) const {
    return {rate_.value(t), yield_.value(t), sigma_.value(t)};
}

CoefficientSample eval_coefficients(const CoefficientSet& cs, double t, double horizon) {
    if (!(t >= 0.0) || !(t <= horizon)) {
        std::ostringstream msg;
        msg << "coefficient evaluation time " << t << " outside [0, " << horizon << "]";
        throw DomainError(msg.str());
    }
    return cs.at(t);
}

}  // namespace optlat
