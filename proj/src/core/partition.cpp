#include "core/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace optlat {

namespace {

// Accumulated node times carry one rounding per step; accepting a final node
// that overshoots T by this relative amount keeps exact-arithmetic partitions
// (e.g. five steps of 0.01 against T = 0.05) intact.
constexpr double kAcceptSlack = 1e-13;

}  // namespace

double TimePartition::step_alpha(std::size_t n) const {
    if (snapped_ && n + 1 == dt_.size()) {
        const double s = sigma_[n];
        return std::min(alpha_, s * s * dt_[n] / (dx_ * dx_));
    }
    return alpha_;
}

double TimePartition::dt_extension() const {
    const double s = sigma_.back();
    return alpha_ * dx_ * dx_ / (s * s);
}

TimePartition build_partition(const CoefficientSet& cs, double maturity, double dx, double alpha,
                              bool snap_last_step, PartitionLimits limits) {
    if (!(maturity > 0.0) || !std::isfinite(maturity)) {
        throw DomainError("maturity must be positive");
    }
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw DomainError("dx must be positive");
    }
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1]");
    }

    const double k = alpha * dx * dx;  // sigma_n^2 dt_n for every step
    {
        const double hi = cs.sigma_hi();
        const double predicted = maturity * hi * hi / k;
        if (predicted > static_cast<double>(limits.max_steps)) {
            std::ostringstream msg;
            msg << "partition would need about " << predicted << " steps (cap "
                << limits.max_steps << "); dx=" << dx << ", sigma in [" << cs.sigma_lo() << ", "
                << cs.sigma_hi() << "], T=" << maturity;
            throw ResourceError(msg.str());
        }
    }

    TimePartition p;
    p.maturity_ = maturity;
    p.dx_ = dx;
    p.alpha_ = alpha;
    p.t_.push_back(0.0);

    const double accept = maturity * (1.0 + kAcceptSlack);
    double t = 0.0;
    double comp = 0.0;  // Kahan carry for the node accumulation
    for (;;) {
        const CoefficientSample s = cs.at(t);
        p.r_.push_back(s.r);
        p.q_.push_back(s.q);
        p.sigma_.push_back(s.sigma);

        const double step = k / (s.sigma * s.sigma);
        const double y = step - comp;
        const double t_next = t + y;
        if (t_next > accept) {
            break;
        }
        comp = (t_next - t) - y;
        t = t_next;
        p.dt_.push_back(step);
        p.t_.push_back(t);
        if (p.dt_.size() >= limits.max_steps) {
            std::ostringstream msg;
            msg << "partition exceeded the step cap " << limits.max_steps << "; dx=" << dx
                << ", sigma in [" << cs.sigma_lo() << ", " << cs.sigma_hi() << "], T=" << maturity;
            throw ResourceError(msg.str());
        }
    }

    p.gap_ = std::max(0.0, maturity - p.t_.back());
    if (snap_last_step && p.gap_ > 0.0) {
        const CoefficientSample s = cs.at(maturity);
        p.dt_.push_back(p.gap_);
        p.t_.push_back(maturity);
        p.r_.push_back(s.r);
        p.q_.push_back(s.q);
        p.sigma_.push_back(s.sigma);
        p.gap_ = 0.0;
        p.snapped_ = true;
    }
    return p;
}

double interpolated_dt(const TimePartition& p, double t) {
    const std::size_t n_steps = p.step_count();
    if (n_steps == 0 || !(t >= p.node(0)) || !(t < p.node(n_steps))) {
        std::ostringstream msg;
        msg << "interpolated_dt: t=" << t << " outside [t_0, t_N)";
        throw DomainError(msg.str());
    }
    // Locate n with t in [t_n, t_{n+1}).
    std::size_t lo = 0;
    std::size_t hi = n_steps;  // nodes index range [0, N]
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (p.node(mid) <= t) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double t_n = p.node(lo);
    const double t_n1 = p.node(lo + 1);
    const double dt_n = p.dt(lo);
    const double dt_n1 = (lo + 1 < n_steps) ? p.dt(lo + 1) : p.dt_extension();
    const double w = (t - t_n) / (t_n1 - t_n);
    return w * dt_n1 + (1.0 - w) * dt_n;
}

}  // namespace optlat
