#pragma once

#include <cstddef>
#include <vector>

#include "core/curves.hpp"

namespace optlat {

struct PartitionLimits {
    std::size_t max_steps = 10'000'000;
};

/// Volatility-adapted time partition 0 = t_0 < t_1 < ... < t_N <= T.
///
/// Every step satisfies sigma(t_n)^2 * dt_n = alpha * dx^2 exactly (one
/// division), so large-sigma stretches get short steps and the lattice stays
/// recombining under time-dependent volatility. The construction stops at the
/// last node that fits before T; the shortfall T - t_N is reported as gap()
/// and shrinks like dx^2. With snap_last_step a residual step is appended so
/// the final node lands on T (that step alone breaks the exact product rule).
///
/// Coefficients are sampled once per node and frozen here; the pricing
/// engines never re-evaluate the curves. Immutable after construction.
class TimePartition {
public:
    std::size_t step_count() const noexcept { return dt_.size(); }  // N

    double node(std::size_t n) const { return t_[n]; }              // n in [0, N]
    double dt(std::size_t n) const { return dt_[n]; }               // n in [0, N-1]
    double rate(std::size_t n) const { return r_[n]; }              // node samples, n in [0, N]
    double yield(std::size_t n) const { return q_[n]; }
    double sigma(std::size_t n) const { return sigma_[n]; }

    /// Per-step growth factors 1 + r_n dt_n and 1 + q_n dt_n, n in [0, N-1].
    double rate_factor(std::size_t n) const { return 1.0 + r_[n] * dt_[n]; }
    double yield_factor(std::size_t n) const { return 1.0 + q_[n] * dt_[n]; }

    /// sigma_n^2 dt_n / dx^2 for step n; equals alpha() except on a snapped
    /// final step, where it is smaller.
    double step_alpha(std::size_t n) const;

    double maturity() const noexcept { return maturity_; }
    double dx() const noexcept { return dx_; }
    double alpha() const noexcept { return alpha_; }
    double gap() const noexcept { return gap_; }
    bool snapped() const noexcept { return snapped_; }

    /// Step length the recursion would take from t_N; extends dt(n) one index
    /// past the built range for the interpolant below.
    double dt_extension() const;

private:
    friend TimePartition build_partition(const CoefficientSet&, double, double, double, bool,
                                         PartitionLimits);

    double maturity_ = 0.0;
    double dx_ = 0.0;
    double alpha_ = 0.0;
    double gap_ = 0.0;
    bool snapped_ = false;
    std::vector<double> t_;
    std::vector<double> dt_;
    std::vector<double> r_;
    std::vector<double> q_;
    std::vector<double> sigma_;
};

TimePartition build_partition(const CoefficientSet& cs, double maturity, double dx,
                              double alpha = 1.0, bool snap_last_step = false,
                              PartitionLimits limits = {});

/// Step-length interpolant: for t in [t_n, t_{n+1}) returns the convex blend
/// of dt_n and dt_{n+1} with weight (t - t_n)/(t_{n+1} - t_n), so that
/// t + interpolated_dt(t) lands in [t_{n+1}, t_{n+2}). Defined on [t_0, t_N),
/// using dt_extension() past the final built step.
double interpolated_dt(const TimePartition& p, double t);

}  // namespace optlat
