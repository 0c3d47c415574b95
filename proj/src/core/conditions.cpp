#include "core/conditions.hpp"

#include <cmath>
#include <cstdlib>

namespace optlat {

namespace {

// Slack for the weak ratio comparisons: mathematically monotone curves must
// not trip the check through evaluation rounding alone.
double ratio_slack(double reference) {
    return 1e-12 * std::max(1.0, std::abs(reference));
}

}  // namespace

ConditionReport check_conditions(const CoefficientSet& cs, const TimePartition& p, double u) {
    (void)cs;  // all needed samples are frozen in the partition
    ConditionReport report;
    const std::size_t n_steps = p.step_count();

    for (std::size_t n = 0; n + 1 <= n_steps; ++n) {
        const double s0 = p.sigma(n);
        const double s1 = p.sigma(n + 1);
        const double rr0 = p.rate(n) / (s0 * s0);
        const double rr1 = p.rate(n + 1) / (s1 * s1);
        const double qq0 = p.yield(n) / (s0 * s0);
        const double qq1 = p.yield(n + 1) / (s1 * s1);
        const double t1 = p.node(n + 1);

        if (rr1 < rr0 - ratio_slack(rr0)) {
            report.put_monotone_ok = false;
            report.violations.push_back({t1, "r/sigma^2-nondecreasing", rr1, rr0});
        }
        if (qq1 > qq0 + ratio_slack(qq0)) {
            report.put_monotone_ok = false;
            report.violations.push_back({t1, "q/sigma^2-nonincreasing", qq1, qq0});
        }
        if (rr1 > rr0 + ratio_slack(rr0)) {
            report.call_monotone_ok = false;
            report.violations.push_back({t1, "r/sigma^2-nonincreasing", rr1, rr0});
        }
        if (qq1 < qq0 - ratio_slack(qq0)) {
            report.call_monotone_ok = false;
            report.violations.push_back({t1, "q/sigma^2-nondecreasing", qq1, qq0});
        }
    }

    for (std::size_t n = 0; n <= n_steps; ++n) {
        if (!(p.yield(n) > 0.0)) {
            report.q_positive = false;
            report.violations.push_back({p.node(n), "q-positive", p.yield(n), 0.0});
        }
    }

    const double d = 1.0 / u;
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double rho = p.rate_factor(n);
        const double eta = p.yield_factor(n);
        if (!(rho > d * eta)) {
            report.branch_ok = false;
            report.violations.push_back({p.node(n), "branch-lower-bound", rho, d * eta});
        }
        if (!(rho < u * eta)) {
            report.branch_ok = false;
            report.violations.push_back({p.node(n), "branch-upper-bound", rho, u * eta});
        }
    }

    return report;
}

}  // namespace optlat
