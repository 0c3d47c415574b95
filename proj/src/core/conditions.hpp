#pragma once

#include <string>
#include <vector>

#include "core/curves.hpp"
#include "core/partition.hpp"

namespace optlat {

struct ConditionViolation {
    double t;
    std::string condition;
    double lhs;
    double rhs;
};

/// Outcome of the structural hypothesis checks behind the monotonicity
/// results. put_monotone_ok demands r/sigma^2 nondecreasing and q/sigma^2
/// nonincreasing across partition nodes; call_monotone_ok mirrors them.
/// branch_ok demands d * eta_n < rho_n < u * eta_n at every step, which is
/// what keeps the lattice up-weight inside (0, 1). Diagnostics only; the
/// checks never throw.
struct ConditionReport {
    bool put_monotone_ok = true;
    bool call_monotone_ok = true;
    bool q_positive = true;
    bool branch_ok = true;
    std::vector<ConditionViolation> violations;

    bool all_ok() const noexcept {
        return put_monotone_ok && call_monotone_ok && q_positive && branch_ok;
    }
};

ConditionReport check_conditions(const CoefficientSet& cs, const TimePartition& p, double u);

}  // namespace optlat
