#pragma once

#include <optional>
#include <vector>

#include "core/errors.hpp"

namespace optlat {

enum class BoundaryScale { price, log_price };

/// Piecewise-linear exercise boundary sampled at partition nodes.
struct BoundaryCurve {
    BoundaryScale scale = BoundaryScale::price;
    std::vector<double> t;
    std::vector<double> level;

    bool empty() const noexcept { return t.empty(); }

    double eval(double time) const {
        if (t.empty() || !(time >= t.front()) || !(time <= t.back())) {
            throw DomainError("boundary evaluation outside sampled range");
        }
        std::size_t lo = 0;
        std::size_t hi = t.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (t[mid] <= time) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if (time == t[lo]) return level[lo];
        const double w = (time - t[lo]) / (t[lo + 1] - t[lo]);
        return w * level[lo + 1] + (1.0 - w) * level[lo];
    }
};

enum class BoundaryOutcome {
    present,
    /// A call on a zero-yield asset is never exercised early; there is no
    /// boundary to extract. Distinguished outcome, not an error.
    no_boundary_zero_yield,
};

struct BoundaryExtraction {
    BoundaryOutcome outcome = BoundaryOutcome::present;
    /// j_n per level n = 0..N-1; empty optional where no lattice node of the
    /// level is classified as exercised.
    std::vector<std::optional<long>> index_per_level;
    BoundaryCurve curve;
};

}  // namespace optlat
