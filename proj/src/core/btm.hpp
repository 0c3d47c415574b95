#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "core/boundary.hpp"
#include "core/curves.hpp"
#include "core/option.hpp"
#include "core/partition.hpp"

namespace optlat {

/// Risk-neutral weight on the up branch, (rho/eta - d) / (u - d) with
/// d = 1/u. Throws ModelError when the result leaves (0, 1), i.e. when the
/// branch bounds d*eta < rho < u*eta fail.
double btm_up_weight(double rho, double eta, double u);

/// Same weight with the roles of the two growth factors exchanged,
/// (eta/rho - d) / (u - d); it is the up weight of the symmetry-partner
/// option and satisfies w*u/rho = (1 - w')/eta and (1-w)*d/rho = w'/eta.
double btm_up_weight_dual(double rho, double eta, double u);

struct BtmOptions {
    bool keep_lattice = true;
    bool snap_last_step = false;
    PartitionLimits limits{};
};

/// Backward-induction solution on the recombining tree S_j = spot * u^j.
///
/// Level n holds nodes j in {-n, -n+2, ..., n}; values are stored per level
/// when keep_lattice is set. Boundary indices are always recorded for
/// American solves. The price is reported at (spot, t_0) with the payoff
/// applied at t_N; gap() says how far t_N falls short of the requested
/// maturity.
class LatticeSolution {
public:
    const OptionSpec& spec() const noexcept { return spec_; }
    const TimePartition& partition() const noexcept { return partition_; }
    double up_factor() const noexcept { return u_; }
    double root() const noexcept { return root_; }
    double gap() const noexcept { return partition_.gap(); }
    bool has_values() const noexcept { return !values_.empty(); }

    const std::vector<double>& up_weights() const noexcept { return weights_; }

    /// Value at level n, lattice index j (j must match the level's parity).
    double value(std::size_t n, long j) const;
    const std::vector<double>& level(std::size_t n) const { return values_[n]; }

    double node_price(long j) const;  // spot * u^j

    const std::vector<std::optional<long>>& boundary_index() const noexcept {
        return boundary_index_;
    }

private:
    friend LatticeSolution price_btm(const OptionSpec&, const CoefficientSet&, double,
                                     const BtmOptions&);

    OptionSpec spec_{};
    TimePartition partition_{};
    double u_ = 0.0;
    double root_ = 0.0;
    std::vector<double> weights_;                     // up weight per step
    std::vector<std::vector<double>> values_;         // level n -> n+1 entries
    std::vector<std::optional<long>> boundary_index_; // per level, American only
};

/// Prices on the sigma-adapted partition built with dx = ln u, alpha = 1.
/// European style runs the same rollback without the early-exercise max.
LatticeSolution price_btm(const OptionSpec& spec, const CoefficientSet& cs, double u,
                          const BtmOptions& options = {});

/// Per-level exercise indices and the piecewise-linear boundary S(t).
/// Puts exercise below the boundary, calls above. Requires an American
/// solution; a call on identically-zero yield reports the distinguished
/// no-boundary outcome.
BoundaryExtraction extract_boundary_btm(const LatticeSolution& solution);

/// Call-put counterpart: flips the kind, swaps spot with strike and the rate
/// curve with the yield curve. Pricing the image reproduces the original
/// root value.
std::pair<OptionSpec, CoefficientSet> symmetry_transform(const OptionSpec& spec,
                                                         const CoefficientSet& cs);

}  // namespace optlat
