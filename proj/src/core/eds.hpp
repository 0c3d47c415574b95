#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/boundary.hpp"
#include "core/curves.hpp"
#include "core/option.hpp"
#include "core/partition.hpp"

namespace optlat {

/// Upwind weight of the explicit scheme,
/// 1/2 + (dx / 2 sigma^2) (r - q - sigma^2 / 2).
/// Throws ModelError when the weight leaves (0, 1); that is the stability
/// bound and the fix is a smaller dx.
double eds_up_weight(double r, double q, double sigma, double dx);

/// Weight of the symmetry-partner scheme, with r and q exchanged.
double eds_up_weight_swapped(double r, double q, double sigma, double dx);

/// One backward step of the obstacle sweep on a truncated row:
///   out_j = max{ (1/rho) [ (1-alpha) next_j
///                          + alpha (w next_{j+1} + (1-w) next_{j-1}) ], phi_j }
/// in the interior; the two cut columns are pinned to the payoff. European
/// mode drops the max. All spans must share one length of at least 3.
void step_row(std::span<const double> next, std::span<const double> phi, double rho,
              double alpha, double up_weight, bool american, std::span<double> out);

enum class GridScheme {
    eds,        // upwind weight from the difference scheme
    btm_theta,  // risk-neutral lattice weight on the same grid (alpha = 1)
};

struct EdsOptions {
    double half_width_k = 6.0;
    bool keep_surface = false;
    bool snap_last_step = false;
    GridScheme scheme = GridScheme::eds;
    PartitionLimits limits{};
};

/// Rectangular log-price solution x_j = j dx + c on the adapted partition.
///
/// The grid is anchored at c = ln(spot) so the reported price sits exactly on
/// the j = 0 column, and truncated at |x - c| <= W with
/// W = |ln(strike/spot)| + half_width_k * sigma_hi * sqrt(T). Rows are kept
/// per level only when requested; boundary indices are always recorded for
/// American solves.
class GridSolution {
public:
    const OptionSpec& spec() const noexcept { return spec_; }
    const TimePartition& partition() const noexcept { return partition_; }
    double dx() const noexcept { return partition_.dx(); }
    double alpha() const noexcept { return partition_.alpha(); }
    double anchor() const noexcept { return c_; }
    long j_min() const noexcept { return -half_span_; }
    long j_max() const noexcept { return half_span_; }
    std::size_t columns() const noexcept { return static_cast<std::size_t>(2 * half_span_ + 1); }
    double root() const noexcept { return root_; }
    double gap() const noexcept { return partition_.gap(); }
    int residual_order() const noexcept { return residual_order_; }
    double truncation_width() const noexcept { return width_; }
    GridScheme scheme() const noexcept { return scheme_; }
    bool has_surface() const noexcept { return !surface_.empty(); }

    const std::vector<double>& up_weights() const noexcept { return weights_; }

    double log_price(long j) const noexcept { return static_cast<double>(j) * partition_.dx() + c_; }
    double price(long j) const noexcept;

    double value(std::size_t n, long j) const;
    const std::vector<double>& row(std::size_t n) const;
    const std::vector<double>& payoff_row() const noexcept { return phi_; }

    const std::vector<std::optional<long>>& boundary_index() const noexcept {
        return boundary_index_;
    }

private:
    friend GridSolution solve_eds(const OptionSpec&, const CoefficientSet&, double, double,
                                  const EdsOptions&);

    OptionSpec spec_{};
    TimePartition partition_{};
    double c_ = 0.0;
    double width_ = 0.0;
    long half_span_ = 0;
    int residual_order_ = 3;
    GridScheme scheme_ = GridScheme::eds;
    double root_ = 0.0;
    std::vector<double> weights_;
    std::vector<double> phi_;
    std::vector<std::vector<double>> surface_;
    std::vector<std::optional<long>> boundary_index_;
};

GridSolution solve_eds(const OptionSpec& spec, const CoefficientSet& cs, double dx, double alpha,
                       const EdsOptions& options = {});

/// Per-level exercise indices and the piecewise-linear boundary x(t).
BoundaryExtraction extract_boundary_eds(const GridSolution& solution);

/// Bracket for the boundary's log-price at the last partition level.
/// Puts: [ln min(E, rE/q) - 2dx, ln min(E, rE/q)] using the final step's
/// coefficients; calls mirror it above ln max(E, rE/q). exists is false where
/// the construction degenerates (zero-yield call, zero-rate put, zero strike).
struct NearMaturityBounds {
    bool exists = false;
    double lower = 0.0;
    double upper = 0.0;
};

NearMaturityBounds near_maturity_bounds(const OptionSpec& spec, const CoefficientSet& cs,
                                        double dx, double alpha = 1.0);

/// |call(S, E; r, q) - put(E, S; q, r)| at the root, both sides solved on
/// their own anchor over the shared partition.
double eds_symmetry_residual(const OptionSpec& call_spec, const CoefficientSet& cs, double dx,
                             double alpha, const EdsOptions& options = {});

/// Relative defect of price(mu S, mu E) = mu price(S, E) at the root.
double eds_homogeneity_residual(const OptionSpec& spec, const CoefficientSet& cs, double dx,
                                double alpha, double mu, const EdsOptions& options = {});

/// sup_j |row_j| e^{-(j dx + c)} over a truncated row starting at j_min.
double weighted_sup_norm(std::span<const double> row, double dx, double c, long j_min);

}  // namespace optlat
