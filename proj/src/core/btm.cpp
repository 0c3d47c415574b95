#include "core/btm.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace optlat {

namespace {

void require_up_factor(double u) {
    if (!(u > 1.0) || !std::isfinite(u)) {
        throw DomainError("up factor must be finite and exceed 1");
    }
}

/// Largest contiguous run of exercised nodes, scanned from the exercise side
/// (lowest j for puts, highest j for calls). A node is exercised when its
/// value sits on a strictly positive payoff; the scan stops at the first node
/// that fails either test, since nodes past the stop may touch the payoff
/// again (worthless region) without belonging to the exercise region.
template <typename PayoffAt>
std::optional<long> scan_exercise_run(const OptionSpec& spec, const std::vector<double>& row,
                                      long level, PayoffAt&& payoff_at, double tau) {
    std::optional<long> run_end;
    const std::size_t count = row.size();
    if (spec.kind == OptionKind::put) {
        for (std::size_t a = 0; a < count; ++a) {
            const long j = 2 * static_cast<long>(a) - level;
            const double phi = payoff_at(j);
            if (phi <= tau || row[a] > phi + tau) break;
            run_end = j;
        }
    } else {
        for (std::size_t a = count; a-- > 0;) {
            const long j = 2 * static_cast<long>(a) - level;
            const double phi = payoff_at(j);
            if (phi <= tau || row[a] > phi + tau) break;
            run_end = j;
        }
    }
    return run_end;
}

}  // namespace

double btm_up_weight(double rho, double eta, double u) {
    require_up_factor(u);
    if (!(eta > 0.0)) {
        throw DomainError("yield factor must be positive");
    }
    const double d = 1.0 / u;
    const double w = (rho / eta - d) / (u - d);
    if (!(w > 0.0) || !(w < 1.0)) {
        std::ostringstream msg;
        msg << "branch bounds violated: rho/eta = " << rho / eta << " must lie strictly between "
            << d << " and " << u;
        throw ModelError(msg.str());
    }
    return w;
}

double btm_up_weight_dual(double rho, double eta, double u) {
    return btm_up_weight(eta, rho, u);
}

double LatticeSolution::value(std::size_t n, long j) const {
    if (!has_values() || n >= values_.size()) {
        throw DomainError("lattice values not available for the requested level");
    }
    const long level = static_cast<long>(n);
    if (j < -level || j > level || ((j + level) % 2) != 0) {
        throw DomainError("lattice index does not belong to the level");
    }
    return values_[n][static_cast<std::size_t>((j + level) / 2)];
}

double LatticeSolution::node_price(long j) const {
    return spec_.spot * std::exp(static_cast<double>(j) * partition_.dx());
}

LatticeSolution price_btm(const OptionSpec& spec, const CoefficientSet& cs, double u,
                          const BtmOptions& options) {
    spec.validate();
    require_up_factor(u);
    const double dx = std::log(u);

    LatticeSolution sol;
    sol.spec_ = spec;
    sol.u_ = u;
    sol.partition_ = build_partition(cs, spec.maturity, dx, 1.0, options.snap_last_step,
                                     options.limits);
    const TimePartition& p = sol.partition_;
    const std::size_t n_steps = p.step_count();
    const long n_long = static_cast<long>(n_steps);

    std::vector<double> phi(2 * n_steps + 1);
    for (long j = -n_long; j <= n_long; ++j) {
        phi[static_cast<std::size_t>(j + n_long)] =
            spec.payoff(spec.spot * std::exp(static_cast<double>(j) * dx));
    }
    const auto payoff_at = [&](long j) { return phi[static_cast<std::size_t>(j + n_long)]; };

    sol.weights_.resize(n_steps);
    for (std::size_t n = 0; n < n_steps; ++n) {
        try {
            sol.weights_[n] = btm_up_weight(p.rate_factor(n), p.yield_factor(n), u);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "step " << n << " (t=" << p.node(n) << "): " << e.what();
            throw ModelError(msg.str());
        }
    }

    const bool american = spec.style == ExerciseStyle::american;
    const double tau = exercise_tolerance(spec);
    if (american) {
        sol.boundary_index_.assign(n_steps, std::nullopt);
    }
    if (options.keep_lattice) {
        sol.values_.resize(n_steps + 1);
    }

    std::vector<double> row(n_steps + 1);
    for (std::size_t a = 0; a <= n_steps; ++a) {
        row[a] = payoff_at(2 * static_cast<long>(a) - n_long);
    }
    if (options.keep_lattice) {
        sol.values_[n_steps] = row;
    }

    std::vector<double> prev;
    for (std::size_t n = n_steps; n-- > 0;) {
        const double w = sol.weights_[n];
        const double inv_rho = 1.0 / p.rate_factor(n);
        const long level = static_cast<long>(n);
        prev.assign(n + 1, 0.0);
        for (std::size_t a = 0; a <= n; ++a) {
            const long j = 2 * static_cast<long>(a) - level;
            double v = inv_rho * (w * row[a + 1] + (1.0 - w) * row[a]);
            if (american) {
                v = std::max(v, payoff_at(j));
            }
            prev[a] = v;
        }
        row.swap(prev);
        if (options.keep_lattice) {
            sol.values_[n] = row;
        }
        if (american) {
            sol.boundary_index_[n] = scan_exercise_run(spec, row, level, payoff_at, tau);
        }
    }

    sol.root_ = row[0];
    return sol;
}

BoundaryExtraction extract_boundary_btm(const LatticeSolution& solution) {
    const OptionSpec& spec = solution.spec();
    if (spec.style != ExerciseStyle::american) {
        throw DomainError("exercise boundary requires an American solution");
    }
    const TimePartition& p = solution.partition();

    BoundaryExtraction out;
    out.curve.scale = BoundaryScale::price;

    if (spec.kind == OptionKind::call) {
        bool any_yield = false;
        for (std::size_t n = 0; n <= p.step_count(); ++n) {
            if (p.yield(n) > 0.0) {
                any_yield = true;
                break;
            }
        }
        if (!any_yield) {
            out.outcome = BoundaryOutcome::no_boundary_zero_yield;
            out.index_per_level.assign(p.step_count(), std::nullopt);
            return out;
        }
    }

    out.index_per_level = solution.boundary_index();
    for (std::size_t n = 0; n < out.index_per_level.size(); ++n) {
        if (out.index_per_level[n]) {
            out.curve.t.push_back(p.node(n));
            out.curve.level.push_back(solution.node_price(*out.index_per_level[n]));
        }
    }
    return out;
}

std::pair<OptionSpec, CoefficientSet> symmetry_transform(const OptionSpec& spec,
                                                         const CoefficientSet& cs) {
    OptionSpec image = spec;
    image.kind = spec.kind == OptionKind::call ? OptionKind::put : OptionKind::call;
    image.spot = spec.strike;
    image.strike = spec.spot;
    CoefficientSet swapped(cs.yield(), cs.rate(), cs.sigma());
    return {image, swapped};
}

}  // namespace optlat
