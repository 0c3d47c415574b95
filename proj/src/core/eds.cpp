#include "core/eds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/btm.hpp"
#include "core/errors.hpp"

namespace optlat {

namespace {

template <typename PayoffAt>
std::optional<long> scan_exercise_run(const OptionSpec& spec, const std::vector<double>& row,
                                      long j_min, PayoffAt&& payoff_at, double tau) {
    // The cut columns are pinned to the payoff, so the scan starts one column
    // inside; an empty interior run means no exercise was detected. A node is
    // exercised when its value sits on a strictly positive payoff, and the
    // run stops at the first node failing either test.
    std::optional<long> run_end;
    const std::size_t m = row.size();
    if (spec.kind == OptionKind::put) {
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const long j = j_min + static_cast<long>(i);
            const double phi = payoff_at(i);
            if (phi <= tau || row[i] > phi + tau) break;
            run_end = j;
        }
    } else {
        for (std::size_t i = m - 1; i-- > 1;) {
            const long j = j_min + static_cast<long>(i);
            const double phi = payoff_at(i);
            if (phi <= tau || row[i] > phi + tau) break;
            run_end = j;
        }
    }
    return run_end;
}

}  // namespace

double eds_up_weight(double r, double q, double sigma, double dx) {
    if (!(sigma > 0.0)) {
        throw DomainError("sigma must be positive");
    }
    const double drift = r - q - 0.5 * sigma * sigma;
    const double w = 0.5 + dx / (2.0 * sigma * sigma) * drift;
    if (!(w > 0.0) || !(w < 1.0)) {
        std::ostringstream msg;
        msg << "stability bound violated: |dx (r - q - sigma^2/2) / sigma^2| = "
            << std::abs(dx / (sigma * sigma) * drift) << " >= 1; reduce dx";
        throw ModelError(msg.str());
    }
    return w;
}

double eds_up_weight_swapped(double r, double q, double sigma, double dx) {
    return eds_up_weight(q, r, sigma, dx);
}

void step_row(std::span<const double> next, std::span<const double> phi, double rho, double alpha,
              double up_weight, bool american, std::span<double> out) {
    const std::size_t m = next.size();
    if (phi.size() != m || out.size() != m || m < 3) {
        throw InternalError("step_row: rows must share one length of at least 3");
    }
    if (!(rho > 0.0) || !(alpha > 0.0) || !(alpha <= 1.0) || !(up_weight > 0.0) ||
        !(up_weight < 1.0)) {
        throw InternalError("step_row: coefficients outside their valid ranges");
    }
    const double inv_rho = 1.0 / rho;
    const double keep = 1.0 - alpha;
    const double w = up_weight;
    out[0] = phi[0];
    out[m - 1] = phi[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) {
        double v = inv_rho * (keep * next[i] + alpha * (w * next[i + 1] + (1.0 - w) * next[i - 1]));
        if (american) {
            v = std::max(v, phi[i]);
        }
        out[i] = v;
    }
}

double GridSolution::price(long j) const noexcept {
    return std::exp(log_price(j));
}

double GridSolution::value(std::size_t n, long j) const {
    const std::vector<double>& r = row(n);
    if (j < j_min() || j > j_max()) {
        throw DomainError("grid index outside the truncated range");
    }
    return r[static_cast<std::size_t>(j - j_min())];
}

const std::vector<double>& GridSolution::row(std::size_t n) const {
    if (!has_surface() || n >= surface_.size()) {
        throw DomainError("grid surface not available for the requested level");
    }
    return surface_[n];
}

GridSolution solve_eds(const OptionSpec& spec, const CoefficientSet& cs, double dx, double alpha,
                       const EdsOptions& options) {
    spec.validate();
    if (!(options.half_width_k >= 4.0)) {
        throw DomainError("half_width_k must be at least 4");
    }
    if (options.scheme == GridScheme::btm_theta && alpha != 1.0) {
        throw DomainError("the lattice weight scheme requires alpha = 1");
    }

    GridSolution sol;
    sol.spec_ = spec;
    sol.scheme_ = options.scheme;
    sol.partition_ = build_partition(cs, spec.maturity, dx, alpha, options.snap_last_step,
                                     options.limits);
    const TimePartition& p = sol.partition_;
    const std::size_t n_steps = p.step_count();

    sol.c_ = std::log(spec.spot);
    const double strike_reach = spec.strike > 0.0 ? std::abs(std::log(spec.strike / spec.spot)) : 0.0;
    sol.width_ = strike_reach + options.half_width_k * cs.sigma_hi() * std::sqrt(spec.maturity);
    sol.half_span_ = static_cast<long>(std::ceil(sol.width_ / dx));
    sol.residual_order_ = (alpha == 1.0) ? 3 : 2;

    const std::size_t m = sol.columns();
    sol.phi_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const long j = sol.j_min() + static_cast<long>(i);
        sol.phi_[i] = spec.payoff(std::exp(sol.log_price(j)));
    }

    sol.weights_.resize(n_steps);
    const double u = std::exp(dx);
    for (std::size_t n = 0; n < n_steps; ++n) {
        try {
            sol.weights_[n] = options.scheme == GridScheme::eds
                                  ? eds_up_weight(p.rate(n), p.yield(n), p.sigma(n), dx)
                                  : btm_up_weight(p.rate_factor(n), p.yield_factor(n), u);
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
    if (options.keep_surface) {
        sol.surface_.resize(n_steps + 1);
    }

    std::vector<double> row = sol.phi_;
    if (options.keep_surface) {
        sol.surface_[n_steps] = row;
    }
    const auto payoff_at = [&](std::size_t i) { return sol.phi_[i]; };

    std::vector<double> prev(m);
    for (std::size_t n = n_steps; n-- > 0;) {
        step_row(row, sol.phi_, p.rate_factor(n), p.step_alpha(n), sol.weights_[n], american, prev);
        row.swap(prev);
        if (options.keep_surface) {
            sol.surface_[n] = row;
        }
        if (american) {
            const std::optional<long> j_n =
                scan_exercise_run(spec, row, sol.j_min(), payoff_at, tau);
            sol.boundary_index_[n] = j_n;
            if (j_n && ((spec.kind == OptionKind::put && *j_n >= sol.j_max() - 1) ||
                        (spec.kind == OptionKind::call && *j_n <= sol.j_min() + 1))) {
                std::ostringstream msg;
                msg << "truncation too narrow: exercise region reaches the cut column at level "
                    << n << "; increase half_width_k";
                throw DomainError(msg.str());
            }
        }
    }

    sol.root_ = row[static_cast<std::size_t>(sol.half_span_)];
    return sol;
}

BoundaryExtraction extract_boundary_eds(const GridSolution& solution) {
    const OptionSpec& spec = solution.spec();
    if (spec.style != ExerciseStyle::american) {
        throw DomainError("exercise boundary requires an American solution");
    }
    const TimePartition& p = solution.partition();

    BoundaryExtraction out;
    out.curve.scale = BoundaryScale::log_price;

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
            out.curve.level.push_back(solution.log_price(*out.index_per_level[n]));
        }
    }
    return out;
}

NearMaturityBounds near_maturity_bounds(const OptionSpec& spec, const CoefficientSet& cs,
                                        double dx, double alpha) {
    spec.validate();
    const TimePartition p = build_partition(cs, spec.maturity, dx, alpha);
    if (p.step_count() == 0) {
        throw DomainError("partition has no steps; reduce dx");
    }
    const std::size_t last = p.step_count() - 1;
    const double r = p.rate(last);
    const double q = p.yield(last);

    NearMaturityBounds out;
    if (!(spec.strike > 0.0)) {
        return out;
    }
    if (spec.kind == OptionKind::put) {
        if (!(r > 0.0)) {
            return out;
        }
        const double m = q > 0.0 ? spec.strike * std::min(1.0, r / q) : spec.strike;
        out.exists = true;
        out.upper = std::log(m);
        out.lower = out.upper - 2.0 * dx;
    } else {
        if (!(q > 0.0)) {
            return out;
        }
        const double m = spec.strike * std::max(1.0, r / q);
        out.exists = true;
        out.lower = std::log(m);
        out.upper = out.lower + 2.0 * dx;
    }
    return out;
}

double eds_symmetry_residual(const OptionSpec& call_spec, const CoefficientSet& cs, double dx,
                             double alpha, const EdsOptions& options) {
    if (call_spec.kind != OptionKind::call) {
        throw DomainError("symmetry residual is defined for a call specification");
    }
    EdsOptions opt = options;
    opt.keep_surface = false;
    const GridSolution call_side = solve_eds(call_spec, cs, dx, alpha, opt);
    const auto [put_spec, swapped] = symmetry_transform(call_spec, cs);
    const GridSolution put_side = solve_eds(put_spec, swapped, dx, alpha, opt);
    return std::abs(call_side.root() - put_side.root());
}

double eds_homogeneity_residual(const OptionSpec& spec, const CoefficientSet& cs, double dx,
                                double alpha, double mu, const EdsOptions& options) {
    if (!(mu > 0.0)) {
        throw DomainError("scale factor must be positive");
    }
    EdsOptions opt = options;
    opt.keep_surface = false;
    const GridSolution base = solve_eds(spec, cs, dx, alpha, opt);
    OptionSpec scaled = spec;
    scaled.spot = spec.spot * mu;
    scaled.strike = spec.strike * mu;
    const GridSolution image = solve_eds(scaled, cs, dx, alpha, opt);
    const double want = mu * base.root();
    const double denom = std::max(std::abs(want), 1e-300);
    return std::abs(image.root() - want) / denom;
}

double weighted_sup_norm(std::span<const double> row, double dx, double c, long j_min) {
    double sup = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const double x = (static_cast<double>(j_min) + static_cast<double>(i)) * dx + c;
        sup = std::max(sup, std::abs(row[i]) * std::exp(-x));
    }
    return sup;
}

}  // namespace optlat
