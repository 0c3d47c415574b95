#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "core/btm.hpp"
#include "core/curves.hpp"
#include "core/eds.hpp"
#include "core/errors.hpp"

using namespace optlat;

namespace {

CoefficientSet constant_set(double r, double q, double sigma) {
    return CoefficientSet(CoefficientCurve::constant(r, "r"), CoefficientCurve::constant(q, "q"),
                          CoefficientCurve::constant(sigma, "sigma"));
}

std::vector<double> random_row(std::mt19937_64& rng, std::size_t m, double lo, double hi) {
    std::uniform_real_distribution<double> pick(lo, hi);
    std::vector<double> row(m);
    for (double& v : row) v = pick(rng);
    return row;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("equal rate and yield give the drift-free upwind weight") {
    // r - q - sigma^2/2 collapses to -sigma^2/2, so the weight is 1/2 - dx/4
    CHECK(eds_up_weight(0.13, 0.13, 0.7, 0.08) == doctest::Approx(0.5 - 0.02).epsilon(1e-14));
    CHECK(eds_up_weight(0.0, 0.0, 1.9, 0.12) == doctest::Approx(0.5 - 0.03).epsilon(1e-14));
}

TEST_CASE("the canonical upwind weight is 0.48") {
    CHECK(eds_up_weight(0.1, 0.0, 1.0, 0.1) == doctest::Approx(0.48).epsilon(1e-14));
}

TEST_CASE("the swapped weight exchanges rate and yield") {
    const double a = eds_up_weight(0.1, 0.03, 0.8, 0.05);
    const double a_swapped = eds_up_weight_swapped(0.1, 0.03, 0.8, 0.05);
    CHECK(a_swapped == eds_up_weight(0.03, 0.1, 0.8, 0.05));
    CHECK(a + a_swapped == doctest::Approx(1.0 - 0.05 / 2.0).epsilon(1e-12));
}

TEST_CASE("an unstable spacing is rejected with advice") {
    try {
        eds_up_weight(1.0, 0.0, 0.1, 0.1);
        FAIL("expected a model error");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("reduce dx") != std::string::npos);
    }
}

TEST_CASE("the lattice and scheme weights agree to cubic order in dx") {
    std::vector<double> log_dx, log_gap;
    for (double dx : {0.2, 0.1, 0.05, 0.025}) {
        const double dt = dx * dx;  // sigma = 1, alpha = 1
        const double rho = 1.0 + 0.1 * dt;
        const double eta = 1.0;
        const double theta = btm_up_weight(rho, eta, std::exp(dx));
        const double a = eds_up_weight(0.1, 0.0, 1.0, dx);
        log_dx.push_back(std::log(dx));
        log_gap.push_back(std::log(std::abs(theta - a)));
    }
    CHECK(ols_slope(log_dx, log_gap) >= 2.5);

    // with r = q = 0 both weights stay within cubic distance as well
    std::vector<double> log_gap0;
    for (double dx : {0.2, 0.1, 0.05, 0.025}) {
        const double theta = btm_up_weight(1.0, 1.0, std::exp(dx));
        const double a = eds_up_weight(0.0, 0.0, 1.0, dx);
        log_gap0.push_back(std::log(std::abs(theta - a)));
    }
    CHECK(ols_slope(log_dx, log_gap0) >= 2.5);
}

TEST_CASE("one sweep step is monotone in its input row") {
    std::mt19937_64 rng(23);
    const std::size_t m = 41;
    const std::vector<double> phi = random_row(rng, m, 0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> base = random_row(rng, m, 0.0, 2.0);
        std::vector<double> upper = base;
        std::uniform_real_distribution<double> bump(0.0, 0.5);
        for (double& v : upper) v += bump(rng);
        std::vector<double> out_lo(m), out_hi(m);
        const double rho = 1.0 + 0.05 * 0.01;
        step_row(base, phi, rho, 0.9, 0.52, true, out_lo);
        step_row(upper, phi, rho, 0.9, 0.52, true, out_hi);
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(out_lo[i] <= out_hi[i]);
        }
    }
}

TEST_CASE("one sweep step respects the constant-shift bound") {
    std::mt19937_64 rng(29);
    const std::size_t m = 41;
    const std::vector<double> phi = random_row(rng, m, 0.0, 1.0);
    std::uniform_real_distribution<double> shift(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> base = random_row(rng, m, 0.0, 2.0);
        const double k = shift(rng);
        std::vector<double> shifted = base;
        for (double& v : shifted) v += k;
        std::vector<double> out(m), out_shifted(m);
        const double rho = 1.0 + 0.07 * 0.02;  // strictly above 1
        step_row(base, phi, rho, 0.8, 0.47, true, out);
        step_row(shifted, phi, rho, 0.8, 0.47, true, out_shifted);
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(out_shifted[i] <= out[i] + k);
        }
    }
}

TEST_CASE("alpha = 1 collapses the stencil to the two-point rule") {
    std::mt19937_64 rng(31);
    const std::size_t m = 31;
    const std::vector<double> next = random_row(rng, m, 0.0, 2.0);
    const std::vector<double> phi = random_row(rng, m, 0.0, 1.0);
    const double rho = 1.001;
    const double w = 0.48;
    std::vector<double> out(m);
    step_row(next, phi, rho, 1.0, w, true, out);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double two_point = std::max((w * next[i + 1] + (1.0 - w) * next[i - 1]) / rho, phi[i]);
        CHECK(out[i] == doctest::Approx(two_point).epsilon(1e-15));
    }
    CHECK(out.front() == phi.front());
    CHECK(out.back() == phi.back());
}

TEST_CASE("step rows must agree in shape") {
    std::vector<double> a(5, 0.0), b(4, 0.0), phi(5, 0.0);
    CHECK_THROWS_AS(step_row(a, phi, 1.0, 1.0, 0.5, true, b), InternalError);
}

TEST_CASE("the terminal grid row equals the payoff exactly") {
    const CoefficientSet cs = constant_set(0.1, 0.0, 1.0);
    const OptionSpec spec{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.1};
    EdsOptions opt;
    opt.keep_surface = true;
    const GridSolution sol = solve_eds(spec, cs, 0.05, 1.0, opt);
    const std::size_t n = sol.partition().step_count();
    const std::vector<double>& terminal = sol.row(n);
    for (long j = sol.j_min(); j <= sol.j_max(); ++j) {
        CHECK(terminal[static_cast<std::size_t>(j - sol.j_min())] ==
              spec.payoff(std::exp(sol.log_price(j))));
    }
}

TEST_CASE("American grid values dominate European ones node by node") {
    const CoefficientSet cs = constant_set(0.08, 0.02, 0.8);
    const OptionSpec amer{OptionKind::put, ExerciseStyle::american, 1.0, 1.1, 0.4};
    OptionSpec euro = amer;
    euro.style = ExerciseStyle::european;
    EdsOptions opt;
    opt.keep_surface = true;
    const GridSolution a = solve_eds(amer, cs, 0.05, 1.0, opt);
    const GridSolution e = solve_eds(euro, cs, 0.05, 1.0, opt);
    REQUIRE(a.columns() == e.columns());
    for (std::size_t n = 0; n <= a.partition().step_count(); ++n) {
        const std::vector<double>& ra = a.row(n);
        const std::vector<double>& re = e.row(n);
        for (std::size_t i = 0; i < ra.size(); ++i) {
            CHECK(ra[i] >= re[i] - 1e-15);
        }
    }
}

TEST_CASE("interior nodes satisfy discrete complementarity") {
    const CoefficientSet cs = constant_set(0.1, 0.05, 1.0);
    const OptionSpec spec{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.25};
    EdsOptions opt;
    opt.keep_surface = true;
    const double alpha = 0.8;
    const GridSolution sol = solve_eds(spec, cs, 0.05, alpha, opt);
    const TimePartition& p = sol.partition();
    const double tau = 0x1p-40;
    for (std::size_t n = 0; n < p.step_count(); ++n) {
        const std::vector<double>& cur = sol.row(n);
        const std::vector<double>& next = sol.row(n + 1);
        const double w = sol.up_weights()[n];
        const double rho = p.rate_factor(n);
        for (std::size_t i = 1; i + 1 < cur.size(); ++i) {
            const double cont =
                ((1.0 - alpha) * next[i] + alpha * (w * next[i + 1] + (1.0 - w) * next[i - 1])) /
                rho;
            const double phi = sol.payoff_row()[i];
            CHECK(cur[i] >= phi - tau);
            CHECK(cur[i] >= cont - tau);
            CHECK(std::min(cur[i] - phi, cur[i] - cont) <= tau);
        }
    }
}

TEST_CASE("put boundary indices grow toward maturity and the log boundary with them") {
    const CoefficientSet cs = constant_set(0.1, 0.0, 1.0);
    const OptionSpec spec{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.5};
    const GridSolution sol = solve_eds(spec, cs, 0.05, 1.0);
    const BoundaryExtraction b = extract_boundary_eds(sol);
    CHECK(b.outcome == BoundaryOutcome::present);
    std::optional<long> prev;
    std::size_t present = 0;
    for (const std::optional<long>& j : b.index_per_level) {
        if (!j) continue;
        ++present;
        if (prev) CHECK(*prev <= *j);
        prev = j;
    }
    CHECK(present == b.index_per_level.size());  // the grid reaches every level's boundary
    for (std::size_t i = 0; i + 1 < b.curve.level.size(); ++i) {
        CHECK(b.curve.level[i] <= b.curve.level[i + 1] + 1e-15);
    }
}

TEST_CASE("call boundary indices shrink toward maturity") {
    const CoefficientSet cs = constant_set(0.2, 0.1, 1.0);
    const OptionSpec spec{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.5};
    const GridSolution sol = solve_eds(spec, cs, 0.05, 1.0);
    const BoundaryExtraction b = extract_boundary_eds(sol);
    CHECK(b.outcome == BoundaryOutcome::present);
    std::optional<long> prev;
    bool seen = false;
    for (const std::optional<long>& j : b.index_per_level) {
        if (!j) continue;
        seen = true;
        if (prev) CHECK(*prev >= *j);
        prev = j;
    }
    CHECK(seen);
}

TEST_CASE("a call without yield reports the distinguished no-boundary outcome") {
    const CoefficientSet cs = constant_set(0.1, 0.0, 1.0);
    const OptionSpec spec{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.25};
    const GridSolution sol = solve_eds(spec, cs, 0.05, 1.0);
    const BoundaryExtraction b = extract_boundary_eds(sol);
    CHECK(b.outcome == BoundaryOutcome::no_boundary_zero_yield);
    CHECK(b.curve.empty());
}

TEST_CASE("near-maturity brackets follow the final step's coefficients") {
    const OptionSpec put{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.25};
    const OptionSpec call{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.25};
    const double dx = 0.05;

    SUBCASE("put with r >= q brackets the strike") {
        const NearMaturityBounds b = near_maturity_bounds(put, constant_set(0.2, 0.1, 1.0), dx);
        REQUIRE(b.exists);
        CHECK(b.upper == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(b.lower == doctest::Approx(-2.0 * dx).epsilon(1e-12));
    }
    SUBCASE("put with r < q brackets ln(rE/q)") {
        const NearMaturityBounds b = near_maturity_bounds(put, constant_set(0.1, 0.2, 1.0), dx);
        REQUIRE(b.exists);
        CHECK(b.upper == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    }
    SUBCASE("call with r > q brackets ln(rE/q) from above") {
        const NearMaturityBounds b = near_maturity_bounds(call, constant_set(0.2, 0.1, 1.0), dx);
        REQUIRE(b.exists);
        CHECK(b.lower == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        CHECK(b.upper == doctest::Approx(std::log(2.0) + 2.0 * dx).epsilon(1e-12));
    }
    SUBCASE("call with r <= q brackets the strike from above") {
        const NearMaturityBounds b = near_maturity_bounds(call, constant_set(0.1, 0.2, 1.0), dx);
        REQUIRE(b.exists);
        CHECK(b.lower == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("degenerate cases have no bracket") {
        CHECK_FALSE(near_maturity_bounds(call, constant_set(0.1, 0.0, 1.0), dx).exists);
        CHECK_FALSE(near_maturity_bounds(put, constant_set(0.0, 0.1, 1.0), dx).exists);
    }
}

TEST_CASE("the extracted boundary at the last level sits inside its bracket") {
    const double dx = 0.05;
    struct Case {
        OptionSpec spec;
        CoefficientSet cs;
    };
    const Case cases[] = {
        {{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.5}, constant_set(0.1, 0.0, 1.0)},
        {{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.5}, constant_set(0.1, 0.2, 1.0)},
        {{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.5}, constant_set(0.2, 0.1, 1.0)},
        {{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.5}, constant_set(0.1, 0.2, 1.0)},
    };
    for (const Case& c : cases) {
        const GridSolution sol = solve_eds(c.spec, c.cs, dx, 1.0);
        const BoundaryExtraction b = extract_boundary_eds(sol);
        REQUIRE(b.outcome == BoundaryOutcome::present);
        const std::size_t last = sol.partition().step_count() - 1;
        REQUIRE(b.index_per_level[last].has_value());
        const double x_last = sol.log_price(*b.index_per_level[last]);
        const NearMaturityBounds bounds = near_maturity_bounds(c.spec, c.cs, dx);
        REQUIRE(bounds.exists);
        CHECK(x_last >= bounds.lower - 1e-12);
        CHECK(x_last <= bounds.upper + 1e-12);
    }
}

TEST_CASE("grid homogeneity is exact to rounding") {
    const CoefficientSet cs = constant_set(0.07, 0.03, 0.9);
    const OptionSpec spec{OptionKind::call, ExerciseStyle::american, 1.2, 1.0, 0.5};
    CHECK(eds_homogeneity_residual(spec, cs, 0.05, 1.0, 3.0) <= 1e-12);
    CHECK(eds_homogeneity_residual(spec, cs, 0.05, 0.75, 3.0) <= 1e-12);
}

TEST_CASE("the symmetry residual shrinks under refinement") {
    const CoefficientSet cs = constant_set(0.1, 0.2, 1.0);
    const OptionSpec call{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.5};
    double prev = 1e300;
    for (double dx : {0.08, 0.04, 0.02}) {
        const double res = eds_symmetry_residual(call, cs, dx, 1.0);
        CHECK(res < prev);
        prev = res;
    }

    // swap fixed point: S = E and r = q stays within the generic trend
    const CoefficientSet fixed_cs = constant_set(0.1, 0.1, 1.0);
    const OptionSpec fixed_call{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.5};
    const double generic = eds_symmetry_residual(call, cs, 0.04, 1.0);
    const double fixed = eds_symmetry_residual(fixed_call, fixed_cs, 0.04, 1.0);
    CHECK(fixed <= generic * 2.0 + 1e-12);
}

TEST_CASE("symmetry residual requires a call specification") {
    const CoefficientSet cs = constant_set(0.1, 0.2, 1.0);
    const OptionSpec put{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.5};
    CHECK_THROWS_AS(eds_symmetry_residual(put, cs, 0.05, 1.0), DomainError);
}

TEST_CASE("call values stay inside the weighted-norm unit ball") {
    const CoefficientSet cs = constant_set(0.1, 0.2, 1.0);
    const OptionSpec spec{OptionKind::call, ExerciseStyle::american, 1.0, 1.0, 0.5};
    EdsOptions opt;
    opt.keep_surface = true;
    const GridSolution sol = solve_eds(spec, cs, 0.05, 1.0, opt);
    for (std::size_t n = 0; n <= sol.partition().step_count(); ++n) {
        const double norm = weighted_sup_norm(sol.row(n), sol.dx(), sol.anchor(), sol.j_min());
        CHECK(std::isfinite(norm));
        CHECK(norm <= 1.0 + 1e-12);
    }
}

TEST_CASE("doubling the half width leaves the root price essentially unchanged") {
    const CoefficientSet cs = constant_set(0.1, 0.0, 1.0);
    const OptionSpec spec{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.5};
    EdsOptions narrow, wide;
    narrow.half_width_k = 6.0;
    wide.half_width_k = 12.0;
    const double a = solve_eds(spec, cs, 0.05, 1.0, narrow).root();
    const double b = solve_eds(spec, cs, 0.05, 1.0, wide).root();
    CHECK(std::abs(a - b) < 1e-10 * spec.strike);
}

TEST_CASE("the grid agrees with the triangular lattice at the root") {
    const CoefficientSet cs = constant_set(0.1, 0.0, 1.0);
    const OptionSpec spec{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.25};
    const double dx = 0.05;
    EdsOptions theta_opt;
    theta_opt.scheme = GridScheme::btm_theta;
    const GridSolution grid = solve_eds(spec, cs, dx, 1.0, theta_opt);
    const LatticeSolution tree = price_btm(spec, cs, std::exp(dx));
    CHECK(std::abs(grid.root() - tree.root()) < 1e-9);
}

TEST_CASE("option and grid preconditions are enforced") {
    const CoefficientSet cs = constant_set(0.1, 0.0, 1.0);
    const OptionSpec spec{OptionKind::put, ExerciseStyle::american, 1.0, 1.0, 0.25};
    EdsOptions opt;
    opt.half_width_k = 3.0;
    CHECK_THROWS_AS(solve_eds(spec, cs, 0.05, 1.0, opt), DomainError);
    CHECK_THROWS_AS(solve_eds(spec, cs, 0.05, 1.5), DomainError);
    EdsOptions theta_opt;
    theta_opt.scheme = GridScheme::btm_theta;
    CHECK_THROWS_AS(solve_eds(spec, cs, 0.05, 0.5, theta_opt), DomainError);
    const GridSolution lean = solve_eds(spec, cs, 0.05, 1.0);
    CHECK_THROWS_AS(lean.row(0), DomainError);
}
