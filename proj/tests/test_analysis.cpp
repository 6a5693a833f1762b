#include <doctest.h>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "gnde/analysis.hpp"
#include "gnde/experiment.hpp"
#include "gnde/graphon.hpp"
#include "gnde/sampling.hpp"

using namespace gnde;

namespace {

TrajectoryRecord constant_record(const std::vector<double>& values, std::size_t intervals = 4) {
    TrajectoryRecord r;
    r.times = eval_grid(1.0, intervals);
    for (std::size_t i = 0; i <= intervals; ++i) r.states.emplace_back(values.size(), 1, values);
    return r;
}

SolverConfig dp5_config(std::size_t intervals = 50) {
    SolverConfig c;
    c.method = SolverMethod::dp5;
    c.eval_intervals = intervals;
    return c;
}

struct System {
    FilterBank bank;
    FeatureFunctionSpec z;
    Activation act = Activation::tanh();
};

System random_system(Rng& rng) {
    return {FilterBank::random_constant(2, 1, 2, rng), FeatureFunctionSpec::random_fourier(1, 5, rng)};
}

TrajectoryRecord run(const GraphonSpec& spec, std::size_t n, const System& sys, double horizon,
                     const SolverConfig& cfg = dp5_config()) {
    const Matrix shift = graph_shift(sample_graph(spec, n));
    const FeatureMatrix x0 = sample_initial_features(spec, sys.z, n, 8);
    return integrate(shift, x0, sys.bank, sys.act, horizon, cfg);
}

BoundInputs inputs_for(const System& sys, double horizon, double x_sup) {
    BoundInputs inp;
    inp.features = 1;
    inp.taps = 2;
    inp.layers = 2;
    inp.horizon = horizon;
    inp.h_t = h_sup_certified(sys.bank);
    inp.a2 = sys.z.regularity_constant();
    inp.x_sup = x_sup;
    return inp;
}

}  // namespace

TEST_CASE("stability constants") {
    BoundInputs inp;
    inp.h_t = 1.0;
    auto c = stability_constants(inp);
    CHECK(c.p == doctest::Approx(std::numbers::e).epsilon(1e-15));
    inp.horizon = 0.0;
    inp.x_sup = 3.0;
    c = stability_constants(inp);
    CHECK(c.p == 1.0);
    CHECK(c.q == 0.0);
    BoundInputs two;
    two.taps = 2;
    two.layers = 2;
    two.h_t = 0.5;
    two.x_sup = 1.0;
    c = stability_constants(two);
    CHECK(c.p == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(c.q == doctest::Approx((std::numbers::e - 1.0) * 4.0).epsilon(1e-15));
    CHECK(c.q == doctest::Approx(6.87313).epsilon(1e-6));
    BoundInputs bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(stability_constants(bad), InvalidParameter);
    bad = BoundInputs{};
    bad.x_sup = -1.0;
    CHECK_THROWS_AS(stability_constants(bad), InvalidParameter);
}

TEST_CASE("weighted rate constant") {
    BoundInputs inp;
    inp.a1 = 1.0;
    inp.x_sup = 1.0;
    inp.horizon = 0.0;
    // L = K = 1, P = 1, A2 = 0: C equals the A1 radical.
    CHECK(rate_constant_weighted(inp) == doctest::Approx(std::sqrt(7.0 / 6.0)).epsilon(1e-15));
    CHECK(std::sqrt(7.0 / 6.0) == doctest::Approx(1.08012).epsilon(1e-5));
    inp.a1 = 0.0;
    inp.horizon = 1.0;
    inp.h_t = 0.7;
    CHECK(rate_constant_weighted(inp) == 0.0);
    BoundInputs unit;
    unit.horizon = 0.0;
    unit.a2 = std::sqrt(3.0);
    CHECK(rate_constant_weighted(unit) == doctest::Approx(1.0).epsilon(1e-15));
    BoundInputs half;
    half.alpha = 0.5;
    half.feature_alpha = 0.5;
    CHECK(weighted_exponent(half) == 0.5);
    half.feature_alpha = 1.0;
    CHECK(weighted_exponent(half) == 0.5);
}

TEST_CASE("unweighted rate constant and exponent") {
    BoundInputs inp;
    inp.box_dim = 1.0;
    inp.epsilon = 1e-9;
    CHECK(rate_constant_unweighted(inp).exponent == doctest::Approx(0.5).epsilon(1e-8));
    inp.box_dim = std::log(7.0) / std::log(3.0);
    inp.epsilon = 0.1;
    CHECK(rate_constant_unweighted(inp).exponent == doctest::Approx(1.0 - (inp.box_dim + 0.1) / 2.0));
    CHECK(std::abs(rate_constant_unweighted(inp).exponent - 0.0645) <= 5e-4);
    CHECK(rate_constant_unweighted(inp).constant == 0.0);
    inp.a2 = std::sqrt(3.0);
    inp.horizon = 0.0;
    inp.x_sup = 2.0;
    CHECK(rate_constant_unweighted(inp).constant == doctest::Approx(3.0));
    inp.epsilon = 0.3;
    CHECK_THROWS_AS(rate_constant_unweighted(inp), InvalidParameter);
    inp.epsilon = 0.0;
    CHECK_THROWS_AS(rate_constant_unweighted(inp), InvalidParameter);
    inp.box_dim = 2.0;
    inp.epsilon = 0.01;
    CHECK_THROWS_AS(rate_constant_unweighted(inp), InvalidParameter);
}

TEST_CASE("bounds decrease strictly in n") {
    BoundInputs inp;
    inp.a1 = 2.0;
    inp.a2 = 1.0;
    inp.x_sup = 0.5;
    const double c = rate_constant_weighted(inp);
    inp.box_dim = 1.5;
    const auto u = rate_constant_unweighted(inp);
    for (std::size_t n = 1; n < 4096; n *= 2) {
        CHECK(c * std::pow(n, -1.0) > c * std::pow(2.0 * n, -1.0));
        CHECK(u.constant * std::pow(n, -u.exponent) > u.constant * std::pow(2.0 * n, -u.exponent));
    }
}

TEST_CASE("trajectory error examples") {
    const auto ref = constant_record({1.0, 0.0});
    const auto self = trajectory_error(ref, ref);
    CHECK(self.relative == 0.0);
    CHECK(self.absolute == 0.0);
    const auto one = constant_record({1.0});
    CHECK(trajectory_sup_relative_error(one, ref) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(trajectory_error(one, ref).absolute == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(trajectory_error(one, ref).ref_sup == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(trajectory_sup_norm(ref) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(trajectory_sup_distance(one, ref) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    auto zero = constant_record({0.0, 0.0});
    zero.states[2] = Matrix(2, 1, 0.0);
    try {
        trajectory_error(one, zero);
        FAIL("expected DegenerateReference");
    } catch (const DegenerateReference& e) {
        CHECK(e.time() == 0.0);
    }
    CHECK_THROWS_AS(trajectory_error(one, constant_record({1.0}, 3)), DimensionError);
}

TEST_CASE("trajectory error on tent is within the weighted bound") {
    Rng rng(21);
    const auto spec = GraphonSpec::tent(1.0);
    const System sys = random_system(rng);
    const auto a = run(spec, 64, sys, 1.0);
    const auto b = run(spec, 128, sys, 1.0);
    BoundInputs inp = inputs_for(sys, 1.0, trajectory_sup_norm(b));
    inp.a1 = spec.holder()->a1;
    const double c = rate_constant_weighted(inp);
    CHECK(trajectory_error(a, b).absolute <= c / 64.0);
}

TEST_CASE("rate fit recovers planted power laws") {
    std::vector<std::pair<double, double>> rows{{100, 0.01}, {200, 0.005}, {400, 0.0025}};
    auto fit = fit_rate(rows);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(fit.stderr_slope < 1e-12);
    rows.clear();
    for (double n : {64.0, 128.0, 300.0, 1000.0}) rows.emplace_back(n, 3.0 / std::sqrt(n));
    fit = fit_rate(rows);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.stderr_slope < 1e-12);
    rows.clear();
    for (double n : {10.0, 20.0, 40.0}) rows.emplace_back(n, 0.2);
    CHECK(std::abs(fit_rate(rows).slope) < 1e-14);

    const std::vector<std::pair<double, double>> two{{10, 1}, {20, 0.5}};
    CHECK_THROWS_AS(fit_rate(two), InsufficientData);
    const std::vector<std::pair<double, double>> zero{{10, 1}, {20, 0.0}, {40, 0.25}};
    CHECK_THROWS_AS(fit_rate(zero), LogDomainError);
    const std::vector<std::pair<double, double>> negative{{10, 1}, {20, -0.5}, {40, 0.25}};
    CHECK_THROWS_AS(fit_rate(negative), LogDomainError);
}

TEST_CASE("mean and sample standard deviation") {
    const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
    const auto ms = mean_std(v);
    CHECK(ms.mean == 5.0);
    CHECK(ms.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)));
    const std::vector<double> single{3.5};
    CHECK(mean_std(single).stddev == 0.0);
    CHECK_THROWS_AS(mean_std(std::vector<double>{}), InsufficientData);
}

TEST_CASE("stability bound check") {
    Rng rng(22);
    const auto spec = GraphonSpec::tent(1.0);
    const System sys = random_system(rng);
    const auto ref = run(spec, 64, sys, 1.0);
    const auto same = stability_bound_check(ref, ref, 0.0, 0.0, 2.0, 3.0);
    CHECK(same.holds);
    CHECK(same.margin == same.bound);
    CHECK(same.margin == 0.0);

    System quiet = sys;
    quiet.z = FeatureFunctionSpec::constant({0.0});
    const auto z1 = run(spec, 16, quiet, 1.0);
    const auto z2 = run(spec, 32, quiet, 1.0);
    const auto zero = stability_bound_check(z1, z2, 0.3, 0.0, 2.0, 1.5);
    CHECK(zero.measured == 0.0);
    CHECK(zero.margin == doctest::Approx(0.45));

    // n = 64 against n_ref = 1024 with the Hilbert-Schmidt kernel gap.
    const auto fine = run(spec, 1024, sys, 1.0);
    const auto inp = inputs_for(sys, 1.0, trajectory_sup_norm(fine));
    const auto pq = stability_constants(inp);
    const double kernel_gap =
        kernel_distance(induce_kernel(sample_graph(spec, 64)), induce_kernel(sample_graph(spec, 1024)), Norm::L2);
    const double feature_gap = overlay_l2_distance(induce_features(ref.states.front()),
                                                   induce_features(fine.states.front()));
    const auto check = stability_bound_check(ref, fine, kernel_gap, feature_gap, pq.p, pq.q);
    CHECK(check.holds);
    CHECK(check.margin > 0.0);
    CHECK(check.measured > 0.0);
}

TEST_CASE("transferability gap check") {
    Rng rng(23);
    const auto spec = GraphonSpec::tent(1.0);
    const System sys = random_system(rng);
    const auto a = run(spec, 64, sys, 1.0);
    const auto same = transferability_gap_check(a, 64, a, 64, 1.0, 1.0);
    CHECK(same.measured == 0.0);
    CHECK(same.holds);

    const auto b = run(spec, 256, sys, 1.0);
    const auto ref = run(spec, 1024, sys, 1.0);
    BoundInputs inp = inputs_for(sys, 1.0, trajectory_sup_norm(ref));
    inp.a1 = spec.holder()->a1;
    const auto check = transferability_gap_check(a, 64, b, 256, rate_constant_weighted(inp), weighted_exponent(inp));
    CHECK(check.holds);
    CHECK(check.margin > 0.0);

    // No roughness anywhere: a constant kernel and constant features.
    System flat = sys;
    flat.z = FeatureFunctionSpec::constant({0.5});
    auto constant_run = [&](std::size_t n) {
        const SampledGraph g(Matrix(n, n, 1.0), ValueClass::binary);
        return integrate(graph_shift(g), Matrix(n, 1, 0.5), flat.bank, flat.act, 1.0, dp5_config());
    };
    BoundInputs none = inputs_for(flat, 1.0, 0.0);
    CHECK(none.a2 == 0.0);
    const double c = rate_constant_weighted(none);
    CHECK(c == 0.0);
    const auto degenerate = transferability_gap_check(constant_run(64), 64, constant_run(256), 256, c, 1.0, 1e-14);
    CHECK(degenerate.bound == 0.0);
    CHECK(degenerate.measured <= 1e-14);
    CHECK(degenerate.holds);
    CHECK_THROWS_AS(transferability_gap_check(a, 0, a, 64, 1.0, 1.0), InvalidParameter);
}
