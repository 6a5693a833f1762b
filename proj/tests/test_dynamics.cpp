#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "gnde/dynamics.hpp"
#include "gnde/graphon.hpp"
#include "gnde/sampling.hpp"

using namespace gnde;

namespace {

struct Preset {
    Matrix shift;
    Matrix z;
    FilterBank bank;
    Activation act;
};

Preset scalar_linear(double h0, double z0) {
    return {Matrix(1, 1, 1.0), Matrix(1, 1, z0), FilterBank::constant(1, 1, 1, {h0}), Activation::identity()};
}

Preset random_preset(Rng& rng, std::size_t n, std::size_t features = 1) {
    const auto shift = graph_shift(sample_weighted(GraphonSpec::tent(1.0), n));
    const auto z = sample_features_pointwise(FeatureFunctionSpec::random_fourier(features, 5, rng), n);
    return {shift, z, FilterBank::random_constant(2, features, 2, rng), Activation::tanh()};
}

SolverConfig config(SolverMethod m, std::size_t intervals = 100) {
    SolverConfig c;
    c.method = m;
    c.eval_intervals = intervals;
    return c;
}

double sup_scaled_difference(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) worst = std::max(worst, scaled_distance(a.states[i], b.states[i]));
    return worst;
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    return perm;
}

}  // namespace

TEST_CASE("rhs examples") {
    Rng rng(1);
    const auto p = random_preset(rng, 6);
    CHECK(rhs(p.shift, Matrix(6, 1), p.bank, p.act, 0.3) == Matrix(6, 1));
    const auto s = scalar_linear(-0.75, 2.0);
    CHECK(rhs(s.shift, s.z, s.bank, s.act, 0.0)(0, 0) == -1.5);
    const auto id = FilterBank::constant(1, 1, 1, {1.0});
    const auto d = rhs(p.shift, p.z, id, Activation::tanh(), 0.0);
    for (std::size_t i = 0; i < 6; ++i) CHECK(d(i, 0) == std::tanh(p.z(i, 0)));
}

TEST_CASE("scalar linear case reproduces e") {
    const auto p = scalar_linear(1.0, 1.0);
    for (auto m : {SolverMethod::rk4, SolverMethod::dp5}) {
        const auto traj = solve(p.shift, p.z, p.bank, p.act, 1.0, config(m));
        CHECK(std::abs(traj.states.back()(0, 0) - std::numbers::e) <= 1e-6);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            CHECK(std::abs(traj.states[i](0, 0) - std::exp(traj.times[i])) <= 1e-6);
        }
    }
    const auto pic = picard_solve(p.shift, p.z, p.bank, p.act, 1.0, config(SolverMethod::picard));
    CHECK(std::abs(pic.states.back()(0, 0) - std::numbers::e) <= 5e-6);
}

TEST_CASE("zero initial features stay exactly zero") {
    Rng rng(2);
    auto p = random_preset(rng, 8);
    p.z = Matrix(8, 1);
    for (auto m : {SolverMethod::rk4, SolverMethod::dp5, SolverMethod::picard}) {
        const auto traj = solve(p.shift, p.z, p.bank, p.act, 0.5, config(m, 20));
        for (const auto& x : traj.states) CHECK(x == Matrix(8, 1));
    }
    // With tau >= T there is a single chunk and the first sweep is already a fixed point.
    const auto small = FilterBank::constant(1, 1, 1, {0.1});
    const auto pic = picard_solve(p.shift, p.z, small, p.act, 0.5, config(SolverMethod::picard, 20));
    CHECK(pic.meta.iterations == 1);
}

TEST_CASE("trajectory grid and initial state") {
    Rng rng(3);
    const auto p = random_preset(rng, 5, 2);
    const auto traj = integrate(p.shift, p.z, p.bank, p.act, 0.8, config(SolverMethod::dp5, 40));
    REQUIRE(traj.times.size() == 41);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 0.8);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.states.front() == p.z);
    CHECK(traj.nodes() == 5);
    CHECK(traj.features() == 2);
    CHECK(traj.meta.method == "dp5");
    CHECK(traj.meta.accepted > 0);
}

TEST_CASE("rk4 is fourth order") {
    const auto p = scalar_linear(1.0, 1.0);
    auto endpoint_error = [&](double h) {
        SolverConfig c = config(SolverMethod::rk4, 1);
        c.rk4.step = h;
        return std::abs(integrate(p.shift, p.z, p.bank, p.act, 1.0, c).states.back()(0, 0) - std::numbers::e);
    };
    for (double h : {0.2, 0.1, 0.05}) {
        const double ratio = endpoint_error(h) / endpoint_error(h / 2);
        CHECK(ratio >= 12.0);
        CHECK(ratio <= 20.0);
    }
}

TEST_CASE("rk4 and dp5 agree on a random preset") {
    Rng rng(4);
    const auto p = random_preset(rng, 16);
    const auto a = integrate(p.shift, p.z, p.bank, p.act, 1.0, config(SolverMethod::rk4));
    const auto b = integrate(p.shift, p.z, p.bank, p.act, 1.0, config(SolverMethod::dp5));
    CHECK(sup_scaled_difference(a, b) <= 1e-6);
}

TEST_CASE("picard agrees with rk4 at oracle scale") {
    Rng rng(5);
    for (int trial = 0; trial < 3; ++trial) {
        const auto p = random_preset(rng, 20);
        const auto a = integrate(p.shift, p.z, p.bank, p.act, 0.5, config(SolverMethod::rk4, 50));
        const auto b = picard_solve(p.shift, p.z, p.bank, p.act, 0.5, config(SolverMethod::picard, 50));
        CHECK(sup_scaled_difference(a, b) <= 1e-6);
    }
}

TEST_CASE("dense output is consistent across evaluation grids") {
    Rng rng(6);
    const auto p = random_preset(rng, 12);
    const auto coarse = integrate(p.shift, p.z, p.bank, p.act, 1.0, config(SolverMethod::dp5, 100));
    const auto fine = integrate(p.shift, p.z, p.bank, p.act, 1.0, config(SolverMethod::dp5, 200));
    for (std::size_t i = 0; i < coarse.states.size(); ++i) {
        CHECK(fine.times[2 * i] == doctest::Approx(coarse.times[i]).epsilon(1e-15));
        CHECK(scaled_distance(coarse.states[i], fine.states[2 * i]) <= 1e-6);
    }
}

TEST_CASE("fourier-law filters integrate consistently") {
    Rng rng(7);
    auto p = random_preset(rng, 10);
    p.bank = FilterBank::random_fourier(2, 1, 2, 2, 0.5, 0.3, rng);
    // The dense-output interpolant between large steps needs a tighter tolerance here.
    SolverConfig tight = config(SolverMethod::dp5, 25);
    tight.dp5.atol = tight.dp5.rtol = 1e-9;
    const auto a = integrate(p.shift, p.z, p.bank, p.act, 0.5, config(SolverMethod::rk4, 25));
    const auto b = integrate(p.shift, p.z, p.bank, p.act, 0.5, tight);
    const auto c = picard_solve(p.shift, p.z, p.bank, p.act, 0.5, config(SolverMethod::picard, 25));
    CHECK(sup_scaled_difference(a, b) <= 1e-6);
    CHECK(sup_scaled_difference(a, c) <= 1e-6);
}

TEST_CASE("equivariance") {
    Rng rng(8);
    const auto s = scalar_linear(0.7, 1.3);
    const auto cfg = config(SolverMethod::dp5);
    CHECK(equivariance_check(s.shift, s.z, s.bank, s.act, 1.0, cfg, {0}) == 0.0);
    const auto p = random_preset(rng, 32);
    std::vector<std::size_t> identity(32);
    std::iota(identity.begin(), identity.end(), 0);
    CHECK(equivariance_check(p.shift, p.z, p.bank, p.act, 1.0, cfg, identity) == 0.0);
    std::vector<std::size_t> reversal(identity.rbegin(), identity.rend());
    SolverConfig tight = cfg;
    tight.dp5.atol = tight.dp5.rtol = 1e-9;
    CHECK(equivariance_check(p.shift, p.z, p.bank, p.act, 1.0, tight, reversal) <= 1e-7);
    for (int trial = 0; trial < 20; ++trial) {
        CHECK(equivariance_check(p.shift, p.z, p.bank, p.act, 1.0, tight, random_permutation(rng, 32)) <= 1e-8);
    }
    CHECK_THROWS_AS(equivariance_check(p.shift, p.z, p.bank, p.act, 1.0, cfg, {0, 0}), DimensionError);
    CHECK_THROWS_AS(equivariance_check(p.shift, p.z, p.bank, p.act, 1.0, cfg, std::vector<std::size_t>(32, 0)),
                    InvalidParameter);
}

TEST_CASE("permutation helpers") {
    const Matrix x(3, 1, std::vector<double>{10, 20, 30});
    CHECK(permute_rows(x, {2, 0, 1}) == Matrix(3, 1, std::vector<double>{30, 10, 20}));
    const Matrix s(2, 2, std::vector<double>{1, 2, 2, 3});
    CHECK(permute_symmetric(s, {1, 0}) == Matrix(2, 2, std::vector<double>{3, 2, 2, 1}));
}

TEST_CASE("solver failures are reported") {
    const auto p = scalar_linear(1.0, 1.0);
    SolverConfig starved = config(SolverMethod::dp5);
    starved.dp5.max_steps = 3;
    CHECK_THROWS_AS(integrate(p.shift, p.z, p.bank, p.act, 1.0, starved), NonconvergenceError);
    const auto blowup = scalar_linear(2000.0, 1.0);
    CHECK_THROWS_AS(integrate(blowup.shift, blowup.z, blowup.bank, blowup.act, 1.0, config(SolverMethod::dp5)),
                    DivergenceError);
    SolverConfig few = config(SolverMethod::picard);
    few.picard.max_iterations = 2;
    CHECK_THROWS_AS(picard_solve(p.shift, p.z, p.bank, p.act, 1.0, few), NonconvergenceError);
    CHECK_THROWS_AS(integrate(p.shift, p.z, p.bank, p.act, 1.0, config(SolverMethod::picard)), UnsupportedOperation);
    CHECK_THROWS_AS(picard_solve(p.shift, p.z, p.bank, p.act, 3.0, config(SolverMethod::picard)), ComplexityGuard);
    Rng rng(9);
    const auto big = random_preset(rng, 65);
    CHECK_THROWS_AS(picard_solve(big.shift, big.z, big.bank, big.act, 0.5, config(SolverMethod::picard)), ComplexityGuard);
}

TEST_CASE("solver configuration validation") {
    SolverConfig c;
    c.eval_intervals = 0;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = SolverConfig{};
    c.dp5.atol = -1.0;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = SolverConfig{};
    c.rk4.step = -0.1;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    CHECK(parse_solver_method("rk4") == SolverMethod::rk4);
    CHECK_THROWS_AS(parse_solver_method("euler"), InvalidParameter);
    CHECK(eval_grid(2.0, 4) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}
