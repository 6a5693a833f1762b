#include <doctest.h>

#include <cmath>
#include <vector>

#include "gnde/piecewise.hpp"
#include "gnde/random.hpp"

using namespace gnde;

namespace {

PiecewiseFunction step(std::vector<double> values) {
    const std::size_t n = values.size();
    return PiecewiseFunction::uniform(Matrix(n, 1, std::move(values)));
}

// Oracle: midpoint sum on a grid fine enough to resolve both partitions exactly.
double brute_distance(const PiecewiseFunction& a, const PiecewiseFunction& b, int m) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        const double u = (i + 0.5) / m;
        for (std::size_t f = 0; f < a.features(); ++f) {
            const double d = a(u, f) - b(u, f);
            s += d * d;
        }
    }
    return std::sqrt(s / m);
}

PiecewiseFunction random_step(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    return step(std::move(v));
}

}  // namespace

TEST_CASE("overlay distance examples") {
    CHECK(overlay_l2_distance(step({1, 1}), step({1, 1, 1})) == 0.0);
    CHECK(overlay_l2_distance(step({1}), step({1, 0})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    const auto f = step({0.3, -1.7, 2.25});
    CHECK(overlay_l2_distance(f, f) == 0.0);
}

TEST_CASE("overlay distance matches a brute-force oracle") {
    Rng rng(7);
    for (std::size_t a : {1, 2, 3, 5, 6}) {
        for (std::size_t b : {2, 3, 4, 10}) {
            const auto fa = random_step(rng, a);
            const auto fb = random_step(rng, b);
            // 600 is divisible by every size above, so midpoints never straddle a breakpoint.
            CHECK(overlay_l2_distance(fa, fb) == doctest::Approx(brute_distance(fa, fb, 600)).epsilon(1e-12));
        }
    }
}

TEST_CASE("overlay metric axioms on random triples") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_step(rng, 1 + rng.below(9));
        const auto g = random_step(rng, 1 + rng.below(9));
        const auto h = random_step(rng, 1 + rng.below(9));
        const double fg = overlay_l2_distance(f, g);
        CHECK(std::abs(fg - overlay_l2_distance(g, f)) <= 1e-12);
        CHECK(overlay_l2_distance(f, h) <= fg + overlay_l2_distance(g, h) + 1e-12);
        CHECK(fg >= 0.0);
    }
}

TEST_CASE("overlay distance rejects mismatched channels") {
    const auto a = PiecewiseFunction::uniform(Matrix(2, 1, 1.0));
    const auto b = PiecewiseFunction::uniform(Matrix(2, 2, 1.0));
    CHECK_THROWS_AS(overlay_l2_distance(a, b), DimensionError);
}

TEST_CASE("kernel distance on step kernels") {
    const auto diag = PiecewiseKernel::uniform(Matrix(2, 2, std::vector<double>{1, 0, 0, 1}));
    const auto one = PiecewiseKernel::constant(1.0);
    CHECK(kernel_distance(diag, one, Norm::L2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(kernel_distance(diag, one, Norm::L1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(kernel_distance(one, PiecewiseKernel::constant(0.0), Norm::L2) == doctest::Approx(1.0));
    CHECK(kernel_distance(diag, diag, Norm::L2) == 0.0);
    CHECK(l2_norm(diag) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("kernel norm ordering on random step kernels") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto make = [&](std::size_t n) {
            Matrix m(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform();
            }
            return PiecewiseKernel::uniform(std::move(m));
        };
        const auto a = make(1 + rng.below(6));
        const auto b = make(1 + rng.below(6));
        CHECK(kernel_distance(a, b, Norm::L1) <= kernel_distance(a, b, Norm::L2) + 1e-15);
    }
}

TEST_CASE("overlay partition merges breakpoints") {
    const auto a = uniform_breakpoints(2);
    const auto b = uniform_breakpoints(3);
    const auto pieces = overlay_partition(a, b);
    REQUIRE(pieces.size() == 4);
    double total = 0.0;
    for (const auto& p : pieces) total += p.length;
    CHECK(total == doctest::Approx(1.0));
    CHECK(pieces[1].left == 0);
    CHECK(pieces[1].right == 1);
    CHECK(pieces[2].left == 1);
}

TEST_CASE("step function evaluation uses half-open intervals") {
    const auto f = step({1, 2, 3, 4});
    CHECK(f(0.0, 0) == 1.0);
    CHECK(f(0.25, 0) == 2.0);
    CHECK(f(0.999, 0) == 4.0);
    CHECK(f(1.0, 0) == 4.0);
}
