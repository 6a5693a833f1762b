#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gnde/graphon.hpp"
#include "gnde/sampling.hpp"

using namespace gnde;

namespace {

FeatureFunctionSpec cosine_feature() {
    return FeatureFunctionSpec::fourier(Matrix(1, 1, 1.0), Matrix(1, 1, 0.0));
}

FeatureFunctionSpec identity_feature() { return FeatureFunctionSpec::linear({0.0}, {1.0}); }

double column_value(const FeatureMatrix& x, std::size_t i) { return x(i, 0); }

}  // namespace

TEST_CASE("weighted sampling examples") {
    const auto g = sample_weighted(GraphonSpec::tent(1.0), 2);
    CHECK(g.adjacency() == Matrix(2, 2, std::vector<double>{1, 0.5, 0.5, 1}));
    const auto h = sample_weighted(GraphonSpec::tent(0.5), 2);
    CHECK(h.adjacency()(0, 1) == doctest::Approx(1.0 - std::sqrt(0.5)));
    CHECK(h.adjacency()(0, 0) == 1.0);
    const auto osc = GraphonSpec::oscillatory(10);
    CHECK(sample_weighted(osc, 1).adjacency()(0, 0) == osc(0.0, 0.0));
    CHECK_THROWS_AS(sample_weighted(make_graphon("checkerboard"), 4), WrongRegime);
}

TEST_CASE("unweighted sampling examples") {
    CHECK(sample_unweighted(GraphonSpec::checkerboard(2), 2).adjacency() ==
          Matrix(2, 2, std::vector<double>{1, 0, 0, 1}));
    std::array<bool, 9> keep;
    keep.fill(true);
    const auto full = GraphonSpec::triadic_carpet(keep, 3);
    for (std::size_t n : {1, 5, 17}) CHECK(sample_unweighted(full, n).adjacency() == Matrix(n, n, 1.0));
    for (const auto& name : catalog_names()) {
        const auto spec = make_graphon(name);
        if (spec.value_class() == ValueClass::binary) {
            CHECK(sample_unweighted(spec, 1).adjacency() == Matrix(1, 1, 1.0));
        }
    }
    CHECK_THROWS_AS(sample_unweighted(GraphonSpec::tent(1.0), 4), WrongRegime);
}

TEST_CASE("regime consistency") {
    for (const auto& name : catalog_names()) {
        const auto spec = make_graphon(name);
        for (std::size_t n : {7, 64, 100}) {
            const auto g = spec.value_class() == ValueClass::binary ? sample_unweighted(spec, n)
                                                                   : sample_weighted(spec, n);
            for (double w : g.adjacency().data()) {
                if (spec.value_class() == ValueClass::binary) {
                    CHECK((w == 0.0 || w == 1.0));
                } else {
                    CHECK((w >= 0.0 && w <= 1.0));
                }
            }
        }
    }
}

TEST_CASE("sampled graph validation") {
    CHECK_THROWS_AS(SampledGraph(Matrix(2, 2, std::vector<double>{1, 0.2, 0.3, 1}), ValueClass::weighted),
                    InvalidParameter);
    CHECK_THROWS_AS(SampledGraph(Matrix(1, 1, 0.5), ValueClass::binary), InvalidParameter);
    CHECK_THROWS_AS(SampledGraph(Matrix(1, 1, 1.5), ValueClass::weighted), InvalidParameter);
    CHECK_THROWS_AS(SampledGraph(Matrix(2, 3), ValueClass::weighted), DimensionError);
}

TEST_CASE("pointwise feature examples") {
    const auto lin = sample_features_pointwise(identity_feature(), 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(column_value(lin, i) == 0.25 * static_cast<double>(i));
    const auto c = sample_features_pointwise(FeatureFunctionSpec::constant({2.5, -1.0}), 3);
    CHECK(c == Matrix(3, 2, std::vector<double>{2.5, -1, 2.5, -1, 2.5, -1}));
    const auto cosine = sample_features_pointwise(cosine_feature(), 2);
    CHECK(cosine(0, 0) == doctest::Approx(1.0));
    CHECK(cosine(1, 0) == doctest::Approx(-1.0));
}

TEST_CASE("cell-average feature examples") {
    const auto lin = sample_features_cell_average(identity_feature(), 2, 2);
    CHECK(lin(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(lin(1, 0) == doctest::Approx(0.75).epsilon(1e-15));
    const auto c = sample_features_cell_average(FeatureFunctionSpec::constant({3.0}), 5, 1);
    for (std::size_t i = 0; i < 5; ++i) CHECK(c(i, 0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(sample_features_cell_average(cosine_feature(), 1, 8)(0, 0)) <= 1e-12);
}

TEST_CASE("cell averages match closed-form Fourier integrals") {
    // Oracle: exact antiderivative of cos and sin over each cell.
    Matrix a(1, 3, std::vector<double>{0.3, -0.8, 0.5});
    Matrix b(1, 3, std::vector<double>{-0.2, 0.9, 0.1});
    const auto z = FeatureFunctionSpec::fourier(a, b);
    const std::size_t n = 7;
    const auto x = sample_features_cell_average(z, n, 8);
    const double pi2 = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
        const double u0 = static_cast<double>(i) / n, u1 = static_cast<double>(i + 1) / n;
        double mean = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double w = pi2 * static_cast<double>(k + 1);
            mean += a(0, k) * (std::sin(w * u1) - std::sin(w * u0)) / w;
            mean -= b(0, k) * (std::cos(w * u1) - std::cos(w * u0)) / w;
        }
        CHECK(x(i, 0) == doctest::Approx(mean * static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    for (std::size_t q : {1, 2, 3, 5, 8}) {
        const auto rule = gauss_legendre(q);
        REQUIRE(rule.nodes.size() == q);
        for (std::size_t p = 0; p < 2 * q; ++p) {
            double s = 0.0;
            for (std::size_t i = 0; i < q; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], static_cast<double>(p));
            const double exact = p % 2 ? 0.0 : 2.0 / static_cast<double>(p + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("best constant approximation") {
    const auto z = identity_feature();
    for (std::size_t n : {1, 2, 4, 8, 16}) {
        // Oracle: both features are step functions and Z(u)=u, so the L2 error has a closed
        // form per cell: int (u - c)^2 over [u0, u1).
        auto err = [&](const FeatureMatrix& x) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double u0 = static_cast<double>(i) / n, u1 = static_cast<double>(i + 1) / n;
                const double c = x(i, 0);
                s += (std::pow(u1 - c, 3) - std::pow(u0 - c, 3)) / 3.0;
            }
            return std::sqrt(s);
        };
        CHECK(err(sample_features_cell_average(z, n, 8)) <= err(sample_features_pointwise(z, n)));
    }
}

TEST_CASE("graph shift examples") {
    const SampledGraph g(Matrix(2, 2, std::vector<double>{1, 0.5, 0.5, 1}), ValueClass::weighted);
    CHECK(graph_shift(g) == Matrix(2, 2, std::vector<double>{0.5, 0.25, 0.25, 0.5}));
    CHECK(graph_shift(SampledGraph(Matrix(3, 3), ValueClass::weighted)) == Matrix(3, 3));
    CHECK(graph_shift(SampledGraph(Matrix(4, 4, 1.0), ValueClass::binary)) == Matrix(4, 4, 0.25));
}

TEST_CASE("induced kernel and features") {
    const auto one = induce_kernel(SampledGraph(Matrix(1, 1, 1.0), ValueClass::binary));
    CHECK(one(0.3, 0.9) == 1.0);
    const auto diag = induce_kernel(SampledGraph(Matrix(2, 2, std::vector<double>{1, 0, 0, 1}), ValueClass::binary));
    CHECK(diag(0.2, 0.3) == 1.0);
    CHECK(diag(0.7, 0.6) == 1.0);
    CHECK(diag(0.2, 0.6) == 0.0);
    const FeatureMatrix x(3, 1, std::vector<double>{4, 5, 6});
    const auto f = induce_features(x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(f((i + 0.5) / 3.0, 0) == x(i, 0));
    const auto s = induce_features(FeatureMatrix(2, 1, std::vector<double>{1, 0}));
    CHECK(s(0.25, 0) == 1.0);
    CHECK(s(0.75, 0) == 0.0);
}

TEST_CASE("tent sampling-rate certificate") {
    for (double alpha : {1.0, 0.5}) {
        const auto spec = GraphonSpec::tent(alpha);
        const double radical = std::sqrt((std::pow(2.0, 2 * alpha + 2) - 2.0) / ((2 * alpha + 1) * (2 * alpha + 2)));
        for (std::size_t n : {4, 8, 16, 32}) {
            const auto k = induce_kernel(sample_weighted(spec, n));
            const double d = kernel_distance(k, spec, Norm::L2, 2048);
            CHECK(d <= radical * std::pow(static_cast<double>(n), -alpha));
        }
    }
}

TEST_CASE("tent refinement consistency") {
    for (double alpha : {1.0, 0.5}) {
        const auto spec = GraphonSpec::tent(alpha);
        for (std::size_t n : {8, 16, 32, 64}) {
            const auto a = induce_kernel(sample_weighted(spec, n));
            const auto b = induce_kernel(sample_weighted(spec, 2 * n));
            const double bound = std::pow(2.0 / n, alpha) + std::pow(2.0 / (2.0 * n), alpha);
            CHECK(kernel_distance(a, b, Norm::L2) <= bound);
        }
    }
}

TEST_CASE("sampled hom density approaches the graphon value") {
    const auto spec = GraphonSpec::tent(1.0);
    const auto g = sample_weighted(spec, 64);
    CHECK(std::abs(hom_density_graph(Motif::edge(), g) - 2.0 / 3.0) <= 0.02);
}

TEST_CASE("feature regularity constants") {
    const auto z = FeatureFunctionSpec::fourier(Matrix(1, 2, std::vector<double>{1.0, 0.5}),
                                               Matrix(1, 2, std::vector<double>{0.0, -0.25}));
    const double a2 = 2.0 * std::numbers::pi * (1.0 + 2.0 * 0.75);
    CHECK(*z.lipschitz_constant() == doctest::Approx(a2));
    Rng rng(13);
    const auto h = FeatureFunctionSpec::random_holder(1, 10, rng);
    CHECK_FALSE(h.lipschitz_constant());
    CHECK(h.holder_exponent() == 0.5);
    const double c = h.holder_half_constant();
    // Sampled Hoelder-1/2 quotients stay below the certified constant.
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform(), v = rng.uniform();
        if (u == v) continue;
        CHECK(std::abs(h(u, 0) - h(v, 0)) <= c * std::sqrt(std::abs(u - v)) + 1e-12);
    }
    for (std::size_t k = 0; k < 10; ++k) {
        const double b = h.b()(0, 0);
        CHECK((b >= 3.0 && b <= 10.0));
        CHECK(h.b()(0, k) == doctest::Approx(std::pow(b, static_cast<double>(k + 1))));
        CHECK(h.a()(0, k) == doctest::Approx(std::pow(b, -0.5 * static_cast<double>(k + 1))));
    }
}

TEST_CASE("non-finite features are rejected") {
    FeatureMatrix x(2, 1, 0.0);
    x(1, 0) = std::nan("");
    CHECK_THROWS_AS(check_finite(x), DimensionError);
}
