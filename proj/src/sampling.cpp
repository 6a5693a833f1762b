#include "gnde/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "gnde/errors.hpp"

namespace gnde {

void check_finite(const FeatureMatrix& x) {
    for (double v : x.data()) {
        if (!std::isfinite(v)) throw DimensionError("feature matrix contains a non-finite entry");
    }
}

SampledGraph::SampledGraph(Matrix adjacency, ValueClass value_class)
    : adjacency_(std::move(adjacency)), value_class_(value_class) {
    const std::size_t n = adjacency_.rows();
    if (n == 0 || adjacency_.cols() != n) {
        throw DimensionError("adjacency must be a nonempty square matrix");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double w = adjacency_(i, j);
            if (w != adjacency_(j, i)) throw InvalidParameter("adjacency must be symmetric");
            if (value_class_ == ValueClass::binary) {
                if (w != 0.0 && w != 1.0) {
                    throw InvalidParameter("unweighted adjacency entries must be 0 or 1");
                }
            } else if (!(w >= 0.0 && w <= 1.0)) {
                throw InvalidParameter("weighted adjacency entries must lie in [0,1]");
            }
        }
    }
}

// ---- feature functions --------------------------------------------------------

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::fourier_polynomial: return "fourier";
        case FeatureKind::holder_cosine: return "holder";
        case FeatureKind::constant: return "constant";
        case FeatureKind::linear: return "linear";
    }
    return "unknown";
}

FeatureFunctionSpec::FeatureFunctionSpec(FeatureKind kind, Matrix a, Matrix b)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() == 0 || a_.cols() == 0) {
        throw InvalidParameter("feature function needs at least one channel and one term");
    }
    if (b_.rows() != a_.rows() || b_.cols() != a_.cols()) {
        throw DimensionError("feature coefficient arrays must have equal shape");
    }
    check_finite(a_);
    check_finite(b_);
}

FeatureFunctionSpec FeatureFunctionSpec::fourier(Matrix a, Matrix b) {
    return FeatureFunctionSpec(FeatureKind::fourier_polynomial, std::move(a), std::move(b));
}

FeatureFunctionSpec FeatureFunctionSpec::holder_cosine(Matrix amplitudes, Matrix frequencies) {
    return FeatureFunctionSpec(FeatureKind::holder_cosine, std::move(amplitudes),
                               std::move(frequencies));
}

FeatureFunctionSpec FeatureFunctionSpec::constant(std::vector<double> values) {
    const std::size_t f = values.size();
    return FeatureFunctionSpec(FeatureKind::constant, Matrix(f, 1, std::move(values)),
                               Matrix(f, 1));
}

FeatureFunctionSpec FeatureFunctionSpec::linear(std::vector<double> intercept,
                                                std::vector<double> slope) {
    if (intercept.size() != slope.size()) {
        throw DimensionError("linear feature needs one slope per intercept");
    }
    const std::size_t f = intercept.size();
    Matrix a(f, 2);
    for (std::size_t i = 0; i < f; ++i) {
        a(i, 0) = intercept[i];
        a(i, 1) = slope[i];
    }
    return FeatureFunctionSpec(FeatureKind::linear, std::move(a), Matrix(f, 2));
}

FeatureFunctionSpec FeatureFunctionSpec::random_fourier(std::size_t features, std::size_t degree,
                                                        Rng& rng) {
    Matrix a(features, degree);
    Matrix b(features, degree);
    for (std::size_t f = 0; f < features; ++f) {
        for (std::size_t k = 0; k < degree; ++k) {
            a(f, k) = rng.uniform(-1.0, 1.0);
            b(f, k) = rng.uniform(-1.0, 1.0);
        }
    }
    return fourier(std::move(a), std::move(b));
}

FeatureFunctionSpec FeatureFunctionSpec::random_holder(std::size_t features, std::size_t degree,
                                                       Rng& rng) {
    Matrix amp(features, degree);
    Matrix freq(features, degree);
    for (std::size_t f = 0; f < features; ++f) {
        const double base = rng.uniform(3.0, 10.0);
        const double decay = 1.0 / std::sqrt(base);
        for (std::size_t k = 0; k < degree; ++k) {
            amp(f, k) = std::pow(decay, static_cast<double>(k + 1));
            freq(f, k) = std::pow(base, static_cast<double>(k + 1));
        }
    }
    return holder_cosine(std::move(amp), std::move(freq));
}

double FeatureFunctionSpec::operator()(double u, std::size_t f) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (kind_) {
        case FeatureKind::fourier_polynomial: {
            double s = 0.0;
            for (std::size_t k = 0; k < a_.cols(); ++k) {
                const double w = two_pi * static_cast<double>(k + 1) * u;
                s += a_(f, k) * std::cos(w) + b_(f, k) * std::sin(w);
            }
            return s;
        }
        case FeatureKind::holder_cosine: {
            double s = 0.0;
            for (std::size_t k = 0; k < a_.cols(); ++k) {
                s += a_(f, k) * std::cos(two_pi * b_(f, k) * u);
            }
            return s;
        }
        case FeatureKind::constant:
            return a_(f, 0);
        case FeatureKind::linear:
            return a_(f, 0) + a_(f, 1) * u;
    }
    return 0.0;
}

std::optional<double> FeatureFunctionSpec::lipschitz_constant() const {
    double best = 0.0;
    for (std::size_t f = 0; f < a_.rows(); ++f) {
        double c = 0.0;
        switch (kind_) {
            case FeatureKind::fourier_polynomial:
                for (std::size_t k = 0; k < a_.cols(); ++k) {
                    c += 2.0 * std::numbers::pi * static_cast<double>(k + 1) *
                         (std::abs(a_(f, k)) + std::abs(b_(f, k)));
                }
                break;
            case FeatureKind::holder_cosine:
                return std::nullopt;
            case FeatureKind::constant:
                break;
            case FeatureKind::linear:
                c = std::abs(a_(f, 1));
                break;
        }
        best = std::max(best, c);
    }
    return best;
}

double FeatureFunctionSpec::holder_half_constant() const {
    if (kind_ != FeatureKind::holder_cosine) {
        // On [0,1], |x - y| <= |x - y|^{1/2}.
        return *lipschitz_constant();
    }
    // Each term obeys |a| |cos(wx) - cos(wy)| <= |a| min(w h, 2) with h = |x - y|, so the
    // quotient by sqrt(h) is at most sum_k min(2 pi |a_k| b_k sqrt(h), 2 |a_k| / sqrt(h)).
    // On a geometric h-grid with ratio r, the supremum is at most sqrt(r) times the grid max.
    constexpr double ratio = 1.01;
    constexpr double h_min = 1e-24;
    double best = 0.0;
    for (std::size_t f = 0; f < a_.rows(); ++f) {
        double grid_max = 0.0;
        for (double h = h_min; h <= 1.0 * ratio; h *= ratio) {
            const double root = std::sqrt(h);
            double s = 0.0;
            for (std::size_t k = 0; k < a_.cols(); ++k) {
                const double amp = std::abs(a_(f, k));
                const double w = 2.0 * std::numbers::pi * std::abs(b_(f, k));
                s += std::min(amp * w * root, 2.0 * amp / root);
            }
            grid_max = std::max(grid_max, s);
        }
        best = std::max(best, std::sqrt(ratio) * grid_max);
    }
    return best;
}

double FeatureFunctionSpec::regularity_constant() const {
    if (kind_ == FeatureKind::holder_cosine) return holder_half_constant();
    return *lipschitz_constant();
}

// ---- sampling -------------------------------------------------------------------

SampledGraph sample_weighted(const GraphonSpec& spec, std::size_t n) {
    if (spec.value_class() != ValueClass::weighted) {
        throw WrongRegime("graphon '" + spec.name() +
                          "' is binary; use sample_unweighted for the unweighted regime");
    }
    if (n == 0) throw InvalidParameter("node count must be >= 1");
    Matrix a(n, n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / dn;
        for (std::size_t j = i; j < n; ++j) {
            const double w = spec(u, static_cast<double>(j) / dn);
            a(i, j) = w;
            a(j, i) = w;
        }
    }
    return SampledGraph(std::move(a), ValueClass::weighted);
}

SampledGraph sample_unweighted(const GraphonSpec& spec, std::size_t n) {
    if (spec.value_class() != ValueClass::binary) {
        throw WrongRegime("graphon '" + spec.name() +
                          "' is weighted; use sample_weighted for the weighted regime");
    }
    if (n == 0) throw InvalidParameter("node count must be >= 1");
    Matrix a(n, n);
    const auto m = static_cast<std::int64_t>(n);
    for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t j = i; j < m; ++j) {
            const double w =
                cell_intersects_support(spec, GridCell{i, i + 1, j, j + 1, m}) ? 1.0 : 0.0;
            a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = w;
            a(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = w;
        }
    }
    return SampledGraph(std::move(a), ValueClass::binary);
}

FeatureMatrix sample_features_pointwise(const FeatureFunctionSpec& z, std::size_t n) {
    if (n == 0) throw InvalidParameter("node count must be >= 1");
    FeatureMatrix x(n, z.features());
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        for (std::size_t f = 0; f < z.features(); ++f) x(i, f) = z(u, f);
    }
    return x;
}

namespace {

// P_q(x) and P_q'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t q, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= q; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
    }
    const double dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t q) {
    if (q == 0) throw InvalidParameter("quadrature needs at least one point");
    QuadratureRule rule{std::vector<double>(q), std::vector<double>(q)};
    const double dq = static_cast<double>(q);
    for (std::size_t i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dq + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            auto [p, dp] = legendre(q, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(q, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[q - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Exact mean over [mid - half, mid + half): the mean of cos(w u + phi) is
// sinc(w half) cos(w mid + phi).
double trigonometric_cell_mean(const FeatureFunctionSpec& z, std::size_t f, double mid, double half) {
    const double two_pi = 2.0 * std::numbers::pi;
    double s = 0.0;
    for (std::size_t k = 0; k < z.degree(); ++k) {
        if (z.kind() == FeatureKind::fourier_polynomial) {
            const double w = two_pi * static_cast<double>(k + 1);
            s += sinc(w * half) * (z.a()(f, k) * std::cos(w * mid) + z.b()(f, k) * std::sin(w * mid));
        } else {
            const double w = two_pi * z.b()(f, k);
            s += z.a()(f, k) * sinc(w * half) * std::cos(w * mid);
        }
    }
    return s;
}

}  // namespace

FeatureMatrix sample_features_cell_average(const FeatureFunctionSpec& z, std::size_t n,
                                           std::size_t q) {
    if (n == 0) throw InvalidParameter("node count must be >= 1");
    const QuadratureRule rule = gauss_legendre(q);
    FeatureMatrix x(n, z.features());
    const double dn = static_cast<double>(n);
    const bool trigonometric =
        z.kind() == FeatureKind::fourier_polynomial || z.kind() == FeatureKind::holder_cosine;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / dn;
        const double hi = static_cast<double>(i + 1) / dn;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t f = 0; f < z.features(); ++f) {
            if (trigonometric) {
                x(i, f) = trigonometric_cell_mean(z, f, mid, half);
                continue;
            }
            double s = 0.0;
            for (std::size_t p = 0; p < q; ++p) s += rule.weights[p] * z(mid + half * rule.nodes[p], f);
            x(i, f) = 0.5 * s;
        }
    }
    return x;
}

Matrix graph_shift(const SampledGraph& graph) {
    const std::size_t n = graph.n();
    const double dn = static_cast<double>(n);
    Matrix s(n, n);
    auto src = graph.adjacency().data();
    auto dst = s.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / dn;
    return s;
}

PiecewiseKernel induce_kernel(const SampledGraph& graph) {
    return PiecewiseKernel::uniform(graph.adjacency());
}

PiecewiseFunction induce_features(const FeatureMatrix& features) {
    return PiecewiseFunction::uniform(features);
}

double hom_density_graph(const Motif& motif, const SampledGraph& graph) {
    return hom_density_graph(motif, graph.adjacency());
}

}  // namespace gnde
