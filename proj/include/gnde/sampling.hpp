#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gnde/graphon.hpp"
#include "gnde/matrix.hpp"
#include "gnde/piecewise.hpp"
#include "gnde/random.hpp"

namespace gnde {

/// Node features, one row per node and one column per channel.
using FeatureMatrix = Matrix;

/// Throws DimensionError if any entry is NaN or infinite.
void check_finite(const FeatureMatrix& x);

/// Finite graph with a dense symmetric adjacency matrix.
class SampledGraph {
public:
    /// Validates symmetry and the value range of the class (weighted: [0,1]; binary: {0,1}).
    SampledGraph(Matrix adjacency, ValueClass value_class);

    std::size_t n() const noexcept { return adjacency_.rows(); }
    const Matrix& adjacency() const noexcept { return adjacency_; }
    ValueClass value_class() const noexcept { return value_class_; }

private:
    Matrix adjacency_;
    ValueClass value_class_;
};

enum class FeatureKind { fourier_polynomial, holder_cosine, constant, linear };

/// Deterministic feature function Z: [0,1] -> R^{1xF}.
///
///   fourier_polynomial  Z_f(u) = sum_k a(f,k) cos(2 pi (k+1) u) + b(f,k) sin(2 pi (k+1) u)
///   holder_cosine       Z_f(u) = sum_k a(f,k) cos(2 pi b(f,k) u)
///   constant            Z_f(u) = a(f,0)
///   linear              Z_f(u) = a(f,0) + a(f,1) u
class FeatureFunctionSpec {
public:
    static FeatureFunctionSpec fourier(Matrix a, Matrix b);
    static FeatureFunctionSpec holder_cosine(Matrix amplitudes, Matrix frequencies);
    static FeatureFunctionSpec constant(std::vector<double> values);
    static FeatureFunctionSpec linear(std::vector<double> intercept, std::vector<double> slope);

    /// a, b ~ U[-1,1] drawn channel by channel, a_k before b_k for each k.
    static FeatureFunctionSpec random_fourier(std::size_t features, std::size_t degree, Rng& rng);

    /// Per channel: b ~ U[3,10], a = 1/sqrt(b), amplitudes a^k and frequencies b^k, k = 1..D.
    static FeatureFunctionSpec random_holder(std::size_t features, std::size_t degree, Rng& rng);

    FeatureKind kind() const noexcept { return kind_; }
    std::size_t features() const noexcept { return a_.rows(); }
    std::size_t degree() const noexcept { return a_.cols(); }
    const Matrix& a() const noexcept { return a_; }
    const Matrix& b() const noexcept { return b_; }

    double operator()(double u, std::size_t feature) const;

    /// Per-channel Lipschitz bound A2 (max over channels); empty for holder_cosine.
    std::optional<double> lipschitz_constant() const;

    /// Certified per-channel Hoelder-1/2 constant (max over channels).
    double holder_half_constant() const;

    /// Hoelder exponent used for bounds: 1 except for holder_cosine (1/2).
    double holder_exponent() const noexcept { return kind_ == FeatureKind::holder_cosine ? 0.5 : 1.0; }

    /// Constant matching holder_exponent(): lipschitz_constant() or holder_half_constant().
    double regularity_constant() const;

private:
    FeatureFunctionSpec(FeatureKind kind, Matrix a, Matrix b);

    FeatureKind kind_;
    Matrix a_;
    Matrix b_;
};

std::string_view to_string(FeatureKind kind);

/// A_ij = W(i/n, j/n). Throws WrongRegime on binary graphons.
SampledGraph sample_weighted(const GraphonSpec& spec, std::size_t n);

/// A_ij = 1 iff the cell [i/n,(i+1)/n) x [j/n,(j+1)/n) meets the support. Throws
/// WrongRegime on weighted graphons.
SampledGraph sample_unweighted(const GraphonSpec& spec, std::size_t n);

/// Row i = Z(i/n).
FeatureMatrix sample_features_pointwise(const FeatureFunctionSpec& z, std::size_t n);

/// Row i = cell mean of Z over [i/n, (i+1)/n). Exact in closed form for the fourier and
/// holder_cosine kinds, q-point Gauss-Legendre quadrature for constant and linear ones.
FeatureMatrix sample_features_cell_average(const FeatureFunctionSpec& z, std::size_t n,
                                           std::size_t q = 8);

/// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t q);

/// S = A / n.
Matrix graph_shift(const SampledGraph& graph);

PiecewiseKernel induce_kernel(const SampledGraph& graph);
PiecewiseFunction induce_features(const FeatureMatrix& features);

double hom_density_graph(const Motif& motif, const SampledGraph& graph);

}  // namespace gnde
