#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gnde/matrix.hpp"
#include "gnde/random.hpp"

namespace gnde {

class KeyValues;

/// Normalized Lipschitz activation: |rho(x) - rho(y)| <= |x - y| and rho(0) = 0.
class Activation {
public:
    enum class Kind { relu, leaky_relu, tanh, identity };

    static Activation relu() { return Activation(Kind::relu, 0.0); }
    /// Negative-side slope in [0, 1].
    static Activation leaky_relu(double slope);
    static Activation tanh() { return Activation(Kind::tanh, 0.0); }
    static Activation identity() { return Activation(Kind::identity, 0.0); }
    /// relu, tanh, identity, leaky_relu or leaky_relu:<slope>.
    static Activation parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    double slope() const noexcept { return slope_; }
    std::string name() const;

    double operator()(double x) const noexcept;

private:
    Activation(Kind kind, double slope) : kind_(kind), slope_(slope) {}

    Kind kind_;
    double slope_;
};

/// Filter taps h[l][f][g][k] at one time, stored row-major in (l, f, g, k).
struct FilterCoefficients {
    std::size_t layers;
    std::size_t features;
    std::size_t taps;
    std::vector<double> values;

    std::size_t index(std::size_t l, std::size_t f, std::size_t g, std::size_t k) const noexcept {
        return ((l * features + f) * features + g) * taps + k;
    }
    double operator()(std::size_t l, std::size_t f, std::size_t g, std::size_t k) const noexcept {
        return values[index(l, f, g, k)];
    }
};

enum class TimeLaw { constant, fourier };

/// Time-varying filter bank with L layers, F x F channels and K taps.
///
/// Constant law: one value per (l, f, g, k).
/// Fourier law: per (l, f, g, k) the block (c0, a_1..a_M, b_1..b_M), giving
///   h(t) = c0 + sum_m a_m cos(2 pi m t / T) + b_m sin(2 pi m t / T).
class FilterBank {
public:
    static FilterBank constant(std::size_t layers, std::size_t features, std::size_t taps,
                               std::vector<double> values);
    static FilterBank fourier(std::size_t layers, std::size_t features, std::size_t taps,
                              std::size_t modes, double horizon, std::vector<double> values);

    /// Constant law with coefficients ~ U[-1, 1] in (l, f, g, k) order.
    static FilterBank random_constant(std::size_t layers, std::size_t features, std::size_t taps,
                                      Rng& rng);
    /// Fourier law with every mode coefficient ~ U[-scale, scale].
    static FilterBank random_fourier(std::size_t layers, std::size_t features, std::size_t taps,
                                     std::size_t modes, double horizon, double scale, Rng& rng);

    std::size_t layers() const noexcept { return layers_; }
    std::size_t features() const noexcept { return features_; }
    std::size_t taps() const noexcept { return taps_; }
    TimeLaw law() const noexcept { return law_; }
    std::size_t modes() const noexcept { return modes_; }
    double horizon() const noexcept { return horizon_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Throws DomainError for t outside [0, T] (fourier law only; constant law accepts any t).
    FilterCoefficients at(double t) const;

    /// Plain-text record: layers, features, taps, law, modes, horizon, seed, coefficients.
    std::string to_record(std::uint64_t seed = 0) const;
    static FilterBank from_record(const KeyValues& record);

private:
    FilterBank() = default;
    void validate() const;

    std::size_t layers_ = 0;
    std::size_t features_ = 0;
    std::size_t taps_ = 0;
    TimeLaw law_ = TimeLaw::constant;
    std::size_t modes_ = 0;
    double horizon_ = 1.0;
    std::vector<double> values_;
};

inline FilterCoefficients filters_at(const FilterBank& bank, double t) { return bank.at(t); }

/// L layers of X_f <- rho(sum_g sum_k h[l][f][g][k] S^k X_g), with S^k X_g formed by k
/// successive products and the sum taken g-major, k-minor.
Matrix gnn_forward(const Matrix& shift, const Matrix& x, const FilterCoefficients& h,
                   const Activation& act);

/// Same as gnn_forward, reusing caller-owned scratch storage.
struct ForwardWorkspace {
    std::vector<Matrix> powers;
    Matrix current;
    Matrix next;
};
void gnn_forward(const Matrix& shift, const Matrix& x, const FilterCoefficients& h,
                 const Activation& act, ForwardWorkspace& ws, Matrix& out);

inline constexpr std::size_t kHSupGrid = 10000;

/// sup_t max |h(t)|: exact for the constant law, a uniform 10^4-point grid on [0, T] for
/// the fourier law.
double h_sup(const FilterBank& bank);

/// Certified upper bound: max over coefficients of |c0| + sum_m (|a_m| + |b_m|).
double h_sup_certified(const FilterBank& bank);

/// Scaled Frobenius norm ||X|| / sqrt(n): the L2 norm of the induced step function.
double scaled_norm(const Matrix& x);
double scaled_distance(const Matrix& a, const Matrix& b);

}  // namespace gnde
