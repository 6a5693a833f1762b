#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gnde/matrix.hpp"

namespace gnde {

enum class Norm { L1, L2 };

/// Step function on [0,1] with values in R^{1xF}; interval i is [b_i, b_{i+1}).
class PiecewiseFunction {
public:
    PiecewiseFunction(std::vector<double> breakpoints, Matrix values);

    /// Uniform partition with breakpoints i/m, one row of `values` per interval.
    static PiecewiseFunction uniform(Matrix values);

    std::size_t intervals() const noexcept { return values_.rows(); }
    std::size_t features() const noexcept { return values_.cols(); }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    const Matrix& values() const noexcept { return values_; }

    double operator()(double u, std::size_t feature) const;

private:
    std::vector<double> breakpoints_;
    Matrix values_;
};

/// Step kernel on [0,1]^2 over a product partition (same breakpoints on both axes).
class PiecewiseKernel {
public:
    PiecewiseKernel(std::vector<double> breakpoints, Matrix values);

    static PiecewiseKernel uniform(Matrix values);
    static PiecewiseKernel constant(double value);

    std::size_t cells() const noexcept { return values_.rows(); }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    const Matrix& values() const noexcept { return values_; }

    double operator()(double u, double v) const;

private:
    std::vector<double> breakpoints_;
    Matrix values_;
};

std::vector<double> uniform_breakpoints(std::size_t m);

/// Exact L2(I; R^{1xF}) distance computed on the merged partition.
double overlay_l2_distance(const PiecewiseFunction& a, const PiecewiseFunction& b);

double l2_norm(const PiecewiseFunction& f);

/// Exact L1 / L2 distance between two step kernels on the merged product partition.
double kernel_distance(const PiecewiseKernel& a, const PiecewiseKernel& b, Norm norm);

double l2_norm(const PiecewiseKernel& w);

/// Interval lengths of the common refinement of two partitions, with the source interval
/// index on each side. Zero-length pieces are dropped.
struct OverlayPiece {
    double length;
    std::size_t left;
    std::size_t right;
};
std::vector<OverlayPiece> overlay_partition(std::span<const double> a, std::span<const double> b);

}  // namespace gnde
