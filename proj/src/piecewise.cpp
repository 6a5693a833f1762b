#include "gnde/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnde/errors.hpp"

namespace gnde {

namespace {

void check_breakpoints(const std::vector<double>& bp, std::size_t intervals) {
    if (bp.size() != intervals + 1) {
        throw DimensionError("piecewise function has " + std::to_string(intervals) +
                             " intervals but " + std::to_string(bp.size()) + " breakpoints");
    }
    if (intervals == 0) throw InvalidParameter("piecewise function needs at least one interval");
    if (bp.front() != 0.0 || bp.back() != 1.0) {
        throw InvalidParameter("breakpoints must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (!(bp[i] < bp[i + 1])) throw InvalidParameter("breakpoints must be strictly increasing");
    }
}

std::size_t locate(std::span<const double> bp, double u) {
    auto it = std::upper_bound(bp.begin(), bp.end(), u);
    auto idx = static_cast<std::ptrdiff_t>(it - bp.begin()) - 1;
    auto last = static_cast<std::ptrdiff_t>(bp.size()) - 2;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last));
}

}  // namespace

std::vector<double> uniform_breakpoints(std::size_t m) {
    std::vector<double> bp(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        bp[i] = static_cast<double>(i) / static_cast<double>(m);
    }
    return bp;
}

PiecewiseFunction::PiecewiseFunction(std::vector<double> breakpoints, Matrix values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    check_breakpoints(breakpoints_, values_.rows());
}

PiecewiseFunction PiecewiseFunction::uniform(Matrix values) {
    auto bp = uniform_breakpoints(values.rows());
    return PiecewiseFunction(std::move(bp), std::move(values));
}

double PiecewiseFunction::operator()(double u, std::size_t feature) const {
    return values_(locate(breakpoints_, u), feature);
}

PiecewiseKernel::PiecewiseKernel(std::vector<double> breakpoints, Matrix values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw DimensionError("kernel values must be square");
    check_breakpoints(breakpoints_, values_.rows());
}

PiecewiseKernel PiecewiseKernel::uniform(Matrix values) {
    auto bp = uniform_breakpoints(values.rows());
    return PiecewiseKernel(std::move(bp), std::move(values));
}

PiecewiseKernel PiecewiseKernel::constant(double value) {
    return uniform(Matrix(1, 1, value));
}

double PiecewiseKernel::operator()(double u, double v) const {
    return values_(locate(breakpoints_, u), locate(breakpoints_, v));
}

std::vector<OverlayPiece> overlay_partition(std::span<const double> a, std::span<const double> b) {
    std::vector<OverlayPiece> pieces;
    pieces.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double pos = 0.0;
    const std::size_t na = a.size() - 1;
    const std::size_t nb = b.size() - 1;
    while (i < na && j < nb) {
        double end = std::min(a[i + 1], b[j + 1]);
        if (end > pos) pieces.push_back({end - pos, i, j});
        pos = end;
        if (a[i + 1] == end) ++i;
        if (b[j + 1] == end) ++j;
    }
    return pieces;
}

double overlay_l2_distance(const PiecewiseFunction& a, const PiecewiseFunction& b) {
    if (a.features() != b.features()) {
        throw DimensionError("feature count mismatch: " + std::to_string(a.features()) + " vs " +
                             std::to_string(b.features()));
    }
    const std::size_t F = a.features();
    double acc = 0.0;
    for (const auto& p : overlay_partition(a.breakpoints(), b.breakpoints())) {
        auto ra = a.values().row(p.left);
        auto rb = b.values().row(p.right);
        double s = 0.0;
        for (std::size_t f = 0; f < F; ++f) {
            double d = ra[f] - rb[f];
            s += d * d;
        }
        acc += p.length * s;
    }
    return std::sqrt(acc);
}

double l2_norm(const PiecewiseFunction& f) {
    auto bp = f.breakpoints();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.intervals(); ++i) {
        double s = 0.0;
        for (double x : f.values().row(i)) s += x * x;
        acc += (bp[i + 1] - bp[i]) * s;
    }
    return std::sqrt(acc);
}

double kernel_distance(const PiecewiseKernel& a, const PiecewiseKernel& b, Norm norm) {
    auto pieces = overlay_partition(a.breakpoints(), b.breakpoints());
    double acc = 0.0;
    for (const auto& p : pieces) {
        auto ra = a.values().row(p.left);
        auto rb = b.values().row(p.right);
        double row_acc = 0.0;
        for (const auto& q : pieces) {
            double d = std::abs(ra[q.left] - rb[q.right]);
            row_acc += q.length * (norm == Norm::L2 ? d * d : d);
        }
        acc += p.length * row_acc;
    }
    return norm == Norm::L2 ? std::sqrt(acc) : acc;
}

double l2_norm(const PiecewiseKernel& w) {
    auto bp = w.breakpoints();
    double acc = 0.0;
    for (std::size_t i = 0; i < w.cells(); ++i) {
        double row_acc = 0.0;
        for (std::size_t j = 0; j < w.cells(); ++j) {
            double x = w.values()(i, j);
            row_acc += (bp[j + 1] - bp[j]) * x * x;
        }
        acc += (bp[i + 1] - bp[i]) * row_acc;
    }
    return std::sqrt(acc);
}

}  // namespace gnde
