#include "gnde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnde/config.hpp"
#include "gnde/errors.hpp"
#include "gnde/sampling.hpp"

namespace gnde {

void BoundInputs::validate() const {
    if (features < 1 || taps < 1 || layers < 1) throw InvalidParameter("F, K, L must be >= 1");
    if (!(horizon >= 0.0) || !(h_t >= 0.0) || !(a1 >= 0.0) || !(a2 >= 0.0) || !(x_sup >= 0.0)) {
        throw InvalidParameter("bound inputs must be nonnegative");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in (0,1]");
    if (!(feature_alpha > 0.0 && feature_alpha <= 1.0)) {
        throw InvalidParameter("feature exponent must lie in (0,1]");
    }
}

StabilityConstants stability_constants(const BoundInputs& inp) {
    inp.validate();
    const double growth = std::pow(static_cast<double>(inp.features * inp.taps) * inp.h_t,
                                   static_cast<double>(inp.layers));
    const double p = std::exp(inp.horizon * growth);
    const double q = (p - 1.0) * static_cast<double>(inp.layers * inp.taps) * inp.x_sup;
    return {p, q};
}

namespace {

double feature_term(const BoundInputs& inp) {
    return inp.a2 * std::sqrt(static_cast<double>(inp.features) / (2.0 * inp.feature_alpha + 1.0));
}

}  // namespace

double rate_constant_weighted(const BoundInputs& inp) {
    const double p = stability_constants(inp).p;
    const double a = inp.alpha;
    const double radical =
        std::sqrt((std::pow(2.0, 2.0 * a + 2.0) - 2.0) / ((2.0 * a + 1.0) * (2.0 * a + 2.0)));
    return p * (feature_term(inp) +
                static_cast<double>(inp.layers * inp.taps) * inp.x_sup * inp.a1 * radical);
}

double weighted_exponent(const BoundInputs& inp) { return std::min(inp.alpha, inp.feature_alpha); }

UnweightedRate rate_constant_unweighted(const BoundInputs& inp) {
    if (!(inp.box_dim >= 1.0 && inp.box_dim < 2.0)) {
        throw InvalidParameter("box dimension must lie in [1,2), got " + format_double(inp.box_dim));
    }
    if (!(inp.epsilon > 0.0 && inp.epsilon < 2.0 - inp.box_dim)) {
        throw InvalidParameter("epsilon must lie in (0, 2 - b) = (0, " +
                               format_double(2.0 - inp.box_dim) + "), got " +
                               format_double(inp.epsilon));
    }
    const double p = stability_constants(inp).p;
    const double c = p * (feature_term(inp) + static_cast<double>(inp.layers * inp.taps) * inp.x_sup);
    const double e = std::min(1.0 - (inp.box_dim + inp.epsilon) / 2.0, inp.feature_alpha);
    return {c, e};
}

namespace {

void check_grids(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    if (a.times != b.times || a.states.size() != b.states.size()) {
        throw DimensionError("trajectories must share the evaluation grid");
    }
    if (a.states.empty()) throw DimensionError("trajectory has no states");
    if (a.features() != b.features()) {
        throw DimensionError("trajectories have different channel counts");
    }
}

}  // namespace

TrajectoryError trajectory_error(const TrajectoryRecord& traj_n, const TrajectoryRecord& traj_ref) {
    check_grids(traj_n, traj_ref);
    TrajectoryError out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < traj_ref.states.size(); ++i) {
        const auto ref = induce_features(traj_ref.states[i]);
        const double norm = l2_norm(ref);
        if (norm < 1e-12) {
            throw DegenerateReference("reference trajectory norm below 1e-12 at t = " +
                                          format_double(traj_ref.times[i]),
                                      traj_ref.times[i]);
        }
        const double d = overlay_l2_distance(induce_features(traj_n.states[i]), ref);
        out.absolute = std::max(out.absolute, d);
        out.relative = std::max(out.relative, d / norm);
        out.ref_sup = std::max(out.ref_sup, norm);
    }
    return out;
}

double trajectory_sup_relative_error(const TrajectoryRecord& traj_n,
                                     const TrajectoryRecord& traj_ref) {
    return trajectory_error(traj_n, traj_ref).relative;
}

double trajectory_sup_distance(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    check_grids(a, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        worst = std::max(worst, overlay_l2_distance(induce_features(a.states[i]),
                                                    induce_features(b.states[i])));
    }
    return worst;
}

double trajectory_sup_norm(const TrajectoryRecord& traj) {
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, l2_norm(induce_features(s)));
    return worst;
}

BoundCheck stability_bound_check(const TrajectoryRecord& traj_n, const TrajectoryRecord& traj_ref,
                                 double kernel_gap, double feature_gap, double p, double q,
                                 double slack) {
    const double measured = trajectory_sup_distance(traj_n, traj_ref);
    const double bound = p * feature_gap + q * kernel_gap;
    const double margin = bound - measured;
    return {margin >= -slack, margin, measured, bound};
}

BoundCheck transferability_gap_check(const TrajectoryRecord& traj_a, std::size_t n1,
                                     const TrajectoryRecord& traj_b, std::size_t n2,
                                     double constant, double exponent, double slack) {
    if (n1 == 0 || n2 == 0) throw InvalidParameter("node counts must be >= 1");
    const double measured = trajectory_sup_distance(traj_a, traj_b);
    const double bound = constant * (std::pow(static_cast<double>(n1), -exponent) +
                                     std::pow(static_cast<double>(n2), -exponent));
    const double margin = bound - measured;
    return {margin >= -slack, margin, measured, bound};
}

RateFit fit_rate(std::span<const std::pair<double, double>> rows) {
    if (rows.size() < 3) {
        throw InsufficientData("rate fit needs at least 3 rows, got " + std::to_string(rows.size()));
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto [n, err] : rows) {
        if (!(n > 0.0) || !(err > 0.0)) {
            throw LogDomainError("rate fit needs positive n and error, got n = " + format_double(n) +
                                 ", err = " + format_double(err));
        }
        xs.push_back(std::log(n));
        ys.push_back(std::log(err));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientData("rate fit needs at least two distinct n");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ssr += r * r;
    }
    const double se = std::sqrt(ssr / (m - 2.0) / sxx);
    return {slope, intercept, se};
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) throw InsufficientData("mean of an empty sample");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace gnde
