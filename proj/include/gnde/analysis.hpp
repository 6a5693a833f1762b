#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gnde/dynamics.hpp"

namespace gnde {

struct BoundInputs {
    std::size_t features = 1;  ///< F
    std::size_t taps = 1;      ///< K
    std::size_t layers = 1;    ///< L
    double horizon = 1.0;      ///< T
    double h_t = 0.0;          ///< certified sup of |filter coefficients|
    double a1 = 0.0;           ///< graphon Hoelder constant
    double alpha = 1.0;        ///< graphon Hoelder exponent
    double a2 = 0.0;           ///< feature regularity constant
    double feature_alpha = 1.0;  ///< feature Hoelder exponent (1 = Lipschitz)
    double x_sup = 0.0;        ///< sup_t ||X(t)||_{L2}
    double box_dim = 1.0;      ///< b
    double epsilon = 0.1;

    void validate() const;
};

struct StabilityConstants {
    double p;
    double q;
};

/// P = exp(T (F K h_T)^L), Q = (P - 1) L K x_sup.
StabilityConstants stability_constants(const BoundInputs& inp);

/// C = P (A2 sqrt(F / (2 a' + 1)) + L K x_sup A1 sqrt((2^{2a+2} - 2) / ((2a+1)(2a+2)))).
double rate_constant_weighted(const BoundInputs& inp);

/// Rate exponent of the weighted bound: min(alpha, feature_alpha).
double weighted_exponent(const BoundInputs& inp);

struct UnweightedRate {
    double constant;  ///< C-tilde
    double exponent;  ///< min(1 - (b + eps) / 2, feature_alpha)
};

/// C-tilde = P (A2 sqrt(F / (2 a' + 1)) + L K x_sup). Throws InvalidParameter unless
/// b in [1, 2) and eps in (0, 2 - b).
UnweightedRate rate_constant_unweighted(const BoundInputs& inp);

/// sup_t ||X_n(t) - X_ref(t)|| and its ratio to ||X_ref(t)|| on induced step functions.
struct TrajectoryError {
    double relative;   ///< max_t distance(t) / ||X_ref(t)||
    double absolute;   ///< max_t distance(t)
    double ref_sup;    ///< max_t ||X_ref(t)||
};

/// Throws DimensionError on mismatched grids or channel counts and DegenerateReference
/// when ||X_ref(t)|| < 1e-12 at some grid time.
TrajectoryError trajectory_error(const TrajectoryRecord& traj_n, const TrajectoryRecord& traj_ref);

double trajectory_sup_relative_error(const TrajectoryRecord& traj_n,
                                     const TrajectoryRecord& traj_ref);

/// sup_t of the overlay L2 distance; no normalization.
double trajectory_sup_distance(const TrajectoryRecord& a, const TrajectoryRecord& b);

/// sup_t ||X(t)||_{L2}.
double trajectory_sup_norm(const TrajectoryRecord& traj);

struct BoundCheck {
    bool holds;
    double margin;  ///< bound - measured
    double measured;
    double bound;
};

/// sup_t ||X_n - X_ref|| <= P feature_gap + Q kernel_gap, accepting margin >= -slack.
BoundCheck stability_bound_check(const TrajectoryRecord& traj_n, const TrajectoryRecord& traj_ref,
                                 double kernel_gap, double feature_gap, double p, double q,
                                 double slack = 0.0);

/// sup_t ||X_{n1} - X_{n2}|| <= C (n1^{-e} + n2^{-e}), accepting margin >= -slack.
BoundCheck transferability_gap_check(const TrajectoryRecord& traj_a, std::size_t n1,
                                     const TrajectoryRecord& traj_b, std::size_t n2,
                                     double constant, double exponent, double slack = 0.0);

struct RateFit {
    double slope;
    double intercept;
    double stderr_slope;
};

/// OLS of log err on log n. Throws InsufficientData below 3 rows and LogDomainError on
/// a nonpositive n or error.
RateFit fit_rate(std::span<const std::pair<double, double>> rows);

struct MeanStd {
    double mean;
    double stddev;  ///< sample standard deviation (n - 1); 0 for a single value
};
MeanStd mean_std(std::span<const double> values);

}  // namespace gnde
