#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gnde/matrix.hpp"
#include "gnde/neural.hpp"

namespace gnde {

enum class SolverMethod { rk4, dp5, picard };

std::string_view to_string(SolverMethod method);
SolverMethod parse_solver_method(std::string_view text);

struct Rk4Options {
    double step = 0.0;  ///< 0 selects T / 200
};

struct Dp5Options {
    double atol = 1e-7;
    double rtol = 1e-7;
    double initial_step = 0.0;  ///< 0 selects T / 100
    std::uint64_t max_steps = 1'000'000;
};

struct PicardOptions {
    double points_per_unit = 2048.0;
    std::size_t max_iterations = 200;
    double tolerance = 1e-12;
};

struct SolverConfig {
    SolverMethod method = SolverMethod::dp5;
    std::size_t eval_intervals = 100;  ///< M; the grid has M + 1 points
    Rk4Options rk4;
    Dp5Options dp5;
    PicardOptions picard;

    void validate() const;
};

struct SolverMeta {
    std::string method;
    std::string settings;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t rhs_evaluations = 0;
    std::uint64_t iterations = 0;  ///< Picard sweeps, summed over chunks
};

/// States on the uniform grid t_i = T i / M, i = 0..M.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Matrix> states;
    SolverMeta meta;

    std::size_t nodes() const { return states.front().rows(); }
    std::size_t features() const { return states.front().cols(); }
};

/// Uniform evaluation grid T i / M.
std::vector<double> eval_grid(double horizon, std::size_t intervals);

/// dX/dt = gnn_forward(S, X, filters_at(bank, t), act).
Matrix rhs(const Matrix& shift, const Matrix& x, const FilterBank& bank, const Activation& act,
           double t);

/// RK4 or DP5 integration on the evaluation grid.
TrajectoryRecord integrate(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                           const Activation& act, double horizon, const SolverConfig& cfg);

inline constexpr std::size_t kPicardMaxNodes = 64;
inline constexpr double kPicardMaxHorizon = 2.0;

/// Fixed-point iteration of X(t) = Z + int_0^t Phi(S; X(s); H(s)) ds with trapezoid
/// quadrature, chunk by chunk with chunk length min(0.4 / (F K h_T)^L, T).
TrajectoryRecord picard_solve(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                              const Activation& act, double horizon, const SolverConfig& cfg);

/// Dispatches on cfg.method.
TrajectoryRecord solve(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                       const Activation& act, double horizon, const SolverConfig& cfg);

/// Relabels nodes: (P X)_i = X_{perm[i]} and (P S P^T)_{ij} = S_{perm[i], perm[j]}.
Matrix permute_rows(const Matrix& x, const std::vector<std::size_t>& perm);
Matrix permute_symmetric(const Matrix& s, const std::vector<std::size_t>& perm);

/// sup over the grid of ||P X(t) - X'(t)|| / sqrt(n), where X' solves the relabelled system.
double equivariance_check(const Matrix& shift, const Matrix& z, const FilterBank& bank,
                          const Activation& act, double horizon, const SolverConfig& cfg,
                          const std::vector<std::size_t>& perm);

}  // namespace gnde
