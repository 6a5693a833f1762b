#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnde/analysis.hpp"
#include "gnde/config.hpp"
#include "gnde/dynamics.hpp"
#include "gnde/graphon.hpp"
#include "gnde/neural.hpp"
#include "gnde/sampling.hpp"

namespace gnde {

/// Solver keys: solver, eval_intervals, rk4_step, atol, rtol, initial_step, max_steps,
/// picard_grid, picard_max_iter, picard_tol.
SolverConfig solver_from(const KeyValues& kv);

/// Feature keys: feature_kind (fourier | holder | constant | linear), feature_degree,
/// feature_value, feature_slope. `fallback_kind` applies when feature_kind is absent.
struct FeatureSettings {
    FeatureKind kind = FeatureKind::fourier_polynomial;
    std::size_t degree = 10;
    double value = 1.0;
    double slope = 1.0;
};
FeatureSettings features_from(const KeyValues& kv, FeatureKind fallback_kind);
FeatureFunctionSpec make_feature_function(const FeatureSettings& s, std::size_t channels, Rng& rng);

/// Filter keys: layers, features, taps, filter_law (constant | fourier), filter_modes,
/// filter_scale, activation.
struct FilterSettings {
    std::size_t layers = 2;
    std::size_t features = 1;
    std::size_t taps = 2;
    TimeLaw law = TimeLaw::constant;
    std::size_t modes = 1;
    double scale = 0.5;
    Activation activation = Activation::tanh();
};
FilterSettings filters_from(const KeyValues& kv);
FilterBank make_filter_bank(const FilterSettings& s, double horizon, Rng& rng);

/// Weighted graphons are sampled directly, binary ones through the support test.
SampledGraph sample_graph(const GraphonSpec& spec, std::size_t n);
/// Pointwise for weighted graphons, q-point cell averages for binary ones.
FeatureMatrix sample_initial_features(const GraphonSpec& spec, const FeatureFunctionSpec& z,
                                      std::size_t n, std::size_t quad_points);

struct ExperimentConfig {
    GraphonSpec graphon = GraphonSpec::tent(1.0);
    std::vector<std::size_t> n_list{128, 192, 256, 384, 512, 768, 1024};
    std::size_t n_ref = 2048;
    double horizon = 1.0;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    SolverConfig solver;
    FilterSettings filters;
    FeatureSettings features;
    std::size_t quad_points = 8;
    double epsilon = 0.1;
    std::size_t unweighted_check_min_n = 256;
    bool record_runtime = false;
    std::size_t threads = 0;  ///< 0 = hardware concurrency
    std::string output = "converge.csv";

    /// Every key has a default; an empty record gives the tent desk preset.
    static ExperimentConfig from_keyvalues(const KeyValues& kv);
    void validate() const;
};

struct ConvergenceRow {
    std::string graphon;
    double alpha_or_dim = 0.0;
    std::size_t n = 0;
    std::size_t n_ref = 0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::size_t trial = 0;
    double sup_rel_err = 0.0;
    double abs_err = 0.0;
    double bound = 0.0;
    std::optional<double> slope_running;
    double runtime_ms = 0.0;
    std::string status = "ok";
    bool bound_checked = false;  ///< row participates in bound dominance
    bool bound_holds = true;
};

struct TrialSummary {
    std::uint64_t seed = 0;
    double h_t = 0.0;
    double a2 = 0.0;
    double x_sup = 0.0;
    double constant = 0.0;
    double exponent = 0.0;
    std::optional<RateFit> fit;
    std::string fit_status = "ok";
};

struct ConvergenceReport {
    ExperimentConfig config;
    std::vector<ConvergenceRow> rows;  ///< sorted by (n, trial)
    std::vector<TrialSummary> trials;
    std::optional<MeanStd> slope;      ///< over trials with a successful fit
    std::optional<BoxCount> box_dim;   ///< boundary estimate for binary graphons
    std::size_t bound_checked = 0;
    std::size_t bound_violations = 0;
    double min_bound_margin = 0.0;
    double runtime_ms = 0.0;
};

ConvergenceReport run_converge(const ExperimentConfig& cfg);

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
/// JSON text with fitted slopes, bound-check margins and run metadata.
std::string convergence_summary(const ConvergenceReport& report);

/// Runs fn(i) for i in [0, count) on `threads` workers. The first exception is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

// ---- box counting ------------------------------------------------------------

/// `set` selects boundary | support for a graphon, or the analytic sets segment | square.
struct BoxDimResult {
    std::string set;
    BoxCount count;
};
BoxDimResult run_boxdim(const KeyValues& kv);
void write_boxdim_csv(std::ostream& out, const BoxDimResult& result);

// ---- subgraph audit ------------------------------------------------------------

struct AuditConfig {
    std::vector<double> proportions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::size_t trials = 10;
    std::uint64_t seed = 1;

    static AuditConfig from_keyvalues(const KeyValues& kv);
    void validate() const;
};

struct AuditRow {
    double proportion = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t nodes = 0;
    double error = 0.0;
    std::string status = "ok";
    std::vector<std::size_t> node_order;  ///< selected nodes, ascending
};

struct AuditAggregate {
    double proportion = 0.0;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct AuditResult {
    std::vector<AuditRow> rows;
    std::vector<AuditAggregate> aggregates;
};

/// Relative L2 distance between the induced kernels of uniformly drawn induced subgraphs
/// (nodes kept in ascending order) and of the full graph.
AuditResult run_transfer_audit(const SampledGraph& graph, const AuditConfig& cfg);
/// Same relative error for one explicit node subset.
double subgraph_graphon_error(const SampledGraph& graph, const std::vector<std::size_t>& nodes);

void write_audit_csv(std::ostream& out, const AuditResult& result);
void write_audit_summary_csv(std::ostream& out, const AuditResult& result);

}  // namespace gnde
