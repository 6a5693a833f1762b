#include "gnde/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gnde/errors.hpp"

namespace gnde {

namespace {

std::size_t positive_size(const KeyValues& kv, const std::string& key, std::int64_t fallback) {
    const std::int64_t v = kv.get_int(key, fallback);
    if (v < 1) throw InvalidParameter(key + " must be >= 1");
    return static_cast<std::size_t>(v);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

SolverConfig solver_from(const KeyValues& kv) {
    SolverConfig cfg;
    cfg.method = parse_solver_method(kv.get_string("solver", "dp5"));
    cfg.eval_intervals = positive_size(kv, "eval_intervals", 100);
    cfg.rk4.step = kv.get_double("rk4_step", 0.0);
    cfg.dp5.atol = kv.get_double("atol", 1e-7);
    cfg.dp5.rtol = kv.get_double("rtol", 1e-7);
    cfg.dp5.initial_step = kv.get_double("initial_step", 0.0);
    cfg.dp5.max_steps = kv.get_u64("max_steps", 1'000'000);
    cfg.picard.points_per_unit = kv.get_double("picard_grid", 2048.0);
    cfg.picard.max_iterations = positive_size(kv, "picard_max_iter", 200);
    cfg.picard.tolerance = kv.get_double("picard_tol", 1e-12);
    cfg.validate();
    return cfg;
}

FeatureSettings features_from(const KeyValues& kv, FeatureKind fallback_kind) {
    FeatureSettings s;
    s.kind = fallback_kind;
    if (auto kind = kv.get("feature_kind")) {
        if (*kind == "fourier") {
            s.kind = FeatureKind::fourier_polynomial;
        } else if (*kind == "holder") {
            s.kind = FeatureKind::holder_cosine;
        } else if (*kind == "constant") {
            s.kind = FeatureKind::constant;
        } else if (*kind == "linear") {
            s.kind = FeatureKind::linear;
        } else {
            throw InvalidParameter("unknown feature_kind '" + *kind + "'");
        }
    }
    s.degree = positive_size(kv, "feature_degree", 10);
    s.value = kv.get_double("feature_value", 1.0);
    s.slope = kv.get_double("feature_slope", 1.0);
    return s;
}

FeatureFunctionSpec make_feature_function(const FeatureSettings& s, std::size_t channels,
                                          Rng& rng) {
    switch (s.kind) {
        case FeatureKind::fourier_polynomial:
            return FeatureFunctionSpec::random_fourier(channels, s.degree, rng);
        case FeatureKind::holder_cosine:
            return FeatureFunctionSpec::random_holder(channels, s.degree, rng);
        case FeatureKind::constant:
            return FeatureFunctionSpec::constant(std::vector<double>(channels, s.value));
        case FeatureKind::linear:
            return FeatureFunctionSpec::linear(std::vector<double>(channels, s.value),
                                               std::vector<double>(channels, s.slope));
    }
    throw InvalidParameter("unknown feature kind");
}

FilterSettings filters_from(const KeyValues& kv) {
    FilterSettings s;
    s.layers = positive_size(kv, "layers", 2);
    s.features = positive_size(kv, "features", 1);
    s.taps = positive_size(kv, "taps", 2);
    const std::string law = kv.get_string("filter_law", "constant");
    if (law == "constant") {
        s.law = TimeLaw::constant;
    } else if (law == "fourier") {
        s.law = TimeLaw::fourier;
    } else {
        throw InvalidParameter("unknown filter_law '" + law + "'");
    }
    s.modes = positive_size(kv, "filter_modes", 1);
    s.scale = kv.get_double("filter_scale", 0.5);
    if (!(s.scale >= 0.0)) throw InvalidParameter("filter_scale must be >= 0");
    s.activation = Activation::parse(kv.get_string("activation", "tanh"));
    return s;
}

FilterBank make_filter_bank(const FilterSettings& s, double horizon, Rng& rng) {
    if (s.law == TimeLaw::constant) {
        return FilterBank::random_constant(s.layers, s.features, s.taps, rng);
    }
    return FilterBank::random_fourier(s.layers, s.features, s.taps, s.modes, horizon, s.scale, rng);
}

SampledGraph sample_graph(const GraphonSpec& spec, std::size_t n) {
    return spec.value_class() == ValueClass::weighted ? sample_weighted(spec, n)
                                                      : sample_unweighted(spec, n);
}

FeatureMatrix sample_initial_features(const GraphonSpec& spec, const FeatureFunctionSpec& z,
                                      std::size_t n, std::size_t quad_points) {
    return spec.value_class() == ValueClass::weighted
               ? sample_features_pointwise(z, n)
               : sample_features_cell_average(z, n, quad_points);
}

// ---- experiment config ----------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_keyvalues(const KeyValues& kv) {
    ExperimentConfig cfg;
    cfg.graphon = graphon_from_record(kv);
    if (kv.contains("n_list")) {
        cfg.n_list.clear();
        for (auto n : kv.get_ints("n_list", {})) {
            if (n < 1) throw InvalidParameter("n_list entries must be >= 1");
            cfg.n_list.push_back(static_cast<std::size_t>(n));
        }
    }
    cfg.n_ref = positive_size(kv, "n_ref", 2048);
    cfg.horizon = kv.get_double("T", 1.0);
    cfg.trials = positive_size(kv, "trials", 10);
    cfg.seed = kv.get_u64("seed", 1);
    cfg.solver = solver_from(kv);
    cfg.filters = filters_from(kv);
    const FeatureKind fallback = cfg.graphon.name() == "holder-tent" ? FeatureKind::holder_cosine
                                                                     : FeatureKind::fourier_polynomial;
    cfg.features = features_from(kv, fallback);
    cfg.quad_points = positive_size(kv, "quad_points", 8);
    cfg.epsilon = kv.get_double("epsilon", 0.1);
    cfg.unweighted_check_min_n = static_cast<std::size_t>(kv.get_int("bound_min_n_unweighted", 256));
    cfg.record_runtime = kv.get_bool("record_runtime", false);
    cfg.threads = static_cast<std::size_t>(kv.get_int("threads", 0));
    cfg.output = kv.get_string("output", "converge.csv");
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (n_list.empty()) throw InvalidParameter("n_list must not be empty");
    const std::size_t max_n = *std::max_element(n_list.begin(), n_list.end());
    if (n_ref <= max_n) throw InvalidParameter("n_ref must exceed max(n_list)");
    if (!(horizon > 0.0)) throw InvalidParameter("T must be positive");
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
    solver.validate();
    if (solver.method == SolverMethod::picard) {
        throw InvalidParameter("the convergence experiment needs rk4 or dp5");
    }
}

// ---- worker pool ------------------------------------------------------------------

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ---- convergence experiment ----------------------------------------------------------

namespace {

struct Integration {
    std::optional<TrajectoryRecord> traj;
    std::string error;
    double runtime_ms = 0.0;
};

std::string status_of(const std::exception& e) {
    std::string what = e.what();
    for (char& c : what) {
        if (c == ',' || c == '\n') c = ';';
    }
    if (dynamic_cast<const NonconvergenceError*>(&e)) return "nonconvergence: " + what;
    if (dynamic_cast<const DivergenceError*>(&e)) return "divergence: " + what;
    return "error: " + what;
}

}  // namespace

ConvergenceReport run_converge(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    ConvergenceReport report;
    report.config = cfg;
    const GraphonSpec& spec = cfg.graphon;
    const bool weighted = spec.value_class() == ValueClass::weighted;

    // Graph sizes: n_list in order, then the reference.
    std::vector<std::size_t> sizes = cfg.n_list;
    sizes.push_back(cfg.n_ref);
    const std::size_t ref_slot = sizes.size() - 1;
    std::vector<std::optional<Matrix>> shifts(sizes.size());
    parallel_for(sizes.size(), cfg.threads, [&](std::size_t i) {
        shifts[i] = graph_shift(sample_graph(spec, sizes[i]));
    });

    // Per-trial random draws.
    std::vector<std::uint64_t> trial_seeds(cfg.trials);
    std::vector<std::optional<FilterBank>> banks(cfg.trials);
    std::vector<std::optional<FeatureFunctionSpec>> feats(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        trial_seeds[t] = derive_seed(cfg.seed, t);
        Rng filter_rng(derive_seed(trial_seeds[t], 1));
        Rng feature_rng(derive_seed(trial_seeds[t], 2));
        banks[t] = make_filter_bank(cfg.filters, cfg.horizon, filter_rng);
        feats[t] = make_feature_function(cfg.features, cfg.filters.features, feature_rng);
    }

    // Integrations, largest systems first for load balance.
    std::vector<Integration> runs(cfg.trials * sizes.size());
    std::vector<std::size_t> order(runs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sizes[a % sizes.size()] > sizes[b % sizes.size()];
    });
    parallel_for(order.size(), cfg.threads, [&](std::size_t k) {
        const std::size_t idx = order[k];
        const std::size_t t = idx / sizes.size();
        const std::size_t s = idx % sizes.size();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const FeatureMatrix z = sample_initial_features(spec, *feats[t], sizes[s], cfg.quad_points);
            runs[idx].traj = integrate(*shifts[s], z, *banks[t], cfg.filters.activation, cfg.horizon,
                                       cfg.solver);
        } catch (const Error& e) {
            runs[idx].error = status_of(e);
        }
        runs[idx].runtime_ms = elapsed_ms(t0);
    });

    // Errors, bounds and fits, trial by trial.
    double nominal_dim = 0.0;
    if (!weighted) {
        nominal_dim = spec.nominal_box_dim().value_or(1.0);
        const auto schedule = default_box_schedule(spec);
        try {
            report.box_dim = box_counting_dimension(support_boundary(spec), schedule);
        } catch (const Error&) {
            report.box_dim.reset();
        }
    }
    const double alpha_or_dim = weighted ? spec.alpha() : nominal_dim;
    report.min_bound_margin = std::numeric_limits<double>::infinity();

    std::vector<std::vector<ConvergenceRow>> per_trial(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        TrialSummary summary;
        summary.seed = trial_seeds[t];
        summary.h_t = h_sup_certified(*banks[t]);
        summary.a2 = feats[t]->regularity_constant();
        const Integration& ref = runs[t * sizes.size() + ref_slot];
        if (ref.traj) summary.x_sup = trajectory_sup_norm(*ref.traj);

        BoundInputs inp;
        inp.features = cfg.filters.features;
        inp.taps = cfg.filters.taps;
        inp.layers = cfg.filters.layers;
        inp.horizon = cfg.horizon;
        inp.h_t = summary.h_t;
        inp.a2 = summary.a2;
        inp.feature_alpha = feats[t]->holder_exponent();
        inp.x_sup = summary.x_sup;
        inp.epsilon = cfg.epsilon;
        if (weighted) {
            const HolderMeta meta = spec.holder().value_or(HolderMeta{0.0, 1.0});
            inp.a1 = meta.a1;
            inp.alpha = meta.alpha;
            summary.constant = rate_constant_weighted(inp);
            summary.exponent = weighted_exponent(inp);
        } else {
            inp.box_dim = nominal_dim;
            const UnweightedRate r = rate_constant_unweighted(inp);
            summary.constant = r.constant;
            summary.exponent = r.exponent;
        }

        std::vector<std::pair<double, double>> fit_rows;
        for (std::size_t s = 0; s < cfg.n_list.size(); ++s) {
            const Integration& run = runs[t * sizes.size() + s];
            ConvergenceRow row;
            row.graphon = spec.name();
            row.alpha_or_dim = alpha_or_dim;
            row.n = sizes[s];
            row.n_ref = cfg.n_ref;
            row.horizon = cfg.horizon;
            row.seed = trial_seeds[t];
            row.trial = t;
            row.runtime_ms = cfg.record_runtime ? run.runtime_ms : 0.0;
            row.bound = summary.constant *
                        std::pow(static_cast<double>(row.n), -summary.exponent);
            const double nan = std::numeric_limits<double>::quiet_NaN();
            if (!ref.traj || !run.traj) {
                row.status = !ref.traj ? "reference " + ref.error : run.error;
                row.sup_rel_err = nan;
                row.abs_err = nan;
                per_trial[t].push_back(row);
                continue;
            }
            try {
                const TrajectoryError e = trajectory_error(*run.traj, *ref.traj);
                row.sup_rel_err = e.relative;
                row.abs_err = e.absolute;
            } catch (const DegenerateReference& e) {
                row.abs_err = trajectory_sup_distance(*run.traj, *ref.traj);
                row.sup_rel_err = row.abs_err == 0.0 ? 0.0 : nan;
                row.status = "degenerate_reference";
            }
            row.bound_checked = weighted || row.n >= cfg.unweighted_check_min_n;
            row.bound_holds = row.abs_err <= row.bound;
            if (row.bound_checked) {
                ++report.bound_checked;
                if (!row.bound_holds) ++report.bound_violations;
                report.min_bound_margin = std::min(report.min_bound_margin, row.bound - row.abs_err);
            }
            if (std::isfinite(row.sup_rel_err)) {
                fit_rows.emplace_back(static_cast<double>(row.n), row.sup_rel_err);
                if (fit_rows.size() >= 3) {
                    try {
                        row.slope_running = fit_rate(fit_rows).slope;
                    } catch (const LogDomainError&) {
                        row.slope_running.reset();
                    }
                }
            }
            per_trial[t].push_back(row);
        }
        try {
            summary.fit = fit_rate(fit_rows);
        } catch (const LogDomainError& e) {
            summary.fit_status = std::string("log_domain: ") + e.what();
        } catch (const InsufficientData& e) {
            summary.fit_status = std::string("insufficient_data: ") + e.what();
        }
        for (auto& row : per_trial[t]) {
            if (row.sup_rel_err <= 0.0) row.status = row.status == "ok" ? "log_domain" : row.status + ";log_domain";
        }
        report.trials.push_back(summary);
    }

    for (std::size_t s = 0; s < cfg.n_list.size(); ++s) {
        for (std::size_t t = 0; t < cfg.trials; ++t) report.rows.push_back(per_trial[t][s]);
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.n < b.n; });

    std::vector<double> slopes;
    for (const auto& tr : report.trials) {
        if (tr.fit) slopes.push_back(tr.fit->slope);
    }
    if (!slopes.empty()) report.slope = mean_std(slopes);
    if (report.bound_checked == 0) report.min_bound_margin = 0.0;
    report.runtime_ms = elapsed_ms(start);
    return report;
}

namespace {

std::string fmt(double v) { return format_double(v); }

}  // namespace

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "graphon,alpha_or_dim,n,n_ref,T,seed,sup_rel_err,abs_err,bound,slope_running,"
           "runtime_ms,status\n";
    for (const auto& r : report.rows) {
        out << r.graphon << "," << fmt(r.alpha_or_dim) << "," << r.n << "," << r.n_ref << ","
            << fmt(r.horizon) << "," << r.seed << "," << fmt(r.sup_rel_err) << ","
            << fmt(r.abs_err) << "," << fmt(r.bound) << ","
            << (r.slope_running ? fmt(*r.slope_running) : "nan") << "," << fmt(r.runtime_ms) << ","
            << r.status << "\n";
    }
}

std::string convergence_summary(const ConvergenceReport& report) {
    using nlohmann::ordered_json;
    const ExperimentConfig& cfg = report.config;
    ordered_json j;
    j["graphon"] = cfg.graphon.name();
    j["value_class"] = std::string(to_string(cfg.graphon.value_class()));
    j["n_list"] = cfg.n_list;
    j["n_ref"] = cfg.n_ref;
    j["T"] = cfg.horizon;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["solver"] = std::string(to_string(cfg.solver.method));
    j["atol"] = cfg.solver.dp5.atol;
    j["rtol"] = cfg.solver.dp5.rtol;
    j["eval_intervals"] = cfg.solver.eval_intervals;
    j["filters"] = {{"layers", cfg.filters.layers},
                    {"features", cfg.filters.features},
                    {"taps", cfg.filters.taps},
                    {"law", cfg.filters.law == TimeLaw::constant ? "constant" : "fourier"},
                    {"activation", cfg.filters.activation.name()}};
    j["feature_kind"] = std::string(to_string(cfg.features.kind));
    j["feature_degree"] = cfg.features.degree;
    if (report.slope) {
        j["slope_mean"] = report.slope->mean;
        j["slope_stddev"] = report.slope->stddev;
    } else {
        j["slope_mean"] = nullptr;
    }
    if (report.box_dim) {
        j["box_dim_estimate"] = report.box_dim->estimate;
        j["box_dim_nominal"] = cfg.graphon.nominal_box_dim().value_or(0.0);
    }
    j["bound_rows_checked"] = report.bound_checked;
    j["bound_violations"] = report.bound_violations;
    j["bound_min_margin"] = report.min_bound_margin;
    ordered_json trials = ordered_json::array();
    for (const auto& t : report.trials) {
        ordered_json row;
        row["seed"] = t.seed;
        row["h_T_certified"] = t.h_t;
        row["A2"] = t.a2;
        row["X_sup"] = t.x_sup;
        row["rate_constant"] = t.constant;
        row["rate_exponent"] = t.exponent;
        if (t.fit) {
            row["slope"] = t.fit->slope;
            row["intercept"] = t.fit->intercept;
            row["slope_stderr"] = t.fit->stderr_slope;
        }
        row["fit_status"] = t.fit_status;
        trials.push_back(row);
    }
    j["per_trial"] = trials;
    ordered_json by_n = ordered_json::array();
    for (std::size_t n : cfg.n_list) {
        std::vector<double> rel;
        for (const auto& r : report.rows) {
            if (r.n == n && std::isfinite(r.sup_rel_err)) rel.push_back(r.sup_rel_err);
        }
        if (rel.empty()) continue;
        const MeanStd ms = mean_std(rel);
        by_n.push_back({{"n", n}, {"mean_rel_err", ms.mean}, {"stddev_rel_err", ms.stddev}});
    }
    j["aggregate"] = by_n;
    j["runtime_ms"] = report.runtime_ms;
    return j.dump(2) + "\n";
}

// ---- box counting ----------------------------------------------------------------------

BoxDimResult run_boxdim(const KeyValues& kv) {
    const std::string set = kv.get_string("set", "boundary");
    std::vector<std::int64_t> mesh;
    CellPredicate pred;
    std::string label;
    if (set == "segment" || set == "square") {
        mesh = kv.get_ints("mesh", {16, 32, 64, 128, 256, 512});
        pred = set == "segment" ? horizontal_segment() : unit_square();
        label = set;
    } else {
        const GraphonSpec spec = graphon_from_record(kv);
        mesh = kv.get_ints("mesh", default_box_schedule(spec));
        if (set == "boundary") {
            pred = support_boundary(spec);
        } else if (set == "support") {
            pred = support_set(spec);
        } else {
            throw InvalidParameter("set must be boundary, support, segment or square");
        }
        label = spec.name() + ":" + set;
    }
    return {label, box_counting_dimension(pred, mesh)};
}

void write_boxdim_csv(std::ostream& out, const BoxDimResult& result) {
    out << "set,m,delta,count\n";
    for (std::size_t i = 0; i < result.count.mesh.size(); ++i) {
        out << result.set << "," << result.count.mesh[i] << ","
            << fmt(1.0 / static_cast<double>(result.count.mesh[i])) << "," << result.count.counts[i]
            << "\n";
    }
    out << "# estimate=" << fmt(result.count.estimate) << "\n";
}

// ---- subgraph audit ----------------------------------------------------------------------

AuditConfig AuditConfig::from_keyvalues(const KeyValues& kv) {
    AuditConfig cfg;
    cfg.proportions = kv.get_doubles("proportions", cfg.proportions);
    cfg.trials = positive_size(kv, "trials", 10);
    cfg.seed = kv.get_u64("seed", 1);
    cfg.validate();
    return cfg;
}

void AuditConfig::validate() const {
    if (proportions.empty()) throw InvalidParameter("proportions must not be empty");
    for (double p : proportions) {
        if (!(p > 0.0 && p <= 1.0)) throw InvalidParameter("proportions must lie in (0,1]");
    }
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
}

double subgraph_graphon_error(const SampledGraph& graph, const std::vector<std::size_t>& nodes) {
    if (nodes.empty()) throw InvalidParameter("subgraph must contain at least one node");
    const std::size_t m = nodes.size();
    Matrix sub(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) sub(i, j) = graph.adjacency()(nodes[i], nodes[j]);
    }
    const PiecewiseKernel full = induce_kernel(graph);
    const double norm = l2_norm(full);
    if (norm == 0.0) throw DegenerateReference("full graph has an all-zero adjacency", 0.0);
    return kernel_distance(PiecewiseKernel::uniform(std::move(sub)), full, Norm::L2) / norm;
}

AuditResult run_transfer_audit(const SampledGraph& graph, const AuditConfig& cfg) {
    cfg.validate();
    AuditResult result;
    const std::size_t n = graph.n();
    for (std::size_t p = 0; p < cfg.proportions.size(); ++p) {
        const double prop = cfg.proportions[p];
        std::vector<double> errors;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            AuditRow row;
            row.proportion = prop;
            row.trial = t;
            row.seed = derive_seed(derive_seed(cfg.seed, p), t);
            const auto m = static_cast<std::size_t>(std::llround(prop * static_cast<double>(n)));
            row.nodes = m;
            if (m == 0) {
                row.status = "skipped: empty subgraph";
                row.error = std::numeric_limits<double>::quiet_NaN();
                result.rows.push_back(row);
                continue;
            }
            // Partial Fisher-Yates draw without replacement.
            std::vector<std::size_t> pool(n);
            for (std::size_t i = 0; i < n; ++i) pool[i] = i;
            Rng rng(row.seed);
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(pool[i], pool[j]);
            }
            row.node_order.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
            std::sort(row.node_order.begin(), row.node_order.end());
            row.error = subgraph_graphon_error(graph, row.node_order);
            errors.push_back(row.error);
            result.rows.push_back(std::move(row));
        }
        AuditAggregate agg;
        agg.proportion = prop;
        agg.count = errors.size();
        if (!errors.empty()) {
            const MeanStd ms = mean_std(errors);
            agg.mean = ms.mean;
            agg.stddev = ms.stddev;
        } else {
            agg.mean = std::numeric_limits<double>::quiet_NaN();
            agg.stddev = std::numeric_limits<double>::quiet_NaN();
        }
        result.aggregates.push_back(agg);
    }
    return result;
}

void write_audit_csv(std::ostream& out, const AuditResult& result) {
    out << "proportion,trial,seed,nodes,graphon_error,status,node_order\n";
    for (const auto& r : result.rows) {
        out << fmt(r.proportion) << "," << r.trial << "," << r.seed << "," << r.nodes << ","
            << fmt(r.error) << "," << r.status << ",";
        for (std::size_t i = 0; i < r.node_order.size(); ++i) out << (i ? ";" : "") << r.node_order[i];
        out << "\n";
    }
}

void write_audit_summary_csv(std::ostream& out, const AuditResult& result) {
    out << "proportion,trials,mean_graphon_error,stddev_graphon_error\n";
    for (const auto& a : result.aggregates) {
        out << fmt(a.proportion) << "," << a.count << "," << fmt(a.mean) << "," << fmt(a.stddev)
            << "\n";
    }
}

}  // namespace gnde
