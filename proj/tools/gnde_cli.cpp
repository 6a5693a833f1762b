// Command-line front end: catalog, sample, integrate, converge, boxdim, transfer-audit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gnde/analysis.hpp"
#include "gnde/config.hpp"
#include "gnde/csv_io.hpp"
#include "gnde/errors.hpp"
#include "gnde/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> threads;
};

gnde::KeyValues load_config(const Common& c) {
    gnde::KeyValues kv = c.config.empty() ? gnde::KeyValues{} : gnde::KeyValues::load(c.config);
    if (c.seed) kv.set("seed", std::to_string(*c.seed));
    if (c.threads) kv.set("threads", std::to_string(*c.threads));
    return kv;
}

std::string out_path(const Common& c, const std::string& fallback) {
    return c.out.empty() ? fallback : c.out;
}

void write_text(const std::string& path, const std::string& text) {
    auto out = gnde::open_output(path);
    out << text;
}

int cmd_catalog(const Common& c) {
    std::ostringstream table;
    table << "name,kind,class,A1,alpha,nominal_box_dim\n";
    for (const auto& name : gnde::catalog_names()) {
        const auto g = gnde::make_graphon(name);
        table << name << "," << gnde::to_string(g.kind()) << "," << gnde::to_string(g.value_class())
              << ",";
        if (auto h = g.holder()) {
            table << gnde::format_double(h->a1) << "," << gnde::format_double(h->alpha);
        } else {
            table << ",";
        }
        table << ",";
        if (auto b = g.nominal_box_dim()) table << gnde::format_double(*b);
        table << "\n";
    }
    if (c.out.empty()) {
        std::cout << table.str();
    } else {
        write_text(c.out, table.str());
    }
    return 0;
}

int cmd_sample(const Common& c) {
    const auto kv = load_config(c);
    const auto spec = gnde::graphon_from_record(kv);
    const auto n = kv.get_int("n", 64);
    if (n < 1) throw gnde::InvalidParameter("n must be >= 1");
    const auto size = static_cast<std::size_t>(n);
    const auto graph = gnde::sample_graph(spec, size);
    const auto filters = gnde::filters_from(kv);
    const auto fallback = spec.name() == "holder-tent" ? gnde::FeatureKind::holder_cosine
                                                       : gnde::FeatureKind::fourier_polynomial;
    const auto settings = gnde::features_from(kv, fallback);
    const std::uint64_t seed = kv.get_u64("seed", 1);
    gnde::Rng rng(gnde::derive_seed(seed, 2));
    const auto z = gnde::make_feature_function(settings, filters.features, rng);
    const auto x = gnde::sample_initial_features(spec, z, size,
                                                 static_cast<std::size_t>(kv.get_int("quad_points", 8)));
    const std::string base = out_path(c, "sample");
    gnde::save_edge_list(base + ".edges.csv", graph);
    auto fout = gnde::open_output(base + ".features.csv");
    gnde::write_features(fout, x);
    std::cout << "wrote " << base << ".edges.csv and " << base << ".features.csv (n=" << size
              << ", seed=" << seed << ")\n";
    return 0;
}

int cmd_integrate(const Common& c) {
    const auto kv = load_config(c);
    const auto solver = gnde::solver_from(kv);
    const double horizon = kv.get_double("T", 1.0);
    const std::uint64_t seed = kv.get_u64("seed", 1);
    gnde::Matrix shift;
    gnde::Matrix z;
    std::optional<gnde::FilterBank> bank;
    std::optional<gnde::Activation> act;
    if (kv.get_string("preset", "") == "scalar_linear") {
        // dx/dt = h x with x(0) = z0 on a single node.
        shift = gnde::Matrix(1, 1, 1.0);
        z = gnde::Matrix(1, 1, kv.get_double("z0", 1.0));
        bank = gnde::FilterBank::constant(1, 1, 1, {kv.get_double("h0", 1.0)});
        act = gnde::Activation::identity();
    } else {
        const auto spec = gnde::graphon_from_record(kv);
        const auto n = kv.get_int("n", 64);
        if (n < 1) throw gnde::InvalidParameter("n must be >= 1");
        const auto size = static_cast<std::size_t>(n);
        shift = gnde::graph_shift(gnde::sample_graph(spec, size));
        const auto filters = gnde::filters_from(kv);
        gnde::Rng filter_rng(gnde::derive_seed(seed, 1));
        gnde::Rng feature_rng(gnde::derive_seed(seed, 2));
        bank = gnde::make_filter_bank(filters, horizon, filter_rng);
        act = filters.activation;
        const auto fallback = spec.name() == "holder-tent" ? gnde::FeatureKind::holder_cosine
                                                           : gnde::FeatureKind::fourier_polynomial;
        const auto zf = gnde::make_feature_function(gnde::features_from(kv, fallback),
                                                    filters.features, feature_rng);
        z = gnde::sample_initial_features(spec, zf, size,
                                          static_cast<std::size_t>(kv.get_int("quad_points", 8)));
    }
    const auto traj = gnde::solve(shift, z, *bank, *act, horizon, solver);
    const std::string path = out_path(c, "trajectory.csv");
    {
        auto out = gnde::open_output(path);
        gnde::write_trajectory(out, traj);
    }
    write_text(path + ".meta", gnde::solver_meta_record(traj.meta) + "seed = " +
                                   std::to_string(seed) + "\n" + bank->to_record(seed));
    std::cout << "wrote " << path << " (" << traj.times.size() << " grid times, method "
              << traj.meta.method << ")\n";
    return 0;
}

int cmd_converge(const Common& c) {
    const auto kv = load_config(c);
    auto cfg = gnde::ExperimentConfig::from_keyvalues(kv);
    if (!c.out.empty()) cfg.output = c.out;
    const auto report = gnde::run_converge(cfg);
    {
        auto out = gnde::open_output(cfg.output);
        gnde::write_convergence_csv(out, report);
    }
    write_text(cfg.output + ".summary.json", gnde::convergence_summary(report));
    std::cout << "graphon " << cfg.graphon.name() << ": ";
    if (report.slope) {
        std::cout << "mean slope " << gnde::format_double(report.slope->mean) << " (stddev "
                  << gnde::format_double(report.slope->stddev) << ")";
    } else {
        std::cout << "no slope (fit refused, see status column)";
    }
    std::cout << ", bound violations " << report.bound_violations << "/" << report.bound_checked
              << "\nwrote " << cfg.output << "\n";
    return 0;
}

int cmd_boxdim(const Common& c) {
    const auto kv = load_config(c);
    const auto result = gnde::run_boxdim(kv);
    const std::string path = out_path(c, "boxdim.csv");
    {
        auto out = gnde::open_output(path);
        gnde::write_boxdim_csv(out, result);
    }
    std::cout << result.set << ": box-counting estimate " << gnde::format_double(result.count.estimate)
              << "\nwrote " << path << "\n";
    return 0;
}

int cmd_transfer_audit(const Common& c, const std::string& edges_flag) {
    const auto kv = load_config(c);
    const std::string edges = edges_flag.empty() ? kv.get_string("edges", "") : edges_flag;
    if (edges.empty()) throw gnde::InvalidParameter("transfer-audit needs --edges or an edges key");
    const auto graph = gnde::load_edge_list(edges);
    const auto cfg = gnde::AuditConfig::from_keyvalues(kv);
    const auto result = gnde::run_transfer_audit(graph, cfg);
    const std::string path = out_path(c, "audit.csv");
    {
        auto out = gnde::open_output(path);
        gnde::write_audit_csv(out, result);
    }
    {
        auto out = gnde::open_output(path + ".summary.csv");
        gnde::write_audit_summary_csv(out, result);
    }
    for (const auto& a : result.aggregates) {
        std::cout << "proportion " << gnde::format_double(a.proportion) << ": mean "
                  << gnde::format_double(a.mean) << " +- " << gnde::format_double(a.stddev) << "\n";
    }
    for (const auto& r : result.rows) {
        if (r.status != "ok") {
            std::cerr << "warning: proportion " << gnde::format_double(r.proportion) << " trial "
                      << r.trial << ": " << r.status << "\n";
        }
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph neural differential equations on sampled graphons"};
    app.require_subcommand(1);
    Common common;
    std::string edges;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key = value configuration file");
        sub->add_option("--seed", common.seed, "master seed (overrides the config)");
        sub->add_option("--out", common.out, "output path");
        sub->add_option("--threads", common.threads, "worker threads (0 = all cores)");
    };
    auto* catalog = app.add_subcommand("catalog", "list the shipped graphons");
    auto* sample = app.add_subcommand("sample", "write a sampled graph and its features");
    auto* integ = app.add_subcommand("integrate", "integrate one system and write its trajectory");
    auto* conv = app.add_subcommand("converge", "run the convergence-rate experiment");
    auto* box = app.add_subcommand("boxdim", "estimate a box-counting dimension");
    auto* audit = app.add_subcommand("transfer-audit", "subgraph graphon-error audit");
    for (auto* sub : {catalog, sample, integ, conv, box, audit}) add_common(sub);
    audit->add_option("--edges", edges, "edge-list CSV of the full graph");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*catalog) return cmd_catalog(common);
        if (*sample) return cmd_sample(common);
        if (*integ) return cmd_integrate(common);
        if (*conv) return cmd_converge(common);
        if (*box) return cmd_boxdim(common);
        if (*audit) return cmd_transfer_audit(common, edges);
    } catch (const gnde::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const gnde::NonconvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << " (t = " << e.last_time() << ")\n";
        return kExitNumerical;
    } catch (const gnde::DivergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << " (t = " << e.time() << ")\n";
        return kExitNumerical;
    } catch (const gnde::DegenerateReference& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const gnde::LogDomainError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const gnde::InsufficientData& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const gnde::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
