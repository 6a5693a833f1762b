#include "gnde/csv_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "gnde/config.hpp"
#include "gnde/errors.hpp"

namespace gnde {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    return out;
}

void write_edge_list(std::ostream& out, const SampledGraph& graph) {
    const std::size_t n = graph.n();
    out << "n=" << n << ",class="
        << (graph.value_class() == ValueClass::weighted ? "weighted" : "unweighted") << "\n";
    out << "i,j,weight\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double w = graph.adjacency()(i, j);
            if (w != 0.0) out << i << "," << j << "," << format_double(w) << "\n";
        }
    }
}

SampledGraph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty edge list", 1);
    ++lineno;
    line = strip_cr(line);
    auto fields = split_commas(line);
    std::int64_t n = -1;
    ValueClass cls = ValueClass::weighted;
    bool have_class = false;
    for (const auto& field : fields) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("header must be n=<n>,class=<...>", lineno);
        std::string key = field.substr(0, eq);
        std::string value = field.substr(eq + 1);
        if (key == "n") {
            try {
                n = parse_int(value);
            } catch (const ParseError&) {
                throw ParseError("bad node count '" + value + "'", lineno);
            }
        } else if (key == "class") {
            if (value == "weighted") {
                cls = ValueClass::weighted;
            } else if (value == "unweighted") {
                cls = ValueClass::binary;
            } else {
                throw ParseError("class must be weighted or unweighted", lineno);
            }
            have_class = true;
        } else {
            throw ParseError("unknown header key '" + key + "'", lineno);
        }
    }
    if (n < 1 || !have_class) throw ParseError("header needs n >= 1 and a class", lineno);
    const auto size = static_cast<std::size_t>(n);
    Matrix a(size, size);
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (line == "i,j,weight") continue;
        auto cols = split_commas(line);
        if (cols.size() != 3) throw ParseError("expected i,j,weight", lineno);
        std::int64_t i = 0;
        std::int64_t j = 0;
        double w = 0.0;
        try {
            i = parse_int(cols[0]);
            j = parse_int(cols[1]);
            w = parse_double(cols[2]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
        if (i < 0 || j < 0 || i >= n || j >= n) throw ParseError("node index out of range", lineno);
        if (cls == ValueClass::binary ? (w != 0.0 && w != 1.0) : !(w >= 0.0 && w <= 1.0)) {
            throw ParseError("edge weight out of range for the graph class", lineno);
        }
        a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = w;
        a(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = w;
    }
    return SampledGraph(std::move(a), cls);
}

SampledGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list '" + path + "'");
    return read_edge_list(in);
}

void save_edge_list(const std::string& path, const SampledGraph& graph) {
    auto out = open_output(path);
    write_edge_list(out, graph);
}

void write_features(std::ostream& out, const FeatureMatrix& x) {
    for (std::size_t f = 0; f < x.cols(); ++f) out << (f ? "," : "") << "f" << f;
    out << "\n";
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t f = 0; f < x.cols(); ++f) out << (f ? "," : "") << format_double(x(i, f));
        out << "\n";
    }
}

FeatureMatrix read_features(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw ParseError("empty feature file", 1);
    const std::size_t cols = split_commas(strip_cr(line)).size();
    std::vector<double> data;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_commas(line);
        if (fields.size() != cols) throw ParseError("wrong column count", lineno);
        for (const auto& f : fields) {
            try {
                data.push_back(parse_double(f));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), lineno);
            }
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("feature file has no rows", lineno);
    return FeatureMatrix(rows, cols, std::move(data));
}

void write_trajectory(std::ostream& out, const TrajectoryRecord& traj) {
    const std::size_t n = traj.nodes();
    const std::size_t f = traj.features();
    out << "t";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t g = 0; g < f; ++g) out << ",x" << i << "_" << g;
    }
    out << "\n";
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        out << format_double(traj.times[r]);
        for (double v : traj.states[r].data()) out << "," << format_double(v);
        out << "\n";
    }
}

TrajectoryRecord read_trajectory(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw ParseError("empty trajectory file", 1);
    auto header = split_commas(strip_cr(line));
    if (header.size() < 2 || header[0] != "t") throw ParseError("header must start with t", 1);
    std::size_t n = 0;
    std::size_t f = 0;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto& h = header[c];
        auto us = h.find('_');
        if (h.size() < 4 || h[0] != 'x' || us == std::string::npos) {
            throw ParseError("bad column name '" + h + "'", 1);
        }
        n = std::max<std::size_t>(n, static_cast<std::size_t>(parse_int(h.substr(1, us - 1))) + 1);
        f = std::max<std::size_t>(f, static_cast<std::size_t>(parse_int(h.substr(us + 1))) + 1);
    }
    if (n * f != header.size() - 1) throw ParseError("state columns do not form an n x F block", 1);
    TrajectoryRecord rec;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_commas(line);
        if (fields.size() != header.size()) throw ParseError("wrong column count", lineno);
        std::vector<double> values;
        try {
            rec.times.push_back(parse_double(fields[0]));
            for (std::size_t c = 1; c < fields.size(); ++c) values.push_back(parse_double(fields[c]));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
        rec.states.emplace_back(n, f, std::move(values));
    }
    if (rec.states.empty()) throw ParseError("trajectory has no rows", lineno);
    return rec;
}

std::string solver_meta_record(const SolverMeta& meta) {
    std::ostringstream out;
    out << "method = " << meta.method << "\n";
    out << "settings = " << meta.settings << "\n";
    out << "accepted_steps = " << meta.accepted << "\n";
    out << "rejected_steps = " << meta.rejected << "\n";
    out << "rhs_evaluations = " << meta.rhs_evaluations << "\n";
    out << "picard_sweeps = " << meta.iterations << "\n";
    return out.str();
}

}  // namespace gnde
