#pragma once

#include <fstream>
#include <iosfwd>
#include <string>

#include "gnde/dynamics.hpp"
#include "gnde/sampling.hpp"

namespace gnde {

/// Edge list: `n=<n>,class=<weighted|unweighted>`, then `i,j,weight`, then one line per
/// nonzero upper-triangle entry (i <= j, 0-based).
void write_edge_list(std::ostream& out, const SampledGraph& graph);
/// Missing pairs are zero. ParseError carries the 1-based line number.
SampledGraph read_edge_list(std::istream& in);
SampledGraph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const SampledGraph& graph);

/// Header `f0,...,f{F-1}`, one row per node.
void write_features(std::ostream& out, const FeatureMatrix& x);
FeatureMatrix read_features(std::istream& in);

/// Header `t,x<i>_<f>` in node-major order (node 0 channels first), one row per grid time.
void write_trajectory(std::ostream& out, const TrajectoryRecord& traj);
TrajectoryRecord read_trajectory(std::istream& in);
/// key = value solver metadata.
std::string solver_meta_record(const SolverMeta& meta);

/// Opens a file for writing; throws ParseError naming the path on failure.
std::ofstream open_output(const std::string& path);

}  // namespace gnde
