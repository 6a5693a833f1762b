#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnde/matrix.hpp"
#include "gnde/piecewise.hpp"

namespace gnde {

class KeyValues;

inline constexpr int kCarpetBitmapDepth = 7;

enum class GraphonKind { tent, oscillatory_lipschitz, block_pattern, triadic_carpet };
enum class ValueClass { weighted, binary };

std::string_view to_string(GraphonKind kind);
std::string_view to_string(ValueClass cls);

/// (A1, alpha) with |W(u2,v2) - W(u1,v1)| <= A1 (|u2-u1| + |v2-v1|)^alpha.
struct HolderMeta {
    double a1;
    double alpha;
};

/// Axis-aligned cell [i0/m, i1/m) x [j0/m, j1/m) with integer edges on a uniform m-grid.
/// Whether the cell is read as half-open or closed is chosen at the call site.
struct GridCell {
    std::int64_t i0;
    std::int64_t i1;
    std::int64_t j0;
    std::int64_t j1;
    std::int64_t m;
};

enum class CellClosure { half_open, closed };

/// Half-open rectangle [u0,u1) x [v0,v1) with arbitrary real edges.
struct Rect {
    double u0;
    double u1;
    double v0;
    double v1;
};

/// An analytic graphon W: [0,1]^2 -> [0,1] with its regularity metadata.
///
/// Instances are immutable; parameter validation happens in the factories so that
/// evaluation never throws.
class GraphonSpec {
public:
    /// W(u,v) = 1 - |u-v|^alpha, alpha in (0,1]. A1 = 1.
    static GraphonSpec tent(double alpha, std::string name = "tent");

    /// W(u,v) = (1 + sin(2 pi f u) sin(2 pi f v)) / 2. Lipschitz with A1 = pi f.
    static GraphonSpec oscillatory(int frequency, std::string name = "oscillatory");

    /// W(u,v) = P[floor(k u), floor(k v)] for a symmetric k x k {0,1} pattern (row-major).
    static GraphonSpec block_pattern(std::vector<std::uint8_t> pattern, std::size_t blocks,
                                     std::string name = "block");

    /// Block pattern built by `levels` Kronecker refinements of a symmetric base pattern.
    static GraphonSpec hsbm(const std::vector<std::uint8_t>& base, std::size_t base_size,
                            int levels, std::string name = "hsbm");

    /// W = 1 iff floor(k u) + floor(k v) is even.
    static GraphonSpec checkerboard(std::size_t k, std::string name = "checkerboard");

    /// Self-similar carpet: a point is in the support iff every base-3 digit pair
    /// (digit of u, digit of v) up to `depth` indexes a retained cell of the 3x3 mask
    /// (mask index 3*row + col, row = digit of v, col = digit of u).
    static GraphonSpec triadic_carpet(std::array<bool, 9> keep, int depth,
                                      std::string name = "carpet");

    GraphonKind kind() const noexcept { return kind_; }
    ValueClass value_class() const noexcept { return value_class_; }
    const std::string& name() const noexcept { return name_; }
    std::optional<HolderMeta> holder() const noexcept { return holder_; }
    std::optional<double> nominal_box_dim() const noexcept { return box_dim_; }

    double alpha() const noexcept { return alpha_; }
    int frequency() const noexcept { return frequency_; }
    /// Natural-grid cell pattern (row index from u). Carpets carry it as a bitmap when
    /// depth <= kCarpetBitmapDepth and are otherwise resolved by recursive search.
    std::size_t blocks() const noexcept { return blocks_; }
    std::span<const std::uint8_t> pattern() const noexcept { return pattern_; }
    const std::array<bool, 9>& carpet_mask() const noexcept { return keep_; }
    int depth() const noexcept { return depth_; }

    double operator()(double u, double v) const noexcept;

    /// Exact test whether the cell meets {W = 1} (binary kinds only).
    bool meets_support(const GridCell& cell, CellClosure closure) const;
    /// Exact test whether the cell meets {W = 0} (binary kinds only).
    bool meets_complement(const GridCell& cell, CellClosure closure) const;

    /// Side length of the natural grid: k for block patterns, 3^depth for carpets, 0 otherwise.
    std::int64_t natural_grid() const noexcept;

private:
    GraphonSpec() = default;

    bool carpet_search(const GridCell& cell, CellClosure closure, bool want_support) const;
    bool grid_search(const GridCell& cell, CellClosure closure, std::uint8_t wanted) const;

    GraphonKind kind_ = GraphonKind::tent;
    ValueClass value_class_ = ValueClass::weighted;
    std::string name_;
    std::optional<HolderMeta> holder_;
    std::optional<double> box_dim_;

    double alpha_ = 1.0;
    int frequency_ = 0;
    std::size_t blocks_ = 0;
    std::vector<std::uint8_t> pattern_;
    std::array<bool, 9> keep_{};
    int depth_ = 0;
    std::int64_t carpet_side_ = 0;
};

inline double evaluate(const GraphonSpec& spec, double u, double v) { return spec(u, v); }

/// Half-open cell test used by unweighted sampling. Exact for every shipped binary kind.
bool cell_intersects_support(const GraphonSpec& spec, const GridCell& cell);

/// Real-valued rectangle: exact when all edges sit on the natural grid, otherwise the
/// probe rule (4 corners, centre, 8x8 interior lattice).
bool cell_intersects_support(const GraphonSpec& spec, const Rect& cell);

/// Sound-but-incomplete intersection test of a point set with a half-open rectangle.
bool probe_intersects(const std::function<bool(double, double)>& member, const Rect& cell);

// ---- catalog --------------------------------------------------------------

/// CLI names of the shipped graphons, in catalog order.
const std::vector<std::string>& catalog_names();

/// Builds a shipped graphon by CLI name (tent, holder-tent, oscillatory, hsbm,
/// checkerboard, hexaflake, sierpinski).
GraphonSpec make_graphon(std::string_view name);

/// Plain-text key=value record; `graphon_from_record` inverts it exactly.
std::string to_record(const GraphonSpec& spec);
GraphonSpec graphon_from_record(const KeyValues& record);

// ---- box counting ---------------------------------------------------------

/// Decides whether a mesh cell of a uniform grid meets a planar set.
using CellPredicate = std::function<bool(const GridCell&)>;

/// Boundary of the support: closed mesh cells meeting both the closed support and the
/// closed complement.
CellPredicate support_boundary(const GraphonSpec& spec);
/// The support itself, tested with half-open cells.
CellPredicate support_set(const GraphonSpec& spec);
CellPredicate unit_square();
/// The segment {(x, 0) : x in [0,1]}, tested with closed cells.
CellPredicate horizontal_segment();

struct BoxCount {
    double estimate;
    std::vector<std::int64_t> mesh;    ///< m with delta = 1/m
    std::vector<std::int64_t> counts;  ///< N_delta for each mesh
};

/// Counts mesh cells meeting the set for each delta = 1/m and fits log N against -log delta.
BoxCount box_counting_dimension(const CellPredicate& set, std::span<const std::int64_t> mesh);

/// m = 3^3..3^min(6, max(4, depth)) for carpets, 2^4..2^9 otherwise.
std::vector<std::int64_t> default_box_schedule(const GraphonSpec& spec);

// ---- homomorphism densities ----------------------------------------------

class Motif {
public:
    Motif(int vertex_count, std::vector<std::pair<int, int>> edges);

    static Motif edge();
    static Motif triangle();
    static Motif path(int vertices);

    int vertex_count() const noexcept { return vertex_count_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

private:
    int vertex_count_;
    std::vector<std::pair<int, int>> edges_;
};

inline constexpr int kMaxMotifVertices = 4;

/// t(F, G) by exact enumeration of all n^|V(F)| vertex maps.
double hom_density_graph(const Motif& motif, const Matrix& adjacency);

/// Midpoint-rule quadrature of t(F, W) on an m-point grid per coordinate.
double hom_density_graphon(const Motif& motif, const GraphonSpec& spec, int m);
double hom_density_graphon(const Motif& motif, const PiecewiseKernel& kernel, int m);

// ---- kernel distances -----------------------------------------------------

/// L1 / L2 distance on [0,1]^2 by the midpoint rule on an m x m grid. Both norms bound
/// the cut norm from above.
double kernel_distance(const GraphonSpec& a, const GraphonSpec& b, Norm norm, int m);
double kernel_distance(const PiecewiseKernel& a, const GraphonSpec& b, Norm norm, int m);
double kernel_distance(const GraphonSpec& a, const PiecewiseKernel& b, Norm norm, int m);

}  // namespace gnde
