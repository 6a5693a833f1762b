#include "gnde/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "gnde/config.hpp"
#include "gnde/errors.hpp"

namespace gnde {

std::string_view to_string(GraphonKind kind) {
    switch (kind) {
        case GraphonKind::tent: return "tent";
        case GraphonKind::oscillatory_lipschitz: return "oscillatory_lipschitz";
        case GraphonKind::block_pattern: return "block_pattern";
        case GraphonKind::triadic_carpet: return "triadic_carpet";
    }
    return "unknown";
}

std::string_view to_string(ValueClass cls) {
    return cls == ValueClass::weighted ? "weighted" : "binary";
}

namespace {

std::size_t grid_index(double u, std::int64_t side) {
    auto idx = static_cast<std::int64_t>(std::floor(u * static_cast<double>(side)));
    return static_cast<std::size_t>(std::clamp<std::int64_t>(idx, 0, side - 1));
}

// Does the square [x0, x0+s) x [y0, y0+s) on a side-grid overlap the cell on an m-grid?
bool overlaps(std::int64_t x0, std::int64_t y0, std::int64_t s, std::int64_t side,
              const GridCell& c, CellClosure closure) {
    if (closure == CellClosure::half_open) {
        return x0 * c.m < c.i1 * side && c.i0 * side < (x0 + s) * c.m &&
               y0 * c.m < c.j1 * side && c.j0 * side < (y0 + s) * c.m;
    }
    return x0 * c.m <= c.i1 * side && c.i0 * side <= (x0 + s) * c.m &&
           y0 * c.m <= c.j1 * side && c.j0 * side <= (y0 + s) * c.m;
}

bool contains(std::int64_t x0, std::int64_t y0, std::int64_t s, std::int64_t side,
              const GridCell& c) {
    return c.i0 * side <= x0 * c.m && (x0 + s) * c.m <= c.i1 * side &&
           c.j0 * side <= y0 * c.m && (y0 + s) * c.m <= c.j1 * side;
}

void check_cell(const GridCell& c) {
    if (c.m < 1 || c.i0 < 0 || c.j0 < 0 || c.i1 > c.m || c.j1 > c.m || c.i0 >= c.i1 ||
        c.j0 >= c.j1) {
        throw InvalidParameter("grid cell must be a nonempty sub-rectangle of [0,1)^2");
    }
}

}  // namespace

GraphonSpec GraphonSpec::tent(double alpha, std::string name) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InvalidParameter("tent graphon needs alpha in (0,1], got " + format_double(alpha));
    }
    GraphonSpec g;
    g.kind_ = GraphonKind::tent;
    g.value_class_ = ValueClass::weighted;
    g.name_ = std::move(name);
    g.alpha_ = alpha;
    g.holder_ = HolderMeta{1.0, alpha};
    return g;
}

GraphonSpec GraphonSpec::oscillatory(int frequency, std::string name) {
    if (frequency < 1) throw InvalidParameter("oscillation frequency must be >= 1");
    GraphonSpec g;
    g.kind_ = GraphonKind::oscillatory_lipschitz;
    g.value_class_ = ValueClass::weighted;
    g.name_ = std::move(name);
    g.frequency_ = frequency;
    g.holder_ = HolderMeta{std::numbers::pi * frequency, 1.0};
    return g;
}

GraphonSpec GraphonSpec::block_pattern(std::vector<std::uint8_t> pattern, std::size_t blocks,
                                       std::string name) {
    if (blocks < 1) throw InvalidParameter("block pattern needs at least one block");
    if (pattern.size() != blocks * blocks) {
        throw InvalidParameter("block pattern must have blocks^2 entries");
    }
    bool has_zero = false;
    bool has_one = false;
    for (std::size_t i = 0; i < blocks; ++i) {
        for (std::size_t j = 0; j < blocks; ++j) {
            auto x = pattern[i * blocks + j];
            if (x > 1) throw InvalidParameter("block pattern entries must be 0 or 1");
            if (x != pattern[j * blocks + i]) {
                throw InvalidParameter("block pattern must be symmetric");
            }
            (x ? has_one : has_zero) = true;
        }
    }
    GraphonSpec g;
    g.kind_ = GraphonKind::block_pattern;
    g.value_class_ = ValueClass::binary;
    g.name_ = std::move(name);
    g.blocks_ = blocks;
    g.pattern_ = std::move(pattern);
    if (has_zero && has_one) g.box_dim_ = 1.0;
    return g;
}

GraphonSpec GraphonSpec::hsbm(const std::vector<std::uint8_t>& base, std::size_t base_size,
                              int levels, std::string name) {
    if (levels < 1) throw InvalidParameter("hsbm needs at least one level");
    if (base_size < 1 || base.size() != base_size * base_size) {
        throw InvalidParameter("hsbm base pattern must have base_size^2 entries");
    }
    std::vector<std::uint8_t> pattern = base;
    std::size_t k = base_size;
    for (int level = 1; level < levels; ++level) {
        std::size_t next = k * base_size;
        std::vector<std::uint8_t> refined(next * next);
        for (std::size_t i = 0; i < next; ++i) {
            for (std::size_t j = 0; j < next; ++j) {
                refined[i * next + j] = static_cast<std::uint8_t>(
                    pattern[(i / base_size) * k + (j / base_size)] *
                    base[(i % base_size) * base_size + (j % base_size)]);
            }
        }
        pattern = std::move(refined);
        k = next;
    }
    return block_pattern(std::move(pattern), k, std::move(name));
}

GraphonSpec GraphonSpec::checkerboard(std::size_t k, std::string name) {
    if (k < 1) throw InvalidParameter("checkerboard needs k >= 1");
    std::vector<std::uint8_t> pattern(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) pattern[i * k + j] = (i + j) % 2 == 0 ? 1 : 0;
    }
    return block_pattern(std::move(pattern), k, std::move(name));
}

GraphonSpec GraphonSpec::triadic_carpet(std::array<bool, 9> keep, int depth, std::string name) {
    if (depth < 1 || depth > 12) throw InvalidParameter("carpet depth must be in [1, 12]");
    int retained = 0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (keep[3 * r + c] != keep[3 * c + r]) {
                throw InvalidParameter("carpet mask must be symmetric under transposition");
            }
            retained += keep[3 * r + c] ? 1 : 0;
        }
    }
    if (retained == 0) throw InvalidParameter("carpet mask must retain at least one cell");
    GraphonSpec g;
    g.kind_ = GraphonKind::triadic_carpet;
    g.value_class_ = ValueClass::binary;
    g.name_ = std::move(name);
    g.keep_ = keep;
    g.depth_ = depth;
    g.carpet_side_ = 1;
    for (int l = 0; l < depth; ++l) g.carpet_side_ *= 3;
    if (retained < 9) g.box_dim_ = std::max(1.0, std::log(retained) / std::log(3.0));
    if (depth <= kCarpetBitmapDepth) {
        const auto side = static_cast<std::size_t>(g.carpet_side_);
        g.blocks_ = side;
        g.pattern_.resize(side * side);
        for (std::size_t x = 0; x < side; ++x) {
            const double u = (static_cast<double>(x) + 0.5) / static_cast<double>(side);
            for (std::size_t y = 0; y < side; ++y) {
                const double v = (static_cast<double>(y) + 0.5) / static_cast<double>(side);
                g.pattern_[x * side + y] = g(u, v) == 1.0 ? 1 : 0;
            }
        }
    }
    return g;
}

double GraphonSpec::operator()(double u, double v) const noexcept {
    switch (kind_) {
        case GraphonKind::tent:
            return 1.0 - std::pow(std::abs(u - v), alpha_);
        case GraphonKind::oscillatory_lipschitz: {
            const double w = 2.0 * std::numbers::pi * frequency_;
            return 0.5 * (1.0 + std::sin(w * u) * std::sin(w * v));
        }
        case GraphonKind::block_pattern: {
            auto side = static_cast<std::int64_t>(blocks_);
            return pattern_[grid_index(u, side) * blocks_ + grid_index(v, side)];
        }
        case GraphonKind::triadic_carpet: {
            std::size_t x = grid_index(u, carpet_side_);
            std::size_t y = grid_index(v, carpet_side_);
            for (int l = 0; l < depth_; ++l) {
                if (!keep_[3 * (y % 3) + (x % 3)]) return 0.0;
                x /= 3;
                y /= 3;
            }
            return 1.0;
        }
    }
    return 0.0;
}

std::int64_t GraphonSpec::natural_grid() const noexcept {
    switch (kind_) {
        case GraphonKind::block_pattern: return static_cast<std::int64_t>(blocks_);
        case GraphonKind::triadic_carpet: return carpet_side_;
        default: return 0;
    }
}

bool GraphonSpec::carpet_search(const GridCell& cell, CellClosure closure,
                                bool want_support) const {
    const bool mask_has_hole = std::find(keep_.begin(), keep_.end(), false) != keep_.end();
    // Depth-first over retained squares; (x0, y0, s) in units of the 3^depth grid.
    struct Node {
        std::int64_t x0, y0, s;
    };
    std::vector<Node> stack{{0, 0, carpet_side_}};
    while (!stack.empty()) {
        Node node = stack.back();
        stack.pop_back();
        if (!overlaps(node.x0, node.y0, node.s, carpet_side_, cell, closure)) continue;
        if (node.s == 1) {
            if (want_support) return true;
            continue;
        }
        if (contains(node.x0, node.y0, node.s, carpet_side_, cell)) {
            if (want_support || mask_has_hole) return true;
            continue;
        }
        const std::int64_t c = node.s / 3;
        for (int r = 0; r < 3; ++r) {
            for (int q = 0; q < 3; ++q) {
                Node child{node.x0 + q * c, node.y0 + r * c, c};
                if (keep_[3 * r + q]) {
                    stack.push_back(child);
                } else if (!want_support &&
                           overlaps(child.x0, child.y0, child.s, carpet_side_, cell, closure)) {
                    return true;
                }
            }
        }
    }
    return false;
}

bool GraphonSpec::grid_search(const GridCell& cell, CellClosure closure,
                              std::uint8_t wanted) const {
    const auto k = static_cast<std::int64_t>(blocks_);
    const std::int64_t lo_i = std::max<std::int64_t>(0, cell.i0 * k / cell.m - 1);
    const std::int64_t hi_i = std::min<std::int64_t>(k - 1, cell.i1 * k / cell.m + 1);
    const std::int64_t lo_j = std::max<std::int64_t>(0, cell.j0 * k / cell.m - 1);
    const std::int64_t hi_j = std::min<std::int64_t>(k - 1, cell.j1 * k / cell.m + 1);
    for (std::int64_t p = lo_i; p <= hi_i; ++p) {
        for (std::int64_t q = lo_j; q <= hi_j; ++q) {
            if (pattern_[static_cast<std::size_t>(p * k + q)] == wanted &&
                overlaps(p, q, 1, k, cell, closure)) {
                return true;
            }
        }
    }
    return false;
}

bool GraphonSpec::meets_support(const GridCell& cell, CellClosure closure) const {
    check_cell(cell);
    if (value_class_ != ValueClass::binary) {
        throw UnsupportedOperation("support tests need a binary graphon, '" + name_ +
                                   "' is weighted");
    }
    if (pattern_.empty()) return carpet_search(cell, closure, true);
    return grid_search(cell, closure, 1);
}

bool GraphonSpec::meets_complement(const GridCell& cell, CellClosure closure) const {
    check_cell(cell);
    if (value_class_ != ValueClass::binary) {
        throw UnsupportedOperation("support tests need a binary graphon, '" + name_ +
                                   "' is weighted");
    }
    if (pattern_.empty()) return carpet_search(cell, closure, false);
    return grid_search(cell, closure, 0);
}

bool cell_intersects_support(const GraphonSpec& spec, const GridCell& cell) {
    return spec.meets_support(cell, CellClosure::half_open);
}

bool probe_intersects(const std::function<bool(double, double)>& member, const Rect& cell) {
    const double inf = std::numeric_limits<double>::infinity();
    const double u_last = std::nextafter(cell.u1, -inf);
    const double v_last = std::nextafter(cell.v1, -inf);
    const double corners[4][2] = {
        {cell.u0, cell.v0}, {u_last, cell.v0}, {cell.u0, v_last}, {u_last, v_last}};
    for (const auto& p : corners) {
        if (member(p[0], p[1])) return true;
    }
    if (member(0.5 * (cell.u0 + cell.u1), 0.5 * (cell.v0 + cell.v1))) return true;
    constexpr int kLattice = 8;
    for (int a = 0; a < kLattice; ++a) {
        for (int b = 0; b < kLattice; ++b) {
            double u = cell.u0 + (a + 0.5) / kLattice * (cell.u1 - cell.u0);
            double v = cell.v0 + (b + 0.5) / kLattice * (cell.v1 - cell.v0);
            if (member(u, v)) return true;
        }
    }
    return false;
}

bool cell_intersects_support(const GraphonSpec& spec, const Rect& cell) {
    if (spec.value_class() != ValueClass::binary) {
        throw UnsupportedOperation("support tests need a binary graphon, '" + spec.name() +
                                   "' is weighted");
    }
    if (!(0.0 <= cell.u0 && cell.u0 < cell.u1 && cell.u1 <= 1.0 && 0.0 <= cell.v0 &&
          cell.v0 < cell.v1 && cell.v1 <= 1.0)) {
        throw InvalidParameter("rectangle must be a nonempty subset of [0,1)^2");
    }
    const auto g = static_cast<double>(spec.natural_grid());
    auto aligned = [g](double e) {
        double x = e * g;
        return std::floor(x) == x;
    };
    if (aligned(cell.u0) && aligned(cell.u1) && aligned(cell.v0) && aligned(cell.v1)) {
        GridCell c{std::llround(cell.u0 * g), std::llround(cell.u1 * g), std::llround(cell.v0 * g),
                   std::llround(cell.v1 * g), spec.natural_grid()};
        return spec.meets_support(c, CellClosure::half_open);
    }
    return probe_intersects([&spec](double u, double v) { return spec(u, v) == 1.0; }, cell);
}

// ---- catalog ----------------------------------------------------------------

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "tent", "holder-tent", "oscillatory", "hsbm", "checkerboard", "hexaflake", "sierpinski"};
    return names;
}

namespace {

// Axial-coordinate hexagon: the 3x3 block minus two opposite corners.
constexpr std::array<bool, 9> kHexaflakeMask = {true, true, false, true, true,
                                                true, false, true, true};
constexpr std::array<bool, 9> kSierpinskiMask = {true, true, true, true, false,
                                                 true, true, true, true};

}  // namespace

GraphonSpec make_graphon(std::string_view name) {
    if (name == "tent") return GraphonSpec::tent(1.0, "tent");
    if (name == "holder-tent") return GraphonSpec::tent(0.5, "holder-tent");
    if (name == "oscillatory") return GraphonSpec::oscillatory(10, "oscillatory");
    if (name == "hsbm") return GraphonSpec::hsbm({1, 0, 0, 1}, 2, 3, "hsbm");
    if (name == "checkerboard") return GraphonSpec::checkerboard(10, "checkerboard");
    if (name == "hexaflake") return GraphonSpec::triadic_carpet(kHexaflakeMask, 5, "hexaflake");
    if (name == "sierpinski") return GraphonSpec::triadic_carpet(kSierpinskiMask, 5, "sierpinski");
    throw InvalidParameter("unknown graphon '" + std::string(name) + "'");
}

std::string to_record(const GraphonSpec& spec) {
    std::ostringstream out;
    out << "name = " << spec.name() << "\n";
    out << "kind = " << to_string(spec.kind()) << "\n";
    switch (spec.kind()) {
        case GraphonKind::tent:
            out << "alpha = " << format_double(spec.alpha()) << "\n";
            break;
        case GraphonKind::oscillatory_lipschitz:
            out << "frequency = " << spec.frequency() << "\n";
            break;
        case GraphonKind::block_pattern: {
            out << "blocks = " << spec.blocks() << "\n";
            out << "pattern = ";
            auto p = spec.pattern();
            for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << int(p[i]);
            out << "\n";
            break;
        }
        case GraphonKind::triadic_carpet: {
            out << "keep = ";
            const auto& k = spec.carpet_mask();
            for (std::size_t i = 0; i < k.size(); ++i) out << (i ? "," : "") << (k[i] ? 1 : 0);
            out << "\ndepth = " << spec.depth() << "\n";
            break;
        }
    }
    return out.str();
}

GraphonSpec graphon_from_record(const KeyValues& record) {
    auto kind = record.get("kind");
    std::string name = record.get_string("name", record.get_string("graphon", "tent"));
    if (!kind) {
        // Catalog entry with optional parameter overrides.
        GraphonSpec base = make_graphon(name);
        switch (base.kind()) {
            case GraphonKind::tent:
                return GraphonSpec::tent(record.get_double("alpha", base.alpha()), name);
            case GraphonKind::oscillatory_lipschitz:
                return GraphonSpec::oscillatory(
                    static_cast<int>(record.get_int("frequency", base.frequency())), name);
            case GraphonKind::block_pattern:
                if (name == "checkerboard") {
                    return GraphonSpec::checkerboard(
                        static_cast<std::size_t>(record.get_int("k", 10)), name);
                }
                if (name == "hsbm") {
                    return GraphonSpec::hsbm({1, 0, 0, 1}, 2,
                                             static_cast<int>(record.get_int("levels", 3)), name);
                }
                return base;
            case GraphonKind::triadic_carpet:
                return GraphonSpec::triadic_carpet(
                    base.carpet_mask(), static_cast<int>(record.get_int("depth", base.depth())),
                    name);
        }
        return base;
    }
    if (*kind == "tent") return GraphonSpec::tent(record.get_double("alpha", 1.0), name);
    if (*kind == "oscillatory_lipschitz") {
        return GraphonSpec::oscillatory(static_cast<int>(record.get_int("frequency", 10)), name);
    }
    if (*kind == "block_pattern") {
        auto blocks = record.get_int("blocks", 0);
        std::vector<std::uint8_t> pattern;
        for (auto x : record.get_ints("pattern", {})) {
            if (x < 0 || x > 1) throw InvalidParameter("pattern entries must be 0 or 1");
            pattern.push_back(static_cast<std::uint8_t>(x));
        }
        return GraphonSpec::block_pattern(std::move(pattern), static_cast<std::size_t>(blocks),
                                          name);
    }
    if (*kind == "triadic_carpet") {
        auto keep_list = record.get_ints("keep", {});
        if (keep_list.size() != 9) throw InvalidParameter("carpet keep mask needs 9 entries");
        std::array<bool, 9> keep{};
        for (std::size_t i = 0; i < 9; ++i) keep[i] = keep_list[i] != 0;
        return GraphonSpec::triadic_carpet(keep, static_cast<int>(record.get_int("depth", 5)),
                                           name);
    }
    throw InvalidParameter("unknown graphon kind '" + *kind + "'");
}

// ---- box counting -------------------------------------------------------------

CellPredicate support_boundary(const GraphonSpec& spec) {
    if (spec.value_class() != ValueClass::binary) {
        throw UnsupportedOperation("support boundary is only defined for binary graphons");
    }
    return [spec](const GridCell& c) {
        return spec.meets_support(c, CellClosure::closed) &&
               spec.meets_complement(c, CellClosure::closed);
    };
}

CellPredicate support_set(const GraphonSpec& spec) {
    if (spec.value_class() != ValueClass::binary) {
        throw UnsupportedOperation("support set is only defined for binary graphons");
    }
    return [spec](const GridCell& c) { return spec.meets_support(c, CellClosure::half_open); };
}

CellPredicate unit_square() {
    return [](const GridCell&) { return true; };
}

CellPredicate horizontal_segment() {
    return [](const GridCell& c) { return c.j0 == 0; };
}

BoxCount box_counting_dimension(const CellPredicate& set, std::span<const std::int64_t> mesh) {
    if (mesh.size() < 2) {
        throw InsufficientData("box counting needs at least 2 mesh sizes, got " +
                               std::to_string(mesh.size()));
    }
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (mesh[i] < 2) throw InvalidParameter("mesh sizes must be delta = 1/m with m >= 2");
        if (i > 0 && mesh[i] <= mesh[i - 1]) {
            throw InvalidParameter("delta schedule must be strictly decreasing");
        }
    }
    BoxCount out{0.0, {mesh.begin(), mesh.end()}, {}};
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::int64_t m : mesh) {
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < m; ++i) {
            for (std::int64_t j = 0; j < m; ++j) {
                if (set(GridCell{i, i + 1, j, j + 1, m})) ++count;
            }
        }
        out.counts.push_back(count);
        if (count == 0) {
            throw LogDomainError("no mesh cell meets the set at delta = 1/" + std::to_string(m));
        }
        xs.push_back(std::log(static_cast<double>(m)));
        ys.push_back(std::log(static_cast<double>(count)));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.estimate = sxy / sxx;
    return out;
}

std::vector<std::int64_t> default_box_schedule(const GraphonSpec& spec) {
    if (spec.kind() == GraphonKind::triadic_carpet) {
        // 3^-3 .. 3^-6, stopping at the carpet's own resolution 3^-depth.
        std::vector<std::int64_t> mesh;
        std::int64_t m = 27;
        for (int j = 3; j <= std::min(6, std::max(4, spec.depth())); ++j, m *= 3) mesh.push_back(m);
        return mesh;
    }
    return {16, 32, 64, 128, 256, 512};
}

// ---- homomorphism densities -------------------------------------------------

Motif::Motif(int vertex_count, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count_ < 1) throw InvalidParameter("motif needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges_) {
        if (a < 0 || b < 0 || a >= vertex_count_ || b >= vertex_count_) {
            throw InvalidParameter("motif edge references a missing vertex");
        }
        if (a == b) throw InvalidParameter("motif must not contain self-loops");
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
            throw InvalidParameter("motif must not contain duplicate edges");
        }
    }
}

Motif Motif::edge() { return Motif(2, {{0, 1}}); }

Motif Motif::triangle() { return Motif(3, {{0, 1}, {1, 2}, {0, 2}}); }

Motif Motif::path(int vertices) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < vertices; ++i) e.emplace_back(i, i + 1);
    return Motif(vertices, std::move(e));
}

namespace {

void guard_motif(const Motif& motif) {
    if (motif.vertex_count() > kMaxMotifVertices) {
        throw ComplexityGuard("motif has " + std::to_string(motif.vertex_count()) +
                              " vertices; exact enumeration is limited to " +
                              std::to_string(kMaxMotifVertices));
    }
}

}  // namespace

double hom_density_graph(const Motif& motif, const Matrix& adjacency) {
    guard_motif(motif);
    if (adjacency.rows() != adjacency.cols() || adjacency.rows() == 0) {
        throw DimensionError("adjacency must be a nonempty square matrix");
    }
    const std::size_t n = adjacency.rows();
    const int V = motif.vertex_count();
    // back_edges[v] lists earlier vertices adjacent to v.
    std::vector<std::vector<int>> back_edges(static_cast<std::size_t>(V));
    for (auto [a, b] : motif.edges()) {
        back_edges[static_cast<std::size_t>(std::max(a, b))].push_back(std::min(a, b));
    }
    std::vector<std::size_t> phi(static_cast<std::size_t>(V));
    auto recurse = [&](auto&& self, int v, double partial) -> double {
        if (v == V) return partial;
        double total = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            double w = partial;
            for (int u : back_edges[static_cast<std::size_t>(v)]) {
                w *= adjacency(phi[static_cast<std::size_t>(u)], x);
            }
            if (w == 0.0) continue;
            phi[static_cast<std::size_t>(v)] = x;
            total += self(self, v + 1, w);
        }
        return total;
    };
    double hom = recurse(recurse, 0, 1.0);
    return hom / std::pow(static_cast<double>(n), V);
}

namespace {

template <class Kernel>
Matrix midpoint_grid(const Kernel& w, int m) {
    if (m < 1) throw InvalidParameter("quadrature grid must have m >= 1");
    Matrix g(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double u = (i + 0.5) / m;
        for (int j = 0; j < m; ++j) {
            g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = w(u, (j + 0.5) / m);
        }
    }
    return g;
}

template <class A, class B>
double midpoint_distance(const A& a, const B& b, Norm norm, int m) {
    if (m < 1) throw InvalidParameter("quadrature grid must have m >= 1");
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        double u = (i + 0.5) / m;
        double row = 0.0;
        for (int j = 0; j < m; ++j) {
            double v = (j + 0.5) / m;
            double d = std::abs(a(u, v) - b(u, v));
            row += norm == Norm::L2 ? d * d : d;
        }
        acc += row;
    }
    acc /= static_cast<double>(m) * static_cast<double>(m);
    return norm == Norm::L2 ? std::sqrt(acc) : acc;
}

}  // namespace

double hom_density_graphon(const Motif& motif, const GraphonSpec& spec, int m) {
    guard_motif(motif);
    return hom_density_graph(motif, midpoint_grid(spec, m));
}

double hom_density_graphon(const Motif& motif, const PiecewiseKernel& kernel, int m) {
    guard_motif(motif);
    return hom_density_graph(motif, midpoint_grid(kernel, m));
}

double kernel_distance(const GraphonSpec& a, const GraphonSpec& b, Norm norm, int m) {
    return midpoint_distance(a, b, norm, m);
}

double kernel_distance(const PiecewiseKernel& a, const GraphonSpec& b, Norm norm, int m) {
    return midpoint_distance(a, b, norm, m);
}

double kernel_distance(const GraphonSpec& a, const PiecewiseKernel& b, Norm norm, int m) {
    return midpoint_distance(a, b, norm, m);
}

}  // namespace gnde
