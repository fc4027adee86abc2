#include "mppsoc/topology.hpp"

#include <algorithm>
#include <sstream>

namespace mppsoc {

namespace {

struct Offset {
    int dr;
    int dc;
};

constexpr Offset offset(Direction d)
{
    switch (d) {
    case Direction::E: return {0, 1};
    case Direction::W: return {0, -1};
    case Direction::N: return {-1, 0};
    case Direction::S: return {1, 0};
    case Direction::NE: return {-1, 1};
    case Direction::NW: return {-1, -1};
    case Direction::SE: return {1, 1};
    case Direction::SW: return {1, -1};
    }
    return {0, 0};
}

std::uint32_t absdiff(std::uint32_t a, std::uint32_t b) { return a > b ? a - b : b - a; }

std::uint32_t wrapped(std::uint32_t d, std::uint32_t n) { return std::min(d, n - d); }

[[noreturn]] void mismatch(Neighborhood kind, std::uint32_t rows, std::uint32_t cols,
                           std::string_view need)
{
    std::ostringstream s;
    s << to_string(kind) << " topology cannot be built on " << rows << "x" << cols
      << " PEs (" << need << ")";
    throw TopologyError(TopologyError::Kind::DimensionMismatch, s.str());
}

} // namespace

std::string_view to_string(Direction d)
{
    switch (d) {
    case Direction::E: return "E";
    case Direction::W: return "W";
    case Direction::N: return "N";
    case Direction::S: return "S";
    case Direction::NE: return "NE";
    case Direction::NW: return "NW";
    case Direction::SE: return "SE";
    case Direction::SW: return "SW";
    }
    return "?";
}

std::optional<Direction> parse_direction(std::string_view s)
{
    for (const Direction d : kAllDirections)
        if (to_string(d) == s)
            return d;
    return std::nullopt;
}

Direction opposite(Direction d)
{
    switch (d) {
    case Direction::E: return Direction::W;
    case Direction::W: return Direction::E;
    case Direction::N: return Direction::S;
    case Direction::S: return Direction::N;
    case Direction::NE: return Direction::SW;
    case Direction::NW: return Direction::SE;
    case Direction::SE: return Direction::NW;
    case Direction::SW: return Direction::NE;
    }
    return d;
}

std::uint32_t TopologyGraph::index(PeId pe) const
{
    if (pe.row >= rows_ || pe.col >= cols_) {
        throw TopologyError(TopologyError::Kind::InvalidPe,
                            "PE (" + std::to_string(pe.row) + "," + std::to_string(pe.col) +
                                ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    return pe.row * cols_ + pe.col;
}

PeId TopologyGraph::pe(std::uint32_t index) const
{
    if (index >= size())
        throw TopologyError(TopologyError::Kind::InvalidPe, "PE index " + std::to_string(index) + " out of range");
    return {index / cols_, index % cols_};
}

std::optional<std::uint32_t> TopologyGraph::neighbor(std::uint32_t index, Direction d) const
{
    const std::int32_t n = table_.at(index)[static_cast<std::size_t>(d)];
    if (n == kNoNeighbor)
        return std::nullopt;
    return static_cast<std::uint32_t>(n);
}

std::size_t TopologyGraph::degree(std::uint32_t index) const
{
    const auto& p = table_.at(index);
    return static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](std::int32_t n) { return n != kNoNeighbor; }));
}

std::size_t TopologyGraph::edge_count() const
{
    std::size_t twice = 0;
    for (std::uint32_t i = 0; i < size(); ++i)
        twice += degree(i);
    return twice / 2;
}

std::string TopologyGraph::edge_list() const
{
    std::ostringstream out;
    for (std::uint32_t u = 0; u < size(); ++u) {
        for (const Direction d : kAllDirections) {
            const auto v = neighbor(u, d);
            if (v && u < *v)
                out << u << ' ' << *v << ' ' << to_string(d) << '\n';
        }
    }
    return out.str();
}

TopologyGraph build_topology(Neighborhood kind, std::uint32_t rows, std::uint32_t cols)
{
    if (rows == 0 || cols == 0)
        mismatch(kind, rows, cols, "dimensions must be positive");

    bool wrap = false;
    bool diagonals = false;
    switch (kind) {
    case Neighborhood::Linear:
        if (rows != 1)
            mismatch(kind, rows, cols, "needs a single row");
        break;
    case Neighborhood::Ring:
        if (rows != 1 || cols < 3)
            mismatch(kind, rows, cols, "needs a single row of at least 3 PEs");
        wrap = true;
        break;
    case Neighborhood::Mesh2D:
        if (rows < 2)
            mismatch(kind, rows, cols, "needs more than one row");
        break;
    case Neighborhood::Torus2D:
        if (rows < 3 || cols < 3)
            mismatch(kind, rows, cols, "needs at least 3 rows and 3 columns");
        wrap = true;
        break;
    case Neighborhood::Xnet:
        if (rows < 2)
            mismatch(kind, rows, cols, "needs more than one row");
        diagonals = true;
        break;
    }

    TopologyGraph g;
    g.kind_ = kind;
    g.rows_ = rows;
    g.cols_ = cols;
    g.table_.assign(std::size_t{rows} * cols, {});
    for (auto& ports : g.table_)
        ports.fill(TopologyGraph::kNoNeighbor);

    const auto r_count = static_cast<std::int64_t>(rows);
    const auto c_count = static_cast<std::int64_t>(cols);
    for (std::int64_t r = 0; r < r_count; ++r) {
        for (std::int64_t c = 0; c < c_count; ++c) {
            for (const Direction d : kAllDirections) {
                const Offset o = offset(d);
                if (!diagonals && o.dr != 0 && o.dc != 0)
                    continue;
                if (rows == 1 && o.dr != 0)
                    continue;
                std::int64_t nr = r + o.dr;
                std::int64_t nc = c + o.dc;
                if (wrap) {
                    nr = (nr + r_count) % r_count;
                    nc = (nc + c_count) % c_count;
                } else if (nr < 0 || nr >= r_count || nc < 0 || nc >= c_count) {
                    continue;
                }
                g.table_[static_cast<std::size_t>(r * c_count + c)][static_cast<std::size_t>(d)] =
                    static_cast<std::int32_t>(nr * c_count + nc);
            }
        }
    }
    return g;
}

std::uint32_t route_distance(const TopologyGraph& graph, PeId src, PeId dst)
{
    graph.index(src);
    graph.index(dst);
    const std::uint32_t dr = absdiff(src.row, dst.row);
    const std::uint32_t dc = absdiff(src.col, dst.col);
    switch (graph.kind()) {
    case Neighborhood::Linear:
    case Neighborhood::Mesh2D: return dr + dc;
    case Neighborhood::Ring: return wrapped(dc, graph.cols());
    case Neighborhood::Torus2D: return wrapped(dr, graph.rows()) + wrapped(dc, graph.cols());
    case Neighborhood::Xnet: return std::max(dr, dc);
    }
    return 0;
}

} // namespace mppsoc
