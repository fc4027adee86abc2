#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mppsoc/config.hpp"
#include "mppsoc/error.hpp"

namespace mppsoc {

// Port labels of the neighbourhood router. Rows grow southwards, columns
// eastwards; linear and ring arrays only use E and W.
enum class Direction : std::uint8_t { E, W, N, S, NE, NW, SE, SW };

inline constexpr std::array<Direction, 8> kAllDirections = {
    Direction::E, Direction::W, Direction::N, Direction::S,
    Direction::NE, Direction::NW, Direction::SE, Direction::SW};

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view s);
Direction opposite(Direction d);

struct PeId {
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    bool operator==(const PeId&) const = default;
};

class TopologyError : public Error {
public:
    enum class Kind { DimensionMismatch, InvalidPe };
    TopologyError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Immutable PE neighbour relation of one neighbourhood network.
class TopologyGraph {
public:
    static constexpr std::int32_t kNoNeighbor = -1;

    Neighborhood kind() const { return kind_; }
    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    std::uint32_t size() const { return rows_ * cols_; }

    std::uint32_t index(PeId pe) const;  // row-major; throws InvalidPe
    PeId pe(std::uint32_t index) const;  // throws InvalidPe

    // Neighbour reached through port `d`, if that port is wired.
    std::optional<std::uint32_t> neighbor(std::uint32_t index, Direction d) const;
    const std::array<std::int32_t, 8>& ports(std::uint32_t index) const { return table_[index]; }
    std::size_t degree(std::uint32_t index) const;
    std::size_t edge_count() const;

    // One `u v label` line per undirected edge, u < v, label seen from u.
    std::string edge_list() const;

private:
    friend TopologyGraph build_topology(Neighborhood, std::uint32_t, std::uint32_t);

    Neighborhood kind_ = Neighborhood::Linear;
    std::uint32_t rows_ = 1;
    std::uint32_t cols_ = 1;
    std::vector<std::array<std::int32_t, 8>> table_;
};

// Linear and ring need rows == 1 (ring also cols >= 3); mesh2d, torus2d and
// xnet need rows > 1 (torus also rows, cols >= 3). Xnet does not wrap.
TopologyGraph build_topology(Neighborhood kind, std::uint32_t rows, std::uint32_t cols);

// Shortest path length in hops, from the closed form of each topology.
std::uint32_t route_distance(const TopologyGraph& graph, PeId src, PeId dst);

} // namespace mppsoc
