#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mppsoc/config.hpp"
#include "mppsoc/error.hpp"

namespace mppsoc::noc {

class RouterError : public Error {
public:
    enum class Kind { BadPortCount, PortCountNotPowerOfTwo, NotAPermutation, PortOutOfRange, ModeMismatch };
    RouterError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// The mpNoC internal network. Delta variants are log2(N) stages of N/2
// two-by-two switches with destination-tag routing: the switch at stage k
// selects its output from destination bit n-1-k.
class MpNocNetwork {
public:
    MpNocKind kind() const { return kind_; }
    std::uint32_t ports() const { return ports_; }
    std::uint32_t stages() const { return stages_; }
    std::uint32_t switches_per_stage() const { return is_delta(kind_) ? ports_ / 2 : 0; }

    // Output link taken at each stage by a message src -> dst (Delta only).
    std::vector<std::uint32_t> path(std::uint32_t src, std::uint32_t dst) const;

private:
    friend MpNocNetwork build_network(MpNocKind, std::uint32_t);

    std::uint32_t link_before_stage(std::uint32_t link, std::uint32_t stage) const;
    std::uint32_t link_after_stage(std::uint32_t link, std::uint32_t stage) const;

    MpNocKind kind_ = MpNocKind::Crossbar;
    std::uint32_t ports_ = 1;
    std::uint32_t stages_ = 0;
};

MpNocNetwork build_network(MpNocKind kind, std::uint32_t ports);

using Route = std::pair<std::uint32_t, std::uint32_t>;  // (src, dst)

struct RoutingResult {
    std::uint32_t passes = 0;
    std::vector<std::vector<Route>> routed;  // one conflict-free set per pass
    std::uint64_t conflicts = 0;             // blocked attempts over all passes
};

// Greedy multi-pass routing: each pass admits messages lowest source first
// while their paths stay conflict-free; the rest retry in the next pass.
RoutingResult route_messages(const MpNocNetwork& net, std::span<const Route> routes);

// `perm[i]` is the destination of source i; throws NotAPermutation.
RoutingResult route_permutation(const MpNocNetwork& net, std::span<const std::uint32_t> perm);

enum class MpNocMode { PeToPe, AcuToPe, DeviceToPe };

struct Port {
    enum class Kind { Pe, Acu, Device };
    Kind kind = Kind::Pe;
    std::uint32_t index = 0;  // PE index, unused for Acu and Device

    static Port pe(std::uint32_t i) { return {Kind::Pe, i}; }
    static Port acu() { return {Kind::Acu, 0}; }
    static Port device() { return {Kind::Device, 0}; }

    bool operator==(const Port&) const = default;
};

struct Message {
    Port src;
    Port dst;
    std::uint64_t payload = 0;
};

struct Delivery {
    Port src;
    Port dst;
    std::uint64_t payload = 0;
    std::uint32_t pass = 0;
};

struct NocCost {
    std::uint64_t pass_cycles = 4;      // crossbar and Delta transit per pass
    std::uint64_t bus_pass_cycles = 1;  // shared bus grant per message
    std::uint64_t mode_cycles = 1;      // run-time mode configuration
};

struct TransferResult {
    std::vector<Delivery> deliveries;  // in delivery order
    std::uint32_t passes = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t latency_cycles = 0;
};

// Delivers every message in the given mode. PeToPe messages are routed
// through the internal network. In AcuToPe and DeviceToPe modes one endpoint
// is the distinguished port: words it sends with equal payload share one
// broadcast pass, words sent to it are serialized one per pass.
TransferResult transfer(const MpNocNetwork& net, MpNocMode mode, std::span<const Message> messages,
                        const NocCost& cost = {});

} // namespace mppsoc::noc
