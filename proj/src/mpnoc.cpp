#include "mppsoc/mpnoc.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace mppsoc::noc {

namespace {

std::uint32_t rotl(std::uint32_t x, std::uint32_t bits)
{
    const std::uint32_t mask = (1u << bits) - 1;
    return ((x << 1) | (x >> (bits - 1))) & mask;
}

// Rotate right within the low `bits` bits, leaving the others in place.
std::uint32_t rotr_low(std::uint32_t x, std::uint32_t bits)
{
    if (bits <= 1)
        return x;
    const std::uint32_t mask = (1u << bits) - 1;
    const std::uint32_t low = x & mask;
    return (x & ~mask) | (low >> 1) | ((low & 1u) << (bits - 1));
}

std::uint32_t swap_bits(std::uint32_t x, std::uint32_t a, std::uint32_t b)
{
    if (((x >> a) & 1u) != ((x >> b) & 1u))
        x ^= (1u << a) | (1u << b);
    return x;
}

void check_port(const MpNocNetwork& net, std::uint32_t p)
{
    if (p >= net.ports()) {
        throw RouterError(RouterError::Kind::PortOutOfRange,
                          "port " + std::to_string(p) + " out of range for " +
                              std::to_string(net.ports()) + "-port mpNoC");
    }
}

} // namespace

MpNocNetwork build_network(MpNocKind kind, std::uint32_t ports)
{
    if (ports == 0)
        throw RouterError(RouterError::Kind::BadPortCount, "mpNoC needs at least one port");
    MpNocNetwork net;
    net.kind_ = kind;
    net.ports_ = ports;
    if (is_delta(kind)) {
        if (!std::has_single_bit(ports)) {
            throw RouterError(RouterError::Kind::PortCountNotPowerOfTwo,
                              std::string(to_string(kind)) + " needs a power-of-two port count, got " +
                                  std::to_string(ports));
        }
        net.stages_ = static_cast<std::uint32_t>(std::countr_zero(ports));
    }
    return net;
}

// Omega: perfect shuffle ahead of every stage.
// Butterfly: stage k pairs links differing in bit n-1-k; the wiring swaps
// that bit into bit 0 before the stage and back after it.
// Baseline: after stage k the low n-k bits are inverse-shuffled, i.e. each
// half of the remaining sub-network is wired recursively.
std::uint32_t MpNocNetwork::link_before_stage(std::uint32_t link, std::uint32_t stage) const
{
    const std::uint32_t n = stages_;
    switch (kind_) {
    case MpNocKind::DeltaOmega: return rotl(link, n);
    case MpNocKind::DeltaButterfly: return swap_bits(link, n - 1 - stage, 0);
    case MpNocKind::DeltaBaseline: return stage == 0 ? link : rotr_low(link, n - stage + 1);
    default: return link;
    }
}

std::uint32_t MpNocNetwork::link_after_stage(std::uint32_t link, std::uint32_t stage) const
{
    if (kind_ == MpNocKind::DeltaButterfly)
        return swap_bits(link, stages_ - 1 - stage, 0);
    return link;
}

std::vector<std::uint32_t> MpNocNetwork::path(std::uint32_t src, std::uint32_t dst) const
{
    check_port(*this, src);
    check_port(*this, dst);
    std::vector<std::uint32_t> links;
    links.reserve(stages_);
    std::uint32_t pos = src;
    for (std::uint32_t k = 0; k < stages_; ++k) {
        pos = link_before_stage(pos, k);
        pos = (pos & ~1u) | ((dst >> (stages_ - 1 - k)) & 1u);
        links.push_back(pos);
        pos = link_after_stage(pos, k);
    }
    return links;
}

RoutingResult route_messages(const MpNocNetwork& net, std::span<const Route> routes)
{
    for (const auto& [s, d] : routes) {
        check_port(net, s);
        check_port(net, d);
    }

    RoutingResult result;
    std::vector<std::size_t> pending(routes.size());
    for (std::size_t i = 0; i < pending.size(); ++i)
        pending[i] = i;
    std::stable_sort(pending.begin(), pending.end(),
                     [&](std::size_t a, std::size_t b) { return routes[a].first < routes[b].first; });

    if (net.kind() == MpNocKind::SharedBus) {
        // One word per bus cycle; the serialization is counted as N-1 contentions.
        for (const std::size_t i : pending)
            result.routed.push_back({routes[i]});
        result.passes = static_cast<std::uint32_t>(pending.size());
        result.conflicts = pending.empty() ? 0 : pending.size() - 1;
        return result;
    }

    // A claim is (stage, link); stage 0 holds the input ports and the last
    // stage the output ports, so crossbar routing uses just those two.
    const std::uint32_t levels = net.stages() + 1;
    while (!pending.empty()) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> claimed;
        std::vector<std::size_t> blocked;
        std::vector<Route> admitted;
        for (const std::size_t i : pending) {
            const auto [s, d] = routes[i];
            std::vector<std::pair<std::uint32_t, std::uint32_t>> claims{{0u, s}};
            if (is_delta(net.kind())) {
                const auto links = net.path(s, d);
                for (std::uint32_t k = 0; k < links.size(); ++k)
                    claims.emplace_back(k + 1, links[k]);
            } else {
                claims.emplace_back(levels, d);
            }
            const bool free = std::none_of(claims.begin(), claims.end(),
                                           [&](const auto& c) { return claimed.contains(c); });
            if (free) {
                claimed.insert(claims.begin(), claims.end());
                admitted.push_back(routes[i]);
            } else {
                blocked.push_back(i);
                ++result.conflicts;
            }
        }
        result.routed.push_back(std::move(admitted));
        ++result.passes;
        pending = std::move(blocked);
    }
    return result;
}

RoutingResult route_permutation(const MpNocNetwork& net, std::span<const std::uint32_t> perm)
{
    if (perm.size() != net.ports())
        throw RouterError(RouterError::Kind::NotAPermutation, "permutation size differs from port count");
    std::vector<bool> seen(perm.size(), false);
    std::vector<Route> routes;
    routes.reserve(perm.size());
    for (std::uint32_t s = 0; s < perm.size(); ++s) {
        const std::uint32_t d = perm[s];
        if (d >= perm.size() || seen[d])
            throw RouterError(RouterError::Kind::NotAPermutation, "destination " + std::to_string(d) + " repeated or out of range");
        seen[d] = true;
        routes.emplace_back(s, d);
    }
    return route_messages(net, routes);
}

TransferResult transfer(const MpNocNetwork& net, MpNocMode mode, std::span<const Message> messages,
                        const NocCost& cost)
{
    TransferResult result;
    const auto mismatch = [](const std::string& why) {
        throw RouterError(RouterError::Kind::ModeMismatch, why);
    };

    if (mode == MpNocMode::PeToPe) {
        std::vector<Route> routes;
        for (const auto& m : messages) {
            if (m.src.kind != Port::Kind::Pe || m.dst.kind != Port::Kind::Pe)
                mismatch("PE-PE mode carries only PE-to-PE messages");
            routes.emplace_back(m.src.index, m.dst.index);
        }
        const RoutingResult routing = route_messages(net, routes);
        // Map routed (src,dst) pairs back to messages in input order.
        std::vector<bool> used(messages.size(), false);
        for (std::uint32_t p = 0; p < routing.routed.size(); ++p) {
            for (const auto& r : routing.routed[p]) {
                for (std::size_t i = 0; i < messages.size(); ++i) {
                    if (!used[i] && routes[i] == r) {
                        used[i] = true;
                        result.deliveries.push_back({messages[i].src, messages[i].dst, messages[i].payload, p});
                        break;
                    }
                }
            }
        }
        result.passes = routing.passes;
        result.conflicts = routing.conflicts;
    } else {
        const Port::Kind special = mode == MpNocMode::AcuToPe ? Port::Kind::Acu : Port::Kind::Device;
        const char* label = mode == MpNocMode::AcuToPe ? "ACU-PE" : "device-PE";
        std::vector<std::uint64_t> broadcast_payloads;
        std::vector<std::size_t> outbound;
        std::vector<std::size_t> inbound;
        for (std::size_t i = 0; i < messages.size(); ++i) {
            const auto& m = messages[i];
            if (m.src.kind == special && m.dst.kind == Port::Kind::Pe) {
                check_port(net, m.dst.index);
                outbound.push_back(i);
                if (std::find(broadcast_payloads.begin(), broadcast_payloads.end(), m.payload) ==
                    broadcast_payloads.end())
                    broadcast_payloads.push_back(m.payload);
            } else if (m.src.kind == Port::Kind::Pe && m.dst.kind == special) {
                check_port(net, m.src.index);
                inbound.push_back(i);
            } else {
                mismatch(std::string(label) + " mode needs exactly one endpoint on the " +
                         (special == Port::Kind::Acu ? "ACU" : "device") + " port and the other on a PE");
            }
        }
        std::uint32_t pass = 0;
        for (const std::uint64_t payload : broadcast_payloads) {
            for (const std::size_t i : outbound)
                if (messages[i].payload == payload)
                    result.deliveries.push_back({messages[i].src, messages[i].dst, payload, pass});
            ++pass;
        }
        for (const std::size_t i : inbound)
            result.deliveries.push_back({messages[i].src, messages[i].dst, messages[i].payload, pass++});
        result.passes = pass;
        result.conflicts = pass == 0 ? 0 : pass - 1;
    }

    const std::uint64_t per_pass = net.kind() == MpNocKind::SharedBus ? cost.bus_pass_cycles : cost.pass_cycles;
    result.latency_cycles = result.passes * per_pass + cost.mode_cycles;
    return result;
}

} // namespace mppsoc::noc
