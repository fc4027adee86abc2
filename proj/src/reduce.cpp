#include <bit>
#include <sstream>

#include "mppsoc/rules.hpp"
#include "mppsoc/simulator.hpp"

namespace mppsoc::sim {

namespace {

struct HopPlan {
    std::uint32_t hops = 0;
    Direction travel = Direction::W;  // direction the partial sums move in
};

// Receiver and sender of a step share a row (stride < cols) or a column, so
// the sum travels straight along one axis; wrap links are used only when
// they give the shorter way round.
HopPlan plan_hops(const TopologyGraph& g, std::uint32_t stride)
{
    const PeId receiver{0, 0};
    const PeId sender = g.pe(stride);
    HopPlan plan;
    plan.hops = route_distance(g, sender, receiver);
    if (sender.row == 0)
        plan.travel = sender.col == plan.hops ? Direction::W : Direction::E;
    else
        plan.travel = sender.row == plan.hops ? Direction::N : Direction::S;
    return plan;
}

} // namespace

ReductionReport reduce_sum(const MppSoCConfig& config, std::span<const std::int32_t> values,
                           const CostModel& cost)
{
    const std::uint32_t n = config.pe_count();
    if (values.size() != n) {
        throw SimError(SimError::Kind::BadInput, "reduction needs one value per PE: got " +
                                                     std::to_string(values.size()) + " for " +
                                                     std::to_string(n) + " PEs");
    }
    if (!std::has_single_bit(n))
        throw SimError(SimError::Kind::NotPowerOfTwo, "recursive doubling needs a power-of-two PE count, got " + std::to_string(n));
    if (!config.neighborhood && !config.mpnoc)
        throw SimError(SimError::Kind::NoTransportAvailable, "no neighbourhood network or mpNoC to carry partial sums");
    if (const auto v = validate(config); !v.is_valid)
        throw SimError(SimError::Kind::BadInput, "configuration is invalid:\n" + format_report(v));

    std::optional<TopologyGraph> topology;
    std::optional<noc::MpNocNetwork> network;
    if (config.neighborhood)
        topology = build_topology(*config.neighborhood, config.rows, config.cols);
    else
        network = noc::build_network(*config.mpnoc, n);

    ReductionReport report;
    report.transport = topology ? std::string(to_string(*config.neighborhood))
                                : std::string(to_string(*config.mpnoc));

    std::vector<std::int64_t> partial(values.begin(), values.end());
    std::vector<std::int64_t> incoming(n);
    std::vector<std::uint32_t> everyone(n, lanes::kActive);
    std::vector<std::uint32_t> receivers(n);
    std::vector<std::int32_t> keys(n);

    const auto steps = static_cast<std::uint32_t>(std::countr_zero(n));
    for (std::uint32_t s = 0; s < steps; ++s) {
        const std::uint32_t stride = 1u << s;
        for (std::uint32_t i = 0; i < n; ++i)
            keys[i] = static_cast<std::int32_t>(i % (stride << 1));
        lanes::compare(receivers, keys, lanes::Compare::Eq, 0);

        std::uint64_t step_cycles = 0;
        if (topology) {
            const HopPlan plan = plan_hops(*topology, stride);
            incoming = partial;
            for (std::uint32_t h = 0; h < plan.hops; ++h)
                neighbor_exchange(*topology, std::span<std::int64_t>(incoming), everyone, plan.travel, 0);
            step_cycles += plan.hops * cost.hop;
            report.per_step_hop_counts.push_back(plan.hops);
            report.per_step_passes.push_back(0);
        } else {
            std::vector<noc::Message> messages;
            for (std::uint32_t i = 0; i < n; i += stride << 1)
                messages.push_back({noc::Port::pe(i + stride), noc::Port::pe(i),
                                    static_cast<std::uint64_t>(partial[i + stride])});
            const auto t = noc::transfer(*network, noc::MpNocMode::PeToPe, messages, cost.noc);
            std::fill(incoming.begin(), incoming.end(), 0);
            for (const auto& d : t.deliveries)
                incoming[d.dst.index] = static_cast<std::int64_t>(d.payload);
            step_cycles += t.latency_cycles;
            report.per_step_hop_counts.push_back(0);
            report.per_step_passes.push_back(t.passes);
        }

        lanes::accumulate_masked_i64(partial, incoming, receivers);
        step_cycles += cost.add;
        report.per_step_cycles.push_back(step_cycles);
        report.total_cycles += step_cycles;
        ++report.transfer_add_steps;
    }

    report.result = partial[0];
    return report;
}

std::string format_text(const ReductionReport& report)
{
    std::ostringstream out;
    out << "reduce: sum=" << report.result << " steps=" << report.transfer_add_steps
        << " cycles=" << report.total_cycles << " transport=" << report.transport << '\n';
    for (std::size_t s = 0; s < report.per_step_cycles.size(); ++s) {
        out << "  step " << s << ": hops=" << report.per_step_hop_counts[s]
            << " passes=" << report.per_step_passes[s] << " cycles=" << report.per_step_cycles[s] << '\n';
    }
    return out.str();
}

std::string format_kv(const ReductionReport& report)
{
    std::ostringstream out;
    out << "kind=reduce\n"
        << "sum=" << report.result << '\n'
        << "steps=" << report.transfer_add_steps << '\n'
        << "cycles=" << report.total_cycles << '\n'
        << "transport=" << report.transport << '\n';
    for (std::size_t s = 0; s < report.per_step_cycles.size(); ++s) {
        out << "step." << s << ".hops=" << report.per_step_hop_counts[s] << '\n'
            << "step." << s << ".passes=" << report.per_step_passes[s] << '\n'
            << "step." << s << ".cycles=" << report.per_step_cycles[s] << '\n';
    }
    return out.str();
}

} // namespace mppsoc::sim
