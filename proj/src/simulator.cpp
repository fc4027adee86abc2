#include "mppsoc/simulator.hpp"

#include <sstream>

namespace mppsoc::sim {

namespace {

// Simulated state is capped to keep a mistyped configuration from exhausting memory.
constexpr std::uint64_t kMaxSimulatedWords = std::uint64_t{1} << 28;

bool direction_wired(Neighborhood kind, Direction d)
{
    switch (kind) {
    case Neighborhood::Linear:
    case Neighborhood::Ring: return d == Direction::E || d == Direction::W;
    case Neighborhood::Mesh2D:
    case Neighborhood::Torus2D:
        return d == Direction::E || d == Direction::W || d == Direction::N || d == Direction::S;
    case Neighborhood::Xnet: return true;
    }
    return false;
}

template <typename T>
void exchange(const TopologyGraph& graph, std::span<T> lanes, std::span<const std::uint32_t> active,
              Direction d, T boundary)
{
    const Direction from = opposite(d);
    std::vector<T> incoming(lanes.size());
    for (std::uint32_t i = 0; i < lanes.size(); ++i) {
        const std::int32_t src = graph.ports(i)[static_cast<std::size_t>(from)];
        incoming[i] = (src != TopologyGraph::kNoNeighbor && active[static_cast<std::size_t>(src)] != 0)
                          ? lanes[static_cast<std::size_t>(src)]
                          : boundary;
    }
    if constexpr (std::is_same_v<T, std::uint32_t>) {
        lanes::select_masked(lanes, incoming, active);
    } else {
        for (std::size_t i = 0; i < lanes.size(); ++i)
            if (active[i] != 0)
                lanes[i] = incoming[i];
    }
}

} // namespace

void neighbor_exchange(const TopologyGraph& graph, std::span<std::uint32_t> lanes,
                       std::span<const std::uint32_t> active, Direction d, std::uint32_t boundary)
{
    exchange(graph, lanes, active, d, boundary);
}

void neighbor_exchange(const TopologyGraph& graph, std::span<std::int64_t> lanes,
                       std::span<const std::uint32_t> active, Direction d, std::int64_t boundary)
{
    exchange(graph, lanes, active, d, boundary);
}

SimMachine::SimMachine(const MppSoCConfig& config, CostModel cost)
    : pe_count_(config.pe_count()),
      pe_words_(pe_geometry(config).words),
      cost_(cost)
{
    const std::uint64_t acu_words = acu_geometry(config).words;
    if (pe_words_ * pe_count_ > kMaxSimulatedWords || acu_words > kMaxSimulatedWords) {
        throw SimError(SimError::Kind::TooLarge, "configuration too large to simulate (" +
                                                     std::to_string(pe_count_) + " PEs x " +
                                                     std::to_string(pe_words_) + " words)");
    }
    if (config.neighborhood)
        topology_ = build_topology(*config.neighborhood, config.rows, config.cols);
    if (config.mpnoc)
        network_ = noc::build_network(*config.mpnoc, pe_count_);

    regs_.assign(std::size_t{kRegisters} * pe_count_, 0);
    memory_.assign(static_cast<std::size_t>(pe_words_) * pe_count_, 0);
    active_.assign(pe_count_, lanes::kActive);
    indices_.resize(pe_count_);
    for (std::uint32_t i = 0; i < pe_count_; ++i)
        indices_[i] = static_cast<std::int32_t>(i);
    acu_memory_.assign(static_cast<std::size_t>(acu_words), 0);
}

std::span<const std::uint32_t> SimMachine::reg(unsigned r) const
{
    return std::span<const std::uint32_t>(regs_).subspan(std::size_t{r % kRegisters} * pe_count_, pe_count_);
}

std::span<std::uint32_t> SimMachine::reg_mut(unsigned r)
{
    return std::span<std::uint32_t>(regs_).subspan(std::size_t{r % kRegisters} * pe_count_, pe_count_);
}

void SimMachine::set_register(unsigned r, std::span<const std::uint32_t> values)
{
    if (r >= kRegisters || values.size() != pe_count_)
        throw SimError(SimError::Kind::BadInput, "register load needs r0..r7 and one value per PE");
    std::copy(values.begin(), values.end(), reg_mut(r).begin());
}

std::uint32_t SimMachine::acu_register(unsigned r) const { return acu_regs_.at(r); }
void SimMachine::set_acu_register(unsigned r, std::uint32_t value) { acu_regs_.at(r) = value; }

std::uint32_t SimMachine::pe_memory(std::uint32_t pe, std::uint64_t addr) const
{
    if (pe >= pe_count_ || addr >= pe_words_)
        throw SimError(SimError::Kind::MemoryOutOfBounds, "PE " + std::to_string(pe) + " address " + std::to_string(addr));
    return memory_[static_cast<std::size_t>(addr) * pe_count_ + pe];
}

void SimMachine::set_pe_memory(std::uint32_t pe, std::uint64_t addr, std::uint32_t value)
{
    if (pe >= pe_count_ || addr >= pe_words_)
        throw SimError(SimError::Kind::MemoryOutOfBounds, "PE " + std::to_string(pe) + " address " + std::to_string(addr));
    memory_[static_cast<std::size_t>(addr) * pe_count_ + pe] = value;
}

std::uint32_t SimMachine::acu_memory(std::uint64_t addr) const
{
    if (addr >= acu_memory_.size())
        throw SimError(SimError::Kind::MemoryOutOfBounds, "ACU address " + std::to_string(addr));
    return acu_memory_[static_cast<std::size_t>(addr)];
}

void SimMachine::set_acu_memory(std::uint64_t addr, std::uint32_t value)
{
    if (addr >= acu_memory_.size())
        throw SimError(SimError::Kind::MemoryOutOfBounds, "ACU address " + std::to_string(addr));
    acu_memory_[static_cast<std::size_t>(addr)] = value;
}

std::span<std::uint32_t> SimMachine::memory_row(std::uint64_t addr, int line)
{
    if (addr >= pe_words_) {
        std::uint32_t first = 0;
        while (first < pe_count_ && active_[first] == 0)
            ++first;
        throw SimError(SimError::Kind::MemoryOutOfBounds,
                       "line " + std::to_string(line) + ": PE " + std::to_string(first) + " word address " +
                           std::to_string(addr) + " outside its " + std::to_string(pe_words_) + "-word memory",
                       line);
    }
    return std::span<std::uint32_t>(memory_).subspan(static_cast<std::size_t>(addr) * pe_count_, pe_count_);
}

void SimMachine::exec_movd(const Instruction& ins)
{
    if (!topology_ || !direction_wired(topology_->kind(), ins.dir)) {
        throw SimError(SimError::Kind::DirectionUnavailable,
                       "line " + std::to_string(ins.line) + ": direction " + std::string(to_string(ins.dir)) +
                           " not available" +
                           (topology_ ? " on a " + std::string(to_string(topology_->kind())) + " network"
                                      : " without a neighbourhood network"),
                       ins.line);
    }
    neighbor_exchange(*topology_, reg_mut(ins.regs[0]), active_, ins.dir, cost_.boundary_value);
}

std::uint64_t SimMachine::exec_nocsend(const Instruction& ins)
{
    if (!network_)
        throw SimError(SimError::Kind::NocUnavailable, "line " + std::to_string(ins.line) + ": no mpNoC configured", ins.line);

    const auto src_reg = reg(ins.regs[0]);
    std::vector<noc::Message> messages;
    for (std::uint32_t i = 0; i < pe_count_; ++i) {
        if (active_[i] == 0)
            continue;
        const std::int64_t dst = ins.target.apply(i);
        if (dst < 0 || dst >= static_cast<std::int64_t>(pe_count_)) {
            throw SimError(SimError::Kind::NocError,
                           "line " + std::to_string(ins.line) + ": PE " + std::to_string(i) + " targets PE " +
                               std::to_string(dst) + " outside the array",
                           ins.line);
        }
        noc::Message m;
        m.dst = noc::Port::pe(static_cast<std::uint32_t>(dst));
        switch (ins.mode) {
        case noc::MpNocMode::PeToPe:
            m.src = noc::Port::pe(i);
            m.payload = src_reg[i];
            break;
        case noc::MpNocMode::AcuToPe:
            m.src = noc::Port::acu();
            m.payload = acu_regs_[ins.regs[0]];
            break;
        case noc::MpNocMode::DeviceToPe:
            if (device_input_.empty())
                throw SimError(SimError::Kind::DeviceUnderflow, "line " + std::to_string(ins.line) + ": device input exhausted", ins.line);
            m.src = noc::Port::device();
            m.payload = device_input_.front();
            device_input_.pop_front();
            break;
        }
        messages.push_back(m);
    }

    noc::TransferResult result;
    try {
        result = noc::transfer(*network_, ins.mode, messages, cost_.noc);
    } catch (const noc::RouterError& e) {
        throw SimError(SimError::Kind::NocError, "line " + std::to_string(ins.line) + ": " + e.what(), ins.line);
    }

    // Deliveries to inactive PEs are dropped so masked PEs keep their state.
    auto dst_reg = reg_mut(ins.regs[0]);
    for (const auto& d : result.deliveries)
        if (active_[d.dst.index] != 0)
            dst_reg[d.dst.index] = static_cast<std::uint32_t>(d.payload);
    return result.latency_cycles;
}

void SimMachine::exec_mask(const Predicate& pred)
{
    std::vector<std::int32_t> keys(pe_count_);
    for (std::uint32_t i = 0; i < pe_count_; ++i)
        keys[i] = static_cast<std::int32_t>(pred.lhs.apply(indices_[i]));
    lanes::compare(active_, keys, pred.cmp, pred.value);
}

std::uint64_t SimMachine::step(const Instruction& ins)
{
    std::uint64_t charge = cost_.issue;
    switch (ins.op) {
    case Opcode::Ldi:
        lanes::fill_masked(reg_mut(ins.regs[0]), ins.imm, active_);
        break;
    case Opcode::Ld:
        if (lanes::count_active(active_) > 0)
            lanes::select_masked(reg_mut(ins.regs[0]), memory_row(ins.imm, ins.line), active_);
        charge += cost_.load;
        break;
    case Opcode::St:
        if (lanes::count_active(active_) > 0)
            lanes::select_masked(memory_row(ins.imm, ins.line), reg(ins.regs[0]), active_);
        charge += cost_.store;
        break;
    case Opcode::Add:
        lanes::add_masked(reg_mut(ins.regs[0]), reg(ins.regs[1]), reg(ins.regs[2]), active_);
        charge += cost_.add;
        break;
    case Opcode::Movd:
        exec_movd(ins);
        charge += cost_.hop;
        break;
    case Opcode::NocSend:
        charge += exec_nocsend(ins);
        break;
    case Opcode::Mask:
        exec_mask(ins.pred);
        break;
    case Opcode::Unmask:
        std::fill(active_.begin(), active_.end(), lanes::kActive);
        break;
    case Opcode::Halt:
        break;
    }
    cycles_ += charge;
    return charge;
}

SimReport run(SimMachine& machine, const SimProgram& program, bool with_snapshot)
{
    SimReport report;
    report.simd_backend = std::string(lanes::active_kernels().name);
    for (const auto& ins : program.code) {
        const std::uint64_t c = machine.step(ins);
        report.charges.push_back({ins.line, ins.op, c});
        report.total_cycles += c;
        ++report.instructions;
        if (ins.op == Opcode::Halt)
            break;
    }
    if (with_snapshot) {
        Snapshot snap;
        snap.registers.resize(machine.pe_count());
        for (unsigned r = 0; r < kRegisters; ++r) {
            const auto lanes = machine.reg(r);
            for (std::uint32_t pe = 0; pe < machine.pe_count(); ++pe)
                snap.registers[pe][r] = lanes[pe];
        }
        snap.active.assign(machine.active().begin(), machine.active().end());
        report.snapshot = std::move(snap);
    }
    return report;
}

std::string format_text(const SimReport& report)
{
    std::ostringstream out;
    out << "program: instructions=" << report.instructions << " cycles=" << report.total_cycles
        << " simd=" << report.simd_backend << '\n';
    if (report.snapshot) {
        const auto& s = *report.snapshot;
        for (std::size_t pe = 0; pe < s.registers.size(); ++pe) {
            out << "  pe " << pe << (s.active[pe] != 0 ? "  " : "* ");
            for (unsigned r = 0; r < kRegisters; ++r)
                out << " r" << r << '=' << s.registers[pe][r];
            out << '\n';
        }
    }
    return out.str();
}

std::string format_kv(const SimReport& report)
{
    std::ostringstream out;
    out << "kind=program\n"
        << "instructions=" << report.instructions << '\n'
        << "cycles=" << report.total_cycles << '\n';
    for (std::size_t i = 0; i < report.charges.size(); ++i) {
        const auto& c = report.charges[i];
        out << "charge." << i << '=' << to_string(c.op) << ':' << c.line << ':' << c.cycles << '\n';
    }
    if (report.snapshot) {
        const auto& s = *report.snapshot;
        for (std::size_t pe = 0; pe < s.registers.size(); ++pe) {
            for (unsigned r = 0; r < kRegisters; ++r)
                out << "pe." << pe << ".r" << r << '=' << s.registers[pe][r] << '\n';
            out << "pe." << pe << ".active=" << (s.active[pe] != 0 ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

} // namespace mppsoc::sim
