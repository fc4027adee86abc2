#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mppsoc/config.hpp"
#include "mppsoc/error.hpp"
#include "mppsoc/lanes.hpp"
#include "mppsoc/mpnoc.hpp"
#include "mppsoc/topology.hpp"

namespace mppsoc::sim {

class SimError : public Error {
public:
    enum class Kind {
        UnknownMnemonic,
        BadOperand,
        MissingHalt,
        DirectionUnavailable,
        NocUnavailable,
        NocError,
        MemoryOutOfBounds,
        DeviceUnderflow,
        NotPowerOfTwo,
        NoTransportAvailable,
        BadInput,
        BadCostModel,
        TooLarge,
    };

    SimError(Kind kind, std::string message, int line = 0)
        : Error(std::move(message)), kind_(kind), line_(line)
    {
    }
    Kind kind() const { return kind_; }
    int line() const { return line_; }  // program line, 0 if none

private:
    Kind kind_;
    int line_;
};

// Cycle charges. Every instruction pays `issue`; ADD/LD/ST add their own
// cost, MOVD one hop, NOCSEND the mpNoC transfer latency.
struct CostModel {
    std::uint64_t issue = 1;
    std::uint64_t add = 1;
    std::uint64_t load = 1;
    std::uint64_t store = 1;
    std::uint64_t hop = 1;
    noc::NocCost noc;
    std::uint32_t boundary_value = 0;  // received by edge PEs on MOVD

    bool operator==(const CostModel&) const = default;
};

// Same `key = value` syntax as the configuration file. Keys: issue, add,
// load, store, hop, noc_pass, bus_pass, noc_mode, boundary_value.
CostModel parse_cost_model(std::string_view text);

// f(idx) over the PE index, e.g. `idx`, `idx+1`, `idx^4`, `idx%8`, `3`.
struct IndexExpr {
    enum class Op { Identity, Add, Sub, Xor, And, Mod, Constant };
    Op op = Op::Identity;
    std::int64_t operand = 0;

    std::int64_t apply(std::int64_t idx) const;
    bool operator==(const IndexExpr&) const = default;
};

struct Predicate {
    IndexExpr lhs;
    lanes::Compare cmp = lanes::Compare::Eq;
    std::int32_t value = 0;

    bool operator==(const Predicate&) const = default;
};

enum class Opcode { Ldi, Ld, St, Add, Movd, NocSend, Mask, Unmask, Halt };

struct Instruction {
    Opcode op = Opcode::Halt;
    std::array<std::uint8_t, 3> regs{};  // dst/src registers in operand order
    std::uint32_t imm = 0;               // LDI value or LD/ST word address
    Direction dir = Direction::E;
    noc::MpNocMode mode = noc::MpNocMode::PeToPe;
    IndexExpr target;
    Predicate pred;
    int line = 0;

    bool operator==(const Instruction&) const = default;
};

struct SimProgram {
    std::vector<Instruction> code;
};

inline constexpr unsigned kRegisters = 8;

// One instruction per line, operands comma separated, '#' comments:
//   LDI r,imm | LD r,addr | ST r,addr | ADD r,a,b | MOVD r,DIR
//   NOCSEND pe|acu|dev,EXPR,r | MASK PRED | UNMASK | HALT
// PRED is `even`, `odd`, `all` or `EXPR CMP value`.
SimProgram load_program(std::string_view text);

// N PEs with eight 32-bit registers, a private word memory and an activity
// flag, driven by one ACU. Registers and memories are stored lane-major so
// each broadcast instruction is a single masked lane kernel.
class SimMachine {
public:
    explicit SimMachine(const MppSoCConfig& config, CostModel cost = {});

    std::uint32_t pe_count() const { return pe_count_; }
    std::uint64_t pe_words() const { return pe_words_; }
    const CostModel& cost() const { return cost_; }
    const std::optional<TopologyGraph>& topology() const { return topology_; }
    const std::optional<noc::MpNocNetwork>& network() const { return network_; }

    std::span<const std::uint32_t> reg(unsigned r) const;
    void set_register(unsigned r, std::span<const std::uint32_t> values);
    std::uint32_t acu_register(unsigned r) const;
    void set_acu_register(unsigned r, std::uint32_t value);

    std::uint32_t pe_memory(std::uint32_t pe, std::uint64_t addr) const;
    void set_pe_memory(std::uint32_t pe, std::uint64_t addr, std::uint32_t value);
    std::uint32_t acu_memory(std::uint64_t addr) const;
    void set_acu_memory(std::uint64_t addr, std::uint32_t value);

    std::span<const std::uint32_t> active() const { return active_; }
    void push_device_input(std::uint32_t word) { device_input_.push_back(word); }

    std::uint64_t cycles() const { return cycles_; }

    // Executes one instruction on all active PEs and returns its charge.
    std::uint64_t step(const Instruction& ins);

private:
    std::span<std::uint32_t> reg_mut(unsigned r);
    std::span<std::uint32_t> memory_row(std::uint64_t addr, int line);
    void exec_movd(const Instruction& ins);
    std::uint64_t exec_nocsend(const Instruction& ins);
    void exec_mask(const Predicate& pred);

    std::uint32_t pe_count_;
    std::uint64_t pe_words_;
    CostModel cost_;
    std::optional<TopologyGraph> topology_;
    std::optional<noc::MpNocNetwork> network_;
    std::vector<std::uint32_t> regs_;     // kRegisters x N
    std::vector<std::uint32_t> memory_;   // words x N
    std::vector<std::uint32_t> active_;   // lane mask
    std::vector<std::int32_t> indices_;   // 0..N-1
    std::array<std::uint32_t, kRegisters> acu_regs_{};
    std::vector<std::uint32_t> acu_memory_;
    std::deque<std::uint32_t> device_input_;
    std::uint64_t cycles_ = 0;
};

struct InstructionCharge {
    int line = 0;
    Opcode op = Opcode::Halt;
    std::uint64_t cycles = 0;
};

struct Snapshot {
    std::vector<std::array<std::uint32_t, kRegisters>> registers;  // per PE
    std::vector<std::uint32_t> active;                             // per PE
};

struct SimReport {
    std::uint64_t total_cycles = 0;
    std::size_t instructions = 0;
    std::vector<InstructionCharge> charges;
    std::optional<Snapshot> snapshot;
    std::string simd_backend;
};

// Runs until HALT. `total_cycles` is the sum of the per-instruction charges.
SimReport run(SimMachine& machine, const SimProgram& program, bool with_snapshot = false);

// Lock-step neighbour exchange: every active PE sends lanes[i] through port
// `d` and receives through the opposite port; a PE whose opposite neighbour
// is missing or inactive receives `boundary`. Inactive PEs are unchanged.
void neighbor_exchange(const TopologyGraph& graph, std::span<std::uint32_t> lanes,
                       std::span<const std::uint32_t> active, Direction d, std::uint32_t boundary);
void neighbor_exchange(const TopologyGraph& graph, std::span<std::int64_t> lanes,
                       std::span<const std::uint32_t> active, Direction d, std::int64_t boundary);

struct ReductionReport {
    std::int64_t result = 0;
    std::uint32_t transfer_add_steps = 0;
    std::uint64_t total_cycles = 0;
    std::vector<std::uint32_t> per_step_hop_counts;  // 0 when the step used the mpNoC
    std::vector<std::uint32_t> per_step_passes;      // 0 when the step used neighbours
    std::vector<std::uint64_t> per_step_cycles;
    std::string transport;  // neighbourhood or mpNoC kind name
};

// Recursive-doubling sum: at step s every PE with idx % 2^(s+1) == 0 receives
// the partial sum of PE idx + 2^s and adds it. Transport uses the
// neighbourhood network when present, otherwise the mpNoC in PE-PE mode.
// Each step costs its transport plus one `add`.
ReductionReport reduce_sum(const MppSoCConfig& config, std::span<const std::int32_t> values,
                           const CostModel& cost = {});

std::string format_text(const SimReport& report);
std::string format_kv(const SimReport& report);
std::string format_text(const ReductionReport& report);
std::string format_kv(const ReductionReport& report);

std::string_view to_string(Opcode op);

} // namespace mppsoc::sim
