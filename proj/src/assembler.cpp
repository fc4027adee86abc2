#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "mppsoc/simulator.hpp"

namespace mppsoc::sim {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string strip_spaces(std::string_view s)
{
    std::string out;
    for (const char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c;
    return out;
}

std::string upper(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::optional<std::int64_t> parse_int(std::string_view s)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    int base = 10;
    if (s.starts_with("0x") || s.starts_with("0X")) {
        base = 16;
        s.remove_prefix(2);
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() ||
        v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        return std::nullopt;
    const auto signed_v = static_cast<std::int64_t>(v);
    return negative ? -signed_v : signed_v;
}

[[noreturn]] void bad_operand(int line, std::string_view what)
{
    throw SimError(SimError::Kind::BadOperand, "line " + std::to_string(line) + ": " + std::string(what), line);
}

std::uint8_t parse_reg(std::string_view s, int line)
{
    s = trim(s);
    if (s.size() == 2 && (s[0] == 'r' || s[0] == 'R') && s[1] >= '0' && s[1] < '0' + static_cast<char>(kRegisters))
        return static_cast<std::uint8_t>(s[1] - '0');
    bad_operand(line, "expected register r0..r7, got '" + std::string(s) + "'");
}

std::optional<IndexExpr> parse_expr(std::string_view text)
{
    const std::string s = strip_spaces(text);
    if (s == "idx")
        return IndexExpr{};
    if (s.starts_with("idx") && s.size() > 4) {
        IndexExpr e;
        switch (s[3]) {
        case '+': e.op = IndexExpr::Op::Add; break;
        case '-': e.op = IndexExpr::Op::Sub; break;
        case '^': e.op = IndexExpr::Op::Xor; break;
        case '&': e.op = IndexExpr::Op::And; break;
        case '%': e.op = IndexExpr::Op::Mod; break;
        default: return std::nullopt;
        }
        const auto v = parse_int(std::string_view(s).substr(4));
        if (!v || *v < 0 || (e.op == IndexExpr::Op::Mod && *v == 0))
            return std::nullopt;
        e.operand = *v;
        return e;
    }
    if (const auto v = parse_int(s); v && *v >= 0)
        return IndexExpr{IndexExpr::Op::Constant, *v};
    return std::nullopt;
}

std::optional<Predicate> parse_predicate(std::string_view text)
{
    std::string s = strip_spaces(text);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')')
        s = s.substr(1, s.size() - 2);
    if (s == "even" || s == "idxeven")
        return Predicate{{IndexExpr::Op::Mod, 2}, lanes::Compare::Eq, 0};
    if (s == "odd" || s == "idxodd")
        return Predicate{{IndexExpr::Op::Mod, 2}, lanes::Compare::Eq, 1};
    if (s == "all")
        return Predicate{{}, lanes::Compare::Ge, 0};

    static constexpr std::pair<std::string_view, lanes::Compare> kOps[] = {
        {"==", lanes::Compare::Eq}, {"!=", lanes::Compare::Ne}, {"<=", lanes::Compare::Le},
        {">=", lanes::Compare::Ge}, {"<", lanes::Compare::Lt},  {">", lanes::Compare::Gt}};
    for (const auto& [tok, cmp] : kOps) {
        const auto at = s.find(tok);
        if (at == std::string::npos)
            continue;
        const auto lhs = parse_expr(std::string_view(s).substr(0, at));
        const auto rhs = parse_int(std::string_view(s).substr(at + tok.size()));
        if (!lhs || !rhs || *rhs < std::numeric_limits<std::int32_t>::min() ||
            *rhs > std::numeric_limits<std::int32_t>::max())
            return std::nullopt;
        return Predicate{*lhs, cmp, static_cast<std::int32_t>(*rhs)};
    }
    return std::nullopt;
}

std::vector<std::string_view> split_operands(std::string_view s)
{
    std::vector<std::string_view> out;
    if (trim(s).empty())
        return out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace

std::int64_t IndexExpr::apply(std::int64_t idx) const
{
    switch (op) {
    case Op::Identity: return idx;
    case Op::Add: return idx + operand;
    case Op::Sub: return idx - operand;
    case Op::Xor: return idx ^ operand;
    case Op::And: return idx & operand;
    case Op::Mod: return idx % operand;
    case Op::Constant: return operand;
    }
    return idx;
}

std::string_view to_string(Opcode op)
{
    switch (op) {
    case Opcode::Ldi: return "LDI";
    case Opcode::Ld: return "LD";
    case Opcode::St: return "ST";
    case Opcode::Add: return "ADD";
    case Opcode::Movd: return "MOVD";
    case Opcode::NocSend: return "NOCSEND";
    case Opcode::Mask: return "MASK";
    case Opcode::Unmask: return "UNMASK";
    case Opcode::Halt: return "HALT";
    }
    return "?";
}

SimProgram load_program(std::string_view text)
{
    SimProgram program;
    int line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto space = std::find_if(line.begin(), line.end(),
                                        [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        const std::string mnemonic = upper(std::string_view(line.begin(), space));
        const auto ops = split_operands(std::string_view(space, line.end()));

        const auto need = [&](std::size_t n) {
            if (ops.size() != n)
                bad_operand(line_no, mnemonic + " takes " + std::to_string(n) + " operand(s)");
        };

        Instruction ins;
        ins.line = line_no;
        if (mnemonic == "LDI") {
            need(2);
            ins.op = Opcode::Ldi;
            ins.regs[0] = parse_reg(ops[0], line_no);
            const auto v = parse_int(ops[1]);
            if (!v || *v < std::numeric_limits<std::int32_t>::min() || *v > std::numeric_limits<std::uint32_t>::max())
                bad_operand(line_no, "immediate '" + std::string(ops[1]) + "' is not a 32-bit value");
            ins.imm = static_cast<std::uint32_t>(*v);
        } else if (mnemonic == "LD" || mnemonic == "ST") {
            need(2);
            ins.op = mnemonic == "LD" ? Opcode::Ld : Opcode::St;
            ins.regs[0] = parse_reg(ops[0], line_no);
            const auto v = parse_int(ops[1]);
            if (!v || *v < 0 || *v > std::numeric_limits<std::uint32_t>::max())
                bad_operand(line_no, "bad word address '" + std::string(ops[1]) + "'");
            ins.imm = static_cast<std::uint32_t>(*v);
        } else if (mnemonic == "ADD") {
            need(3);
            ins.op = Opcode::Add;
            for (std::size_t i = 0; i < 3; ++i)
                ins.regs[i] = parse_reg(ops[i], line_no);
        } else if (mnemonic == "MOVD") {
            need(2);
            ins.op = Opcode::Movd;
            ins.regs[0] = parse_reg(ops[0], line_no);
            const auto d = parse_direction(upper(ops[1]));
            if (!d)
                bad_operand(line_no, "unknown direction '" + std::string(ops[1]) + "'");
            ins.dir = *d;
        } else if (mnemonic == "NOCSEND") {
            need(3);
            ins.op = Opcode::NocSend;
            const std::string mode = upper(ops[0]);
            if (mode == "PE")
                ins.mode = noc::MpNocMode::PeToPe;
            else if (mode == "ACU")
                ins.mode = noc::MpNocMode::AcuToPe;
            else if (mode == "DEV")
                ins.mode = noc::MpNocMode::DeviceToPe;
            else
                bad_operand(line_no, "unknown mpNoC mode '" + std::string(ops[0]) + "'");
            const auto e = parse_expr(ops[1]);
            if (!e)
                bad_operand(line_no, "bad destination expression '" + std::string(ops[1]) + "'");
            ins.target = *e;
            ins.regs[0] = parse_reg(ops[2], line_no);
        } else if (mnemonic == "MASK") {
            need(1);
            ins.op = Opcode::Mask;
            const auto p = parse_predicate(ops[0]);
            if (!p)
                bad_operand(line_no, "bad predicate '" + std::string(ops[0]) + "'");
            ins.pred = *p;
        } else if (mnemonic == "UNMASK" || mnemonic == "HALT") {
            need(0);
            ins.op = mnemonic == "HALT" ? Opcode::Halt : Opcode::Unmask;
        } else {
            throw SimError(SimError::Kind::UnknownMnemonic,
                           "line " + std::to_string(line_no) + ": unknown mnemonic '" + mnemonic + "'", line_no);
        }
        program.code.push_back(ins);
    }
    if (program.code.empty() || program.code.back().op != Opcode::Halt)
        throw SimError(SimError::Kind::MissingHalt, "program does not end with HALT", line_no);
    return program;
}

CostModel parse_cost_model(std::string_view text)
{
    CostModel cost;
    int line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        const auto fail = [&](const std::string& why) {
            throw SimError(SimError::Kind::BadCostModel, "cost model line " + std::to_string(line_no) + ": " + why);
        };
        if (eq == std::string_view::npos)
            fail("expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const auto value = parse_int(trim(line.substr(eq + 1)));
        if (!value || *value < 0 || *value > std::numeric_limits<std::uint32_t>::max())
            fail("bad value for '" + std::string(key) + "'");
        const auto v = static_cast<std::uint64_t>(*value);
        if (key == "issue") cost.issue = v;
        else if (key == "add") cost.add = v;
        else if (key == "load") cost.load = v;
        else if (key == "store") cost.store = v;
        else if (key == "hop") cost.hop = v;
        else if (key == "noc_pass") cost.noc.pass_cycles = v;
        else if (key == "bus_pass") cost.noc.bus_pass_cycles = v;
        else if (key == "noc_mode") cost.noc.mode_cycles = v;
        else if (key == "boundary_value") cost.boundary_value = static_cast<std::uint32_t>(v);
        else fail("unknown key '" + std::string(key) + "'");
    }
    return cost;
}

} // namespace mppsoc::sim
