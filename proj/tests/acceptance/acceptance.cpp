// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only if
// every selected criterion passes.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "mppsoc/mpnoc.hpp"
#include "mppsoc/rules.hpp"
#include "mppsoc/simulator.hpp"
#include "mppsoc/topology.hpp"
#include "mppsoc/vhdl_rewriter.hpp"
#include "oracles.hpp"

using namespace mppsoc;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kSweepSeconds = 1.0;            // criterion 1
constexpr int kVectorsPerShape = 100;            // criterion 2
constexpr std::uint32_t kMaxLog2Pes = 8;         // criterion 2
constexpr std::uint32_t kTrendPes = 64;          // criterion 3
constexpr double kTrendSeconds = 1.0;            // criterion 3
constexpr int kRewriteSamples = 50;              // criterion 4
constexpr double kRoutingSeconds = 30.0;         // criterion 5
constexpr double kGenerateSeconds = 1.0;         // criterion 6
constexpr std::uint32_t kTopologyMaxSide = 8;    // criterion 7
constexpr std::uint32_t kSeed = 0x6d707073;

struct Outcome {
    bool pass;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_seconds(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f s", s);
    return buf;
}

Outcome rule_sweep()
{
    Stopwatch clock;
    std::vector<std::optional<Neighborhood>> nbs{std::nullopt};
    for (const auto n : kAllNeighborhoods)
        nbs.emplace_back(n);
    std::vector<std::optional<MpNocKind>> nocs{std::nullopt};
    for (const auto k : kAllMpNocKinds)
        nocs.emplace_back(k);

    std::size_t total = 0, mismatches = 0;
    for (std::uint32_t rows = 1; rows <= 8; ++rows)
        for (std::uint32_t cols = 1; cols <= 8; ++cols)
            for (const auto& n : nbs)
                for (const auto& k : nocs) {
                    MppSoCConfig c;
                    c.rows = rows;
                    c.cols = cols;
                    c.neighborhood = n;
                    c.mpnoc = k;
                    const auto want = oracle::expected_rules(c);
                    const auto got = validate(c);
                    std::vector<RuleId> ids;
                    for (const auto& v : got.violations)
                        ids.push_back(v.rule);
                    ++total;
                    mismatches += (ids != want || got.is_valid != want.empty()) ? 1 : 0;
                }
    const double t = clock.seconds();
    std::ostringstream d;
    d << total << " configurations, " << mismatches << " disagreements, " << fmt_seconds(t) << " (limit "
      << kSweepSeconds << " s)";
    return {mismatches == 0 && total == 8 * 8 * 6 * 6 && t < kSweepSeconds, d.str()};
}

Outcome step_law()
{
    std::mt19937 rng(kSeed);
    std::size_t shapes = 0, runs = 0, failures = 0;
    std::string first_failure;
    for (std::uint32_t k = 0; k <= kMaxLog2Pes; ++k)
        for (const auto& c : oracle::reduction_configs(k)) {
            ++shapes;
            for (int i = 0; i < kVectorsPerShape; ++i) {
                std::vector<std::int32_t> v(c.pe_count());
                for (auto& x : v)
                    x = static_cast<std::int32_t>(rng());
                const auto r = sim::reduce_sum(c, v);
                ++runs;
                if (r.transfer_add_steps != k || r.result != oracle::sequential_sum(v)) {
                    if (failures++ == 0)
                        first_failure = " first: " + serialize_config(c);
                }
            }
        }
    std::ostringstream d;
    d << shapes << " shapes x " << kVectorsPerShape << " vectors, " << runs << " reductions, " << failures
      << " wrong" << first_failure;
    return {failures == 0, d.str()};
}

Outcome topology_trend()
{
    Stopwatch clock;
    const sim::CostModel cost;  // defaults
    const auto make = [](std::uint32_t rows, std::uint32_t cols, std::optional<Neighborhood> n,
                         std::optional<MpNocKind> k) {
        MppSoCConfig c;
        c.rows = rows;
        c.cols = cols;
        c.acu_mem_bytes = 64;
        c.pe_mem_bytes = 64;
        c.neighborhood = n;
        c.mpnoc = k;
        return c;
    };
    const auto linear = make(1, kTrendPes, Neighborhood::Linear, std::nullopt);
    const auto mesh = make(8, kTrendPes / 8, Neighborhood::Mesh2D, std::nullopt);
    const auto noc_only = make(1, kTrendPes, std::nullopt, MpNocKind::Crossbar);

    std::vector<std::int32_t> v(kTrendPes);
    std::iota(v.begin(), v.end(), 1);
    const auto cl = sim::reduce_sum(linear, v, cost).total_cycles;
    const auto cm = sim::reduce_sum(mesh, v, cost).total_cycles;
    const auto cn = sim::reduce_sum(noc_only, v, cost).total_cycles;
    const bool formula_ok = cl == oracle::hand_cycles(linear, cost) && cm == oracle::hand_cycles(mesh, cost) &&
                            cn == oracle::hand_cycles(noc_only, cost);
    const double t = clock.seconds();

    std::ostringstream d;
    d << "N=" << kTrendPes << " cycles linear=" << cl << " mesh2d=" << cm << " mpnoc-crossbar=" << cn
      << ", need linear <= mesh2d < mpnoc; hand formula " << (formula_ok ? "agrees" : "DISAGREES") << ", "
      << fmt_seconds(t);
    return {formula_ok && cl <= cm && cm < cn && t < kTrendSeconds, d.str()};
}

Outcome rewrite_correctness()
{
    std::mt19937 rng(kSeed);
    const auto templates = vhdl::bundled_templates();
    std::size_t files = 0;
    std::string problem;
    for (int i = 0; i < kRewriteSamples && problem.empty(); ++i) {
        auto c = oracle::random_valid_config(rng);
        c.mem_init.reset();  // generator would need the image on disk
        if (i % 2 == 0)
            c.mem_init = "img.hex";
        oracle::TempDir first, second;
        vhdl::GenerateOptions opts{first.path()};
        if (c.mem_init)
            oracle::spit(first.path() / *c.mem_init, "0\n");
        vhdl::generate(c, templates, first.path() / "out", opts);
        // Regenerate with the first output as the template set.
        vhdl::generate(c, vhdl::load_templates(first.path() / "out"), second.path(), opts);

        std::map<std::string, std::vector<vhdl::RewriteAction>> plan;
        for (const auto& p : vhdl::plan_actions(c))
            plan[p.file].push_back(p.action);
        for (const auto name : vhdl::kTemplateNames) {
            ++files;
            const auto text = oracle::slurp(first.path() / "out" / name);
            const auto after = vhdl::TemplateFile::from_text(std::string(name), text);
            const auto err = oracle::check_rewrite(templates.get(name), after, plan[std::string(name)]);
            if (!err.empty()) {
                problem = err + " for\n" + serialize_config(c);
                break;
            }
            if (oracle::slurp(second.path() / name) != text) {
                problem = std::string(name) + ": regeneration changed the file";
                break;
            }
        }
    }
    std::ostringstream d;
    d << kRewriteSamples << " configs, " << files << " files checked for planned-lines, values and idempotence";
    if (!problem.empty())
        d << "; " << problem;
    return {problem.empty() && files == kRewriteSamples * std::size(vhdl::kTemplateNames), d.str()};
}

Outcome min_routing()
{
    Stopwatch clock;
    std::size_t perms = 0, bad = 0;
    std::map<std::string, std::size_t> one_pass;
    for (std::uint32_t n = 1; n <= 3; ++n) {
        const std::uint32_t ports = 1u << n;
        const auto xbar = noc::build_network(MpNocKind::Crossbar, ports);
        for (const auto kind : {MpNocKind::DeltaOmega, MpNocKind::DeltaBaseline, MpNocKind::DeltaButterfly}) {
            const auto net = noc::build_network(kind, ports);
            const auto min = kind == MpNocKind::DeltaOmega      ? oracle::Min::Omega
                             : kind == MpNocKind::DeltaBaseline ? oracle::Min::Baseline
                                                                : oracle::Min::Butterfly;
            std::vector<std::uint32_t> perm(ports);
            std::iota(perm.begin(), perm.end(), 0u);
            do {
                ++perms;
                const auto r = noc::route_permutation(net, perm);
                bool ok = r.passes >= 1 && r.passes <= ports && r.routed.size() == r.passes;
                std::size_t delivered = 0;
                for (const auto& pass : r.routed) {
                    ok = ok && oracle::min_conflict_free(min, n, pass);
                    for (const auto& [s, d] : pass)
                        ok = ok && perm[s] == d;
                    delivered += pass.size();
                }
                ok = ok && delivered == ports;
                if (kind == MpNocKind::DeltaOmega)
                    ok = ok && noc::route_permutation(xbar, perm).passes == 1;
                bad += ok ? 0 : 1;
                if (ports == 8 && r.passes == 1)
                    ++one_pass[std::string(to_string(kind))];
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
    const double t = clock.seconds();
    std::ostringstream d;
    d << perms << " permutation routings, " << bad << " failing; one-pass at N=8:";
    for (const auto& [k, c] : one_pass)
        d << ' ' << k << '=' << c;
    d << "; " << fmt_seconds(t) << " (limit " << kRoutingSeconds << " s)";
    return {bad == 0 && t < kRoutingSeconds, d.str()};
}

Outcome generation_throughput()
{
    MppSoCConfig c;
    c.rows = 4;
    c.cols = 4;
    c.acu_mem_bytes = 4096;
    c.pe_mem_bytes = 4096;
    c.neighborhood = Neighborhood::Mesh2D;
    c.mpnoc = MpNocKind::Crossbar;
    oracle::TempDir dir;
    Stopwatch clock;
    const auto report = vhdl::generate(c, vhdl::bundled_templates(), dir.path());
    const double t = clock.seconds();

    std::size_t files = 0, lines = 0;
    for (const auto& e : fs::directory_iterator(dir.path())) {
        ++files;
        lines += oracle::split_lines(oracle::slurp(e.path())).size();
    }
    std::ostringstream d;
    d << "report files=" << report.files_written << " lines=" << report.lines_generated << ", disk files=" << files
      << " lines=" << lines << ", " << fmt_seconds(t) << " (limit " << kGenerateSeconds << " s)";
    return {files == report.files_written && lines == report.lines_generated && t < kGenerateSeconds, d.str()};
}

Outcome topology_invariants()
{
    std::size_t graphs = 0, failures = 0;
    std::string first;
    const auto fail = [&](const TopologyGraph& g, const std::string& what) {
        if (failures++ == 0)
            first = std::string(to_string(g.kind())) + " " + std::to_string(g.rows()) + "x" +
                    std::to_string(g.cols()) + ": " + what;
    };
    for (const auto kind : kAllNeighborhoods)
        for (std::uint32_t r = 1; r <= kTopologyMaxSide; ++r)
            for (std::uint32_t c = 1; c <= kTopologyMaxSide; ++c) {
                std::optional<TopologyGraph> built;
                try {
                    built = build_topology(kind, r, c);
                } catch (const TopologyError&) {
                    continue;
                }
                const auto& g = *built;
                ++graphs;
                const std::size_t n = std::size_t{r} * c;
                const std::size_t mesh = 2 * n - r - c;
                std::size_t want = 0;
                std::size_t max_degree = 0;
                bool regular = false;
                switch (kind) {
                case Neighborhood::Linear: want = n - 1; max_degree = 2; break;
                case Neighborhood::Ring: want = n; max_degree = 2; regular = true; break;
                case Neighborhood::Mesh2D: want = mesh; max_degree = 4; break;
                case Neighborhood::Torus2D: want = 2 * n; max_degree = 4; regular = true; break;
                case Neighborhood::Xnet: want = mesh + 2 * (std::size_t{r} - 1) * (c - 1); max_degree = 8; break;
                }
                if (g.edge_count() != want)
                    fail(g, "edge count " + std::to_string(g.edge_count()) + " != " + std::to_string(want));
                std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
                for (std::uint32_t u = 0; u < g.size(); ++u) {
                    std::set<std::uint32_t> nb;
                    for (const auto v : g.ports(u))
                        if (v >= 0) {
                            const auto w = static_cast<std::uint32_t>(v);
                            if (w == u || !nb.insert(w).second)
                                fail(g, "self loop or duplicate edge at " + std::to_string(u));
                            edges.insert({std::min(u, w), std::max(u, w)});
                            const auto& back = g.ports(w);
                            if (std::find(back.begin(), back.end(), static_cast<std::int32_t>(u)) == back.end())
                                fail(g, "asymmetric edge " + std::to_string(u) + "-" + std::to_string(w));
                        }
                    if (nb.size() > max_degree || (regular && nb.size() != max_degree))
                        fail(g, "degree " + std::to_string(nb.size()) + " at " + std::to_string(u));
                    const auto dist = oracle::bfs_distances(g, u);
                    for (std::uint32_t v = 0; v < g.size(); ++v)
                        if (route_distance(g, g.pe(u), g.pe(v)) != dist[v])
                            fail(g, "distance " + std::to_string(u) + "->" + std::to_string(v));
                }
                if (edges.size() != want)
                    fail(g, "distinct edges " + std::to_string(edges.size()));
            }
    std::ostringstream d;
    d << graphs << " graphs up to " << kTopologyMaxSide << "x" << kTopologyMaxSide << ", " << failures
      << " violations";
    if (failures)
        d << "; first: " << first;
    return {failures == 0, d.str()};
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria runner"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-7)")->check(CLI::Range(1, 7));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "rule-oracle sweep", rule_sweep},
        {2, "reduction step law", step_law},
        {3, "topology cost trend", topology_trend},
        {4, "rewrite correctness", rewrite_correctness},
        {5, "MIN routing oracle", min_routing},
        {6, "generation throughput", generation_throughput},
        {7, "topology invariants", topology_invariants},
    };

    bool all = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only)
            continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
