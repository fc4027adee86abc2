#include <doctest.h>

#include <map>
#include <sstream>

#include "mppsoc/cli.hpp"
#include "mppsoc/vhdl_rewriter.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using mppsoc::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "mppsocgen");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::string kMesh16 = "processor = minimips\nmethodology = reduction\nrows = 4\ncols = 4\n"
                            "acu_mem_bytes = 4096\npe_mem_bytes = 4096\nneighborhood = mesh2d\nmpnoc = crossbar\n";

std::size_t count_files(const fs::path& dir)
{
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir))
        n += e.is_regular_file() ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("validate")
{
    oracle::TempDir dir;
    const auto cfg = dir.path() / "mesh16.cfg";
    oracle::spit(cfg, kMesh16);
    auto r = invoke({"validate", cfg.string()});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("VALID\n", 0) == 0);

    oracle::spit(cfg, "rows=1\ncols=4\nacu_mem_bytes=16\npe_mem_bytes=16\nneighborhood=mesh2d\n");
    r = invoke({"validate", cfg.string()});
    CHECK(r.code == mppsoc::cli::kExitInvalidConfig);
    CHECK(r.out.find("R2") != std::string::npos);

    oracle::spit(cfg, "rows=1\ncols=4\nbogus\n");
    r = invoke({"validate", cfg.string()});
    CHECK(r.code == mppsoc::cli::kExitInvalidConfig);
    CHECK(r.err.find(cfg.string() + ":3:") != std::string::npos);

    r = invoke({"validate", (dir.path() / "missing.cfg").string()});
    CHECK(r.code == mppsoc::cli::kExitIo);
}

TEST_CASE("generate writes five files and a report")
{
    oracle::TempDir dir;
    const auto cfg = dir.path() / "mesh16.cfg";
    oracle::spit(cfg, kMesh16);
    const auto out = dir.path() / "out";
    const auto r = invoke({"generate", cfg.string(), "-o", out.string(), "--manifest", (dir.path() / "files.txt").string()});
    CHECK(r.code == 0);
    CHECK(count_files(out) == 5);
    for (const auto name : mppsoc::vhdl::kTemplateNames)
        CHECK(fs::is_regular_file(out / name));
    CHECK(r.out.find("generated: files=5") == 0);
    CHECK(r.out.find("reference point: files=38 lines=2566 time=3s") != std::string::npos);
    CHECK(r.err.find("generation took") != std::string::npos);
    CHECK(oracle::split_lines(oracle::slurp(dir.path() / "files.txt")).size() == 5);

    // Second run reproduces files and report byte for byte.
    std::map<std::string, std::string> first;
    for (const auto name : mppsoc::vhdl::kTemplateNames)
        first[std::string(name)] = oracle::slurp(out / name);
    const auto again = invoke({"generate", cfg.string(), "-o", out.string()});
    CHECK(again.out == r.out);
    for (const auto& [name, text] : first)
        CHECK(oracle::slurp(out / name) == text);

    const auto rep = invoke({"report", "-o", out.string()});
    CHECK(rep.code == 0);
    CHECK(rep.out == r.out);
    const auto kv = invoke({"report", "-o", out.string(), "--report", "kv"});
    CHECK(kv.out.find("kind=generate\nfiles=5\n") == 0);
}

TEST_CASE("invalid configurations generate nothing")
{
    oracle::TempDir dir;
    const auto cfg = dir.path() / "bad.cfg";
    oracle::spit(cfg, "rows=3\ncols=3\nacu_mem_bytes=16\npe_mem_bytes=16\nmpnoc=delta-omega\n");
    const auto out = dir.path() / "out";
    auto r = invoke({"generate", cfg.string(), "-o", out.string()});
    CHECK(r.code == mppsoc::cli::kExitInvalidConfig);
    CHECK_FALSE(fs::exists(out));

    r = invoke({"generate", cfg.string(), "-o", out.string(), "--force-report-only"});
    CHECK(r.code == mppsoc::cli::kExitInvalidConfig);
    CHECK(r.out.find("R1") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    oracle::spit(cfg, kMesh16);
    r = invoke({"generate", cfg.string(), "-o", out.string(), "--force-report-only"});
    CHECK(r.code == 0);
    CHECK(r.out.find("plan mem_pe.vhd: widthad_a => 10") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    r = invoke({"generate", cfg.string(), "-o", out.string(), "--templates", (dir.path() / "none").string()});
    CHECK(r.code == mppsoc::cli::kExitIo);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("simulate reduce")
{
    oracle::TempDir dir;
    const auto cfg = dir.path() / "mesh16.cfg";
    oracle::spit(cfg, kMesh16);
    const auto out = dir.path() / "run";
    auto r = invoke({"simulate", cfg.string(), "--app", "reduce", "--values", "0..15", "-o", out.string(),
                     "--edges", (dir.path() / "edges.txt").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("sum=120 steps=4") != std::string::npos);
    CHECK(oracle::split_lines(oracle::slurp(dir.path() / "edges.txt")).size() == 24);
    CHECK(invoke({"report", "-o", out.string()}).out == r.out);

    oracle::spit(dir.path() / "values.txt", "1 2 3 4\n5 6 7 8\n9 10 11 12\n13 14 15 16\n");
    r = invoke({"simulate", cfg.string(), "--values", "@" + (dir.path() / "values.txt").string(), "-o",
                out.string(), "--report", "kv"});
    CHECK(r.out.find("sum=136\nsteps=4\n") != std::string::npos);

    oracle::spit(dir.path() / "cost.txt", "hop = 10\nadd = 0\n");
    r = invoke({"simulate", cfg.string(), "--values", "0..15", "--cost-model", (dir.path() / "cost.txt").string(),
                "-o", out.string()});
    CHECK(r.out.find("cycles=60 ") != std::string::npos);

    CHECK(invoke({"simulate", cfg.string(), "--values", "0..14", "-o", out.string()}).code ==
          mppsoc::cli::kExitSimulation);
    CHECK(invoke({"simulate", cfg.string(), "--values", "1,x", "-o", out.string()}).code == mppsoc::cli::kExitIo);
    oracle::spit(dir.path() / "cost.txt", "hop = -1\n");
    CHECK(invoke({"simulate", cfg.string(), "--cost-model", (dir.path() / "cost.txt").string(), "-o",
                  out.string()})
              .code == mppsoc::cli::kExitIo);
}

TEST_CASE("simulate assembly")
{
    oracle::TempDir dir;
    const auto cfg = dir.path() / "lin.cfg";
    oracle::spit(cfg, "rows=1\ncols=16\nacu_mem_bytes=64\npe_mem_bytes=64\nneighborhood=linear\n");
    const auto asm_path = fs::path(MPPSOC_REPO_DIR) / "programs" / "reduce16_linear.asm";
    auto r = invoke({"simulate", cfg.string(), "--app", "asm:" + asm_path.string(), "--values", "0..15", "-o",
                     (dir.path() / "run").string(), "--report", "kv"});
    CHECK(r.code == 0);
    CHECK(r.out.find("pe.0.r0=120\n") != std::string::npos);

    oracle::spit(dir.path() / "bad.asm", "LDI r0,1\nMOVD r0,N\nHALT\n");
    r = invoke({"simulate", cfg.string(), "--app", "asm:" + (dir.path() / "bad.asm").string(), "-o",
                (dir.path() / "run").string()});
    CHECK(r.code == mppsoc::cli::kExitSimulation);
    CHECK(r.err.find("bad.asm:2:") != std::string::npos);

    oracle::spit(dir.path() / "bad.asm", "LDI r0,1\n");
    r = invoke({"simulate", cfg.string(), "--app", "asm:" + (dir.path() / "bad.asm").string(), "-o",
                (dir.path() / "run").string()});
    CHECK(r.code == mppsoc::cli::kExitSimulation);
}

TEST_CASE("report without a run and usage errors")
{
    oracle::TempDir dir;
    CHECK(invoke({"report", "-o", dir.path().string()}).code == mppsoc::cli::kExitIo);
    CHECK(invoke({}).code != 0);
    CHECK(invoke({"frobnicate"}).code != 0);
}

TEST_CASE("shipped configurations validate")
{
    for (const auto& e : fs::directory_iterator(fs::path(MPPSOC_REPO_DIR) / "configs")) {
        if (e.path().extension() != ".cfg")
            continue;
        CAPTURE(e.path().string());
        CHECK(invoke({"validate", e.path().string()}).code == 0);
    }
}
