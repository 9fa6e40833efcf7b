#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "floq/experiment.hpp"
#include "floq/verify.hpp"

using namespace floq;
namespace fs = std::filesystem;

namespace {

const char* kTinyConfig = R"(
# minimal XY sweep
[model]
name = xy_bloch
J = 0.5

[compute]
list = floquet, kato, berry

[sweep]
parameter = k
start = 0.1
stop = 1.2
points = 4

[numerics]
steps_per_period = 512
grid_points = 256

[output]
dir = out
formats = csv, json
)";

std::string strip_meta(const std::string& csv) {
    std::stringstream ss(csv);
    std::string line, out;
    while (std::getline(ss, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

int run_cli(const std::string& args) {
#ifdef FLOQ_CLI_PATH
    const std::string cmd = std::string(FLOQ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
#else
    (void)args;
    return -1;
#endif
}

}  // namespace

TEST_CASE("config: INI round trip and validation") {
    auto cfg = ExperimentConfig::from_ini(kTinyConfig);
    CHECK(cfg.model == "xy_bloch");
    CHECK(cfg.params.at("J") == 0.5);
    CHECK(cfg.computations.size() == 3);
    REQUIRE(cfg.sweeps.size() == 1);
    CHECK(cfg.sweeps[0].parameter == "k");
    CHECK(cfg.sweeps[0].points == 4);
    CHECK(cfg.output.json);
    cfg.validate();
}

TEST_CASE("config: JSON encoding of the same schema") {
    const char* text = R"({
      "model": {"name": "xy_bloch", "J": 0.5},
      "compute": ["floquet"],
      "sweep": {"parameter": "k", "start": 0.1, "stop": 0.5, "points": 3},
      "numerics": {"grid_points": 128},
      "output": {"formats": ["json"]}
    })";
    auto cfg = ExperimentConfig::from_json_text(text);
    cfg.validate();
    CHECK(cfg.model == "xy_bloch");
    CHECK(cfg.numerics.grid_points == 128);
    CHECK_FALSE(cfg.output.csv);
}

TEST_CASE("config: unknown keys and sections are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::from_ini("[model]\nname = xy_bloch\n[grot]\nx = 1\n"),
                    InvalidInput);
    CHECK_THROWS_AS(
        ExperimentConfig::from_ini("[model]\nname = xy_bloch\n[numerics]\nbogus = 2\n"
                                   "[compute]\nlist = floquet\n"),
        InvalidInput);
    // unknown model parameter caught at validation
    auto cfg = ExperimentConfig::from_ini(
        "[model]\nname = xy_bloch\nnonsense = 3\n[compute]\nlist = floquet\n");
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("config: empty computation list fails validation") {
    auto cfg = ExperimentConfig::from_ini("[model]\nname = xy_bloch\n[compute]\nlist =\n");
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    const auto outcome = run_experiment(cfg);
    CHECK(outcome.exit_code == kExitValidation);
}

TEST_CASE("config: agpsolve rejected on kicked models") {
    auto cfg = ExperimentConfig::from_ini(
        "[model]\nname = dtc_chain\n[compute]\nlist = agpsolve\n");
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("run_experiment: tables, determinism, long format") {
    auto cfg = ExperimentConfig::from_ini(kTinyConfig);
    const auto r1 = run_experiment(cfg);
    REQUIRE(r1.exit_code == kExitOk);
    REQUIRE(r1.tables.size() == 2);  // floquet_k, kato_k

    const auto& ft = r1.tables[0];
    CHECK(ft.name == "floquet_k");
    REQUIRE(ft.columns.size() == 5);
    CHECK(ft.columns[0] == "grid_index");
    CHECK(ft.columns[3] == "quantity");
    // 4 points x 2 bands x 2 quantities
    CHECK(ft.rows.size() == 16);

    const auto r2 = run_experiment(cfg);
    for (size_t i = 0; i < r1.tables.size(); ++i)
        CHECK(strip_meta(r1.tables[i].to_csv()) == strip_meta(r2.tables[i].to_csv()));

    // threads do not change the output ordering
    auto cfg4 = cfg;
    cfg4.numerics.threads = 4;
    const auto r4 = run_experiment(cfg4);
    for (size_t i = 0; i < r1.tables.size(); ++i)
        CHECK(strip_meta(r1.tables[i].to_csv()) == strip_meta(r4.tables[i].to_csv()));
}

TEST_CASE("write_outcome: files land in the requested directory") {
    auto cfg = ExperimentConfig::from_ini(kTinyConfig);
    const auto r = run_experiment(cfg);
    const fs::path dir = fs::temp_directory_path() / "floq_test_out";
    fs::remove_all(dir);
    const int code = write_outcome(r, cfg, dir.string());
    CHECK(code == 0);
    CHECK(fs::exists(dir / "floquet_k.csv"));
    CHECK(fs::exists(dir / "kato_k.csv"));
    CHECK(fs::exists(dir / "floquet_k.json"));
    // metadata header present
    std::ifstream in(dir / "floquet_k.csv");
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("# ", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("verify: passes at defaults, fails at zero tolerance") {
    const auto ok = run_verification("numkernel", 1.0);
    CHECK(!ok.empty());
    for (const auto& r : ok) CHECK(r.passed);

    const auto zero = run_verification("numkernel", 0.0);
    int failed = 0;
    for (const auto& r : zero)
        if (!r.passed) ++failed;
    CHECK(failed > 0);
}

TEST_CASE("registry: the five models are listed") {
    const auto& reg = model_registry();
    for (const char* name : {"xy_bloch", "kicked_mfi", "dtc_chain", "afti_hex", "afti_rudner"})
        CHECK_NOTHROW(find_model(name));
    CHECK(reg.size() >= 5);
    CHECK_THROWS_AS(find_model("nope"), InvalidInput);
}

#ifdef FLOQ_CLI_PATH
TEST_CASE("cli binary: exit codes") {
    CHECK(run_cli("list-models") == 0);

    // validation failure -> exit 2
    const fs::path bad = fs::temp_directory_path() / "floq_bad.cfg";
    {
        std::ofstream f(bad);
        f << "[model]\nname = xy_bloch\n[compute]\nlist =\n";
    }
    CHECK(run_cli("run " + bad.string()) == 2);
    fs::remove(bad);

    // bundled config runs clean
    const fs::path cfg = fs::path(FLOQ_CONFIG_DIR) / "fig2_xy.cfg";
    const fs::path out = fs::temp_directory_path() / "floq_fig2_out";
    fs::remove_all(out);
    CHECK(run_cli("run " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "floquet_k.csv"));
    CHECK(fs::exists(out / "kato_k.csv"));
    CHECK(fs::exists(out / "kato_J.csv"));  // the Fig. 2d J-sweep from [sweep2]
    fs::remove_all(out);
}
#endif
