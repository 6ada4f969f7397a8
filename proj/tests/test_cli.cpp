// Drives the installed command-line tool as a subprocess.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(TCS_CLI_PATH) + " " + args + " 2>&1";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tcs_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const char* kSmallTcs = R"({"cd_space": [{"algorithm": "lagged-pc"}], "forecaster_space": [{"n_trees": 5}],
  "noise_space": [{"kind": "fit-normal"}], "detector_space": [{"family": "logistic-regression"}],
  "sample_length": 150, "n_permutations": 100})";

}  // namespace

TEST_CASE("cli: usage errors exit 1, help exits 0") {
    CHECK(run("").code == 1);
    CHECK(run("--help").code == 0);
    CHECK(run("simulate --help").code == 0);
    CHECK(run("frobnicate").code == 1);
    const Result missing = run("discover --out-dir /tmp");
    CHECK(missing.code == 1);
    CHECK(missing.out.find("--input") != std::string::npos);
    CHECK(run("generate-synthetic --out-dir /tmp --n-vars abc").code == 1);
}

TEST_CASE("cli: generate, discover, simulate, evaluate, report") {
    const fs::path dir = scratch("flow");
    const Result gen = run("generate-synthetic --out-dir " + (dir / "gen").string() +
                           " --n-vars 3 --n-steps 400 --warmup 50 --seed 5 --edge-probability 0.3");
    REQUIRE(gen.code == 0);
    for (const char* f : {"data.csv", "graph.json", "config.json"}) CHECK(fs::exists(dir / "gen" / f));
    CHECK(slurp(dir / "gen" / "config.json").find("\"seed\": 5") != std::string::npos);

    const std::string data = (dir / "gen" / "data.csv").string();
    REQUIRE(run("discover --input " + data + " --out-dir " + (dir / "disc").string() + " --algorithm lagged-pc").code ==
            0);
    for (const char* f : {"graph.json", "scores.csv", "discovery.json"}) CHECK(fs::exists(dir / "disc" / f));

    write(dir / "tcs.json", kSmallTcs);
    const Result sim =
        run("simulate --input " + data + " --out-dir " + (dir / "sim").string() + " --config " + (dir / "tcs.json").string());
    REQUIRE_MESSAGE(sim.code == 0, sim.out);
    for (const char* f : {"simulated.csv", "graph.json", "report.json"}) CHECK(fs::exists(dir / "sim" / f));
    CHECK_FALSE(fs::exists(dir / "sim" / "timing.json"));

    const Result ev = run("evaluate --real " + data + " --sim " + (dir / "sim" / "simulated.csv").string() + " --out " +
                          (dir / "eval.json").string() + " --windows 1");
    REQUIRE_MESSAGE(ev.code == 0, ev.out);

    const Result rep = run("report " + (dir / "sim" / "report.json").string() + " " + (dir / "eval.json").string() + " " +
                           (dir / "gen" / "graph.json").string());
    CHECK(rep.code == 0);
    CHECK(rep.out.find("valid report") != std::string::npos);
    CHECK(rep.out.find("valid evaluation") != std::string::npos);
    CHECK(rep.out.find("valid graph") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: failures map to exit codes") {
    const fs::path dir = scratch("fail");
    CHECK(run("discover --input /nonexistent.csv --out-dir " + dir.string()).code == 2);

    write(dir / "bad.csv", "a,b\n1,2\n3,oops\n");
    const Result bad = run("discover --input " + (dir / "bad.csv").string() + " --out-dir " + dir.string());
    CHECK(bad.code == 2);
    CHECK(bad.out.find("oops") != std::string::npos);

    write(dir / "cfg.json", R"({"sede": 1})");
    REQUIRE(run("generate-synthetic --out-dir " + (dir / "g").string() + " --n-steps 300").code == 0);
    CHECK(run("simulate --input " + (dir / "g" / "data.csv").string() + " --out-dir " + dir.string() + " --config " +
              (dir / "cfg.json").string())
              .code == 1);

    write(dir / "broken.json", "{\"n_vars\": ");
    write(dir / "wrong.json", R"({"n_vars": 2, "max_lag": 1, "edges": [[1, 5, 0]]})");
    CHECK(run("report " + (dir / "broken.json").string()).code == 2);
    const Result wrong = run("report " + (dir / "wrong.json").string());
    CHECK(wrong.code == 2);
    CHECK(wrong.out.find("edges[0]") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: seed precedence") {
    const fs::path dir = scratch("seed");
    auto gen = [&](const std::string& name, const std::string& prefix, const std::string& flags) {
        REQUIRE(run(prefix + " generate-synthetic --out-dir " +
                    (dir / name).string() + " --n-steps 300 " + flags)
                    .code == 0);
        return slurp(dir / name / "data.csv");
    };
    write(dir / "g7.json", R"({"seed": 7})");
    const std::string flag7 = gen("a", "", "--seed 7");
    const std::string file7 = gen("b", "", "--config " + (dir / "g7.json").string());
    const std::string flag8_over_file = gen("c", "--seed 8", "--config " + (dir / "g7.json").string());
    const std::string flag8 = gen("d", "", "--seed 8");
    const std::string zero = gen("e", "", "");
    CHECK(flag7 == file7);
    CHECK(flag8_over_file == flag8);
    CHECK(flag7 != flag8);
    CHECK(zero != flag7);
    fs::remove_all(dir);
}
