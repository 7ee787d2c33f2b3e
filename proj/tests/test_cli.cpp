#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout only
};

// Runs the CLI with stdout captured to a scratch file.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("setpart_cli_out_" + std::to_string(counter++));
    const std::string cmd = std::string(SETPART_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    fs::remove(out);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bell table csv") {
    const auto r = run_cli("bell --max-n 10");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 12); // header + rows 0..10
    CHECK(lines[0] == "n,bell,alpha,ratio_next");
    CHECK(lines[11].rfind("10,115975,", 0) == 0);
}

TEST_CASE("enumerate lists the five partitions of [3]") {
    const auto r = run_cli("enumerate --n 3 --stats");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "rgs,levels,dimension,crossings,blocks");
    CHECK(lines[1] == "0-0-0,2,3,0,1");
    CHECK(lines[5] == "0-1-2,0,3,0,3");
}

TEST_CASE("missing required flags fail with exit 1") {
    CHECK(run_cli("enumerate").exit_code == 1);
    CHECK(run_cli("bell").exit_code == 1);
    CHECK(run_cli("definitely-not-a-subcommand").exit_code == 1);
    CHECK(run_cli("sample --n 3").exit_code == 1);
    CHECK(run_cli("enumerate --n 20").exit_code == 1);         // over the cap
    CHECK(run_cli("moments --n 50 --stat nope").exit_code == 1);
    CHECK(run_cli("moments --n 50 --stat dimension --exact").exit_code == 1);
}

TEST_CASE("version flag") {
    const auto r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("setpart") != std::string::npos);
}

TEST_CASE("io failures exit with code 2") {
    const auto r = run_cli("clt --n 20 --stat levels --samples 200 --seed 1 --out /proc/setpart_forbidden/x");
    CHECK(r.exit_code == 2);
}

TEST_CASE("sampling is reproducible run to run") {
    const auto a = run_cli("sample --n 30 --count 50 --seed 31415");
    const auto b = run_cli("sample --n 30 --count 50 --seed 31415");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(lines_of(a.output).size() == 51);
    const auto c = run_cli("sample --n 30 --count 50 --seed 31416");
    CHECK(c.output != a.output);
    const auto rgs = run_cli("sample --n 5 --count 3 --seed 1 --emit rgs");
    CHECK(rgs.exit_code == 0);
    CHECK(lines_of(rgs.output).size() == 4);
}

TEST_CASE("moments json carries exact rationals") {
    const auto r = run_cli("moments --n 3 --stat levels --exact");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"mean_exact\": \"4/5\"") != std::string::npos);
    const auto a = run_cli("moments --n 1000 --stat crossings");
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("\"kind\": \"asymptotic\"") != std::string::npos);
}

TEST_CASE("clt writes its artifacts and is byte-stable across thread counts") {
    const fs::path dir1 = fs::temp_directory_path() / "setpart_clt_t1";
    const fs::path dir2 = fs::temp_directory_path() / "setpart_clt_t2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    const std::string common = "clt --n 30 --stat dimension --samples 2000 --seed 7 ";
    const auto r1 = run_cli(common + "--threads 1 --out " + dir1.string());
    const auto r2 = run_cli(common + "--threads 2 --out " + dir2.string());
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);

    for (const char* name : {"summary.json", "histogram.csv", "qq.csv"}) {
        CHECK(fs::exists(dir1 / name));
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    }
    CHECK(fs::exists(dir1 / "config.json"));
    // The resolved config logs the seed.
    CHECK(slurp(dir1 / "config.json").find("\"seed\": 7") != std::string::npos);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("clt accepts a json config with flag overrides") {
    const fs::path dir = fs::temp_directory_path() / "setpart_clt_cfg";
    const fs::path cfg_path = fs::temp_directory_path() / "setpart_clt_cfg.json";
    fs::remove_all(dir);
    {
        std::ofstream cfg(cfg_path);
        cfg << "{\"n\": 25, \"statistic\": \"levels\", \"sample_count\": 1500, \"seed\": 5,\n"
            << " \"generator\": \"stam\", \"normalization\": \"exact\", \"bins\": 0,\n"
            << " \"output_path\": \"" << dir.string() << "\"}\n";
    }
    const auto r = run_cli("clt --config " + cfg_path.string() + " --seed 11");
    CHECK(r.exit_code == 0);
    const std::string config = slurp(dir / "config.json");
    CHECK(config.find("\"seed\": 11") != std::string::npos); // flag wins
    CHECK(config.find("\"n\": 25") != std::string::npos);    // file value kept
    fs::remove_all(dir);
    fs::remove(cfg_path);
}

TEST_CASE("clt config without a normalization key falls back per statistic") {
    const fs::path dir = fs::temp_directory_path() / "setpart_clt_cfg2";
    const fs::path cfg_path = fs::temp_directory_path() / "setpart_clt_cfg2.json";
    fs::remove_all(dir);
    {
        std::ofstream cfg(cfg_path);
        cfg << "{\"n\": 30, \"statistic\": \"dimension\", \"sample_count\": 500, \"seed\": 5,\n"
            << " \"output_path\": \"" << dir.string() << "\"}\n";
    }
    const auto r = run_cli("clt --config " + cfg_path.string());
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir / "config.json").find("\"normalization\": \"asymptotic\"") != std::string::npos);
    fs::remove_all(dir);
    fs::remove(cfg_path);
}

TEST_CASE("exact normalization for dimension is a validation error") {
    const auto r = run_cli("clt --n 30 --stat dimension --samples 200 --seed 1 "
                           "--normalization exact --out /tmp/setpart_never");
    CHECK(r.exit_code == 1);
}

TEST_CASE("uniformity, lemma41, conditional-check and balls subcommands run") {
    const auto u = run_cli("uniformity --n 3 --samples 4000 --seed 3");
    CHECK(u.exit_code == 0);
    CHECK(u.output.find("\"p_value\"") != std::string::npos);

    const auto l = run_cli("lemma41 --n 400 --trials 50 --seed 3");
    CHECK(l.exit_code == 0);
    CHECK(l.output.find("\"normalized_deviation_p95\"") != std::string::npos);

    const auto c = run_cli("conditional-check --n 25 --samples 500 --seed 3");
    CHECK(c.exit_code == 0);
    CHECK(c.output.find("\"mismatches\": 0") != std::string::npos);

    const auto b = run_cli("balls --n 100 --m 9 --trials 4 --seed 3");
    CHECK(b.exit_code == 0);
    CHECK(lines_of(b.output).size() == 5);
    CHECK(lines_of(b.output)[0] == "trial,d_n,e_n,s_n");
    const auto b2 = run_cli("balls --n 100 --m 9 --trials 4 --seed 3");
    CHECK(b2.output == b.output);
    const auto u2 = run_cli("uniformity --n 3 --samples 4000 --seed 3");
    CHECK(u2.output == u.output);
}

TEST_CASE("help lists flags with defaults") {
    const auto r = run_cli("sample --help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("--seed") != std::string::npos);
    CHECK(r.output.find("--emit") != std::string::npos);
    CHECK(r.output.find("stats") != std::string::npos); // default value shown
}
