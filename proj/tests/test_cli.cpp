#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "qamod-cli-test";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QAMOD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

struct Workspace {
    Workspace() {
        fs::create_directories(kWork);
        write(kWork / "one_island.json", R"({
            "label": "one-island",
            "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
            "islands": [{"kind": "disk", "cx": 0, "cy": 0, "r": 0.2}],
            "min_resolution": 16})");
        write(kWork / "rect.json", R"({
            "label": "rect",
            "domain": {"kind": "rect", "x0": 0, "y0": 0, "x1": 2, "y1": 1},
            "islands": [],
            "min_resolution": 16})");
        write(kWork / "three.json", R"({
            "label": "three",
            "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
            "islands": [{"kind": "disk", "cx": 0.45, "cy": 0, "r": 0.12},
                        {"kind": "disk", "cx": -0.225, "cy": 0.39, "r": 0.12},
                        {"kind": "disk", "cx": -0.225, "cy": -0.39, "r": 0.12}],
            "min_resolution": 16})");
        write(kWork / "bad.json", R"({"domain": {"kind": "disk")");
        write(kWork / "overlap.json", R"({
            "domain": {"kind": "disk", "cx": 0, "cy": 0, "r": 1},
            "islands": [{"kind": "disk", "cx": 0, "cy": 0, "r": 0.2},
                        {"kind": "disk", "cx": 0.1, "cy": 0, "r": 0.2}]})");
        write(kWork / "cov.json", R"({
            "map": {"kind": "power", "D": 2},
            "B": {"kind": "disk", "cx": 0, "cy": 0, "r": 0.09},
            "components": "all"})");
        write(kWork / "fam.json", R"({"label": "fam", "a": [1.0, 0.5], "W": 8, "pad": 4})");
        write(kWork / "a.csv", "1, 0.5, 0.3333333333333333\n");
        write(kWork / "b.csv", "1, 1, 1\n");
    }
};

} // namespace

TEST_CASE("cli smoke and exit codes") {
    static Workspace ws;

    SECTION("xyz on a valid scene exits 0") {
        CHECK(run_cli("xyz --scene " + (kWork / "one_island.json").string() + " --resolution 48") == 0);
    }
    SECTION("width between rectangle faces") {
        CHECK(run_cli("width --scene " + (kWork / "rect.json").string() +
                      " --source outer:top --sink outer:bottom --resolution 32") == 0);
    }
    SECTION("malformed scene exits 2") {
        CHECK(run_cli("xyz --scene " + (kWork / "bad.json").string()) == 2);
        CHECK(run_cli("xyz --scene " + (kWork / "missing.json").string()) == 2);
        CHECK(run_cli("xyz --scene " + (kWork / "overlap.json").string()) == 2);
    }
    SECTION("unknown flags exit 2") {
        CHECK(run_cli("xyz --nonsense") == 2);
        CHECK(run_cli("") == 2);
    }
    SECTION("laws fuzz and check") {
        CHECK(run_cli("laws --fuzz 200 --seed 7") == 0);
        CHECK(run_cli("laws --check " + (kWork / "a.csv").string() + " --against " +
                      (kWork / "b.csv").string()) == 0);
        // an invalid chain is a mathematical-verdict failure, not an input error
        write(kWork / "a_bad.csv", "1, 0.9\n");
        write(kWork / "b_bad.csv", "1, 1\n");
        CHECK(run_cli("laws --check " + (kWork / "a_bad.csv").string() + " --against " +
                      (kWork / "b_bad.csv").string()) == 1);
    }
}

TEST_CASE("cli reports are byte-identical across runs and thread counts") {
    static Workspace ws;
    const fs::path out1 = kWork / "r1.json", out2 = kWork / "r2.json", out4 = kWork / "r4.json";
    const std::string base = "xyz --scene " + (kWork / "three.json").string() + " --resolution 48 ";
    REQUIRE(run_cli(base + "--threads 1 --out " + out1.string()) == 0);
    REQUIRE(run_cli(base + "--threads 1 --out " + out2.string()) == 0);
    REQUIRE(run_cli(base + "--threads 4 --out " + out4.string()) == 0);
    const std::string a = slurp(out1), b = slurp(out2), c = slurp(out4);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.find("\"verdicts\"") != std::string::npos);
}

TEST_CASE("cli csv and halfplane outputs") {
    static Workspace ws;
    const fs::path out = kWork / "xyz.csv";
    REQUIRE(run_cli("xyz --scene " + (kWork / "three.json").string() + " --resolution 48 --csv --out " +
                    out.string()) == 0);
    CHECK(slurp(out).rfind("label,row,", 0) == 0);
    CHECK(run_cli("halfplane --family " + (kWork / "fam.json").string() + " --resolution 8") == 0);
    CHECK(run_cli("covering --spec " + (kWork / "cov.json").string() +
                  " --resolution 96 --samples 180") == 0);
}
