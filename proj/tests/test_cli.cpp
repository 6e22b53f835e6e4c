#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code{};
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LEEYANG_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data_file(const std::string& name) {
    return std::string(LEEYANG_TEST_DATA) + "/" + name;
}

struct Csv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    double at(std::size_t row, const std::string& column) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == column) return rows[row][c];
        FAIL(("no column " + column));
        return 0.0;
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (csv.columns.empty()) {
            csv.columns = cells;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            const double v = std::stod(c);
            CHECK(std::isfinite(v));  // every emitted numeric column is finite
            row.push_back(v);
        }
        csv.rows.push_back(row);
    }
    return csv;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(std::filesystem::temp_directory_path() / name) {
        std::ofstream(path) << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("cli zeros: ferromagnetic cluster on the unit circle") {
    const auto r = run_cli("zeros " + data_file("triangle.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(csv.at(i, "abs_q") - 1.0) < 1e-10);
        CHECK(csv.at(i, "residual") < 1e-10);
        CHECK(std::abs(csv.at(i, "re_h_tilde")) < 1e-10);
    }
}

TEST_CASE("cli zeros: free spin gives q = -1") {
    const auto r = run_cli("zeros " + data_file("free_spin.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::abs(csv.at(0, "re_q") + 1.0) < 1e-12);
    CHECK(std::abs(csv.at(0, "im_q")) < 1e-12);
    CHECK(std::abs(csv.at(0, "im_h_tilde") - std::numbers::pi / (2.0 * 0.7)) < 1e-10);
}

TEST_CASE("cli zeros: antiferromagnetic roots are real and negative") {
    const auto r = run_cli("zeros " + data_file("antiferro_triangle.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(csv.at(i, "re_q") < 0.0);
        CHECK(std::abs(csv.at(i, "im_q")) < 1e-10);
    }
    CHECK(std::abs(csv.at(0, "re_q") * csv.at(1, "re_q") - 1.0) < 1e-10);
}

TEST_CASE("cli zeros: reruns are byte-identical and records mode works") {
    const auto a = run_cli("zeros " + data_file("triangle.json"));
    const auto b = run_cli("zeros " + data_file("triangle.json"));
    CHECK(a.output == b.output);

    const auto rec = run_cli("zeros --format records " + data_file("triangle.json"));
    REQUIRE(rec.exit_code == 0);
    CHECK(rec.output.find("record: 0") != std::string::npos);
    CHECK(rec.output.find("record: 1") != std::string::npos);
    CHECK(rec.output.find("abs_q: ") != std::string::npos);
}

TEST_CASE("cli correlator: modulus minima appear at the zero times") {
    const auto r = run_cli("correlator --tau-min 0 --tau-max 4 --points 401 " +
                           data_file("triangle.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 401);

    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < csv.rows.size(); ++i) {
        const double prev = csv.at(i - 1, "abs_C"), here = csv.at(i, "abs_C"),
                     next = csv.at(i + 1, "abs_C");
        if (here < prev && here <= next) minima.push_back(csv.at(i, "tau"));
    }
    REQUIRE(minima.size() >= 2);
    CHECK(std::abs(minima[0] - 0.486880959) < 0.01);
    CHECK(std::abs(minima[1] - 1.083915368) < 0.01);
}

TEST_CASE("cli correlator: oracle and closed form agree pointwise") {
    const auto closed = run_cli("correlator --tau-min 0 --tau-max 3 --points 61 " +
                                data_file("heisenberg_chain3.json"));
    const auto oracle = run_cli(
        "correlator --tau-min 0 --tau-max 3 --points 61 --method oracle " +
        data_file("heisenberg_chain3.json"));
    REQUIRE(closed.exit_code == 0);
    REQUIRE(oracle.exit_code == 0);
    const auto a = parse_csv(closed.output);
    const auto b = parse_csv(oracle.output);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(std::abs(a.at(i, "re_C") - b.at(i, "re_C")) < 1e-10);
        CHECK(std::abs(a.at(i, "im_C") - b.at(i, "im_C")) < 1e-10);
    }
}

TEST_CASE("cli zeros: heisenberg chain produces one root per site") {
    const auto r = run_cli("zeros " + data_file("heisenberg_chain3.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(csv.at(i, "residual") < 1e-10);
}

TEST_CASE("cli correlator: thread count does not change the bytes") {
    const std::string args = "correlator --tau-min 0 --tau-max 2 --points 101 ";
    const auto serial = run_cli(args + "--threads 1 " + data_file("triangle.json"));
    const auto parallel = run_cli(args + "--threads 4 " + data_file("triangle.json"));
    REQUIRE(serial.exit_code == 0);
    REQUIRE(parallel.exit_code == 0);
    CHECK(serial.output == parallel.output);
}

TEST_CASE("cli correlator: decoupled probe gives a constant modulus column") {
    const auto r = run_cli("correlator --tau-min 0 --tau-max 2 --points 41 " +
                           data_file("lambda_zero.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    const double expected = std::exp(0.5 * 0.5) / (2.0 * std::cosh(0.5 * 0.5));
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        CHECK(std::abs(csv.at(i, "abs_C") - expected) < 1e-12);
}

TEST_CASE("cli correlator: oracle beyond the cap exits 4") {
    std::string couplings;
    for (int i = 0; i + 1 < 13; ++i)
        couplings += (i ? "," : "") + std::string("[") + std::to_string(i) + "," +
                     std::to_string(i + 1) + ",1.0]";
    const TempFile file("leeyang_cap13.json",
                        "{\"sites\": 13, \"kind\": \"ising_zz\", \"couplings\": [" + couplings +
                            "], \"field_h\": 0.0, \"probe\": {\"lambda\": 1.0, \"h0\": 0.0}, "
                            "\"beta\": 0.5}");
    const auto r = run_cli("correlator --method oracle --points 5 " + file.path.string());
    CHECK(r.exit_code == 4);
}

TEST_CASE("cli verify: identity holds for the shipped models") {
    for (const char* model : {"triangle.json", "heisenberg_chain3.json", "antiferro_triangle.json",
                              "free_spin.json"}) {
        const auto r = run_cli("verify --samples 100 " + data_file(model));
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("status: pass") != std::string::npos);
    }
}

TEST_CASE("cli verify: seeded reruns are byte-identical") {
    const auto a = run_cli("verify --samples 50 --seed 7 " + data_file("triangle.json"));
    const auto b = run_cli("verify --samples 50 --seed 7 " + data_file("triangle.json"));
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("cli verify: bath larger than four sites exits 4") {
    const TempFile file("leeyang_big_bath.json",
                        R"({"sites": 5, "kind": "ising_zz", "couplings": [[0,1,1.0]],
                           "field_h": 0.0, "probe": {"lambda": 1.0, "h0": 0.0}, "beta": 0.5})");
    CHECK(run_cli("verify " + file.path.string()).exit_code == 4);
}

TEST_CASE("cli: parse failures exit 2") {
    CHECK(run_cli("zeros /nonexistent/model.json").exit_code == 2);

    const TempFile transverse("leeyang_transverse.json",
                              R"({"sites": 2, "kind": "transverse_field_ising",
                                 "couplings": [[0,1,1.0]], "field_h": 0.0,
                                 "probe": {"lambda": 1.0, "h0": 0.0}, "beta": 0.5})");
    CHECK(run_cli("verify " + transverse.path.string()).exit_code == 2);

    const TempFile extra_key("leeyang_extra_key.json",
                             R"({"sites": 2, "kind": "ising_zz", "couplings": [[0,1,1.0]],
                                "field_h": 0.0, "field_x": 0.5,
                                "probe": {"lambda": 1.0, "h0": 0.0}, "beta": 0.5})");
    CHECK(run_cli("zeros " + extra_key.path.string()).exit_code == 2);

    const TempFile garbage("leeyang_garbage.json", "{ not json at all");
    CHECK(run_cli("zeros " + garbage.path.string()).exit_code == 2);

    CHECK(run_cli("frobnicate " + data_file("triangle.json")).exit_code == 2);
}

TEST_CASE("cli zero-times: tuned cluster lists verified zero times") {
    const auto r = run_cli("zero-times " + data_file("triangle.json"));
    REQUIRE(r.exit_code == 0);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 16);  // default 8 windings x 2 zeros
    CHECK(std::abs(csv.at(0, "tau") - 0.486880959) < 1e-6);
    CHECK(std::abs(csv.at(1, "tau") - 1.083915368) < 1e-6);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(csv.at(i, "reachable") == 1.0);
        CHECK(csv.at(i, "abs_C") < 1e-8);
    }
    // naive closed-form comparison block is printed for this cluster
    CHECK(r.output.find("naive arctan formula") != std::string::npos);
    CHECK(r.output.find("tau_naive_arctan, tau_root_phase") != std::string::npos);
}

TEST_CASE("cli zero-times: detuned field exits 5 with suggested fields") {
    const auto r = run_cli("zero-times " + data_file("triangle_detuned.json"));
    CHECK(r.exit_code == 5);
    const auto csv = parse_csv(r.output);
    REQUIRE(csv.rows.size() == 2);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(csv.at(i, "reachable") == 0.0);
        CHECK(std::abs(csv.at(i, "required_h") + 1.0) < 1e-9);
    }
}

TEST_CASE("cli zero-times: decoupled probe exits 3") {
    CHECK(run_cli("zero-times " + data_file("lambda_zero.json")).exit_code == 3);
}

TEST_CASE("cli zero-times: winding spacing is exact across a beta sweep") {
    for (const char* beta : {"0.2", "0.5", "1.0"}) {
        const TempFile file(std::string("leeyang_beta_") + beta + ".json",
                            std::string(R"({"sites": 2, "kind": "ising_zz",
                                "couplings": [[0,1,1.0]], "field_h": -1.0,
                                "probe": {"lambda": 1.0, "h0": -1.0}, "beta": )") +
                                beta + "}");
        const auto r = run_cli("zero-times --windows 4 " + file.path.string());
        REQUIRE(r.exit_code == 0);
        const auto csv = parse_csv(r.output);
        std::map<int, std::vector<double>> branches;
        for (std::size_t i = 0; i < csv.rows.size(); ++i)
            branches[static_cast<int>(csv.at(i, "zero_index"))].push_back(csv.at(i, "tau"));
        const double spacing = std::numbers::pi / 2.0;
        for (auto& [index, taus] : branches) {
            std::sort(taus.begin(), taus.end());
            REQUIRE(taus.size() == 4);
            for (std::size_t i = 1; i < taus.size(); ++i)
                CHECK(std::abs(taus[i] - taus[i - 1] - spacing) < 1e-10);
        }
    }
}

TEST_CASE("cli: output file writing matches stdout") {
    const auto to_stdout = run_cli("zeros " + data_file("triangle.json"));
    const auto out_path = std::filesystem::temp_directory_path() / "leeyang_zeros_out.csv";
    const auto to_file = run_cli("zeros -o " + out_path.string() + " " + data_file("triangle.json"));
    REQUIRE(to_file.exit_code == 0);
    CHECK(to_file.output.empty());
    std::ifstream in(out_path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == to_stdout.output);
    std::filesystem::remove(out_path);
}
