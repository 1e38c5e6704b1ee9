#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "shishkin/problem_io.hpp"

using namespace shishkin;

namespace {

const std::string kDir = SHISHKIN_PROBLEM_DIR;

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

TEST_CASE("validate prints alpha") {
    const auto r = run_cli({"validate", kDir + "/layer2.json"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("alpha = 1\n", 0) == 0);
    const auto r2 = run_cli({"validate", "--problem", kDir + "/layer2.json", "--json"});
    CHECK(r2.code == 0);
    CHECK(nlohmann::json::parse(r2.out)["alpha"] == 1.0);
}

TEST_CASE("exit codes") {
    SUBCASE("validation failure names the row") {
        const auto r = run_cli({"validate", kDir + "/not_dominant.json"});
        CHECK(r.code == cli::kValidationFailure);
        CHECK(r.err.find("row 2") != std::string::npos);
        CHECK(r.err.find("(a1)-dominance") != std::string::npos);
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
    SUBCASE("row 1 violation") {
        const auto path = std::filesystem::temp_directory_path() / "shishkin_row1.json";
        std::ofstream(path) << R"({"n":2,"T":1,"eps":[0.01,0.1],"u0":[1,1],
            "A":[[[1],[-2]],[[0],[1]]],"f":[[0],[0]]})";
        const auto r = run_cli({"validate", path.string()});
        CHECK(r.code == cli::kValidationFailure);
        CHECK(r.err.find("row 1") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("parse errors") {
        CHECK(run_cli({"validate", kDir + "/missing.json"}).code == cli::kParseError);
        CHECK(run_cli({"mesh", kDir + "/layer2.json"}).code == cli::kParseError);
        CHECK(run_cli({"mesh", kDir + "/layer2.json", "--N", "x"}).code == cli::kParseError);
        CHECK(run_cli({"solve", kDir + "/layer2.json", "--N", "64,128"}).code == cli::kParseError);
        CHECK(run_cli({"converge", kDir + "/layer2.json", "--N", "64", "--mode", "bogus"}).code ==
              cli::kParseError);
        CHECK(run_cli({}).code == cli::kParseError);
        const auto path = std::filesystem::temp_directory_path() / "shishkin_bad.json";
        std::ofstream(path) << R"({"n":2,"T":1})";
        const auto r = run_cli({"validate", path.string()});
        CHECK(r.code == cli::kParseError);
        CHECK(r.err.find("shishkin_bad.json") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("mesh error") {
        const auto r = run_cli({"mesh", kDir + "/layer2.json", "--N", "6"});
        CHECK(r.code == cli::kMeshError);
        CHECK(r.err.find("N=6") != std::string::npos);
    }
    SUBCASE("band violation") {
        const auto r = run_cli({"converge", kDir + "/oracle2.json", "--N", "128,256", "--min-order", "1.5"});
        CHECK(r.code == cli::kBandViolation);
        CHECK_FALSE(r.out.empty());
        CHECK(run_cli({"converge", kDir + "/oracle2.json", "--N", "128,256", "--min-order", "0.5"}).code == 0);
    }
    SUBCASE("other failures") {
        CHECK(run_cli({"converge", kDir + "/variable3.json", "--N", "128,256", "--mode", "exact"}).code ==
              cli::kFailure);
        CHECK(run_cli({"converge", kDir + "/oracle2.json", "--N", "128,384"}).code == cli::kFailure);
    }
    SUBCASE("help") { CHECK(run_cli({"--help"}).code == 0); }
}

TEST_CASE("mesh CSV") {
    const auto r = run_cli({"mesh", kDir + "/layer2.json", "--N", "64"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# sigmas=") != std::string::npos);
    CHECK(r.out.find("# b=1;1") != std::string::npos);
    CHECK(r.out.find('\r') == std::string::npos);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 66);
    CHECK(lines[0] == "j,t_j,delta_j");
    const auto mesh = build_mesh(validate(load_problem(kDir + "/layer2.json")), 64);
    for (std::size_t j = 0; j <= 64; ++j) {
        const auto cells = split(lines[j + 1]);
        CHECK(std::stoul(cells[0]) == j);
        CHECK(std::strtod(cells[1].c_str(), nullptr) == mesh.point(j));
        if (j > 0) CHECK(std::strtod(cells[2].c_str(), nullptr) == mesh.delta(j));
    }
}

TEST_CASE("solution CSV round trip") {
    const auto r = run_cli({"solve", kDir + "/variable3.json", "--N", "64", "--decompose", "--certify"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# max_principle=ok") != std::string::npos);
    CHECK(r.out.find("# stability=ok") != std::string::npos);
    CHECK(r.out.find("# superposition=ok") != std::string::npos);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 66);
    CHECK(lines[0] == "j,t_j,U_1,U_2,U_3,V_1,V_2,V_3,W_1,W_2,W_3");

    const auto vp = validate(load_problem(kDir + "/variable3.json"));
    const auto mesh = std::make_shared<const ShishkinMesh>(build_mesh(vp, 64));
    const auto grid = march(vp, mesh, vp.spec().u0(), RhsMode::GivenF);
    const auto parts = decompose(vp, mesh);
    for (std::size_t j = 0; j <= 64; ++j) {
        const auto cells = split(lines[j + 1]);
        REQUIRE(cells.size() == 11);
        CHECK(std::strtod(cells[1].c_str(), nullptr) == mesh->point(j));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::strtod(cells[2 + i].c_str(), nullptr) == grid.value(i, j));
            CHECK(std::strtod(cells[5 + i].c_str(), nullptr) == parts.smooth.value(i, j));
            CHECK(std::strtod(cells[8 + i].c_str(), nullptr) == parts.singular.value(i, j));
        }
    }
}

TEST_CASE("converge CSV and JSON") {
    const auto r = run_cli({"converge", kDir + "/oracle2.json", "--mode", "exact", "--N", "128,256,512"});
    REQUIRE(r.code == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "eps_label,N,D,p,C_fit");
    for (int k = 1; k <= 3; ++k) {
        const auto cells = split(lines[k]);
        REQUIRE(cells.size() == 5);
        CHECK(cells[0] == "eps=0.0001;0.01");
        if (k < 3) {
            const double p = std::strtod(cells[3].c_str(), nullptr);
            CHECK(p > 0.7);
            CHECK(p < 1.15);
        } else {
            CHECK(cells[3].empty());
        }
    }
    CHECK(lines[4] == "N,D_uniform,p_uniform");

    const auto j = run_cli({"converge", kDir + "/oracle2.json", "--mode", "exact", "--N", "128,256,512", "--json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["mode"] == "exact");
    CHECK(doc["configs"][0]["rows"].size() == 3);
    CHECK(doc["configs"][0]["rows"][2]["p"].is_null());
    CHECK(doc["uniform"][0]["D"] == std::strtod(split(lines[1])[2].c_str(), nullptr));
}

TEST_CASE("output is deterministic across thread counts") {
    const std::vector<std::string> base{"sweep", kDir + "/oracle2.json", "--N", "32,64,128", "--exponents", "0,6,12"};
    auto with = [&](const std::string& threads) {
        auto args = base;
        args.insert(args.end(), {"--threads", threads});
        return run_cli(args);
    };
    const auto a = with("1"), b = with("4"), c = with("4");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
    CHECK(data_lines(a.out).size() == 1 + 9 * 3 + 1 + 3);
}

TEST_CASE("--out writes a file") {
    const auto path = std::filesystem::temp_directory_path() / "shishkin_mesh.csv";
    const auto r = run_cli({"mesh", kDir + "/layer2.json", "--N", "16", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == run_cli({"mesh", kDir + "/layer2.json", "--N", "16"}).out);
    std::filesystem::remove(path);
}
