#include "stefan1d/cli.hpp"
#include "stefan1d/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace stefan1d;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "stefan1d");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "stefan1d_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
    const auto p = scratch(name);
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kExample =
    R"({"measure": {"breaks": [0, 0.8660254037844386], "values": [0.99]},
        "open_set": {"components": [[-1, 1]]}})";

} // namespace

TEST_CASE("solve: JSON blocks and CSV") {
    const auto in = write("solve.json", kExample);
    const auto csv = scratch("solve.csv").string();
    const auto r = invoke({"solve", "--input", in, "--csv", csv});
    REQUIRE(r.code == cli::kOk);
    const auto j = Json::parse(r.out);
    REQUIRE(j["blocks"].size() == 1);
    CHECK(j["blocks"][0][1].get<double>() == doctest::Approx(-0.896224371).epsilon(1e-9));
    CHECK(j["blocks"][0][2].get<double>() == doctest::Approx(0.246410478).epsilon(1e-9));
    CHECK(j["certificate"]["ordered"].get<bool>());
    const auto text = slurp(csv);
    CHECK(text.rfind("component,c,e,f,d,k,beta\n", 0) == 0);
    CHECK(text.find("-0.896224371486") != std::string::npos);
}

TEST_CASE("solve: empty measure gives empty blocks") {
    const auto in = write("empty.json",
                          R"({"measure": {"breaks": [], "values": []}, "open_set": {"components": [[-1, 1]]}})");
    const auto r = invoke({"solve", "--input", in});
    REQUIRE(r.code == cli::kOk);
    const auto j = Json::parse(r.out);
    CHECK(j["measure"]["values"].empty());
    CHECK(j["k_n"][0].get<double>() == 0.0);
}

TEST_CASE("solve: exit codes") {
    const auto dense = write("dense.json",
                             R"({"measure": {"breaks": [0, 0.5], "values": [1.2]}, "open_set": {"components": [[-1, 1]]}})");
    CHECK(invoke({"solve", "--input", dense}).code == cli::kDomainError);
    const auto broken = write("broken.json", "{\"measure\": ");
    const auto r = invoke({"solve", "--input", broken});
    CHECK(r.code == cli::kParseError);
    CHECK_FALSE(r.err.empty());
    const auto unsorted = write("unsorted.json",
                                R"({"measure": {"breaks": [0, -1], "values": [0.5]}, "open_set": {"components": [[-1, 1]]}})");
    CHECK(invoke({"solve", "--input", unsorted}).code == cli::kParseError);
    CHECK(invoke({"solve"}).code == cli::kParseError);
    CHECK(invoke({"bogus"}).code == cli::kParseError);
    CHECK(invoke({"solve", "--input", scratch("missing.json").string()}).code == cli::kParseError);
    CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("order: the split-domain counterexample") {
    const auto in = write("order.json", R"({
        "mu": {"breaks": [-0.5, 0.5], "values": [1]},
        "nu": {"breaks": [-1, -0.5, 0.5, 1], "values": [1, 0, 1]},
        "open_set": {"components": [[-1, 0], [0, 1]]}})");
    const auto r = invoke({"order", "--input", in});
    REQUIRE(r.code == cli::kOk);
    const auto j = Json::parse(r.out);
    CHECK_FALSE(j["ordered"].get<bool>());
    CHECK(j["per_component"].size() == 2);
    CHECK(j.contains("worst_point"));
}

TEST_CASE("potential: coefficients and samples") {
    const auto in = write("pot.json", R"({"measure": {"breaks": [-1, 1], "values": [1]}, "samples": 5})");
    const auto csv = scratch("pot.csv").string();
    const auto r = invoke({"potential", "--input", in, "--csv", csv});
    REQUIRE(r.code == cli::kOk);
    const auto j = Json::parse(r.out);
    CHECK(j["pieces"].size() == 3);
    const auto text = slurp(csv);
    CHECK(text.rfind("y,U,dU\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}

TEST_CASE("simulate: deterministic and seed override") {
    const auto in = write("sim.json", R"({
        "measure": {"breaks": [0, 0.8660254037844386], "values": [0.99]},
        "open_set": {"components": [[-1, 1]]},
        "config": {"n_particles": 2000, "seed": 3}})");
    const auto hist = scratch("hist.csv").string();
    const auto a = invoke({"simulate", "--input", in, "--hist", hist});
    const auto b = invoke({"simulate", "--input", in});
    const auto c = invoke({"simulate", "--input", in, "--seed", "4"});
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    const auto j = Json::parse(a.out);
    CHECK(j["complete"].get<bool>());
    CHECK(j["comparison"][0].contains("standard_error"));
    CHECK(slurp(hist).rfind("component,lo,hi,density\n", 0) == 0);

    const auto short_run = write("short.json", R"({
        "measure": {"breaks": [0, 0.5], "values": [0.5]},
        "open_set": {"components": [[-1, 1]]},
        "config": {"n_particles": 100, "t_max": 0.0001}})");
    CHECK(invoke({"simulate", "--input", short_run}).code == cli::kIncomplete);
    const auto bad = write("badcfg.json", R"({
        "measure": {"breaks": [0, 0.5], "values": [0.5]},
        "open_set": {"components": [[-1, 1]]},
        "config": {"dt": -1}})");
    CHECK(invoke({"simulate", "--input", bad}).code == cli::kParseError);
}

TEST_CASE("stability: lipschitz CSV ratio column matches the closed form") {
    const auto csv = scratch("lip.csv").string();
    const auto r = invoke({"stability", "--family", "lipschitz", "--csv", csv});
    REQUIRE(r.code == cli::kOk);
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("x,y,r,c,input_gap,output_gap,ratio,closed_form_ratio", 0) == 0);
    int rows = 0;
    while (std::getline(lines, line)) {
        std::vector<double> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(std::stod(cell));
        }
        REQUIRE(f.size() == 10);
        CHECK(f[9] == 1.0);
        const LipschitzFamilyParams p{f[0], f[1], f[2], f[3]};
        CHECK(std::abs(f[6] - p.closed_form_ratio()) <= 1e-9);
        ++rows;
    }
    CHECK(rows == 12);
}

TEST_CASE("stability: custom parameters, monotone and weak families") {
    const auto in = write("params.json", R"({"params": [{"x": 0.9, "y": 0.01, "r": 0.9, "c": 0.99}]})");
    const auto lip = invoke({"stability", "--family", "lipschitz", "--input", in});
    REQUIRE(lip.code == cli::kOk);
    CHECK(Json::parse(lip.out)["rows"][0]["ratio"].get<double>() == doctest::Approx(3.761 / 0.76));

    const auto bad = write("badparams.json", R"({"params": [{"x": 0.999, "y": 0.0001, "r": 0.999, "c": 0.999}]})");
    CHECK(invoke({"stability", "--input", bad}).code == cli::kDomainError);

    const auto mono = invoke({"stability", "--family", "monotone"});
    REQUIRE(mono.code == cli::kOk);
    CHECK(Json::parse(mono.out)["monotone_in"].get<bool>());
    CHECK_FALSE(Json::parse(mono.out)["monotone_out"].get<bool>());

    const auto weak = invoke({"stability", "--family", "weak"});
    REQUIRE(weak.code == cli::kOk);
    const auto j = Json::parse(weak.out);
    CHECK(j["rows"].size() == 63);
    CHECK(j["bounded"].get<bool>());

    CHECK(invoke({"stability", "--family", "other"}).code == cli::kParseError);
}

TEST_CASE("repro: table, JSON and tolerance sensitivity") {
    const auto table = invoke({"repro"});
    CHECK(table.code == cli::kOk);
    CHECK(table.out.find("overall: PASS") != std::string::npos);
    CHECK(table.out.find("-0.896224371") != std::string::npos);

    const auto js = invoke({"repro", "--json"});
    REQUIRE(js.code == cli::kOk);
    const auto j = Json::parse(js.out);
    CHECK(j["pass"].get<bool>());
    std::vector<std::string> names;
    for (const auto& s : j["scenarios"]) {
        names.push_back(s["name"]);
    }
    CHECK(names == std::vector<std::string>{"example_5_1", "example_5_2", "lipschitz_family",
                                            "appendix_critical_point", "weak_convergence",
                                            "particle_example_5_2"});

    // A tolerance of 1e-15 is tighter than double rounding allows for the
    // endpoint rows; failing rows are marked and the exit code says so.
    const auto tight = invoke({"repro", "--tol", "1e-15"});
    CHECK(tight.code == cli::kReproFailure);
    CHECK(tight.out.find("FAIL") != std::string::npos);
}
