#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cli.h"
#include "doctest.h"
#include "json.hpp"

using arbor::cli::run;
using nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json call_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const Result r = call(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

std::vector<json> column(const json& doc, const std::string& name) {
    const auto& cols = doc["columns"];
    const auto it = std::find(cols.begin(), cols.end(), name);
    REQUIRE(it != cols.end());
    const auto k = static_cast<std::size_t>(it - cols.begin());
    std::vector<json> out;
    for (const auto& row : doc["rows"]) {
        out.push_back(row[k]);
    }
    return out;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("arbor_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("range syntax") {
        using arbor::cli::parse_range;
        CHECK(parse_range("0.25", 41) == std::vector<double>{0.25});
        CHECK(parse_range("0:1", 3) == std::vector<double>{0.0, 0.5, 1.0});
        CHECK(parse_range("0:1:5", 41).size() == 5);
        CHECK(parse_range("0.1,0.2,0.3", 41) == std::vector<double>{0.1, 0.2, 0.3});
        CHECK_THROWS_AS(parse_range("0:1:0", 41), std::invalid_argument);
        CHECK_THROWS_AS(parse_range("a:b", 41), std::invalid_argument);
        CHECK_THROWS_AS(parse_range("0:1:2:3", 41), std::invalid_argument);
    }

    TEST_CASE("identical invocations give identical bytes") {
        const std::vector<std::string> args{"noisy", "--r", "0:0.04:9", "--tol", "1e-4"};
        const Result a = call(args);
        const Result b = call(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.rfind("# ", 0) == 0);
    }

    TEST_CASE("noiseless MIPT point keeps every Bell pair") {
        const json doc = call_json({"mipt", "--p", "0"});
        CHECK(column(doc, "P2")[0] == 1.0);
        CHECK(column(doc, "I_mean")[0] == 2.0);
        CHECK(doc["metadata"]["command"] == "mipt");
        CHECK(doc["metadata"]["seed"] == arbor::cli::kDefaultSeed);
    }

    TEST_CASE("MIPT sweep past the transition") {
        const json doc = call_json({"mipt", "--p", "0.2:0.3:6"});
        for (const json& v : column(doc, "P2")) {
            CHECK(v.get<double>() < 1e-12);
        }
        for (const json& v : column(doc, "converged")) {
            CHECK(v == true);
        }
    }

    TEST_CASE("MIPT sweep reports its threshold") {
        const json doc = call_json({"mipt", "--p", "0:0.3:7", "--tol", "1e-5"});
        const json& th = doc["metadata"]["thresholds"];
        REQUIRE(th.size() == 1);
        CHECK(th[0]["value"].get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    }

    TEST_CASE("Ising at infinite temperature has no root response") {
        const json doc = call_json({"ising", "--beta", "0,0.5"});
        CHECK(column(doc, "delta_h")[0] == 0.0);
        CHECK(column(doc, "beta")[1] == 0.5);
    }

    TEST_CASE("validation errors exit with 1") {
        CHECK(call({}).code == 1);
        CHECK(call({"mipt", "--p", "1.5"}).code == 1);
        CHECK(call({"mipt", "--format", "xml"}).code == 1);
        CHECK(call({"mipt", "--tol", "0"}).code == 1);
        CHECK(call({"mipt", "--bogus"}).code == 1);
        CHECK(call({"verify", "--depth", "7"}).code == 1);
        CHECK(call({"verify", "--inject-fault", "2,M"}).code == 1);
        CHECK(call({"mipt", "--plot", "svg"}).code == 1);
        CHECK(call({"mipt", "--config", temp_path("missing.json").string()}).code == 1);
    }

    TEST_CASE("config files fill in options and flags win") {
        const auto path = temp_path("config.json");
        {
            std::ofstream f(path);
            f << R"({"p": "0.05", "r": "0:0.02:3", "grid": 5})";
        }
        const json doc = call_json({"noisy", "--config", path.string(), "--r", "0.01"});
        CHECK(doc["metadata"]["config"]["p"] == 0.05);
        CHECK(doc["metadata"]["config"]["r"] == "0.01");
        CHECK(doc["metadata"]["config"]["grid"] == 5);
        CHECK(doc["rows"].size() == 1);
        {
            std::ofstream f(path);
            f << R"({"no_such_option": 1})";
        }
        CHECK(call({"noisy", "--config", path.string()}).code == 1);
        std::filesystem::remove(path);
    }

    TEST_CASE("verify passes and reports exact rationals") {
        const json a = call_json({"verify", "--sequences", "20", "--trials", "2000", "--depth", "2"});
        for (const json& v : column(a, "passed")) {
            CHECK(v == true);
        }
        CHECK(a["metadata"]["exact"]["alpha"] == "3/5");
        CHECK(a["metadata"]["exact"]["beta"] == "1/3");
        CHECK(a["metadata"]["exact"]["gamma"] == "1/2");
        CHECK(a["metadata"]["exact"]["W(sigma,M->sigma)"] == "2/5");
        const json b =
            call_json({"verify", "--sequences", "20", "--trials", "2000", "--depth", "2", "--seed", "4"});
        CHECK(b["metadata"]["exact"] == a["metadata"]["exact"]);
    }

    TEST_CASE("an injected fault is caught and named") {
        const Result r = call({"verify", "--sequences", "5", "--trials", "500", "--depth", "1", "--inject-fault",
                               "2,M,1", "--format", "csv"});
        CHECK(r.code == 3);
        CHECK(r.out.find("W((2,M)->1)") != std::string::npos);
    }

    TEST_CASE("svg plots land next to the output file") {
        const auto csv = temp_path("plot.csv");
        const auto svg = temp_path("plot.svg");
        std::filesystem::remove(svg);
        const Result r = call({"mipt", "--p", "0:0.3:5", "--out", csv.string(), "--plot", "svg"});
        CHECK(r.code == 0);
        CHECK(std::filesystem::exists(csv));
        REQUIRE(std::filesystem::exists(svg));
        std::ifstream f(svg);
        std::string first;
        std::getline(f, first);
        CHECK(first.rfind("<svg", 0) == 0);
        std::filesystem::remove(csv);
        std::filesystem::remove(svg);
    }

    TEST_CASE("finite depth disables threshold search") {
        const json doc = call_json({"noisy", "--r", "0:0.04:5", "--depth", "6"});
        CHECK(doc["rows"].size() == 5);
        CHECK((!doc["metadata"].contains("thresholds") || doc["metadata"]["thresholds"].empty()));
    }
}
