#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "repelcircle/errors.hpp"
#include "repelcircle/experiments.hpp"
#include "repelcircle/io.hpp"

using Catch::Approx;
using namespace repelcircle;

namespace {

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

ExperimentReport probe_report() {
    ExperimentReport rep;
    rep.name = "probe";
    rep.n = 31;
    rep.beta = 2.0;
    rep.replicas = 500;
    rep.checks.push_back({"variance", 0.26, 0.25, 0.025});
    rep.checks.push_back({"ks_normal", 0.0123, 0.0, 0.03});
    rep.extras["mean"] = -0.004;
    rep.extras["ess"] = 480.0;
    rep.finalize();
    return rep;
}

}  // namespace

TEST_CASE("doubles format to shortest round-trip strings", "[io]") {
    for (const double v : {0.0, 1.0, 1.0 / 3.0, 3.141592653589793, 1e-300, 6.02e23, -2.5e-8}) {
        const std::string s = format_double(v);
        REQUIRE(bits(std::strtod(s.c_str(), nullptr)) == bits(v));
    }
    REQUIRE(bits(std::strtod(format_double(-0.0).c_str(), nullptr)) == bits(-0.0));

    REQUIRE(format_double(2.0) == "2");
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(1e100) == "1e+100");
}

TEST_CASE("output stems pack the run configuration", "[io]") {
    REQUIRE(file_stem("clt", 101, 2.0, 7) == "clt-101-2-7");
    REQUIRE(file_stem("bounds", 301, 0.5, 0) == "bounds-301-0.5-0");
}

TEST_CASE("csv builder joins rows without quoting", "[io]") {
    CsvBuilder csv;
    csv.row({"a", "b"});
    csv.row({"1", "2"});
    REQUIRE(csv.str() == "a,b\n1,2\n");
}

TEST_CASE("reports round-trip through json", "[io]") {
    const auto rep = probe_report();
    REQUIRE(rep.pass);

    const auto j = report_to_json(rep);
    REQUIRE(j["name"] == "probe");
    REQUIRE(j["statistics"]["variance"] == 0.26);
    REQUIRE(j["statistics"]["variance_target"] == 0.25);
    REQUIRE(j["statistics"]["variance_tolerance"] == 0.025);
    REQUIRE(j["statistics"]["mean"] == -0.004);
    REQUIRE(j["pass"] == true);

    const auto back = report_from_json(j);
    REQUIRE(back == rep);

    const auto dumped = j.dump(2);
    const auto reparsed = report_to_json(report_from_json(nlohmann::ordered_json::parse(dumped)));
    REQUIRE(reparsed.dump(2) == dumped);
}

TEST_CASE("text files write and read back verbatim", "[io]") {
    const auto dir = std::filesystem::temp_directory_path() / "repelcircle-io-test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "probe.txt";
    const std::string payload = "line one\nline two\n";
    write_text_file(path.string(), payload);

    std::ifstream in(path, std::ios::binary);
    std::string got((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(got == payload);
    std::filesystem::remove_all(dir);

    REQUIRE_THROWS_AS(write_text_file("/nonexistent-dir-xyz/file.txt", payload), IoError);
}
