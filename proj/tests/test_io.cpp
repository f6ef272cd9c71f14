#include "mfg/io.hpp"

#include "json.hpp"

#include "doctest.h"

#include <fstream>
#include <sstream>

using namespace mfg;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("csv numbers are locale independent and round-trippable") {
    CHECK(csv_number(0.5) == "0.5");
    CHECK(csv_number(-1.0) == "-1");
    CHECK(csv_number(5e-4) == "0.0005");
    CHECK(csv_number(1e-12) == "1e-12");
    CHECK(csv_number(0.1).find(',') == std::string::npos);
}

TEST_CASE("csv files are rectangular with LF line endings") {
    const std::string path = "/tmp/mfg_io_test.csv";
    {
        CsvFile csv(path, {"a", "b"});
        csv.row({"1", "2"});
        CHECK_THROWS(csv.row({"only-one"}));
        csv.row({csv_number(0.25), "x"});
    }
    const auto text = slurp(path);
    CHECK(text == "a,b\n1,2\n0.25,x\n");
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("svg plots contain axes and one polyline per series") {
    const std::string path = "/tmp/mfg_io_test.svg";
    write_line_svg(path, "title <with markup>", "x", "y",
                   {{"s1", {0, 1, 2}, {0.0, 0.5, 1.0}},
                    {"s2", {0, 1, 2}, {1.0, 0.5, 0.0}}});
    const auto text = slurp(path);
    CHECK(text.find("<svg") == 0);
    CHECK(text.find("&lt;with markup&gt;") != std::string::npos);
    std::size_t polylines = 0, pos = 0;
    while ((pos = text.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        ++pos;
    }
    CHECK(polylines == 2);
}

TEST_CASE("manifest records configuration, seed, version, and timing") {
    ensure_dir("/tmp/mfg_io_manifest");
    write_manifest("/tmp/mfg_io_manifest", "solve config.ini",
                   {{"payoff.kappa", "0.05"}}, 99, 1.25);
    const auto j = nlohmann::json::parse(slurp("/tmp/mfg_io_manifest/manifest.json"));
    CHECK(j["tool"] == "mfgsolve");
    CHECK(j["version"] == tool_version);
    CHECK(j["seed"] == 99);
    CHECK(j["command"] == "solve config.ini");
    CHECK(j["config"]["payoff.kappa"] == "0.05");
    CHECK(j["wall_clock_seconds"] == doctest::Approx(1.25));
}
