#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpstrip/report.hpp"

using namespace gpstrip;
namespace fs = std::filesystem;

namespace {
fs::path tmpdir() {
    auto p = fs::temp_directory_path() / "gpstrip_io_test";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
}  // namespace

TEST_CASE("config round trip and validation") {
    report::Config c;
    c.nx = 401;
    c.k = 2;
    c.tol = 1e-9;
    auto j = c.to_json();
    auto c2 = report::Config::from_json(j);
    CHECK(c2.nx == 401);
    CHECK(c2.k == 2);
    CHECK(c2.tol == 1e-9);

    auto bad = j;
    bad["schema"] = "something-else";
    CHECK_THROWS_AS(report::Config::from_json(bad), std::invalid_argument);

    const auto p = tmpdir() / "bad.json";
    {
        std::ofstream out(p);
        out << "{ not json";
    }
    CHECK_THROWS_AS(report::load_config(p), std::invalid_argument);
    CHECK_THROWS_AS(report::load_config(tmpdir() / "missing.json"),
                    std::invalid_argument);
}

TEST_CASE("ndjson files embed format and resolved config, one record per line") {
    const auto p = tmpdir() / "report.ndjson";
    report::Config c;
    {
        report::NdjsonWriter w(p, "gpstrip-test/1", c);
        w.write({{"record", "a"}, {"value", 1.5}});
        w.write({{"record", "b"}, {"value", -2.0}});
    }
    std::ifstream in(p);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        auto j = report::json::parse(line);
        if (n == 0) {
            CHECK(j["format"] == "gpstrip-test/1");
            CHECK(j["config"]["schema"] == report::kConfigSchema);
        }
        ++n;
    }
    CHECK(n == 3);
}

TEST_CASE("deterministic output: identical bytes on rerun") {
    report::Config c;
    auto write_once = [&](const fs::path& p) {
        report::NdjsonWriter w(p, "gpstrip-test/1", c);
        for (int i = 0; i < 20; ++i)
            w.write({{"record", "x"}, {"i", i}, {"v", 0.1 * i / 3.0}});
    };
    const auto p1 = tmpdir() / "a.ndjson";
    const auto p2 = tmpdir() / "b.ndjson";
    write_once(p1);
    write_once(p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("csv mirror and svg plot are produced") {
    const auto pc = tmpdir() / "t.csv";
    {
        report::CsvWriter csv(pc, {"a", "b"});
        csv.write_row({"1", "2"});
        csv.write_row({report::CsvWriter::num(0.5), report::CsvWriter::num(1e-12)});
    }
    auto txt = slurp(pc);
    CHECK(txt.find("a,b\n") == 0);
    CHECK(txt.find("0.5") != std::string::npos);

    const auto ps = tmpdir() / "t.svg";
    report::Series s{"series", "#000000", {{0.0, 1.0}, {1.0, 2.0}, {2.0, 0.5}}, true};
    report::write_svg_plot(ps, "title", "x", "y", {s});
    auto svg = slurp(ps);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}
