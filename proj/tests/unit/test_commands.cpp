// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_commands.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include <doctest.h>

#include "heatkernel/commands.hpp"
#include "heatkernel/verify.hpp"

using namespace hk;
using doctest::Approx;
using json = nlohmann::json;

namespace
{
cmd::CommandResult run(json spec)
{
    return cmd::run_json(spec.dump());
}

std::vector<std::vector<std::string>> split_csv(std::string const& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : line)
        {
            if (c == '"')
                quoted = !quoted;
            else if (c == ',' && !quoted)
                cells.push_back(std::exchange(cell, {}));
            else
                cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

json mixed_grid()
{
    return json::parse(R"([
        {"t": 1e8, "x": [10, 0], "y": [0, 50]},
        {"t": 10, "x": [3, 0], "y": [-200, 0]},
        {"t": 1e4, "x": [1000, 0], "y": [0, 1000]},
        {"t": 1e4, "x": [5, 0], "y": [0, 2000]}
    ])");
}
}  // namespace

TEST_CASE("grid expansion")
{
    auto g = cmd::expand_grid(
        json::parse(R"({"t": {"geom": [100, 1e4, 3]}, "x": [1, 2],
                        "y": {"sqrt_t": 2, "dir": [0, 3]}})"),
        2);
    REQUIRE(g.size() == 3);
    CHECK(g[0].t == 100);
    CHECK(g[1].t == 1000);
    CHECK(g[2].t == 1e4);
    CHECK(g[1].y[1] == Approx(2 * std::sqrt(1000.0)));
    CHECK(g[1].y[0] == 0);

    auto lin = cmd::expand_grid(
        json::parse(R"([{"t": {"lin": [1, 3, 3]}, "x": [3], "y": [4]}])"), 1);
    CHECK(lin[2].t == 3);
}

TEST_CASE("density rows follow the grid")
{
    auto r = run({{"command", "density"}, {"grid", mixed_grid()},
                  {"format", "json"}});
    REQUIRE(r.exit_code == 0);
    auto rows = json::parse(r.output);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0]["t"] == 1e8);
    CHECK(rows[0]["regime"] == "parabolic");
    CHECK(rows[1]["regime"] == "superballistic-W");
    CHECK(rows[2]["regime"] == "far");
    // Far regime with a start below the validity floor
    CHECK(rows[3]["regime"] == "far");
    CHECK(rows[3]["flag"] == 1);
    CHECK(rows[0]["flag"] == 0);
}

TEST_CASE("csv and json carry the same values")
{
    for (char const* command : {"density", "bounds"})
    {
        CAPTURE(command);
        json spec{{"command", command}, {"grid", mixed_grid()}};
        auto csv = run(spec);
        spec["format"] = "json";
        auto js = run(spec);
        REQUIRE(csv.exit_code == 0);
        REQUIRE(js.exit_code == 0);
        auto table = split_csv(csv.output);
        auto rows = json::parse(js.output);
        REQUIRE(table.size() == rows.size() + 1);
        auto const& header = table[0];
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            CHECK(rows[i].size() == header.size());
            for (std::size_t k = 0; k < header.size(); ++k)
            {
                auto const& cell = table[i + 1][k];
                auto const& v = rows[i][header[k]];
                if (v.is_null())
                    CHECK(cell == "nan");
                else if (v.is_string())
                    CHECK(cell == v.get<std::string>());
                else
                    CHECK(std::stod(cell) == v.get<double>());
            }
        }
    }
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({{"command", "density"}, {"grid", json::array()}}).exit_code
          == 2);
    CHECK(run({{"command", "table"},
               {"grid", json::parse(R"({"t": [], "x": [3, 0], "y": [0, 3]})")}})
              .exit_code
          == 2);
    CHECK(run({{"command", "density"}, {"grid", mixed_grid()},
               {"format", "xml"}})
              .exit_code
          == 2);
    CHECK(run({{"command", "nope"}, {"grid", mixed_grid()}}).exit_code == 2);
    CHECK(run({{"command", "density"},
               {"grid", json::parse(R"({"t": -1, "x": [3, 0], "y": [0, 3]})")}})
              .exit_code
          == 2);
    auto bad = cmd::run_json("{not json");
    CHECK(bad.exit_code == 2);
    CHECK(!bad.message.empty());
}

TEST_CASE("simulate reproduces across worker counts")
{
    json spec{{"command", "simulate"},
              {"grid", json::parse(R"({"t": 10, "x": [3, 0], "y": [0, 3]})")},
              {"cfg", {{"n_paths", 4000}, {"seed", 9}, {"workers", 1}}}};
    auto a = run(spec);
    spec["cfg"]["workers"] = 3;
    auto b = run(spec);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("verify report is deterministic and fails honestly")
{
    json spec{{"command", "verify"},
              {"cfg", {{"n_paths", 4000}, {"seed", 2}, {"workers", 1}}},
              {"options", {{"suites", {"far"}}}}};
    auto a = run(spec);
    spec["cfg"]["workers"] = 3;
    auto b = run(spec);
    CHECK(a.output == b.output);
    auto report = json::parse(a.output);
    CHECK(report["pass"].get<bool>() == (a.exit_code == 0));
    CHECK(!report.contains("workers"));

    // Constants far too small for the upper bound force a failure
    auto c = Constants::defaults();
    c.set("C_upper_2d", ConstantEntry{1e-12, "test", 0});
    auto path = std::string("hk_test_constants.json");
    c.save(path);
    json fail{{"command", "verify"},
              {"constants", path},
              {"cfg", {{"n_paths", 4000}}},
              {"options", {{"suites", {"sandwich"}}}}};
    auto f = run(fail);
    CHECK(f.exit_code == 1);
    std::remove(path.c_str());
}

TEST_CASE("calibration is idempotent")
{
    json spec{{"command", "calibrate"},
              {"cfg", {{"n_paths", 2000}}},
              {"options", {{"n_planar", 3}, {"n_spatial", 2}, {"n_offw", 2}}}};
    auto a = run(spec);
    auto b = run(spec);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto c = Constants::from_json(json::parse(a.output));
    for (auto const& [name, e] : c.entries())
    {
        CAPTURE(name);
        CHECK(std::isfinite(e.value));
        CHECK(e.value > 0);
        CHECK(e.grid_hash.size() == 16);
    }
}

TEST_CASE("table reports a trend statistic")
{
    json spec{{"command", "table"},
              {"grid", json::parse(R"({"t": {"geom": [1e2, 1e5, 4]},
                                       "x": [3, 0],
                                       "y": {"sqrt_t": 1, "dir": [0, 1]}})")},
              {"cfg", {{"n_paths", 4000}}},
              {"format", "json"}};
    auto r = run(spec);
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.output);
    CHECK(j["rows"].size() == 4);
    double tau = j["kendall_tau"];
    CHECK(tau >= -1);
    CHECK(tau <= 1);
    double prev = 0;
    for (auto const& row : j["rows"])
    {
        CHECK(row["t"].get<double>() > prev);
        prev = row["t"];
    }
    spec["format"] = "csv";
    auto csv = run(spec);
    CHECK(csv.output.find("# kendall_tau,") != std::string::npos);
}

TEST_CASE("trend and hash helpers")
{
    CHECK(verify::kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}) == -1);
    CHECK(verify::kendall_tau({1, 2, 3, 4}, {1, 2, 3, 4}) == 1);
    CHECK(verify::kendall_tau({1, 2, 3}, {1, 3, 2}) == Approx(1.0 / 3));
    // Published FNV-1a 64-bit test vectors
    CHECK(verify::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(verify::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(verify::fnv1a_hex("foobar") == "85944171f73967e8");
}
