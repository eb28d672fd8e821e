// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file acceptance.cpp
//! Acceptance criteria, one line each. Runs through the C entry point.
//!
//! Usage: acceptance [--criterion N]... [--paths N] [--seed N] [--workers N]
//---------------------------------------------------------------------------//
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatkernel/heatkernel.h"

namespace
{
using json = nlohmann::json;

struct Criterion
{
    int id;
    char const* suite;  //!< Empty for the determinism check
    char const* title;
    double limit_s;
};

Criterion const criteria[] = {
    {1, "identity", "exact identities", 120},
    {2, "parabolic", "parabolic convergence", 1800},
    {3, "survival", "survival law", 600},
    {4, "hitting_d3", "hitting-time density", 600},
    {5, "sandwich", "sandwich bounds", 1800},
    {6, "tri_oracle", "tri-oracle consistency", 900},
    {7, "far", "far-regime limit", 600},
    {8, "ballistic", "ballistic window", 600},
    {9, "flat_d3", "flat regime in 3d", 600},
    {10, "", "verify determinism across workers", 600},
};

struct Settings
{
    std::uint64_t paths{100000};
    std::uint64_t seed{1};
    unsigned workers{1};
};

struct Outcome
{
    bool ok{false};
    std::string output;
    std::string error;
};

Outcome verify(std::string const& suite, Settings const& s, unsigned workers)
{
    json spec{{"command", "verify"},
              {"format", "json"},
              {"cfg",
               {{"n_paths", s.paths}, {"seed", s.seed}, {"workers", workers}}},
              {"options", {{"suites", {suite}}}}};
    char* out = nullptr;
    int code = 0;
    Outcome o;
    if (hk_run_command(spec.dump().c_str(), &out, &code) != HK_OK)
    {
        o.error = hk_last_error();
        return o;
    }
    o.output = out ? out : "";
    hk_string_free(out);
    if (code == 2)
        o.error = hk_last_error();
    o.ok = code == 0;
    return o;
}

std::string summarize(json const& report)
{
    int total = 0, passed = 0;
    std::string failed;
    for (auto const& suite : report["suites"])
    {
        for (auto const& c : suite["checks"])
        {
            ++total;
            if (c["pass"].get<bool>())
            {
                ++passed;
            }
            else if (failed.size() < 200)
            {
                failed += failed.empty() ? "" : ", ";
                failed += c["name"].get<std::string>();
            }
        }
    }
    std::string s = std::to_string(passed) + "/" + std::to_string(total)
                    + " checks";
    if (!failed.empty())
        s += "; failed: " + failed;
    return s;
}

bool run_criterion(Criterion const& c, Settings const& s)
{
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    if (*c.suite)
    {
        auto o = verify(c.suite, s, s.workers);
        if (!o.error.empty())
        {
            detail = "error: " + o.error;
        }
        else
        {
            pass = o.ok;
            detail = summarize(json::parse(o.output));
        }
    }
    else
    {
        auto a = verify("identity", s, 1);
        auto b = verify("identity", s, 3);
        pass = a.error.empty() && b.error.empty() && a.output == b.output;
        detail = pass ? "reports byte-identical for workers 1 and 3"
                      : "reports differ";
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (secs > c.limit_s)
    {
        pass = false;
        detail += "; over the time limit";
    }
    std::printf("AC%-2d %-4s %-36s %8.1f s  (%s)\n", c.id, pass ? "PASS" : "FAIL",
                c.title, secs, detail.c_str());
    std::fflush(stdout);
    return pass;
}

}  // namespace

int main(int argc, char** argv)
{
    Settings s;
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
    {
        auto arg = std::string(argv[i]);
        if (i + 1 >= argc)
        {
            std::fprintf(stderr, "missing value for %s\n", argv[i]);
            return 2;
        }
        char const* val = argv[++i];
        if (arg == "--criterion")
            selected.push_back(std::atoi(val));
        else if (arg == "--paths")
            s.paths = std::strtoull(val, nullptr, 10);
        else if (arg == "--seed")
            s.seed = std::strtoull(val, nullptr, 10);
        else if (arg == "--workers")
            s.workers = static_cast<unsigned>(std::atoi(val));
        else
        {
            std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
            return 2;
        }
    }

    bool all = true;
    int ran = 0;
    for (auto const& c : criteria)
    {
        bool chosen = selected.empty();
        for (int id : selected)
            chosen = chosen || id == c.id;
        if (!chosen)
            continue;
        ++ran;
        all = run_criterion(c, s) && all;
    }
    if (ran == 0)
    {
        std::fprintf(stderr, "no criterion selected\n");
        return 2;
    }
    return all ? 0 : 1;
}
