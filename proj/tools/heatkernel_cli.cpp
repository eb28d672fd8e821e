// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel_cli.cpp
//! Command-line front end. Builds a JSON run spec and hands it to the C API.
//---------------------------------------------------------------------------//
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatkernel/heatkernel.h"

namespace
{
using json = nlohmann::json;

struct Flags
{
    std::string obstacle;
    std::string grid;
    std::uint64_t seed{1};
    unsigned workers{1};
    std::uint64_t paths{0};
    std::string format;
    std::string out;
    std::string constants;
    std::string options;
    std::vector<std::string> option;
    std::vector<std::string> suites;
    std::string cfg;
};

// Inline JSON when it looks like JSON, else a file to read
json json_arg(std::string const& text, char const* what)
{
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{'))
        return json::parse(text);
    std::ifstream in(text);
    if (!in)
        throw std::runtime_error(std::string("cannot read ") + what + " '"
                                 + text + "'");
    return json::parse(in);
}

json build_spec(std::string const& command, Flags const& f, CLI::App const& sub)
{
    json spec{{"command", command}};
    if (!f.format.empty())
        spec["format"] = f.format;
    if (!f.obstacle.empty())
        spec["obstacle"] = json_arg(f.obstacle, "obstacle");
    spec["grid"] = f.grid.empty() ? json::array() : json_arg(f.grid, "grid");
    json cfg = f.cfg.empty() ? json::object() : json_arg(f.cfg, "path config");
    if (sub.count("--seed"))
        cfg["seed"] = f.seed;
    if (sub.count("--paths"))
        cfg["n_paths"] = f.paths;
    cfg["workers"] = f.workers;
    spec["cfg"] = cfg;
    if (!f.constants.empty())
        spec["constants"] = f.constants;
    json opts = f.options.empty() ? json::object() : json_arg(f.options, "options");
    for (auto const& kv : f.option)
    {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--option expects key=value, got '" + kv
                                     + "'");
        auto key = kv.substr(0, eq);
        auto val = kv.substr(eq + 1);
        json parsed = json::parse(val, nullptr, false);
        opts[key] = parsed.is_discarded() ? json(val) : parsed;
    }
    if (!f.suites.empty())
    {
        if (f.suites.size() == 1 && f.suites[0] == "all")
            opts["suites"] = "all";
        else
            opts["suites"] = f.suites;
    }
    spec["options"] = opts;
    return spec;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heat kernel outside compact obstacles"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hk_version());

    Flags f;
    std::vector<std::pair<std::string, CLI::App*>> subs;
    for (auto const& [name, help] :
         std::vector<std::pair<char const*, char const*>>{
             {"density", "Asymptotic density on a grid"},
             {"bounds", "Two-sided bounds behind a ball"},
             {"simulate", "Monte Carlo estimates on a grid"},
             {"verify", "Run check suites and print a JSON report"},
             {"calibrate", "Fit the unspecified constants"},
             {"table", "Formula against simulation along a time grid"}})
    {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--obstacle", f.obstacle, "Obstacle JSON file or inline");
        s->add_option("--grid", f.grid, "Grid JSON file or inline");
        s->add_option("--seed", f.seed, "Master seed");
        s->add_option("--workers", f.workers, "Worker threads")
            ->check(CLI::PositiveNumber);
        s->add_option("--paths", f.paths, "Paths per estimate")
            ->check(CLI::PositiveNumber);
        s->add_option("--format", f.format,
                      "Output format (verify and calibrate default to json)")
            ->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--out", f.out, "Output path (default stdout)");
        s->add_option("--constants", f.constants,
                      "Constants file (default $HEATKERNEL_CONSTANTS)");
        s->add_option("--cfg", f.cfg, "Path configuration JSON");
        s->add_option("--options", f.options, "Command options JSON");
        s->add_option("--option", f.option, "Command option key=value");
        if (std::string(name) == "verify")
            s->add_option("--suite", f.suites, "Suite name, repeatable, or all");
        subs.emplace_back(name, s);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command;
    CLI::App const* sub = nullptr;
    for (auto const& [name, s] : subs)
    {
        if (s->parsed())
        {
            command = name;
            sub = s;
        }
    }

    json spec;
    try
    {
        spec = build_spec(command, f, *sub);
    }
    catch (std::exception const& e)
    {
        std::cerr << "heatkernel: " << e.what() << '\n';
        return 2;
    }

    char* output = nullptr;
    int exit_code = 0;
    hk_status st = hk_run_command(spec.dump().c_str(), &output, &exit_code);
    if (st != HK_OK)
    {
        std::cerr << "heatkernel: " << hk_last_error() << '\n';
        return 2;
    }
    std::string text = output ? output : "";
    hk_string_free(output);
    if (exit_code != 0 && *hk_last_error())
        std::cerr << "heatkernel: " << hk_last_error() << '\n';

    if (f.out.empty())
    {
        std::cout << text;
    }
    else
    {
        std::ofstream os(f.out, std::ios::binary);
        if (!(os << text))
        {
            std::cerr << "heatkernel: cannot write '" << f.out << "'\n";
            return 2;
        }
    }
    return exit_code;
}
