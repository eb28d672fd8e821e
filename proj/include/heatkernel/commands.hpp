// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/commands.hpp
//! Command implementations behind the CLI and the C API entry point.
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "heatkernel/engine.hpp"
#include "heatkernel/euclid.hpp"
#include "heatkernel/verify.hpp"

namespace hk::cmd
{
/*!
 * A single command invocation.
 *
 * JSON form:
 * \code
 * {"command": "density", "obstacle": {"balls": [...]}, "grid": [...],
 *  "cfg": {...}, "format": "csv", "constants": "path", "options": {...}}
 * \endcode
 * Each grid entry holds "t" and the points "x" and "y". A value of "t" may
 * be a number, a list, or {"geom" | "lin" | "exp": [lo, hi, n]} ("exp"
 * spaces lg t linearly). A point is a coordinate list or
 * {"sqrt_t": c, "dir": [...]} for c sqrt(t) along dir.
 */
struct RunSpec
{
    std::string command;
    euclid::Obstacle obstacle = euclid::Obstacle::ball(1);
    nlohmann::json grid = nlohmann::json::array();
    mc::PathConfig cfg;
    bool seed_given{false};
    bool paths_given{false};
    std::string format;  //!< Empty: json for verify and calibrate, else csv
    std::string constants_path;  //!< Empty: environment, then defaults
    nlohmann::json options = nlohmann::json::object();

    static RunSpec from_json(nlohmann::json const& j);
};

struct CommandResult
{
    int exit_code{0};  //!< 0 pass, 1 check failure, 2 usage
    std::string output;
    std::string message;
};

std::vector<std::string> const& command_names();

//! Run a command; errors become exit code 2 with a message
CommandResult run(RunSpec const& spec);
CommandResult run_json(std::string const& spec_text);

//! Expand grid entries in order; an empty result is a usage error
std::vector<verify::GridPoint>
expand_grid(nlohmann::json const& grid, int dim);

}  // namespace hk::cmd
