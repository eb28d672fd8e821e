// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/verify.hpp
//! Check suites comparing formulas with simulation and quadrature, and the
//! calibration run that fills the unspecified constants.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatkernel/constants.hpp"
#include "heatkernel/euclid.hpp"

namespace hk::verify
{
using euclid::PointD;

struct Check
{
    std::string name;
    bool pass{false};
    double measured{0};
    double reference{0};
    double tolerance{0};
    double std_error{0};

    nlohmann::json to_json() const;
};

struct SuiteReport
{
    std::string name;
    std::vector<Check> checks;
    nlohmann::json details = nlohmann::json::object();

    bool pass() const;
    nlohmann::json to_json() const;
};

struct SuiteOptions
{
    std::uint64_t seed{1};
    unsigned workers{1};
    //! Base path count; suites that need more scale it up
    std::uint64_t n_paths{100000};
    Constants constants = Constants::defaults();
};

//! identity, parabolic, survival, hitting_d3, sandwich, tri_oracle, far,
//! ballistic, flat_d3
std::vector<std::string> const& suite_names();
SuiteReport run_suite(std::string const& name, SuiteOptions const& opts);

//---------------------------------------------------------------------------//
// GRIDS
//---------------------------------------------------------------------------//
struct GridPoint
{
    double t{0};
    PointD x;
    PointD y;
};

/*!
 * Points behind the unit ball with a^2 < t < a|y|, x1 > 2a, y on the
 * negative first axis, and b^2/(rho t) in [0.5, 4].
 */
std::vector<GridPoint> sandwich_grid(int d, int n, std::uint64_t seed);

//! Superballistic points outside W with |x| > 1.5a and t > a^2 (d = 2)
std::vector<GridPoint> offw_grid(int n, std::uint64_t seed);

nlohmann::json grid_to_json(std::vector<GridPoint> const& grid);

//! Kendall tau-a between two samples of equal length
double kendall_tau(std::vector<double> const& a, std::vector<double> const& b);

//! 64-bit FNV-1a of a byte string, as 16 hex digits
std::string fnv1a_hex(std::string const& bytes);

//---------------------------------------------------------------------------//
// CALIBRATION
//---------------------------------------------------------------------------//
struct CalibrationOptions
{
    std::uint64_t seed{20260101};
    unsigned workers{1};
    std::uint64_t n_paths{100000};
    int n_planar{60};
    int n_spatial{30};
    int n_offw{30};
};

struct CalibrationResult
{
    Constants constants;
    std::string grid_hash;
    nlohmann::json details = nlohmann::json::object();
};

CalibrationResult calibrate(CalibrationOptions const& opts);

}  // namespace hk::verify
