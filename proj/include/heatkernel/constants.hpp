// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/constants.hpp
//! Empirically calibrated constants for the bound expressions.
//---------------------------------------------------------------------------//
#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace hk
{
struct ConstantEntry
{
    double value{0};
    std::string grid_hash;
    double std_error{0};
};

/*!
 * Named constants with the hash of the grid they were fitted on.
 *
 * Known names:
 * - C_upper_2d, c0_lower_2d, kappa_delta_2d: planar bounds behind a disc
 * - C_upper_d3, c_lower_d3: the same in three dimensions
 * - c_offW: lower ratio outside the shadow region at superballistic range
 * - C_delta: convolution bound
 * - c_passage_window, c_passage_first, c_passage_weighted: floors of the bridge passage bounds
 * - lambda_err: decay rate for the boundary-layer error term
 */
class Constants
{
  public:
    //! Built-in values from the default calibration run
    static Constants defaults();
    //! File named by HEATKERNEL_CONSTANTS if set, else the defaults
    static Constants from_environment();
    static Constants load(std::string const& path);
    static Constants from_json(nlohmann::json const& j);

    void save(std::string const& path) const;
    nlohmann::json to_json() const;

    bool has(std::string const& name) const;
    ConstantEntry const& entry(std::string const& name) const;
    double get(std::string const& name) const { return entry(name).value; }
    void set(std::string const& name, ConstantEntry e);

    std::map<std::string, ConstantEntry> const& entries() const
    {
        return entries_;
    }

  private:
    std::map<std::string, ConstantEntry> entries_;
};

//! Default delta in the general planar lower bound
inline constexpr double default_bound_delta = 0.5;

}  // namespace hk
