// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file constants.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/constants.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "heatkernel/error.hpp"

namespace hk
{
namespace
{
// Output of `heatkernel calibrate` with the default grid and seed
constexpr char const* default_json = R"json({
  "C_upper_2d": {"constant": 0.2541341958651952, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0037325733578262156},
  "c0_lower_2d": {"constant": 0.12618450016029342, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0013375435903342009},
  "kappa_delta_2d": {"constant": 0.14491651322548965, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0015361011309004528},
  "C_upper_d3": {"constant": 0.5259810735352677, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0023276756199588403},
  "c_lower_d3": {"constant": 0.20438812026660888, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0019489118184479286},
  "c_offW": {"constant": 0.732455573697418, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0013903254352227942},
  "C_delta": {"constant": 0.33433542353428114, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0},
  "c_passage_window": {"constant": 0.30406616193097713, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0},
  "c_passage_first": {"constant": 0.29289191087873745, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0},
  "c_passage_weighted": {"constant": 0.03497158806569607, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.0},
  "lambda_err": {"constant": 4.6855152793530115, "calibration_grid_hash": "6bbfae6b688c0258", "stderr": 0.013756430875972711}
})json";
}  // namespace

Constants Constants::defaults()
{
    return from_json(nlohmann::json::parse(default_json));
}

Constants Constants::from_environment()
{
    char const* path = std::getenv("HEATKERNEL_CONSTANTS");
    if (path && *path)
        return load(path);
    return defaults();
}

Constants Constants::load(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot read constants file '" + path + "'");
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (nlohmann::json::exception const& e)
    {
        fail(ErrorCode::parse, "constants file '" + path + "': " + e.what());
    }
    return from_json(j);
}

Constants Constants::from_json(nlohmann::json const& j)
{
    if (!j.is_object())
        fail(ErrorCode::parse, "constants must be a JSON object");
    Constants c;
    for (auto const& [name, v] : j.items())
    {
        ConstantEntry e;
        try
        {
            e.value = v.at("constant").get<double>();
            e.grid_hash = v.value("calibration_grid_hash", std::string{});
            e.std_error = v.value("stderr", 0.0);
        }
        catch (nlohmann::json::exception const& ex)
        {
            fail(ErrorCode::parse, "constant '" + name + "': " + ex.what());
        }
        if (!std::isfinite(e.value) || e.value <= 0)
            fail(ErrorCode::parse, "constant '" + name + "' must be positive");
        c.entries_[name] = e;
    }
    return c;
}

nlohmann::json Constants::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (auto const& [name, e] : entries_)
    {
        j[name] = {{"constant", e.value},
                   {"calibration_grid_hash", e.grid_hash},
                   {"stderr", e.std_error}};
    }
    return j;
}

void Constants::save(std::string const& path) const
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot write constants file '" + path + "'");
    out << this->to_json().dump(2) << '\n';
}

bool Constants::has(std::string const& name) const
{
    return entries_.count(name) != 0;
}

ConstantEntry const& Constants::entry(std::string const& name) const
{
    auto it = entries_.find(name);
    if (it == entries_.end())
        fail(ErrorCode::invalid_argument, "missing constant '" + name + "'");
    return it->second;
}

void Constants::set(std::string const& name, ConstantEntry e)
{
    entries_[name] = std::move(e);
}

}  // namespace hk
