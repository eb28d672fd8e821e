// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/asymptotics.hpp
//! Regime classification and leading-order formulas for the killed kernel.
//---------------------------------------------------------------------------//
#pragma once

#include <limits>
#include <string>

#include <json.hpp>

#include "heatkernel/bounds.hpp"
#include "heatkernel/constants.hpp"
#include "heatkernel/euclid.hpp"
#include "heatkernel/greenfn.hpp"
#include "heatkernel/montecarlo.hpp"

namespace hk::asym
{
using euclid::Obstacle;
using euclid::PointD;
using green::PotentialModel;

//---------------------------------------------------------------------------//
enum class Regime
{
    parabolic,
    intermediate,
    far,
    ballistic,
    superballistic_W,
    superballistic_offW,
    unclassified
};

char const* to_cstring(Regime r);

struct RegimeLabel
{
    Regime tag{Regime::unclassified};
    double M{1};
    double epsilon{0.1};
};

/*!
 * Classify (t, x, y) after ordering the points so that |x| <= |y|.
 *
 * Precedence: superballistic (|y| >= M t), parabolic (|y| <= M sqrt t),
 * ballistic (|x| < M and |y|/t > epsilon), far (|x||y| >= t/M),
 * intermediate (|y| > sqrt t and |x||y| <= M t), otherwise unclassified.
 * Superballistic points are split by membership in W for the bounding
 * ball, in the frame where y lies on the negative first axis.
 */
RegimeLabel classify_regime(Obstacle const& obstacle, double t,
                            PointD const& x, PointD const& y, double M = 1,
                            double epsilon = 0.1);

//---------------------------------------------------------------------------//
//! Thresholds standing in for the limits x -> inf and y/t -> 0
struct Validity
{
    double floor_factor{10};  //!< min(|x|,|y|) >= floor_factor * R_A
    double max_speed{0.1};  //!< |y|/t <= max_speed
};

struct AsymptoticResult
{
    double value{0};  //!< Ratio or density
    RegimeLabel regime;
    std::string error_tag;
    std::string anchor;  //!< Name of the statement the value comes from
    bool out_of_validity{false};
    double err_star{0};  //!< Additive boundary-layer term, reported apart
    bool is_envelope{false};
    double lower{std::numeric_limits<double>::quiet_NaN()};
    double upper{std::numeric_limits<double>::quiet_NaN()};
    nlohmann::json diagnostics = nlohmann::json::object();

    nlohmann::json to_json() const;
};

//! 4 e_A(x) e_A(y) / (lg t)^2 (d = 2)
AsymptoticResult ratio_parabolic(PotentialModel const& model, double t,
                                 PointD const& x, PointD const& y,
                                 Constants const& constants);
//! e_A(x) / lg(t / |y|) with |x| <= |y| (d = 2)
AsymptoticResult ratio_intermediate(PotentialModel const& model, double t,
                                    PointD const& x, PointD const& y,
                                    Validity const& validity = {});
//! 1, flagged below the validity floor
AsymptoticResult ratio_far(Obstacle const& obstacle, double t,
                           PointD const& x, PointD const& y,
                           Validity const& validity = {});
//! u_A(x) u_A(y) (d >= 3)
AsymptoticResult ratio_d3(PotentialModel const& model, double t,
                          PointD const& x, PointD const& y, double M = 1,
                          Validity const& validity = {});

//! C exp(-lambda t / (R_A^2 lg t)) if |x| < 2 R_A, else 0
double err_star(Obstacle const& obstacle, PointD const& x, double t,
                Constants const& constants);

//---------------------------------------------------------------------------//
//! Leading term of the hitting-time density of U(a) from distance x
AsymptoticResult
hitting_time_density_asymp(double a, int d, double x_mag, double t);

enum class SurvivalBranch
{
    small_x,  //!< 2 e_A(x) / lg t, survival, for |x| <= sqrt t
    large_x  //!< E1(x^2/2t) / (2 lg(t/x)), hitting, for |x| >= sqrt(t/lg t)
};

AsymptoticResult survival_2d(PotentialModel const& model, PointD const& x,
                             double t, SurvivalBranch branch);

//---------------------------------------------------------------------------//
struct BallisticResult
{
    double c_A{0};  //!< 1 - c*
    double c_star{0};
    double std_error{0};
};

/*!
 * c^A(x; v) from a normalized hitting measure on the boundary:
 * c* = e^{-v.x} / K_nu(|v|) sum_i w_i K_nu(|v||x - xi_i|) / |x - xi_i|^nu.
 */
BallisticResult ballistic_cstar(Obstacle const& obstacle, PointD const& x,
                                PointD const& v,
                                mc::LambdaMeasure const& lambda);

//---------------------------------------------------------------------------//
struct DensityOptions
{
    double M{1};
    double epsilon{0.1};
    Validity validity;
    double delta{default_bound_delta};
};

/*!
 * Route (t, x, y) to the formula for its regime and return a density.
 *
 * Ratios are multiplied by the free kernel. Regimes without a point
 * formula return an envelope [lower, upper] with value the geometric mean.
 * The result does not depend on the order of x and y.
 */
AsymptoticResult density_full(PotentialModel const& model, double t,
                              PointD const& x, PointD const& y,
                              Constants const& constants,
                              DensityOptions const& opts = {});

}  // namespace hk::asym
