// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/bounds.hpp
//! Two-sided bounds behind a ball at superballistic range, and the
//! one-dimensional passage and convolution estimates used to derive them.
//---------------------------------------------------------------------------//
#pragma once

#include <limits>
#include <string>

#include <json.hpp>

#include "heatkernel/constants.hpp"
#include "heatkernel/euclid.hpp"

namespace hk::bounds
{
using euclid::Frame;

//---------------------------------------------------------------------------//
// EXPONENT FUNCTIONS
//---------------------------------------------------------------------------//
/*!
 * k(x) = (sqrt(x1^2 + b^2) - x1) x1 / b^2 with b = a - |x'|, evaluated as
 * x1 / (sqrt(x1^2 + b^2) + x1) so that b = 0 gives the limit 1/2.
 */
double k_upper(double a, Frame const& f);

/*!
 * k_*(x) = x1 / (x1 - u1 + sqrt((x1 - u1)^2 + (a - |x'|)^2)), where u is
 * where the upper tangent line from x to the sphere of radius a meets the
 * height a (in the plane of the first axis and x').
 */
double k_lower(double a, Frame const& f);
//! First coordinate of the tangent construction point
double tangent_u1(double a, Frame const& f);

//---------------------------------------------------------------------------//
// BOUNDS ON THE RATIO p^{U(a)} / p
//---------------------------------------------------------------------------//
struct BoundValue
{
    double value{0};  //!< constant * expression, after any clamp
    double expression{0};  //!< Factor multiplying the constant
    std::string constant_name;
    std::string branch;
    bool clamped{false};
    bool out_of_validity{false};
    //! Other branch at the seam a|x'| = rho t (d >= 3), else NaN
    double seam_alternate{std::numeric_limits<double>::quiet_NaN()};
};

//! C sqrt(rho t)/b exp(-k b^2/(rho t)), clamped to 1 (d = 2)
BoundValue bound_upper_2d(double a, double t, Frame const& f,
                          Constants const& constants);

enum class LowerVariant
{
    axis,  //!< x1 > 2a, a^2 < t < a y
    general  //!< x outside U(a + delta sqrt(rho t)), b >= delta sqrt(rho t)
};

BoundValue bound_lower_2d(double a, double t, Frame const& f,
                          LowerVariant variant, double delta,
                          Constants const& constants);

enum class Side
{
    upper,
    lower
};

//! Three-dimensional bounds with the a|x'| versus rho t case split
BoundValue bound_d3(double a, double t, Frame const& f, Side side,
                    Constants const& constants);

struct BoundPair
{
    double lower{0};
    double upper{1};
    bool out_of_validity{false};
    nlohmann::json constants_used = nlohmann::json::object();
};

/*!
 * Best available enclosure of the ratio behind U(a): the largest valid
 * lower bound and the upper bound (clamped to 1).
 */
BoundPair bound_pair(double a, double t, Frame const& f, double delta,
                     Constants const& constants);

//---------------------------------------------------------------------------//
// CONVOLUTION AND PASSAGE ESTIMATES
//---------------------------------------------------------------------------//
struct ConvolutionBound
{
    double integral{0};  //!< int_{theta t}^t p_s(x) p_{t-s}(z) ds
    double lhs{0};  //!< theta^{d/2} * integral
    double bound{0};  //!< C_delta * expression
    double expression{0};
    //! int_0^t when z <= x, else NaN
    double full_integral{std::numeric_limits<double>::quiet_NaN()};
    bool out_of_validity{false};
};

ConvolutionBound conv_bound_integral(int d, double theta, double t,
                                     double x_mag, double z_mag, double delta,
                                     Constants const& constants);

//! int_0^inf p_u(alpha u - beta) du by quadrature
double bessel_identity_integral(int d, double alpha, double beta);
//! 2 (2 pi)^{-d/2} (alpha/beta)^nu K_nu(alpha beta) e^{alpha beta}
double bessel_identity_closed(int d, double alpha, double beta);

enum class Passage
{
    window,  //!< Bridge passage probability in [rho t / 2, rho t]
    window_first_passage,  //!< Same with two first-passage densities
    weighted  //!< d-dimensional product weighted by s^alpha
};

struct PassageLower
{
    double lhs{0};
    double rhs{0};  //!< Bound without its constant
    double ratio{0};  //!< lhs / rhs, computed without underflow
    bool out_of_validity{false};
};

PassageLower bridge_passage_lower(double b, double ell, double t,
                                  Passage which, double alpha = 0, int d = 1);

}  // namespace hk::bounds
