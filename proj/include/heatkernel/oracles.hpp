// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/oracles.hpp
//! Independent predictions of p^A built from the first-hitting
//! decomposition p_t(y-x) - p^A_t(x,y) = int H(x, s; dxi) p_{t-s}(y - xi).
//---------------------------------------------------------------------------//
#pragma once

#include <limits>

#include "heatkernel/engine.hpp"
#include "heatkernel/euclid.hpp"

namespace hk::oracle
{
using euclid::Obstacle;
using euclid::PointD;

enum class HittingSource
{
    mc,  //!< Simulated hits, averaged directly
    asymptotic  //!< Leading-order time density times the uniform angle law
};

struct DefectResult
{
    double free{0};  //!< p_t(y - x)
    double correction{0};  //!< Hitting-decomposition integral
    double correction_err{0};  //!< MC stderr or quadrature estimate
    double value{0};  //!< free - correction, the predicted p^A_t(x, y)
    bool out_of_validity{false};
};

/*!
 * Predicted p^A_t(x, y) for a single centered ball.
 *
 * The MC source averages p_{t-s}(y - B_s) over simulated hits before t.
 * The asymptotic source integrates over (s, angle) by nested quadrature and
 * is flagged unless |x| <= sqrt(t) (planar small-start window).
 */
DefectResult convolution_defect(Obstacle const& obstacle, double t,
                                PointD const& x, PointD const& y,
                                HittingSource source,
                                mc::PathConfig const& cfg = {});

struct JIntegral
{
    double j_small{0};  //!< [0, delta eta] over p_t(y)
    double j_mid{0};  //!< [delta eta, alpha eta] over p_t(y)
    double j_large{0};  //!< [alpha eta, t/2] over p_t(y)
    double total{0};
    double reference{0};  //!< 1 - 2 e_A / lg eta
    bool out_of_validity{false};
};

/*!
 * Pieces of int_0^{t/2} p_{t-s}(y) P[sigma in ds] / p_t(y) with
 * eta = (t/y)^2 and the survival law P[sigma > s] = min(1, 2 e_A / lg s).
 */
JIntegral j_integral(double e_A, double eta, double t, double delta,
                     double alpha);

}  // namespace hk::oracle
