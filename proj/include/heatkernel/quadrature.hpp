// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/quadrature.hpp
//! Adaptive one-dimensional integration.
//---------------------------------------------------------------------------//
#pragma once

#include <functional>

namespace hk::quad
{
//---------------------------------------------------------------------------//
struct QuadResult
{
    double value{0};
    double abs_err_est{0};
    long evals{0};
    bool flagged{false};  //!< Evaluation budget exhausted before tolerance
};

struct QuadOptions
{
    double abs_tol{1e-10};
    double rel_tol{0};  //!< Accept when err <= max(abs_tol, rel_tol*|value|)
    long max_evals{200000};
};

using Integrand = std::function<double(double)>;

//! Adaptive 7/15-point Gauss-Kronrod; b (or a) may be infinite
QuadResult integrate(Integrand const& f, double a, double b, QuadOptions opts);
QuadResult integrate(Integrand const& f, double a, double b, double tol = 1e-10);

//! Integrate after the substitution x = exp(v), for 0 < a < b <= inf
QuadResult
integrate_log(Integrand const& f, double a, double b, QuadOptions opts);

//! Plain trapezoid rule on n equal panels of a periodic integrand
double periodic_trapezoid(Integrand const& f, double a, double b, int n);

}  // namespace hk::quad
