// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_quadrature.cpp
//---------------------------------------------------------------------------//
#include <cmath>

#include <doctest.h>

#include "heatkernel/quadrature.hpp"
#include "heatkernel/specfun.hpp"

using namespace hk;

TEST_CASE("integrate basics")
{
    CHECK(quad::integrate([](double x) { return x; }, 0, 1).value
          == doctest::Approx(0.5).epsilon(1e-15));
    auto r = quad::integrate([](double x) { return std::exp(-x); }, 0,
                             INFINITY, 1e-12);
    CHECK(std::fabs(r.value - 1) < 1e-12);
    CHECK(r.abs_err_est >= 0);
    CHECK_FALSE(r.flagged);
}

TEST_CASE("integrate is exact on polynomials")
{
    // The Kronrod rule integrates degree <= 22 exactly on one panel
    for (int n = 0; n <= 22; ++n)
    {
        auto r = quad::integrate([n](double x) { return std::pow(x, n); },
                                 0.0, 1.0, 1e-15);
        CAPTURE(n);
        CHECK(std::fabs(r.value - 1.0 / (n + 1)) < 1e-14);
    }
}

TEST_CASE("integrate matches E1")
{
    for (double w : {1e-3, 0.1, 1.0, 3.0, 20.0})
    {
        auto f = [](double u) { return std::exp(-u) / u; };
        quad::QuadOptions opts;
        opts.abs_tol = 0;
        opts.rel_tol = 1e-13;
        auto r = quad::integrate_log(f, w, INFINITY, opts);
        CAPTURE(w);
        CHECK(std::fabs(r.value / specfun::exp_integral_E1(w) - 1) < 1e-10);
    }
}

TEST_CASE("budget exhaustion is flagged")
{
    quad::QuadOptions opts;
    opts.abs_tol = 1e-15;
    opts.max_evals = 100;
    auto r = quad::integrate([](double x) { return std::sin(1 / x); }, 1e-6,
                             1.0, opts);
    CHECK(r.flagged);
}
