// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_bounds.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <random>

#include <doctest.h>

#include "heatkernel/bounds.hpp"
#include "heatkernel/error.hpp"

using namespace hk;
using namespace hk::bounds;
using doctest::Approx;

namespace
{
Frame planar(double x1, double x2, double y = 100)
{
    return Frame{2, y, x1, x2};
}
}  // namespace

TEST_CASE("exponent functions at reference points")
{
    CHECK(k_upper(1, planar(1, 0)) == Approx(std::sqrt(2.0) - 1).epsilon(1e-14));
    CHECK(k_upper(1, planar(10, 0))
          == Approx((std::sqrt(101.0) - 10) * 10).epsilon(1e-14));
    // Removable singularity at |x'| = a
    CHECK(k_upper(1, planar(3, 1)) == Approx(0.5));

    // Tangent from (2, 0) touches at angle 60 degrees: u1 = 2 - sqrt 3
    CHECK(tangent_u1(1, planar(2, 0)) == Approx(2 - std::sqrt(3.0)).epsilon(1e-14));
    CHECK(k_lower(1, planar(2, 0)) == Approx(2 / (2 + std::sqrt(3.0))).epsilon(1e-14));
    CHECK_THROWS_AS(k_lower(1, planar(1, 0)), Error);
    CHECK_THROWS_AS(k_upper(1, planar(-2, 0)), Error);
}

TEST_CASE("exponent ranges on random points of W")
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u01(0, 1);
    int bad_k = 0, bad_ks = 0;
    for (int i = 0; i < 10000; ++i)
    {
        double a = 0.5 + 2 * u01(gen);
        double h = a * u01(gen) * 0.999;
        double x1min = std::sqrt(a * a - h * h);
        double x1 = x1min * (1 + 1e-6) + a * std::exp(6 * u01(gen) - 2);
        Frame f{2 + (i % 2), 50, x1, h};
        double k = k_upper(a, f);
        double ks = k_lower(a, f);
        bad_k += !(k > std::sqrt(2.0) - 1 && k < 0.5);
        bad_ks += !(ks > 0.5 && ks < 1);
    }
    CHECK(bad_k == 0);
    CHECK(bad_ks == 0);
}

TEST_CASE("limits far behind the ball")
{
    // Both scaled gaps converge; their common value is not asserted
    double h = 0.3, b = 1 - h;
    double prev_k = 0, prev_ks = 0;
    for (double x1 : {1e2, 1e3, 1e4})
    {
        double gk = (0.5 - k_upper(1, planar(x1, h))) * x1 * x1;
        double gks = (k_lower(1, planar(x1, h)) - 0.5) * x1 * x1;
        if (x1 > 1e2)
        {
            CHECK(std::fabs(gk - prev_k) < 1e-3);
            CHECK(std::fabs(gks - prev_ks) < 1e-3);
        }
        prev_k = gk;
        prev_ks = gks;
    }
    CHECK(prev_k == Approx(b * b / 8).epsilon(1e-4));
    CHECK(std::isfinite(prev_ks));
}

TEST_CASE("planar bounds")
{
    auto c = Constants::defaults();
    auto f = planar(3, 0.2, 200);
    double t = 50;
    auto up = bound_upper_2d(1, t, f, c);
    auto ax = bound_lower_2d(1, t, f, LowerVariant::axis, 0.5, c);
    CHECK(!ax.out_of_validity);
    CHECK(ax.value <= up.value);
    CHECK(up.value <= 1);

    // Large rho t: the trivial bound is active
    auto wide = bound_upper_2d(1, 1e6, planar(3, 0.9, 10), c);
    CHECK(wide.clamped);
    CHECK(wide.value == 1);

    // Axis variant outside its window is flagged, not thrown
    auto bad = bound_lower_2d(1, 0.5, f, LowerVariant::axis, 0.5, c);
    CHECK(bad.out_of_validity);
    CHECK(bad.value == 0);

    auto pair = bound_pair(1, t, f, 0.5, c);
    CHECK(pair.lower <= pair.upper);
    CHECK(pair.constants_used.contains("C_upper_2d"));
}

TEST_CASE("three-dimensional case split")
{
    auto c = Constants::defaults();
    Frame axis{3, 200, 3, 0};
    auto lo = bound_d3(1, 50, axis, Side::lower, c);
    CHECK(lo.branch == "lower-small-perp");
    // At the seam both branches are evaluated
    double t = 50, y = 200, x1 = 3;
    double rt = x1 / (x1 + y) * t;
    Frame seam{3, y, x1, rt};
    auto up = bound_d3(1, t, seam, Side::upper, c);
    CHECK(std::isfinite(up.seam_alternate));
    CHECK_THROWS_AS(bound_d3(1, t, planar(3, 0), Side::upper, c), Error);
}

TEST_CASE("closed form for the Bessel integral")
{
    // Quadrature oracle: mpmath at 30 digits
    CHECK(bessel_identity_integral(3, 1, 2)
          == Approx(0.0795774715459476678844).epsilon(1e-9));
    CHECK(bessel_identity_closed(3, 1, 2)
          == Approx(0.0795774715459476678844).epsilon(1e-9));
    CHECK(bessel_identity_closed(2, 0.3, 5)
          == Approx(0.3050077330044624973255).epsilon(1e-9));
    for (int d : {1, 2, 3, 5})
    {
        for (auto [al, be] : {std::pair{0.5, 0.5}, {2.0, 3.0}, {0.1, 20.0}})
        {
            double q = bessel_identity_integral(d, al, be);
            double cf = bessel_identity_closed(d, al, be);
            CHECK(std::fabs(q - cf) <= 1e-8 * cf);
        }
    }
}

TEST_CASE("convolution integral")
{
    auto c = Constants::defaults();
    auto r = conv_bound_integral(2, 0.5, 10, 3, 2, 0.1, c);
    CHECK(r.integral == Approx(0.00131761289172893295).epsilon(1e-9));
    CHECK(r.full_integral == Approx(0.00205632418444478393).epsilon(1e-9));
    CHECK(!r.out_of_validity);
    // Later half dominates when z <= x
    CHECK(r.integral >= r.full_integral - r.integral);
    auto near_one = conv_bound_integral(2, 1 - 1e-9, 10, 3, 2, 0.1, c);
    CHECK(near_one.integral < 1e-10);
    CHECK(conv_bound_integral(2, 0.5, 100, 1, 1, 1, c).out_of_validity);
}

TEST_CASE("bridge passage windows")
{
    // Quadrature oracle: mpmath at 30 digits
    auto w = bridge_passage_lower(1, 2, 1, Passage::window);
    CHECK(w.lhs == Approx(0.466701001490458663926).epsilon(1e-9));
    CHECK(w.rhs == 1);
    auto fp = bridge_passage_lower(1, 2, 1, Passage::window_first_passage);
    CHECK(fp.lhs == Approx(0.0405897024773077869373).epsilon(1e-9));
    CHECK(fp.ratio == Approx(0.375893460505038208264).epsilon(1e-9));
    auto we = bridge_passage_lower(1, 2, 1, Passage::weighted, 0.5, 3);
    CHECK(we.lhs == Approx(0.000630256140426436863).epsilon(1e-9));

    // (1 - rho_1) times the plain window bounds the first-passage form
    for (auto [b, l, t] : {std::tuple{1.0, 4.0, 3.0}, {0.5, 10.0, 20.0},
                           {2.0, 5.0, 0.7}})
    {
        auto p = bridge_passage_lower(b, l, t, Passage::window);
        auto q = bridge_passage_lower(b, l, t, Passage::window_first_passage);
        // q.ratio * clamp is the first-passage integral with q0 divided out
        CHECK(q.ratio * p.rhs >= (1 - b / l) * p.lhs * (1 - 1e-12));
    }
    CHECK(bridge_passage_lower(3, 4, 1, Passage::window).out_of_validity);
    CHECK_THROWS_AS(bridge_passage_lower(4, 3, 1, Passage::window), Error);
}
