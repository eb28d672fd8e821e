// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_greenfn.cpp
//---------------------------------------------------------------------------//
#include <cmath>

#include <doctest.h>

#include "heatkernel/engine.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/greenfn.hpp"

using namespace hk;
using namespace hk::green;
using euclid::Ball;

namespace
{
Obstacle two_discs()
{
    return Obstacle({Ball{PointD({-1.5, 0.0}), 1.0},
                     Ball{PointD({1.5, 0.0}), 1.0}});
}

PotentialBuildOptions small_build()
{
    PotentialBuildOptions o;
    o.n_boundary = 100000;
    o.n_node = 500;
    o.n_angles = 32;
    o.seed = 5;
    return o;
}

//! Fraction of walks from x that reach radius r before the obstacle
mc::MCEstimate escape_mc(Obstacle const& ob, PointD const& x, double r,
                         std::uint64_t n)
{
    double radii[] = {r};
    auto start = mc::Vec::from(x);
    auto m = mc::run_paths(n, 1, 17, 1,
                           [&](std::uint64_t, mc::PathRng& rng, double* out) {
                               auto w = mc::walk_on_spheres(ob, start, radii,
                                                            1e-6, rng);
                               out[0] = w.reached;
                           });
    return {m.mean(0), m.std_error(0), n, 17, "escape"};
}
}  // namespace

TEST_CASE("disc and ball potentials")
{
    CHECK(e_disc(1, PointD({std::exp(1.0), 0.0})) == doctest::Approx(1));
    CHECK(e_disc(2, PointD({0.0, 2.0})) == 0);
    CHECK_THROWS_AS(e_disc(1, PointD({0.5, 0.0})), Error);
    CHECK_THROWS_AS(e_disc(-1, PointD({2.0, 0.0})), Error);
    CHECK(u_ball(1, PointD({2.0, 0.0, 0.0})) == doctest::Approx(0.5));
    CHECK(u_ball(1, PointD({2.0, 0.0, 0.0, 0.0})) == doctest::Approx(0.75));
    double prev = 0;
    for (double r : {1.0, 1.5, 3.0, 10.0, 1e3})
    {
        double u = u_ball(1, PointD({0.0, 0.0, r}));
        CHECK(u >= prev);
        prev = u;
    }
    CHECK_THROWS_AS(u_ball(1, PointD({2.0, 0.0})), Error);
}

TEST_CASE("disc potential is harmonic")
{
    double h = 1e-3;
    for (auto [x, y] : {std::pair{1.7, 0.2}, {-3.0, 4.0}, {0.1, -1.3}})
    {
        auto e = [](double u, double v) { return e_disc(1, PointD({u, v})); };
        double lap = (e(x + h, y) + e(x - h, y) + e(x, y + h) + e(x, y - h)
                      - 4 * e(x, y))
                     / (h * h);
        CHECK(std::fabs(lap) < 1e-6);
    }
}

TEST_CASE("analytic model")
{
    auto pm = PotentialModel::make(Obstacle::ball(1));
    CHECK(pm.kind() == PotentialModel::Kind::analytic_disc);
    CHECK(pm(PointD({0.0, 0.5})) == 0);
    CHECK(pm.circle_mean(4).value == doctest::Approx(std::log(4.0)));
    auto esc = escape_probability(pm, PointD({std::exp(1.0), 0.0}),
                                  std::exp(2.0));
    CHECK(esc.value == doctest::Approx(0.5));
    CHECK(esc.lower == doctest::Approx(0.5));
    CHECK(esc.upper == doctest::Approx(0.5));
    auto rc = eA_recursion_check(pm, PointD({5.0, 1.0}), 2);
    CHECK(std::fabs(rc.residual) < 1e-10);
    CHECK_THROWS_AS(PotentialModel::analytic(two_discs()), Error);
}

TEST_CASE("estimated model for two discs")
{
    auto ob = two_discs();
    auto pm = PotentialModel::make(ob, small_build());
    REQUIRE(pm.kind() == PotentialModel::Kind::mc_estimated);
    CHECK(pm(PointD({1.5, 0.5})) == 0);

    // Escape enclosure against direct walks
    for (auto x : {PointD({0.0, 3.0}), PointD({4.0, 0.0})})
    {
        CAPTURE(x[0]);
        auto esc = escape_probability(pm, x, 40);
        auto mc = escape_mc(ob, x, 40, 100000);
        auto v = pm.eval(x);
        double slack = 3 * std::hypot(mc.std_error, v.std_error / 4);
        CHECK(mc.mean >= esc.lower - slack);
        CHECK(mc.mean <= esc.upper + slack);
    }

    // Harmonic averages reproduce the model outside the table
    auto rc = eA_recursion_check(pm, PointD({30.0, 10.0}), 25);
    CHECK(std::fabs(rc.residual) <= 3 * rc.std_error + 1e-9);
    auto inner = eA_recursion_check(pm, PointD({10.0, 5.0}), 4);
    CHECK(std::fabs(inner.residual) <= 3 * inner.std_error + 0.02);

    auto back = PotentialModel::from_json(pm.to_json());
    for (auto x : {PointD({0.0, 3.0}), PointD({7.0, -2.0}), PointD({50.0, 1.0})})
        CHECK(back(x) == pm(x));
}

TEST_CASE("regression estimate of e_A")
{
    auto disc = Obstacle::ball(1);
    std::vector<double> radii{10, 30, 100, 300, 1000};
    auto est = estimate_eA(disc, PointD({3.0, 0.0}), radii, 100000, 3);
    double slack = 3 * est.estimate.std_error + est.bias_bound;
    CHECK(std::fabs(est.estimate.mean - std::log(3.0)) <= slack);
    CHECK(std::fabs(est.intercept_mean) < 0.1);
    CHECK(est.plain == doctest::Approx(std::log(3.0)).epsilon(0.05));

    // Enlarging the obstacle lowers the potential
    Obstacle bigger({Ball{PointD({0.0, 0.0}), 1.0},
                     Ball{PointD({2.0, 0.0}), 0.5}});
    auto est2 = estimate_eA(bigger, PointD({-3.0, 0.0}), radii, 100000, 4);
    auto est1 = estimate_eA(disc, PointD({-3.0, 0.0}), radii, 100000, 4);
    CHECK(est2.estimate.mean < est1.estimate.mean);

    CHECK_THROWS_AS(estimate_eA(disc, PointD({3.0, 0.0}), {10, 20}, 10, 1),
                    Error);
    CHECK_THROWS_AS(estimate_eA(disc, PointD({30.0, 0.0}), radii, 10, 1),
                    Error);
}

TEST_CASE("estimated avoidance in three dimensions")
{
    PotentialBuildOptions o;
    o.n_eval = 40000;
    auto pm = PotentialModel::estimate(Obstacle::ball(1, 3), o);
    auto v = pm.eval(PointD({2.0, 0.0, 0.0}));
    CHECK(std::fabs(v.value - 0.5) <= 3 * v.std_error);
    auto far = pm.eval(PointD({0.0, 10.0, 0.0}));
    CHECK(std::fabs(far.value - 0.9) <= 3 * far.std_error);
}
