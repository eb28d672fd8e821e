// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_asymptotics.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "heatkernel/asymptotics.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/montecarlo.hpp"
#include "heatkernel/oracles.hpp"

using namespace hk;
using namespace hk::asym;
using doctest::Approx;
using euclid::Obstacle;
using euclid::PointD;
using green::PotentialModel;

namespace
{
PointD polar(double r, double th)
{
    return PointD({r * std::cos(th), r * std::sin(th)});
}
}  // namespace

TEST_CASE("regime classification")
{
    auto disc = Obstacle::ball(1);
    auto tag = [&](double t, PointD const& x, PointD const& y) {
        return classify_regime(disc, t, x, y).tag;
    };
    CHECK(tag(1e6, polar(500, 0.1), polar(500, 2)) == Regime::parabolic);
    CHECK(tag(1e6, polar(10, 0), polar(1e4, 1)) == Regime::intermediate);
    CHECK(tag(1e4, polar(1e3, 0), polar(1e3, 1)) == Regime::far);
    // Needs M above the radius to leave room for |x| < M
    CHECK(classify_regime(disc, 100, polar(1.1, 0), polar(50, 0), 2).tag
          == Regime::ballistic);
    // Behind the disc as seen from y, and beside it
    CHECK(tag(10, PointD({3.0, 0.0}), PointD({-200.0, 0.0}))
          == Regime::superballistic_W);
    CHECK(tag(10, PointD({0.0, 3.0}), PointD({-200.0, 0.0}))
          == Regime::superballistic_offW);
    // Order does not matter
    CHECK(tag(1e6, polar(1e4, 1), polar(10, 0)) == Regime::intermediate);
    CHECK_THROWS_AS(tag(1, polar(0.5, 0), polar(2, 0)), Error);
    CHECK(std::string(to_cstring(Regime::superballistic_W))
          == "superballistic-W");
}

TEST_CASE("planar ratio formulas on the unit disc")
{
    auto model = PotentialModel::analytic(Obstacle::ball(1));
    auto c = Constants::defaults();
    double e5 = std::exp(5.0);

    auto par = ratio_parabolic(model, std::exp(20.0), polar(e5, 0),
                               polar(e5, 1), c);
    CHECK(par.value == Approx(0.25).epsilon(1e-13));
    CHECK(!par.out_of_validity);
    CHECK(par.err_star == 0);
    // On the boundary the ratio vanishes
    CHECK(ratio_parabolic(model, 1e8, polar(1, 0), polar(5, 1), c).value == 0);
    CHECK_THROWS_AS(ratio_parabolic(model, 1, polar(2, 0), polar(2, 1), c),
                    Error);

    // lg(t / y) = 10 and e_A(x) = 5
    double y = 1e5;
    auto mid = ratio_intermediate(model, y * std::exp(10.0), polar(e5, 0),
                                  polar(y, 2));
    CHECK(mid.value == Approx(0.5).epsilon(1e-13));
    CHECK(!mid.out_of_validity);

    auto far = ratio_far(Obstacle::ball(1), 1e4, polar(1e3, 0), polar(1e3, 1));
    CHECK(far.value == 1);
    CHECK(!far.out_of_validity);
    CHECK(ratio_far(Obstacle::ball(1), 1e4, polar(5, 0), polar(1e3, 1))
              .out_of_validity);
}

TEST_CASE("boundary-layer term")
{
    auto disc = Obstacle::ball(1);
    auto c = Constants::defaults();
    CHECK(err_star(disc, polar(3, 0), 100, c) == 0);
    double prev = 2;
    for (double t : {10.0, 1e2, 1e3, 1e4})
    {
        double e = err_star(disc, polar(1.5, 0), t, c);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("three-dimensional product law")
{
    auto model = PotentialModel::make(Obstacle::ball(1, 3));
    auto r = ratio_d3(model, 1e4, PointD({2.0, 0.0, 0.0}),
                      PointD({0.0, 2.0, 0.0}));
    CHECK(r.value == Approx(0.25).epsilon(1e-13));
    CHECK(!r.out_of_validity);
    CHECK(ratio_d3(model, 1e4, PointD({1.0, 0.0, 0.0}),
                   PointD({0.0, 7.0, 0.0}))
              .value
          == 0);
}

TEST_CASE("hitting-time density")
{
    // Quadrature oracle: mpmath, d = 3 closed form
    auto r = hitting_time_density_asymp(1, 3, 2, 1e4);
    CHECK(r.value == Approx(1.99471140200716e-7).epsilon(1e-10));
    // Small-start branch is 2 lg(x/a) / (t lg^2 t) up to the Gaussian factor;
    // mpmath gives the ratio to the large-start branch at x = 5, t = 1e8
    auto p = hitting_time_density_asymp(1, 2, 5, 1e8);
    double lg = std::log(1e8);
    CHECK(p.value
          == Approx(2 * std::log(5.0) / (1e8 * lg * lg)
                    * std::exp(-25 / 2e8))
                 .epsilon(1e-12));
    CHECK(p.diagnostics["branch_ratio"].get<double>()
          == Approx(0.3211495625840816663530555938).epsilon(1e-9));
    // No overflow or NaN at small times
    auto s = hitting_time_density_asymp(1, 2, 5, 0.01);
    CHECK(std::isfinite(s.value));
    CHECK(s.out_of_validity);
}

TEST_CASE("planar survival and hitting laws")
{
    auto model = PotentialModel::analytic(Obstacle::ball(1));
    double e3 = std::exp(3.0);
    auto s = survival_2d(model, polar(e3, 0), std::exp(20.0),
                         SurvivalBranch::small_x);
    CHECK(s.value == Approx(0.3).epsilon(1e-13));
    CHECK(!s.out_of_validity);

    // E1(1/2) from scipy.special.exp1
    auto h = survival_2d(model, polar(10, 0), 100, SurvivalBranch::large_x);
    CHECK(h.value
          == Approx(0.5597735947761608 / (2 * std::log(10.0))).epsilon(1e-12));
    CHECK(!h.out_of_validity);
    auto bad = survival_2d(model, polar(200, 0), 100, SurvivalBranch::large_x);
    CHECK(bad.out_of_validity);
}

TEST_CASE("ballistic constant from a hitting measure")
{
    auto disc = Obstacle::ball(1);
    mc::LambdaMeasure empty;
    auto r = ballistic_cstar(disc, PointD({2.0, 0.0}), PointD({0.5, 0.0}),
                             empty);
    CHECK(r.c_A == 1);
    CHECK(r.c_star == 0);

    // Shrinking mass drives c^A to 1
    double prev = 0;
    for (double w : {1.0, 0.1, 0.01})
    {
        mc::LambdaMeasure lam;
        lam.atoms.push_back({PointD({1.0, 0.0}), w, 0.0});
        auto b = ballistic_cstar(disc, PointD({2.0, 0.0}), PointD({0.5, 0.0}),
                                 lam);
        CHECK(b.c_A > prev);
        prev = b.c_A;
    }
    CHECK(prev > 0.99);
}

TEST_CASE("density routing is symmetric")
{
    auto model = PotentialModel::analytic(Obstacle::ball(1));
    auto c = Constants::defaults();
    struct Case
    {
        double t;
        PointD x, y;
    };
    for (auto const& k : {Case{1e6, polar(50, 0), polar(500, 2)},
                          Case{1e6, polar(10, 0), polar(1e4, 1)},
                          Case{1e4, polar(1e3, 0), polar(1e3, 1)},
                          Case{10, PointD({3.0, 0.0}), PointD({-200.0, 0.0})},
                          Case{10, PointD({0.0, 3.0}), PointD({-200.0, 0.0})},
                          Case{100, polar(1.1, 0), polar(50, 0)}})
    {
        auto a = density_full(model, k.t, k.x, k.y, c);
        auto b = density_full(model, k.t, k.y, k.x, c);
        CHECK(a.value == b.value);
        CHECK(a.regime.tag == b.regime.tag);
        CHECK(a.value >= 0);
        if (a.is_envelope)
        {
            CHECK(a.lower <= a.value);
            CHECK(a.value <= a.upper);
        }
    }
    auto sb = density_full(model, 10, PointD({3.0, 0.0}),
                           PointD({-200.0, 0.0}), c);
    CHECK(sb.is_envelope);
    CHECK(sb.anchor == "bounds behind a ball");
    auto j = sb.to_json();
    CHECK(j.contains("anchor"));
}

TEST_CASE("hitting decomposition oracles")
{
    auto disc = Obstacle::ball(1);
    mc::PathConfig cfg;
    cfg.n_paths = 20000;
    cfg.seed = 7;
    cfg.dt_max = 0.05;
    cfg.dt_near = 0.005;

    // Far from the obstacle nothing is subtracted
    auto lone = oracle::convolution_defect(disc, 1, PointD({50.0, 0.0}),
                                           PointD({51.0, 0.0}),
                                           oracle::HittingSource::mc, cfg);
    CHECK(lone.correction == 0);
    CHECK(lone.value == lone.free);

    // MC defect against the direct bridge estimate
    PointD x({3.0, 0.0}), y({0.0, 3.0});
    double t = 10;
    auto def = oracle::convolution_defect(disc, t, x, y,
                                          oracle::HittingSource::mc, cfg);
    cfg.seed = 8;
    auto br = mc::bridge_avoidance(disc, x, y, t, cfg);
    double direct = br.mean * def.free;
    double err = std::hypot(def.correction_err, br.std_error * def.free);
    CHECK(std::fabs(def.value - direct) <= 4 * err);
    CHECK(def.value > 0);

    auto flagged = oracle::convolution_defect(
        disc, 100, PointD({1.5, 0.0}), PointD({0.0, 5.0}),
        oracle::HittingSource::asymptotic);
    CHECK(flagged.out_of_validity);
    CHECK_THROWS_AS(oracle::convolution_defect(Obstacle::ball(1, 3), t,
                                               PointD({0.0, 3.0}),
                                               PointD({3.0, 0.0}),
                                               oracle::HittingSource::mc),
                    Error);
}

TEST_CASE("survival-weighted kernel integral")
{
    // Quadrature oracle: mpmath at 30 digits
    auto j = oracle::j_integral(2, 1e6, 1e9, 0.1, 10);
    CHECK(j.j_small == Approx(0.650712668390171).epsilon(1e-8));
    CHECK(j.j_mid == Approx(0.0592960819986479).epsilon(1e-8));
    CHECK(j.j_large == Approx(1.63658375497915e-5).epsilon(1e-6));
    CHECK(j.reference == Approx(1 - 4 / std::log(1e6)));
    CHECK(!j.out_of_validity);

    auto none = oracle::j_integral(0, 1e6, 1e9, 0.1, 10);
    CHECK(none.total == 1);

    // The tail beyond alpha eta shrinks as alpha grows
    double prev = 1;
    for (double alpha : {2.0, 10.0, 50.0})
    {
        auto r = oracle::j_integral(2, 1e6, 1e9, 0.1, alpha);
        CHECK(r.j_large < prev);
        prev = r.j_large;
    }
}

TEST_CASE("constants files")
{
    auto c = Constants::defaults();
    CHECK(c.has("C_upper_2d"));
    CHECK(c.has("lambda_err"));
    CHECK_THROWS_AS(c.get("no_such_constant"), Error);

    c.set("c_offW", ConstantEntry{0.37, "abc123", 0.01});
    auto back = Constants::from_json(c.to_json());
    CHECK(back.get("c_offW") == 0.37);
    CHECK(back.entry("c_offW").grid_hash == "abc123");

    auto path = std::filesystem::temp_directory_path() / "hk_constants.json";
    c.save(path.string());
    auto loaded = Constants::load(path.string());
    CHECK(loaded.to_json() == c.to_json());
    std::filesystem::remove(path);

    auto bad = c.to_json();
    bad["c_offW"]["constant"] = -1.0;
    CHECK_THROWS_AS(Constants::from_json(bad), Error);
}
