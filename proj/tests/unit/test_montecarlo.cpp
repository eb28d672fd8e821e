// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_montecarlo.cpp
//---------------------------------------------------------------------------//
#include <cmath>

#include <doctest.h>

#include "heatkernel/engine.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/montecarlo.hpp"
#include "heatkernel/rng.hpp"
#include "heatkernel/specfun.hpp"

using namespace hk;
using namespace hk::mc;
using euclid::Obstacle;
using euclid::PointD;

namespace
{
PathConfig config(std::uint64_t n, std::uint64_t seed = 7)
{
    PathConfig c;
    c.n_paths = n;
    c.seed = seed;
    return c;
}

bool within(MCEstimate const& e, double expect, double k = 3, double slack = 0)
{
    return std::fabs(e.mean - expect) <= k * e.std_error + slack;
}
}  // namespace

TEST_CASE("philox known answers")
{
    // Reference vectors published with the Random123 library
    auto z = PathRng::philox({0, 0, 0, 0}, {0, 0});
    CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d,
                                            0xbc57ac4c, 0x9b00dbd8});
    auto f = PathRng::philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                             {0xffffffff, 0xffffffff});
    CHECK(f == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e,
                                            0xa20bc7c6, 0x6d5451fd});
}

TEST_CASE("rng moments")
{
    PathRng rng(3, 11);
    double s = 0, s2 = 0;
    int const n = 200000;
    for (int i = 0; i < n; ++i)
    {
        double g = rng.normal();
        s += g;
        s2 += g * g;
    }
    CHECK(std::fabs(s / n) < 4 / std::sqrt(double(n)));
    CHECK(std::fabs(s2 / n - 1) < 4 * std::sqrt(2.0 / n));
}

TEST_CASE("reduction is independent of worker count")
{
    auto fn = [](std::uint64_t, PathRng& rng, double* out) {
        out[0] = rng.normal();
        out[1] = rng.uniform() * 1e-3;
    };
    auto a = run_paths(5000, 2, 42, 1, fn, 0);
    auto b = run_paths(5000, 2, 42, 3, fn, 0);
    CHECK(a.sum == b.sum);
    CHECK(a.sum2 == b.sum2);
    CHECK(a.cross == b.cross);

    auto ob = Obstacle::ball(1.0, 2);
    auto c1 = config(3000);
    auto c3 = c1;
    c3.workers = 3;
    auto e1 = bridge_avoidance(ob, PointD({3.0, 0.0}), PointD({0.0, 3.0}), 5, c1);
    auto e3 = bridge_avoidance(ob, PointD({3.0, 0.0}), PointD({0.0, 3.0}), 5, c3);
    CHECK(e1.mean == e3.mean);
    CHECK(e1.std_error == e3.std_error);
}

TEST_CASE("config json")
{
    auto c = config(123, 9);
    c.dt_max = 0.5;
    auto back = PathConfig::from_json(c.to_json());
    CHECK(back.dt_max == 0.5);
    CHECK(std::isinf(back.dt_near));
    CHECK(back.n_paths == 123);
    CHECK(back.seed == 9);
    nlohmann::json bad = {{"dt_max", 1.0}, {"dt_near", 2.0}};
    CHECK_THROWS_AS(PathConfig::from_json(bad), Error);
}

TEST_CASE("crossing correction is exact for a flat barrier")
{
    for (auto [eta0, eta, s] : {std::tuple{1.0, 1.0, 2.0}, {0.3, 1.5, 1.0},
                                {2.0, 0.5, 4.0}})
    {
        CAPTURE(eta0);
        auto c = config(100000);
        c.dt_max = s / 16;
        c.step_scale = 1e6;
        auto e = halfspace_bridge(eta0, eta, s, c);
        CHECK(within(e, specfun::bridge_stay_positive(eta0, eta, s)));
    }
}

TEST_CASE("line avoidance")
{
    auto c = config(100000);
    c.dt_max = 1.0 / 16;
    c.step_scale = 1e6;
    auto e = line_bridge(1, 1, 0, 1, 1, c);
    CHECK(within(e, specfun::bridge_stay_above_line(1, 1, 0, 1, 1)));
    c.dt_max = 2.0 / 16;
    auto e2 = line_bridge(1, 1, 1, 1, 2, c);
    CHECK(within(e2, specfun::bridge_stay_above_line(1, 1, 1, 1, 2)));
}

TEST_CASE("bessel tail by simulation")
{
    auto c = config(200000);
    auto e = bessel_tail_mc(0.5, 0.5, 1, 0.3, c);
    double exact = specfun::bessel_tail(0.5, 0.5, 1, 0.3,
                                        specfun::TailMode::exact);
    CHECK(within(e, exact));
    CHECK(bessel_tail_mc(0.5, 0.5, 1, 1e-6, c).mean == 0);
    CHECK_THROWS_AS(bessel_tail_mc(0.3, 0.5, 1, 1, c), Error);
}

TEST_CASE("bridge far from obstacle")
{
    auto ob = Obstacle::ball(1.0, 2);
    // Tube distance 8 sqrt(t) plus diameter
    double t = 1;
    PointD x({11.0, 0.0}), y({11.0, 1.0});
    auto e = bridge_avoidance(ob, x, y, t, config(20000));
    CHECK(e.mean >= 0.999);
    auto short_bridge = bridge_avoidance(ob, PointD({1.5, 0.0}),
                                         PointD({1.5, 0.01}), 1e-6,
                                         config(2000));
    CHECK(short_bridge.mean > 0.999);
    CHECK_THROWS_AS(bridge_avoidance(ob, PointD({0.5, 0.0}), y, t, config(10)),
                    Error);
}

TEST_CASE("survival curve is monotone and starts near one")
{
    auto ob = Obstacle::ball(1.0, 2);
    auto curve = survival_curve(ob, PointD({3.0, 0.0}), {1e-4, 1, 10, 100},
                                config(20000));
    CHECK(curve[0].mean > 0.9999);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].mean <= curve[i - 1].mean);
}

TEST_CASE("hitting mass in three dimensions and conservation")
{
    auto ob = Obstacle::ball(1.0, 3);
    std::vector<double> edges{1, 10, 100, 1000};
    auto h = hitting_time_histogram(ob, PointD({2.0, 0.0, 0.0}), edges,
                                    config(40000));
    CHECK(within(h.total_hit, 0.5));
    // Every path either survives or loses its weight to some time bin
    double mass = h.pre_mass.mean + h.survival.mean;
    double err2 = h.pre_mass.std_error * h.pre_mass.std_error
                  + h.survival.std_error * h.survival.std_error;
    for (auto const& b : h.bins)
    {
        mass += b.value.mean * (b.hi - b.lo);
        err2 += std::pow(b.value.std_error * (b.hi - b.lo), 2);
    }
    CHECK(std::fabs(mass - 1) <= 3 * std::sqrt(err2) + 1e-12);
    CHECK_THROWS_AS(hitting_time_histogram(ob, PointD({2.0, 0.0, 0.0}), {1},
                                           config(10)),
                    Error);
}

TEST_CASE("step size halving")
{
    auto ob = Obstacle::ball(1.0, 2);
    auto c = config(40000);
    auto coarse = survival_probability(ob, PointD({2.0, 0.0}), 20, c);
    c.step_scale *= 0.5;
    c.seed = 8;
    auto fine = survival_probability(ob, PointD({2.0, 0.0}), 20, c);
    double err = std::hypot(coarse.std_error, fine.std_error);
    CHECK(std::fabs(coarse.mean - fine.mean) <= 2 * err);
}

TEST_CASE("exit site law")
{
    auto ob = Obstacle::ball(1.0, 2);
    auto h = exit_site_conditional(ob, PointD({3.0, 0.0}), 200, 2000, 8,
                                   config(40000));
    CHECK(h.window_mass.mean > 0);
    // Reflection about the axis through x: bins b and nb-1-b agree
    for (std::size_t b = 0; b < 4; ++b)
    {
        auto const& lo = h.bins[b].value;
        auto const& hi = h.bins[7 - b].value;
        CHECK(std::fabs(lo.mean - hi.mean)
              <= 3 * std::hypot(lo.std_error, hi.std_error));
    }
    CHECK_THROWS_AS(exit_site_conditional(Obstacle::ball(1.0, 3),
                                          PointD({3.0, 0.0, 0.0}), 1, 2, 4,
                                          config(10)),
                    Error);
}

TEST_CASE("disc survival against Laplace inversion")
{
    // Exterior-disc survival from the Laplace transform
    // (1 - K0(r sqrt(2p)) / K0(a sqrt(2p))) / p, inverted numerically
    auto ob = Obstacle::ball(1.0, 2);
    auto curve = survival_curve(ob, PointD({2.0, 0.0}), {1, 20}, config(60000));
    CHECK(within(curve[0], 0.769918468966135));
    CHECK(within(curve[1], 0.368708330972019));

    auto ob3 = Obstacle::ball(1.0, 3);
    auto s3 = survival_probability(ob3, PointD({2.0, 0.0, 0.0}), 5,
                                   config(40000));
    CHECK(within(s3, 1 - 0.5 * std::erfc(1 / std::sqrt(10.0))));
}

TEST_CASE("disc bridge against Laplace inversion")
{
    // Ratio p^A_t(x,x) / p_t(0) for the unit disc, |x| = sqrt(t)/10, t = e^8,
    // from the angular Fourier series of the resolvent inverted numerically
    auto ob = Obstacle::ball(1.0, 2);
    double t = std::exp(8.0);
    PointD x({std::sqrt(t) / 10, 0.0});
    auto e = bridge_avoidance(ob, x, x, t, config(30000));
    CHECK(within(e, 0.167999462664664));
}
