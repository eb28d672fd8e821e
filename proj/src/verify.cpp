// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file verify.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "heatkernel/asymptotics.hpp"
#include "heatkernel/bounds.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/greenfn.hpp"
#include "heatkernel/montecarlo.hpp"
#include "heatkernel/oracles.hpp"
#include "heatkernel/quadrature.hpp"
#include "heatkernel/rng.hpp"
#include "heatkernel/specfun.hpp"

namespace hk::verify
{
namespace
{
constexpr double pi = std::numbers::pi;
using euclid::Obstacle;
using json = nlohmann::json;

std::string fmt(char const* f, double a, double b = 0, double c = 0)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

mc::PathConfig path_config(SuiteOptions const& o, std::uint64_t stream,
                           std::uint64_t n)
{
    mc::PathConfig cfg;
    cfg.seed = mc::mix64(o.seed * 1000003 + stream);
    cfg.n_paths = n;
    cfg.workers = o.workers;
    return cfg;
}

Check within_sigma(std::string name, mc::MCEstimate const& e, double ref,
                   double k = 3)
{
    Check c;
    c.name = std::move(name);
    c.measured = e.mean;
    c.reference = ref;
    c.std_error = e.std_error;
    c.tolerance = k * e.std_error;
    c.pass = std::fabs(e.mean - ref) <= c.tolerance;
    return c;
}

Check relative(std::string name, double value, double ref, double tol)
{
    Check c;
    c.name = std::move(name);
    c.measured = value;
    c.reference = ref;
    c.tolerance = tol;
    c.pass = std::fabs(value - ref) <= tol * std::fabs(ref);
    return c;
}

Check flag(std::string name, bool ok, double measured = 0)
{
    Check c;
    c.name = std::move(name);
    c.pass = ok;
    c.measured = measured;
    return c;
}

bool strictly_decreasing(std::vector<double> const& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
    {
        if (!(v[i] < v[i - 1]))
            return false;
    }
    return true;
}

PointD on_axis(int d, double x1, double x2 = 0)
{
    std::vector<double> c(d, 0.0);
    c[0] = x1;
    c[1] = x2;
    return PointD(std::move(c));
}

//---------------------------------------------------------------------------//
// SUITES
//---------------------------------------------------------------------------//
SuiteReport identity_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "identity";
    auto n = std::max<std::uint64_t>(o.n_paths, 100000);

    // Bridge above a flat wall; the crossing correction is exact here
    int stream = 0;
    for (auto [e0, e1, s] : {std::tuple{1.0, 1.0, 2.0}, {0.3, 1.5, 1.0},
                             {2.0, 0.5, 4.0}})
    {
        auto cfg = path_config(o, ++stream, n);
        cfg.dt_max = s / 16;
        cfg.step_scale = 1e6;
        auto e = mc::halfspace_bridge(e0, e1, s, cfg);
        r.checks.push_back(
            within_sigma(fmt("bridge_positive[%g,%g,%g]", e0, e1, s), e,
                         specfun::bridge_stay_positive(e0, e1, s)));
    }
    for (auto [k, e0, e1, l, t] : {std::tuple{1.0, 1.0, 0.0, 1.0, 1.0},
                                   {1.0, 1.0, 1.0, 1.0, 2.0},
                                   {0.5, 0.5, 0.2, 2.0, 1.0}})
    {
        auto cfg = path_config(o, ++stream, n);
        cfg.dt_max = t / 16;
        cfg.step_scale = 1e6;
        auto e = mc::line_bridge(k, e0, e1, l, t, cfg);
        r.checks.push_back(within_sigma(
            fmt("line_avoidance[k=%g,eta=%g,eta'=%g]", k, e0, e1), e,
            specfun::bridge_stay_above_line(k, e0, e1, l, t)));
    }

    quad::QuadOptions tight;
    tight.abs_tol = 0;
    tight.rel_tol = 1e-12;
    for (auto [x, t] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.3, 5.0}})
    {
        auto cdf = quad::integrate(
            [x = x](double s) { return specfun::first_passage_density(x, s); },
            0, t, tight);
        r.checks.push_back(relative(fmt("first_passage_cdf[%g,%g]", x, t),
                                    cdf.value,
                                    2 * specfun::normal_sf(x / std::sqrt(t)),
                                    1e-8));
    }

    for (int d : {1, 2, 3, 4})
    {
        for (auto [al, be] : {std::pair{0.5, 0.5}, {1.0, 1.0}, {2.0, 3.0},
                              {0.1, 20.0}})
        {
            r.checks.push_back(relative(
                fmt("bessel_identity[d=%g,%g,%g]", d, al, be),
                bounds::bessel_identity_integral(d, al, be),
                bounds::bessel_identity_closed(d, al, be), 1e-8));
        }
    }

    for (double nu : {0.0, 0.5, 1.0, 1.5})
    {
        for (double y : {0.5, 1.0, 2.0})
        {
            auto f = [=](double u) {
                return std::exp(-y * y / (4 * pi * u) - pi * u)
                       * std::pow(u, nu - 1);
            };
            // Split at the peak of the exponent, u = y / 2 pi
            double peak = y / (2 * pi);
            double in = quad::integrate_log(f, 1e-4 * peak, peak, tight).value
                        + quad::integrate_log(f, peak, INFINITY, tight).value;
            r.checks.push_back(relative(fmt("lambda_dual[%g,%g]", nu, y),
                                        2 * pi / in,
                                        specfun::lambda_nu(nu, y), 1e-8));
        }
    }

    for (double mu : {0.0, 0.5, 1.5})
    {
        for (double r0 : {0.0, 1.0})
        {
            auto m = quad::integrate(
                [=](double eta) {
                    return specfun::bessel_transition_density(mu, r0, eta, 1);
                },
                0, INFINITY, tight);
            Check c = relative(fmt("bessel_density_mass[%g,%g]", mu, r0),
                               m.value, 1, 1e-8);
            r.checks.push_back(c);
        }
    }

    auto cfg = path_config(o, ++stream, n);
    auto tail = mc::bessel_tail_mc(0.5, 0.5, 1, 0.3, cfg);
    r.checks.push_back(within_sigma(
        "bessel_tail[d=3,0.5,1,0.3]", tail,
        specfun::bessel_tail(0.5, 0.5, 1, 0.3, specfun::TailMode::exact)));
    return r;
}

SuiteReport parabolic_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "parabolic";
    auto disc = Obstacle::ball(1);
    auto model = green::PotentialModel::analytic(disc);
    std::vector<double> dev;
    json rows = json::array();
    int stream = 100;
    for (double L : {8.0, 12.0, 16.0, 20.0})
    {
        double t = std::exp(L);
        PointD x({std::sqrt(t) / 10, 0.0});
        auto f = asym::ratio_parabolic(model, t, x, x, o.constants);
        auto e = mc::bridge_avoidance(disc, x, x, t,
                                      path_config(o, ++stream, o.n_paths));
        double ratio = e.mean / f.value;
        double se = e.std_error / f.value;
        Check c;
        c.name = fmt("ratio[lg t=%g]", L);
        c.measured = ratio;
        c.reference = 1;
        c.std_error = se;
        c.tolerance = 0.5 / L + 3 * se;
        c.pass = std::fabs(ratio - 1) <= c.tolerance;
        r.checks.push_back(c);
        dev.push_back(std::fabs(ratio - 1));
        rows.push_back({{"lg_t", L}, {"mc", e.mean}, {"stderr", e.std_error},
                        {"formula", f.value}});
    }
    r.checks.push_back(flag("deviation_strictly_decreasing",
                            strictly_decreasing(dev), dev.back()));
    r.details["rows"] = rows;
    return r;
}

SuiteReport survival_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "survival";
    auto disc = Obstacle::ball(1);
    PointD x({std::exp(3.0), 0.0});
    std::vector<double> Ls{10, 14, 18}, times, dev;
    for (double L : Ls)
        times.push_back(std::exp(L));
    auto curve = mc::survival_curve(disc, x, times,
                                    path_config(o, 200, 10 * o.n_paths));
    json rows = json::array();
    for (std::size_t i = 0; i < Ls.size(); ++i)
    {
        double f = 2 * 3 / Ls[i];
        Check c;
        c.name = fmt("survival[lg t=%g]", Ls[i]);
        c.measured = curve[i].mean;
        c.reference = f;
        c.std_error = curve[i].std_error;
        c.tolerance = 3 / Ls[i] + 3 * curve[i].std_error;
        c.pass = std::fabs(c.measured - f) <= c.tolerance;
        r.checks.push_back(c);
        dev.push_back(std::fabs(c.measured - f));
        rows.push_back({{"lg_t", Ls[i]}, {"mc", c.measured},
                        {"stderr", c.std_error}, {"formula", f}});
    }
    r.checks.push_back(
        flag("deviation_decreasing", strictly_decreasing(dev), dev.back()));
    r.details["rows"] = rows;
    return r;
}

SuiteReport hitting_d3_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "hitting_d3";
    auto ball = Obstacle::ball(1, 3);
    PointD x({2.0, 0.0, 0.0});
    std::vector<double> edges;
    int const nb = 16;
    for (int i = 0; i <= nb; ++i)
        edges.push_back(100 * std::pow(100.0, double(i) / nb));
    auto h = mc::hitting_time_histogram(ball, x, edges,
                                        path_config(o, 300, 2 * o.n_paths));
    int used = 0;
    for (auto const& b : h.bins)
    {
        if (b.hits < 200)
            continue;
        ++used;
        quad::QuadOptions q;
        q.abs_tol = 0;
        q.rel_tol = 1e-10;
        double f = quad::integrate(
                       [](double s) {
                           return asym::hitting_time_density_asymp(1, 3, 2, s)
                               .value;
                       },
                       b.lo, b.hi, q)
                       .value
                   / (b.hi - b.lo);
        Check c;
        c.name = fmt("bin[%.6g,%.6g]", b.lo, b.hi);
        c.measured = b.value.mean;
        c.reference = f;
        c.std_error = b.value.std_error;
        c.tolerance = std::max(0.15 * f, 3 * c.std_error);
        c.pass = std::fabs(c.measured - f) <= c.tolerance;
        r.checks.push_back(c);
    }
    r.checks.push_back(flag("bins_with_200_hits", used > 0, used));
    r.checks.push_back(within_sigma("total_hit_mass", h.total_hit,
                                    1 - green::u_ball(1, x)));
    r.details["pre_mass"] = h.pre_mass.mean;
    r.details["tail_mass"] = h.tail_mass.mean;
    return r;
}

SuiteReport sandwich_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "sandwich";
    int stream = 400;
    json rows = json::array();
    for (int d : {2, 3})
    {
        auto ball = Obstacle::ball(1, d);
        auto grid = sandwich_grid(d, d == 2 ? 20 : 10, mc::mix64(o.seed + d));
        for (auto const& g : grid)
        {
            auto f = euclid::Frame::from_points(g.x, g.y);
            auto bp = bounds::bound_pair(1, g.t, f, default_bound_delta,
                                         o.constants);
            auto e = mc::bridge_avoidance(ball, g.x, g.y, g.t,
                                          path_config(o, ++stream, o.n_paths));
            Check lo;
            lo.name = fmt("lower[d=%g,x1=%.4f,t=%.4f]", d, f.x1, g.t);
            lo.measured = e.mean;
            lo.reference = bp.lower;
            lo.std_error = e.std_error;
            lo.tolerance = 3 * e.std_error;
            lo.pass = !bp.out_of_validity && bp.lower <= e.mean + lo.tolerance;
            Check up = lo;
            up.name = fmt("upper[d=%g,x1=%.4f,t=%.4f]", d, f.x1, g.t);
            up.reference = bp.upper;
            up.pass = e.mean - up.tolerance <= bp.upper;
            r.checks.push_back(lo);
            r.checks.push_back(up);
            rows.push_back({{"d", d},
                            {"t", g.t},
                            {"x1", f.x1},
                            {"xperp", f.xperp_norm},
                            {"y", f.y_mag},
                            {"mc", e.mean},
                            {"stderr", e.std_error},
                            {"lower", bp.lower},
                            {"upper", bp.upper}});
        }
    }
    r.details["rows"] = rows;

    // Exponent ranges on random points of W
    mc::PathRng rng(o.seed, 0x5eed);
    int bad_k = 0, bad_ks = 0;
    double kmin = 1, kmax = 0, ksmin = 1, ksmax = 0;
    for (int i = 0; i < 10000; ++i)
    {
        double a = 0.5 + 2 * rng.uniform();
        double h = a * rng.uniform() * 0.999;
        double x1 = std::sqrt(a * a - h * h) * (1 + 1e-6)
                    + a * std::exp(6 * rng.uniform() - 2);
        euclid::Frame f{2 + i % 2, 1e3, x1, h};
        double k = bounds::k_upper(a, f), ks = bounds::k_lower(a, f);
        bad_k += !(k > std::sqrt(2.0) - 1 && k < 0.5);
        bad_ks += !(ks > 0.5 && ks < 1);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        ksmin = std::min(ksmin, ks);
        ksmax = std::max(ksmax, ks);
    }
    r.checks.push_back(flag("k_range_violations", bad_k == 0, bad_k));
    r.checks.push_back(flag("k_star_range_violations", bad_ks == 0, bad_ks));
    r.details["k_observed"] = {kmin, kmax};
    r.details["k_star_observed"] = {ksmin, ksmax};

    // Scaled gaps far behind the ball; reported, not compared
    json lim = json::array();
    for (double h : {0.0, 0.3, 0.6})
    {
        euclid::Frame f{2, 1e3, 1e4, h};
        double x2 = 1e8;
        lim.push_back({{"xperp", h},
                       {"half_minus_k", (0.5 - bounds::k_upper(1, f)) * x2},
                       {"k_star_minus_half", (bounds::k_lower(1, f) - 0.5) * x2},
                       {"b2_over_8", (1 - h) * (1 - h) / 8},
                       {"a2_minus_xperp2_over_8", (1 - h * h) / 8}});
    }
    r.details["scaled_gap_limits"] = lim;
    return r;
}

SuiteReport tri_oracle_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "tri_oracle";
    auto disc = Obstacle::ball(1);
    auto model = green::PotentialModel::analytic(disc);
    struct Config
    {
        double t;
        PointD x, y;
    };
    std::vector<Config> configs{{1e4, PointD({5.0, 0.0}), PointD({0.0, 5.0})},
                                {1e3, PointD({3.0, 0.0}), PointD({-4.0, 0.0})},
                                {1e4, PointD({3.0, 0.0}), PointD({0.0, 300.0})},
                                {1e3, PointD({2.0, 0.0}), PointD({100.0, 0.0})},
                                {1e3, PointD({60.0, 0.0}), PointD({0.0, 60.0})}};
    int stream = 500;
    json rows = json::array();
    for (auto const& k : configs)
    {
        auto def = oracle::convolution_defect(
            disc, k.t, k.x, k.y, oracle::HittingSource::mc,
            path_config(o, ++stream, o.n_paths));
        auto br = mc::bridge_avoidance(disc, k.x, k.y, k.t,
                                       path_config(o, ++stream, o.n_paths));
        auto formula = asym::density_full(model, k.t, k.x, k.y, o.constants);
        double direct = br.mean * def.free;
        double se = std::hypot(def.correction_err, br.std_error * def.free);
        Check c;
        c.name = std::string("defect_vs_bridge[")
                 + asym::to_cstring(formula.regime.tag) + fmt(",t=%g,|y|=%g]",
                                                              k.t, k.y.norm());
        c.measured = def.value;
        c.reference = direct;
        c.std_error = se;
        c.tolerance = 3 * se;
        c.pass = std::fabs(def.value - direct) <= c.tolerance;
        r.checks.push_back(c);
        rows.push_back({{"t", k.t},
                        {"regime", asym::to_cstring(formula.regime.tag)},
                        {"convolution", def.value},
                        {"convolution_stderr", def.correction_err},
                        {"bridge_density", direct},
                        {"bridge_stderr", br.std_error * def.free},
                        {"formula", formula.value},
                        {"formula_flagged", formula.out_of_validity}});
    }
    r.details["rows"] = rows;
    return r;
}

SuiteReport far_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "far";
    auto disc = Obstacle::ball(1);
    std::vector<double> dev;
    double last = 0;
    int stream = 600;
    json rows = json::array();
    for (double t : {1e2, 1e3, 1e4})
    {
        PointD x({std::sqrt(2 * t), 0.0});
        auto e = mc::bridge_avoidance(disc, x, x, t,
                                      path_config(o, ++stream, o.n_paths));
        dev.push_back(std::fabs(e.mean - 1));
        last = e.mean;
        rows.push_back({{"t", t}, {"mc", e.mean}, {"stderr", e.std_error}});
    }
    r.checks.push_back(
        flag("deviation_strictly_decreasing", strictly_decreasing(dev), dev.back()));
    Check c = flag("final_ratio_at_least_0.9", last >= 0.9, last);
    c.reference = 0.9;
    r.checks.push_back(c);
    r.details["rows"] = rows;
    return r;
}

SuiteReport ballistic_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "ballistic";
    auto disc = Obstacle::ball(1);
    PointD x({2.0, 0.0}), v({0.5, 0.0});
    double t = 200;
    auto lam = mc::lambda_estimate(disc, v, t, path_config(o, 700, o.n_paths));
    auto b = asym::ballistic_cstar(disc, x, v, lam);
    auto e = mc::bridge_avoidance(disc, x, v * t, t,
                                  path_config(o, 701, o.n_paths));
    Check c;
    c.name = "c_A_vs_bridge";
    c.measured = b.c_A;
    c.reference = e.mean;
    c.std_error = std::hypot(b.std_error, e.std_error);
    c.tolerance = 3 * c.std_error;
    c.pass = std::fabs(b.c_A - e.mean) <= c.tolerance;
    r.checks.push_back(c);
    r.checks.push_back(flag("c_A_in_unit_interval", b.c_A > 0 && b.c_A < 1, b.c_A));
    r.checks.push_back(
        flag("bridge_in_unit_interval", e.mean > 0 && e.mean < 1, e.mean));
    r.details["lambda_mass"] = lam.total.mean;
    r.details["c_star"] = b.c_star;
    return r;
}

SuiteReport flat_d3_suite(SuiteOptions const& o)
{
    SuiteReport r;
    r.name = "flat_d3";
    auto ball = Obstacle::ball(1, 3);
    PointD x({2.0, 0.0, 0.0});
    std::vector<mc::MCEstimate> es;
    int stream = 800;
    for (double t : {1e3, 1e4})
    {
        auto e = mc::bridge_avoidance(ball, x, x, t,
                                      path_config(o, ++stream, o.n_paths));
        Check c;
        c.name = fmt("ratio[t=%g]", t);
        c.measured = e.mean;
        c.reference = 0.25;
        c.std_error = e.std_error;
        c.tolerance = 0.05 + 3 * e.std_error;
        c.pass = std::fabs(e.mean - 0.25) <= c.tolerance;
        r.checks.push_back(c);
        es.push_back(e);
    }
    Check drift;
    drift.name = "no_drift_in_t";
    drift.measured = es[1].mean - es[0].mean;
    drift.std_error = std::hypot(es[0].std_error, es[1].std_error);
    drift.tolerance = 3 * drift.std_error;
    drift.pass = std::fabs(drift.measured) <= drift.tolerance;
    r.checks.push_back(drift);
    return r;
}

//---------------------------------------------------------------------------//
// CALIBRATION PIECES
//---------------------------------------------------------------------------//
struct Extreme
{
    double value{0};
    double std_error{0};
    bool found{false};
};

void take_max(Extreme& e, double v, double se)
{
    if (!e.found || v > e.value)
        e = {v, se, true};
}

void take_min(Extreme& e, double v, double se)
{
    if (!e.found || v < e.value)
        e = {v, se, true};
}

//! Decay rate of survival in the annulus between A and 2 R_A, times R_A^2
Extreme annulus_rate(Obstacle const& ob, mc::PathConfig cfg)
{
    double ra = ob.bounding_radius();
    std::vector<double> times;
    for (int i = 2; i <= 10; ++i)
        times.push_back(0.1 * i * ra * ra);
    int const m = static_cast<int>(times.size());
    cfg.dt_max = 1e-3 * ra * ra;
    int const d = ob.dim();
    auto mom = mc::run_paths(
        cfg.n_paths, m, cfg.seed, cfg.workers,
        [&](std::uint64_t, mc::PathRng& rng, double* out) {
            mc::PathSpec spec;
            std::vector<double> c(d, 0.0);
            c[0] = 1.5 * ra;
            spec.start = mc::Vec::from(PointD(c));
            spec.t_end = times.back();
            spec.checkpoints = times;
            spec.escape_radius = 2 * ra;
            spec.far_stop = INFINITY;
            auto res = mc::run_path(ob, cfg, spec, rng, {},
                                    [&](int i, double w) { out[i] = w; });
            if (res.escaped)
            {
                for (int i = 0; i < m; ++i)
                {
                    if (times[i] >= res.time)
                        out[i] = 0;
                }
            }
        });
    // Weighted least squares of log S on s
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i)
    {
        double s = mom.mean(i), se = mom.std_error(i);
        if (!(s > 0 && se > 0))
            continue;
        double w = (s / se) * (s / se);
        double x = times[i], y = std::log(s);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    double det = sw * sxx - sx * sx;
    require_domain(det > 0, "annulus survival fit is degenerate");
    double slope = (sw * sxy - sx * sy) / det;
    double se = std::sqrt(sw / det);
    return {-slope * ra * ra, se * ra * ra, true};
}

ConstantEntry entry(Extreme const& e, std::string const& hash)
{
    return ConstantEntry{e.value, hash, e.std_error};
}

}  // namespace

//---------------------------------------------------------------------------//
json Check::to_json() const
{
    return {{"name", name},
            {"pass", pass},
            {"measured", measured},
            {"reference", reference},
            {"tolerance", tolerance},
            {"stderr", std_error}};
}

bool SuiteReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](Check const& c) { return c.pass; });
}

json SuiteReport::to_json() const
{
    json j;
    j["suite"] = name;
    j["pass"] = this->pass();
    j["checks"] = json::array();
    for (auto const& c : checks)
        j["checks"].push_back(c.to_json());
    j["details"] = details;
    return j;
}

std::vector<std::string> const& suite_names()
{
    static std::vector<std::string> const names{
        "identity", "parabolic",  "survival", "hitting_d3", "sandwich",
        "tri_oracle", "far", "ballistic", "flat_d3"};
    return names;
}

SuiteReport run_suite(std::string const& name, SuiteOptions const& opts)
{
    if (name == "identity")
        return identity_suite(opts);
    if (name == "parabolic")
        return parabolic_suite(opts);
    if (name == "survival")
        return survival_suite(opts);
    if (name == "hitting_d3")
        return hitting_d3_suite(opts);
    if (name == "sandwich")
        return sandwich_suite(opts);
    if (name == "tri_oracle")
        return tri_oracle_suite(opts);
    if (name == "far")
        return far_suite(opts);
    if (name == "ballistic")
        return ballistic_suite(opts);
    if (name == "flat_d3")
        return flat_d3_suite(opts);
    fail(ErrorCode::invalid_argument, "unknown suite '" + name + "'");
}

//---------------------------------------------------------------------------//
std::vector<GridPoint> sandwich_grid(int d, int n, std::uint64_t seed)
{
    require_domain(d >= 2 && n > 0, "need d >= 2 and n > 0");
    mc::PathRng rng(seed, 0x6a1d);
    std::vector<GridPoint> out;
    while (static_cast<int>(out.size()) < n)
    {
        double x1 = 2.2 + 3 * rng.uniform();
        double h = 0.8 * rng.uniform();
        double b = 1 - h;
        double q = 0.5 + 3.5 * rng.uniform();
        double t = 2 + 18 * rng.uniform();
        double rt = b * b / q;
        double rho = rt / t;
        double Y = x1 / rho - x1;
        if (!(Y > t))
            continue;
        out.push_back({t, on_axis(d, x1, h), on_axis(d, -Y)});
    }
    return out;
}

std::vector<GridPoint> offw_grid(int n, std::uint64_t seed)
{
    mc::PathRng rng(seed, 0x0ff3);
    std::vector<GridPoint> out;
    while (static_cast<int>(out.size()) < n)
    {
        double x1 = -3 + 7 * rng.uniform();
        double h = x1 > 0 ? 1.6 + 1.4 * rng.uniform() : 3 * rng.uniform();
        if (std::hypot(x1, h) <= 1.6)
            continue;
        double t = 2 + 18 * rng.uniform();
        double Y = std::max(t, 10.0) * (1 + 10 * rng.uniform());
        out.push_back({t, PointD({x1, h}), PointD({-Y, 0.0})});
    }
    return out;
}

json grid_to_json(std::vector<GridPoint> const& grid)
{
    json j = json::array();
    for (auto const& g : grid)
    {
        auto xc = g.x.coords(), yc = g.y.coords();
        j.push_back({{"t", g.t},
                     {"x", std::vector<double>(xc.begin(), xc.end())},
                     {"y", std::vector<double>(yc.begin(), yc.end())}});
    }
    return j;
}

double kendall_tau(std::vector<double> const& a, std::vector<double> const& b)
{
    require_domain(a.size() == b.size() && a.size() >= 2,
                   "need two samples of equal length >= 2");
    double s = 0;
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i + 1; j < n; ++j)
        {
            double p = (a[j] - a[i]) * (b[j] - b[i]);
            s += (p > 0) - (p < 0);
        }
    }
    return s / (0.5 * n * (n - 1));
}

std::string fnv1a_hex(std::string const& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

//---------------------------------------------------------------------------//
CalibrationResult calibrate(CalibrationOptions const& opts)
{
    require_domain(opts.n_paths >= 100, "calibration needs at least 100 paths");
    require_domain(opts.n_planar > 0 && opts.n_spatial > 0 && opts.n_offw > 0,
                   "calibration grids must be non-empty");
    auto g2 = sandwich_grid(2, opts.n_planar, mc::mix64(opts.seed ^ 0x2));
    auto g3 = sandwich_grid(3, opts.n_spatial, mc::mix64(opts.seed ^ 0x3));
    auto go = offw_grid(opts.n_offw, mc::mix64(opts.seed ^ 0x4));

    json grid;
    grid["seed"] = opts.seed;
    grid["n_paths"] = opts.n_paths;
    grid["planar"] = grid_to_json(g2);
    grid["spatial"] = grid_to_json(g3);
    grid["offw"] = grid_to_json(go);
    CalibrationResult res;
    res.grid_hash = fnv1a_hex(grid.dump());

    SuiteOptions so;
    so.seed = opts.seed;
    so.workers = opts.workers;
    so.n_paths = opts.n_paths;
    auto const base = Constants::defaults();
    double const delta = default_bound_delta;
    int stream = 0;

    Extreme up2, lo2, ge2, up3, lo3, offw;
    auto lower_from = [](Extreme& e, double m, double se, double expr) {
        double v = m - 3 * se;
        take_min(e, v > 0 ? v / expr : m / (2 * expr), se / expr);
    };
    json rows = json::array();
    for (int d : {2, 3})
    {
        auto ball = Obstacle::ball(1, d);
        for (auto const& g : d == 2 ? g2 : g3)
        {
            auto f = euclid::Frame::from_points(g.x, g.y);
            auto e = mc::bridge_avoidance(ball, g.x, g.y, g.t,
                                          path_config(so, ++stream, opts.n_paths));
            double m = e.mean, se = e.std_error;
            json row = {{"d", d}, {"t", g.t}, {"mc", m}, {"stderr", se}};
            if (d == 2)
            {
                auto u = bounds::bound_upper_2d(1, g.t, f, base);
                take_max(up2, (m + 3 * se) / u.expression, se / u.expression);
                auto ax = bounds::bound_lower_2d(
                    1, g.t, f, bounds::LowerVariant::axis, delta, base);
                if (!ax.out_of_validity)
                    lower_from(lo2, m, se, ax.expression);
                auto ge = bounds::bound_lower_2d(
                    1, g.t, f, bounds::LowerVariant::general, delta, base);
                if (!ge.out_of_validity)
                    lower_from(ge2, m, se, ge.expression);
                row["upper_expr"] = u.expression;
            }
            else
            {
                auto u = bounds::bound_d3(1, g.t, f, bounds::Side::upper, base);
                take_max(up3, (m + 3 * se) / u.expression, se / u.expression);
                auto l = bounds::bound_d3(1, g.t, f, bounds::Side::lower, base);
                if (!l.out_of_validity)
                    lower_from(lo3, m, se, l.expression);
                row["upper_expr"] = u.expression;
            }
            rows.push_back(row);
        }
    }
    auto disc = Obstacle::ball(1);
    for (auto const& g : go)
    {
        auto e = mc::bridge_avoidance(disc, g.x, g.y, g.t,
                                      path_config(so, ++stream, opts.n_paths));
        lower_from(offw, e.mean, e.std_error, 1.0);
    }

    // Deterministic constants: extremes of quadrature ratios
    Extreme cdelta, pass_window, pass_first, pass_weighted;
    for (int d : {2, 3})
    {
        for (double theta : {0.25, 0.5, 0.75})
        {
            for (double t : {1.0, 10.0, 100.0})
            {
                for (double x : {1.0, 3.0, 10.0, 30.0})
                {
                    for (double zf : {0.25, 0.5, 1.0})
                    {
                        auto c = bounds::conv_bound_integral(
                            d, theta, t, x, zf * x, delta, base);
                        if (!c.out_of_validity && c.expression > 0)
                            take_max(cdelta, c.lhs / c.expression, 0);
                    }
                }
            }
        }
    }
    for (double b : {0.5, 1.0, 2.0})
    {
        for (double lf : {2.0, 4.0, 10.0, 100.0})
        {
            for (double tf : {0.1, 1.0, 10.0, 100.0})
            {
                double ell = lf * b, t = tf * b * ell;
                using bounds::Passage;
                take_min(pass_window,
                         bounds::bridge_passage_lower(b, ell, t, Passage::window)
                             .ratio,
                         0);
                take_min(pass_first,
                         bounds::bridge_passage_lower(
                             b, ell, t, Passage::window_first_passage)
                             .ratio,
                         0);
                for (int d : {1, 2, 3})
                {
                    for (double alpha : {0.0, 0.5, 1.0})
                    {
                        auto w = bounds::bridge_passage_lower(
                            b, ell, t, Passage::weighted, alpha, d);
                        if (std::isfinite(w.ratio) && w.ratio > 0)
                            take_min(pass_weighted, w.ratio, 0);
                    }
                }
            }
        }
    }

    auto lam = annulus_rate(disc, path_config(so, ++stream, opts.n_paths));

    Constants c;
    auto const& h = res.grid_hash;
    c.set("C_upper_2d", entry(up2, h));
    c.set("c0_lower_2d", entry(lo2, h));
    c.set("kappa_delta_2d", entry(ge2, h));
    c.set("C_upper_d3", entry(up3, h));
    c.set("c_lower_d3", entry(lo3, h));
    c.set("c_offW", entry(offw, h));
    c.set("C_delta", entry(cdelta, h));
    c.set("c_passage_window", entry(pass_window, h));
    c.set("c_passage_first", entry(pass_first, h));
    c.set("c_passage_weighted", entry(pass_weighted, h));
    c.set("lambda_err", entry(lam, h));
    for (auto const& [name, e] : c.entries())
    {
        if (!(e.value > 0 && std::isfinite(e.value)))
            fail(ErrorCode::domain,
                 "calibrated constant '" + name + "' is not positive");
    }
    res.constants = c;
    res.details["rows"] = rows;
    return res;
}

}  // namespace hk::verify
