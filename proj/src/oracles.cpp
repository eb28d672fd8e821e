// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file oracles.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatkernel/asymptotics.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/quadrature.hpp"
#include "heatkernel/specfun.hpp"

namespace hk::oracle
{
namespace
{
constexpr double pi = std::numbers::pi;

quad::QuadOptions loose(double abs_tol)
{
    quad::QuadOptions o;
    o.abs_tol = abs_tol;
    o.rel_tol = 1e-8;
    o.max_evals = 100000;
    return o;
}
}  // namespace

DefectResult convolution_defect(Obstacle const& obstacle, double t,
                                PointD const& x, PointD const& y,
                                HittingSource source,
                                mc::PathConfig const& cfg)
{
    if (!obstacle.is_centered_ball())
        fail(ErrorCode::unsupported,
             "convolution defect is wired for a single centered ball");
    require_domain(t > 0, "t must be positive");
    if (x.dim() != obstacle.dim() || y.dim() != obstacle.dim())
        fail(ErrorCode::domain, "point dimension differs from obstacle");
    require_domain(obstacle.distance(x) >= 0 && obstacle.distance(y) >= 0,
                   "points must lie outside the ball");
    int const d = obstacle.dim();
    double const a = obstacle.centered_radius();

    DefectResult out;
    out.free = euclid::gauss_kernel(d, t, euclid::distance(x, y));

    if (source == HittingSource::mc)
    {
        cfg.validate();
        mc::PathSpec spec;
        spec.start = mc::Vec::from(x);
        spec.t_end = t;
        auto mom = mc::run_paths(
            cfg.n_paths, 1, cfg.seed, cfg.workers,
            [&](std::uint64_t, mc::PathRng& rng, double* o) {
                double acc = 0;
                mc::run_path(obstacle, cfg, spec, rng,
                             [&](mc::HitEvent const& h) {
                                 if (h.time >= t)
                                     return;
                                 double r = euclid::distance(
                                     y, h.where.to_point());
                                 acc += h.mass
                                        * euclid::gauss_kernel(d, t - h.time,
                                                               r);
                             });
                o[0] = acc;
            });
        out.correction = mom.mean(0);
        out.correction_err = mom.std_error(0);
        out.value = out.free - out.correction;
        return out;
    }

    // Leading-order time density times the uniform law on the sphere
    double const xm = x.norm();
    double const ym = y.norm();
    out.out_of_validity = d == 2 && xm > std::sqrt(t);
    double const cd = std::exp(specfun::log_gamma(0.5 * d)
                               - specfun::log_gamma(0.5 * (d - 1)))
                      / std::sqrt(pi);
    auto angular = [&](double s) {
        double u = t - s;
        auto g = [&](double th) {
            double r2 = ym * ym + a * a - 2 * a * ym * std::cos(th);
            return cd * std::pow(std::sin(th), d - 2)
                   * euclid::gauss_kernel(d, u, std::sqrt(std::max(r2, 0.0)));
        };
        return quad::integrate(g, 0, pi, loose(1e-300)).value;
    };
    auto f = [&](double s) {
        if (s <= 0 || s >= t)
            return 0.0;
        double q = asym::hitting_time_density_asymp(a, d, xm, s).value;
        if (!std::isfinite(q) || q == 0)
            return 0.0;
        return q * angular(s);
    };
    // Before x^2 the leading term is only integrable when x > 2a
    double split = std::min(t, xm * xm);
    bool early = xm > 2 * a;
    out.out_of_validity = out.out_of_validity || !early;
    auto o = loose(1e-300);
    quad::QuadResult r1;
    if (early)
        r1 = quad::integrate(f, 0, split, o);
    auto r2 = quad::integrate(f, split, t, o);
    out.correction = r1.value + r2.value;
    out.correction_err = r1.abs_err_est + r2.abs_err_est;
    out.out_of_validity = out.out_of_validity || r1.flagged || r2.flagged;
    out.value = out.free - out.correction;
    return out;
}

//---------------------------------------------------------------------------//
JIntegral j_integral(double e_A, double eta, double t, double delta,
                     double alpha)
{
    require_domain(e_A >= 0, "e_A must be nonnegative");
    require_domain(t > 0, "t must be positive");
    require_domain(eta > 0, "eta must be positive");
    require_domain(delta > 0 && delta < 1 && alpha > 1,
                   "need 0 < delta < 1 < alpha");
    JIntegral out;
    out.out_of_validity = eta < 1 || alpha * eta >= 0.5 * t;
    double const y = t / std::sqrt(eta);
    if (eta > 1)
        out.reference = 1 - 2 * e_A / std::log(eta);

    // p_{t-s}(y) / p_t(y) in the plane
    auto kernel_ratio = [&](double s) {
        return t / (t - s) * std::exp(-y * y * s / (2 * t * (t - s)));
    };
    double const hi = 0.5 * t;
    if (e_A == 0)
    {
        out.j_small = 1;
        out.total = 1;
        return out;
    }
    double const s0 = std::exp(2 * e_A);  // survival law reaches 1 here
    auto density = [&](double s) {
        double lg = std::log(s);
        return 2 * e_A / (s * lg * lg) * kernel_ratio(s);
    };
    auto piece = [&](double lo, double up) {
        lo = std::max(lo, s0);
        up = std::min(up, hi);
        if (!(up > lo))
            return 0.0;
        quad::QuadOptions o;
        o.abs_tol = 1e-14;
        o.rel_tol = 1e-10;
        return quad::integrate_log(density, lo, up, o).value;
    };
    out.j_small = piece(0, delta * eta);
    out.j_mid = piece(delta * eta, alpha * eta);
    out.j_large = piece(alpha * eta, hi);
    out.total = out.j_small + out.j_mid + out.j_large;
    return out;
}

}  // namespace hk::oracle
