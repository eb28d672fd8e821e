// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file estimators.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "heatkernel/error.hpp"
#include "heatkernel/specfun.hpp"

namespace hk::mc
{
namespace
{
constexpr double pi = std::numbers::pi;

void require_exterior(Obstacle const& ob, PointD const& p, char const* what)
{
    if (p.dim() != ob.dim())
        fail(ErrorCode::domain,
             std::string(what) + " has a different dimension than the obstacle");
    if (ob.distance(p) < 0)
        fail(ErrorCode::domain, std::string(what) + " lies inside the obstacle");
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json bins_json(std::vector<HistogramBin> const& bins)
{
    auto arr = nlohmann::json::array();
    for (auto const& b : bins)
    {
        arr.push_back({{"bin_lo", b.lo},
                       {"bin_hi", b.hi},
                       {"value", b.value.mean},
                       {"stderr", b.value.std_error},
                       {"hits", b.hits}});
    }
    return arr;
}

std::string bins_csv(std::vector<HistogramBin> const& bins)
{
    std::string out = "bin_lo,bin_hi,density,stderr\n";
    for (auto const& b : bins)
    {
        out += fmt(b.lo) + "," + fmt(b.hi) + "," + fmt(b.value.mean) + ","
               + fmt(b.value.std_error) + "\n";
    }
    return out;
}

// Log of Lambda_nu(z) for z > 0
double log_lambda_nu(double nu, double z)
{
    return (nu + 1) * std::log(2 * pi) - std::log(2.0) - nu * std::log(z)
           - specfun::log_bessel_K(nu, z);
}

std::uint64_t count_of(Moments const& m, std::size_t j)
{
    return static_cast<std::uint64_t>(std::llround(m.sum[j]));
}
}  // namespace

//---------------------------------------------------------------------------//
MCEstimate bridge_avoidance(Obstacle const& obstacle, PointD const& x,
                            PointD const& y, double t, PathConfig const& cfg)
{
    cfg.validate();
    require_domain(t > 0, "bridge time must be positive");
    require_exterior(obstacle, x, "bridge start");
    require_exterior(obstacle, y, "bridge end");
    char const* id = "bridge_avoidance";
    if (obstacle.distance(x) == 0 || obstacle.distance(y) == 0)
        return {0.0, 0.0, cfg.n_paths, cfg.seed, id};

    PathSpec spec;
    spec.start = Vec::from(x);
    spec.end = Vec::from(y);
    spec.bridge = true;
    spec.t_end = t;
    auto m = run_paths(cfg.n_paths, 1, cfg.seed, cfg.workers,
                       [&](std::uint64_t, PathRng& rng, double* out) {
                           out[0] = run_path(obstacle, cfg, spec, rng).weight;
                       });
    return m.estimate(0, cfg.seed, id);
}

std::vector<MCEstimate>
survival_curve(Obstacle const& obstacle, PointD const& x,
               std::vector<double> const& times, PathConfig const& cfg)
{
    cfg.validate();
    require_exterior(obstacle, x, "start point");
    if (times.empty())
        fail(ErrorCode::domain, "survival needs at least one time");
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        if (!(times[i] > 0) || (i > 0 && !(times[i] > times[i - 1])))
            fail(ErrorCode::domain, "survival times must increase from > 0");
    }
    std::size_t m = times.size();
    if (obstacle.distance(x) == 0)
    {
        return std::vector<MCEstimate>(
            m, MCEstimate{0.0, 0.0, cfg.n_paths, cfg.seed, "survival"});
    }

    PathSpec spec;
    spec.start = Vec::from(x);
    spec.t_end = times.back();
    spec.checkpoints = times;
    auto mom = run_paths(cfg.n_paths, m, cfg.seed, cfg.workers,
                         [&](std::uint64_t, PathRng& rng, double* out) {
                             run_path(obstacle, cfg, spec, rng, {},
                                      [out](int i, double w) { out[i] = w; });
                         });
    std::vector<MCEstimate> result;
    for (std::size_t j = 0; j < m; ++j)
        result.push_back(mom.estimate(j, cfg.seed, "survival"));
    return result;
}

MCEstimate survival_probability(Obstacle const& obstacle, PointD const& x,
                                double t, PathConfig const& cfg)
{
    return survival_curve(obstacle, x, {t}, cfg).front();
}

//---------------------------------------------------------------------------//
std::string HittingHistogram::to_csv() const
{
    return bins_csv(bins);
}

nlohmann::json HittingHistogram::to_json() const
{
    return {{"bins", bins_json(bins)},
            {"pre_mass", pre_mass.to_json()},
            {"tail_mass", tail_mass.to_json()},
            {"survival", survival.to_json()},
            {"total_hit", total_hit.to_json()}};
}

HittingHistogram
hitting_time_histogram(Obstacle const& obstacle, PointD const& x,
                       std::vector<double> const& edges, PathConfig const& cfg)
{
    cfg.validate();
    require_exterior(obstacle, x, "start point");
    if (edges.size() < 2)
        fail(ErrorCode::domain, "time grid needs at least one bin");
    if (!(edges.front() >= 0))
        fail(ErrorCode::domain, "time grid must start at t >= 0");
    for (std::size_t i = 1; i < edges.size(); ++i)
    {
        if (!(edges[i] > edges[i - 1]))
            fail(ErrorCode::domain, "time grid must be increasing");
    }
    std::size_t const nb = edges.size() - 1;
    bool const ball_tail = obstacle.is_centered_ball() && obstacle.dim() >= 3;
    double const a = ball_tail ? obstacle.centered_radius() : 0.0;
    int const d = obstacle.dim();

    // Observables: masses, hit indicators, pre, survival, tail, total
    std::size_t const i_pre = 2 * nb;
    std::size_t const i_surv = i_pre + 1;
    std::size_t const i_tail = i_pre + 2;
    std::size_t const i_total = i_pre + 3;

    PathSpec spec;
    spec.start = Vec::from(x);
    spec.t_end = edges.back();
    auto mom = run_paths(
        cfg.n_paths, i_total + 1, cfg.seed, cfg.workers,
        [&](std::uint64_t, PathRng& rng, double* out) {
            auto on_hit = [&](HitEvent const& e) {
                if (e.time < edges.front())
                {
                    out[i_pre] += e.mass;
                }
                else
                {
                    auto it = std::upper_bound(edges.begin(), edges.end(),
                                               e.time);
                    std::size_t b = std::min<std::size_t>(
                        nb - 1, static_cast<std::size_t>(it - edges.begin())
                                    - 1);
                    out[b] += e.mass;
                    out[nb + b] = 1;
                }
                out[i_total] += e.mass;
            };
            auto res = run_path(obstacle, cfg, spec, rng, on_hit, {});
            out[i_surv] = res.weight;
            if (ball_tail && res.weight > 0)
            {
                out[i_tail]
                    = res.weight * std::pow(a / res.where.norm(), d - 2);
                out[i_total] += out[i_tail];
            }
        });

    HittingHistogram h;
    for (std::size_t b = 0; b < nb; ++b)
    {
        double width = edges[b + 1] - edges[b];
        MCEstimate e = mom.estimate(b, cfg.seed, "hitting_time_density");
        e.mean /= width;
        e.std_error /= width;
        h.bins.push_back({edges[b], edges[b + 1], e, count_of(mom, nb + b)});
    }
    h.pre_mass = mom.estimate(i_pre, cfg.seed, "hit_before_grid");
    h.survival = mom.estimate(i_surv, cfg.seed, "survival");
    h.tail_mass = mom.estimate(i_tail, cfg.seed, "hit_after_grid");
    if (!ball_tail)
    {
        h.tail_mass.mean = std::numeric_limits<double>::quiet_NaN();
        h.tail_mass.std_error = std::numeric_limits<double>::quiet_NaN();
    }
    h.total_hit = mom.estimate(i_total, cfg.seed, "total_hit_mass");
    return h;
}

//---------------------------------------------------------------------------//
std::string AngularHistogram::to_csv() const
{
    return bins_csv(bins);
}

nlohmann::json AngularHistogram::to_json() const
{
    return {{"bins", bins_json(bins)},
            {"window_mass", window_mass.to_json()},
            {"max_deviation", max_deviation},
            {"max_deviation_stderr", max_deviation_err}};
}

AngularHistogram
exit_site_conditional(Obstacle const& obstacle, PointD const& x, double t_lo,
                      double t_hi, int nbins, PathConfig const& cfg,
                      PointD const* drift)
{
    cfg.validate();
    if (!obstacle.is_centered_ball() || obstacle.dim() != 2)
        fail(ErrorCode::unsupported,
             "exit-site law needs a single disc centered at the origin");
    require_exterior(obstacle, x, "start point");
    if (!(t_lo >= 0) || !(t_hi > t_lo))
        fail(ErrorCode::domain, "time window must satisfy 0 <= t_lo < t_hi");
    if (nbins < 1)
        fail(ErrorCode::domain, "need at least one angular bin");
    auto const nb = static_cast<std::size_t>(nbins);

    PathSpec spec;
    spec.start = Vec::from(x);
    spec.t_end = t_hi;
    Vec u;
    double log_ref = 0;
    if (drift)
    {
        if (drift->dim() != 2)
            fail(ErrorCode::domain, "drift must be two-dimensional");
        u = Vec::from(*drift);
        spec.has_drift = true;
        spec.drift = u;
        // Constant factor of the likelihood ratio, restored at the end
        double t_mid = 0.5 * (t_lo + t_hi);
        log_ref = u.c[0] * x[0] + u.c[1] * x[1]
                  + 0.5 * (u.c[0] * u.c[0] + u.c[1] * u.c[1]) * t_mid;
    }

    auto mom = run_paths(
        cfg.n_paths, 2 * nb + 1, cfg.seed, cfg.workers,
        [&](std::uint64_t, PathRng& rng, double* out) {
            auto on_hit = [&](HitEvent const& e) {
                if (e.time < t_lo || e.time > t_hi)
                    return;
                double m = e.mass;
                if (drift)
                {
                    double lr = -(u.c[0] * (e.where.c[0] - x[0])
                                  + u.c[1] * (e.where.c[1] - x[1]))
                                + 0.5 * (u.c[0] * u.c[0] + u.c[1] * u.c[1])
                                      * e.time;
                    m *= std::exp(lr - log_ref);
                }
                double phi = std::atan2(e.where.c[1], e.where.c[0]);
                auto b = static_cast<std::size_t>(
                    std::floor((phi + pi) / (2 * pi) * double(nb)));
                b = std::min(b, nb - 1);
                out[b] += m;
                out[nb + b] = 1;
                out[2 * nb] += m;
            };
            run_path(obstacle, cfg, spec, rng, on_hit, {});
        },
        static_cast<int>(2 * nb));

    AngularHistogram h;
    for (std::size_t b = 0; b < nb; ++b)
    {
        MCEstimate e = mom.ratio(b, cfg.seed, "exit_site_ratio");
        e.mean *= double(nb);
        e.std_error *= double(nb);
        double lo = -pi + 2 * pi * double(b) / double(nb);
        h.bins.push_back(
            {lo, lo + 2 * pi / double(nb), e, count_of(mom, nb + b)});
        double dev = std::fabs(e.mean - 1);
        if (dev > h.max_deviation)
        {
            h.max_deviation = dev;
            h.max_deviation_err = e.std_error;
        }
    }
    h.window_mass = mom.estimate(2 * nb, cfg.seed, "exit_window_mass");
    h.window_mass.mean *= std::exp(log_ref);
    h.window_mass.std_error *= std::exp(log_ref);
    return h;
}

//---------------------------------------------------------------------------//
nlohmann::json LambdaMeasure::to_json() const
{
    auto atoms_json = nlohmann::json::array();
    for (auto const& a : atoms)
    {
        atoms_json.push_back({{"where", a.where.coords()},
                              {"weight", a.weight},
                              {"stderr", a.std_error}});
    }
    return {{"atoms", atoms_json},
            {"total", total.to_json()},
            {"v", v_mag},
            {"window", window}};
}

LambdaMeasure lambda_estimate(Obstacle const& obstacle, PointD const& v,
                              double t, PathConfig const& cfg,
                              int bins_per_ball, double window)
{
    cfg.validate();
    require_domain(t > 0, "time must be positive");
    require_domain(window > 0 && window < 1, "window must lie in (0, 1)");
    if (bins_per_ball < 1)
        fail(ErrorCode::domain, "need at least one bin per ball");
    int const d = obstacle.dim();
    if (v.dim() != d)
        fail(ErrorCode::domain, "velocity dimension differs from obstacle");
    double const vm = v.norm();
    require_domain(vm > 0, "velocity must be nonzero");
    PointD const y = v * t;
    require_exterior(obstacle, y, "far point v t");
    if (!(y.norm() > 10 * obstacle.bounding_radius()))
        fail(ErrorCode::domain, "far point v t must exceed 10 R_A");

    double const nu = 0.5 * d - 1;
    double const ym = y.norm();
    auto balls = obstacle.balls();
    std::size_t const nballs = balls.size();
    // Polar bins about the axis through v; d >= 3 adds azimuth bins
    std::size_t const n_az = d == 2 ? 1 : 8;
    std::size_t const n_pol = static_cast<std::size_t>(bins_per_ball);
    std::size_t const per_ball = n_pol * n_az;
    std::size_t const natoms = nballs * per_ball;

    // Orthonormal frame: e0 = v/|v|, e1 orthogonal in the first plane
    Vec e0 = Vec::from(v * (1 / vm));
    Vec e1;
    e1.d = d;
    {
        int k = std::fabs(e0.c[0]) < 0.9 ? 0 : 1;
        e1.c[k] = 1;
        double dot = e0.c[k];
        for (int i = 0; i < d; ++i)
            e1.c[i] -= dot * e0.c[i];
        double n = e1.norm();
        for (int i = 0; i < d; ++i)
            e1.c[i] /= n;
    }
    auto coord = [&](Vec const& w, Vec const& e) {
        double s = 0;
        for (int i = 0; i < d; ++i)
            s += w.c[i] * e.c[i];
        return s;
    };

    PathSpec spec;
    spec.start = Vec::from(y);
    spec.t_end = t * (1 + window);
    spec.has_drift = true;
    spec.drift = Vec::from(v * -1.0);
    double const t_lo = t * (1 - window);
    double const norm = 1 / (2 * window * t);

    auto bin_of = [&](HitEvent const& e) -> std::size_t {
        Vec rel = e.where;
        Vec const c = Vec::from(balls[e.ball].center);
        for (int i = 0; i < d; ++i)
            rel.c[i] -= c.c[i];
        double r = rel.norm();
        double a0 = coord(rel, e0);
        double a1 = coord(rel, e1);
        std::size_t pol, az = 0;
        if (d == 2)
        {
            double phi = std::atan2(a1, a0);
            pol = static_cast<std::size_t>(
                std::floor((phi + pi) / (2 * pi) * double(n_pol)));
        }
        else
        {
            double ct = std::clamp(a0 / r, -1.0, 1.0);
            pol = static_cast<std::size_t>(
                std::floor((1 - ct) / 2 * double(n_pol)));
            // Azimuth in the plane orthogonal to e0, measured from e1
            Vec perp = rel;
            for (int i = 0; i < d; ++i)
                perp.c[i] -= a0 * e0.c[i] + a1 * e1.c[i];
            double psi = std::atan2(perp.norm(), a1);
            // Sign of the azimuth is not identifiable without a third
            // axis; fold onto [0, pi]
            az = static_cast<std::size_t>(std::floor(psi / pi * double(n_az)));
            az = std::min(az, n_az - 1);
        }
        pol = std::min(pol, n_pol - 1);
        return static_cast<std::size_t>(e.ball) * per_ball + pol * n_az + az;
    };

    auto mom = run_paths(
        cfg.n_paths, natoms + 1, cfg.seed, cfg.workers,
        [&](std::uint64_t, PathRng& rng, double* out) {
            auto on_hit = [&](HitEvent const& e) {
                if (e.time < t_lo)
                    return;
                double s = e.time;
                double yxi = 0;
                for (int i = 0; i < d; ++i)
                    yxi += spec.start.c[i] * e.where.c[i];
                double log_w = yxi / t
                               + ym * ym * (t - s) * (t - s) / (2 * s * t * t)
                               + 0.5 * d * std::log(2 * pi * s)
                               - log_lambda_nu(nu, ym / s);
                double m = e.mass * std::exp(log_w) * norm;
                out[bin_of(e)] += m;
                out[natoms] += m;
            };
            run_path(obstacle, cfg, spec, rng, on_hit, {});
        });

    LambdaMeasure lam;
    lam.v_mag = vm;
    lam.window = window;
    for (std::size_t b = 0; b < nballs; ++b)
    {
        Vec const c = Vec::from(balls[b].center);
        double const r = balls[b].radius;
        for (std::size_t p = 0; p < n_pol; ++p)
        {
            for (std::size_t q = 0; q < n_az; ++q)
            {
                std::size_t j = b * per_ball + p * n_az + q;
                Vec w = c;
                if (d == 2)
                {
                    double phi = -pi + 2 * pi * (double(p) + 0.5) / double(n_pol);
                    for (int i = 0; i < d; ++i)
                    {
                        w.c[i] += r
                                  * (std::cos(phi) * e0.c[i]
                                     + std::sin(phi) * e1.c[i]);
                    }
                }
                else
                {
                    double ct = 1 - 2 * (double(p) + 0.5) / double(n_pol);
                    double st = std::sqrt(std::max(0.0, 1 - ct * ct));
                    double psi = pi * (double(q) + 0.5) / double(n_az);
                    // Third axis: first coordinate axis orthogonal to e0, e1
                    Vec e2;
                    e2.d = d;
                    for (int k = 0; k < d; ++k)
                    {
                        e2 = Vec{};
                        e2.d = d;
                        e2.c[k] = 1;
                        double d0 = e2.c[k] * e0.c[k], d1 = e2.c[k] * e1.c[k];
                        for (int i = 0; i < d; ++i)
                            e2.c[i] -= d0 * e0.c[i] + d1 * e1.c[i];
                        if (e2.norm() > 0.5)
                            break;
                    }
                    double n2 = e2.norm();
                    for (int i = 0; i < d; ++i)
                    {
                        w.c[i] += r
                                  * (ct * e0.c[i]
                                     + st
                                           * (std::cos(psi) * e1.c[i]
                                              + std::sin(psi) * e2.c[i]
                                                    / n2));
                    }
                }
                MCEstimate e = mom.estimate(j, cfg.seed, "lambda_atom");
                lam.atoms.push_back({w.to_point(), e.mean, e.std_error});
            }
        }
    }
    lam.total = mom.estimate(natoms, cfg.seed, "lambda_total");
    return lam;
}

//---------------------------------------------------------------------------//
MCEstimate bessel_tail_mc(double mu, double r, double a, double s,
                          PathConfig const& cfg)
{
    cfg.validate();
    require_domain(mu > -1, "Bessel order must exceed -1");
    require_domain(r >= 0 && r < a, "need 0 <= r < a");
    require_domain(s > 0, "time must be positive");
    double dd = 2 * mu + 2;
    if (std::fabs(dd - std::round(dd)) > 1e-12 || std::round(dd) < 1)
        fail(ErrorCode::unsupported,
             "simulation needs an integer dimension 2 mu + 2");
    int const d = static_cast<int>(std::round(dd));
    double const sd = std::sqrt(s);
    auto mom = run_paths(cfg.n_paths, 1, cfg.seed, cfg.workers,
                         [&](std::uint64_t, PathRng& rng, double* out) {
                             double q = 0;
                             for (int i = 0; i < d; ++i)
                             {
                                 double c = (i == 0 ? r : 0.0)
                                            + sd * rng.normal();
                                 q += c * c;
                             }
                             out[0] = q > a * a ? 1.0 : 0.0;
                         });
    return mom.estimate(0, cfg.seed, "bessel_tail_mc");
}

MCEstimate halfspace_bridge(double eta0, double eta, double s,
                            PathConfig const& cfg)
{
    require_domain(eta0 > 0 && eta > 0 && s > 0,
                   "half-line bridge needs positive arguments");
    // The half-line (-inf, 0] is emulated in d = 1 by a long interval
    constexpr double big = 1e6;
    Obstacle wall({{PointD({-big}), big}});
    auto e = bridge_avoidance(wall, PointD({eta0}), PointD({eta}), s, cfg);
    e.estimator_id = "halfspace_bridge";
    return e;
}

MCEstimate line_bridge(double k, double eta, double eta_p, double ell,
                       double t, PathConfig const& cfg)
{
    require_domain(k > 0 && eta > 0 && t > 0 && ell > 0,
                   "line bridge needs positive k, eta, ell, t");
    require_domain(eta_p > -k * ell, "end point must lie above the line");
    constexpr double big = 1e8;
    double n = std::sqrt(1 + k * k);
    Obstacle wall({{PointD({-big * k / n, -big / n}), big}});
    auto e = bridge_avoidance(wall, PointD({0.0, eta}), PointD({ell, eta_p}),
                              t, cfg);
    e.estimator_id = "line_bridge";
    return e;
}

}  // namespace hk::mc
