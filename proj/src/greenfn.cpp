// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file greenfn.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/greenfn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatkernel/error.hpp"
#include "heatkernel/quadrature.hpp"
#include "heatkernel/rng.hpp"

namespace hk::green
{
namespace
{
constexpr double pi = std::numbers::pi;
constexpr int n_circle = 256;

double eps_of(Obstacle const& ob)
{
    return 1e-5 * ob.min_radius();
}

std::uint64_t hash_point(PointD const& x, std::uint64_t seed)
{
    std::uint64_t h = mc::mix64(seed);
    for (double c : x.coords())
        h = mc::mix64(h ^ std::bit_cast<std::uint64_t>(c));
    return h;
}

void require_plane(Obstacle const& ob, char const* what)
{
    if (ob.dim() != 2)
        fail(ErrorCode::unsupported, std::string(what) + " needs d = 2");
}

// Uniform point on the unit sphere in d dimensions
mc::Vec random_direction(int d, mc::PathRng& rng)
{
    mc::Vec v;
    v.d = d;
    double s = 0;
    for (int i = 0; i < d; ++i)
    {
        v.c[i] = rng.normal();
        s += v.c[i] * v.c[i];
    }
    s = std::sqrt(s);
    for (int i = 0; i < d; ++i)
        v.c[i] /= s;
    return v;
}

/*!
 * One walk for u_A in d >= 3: walk on spheres inside U(r_out), and from
 * outside either escape for good or land on the sphere of radius R_A with
 * the exterior harmonic measure (sampled by rejection).
 */
double avoid_once(Obstacle const& ob, mc::Vec z, mc::PathRng& rng)
{
    int const d = ob.dim();
    double const ra = ob.bounding_radius();
    double const r_out = 4 * ra;
    double const eps = eps_of(ob);
    double const radii[] = {r_out};
    for (int ret = 0; ret < 100000; ++ret)
    {
        double rz = z.norm();
        if (rz >= r_out - eps)
        {
            double p_ret = std::pow(ra / rz, d - 2);
            if (rng.uniform() >= p_ret)
                return 1;
            // Hitting point on the sphere has density ~ |z - xi|^{-d}
            mc::Vec xi;
            while (true)
            {
                mc::Vec u = random_direction(d, rng);
                double s = 0;
                for (int i = 0; i < d; ++i)
                {
                    double c = z.c[i] - ra * u.c[i];
                    s += c * c;
                }
                double accept = std::pow((rz - ra) / std::sqrt(s), d);
                if (rng.uniform() < accept)
                {
                    xi = u;
                    for (int i = 0; i < d; ++i)
                        xi.c[i] *= ra;
                    break;
                }
            }
            if (ob.distance(xi.to_point()) <= eps)
                return 0;
            z = xi;
        }
        auto w = mc::walk_on_spheres(ob, z, radii, eps, rng);
        if (w.reached == 0)
            return 0;
        z = w.first_exit;
    }
    fail(ErrorCode::invalid_argument, "walk for u_A did not terminate");
}
}  // namespace

//---------------------------------------------------------------------------//
double e_disc(double a, PointD const& x)
{
    require_domain(a > 0, "disc radius must be positive");
    if (x.dim() != 2)
        fail(ErrorCode::domain, "e_disc needs a planar point");
    double r = x.norm();
    require_domain(r >= a, "point lies inside the disc");
    return std::log(r / a);
}

double u_ball(double a, PointD const& x)
{
    require_domain(a > 0, "ball radius must be positive");
    if (x.dim() < 3)
        fail(ErrorCode::domain, "u_ball needs d >= 3");
    double r = x.norm();
    require_domain(r >= a, "point lies inside the ball");
    return 1 - std::pow(a / r, x.dim() - 2);
}

//---------------------------------------------------------------------------//
PotentialModel::PotentialModel(Obstacle obstacle, Kind kind)
    : obstacle_(std::move(obstacle)), kind_(kind)
{
}

PotentialModel PotentialModel::analytic(Obstacle obstacle)
{
    if (!obstacle.is_centered_ball())
        fail(ErrorCode::unsupported,
             "analytic potential needs a single centered ball");
    return PotentialModel(std::move(obstacle), Kind::analytic_disc);
}

PotentialModel PotentialModel::make(Obstacle obstacle,
                                    PotentialBuildOptions const& opts)
{
    if (obstacle.is_centered_ball())
        return analytic(std::move(obstacle));
    return estimate(std::move(obstacle), opts);
}

PotentialModel
PotentialModel::estimate(Obstacle obstacle, PotentialBuildOptions const& opts)
{
    PotentialModel pm(std::move(obstacle), Kind::mc_estimated);
    pm.opts_ = opts;
    if (pm.dim() != 2)
        return pm;

    Obstacle const& ob = pm.obstacle_;
    double const ra = ob.bounding_radius();
    double const eps = eps_of(ob);
    pm.r_outer_ = opts.outer_factor * ra;
    double const r_far = opts.far_factor * ra;
    int const kmax = opts.max_harmonic;

    // Pooled walks from uniform points on the outer circle
    double const far_radii[] = {r_far};
    auto mom = mc::run_paths(
        opts.n_boundary, 1 + 2 * kmax, opts.seed, opts.workers,
        [&](std::uint64_t, mc::PathRng& rng, double* out) {
            double phi = 2 * pi * rng.uniform();
            mc::Vec z;
            z.d = 2;
            z.c[0] = pm.r_outer_ * std::cos(phi);
            z.c[1] = pm.r_outer_ * std::sin(phi);
            auto w = mc::walk_on_spheres(ob, z, far_radii, eps, rng);
            if (w.reached == 0)
                return;
            out[0] = 1;
            for (int k = 1; k <= kmax; ++k)
            {
                out[2 * k - 1] = std::cos(k * phi);
                out[2 * k] = std::sin(k * phi);
            }
        });
    double const L = std::log(r_far / ra);
    double const l1 = std::log(pm.r_outer_ / ra);
    double const p = mom.mean(0);
    double const p_err = mom.std_error(0);
    if (!(p > 0 && p < 1))
        fail(ErrorCode::invalid_argument, "potential estimate degenerate");
    pm.mean_ra_ = (p * L - l1) / (1 - p);
    pm.mean_ra_err_ = (L - l1) / ((1 - p) * (1 - p)) * p_err;
    double const scale = L + pm.mean_ra_;
    double var = pm.mean_ra_err_ * pm.mean_ra_err_;
    for (int k = 1; k <= kmax; ++k)
    {
        std::complex<double> c(scale * mom.mean(2 * k - 1),
                               -scale * mom.mean(2 * k));
        double se = scale
                    * std::hypot(mom.std_error(2 * k - 1),
                                 mom.std_error(2 * k));
        if (std::abs(c) > 3 * se)
        {
            pm.harm_k_.push_back(k);
            pm.harm_c_.push_back(c);
            var += 4 * se * se;
        }
    }
    pm.harm_err_ = std::sqrt(var);

    // Polar table inside the outer circle
    for (int j = 1; j <= 8; ++j)
        pm.radii_.push_back(ra * j / 8.0);
    for (double r = ra * 1.25; r < pm.r_outer_ * (1 - 1e-9); r *= 1.25)
        pm.radii_.push_back(r);
    pm.radii_.push_back(pm.r_outer_);
    int const na = opts.n_angles;
    std::size_t const nr = pm.radii_.size();
    pm.table_.assign(nr * na, 0.0);
    pm.table_err_.assign(nr * na, 0.0);
    for (std::size_t i = 0; i < nr; ++i)
    {
        for (int j = 0; j < na; ++j)
        {
            double phi = 2 * pi * j / na;
            PointD x({pm.radii_[i] * std::cos(phi),
                      pm.radii_[i] * std::sin(phi)});
            PotentialValue v;
            if (i + 1 == nr)
                v = pm.outer_value(x);
            else if (ob.distance(x) > eps)
                v = pm.estimate_at(x, opts.n_node,
                                   mc::mix64(opts.seed + i * na + j + 1));
            pm.table_[i * na + j] = v.value;
            pm.table_err_[i * na + j] = v.std_error;
        }
    }
    return pm;
}

//---------------------------------------------------------------------------//
PotentialValue PotentialModel::outer_value(PointD const& x) const
{
    double r = x.norm();
    double phi = std::atan2(x[1], x[0]);
    double ra = obstacle_.bounding_radius();
    double v = std::log(r / ra) + mean_ra_;
    for (std::size_t i = 0; i < harm_k_.size(); ++i)
    {
        int k = harm_k_[i];
        std::complex<double> e(std::cos(k * phi), std::sin(k * phi));
        v += 2 * std::real(harm_c_[i] * e) * std::pow(r_outer_ / r, k);
    }
    return {v, harm_err_};
}

PotentialValue PotentialModel::table_value(PointD const& x) const
{
    double r = x.norm();
    double phi = std::atan2(x[1], x[0]);
    if (phi < 0)
        phi += 2 * pi;
    int const na = opts_.n_angles;
    double fa = phi / (2 * pi) * na;
    int j0 = std::min(na - 1, static_cast<int>(std::floor(fa)));
    int j1 = (j0 + 1) % na;
    double ta = fa - j0;

    auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    std::size_t i1 = std::min<std::size_t>(radii_.size() - 1,
                                           static_cast<std::size_t>(
                                               it - radii_.begin()));
    std::size_t i0 = i1 == 0 ? 0 : i1 - 1;
    double tr = i1 == i0 ? 0.0
                         : (r - radii_[i0]) / (radii_[i1] - radii_[i0]);
    tr = std::clamp(tr, 0.0, 1.0);

    auto at = [&](std::vector<double> const& tab, std::size_t i, int j) {
        return tab[i * na + j];
    };
    auto bilinear = [&](std::vector<double> const& tab) {
        return (1 - tr) * ((1 - ta) * at(tab, i0, j0) + ta * at(tab, i0, j1))
               + tr * ((1 - ta) * at(tab, i1, j0) + ta * at(tab, i1, j1));
    };
    return {bilinear(table_), 2 * bilinear(table_err_)};
}

PotentialValue PotentialModel::eval(PointD const& x) const
{
    if (x.dim() != this->dim())
        fail(ErrorCode::domain, "point dimension differs from obstacle");
    if (obstacle_.distance(x) <= 0)
        return {0, 0};
    if (kind_ == Kind::analytic_disc)
    {
        double a = obstacle_.centered_radius();
        return {this->dim() == 2 ? e_disc(a, x) : u_ball(a, x), 0};
    }
    if (this->dim() != 2)
        return this->estimate_at(x, opts_.n_eval, hash_point(x, opts_.seed));
    if (x.norm() >= r_outer_)
        return this->outer_value(x);
    return this->table_value(x);
}

PotentialValue PotentialModel::estimate_at(PointD const& x, std::uint64_t n,
                                           std::uint64_t seed) const
{
    if (obstacle_.distance(x) <= 0)
        return {0, 0};
    if (this->dim() == 2 && kind_ == Kind::analytic_disc)
        return this->eval(x);
    if (this->dim() == 2 && x.norm() >= r_outer_)
        return this->outer_value(x);
    mc::Vec start = mc::Vec::from(x);
    double const eps = eps_of(obstacle_);
    std::vector<double> radii{r_outer_};
    auto mom = mc::run_paths(
        n, 1, seed, opts_.workers,
        [&](std::uint64_t, mc::PathRng& rng, double* out) {
            if (this->dim() != 2)
            {
                out[0] = avoid_once(obstacle_, start, rng);
                return;
            }
            auto w = mc::walk_on_spheres(obstacle_, start, radii, eps, rng);
            if (w.reached > 0)
                out[0] = this->outer_value(w.first_exit.to_point()).value;
        });
    double err = mom.std_error(0);
    if (this->dim() == 2)
        err = std::hypot(err, harm_err_);
    return {mom.mean(0), err};
}

PotentialValue PotentialModel::circle_mean(double r) const
{
    require_plane(obstacle_, "circle mean");
    double ra = obstacle_.bounding_radius();
    require_domain(r >= ra, "circle radius must be at least R_A");
    if (kind_ == Kind::mc_estimated)
        return {std::log(r / ra) + mean_ra_, mean_ra_err_};
    auto f = [&](double phi) {
        return this->eval(PointD({r * std::cos(phi), r * std::sin(phi)})).value;
    };
    return {quad::periodic_trapezoid(f, 0, 2 * pi, n_circle) / (2 * pi), 0};
}

//---------------------------------------------------------------------------//
nlohmann::json PotentialModel::to_json() const
{
    nlohmann::json j;
    j["obstacle"] = obstacle_.to_json();
    j["kind"] = kind_ == Kind::analytic_disc ? "analytic-disc" : "mc-estimated";
    if (kind_ == Kind::analytic_disc)
        return j;
    j["seed"] = opts_.seed;
    j["n_eval"] = opts_.n_eval;
    j["n_angles"] = opts_.n_angles;
    if (this->dim() != 2)
        return j;
    j["r_outer"] = r_outer_;
    j["mean_ra"] = mean_ra_;
    j["mean_ra_stderr"] = mean_ra_err_;
    auto harm = nlohmann::json::array();
    for (std::size_t i = 0; i < harm_k_.size(); ++i)
    {
        harm.push_back({harm_k_[i], harm_c_[i].real(), harm_c_[i].imag()});
    }
    j["harmonics"] = harm;
    j["harmonics_stderr"] = harm_err_;
    j["radii"] = radii_;
    j["values"] = table_;
    j["stderr"] = table_err_;
    return j;
}

PotentialModel PotentialModel::from_json(nlohmann::json const& j)
{
    try
    {
        Obstacle ob = Obstacle::from_json(j.at("obstacle"));
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "analytic-disc")
            return analytic(std::move(ob));
        if (kind != "mc-estimated")
            fail(ErrorCode::parse, "unknown potential kind '" + kind + "'");
        PotentialModel pm(std::move(ob), Kind::mc_estimated);
        pm.opts_.seed = j.at("seed").get<std::uint64_t>();
        pm.opts_.n_eval = j.at("n_eval").get<std::uint64_t>();
        pm.opts_.n_angles = j.at("n_angles").get<int>();
        if (pm.dim() != 2)
            return pm;
        pm.r_outer_ = j.at("r_outer").get<double>();
        pm.mean_ra_ = j.at("mean_ra").get<double>();
        pm.mean_ra_err_ = j.at("mean_ra_stderr").get<double>();
        for (auto const& h : j.at("harmonics"))
        {
            pm.harm_k_.push_back(h.at(0).get<int>());
            pm.harm_c_.emplace_back(h.at(1).get<double>(),
                                    h.at(2).get<double>());
        }
        pm.harm_err_ = j.at("harmonics_stderr").get<double>();
        pm.radii_ = j.at("radii").get<std::vector<double>>();
        pm.table_ = j.at("values").get<std::vector<double>>();
        pm.table_err_ = j.at("stderr").get<std::vector<double>>();
        if (pm.table_.size() != pm.radii_.size() * pm.opts_.n_angles
            || pm.table_err_.size() != pm.table_.size())
        {
            fail(ErrorCode::parse, "potential table has the wrong size");
        }
        return pm;
    }
    catch (nlohmann::json::exception const& e)
    {
        fail(ErrorCode::parse, std::string("potential JSON: ") + e.what());
    }
}

//---------------------------------------------------------------------------//
EscapeResult escape_probability(PotentialModel const& model, PointD const& x,
                                double r)
{
    Obstacle const& ob = model.obstacle();
    require_plane(ob, "escape probability");
    double ra = ob.bounding_radius();
    require_domain(r > ra, "escape radius must exceed R_A");
    if (ob.distance(x) < 0)
        fail(ErrorCode::domain, "start point lies inside the obstacle");
    if (x.norm() >= r)
        return {1, 1, 1};
    double e = model(x);
    double m = model.circle_mean(ra).value;
    double L = std::log(r / ra);
    double q = r / ra;
    double d_lo = -2 / (q + 1);
    double d_hi = 2 / (q - 1);
    auto prob = [&](double delta) {
        return std::clamp(e / (L + m * (1 + delta)), 0.0, 1.0);
    };
    double a = prob(d_hi), b = prob(d_lo);
    return {prob(0), std::min(a, b), std::max(a, b)};
}

EAEstimate estimate_eA(Obstacle const& obstacle, PointD const& x,
                       std::vector<double> const& radii, std::uint64_t n,
                       std::uint64_t seed, unsigned workers)
{
    require_plane(obstacle, "e_A estimation");
    if (n == 0)
        fail(ErrorCode::domain, "sample count must be positive");
    if (radii.size() < 2)
        fail(ErrorCode::domain, "need at least two radii");
    double const ra = obstacle.bounding_radius();
    for (std::size_t i = 0; i < radii.size(); ++i)
    {
        if (i > 0 && !(radii[i] > radii[i - 1]))
            fail(ErrorCode::domain, "radii must increase");
    }
    if (!(radii.front() > std::max(ra, x.norm())))
        fail(ErrorCode::domain, "first radius must enclose A and x");
    if (!(radii.back() >= 100 * ra))
        fail(ErrorCode::domain, "largest radius must be at least 100 R_A");
    if (x.dim() != 2 || obstacle.distance(x) < 0)
        fail(ErrorCode::domain, "start point must be exterior and planar");

    EAEstimate out;
    out.radii = radii;
    std::size_t const nr = radii.size();
    if (obstacle.distance(x) == 0)
    {
        out.estimate = {0, 0, n, seed, "estimate_eA"};
        out.exit_fraction.assign(nr, 0.0);
        return out;
    }

    mc::Vec start = mc::Vec::from(x);
    double const eps = eps_of(obstacle);
    // Observable j: the walk reached exactly j radii
    auto mom = mc::run_paths(
        n, nr + 1, seed, workers,
        [&](std::uint64_t, mc::PathRng& rng, double* out) {
            auto w = mc::walk_on_spheres(obstacle, start, radii, eps, rng);
            out[w.reached] = 1;
        });
    std::vector<double> frac(nr + 1);
    for (std::size_t j = 0; j <= nr; ++j)
        frac[j] = mom.mean(j);
    std::vector<double> p(nr), L(nr);
    for (std::size_t i = 0; i < nr; ++i)
    {
        double s = 0;
        for (std::size_t j = i + 1; j <= nr; ++j)
            s += frac[j];
        p[i] = s;
        L[i] = std::log(radii[i] / ra);
    }
    out.exit_fraction = p;
    out.plain = L.back() * p.back();
    if (!(p.back() > 0))
    {
        double nan = std::numeric_limits<double>::quiet_NaN();
        out.estimate = {nan, nan, n, seed, "estimate_eA"};
        return out;
    }

    // Least squares of 1/P on L
    double lbar = 0, ybar = 0;
    for (std::size_t i = 0; i < nr; ++i)
    {
        lbar += L[i] / nr;
        ybar += 1 / p[i] / nr;
    }
    double sll = 0;
    for (std::size_t i = 0; i < nr; ++i)
        sll += (L[i] - lbar) * (L[i] - lbar);
    std::vector<double> c(nr);
    double slope = 0;
    for (std::size_t i = 0; i < nr; ++i)
    {
        c[i] = (L[i] - lbar) / sll;
        slope += c[i] / p[i];
    }
    double intercept = ybar - slope * lbar;

    // Delta method over the distribution of the number of radii reached
    double ez = 0, ez2 = 0;
    for (std::size_t k = 0; k <= nr; ++k)
    {
        double z = 0;
        for (std::size_t i = 0; i < k; ++i)
            z += -c[i] / (p[i] * p[i]);
        ez += frac[k] * z;
        ez2 += frac[k] * z * z;
    }
    double var_slope = std::max(0.0, ez2 - ez * ez) / double(n);
    double e = 1 / slope;
    double se = std::sqrt(var_slope) / (slope * slope);
    out.estimate = {e, se, n, seed, "estimate_eA"};
    out.intercept_mean = intercept / slope;

    // Correction window: 1/P_i moves by at most m |delta_i| / e
    double m = std::max(0.0, out.intercept_mean);
    double bslope = 0;
    for (std::size_t i = 0; i < nr; ++i)
    {
        double q = radii[i] / ra;
        double dmax = std::max(2 / (q + 1), 2 / (q - 1));
        bslope += std::fabs(c[i]) * m * dmax / e;
    }
    out.bias_bound = bslope * e * e;
    return out;
}

RecursionResidual eA_recursion_check(PotentialModel const& model,
                                     PointD const& x, double R)
{
    Obstacle const& ob = model.obstacle();
    require_plane(ob, "recursion check");
    double xr = x.norm();
    require_domain(R >= ob.bounding_radius(), "R must be at least R_A");
    require_domain(xr >= R, "need |x| >= R");
    PotentialValue ex = model.eval(x);
    if (xr == R)
        return {0, 0};
    double gap = (xr - R) / R;
    int n = static_cast<int>(std::clamp(64 / gap, 256.0, 65536.0));
    double err_sum = 0;
    auto f = [&](double th) {
        PointD xi({R * std::cos(th), R * std::sin(th)});
        double kernel = (xr * xr - R * R)
                        / (2 * pi * euclid::distance(x, xi)
                           * euclid::distance(x, xi));
        PotentialValue v = model.eval(xi);
        err_sum += kernel * v.std_error;
        return kernel * v.value;
    };
    double avg = quad::periodic_trapezoid(f, 0, 2 * pi, n);
    double avg_err = err_sum * 2 * pi / n;
    return {ex.value - std::log(xr / R) - avg, std::hypot(ex.std_error, avg_err)};
}

}  // namespace hk::green
