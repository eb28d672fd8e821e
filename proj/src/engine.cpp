// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file engine.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "heatkernel/error.hpp"

namespace hk::mc
{
namespace
{
constexpr std::uint64_t block_size = 1024;
constexpr double roulette_threshold = 1e-3;

struct BlockSums
{
    std::vector<double> sum, sum2, cross;
};

BlockSums pairwise(std::vector<BlockSums>& blocks, std::size_t lo,
                   std::size_t hi)
{
    if (hi - lo == 1)
        return blocks[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    BlockSums a = pairwise(blocks, lo, mid);
    BlockSums b = pairwise(blocks, mid, hi);
    for (std::size_t j = 0; j < a.sum.size(); ++j)
    {
        a.sum[j] += b.sum[j];
        a.sum2[j] += b.sum2[j];
        a.cross[j] += b.cross[j];
    }
    return a;
}

double json_number(nlohmann::json const& j, char const* key, double dflt)
{
    if (!j.contains(key))
        return dflt;
    auto const& v = j[key];
    if (v.is_null())
        return std::numeric_limits<double>::infinity();
    if (v.is_string() && v.get<std::string>() == "inf")
        return std::numeric_limits<double>::infinity();
    if (!v.is_number())
        fail(ErrorCode::parse, std::string("config field '") + key
                                   + "' must be a number");
    return v.get<double>();
}

nlohmann::json json_or_inf(double v)
{
    if (std::isinf(v))
        return "inf";
    return v;
}

struct Geometry
{
    std::vector<Vec> centers;
    std::vector<double> radii;
    double r_a{0};
    double r_min{0};
    int d{0};

    explicit Geometry(euclid::Obstacle const& ob) : d(ob.dim())
    {
        if (d > max_dim)
            fail(ErrorCode::unsupported, "path engine supports d <= 8");
        for (auto const& b : ob.balls())
        {
            centers.push_back(Vec::from(b.center));
            radii.push_back(b.radius);
        }
        r_a = ob.bounding_radius();
        r_min = ob.min_radius();
    }

    // Signed distance to ball b
    double dist(Vec const& z, std::size_t b) const
    {
        double s = 0;
        for (int i = 0; i < d; ++i)
        {
            double c = z.c[i] - centers[b].c[i];
            s += c * c;
        }
        return std::sqrt(s) - radii[b];
    }

    double nearest(Vec const& z, std::size_t* which = nullptr) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < radii.size(); ++b)
        {
            double v = this->dist(z, b);
            if (v < best)
            {
                best = v;
                if (which)
                    *which = b;
            }
        }
        return best;
    }

    // Closest point on the sphere of ball b to z
    Vec project(Vec const& z, std::size_t b) const
    {
        Vec out = z;
        double s = 0;
        for (int i = 0; i < d; ++i)
        {
            double c = z.c[i] - centers[b].c[i];
            s += c * c;
        }
        double n = std::sqrt(s);
        for (int i = 0; i < d; ++i)
        {
            double c = z.c[i] - centers[b].c[i];
            out.c[i] = centers[b].c[i]
                       + (n > 0 ? c / n : (i == 0 ? 1.0 : 0.0)) * radii[b];
        }
        return out;
    }
};

/*!
 * Crossing correction for one step between exterior points.
 *
 * Each ball is replaced by its tangent half-space, for which the bridge
 * crossing probability exp(-2 d1 d2 / h) is exact. When that probability is
 * not negligible and the step is long compared with the ball radius, the
 * step is split at an exact bridge midpoint and both halves are treated
 * recursively.
 */
struct CrossingStepper
{
    Geometry const& geo;
    PathRng& rng;
    HitCallback const& on_hit;
    double& w;
    double kill_time;

    static constexpr double refine_ratio = 0.1;
    static constexpr double refine_tol = 1e-4;
    static constexpr int max_depth = 40;

    Vec lerp(Vec const& a, Vec const& b, double f) const
    {
        Vec m = a;
        for (int i = 0; i < geo.d; ++i)
            m.c[i] = a.c[i] + f * (b.c[i] - a.c[i]);
        return m;
    }

    bool segment(Vec const& z, Vec const& zn, double s, double h,
                 double const* d1, double const* d2, int depth)
    {
        std::size_t const nb = geo.radii.size();
        double q = 1;
        double pmax = 0;
        std::size_t bmax = 0;
        bool refine = false;
        for (std::size_t b = 0; b < nb; ++b)
        {
            double x = 2 * d1[b] * d2[b] / h;
            if (x >= 45)
                continue;
            double p = std::exp(-x);
            double r = refine_ratio * geo.radii[b];
            // The half-space error grows with (d1 + d2) / radius
            if (depth < max_depth && h > r * r
                && p * (d1[b] + d2[b]) > refine_tol * geo.radii[b])
            {
                refine = true;
            }
            q *= 1 - p;
            if (p > pmax)
            {
                pmax = p;
                bmax = b;
            }
        }
        if (refine)
        {
            Vec m = this->lerp(z, zn, 0.5);
            double sd = std::sqrt(0.25 * h);
            for (int i = 0; i < geo.d; ++i)
                m.c[i] += sd * rng.normal();
            std::array<double, 64> dm_buf;
            std::vector<double> dm_vec;
            double* dm = dm_buf.data();
            if (nb > dm_buf.size())
            {
                dm_vec.resize(nb);
                dm = dm_vec.data();
            }
            std::size_t deepest = 0;
            double depth_in = 0;
            for (std::size_t b = 0; b < nb; ++b)
            {
                dm[b] = geo.dist(m, b);
                if (-dm[b] >= depth_in)
                {
                    depth_in = -dm[b];
                    deepest = b;
                }
            }
            if (*std::min_element(dm, dm + nb) <= 0)
            {
                double f = d1[deepest] / (d1[deepest] + depth_in);
                kill_time = s + 0.5 * h * f;
                if (on_hit)
                {
                    on_hit({kill_time,
                            geo.project(this->lerp(z, m, f), deepest),
                            static_cast<int>(deepest), w});
                }
                return false;
            }
            if (!this->segment(z, m, s, 0.5 * h, d1, dm, depth + 1))
                return false;
            return this->segment(m, zn, s + 0.5 * h, 0.5 * h, dm, d2,
                                 depth + 1);
        }
        if (q < 1)
        {
            double lost = w * (1 - q);
            if (on_hit)
            {
                double f = d1[bmax] / (d1[bmax] + d2[bmax]);
                on_hit({s + f * h, geo.project(this->lerp(z, zn, f), bmax),
                        static_cast<int>(bmax), lost});
            }
            w *= q;
        }
        return true;
    }
};
}  // namespace

//---------------------------------------------------------------------------//
void PathConfig::validate() const
{
    if (!(dt_max > 0) || !(dt_near > 0))
        fail(ErrorCode::invalid_argument, "step caps must be positive");
    // An infinite dt_near means "same as dt_max"
    if (std::isfinite(dt_near) && dt_near > dt_max)
        fail(ErrorCode::invalid_argument, "dt_near must not exceed dt_max");
    if (n_paths < 1)
        fail(ErrorCode::domain, "n_paths must be at least 1");
    if (!(step_scale > 0) || !(min_dist_frac > 0) || !(near_band >= 0))
        fail(ErrorCode::invalid_argument, "step controls must be positive");
    if (workers < 1)
        fail(ErrorCode::invalid_argument, "workers must be at least 1");
}

nlohmann::json PathConfig::to_json() const
{
    return {{"dt_max", json_or_inf(dt_max)},
            {"dt_near", json_or_inf(dt_near)},
            {"near_band", near_band},
            {"crossing_correction", crossing_correction},
            {"seed", seed},
            {"n_paths", n_paths},
            {"step_scale", step_scale},
            {"min_dist_frac", min_dist_frac}};
}

PathConfig PathConfig::from_json(nlohmann::json const& j)
{
    if (!j.is_object())
        fail(ErrorCode::parse, "path config must be a JSON object");
    PathConfig c;
    c.dt_max = json_number(j, "dt_max", c.dt_max);
    c.dt_near = json_number(j, "dt_near", c.dt_near);
    c.near_band = json_number(j, "near_band", c.near_band);
    c.step_scale = json_number(j, "step_scale", c.step_scale);
    c.min_dist_frac = json_number(j, "min_dist_frac", c.min_dist_frac);
    if (j.contains("crossing_correction"))
        c.crossing_correction = j["crossing_correction"].get<bool>();
    if (j.contains("seed"))
        c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("n_paths"))
        c.n_paths = j["n_paths"].get<std::uint64_t>();
    c.validate();
    return c;
}

nlohmann::json MCEstimate::to_json() const
{
    return {{"mean", mean},
            {"stderr", std_error},
            {"n", n},
            {"seed", seed},
            {"estimator", estimator_id}};
}

//---------------------------------------------------------------------------//
double Moments::mean(std::size_t j) const
{
    return sum.at(j) / double(n);
}

double Moments::std_error(std::size_t j) const
{
    if (n < 2)
        return 0;
    double m = this->mean(j);
    double var = (sum2.at(j) - double(n) * m * m) / double(n - 1);
    return std::sqrt(std::max(var, 0.0) / double(n));
}

MCEstimate
Moments::estimate(std::size_t j, std::uint64_t seed, std::string id) const
{
    return {this->mean(j), this->std_error(j), n, seed, std::move(id)};
}

MCEstimate
Moments::ratio(std::size_t j, std::uint64_t seed, std::string id) const
{
    if (ref < 0)
        fail(ErrorCode::invalid_argument, "no reference observable");
    auto r = static_cast<std::size_t>(ref);
    double mb = this->mean(r);
    if (!(mb > 0))
        return {0.0, 0.0, n, seed, std::move(id)};
    double ma = this->mean(j);
    double q = ma / mb;
    double nn = double(n);
    double var_a = sum2.at(j) / nn - ma * ma;
    double var_b = sum2.at(r) / nn - mb * mb;
    double cov = cross.at(j) / nn - ma * mb;
    double var = (var_a - 2 * q * cov + q * q * var_b) / (mb * mb);
    return {q, std::sqrt(std::max(var, 0.0) / nn), n, seed, std::move(id)};
}

Moments run_paths(std::uint64_t n, std::size_t m, std::uint64_t seed,
                  unsigned workers, PathFunction const& fn, int ref)
{
    if (ref >= static_cast<int>(m))
        fail(ErrorCode::invalid_argument, "reference observable out of range");
    if (n == 0)
        fail(ErrorCode::domain, "sample count must be positive");
    std::uint64_t nblocks = (n + block_size - 1) / block_size;
    std::vector<BlockSums> blocks(nblocks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        std::vector<double> out(m);
        while (true)
        {
            std::uint64_t b = next.fetch_add(1);
            if (b >= nblocks)
                return;
            BlockSums sums{std::vector<double>(m, 0.0),
                           std::vector<double>(m, 0.0),
                           std::vector<double>(m, 0.0)};
            std::uint64_t hi = std::min(n, (b + 1) * block_size);
            try
            {
                for (std::uint64_t i = b * block_size; i < hi; ++i)
                {
                    std::fill(out.begin(), out.end(), 0.0);
                    PathRng rng(seed, i);
                    fn(i, rng, out.data());
                    for (std::size_t j = 0; j < m; ++j)
                    {
                        sums.sum[j] += out[j];
                        sums.sum2[j] += out[j] * out[j];
                        if (ref >= 0)
                            sums.cross[j] += out[j] * out[ref];
                    }
                }
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = nblocks;
                return;
            }
            blocks[b] = std::move(sums);
        }
    };

    unsigned nthreads = std::max(1u, workers);
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < nthreads; ++i)
        threads.emplace_back(work);
    work();
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);

    BlockSums total = pairwise(blocks, 0, blocks.size());
    Moments result;
    result.n = n;
    result.sum = std::move(total.sum);
    result.sum2 = std::move(total.sum2);
    if (ref >= 0)
        result.cross = std::move(total.cross);
    result.ref = ref;
    return result;
}

//---------------------------------------------------------------------------//
Vec Vec::from(euclid::PointD const& p)
{
    if (p.dim() > max_dim)
        fail(ErrorCode::unsupported, "path engine supports d <= 8");
    Vec v;
    v.d = p.dim();
    for (int i = 0; i < v.d; ++i)
        v.c[i] = p[i];
    return v;
}

euclid::PointD Vec::to_point() const
{
    return euclid::PointD(std::vector<double>(c.begin(), c.begin() + d));
}

double Vec::norm() const
{
    double s = 0;
    for (int i = 0; i < d; ++i)
        s += c[i] * c[i];
    return std::sqrt(s);
}

//---------------------------------------------------------------------------//
PathOutcome run_path(euclid::Obstacle const& obstacle, PathConfig const& cfg,
                     PathSpec const& spec, PathRng& rng,
                     HitCallback const& on_hit,
                     CheckpointCallback const& on_checkpoint)
{
    // Geometry is rebuilt per call; obstacles hold a handful of balls
    Geometry geo(obstacle);
    int const d = geo.d;
    std::size_t const nballs = geo.radii.size();
    double const floor = cfg.min_dist_frac * geo.r_min;
    double const near_r = cfg.near_band * geo.r_a;
    int const ncheck = static_cast<int>(spec.checkpoints.size());

    PathOutcome out;
    Vec z = spec.start;
    double s = 0;
    double w = 1;
    int ci = 0;
    std::array<double, 64> d1_buf{}, d2_buf{};
    std::vector<double> d1v, d2v;
    double* d1 = d1_buf.data();
    double* d2 = d2_buf.data();
    if (nballs > d1_buf.size())
    {
        d1v.resize(nballs);
        d2v.resize(nballs);
        d1 = d1v.data();
        d2 = d2v.data();
    }

    auto flush_checkpoints = [&](double weight) {
        for (; ci < ncheck; ++ci)
        {
            if (on_checkpoint)
                on_checkpoint(ci, weight);
        }
    };

    for (std::size_t b = 0; b < nballs; ++b)
        d1[b] = geo.dist(z, b);
    if (*std::min_element(d1, d1 + nballs) <= 0)
        fail(ErrorCode::domain, "path starts inside the obstacle");

    while (s < spec.t_end)
    {
        double dist = *std::min_element(d1, d1 + nballs);
        double rem = spec.t_end - s;
        double reach = dist - (spec.has_drift ? spec.drift.norm() * rem : 0);
        if (!spec.bridge && reach >= spec.far_stop * std::sqrt(rem))
        {
            s = spec.t_end;
            break;
        }
        double target = ci < ncheck ? spec.checkpoints[ci] : spec.t_end;
        double dd = std::max(dist, floor);
        double h = cfg.step_scale * dd * dd;
        h = std::min(h, cfg.dt_max);
        if (z.norm() < near_r)
            h = std::min(h, cfg.dt_near);
        double dm = 0;
        if (spec.bridge)
        {
            double s2 = 0;
            for (int i = 0; i < d; ++i)
            {
                double c = spec.end.c[i] - z.c[i];
                s2 += c * c;
            }
            dm = std::sqrt(s2) / rem;
        }
        else if (spec.has_drift)
        {
            dm = spec.drift.norm();
        }
        if (dm > 0)
            h = std::min(h, 0.5 * dd / dm);
        if (h >= target - s || target - s - h < 1e-12 * target)
            h = target - s;

        Vec zn = z;
        if (spec.bridge)
        {
            double frac = h / rem;
            double sd = std::sqrt(std::max(0.0, h * (rem - h) / rem));
            for (int i = 0; i < d; ++i)
            {
                zn.c[i] = z.c[i] + frac * (spec.end.c[i] - z.c[i])
                          + sd * rng.normal();
            }
            if (h == rem)
                zn = spec.end;
        }
        else
        {
            double sd = std::sqrt(h);
            for (int i = 0; i < d; ++i)
            {
                zn.c[i] = z.c[i] + sd * rng.normal();
                if (spec.has_drift)
                    zn.c[i] += spec.drift.c[i] * h;
            }
        }
        ++out.steps;

        std::size_t deepest = 0;
        double depth = 0;
        for (std::size_t b = 0; b < nballs; ++b)
        {
            d2[b] = geo.dist(zn, b);
            if (-d2[b] > depth)
            {
                depth = -d2[b];
                deepest = b;
            }
        }
        if (depth > 0 || *std::min_element(d2, d2 + nballs) == 0)
        {
            // Landed inside a ball
            double f = d1[deepest] / (d1[deepest] + depth);
            if (on_hit)
            {
                Vec mid = z;
                for (int i = 0; i < d; ++i)
                    mid.c[i] = z.c[i] + f * (zn.c[i] - z.c[i]);
                on_hit({s + f * h, geo.project(mid, deepest),
                        static_cast<int>(deepest), w});
            }
            w = 0;
            out.killed = true;
            s += f * h;
            z = zn;
            break;
        }
        if (cfg.crossing_correction)
        {
            CrossingStepper cs{geo, rng, on_hit, w, 0.0};
            if (!cs.segment(z, zn, s, h, d1, d2, 0))
            {
                w = 0;
                out.killed = true;
                s = cs.kill_time;
                z = zn;
                break;
            }
        }
        z = zn;
        s += h;
        std::copy(d2, d2 + nballs, d1);
        if (ci < ncheck && s >= target)
        {
            s = target;
            if (on_checkpoint)
                on_checkpoint(ci, w);
            ++ci;
        }
        if (z.norm() >= spec.escape_radius)
        {
            out.escaped = true;
            break;
        }
        if (w < roulette_threshold)
        {
            if (rng.uniform() < w / roulette_threshold)
            {
                w = roulette_threshold;
            }
            else
            {
                w = 0;
                out.killed = true;
                break;
            }
        }
    }
    flush_checkpoints(w);
    out.weight = w;
    out.time = s;
    out.where = z;
    return out;
}

//---------------------------------------------------------------------------//
WosOutcome walk_on_spheres(euclid::Obstacle const& obstacle, Vec start,
                           std::span<double const> radii, double eps,
                           PathRng& rng)
{
    Geometry geo(obstacle);
    int const d = geo.d;
    std::size_t const n = radii.size();
    WosOutcome out;
    Vec z = start;
    std::size_t k = 0;
    for (long step = 0; step < 100000000; ++step)
    {
        double da = geo.nearest(z);
        if (da <= eps)
            return out;
        double rz = z.norm();
        while (k < n && rz >= radii[k] - eps)
        {
            if (k == 0)
                out.first_exit = z;
            ++k;
            out.reached = static_cast<int>(k);
        }
        if (k == n)
            return out;
        double r = std::min(da, radii[k] - rz);
        double s2 = 0;
        std::array<double, max_dim> g{};
        for (int i = 0; i < d; ++i)
        {
            g[i] = rng.normal();
            s2 += g[i] * g[i];
        }
        double scale = r / std::sqrt(s2);
        for (int i = 0; i < d; ++i)
            z.c[i] += scale * g[i];
        ++out.steps;
    }
    fail(ErrorCode::invalid_argument, "walk on spheres did not terminate");
}

}  // namespace hk::mc
