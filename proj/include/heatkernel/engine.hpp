// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/engine.hpp
//! Path stepping among balls, walk on spheres, and deterministic reduction.
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatkernel/euclid.hpp"
#include "heatkernel/rng.hpp"

namespace hk::mc
{
//---------------------------------------------------------------------------//
/*!
 * Step control and sampling budget.
 *
 * The step from a point at distance \c dist from the obstacle is
 * \code
   h = step_scale * max(dist, min_dist_frac * r_min)^2
 * \endcode
 * further capped by \c dt_near inside \c near_band * R_A, by \c dt_max
 * elsewhere, and so that the mean drift moves at most half the distance.
 */
struct PathConfig
{
    double dt_max{std::numeric_limits<double>::infinity()};
    double dt_near{std::numeric_limits<double>::infinity()};
    double near_band{2.0};
    bool crossing_correction{true};
    std::uint64_t seed{1};
    std::uint64_t n_paths{10000};
    double step_scale{0.1};
    double min_dist_frac{0.01};
    unsigned workers{1};

    void validate() const;
    nlohmann::json to_json() const;
    static PathConfig from_json(nlohmann::json const& j);
};

struct MCEstimate
{
    double mean{0};
    double std_error{0};
    std::uint64_t n{0};
    std::uint64_t seed{0};
    std::string estimator_id;

    nlohmann::json to_json() const;
};

//---------------------------------------------------------------------------//
// DETERMINISTIC REDUCTION
//---------------------------------------------------------------------------//
/*!
 * First and second moments of several per-path observables.
 */
struct Moments
{
    std::uint64_t n{0};
    std::vector<double> sum;
    std::vector<double> sum2;
    //! Sums of out[j] * out[ref] when a reference observable was given
    std::vector<double> cross;
    int ref{-1};

    double mean(std::size_t j) const;
    double std_error(std::size_t j) const;
    MCEstimate estimate(std::size_t j, std::uint64_t seed,
                        std::string id) const;
    //! Ratio of means mean(j)/mean(ref) with delta-method error
    MCEstimate ratio(std::size_t j, std::uint64_t seed, std::string id) const;
};

//! Per-path callback: fills \c out (pre-zeroed, size m) for path \c index
using PathFunction
    = std::function<void(std::uint64_t index, PathRng& rng, double* out)>;

/*!
 * Run n independent paths and reduce m observables.
 *
 * Paths are grouped into fixed blocks summed in index order; block totals
 * are then combined pairwise, so the result does not depend on the number of
 * workers.
 */
Moments run_paths(std::uint64_t n, std::size_t m, std::uint64_t seed,
                  unsigned workers, PathFunction const& fn, int ref = -1);

//---------------------------------------------------------------------------//
// PATH STEPPING
//---------------------------------------------------------------------------//
inline constexpr int max_dim = 8;

struct Vec
{
    std::array<double, max_dim> c{};
    int d{0};

    static Vec from(euclid::PointD const& p);
    euclid::PointD to_point() const;
    double norm() const;
};

struct HitEvent
{
    double time;
    Vec where;
    int ball;
    double mass;  //!< Weight lost in this step
};

/*!
 * Description of a single path: free, drifted, or bridged to an end point.
 */
struct PathSpec
{
    Vec start;
    double t_end{0};
    bool bridge{false};
    Vec end;  //!< Bridge end point
    bool has_drift{false};
    Vec drift;
    //! Increasing times at which the surviving weight is reported
    std::span<double const> checkpoints;
    //! Stop when |z| reaches this radius
    double escape_radius{std::numeric_limits<double>::infinity()};
    //! Free paths stop early once dist >= far_stop * sqrt(remaining time)
    double far_stop{20.0};
};

struct PathOutcome
{
    double weight{1};  //!< Surviving weight at termination
    double time{0};  //!< Time reached
    Vec where;
    bool escaped{false};
    bool killed{false};
    long steps{0};
};

using HitCallback = std::function<void(HitEvent const&)>;
using CheckpointCallback = std::function<void(int, double)>;

/*!
 * Advance one weighted path with bridge crossing corrections per ball.
 */
PathOutcome run_path(euclid::Obstacle const& obstacle, PathConfig const& cfg,
                     PathSpec const& spec, PathRng& rng,
                     HitCallback const& on_hit = {},
                     CheckpointCallback const& on_checkpoint = {});

//---------------------------------------------------------------------------//
// WALK ON SPHERES
//---------------------------------------------------------------------------//
struct WosOutcome
{
    int reached{0};  //!< Number of radii reached before the obstacle
    Vec first_exit;  //!< Point where radii[0] was first reached
    long steps{0};
};

/*!
 * Walk on spheres in the exterior of the obstacle until it hits the
 * obstacle or reaches the last of the increasing radii.
 */
WosOutcome walk_on_spheres(euclid::Obstacle const& obstacle, Vec start,
                           std::span<double const> radii, double eps,
                           PathRng& rng);

}  // namespace hk::mc
