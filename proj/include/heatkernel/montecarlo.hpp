// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/montecarlo.hpp
//! Seeded Monte Carlo estimators built on the path engine.
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "heatkernel/engine.hpp"
#include "heatkernel/euclid.hpp"

namespace hk::mc
{
using euclid::Obstacle;
using euclid::PointD;

//---------------------------------------------------------------------------//
//! Probability that the bridge from x to y in time t avoids the obstacle
MCEstimate bridge_avoidance(Obstacle const& obstacle, PointD const& x,
                            PointD const& y, double t, PathConfig const& cfg);

//! Probability that the path from x has not hit the obstacle by time t
MCEstimate survival_probability(Obstacle const& obstacle, PointD const& x,
                                double t, PathConfig const& cfg);

//! Survival at each of the increasing times, using common paths
std::vector<MCEstimate>
survival_curve(Obstacle const& obstacle, PointD const& x,
               std::vector<double> const& times, PathConfig const& cfg);

//---------------------------------------------------------------------------//
struct HistogramBin
{
    double lo;
    double hi;
    MCEstimate value;  //!< Density (or ratio to uniform for angles)
    std::uint64_t hits{0};  //!< Paths that lost weight in this bin
};

struct HittingHistogram
{
    std::vector<HistogramBin> bins;
    MCEstimate pre_mass;  //!< Hit before the first edge
    MCEstimate tail_mass;  //!< Hit after the last edge (NaN if unknown)
    MCEstimate survival;  //!< Alive at the last edge
    MCEstimate total_hit;  //!< pre + bins + tail hit mass

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/*!
 * Density histogram of the hitting time over the given bin edges.
 *
 * For a single centered ball in d >= 3 the mass hit after the last edge is
 * added from the avoidance probability at the final position.
 */
HittingHistogram
hitting_time_histogram(Obstacle const& obstacle, PointD const& x,
                       std::vector<double> const& edges, PathConfig const& cfg);

//---------------------------------------------------------------------------//
struct AngularHistogram
{
    std::vector<HistogramBin> bins;  //!< Density relative to uniform
    MCEstimate window_mass;  //!< Probability of a hit inside the window
    double max_deviation{0};  //!< max |bin - 1|
    double max_deviation_err{0};  //!< stderr of the bin attaining it

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/*!
 * Law of the hitting angle on a centered disc given the hit time lies in
 * [t_lo, t_hi]. A nonzero drift samples under a tilted measure and
 * reweights by the exact likelihood ratio.
 */
AngularHistogram
exit_site_conditional(Obstacle const& obstacle, PointD const& x, double t_lo,
                      double t_hi, int nbins, PathConfig const& cfg,
                      PointD const* drift = nullptr);

//---------------------------------------------------------------------------//
struct LambdaAtom
{
    PointD where;
    double weight;
    double std_error;
};

struct LambdaMeasure
{
    std::vector<LambdaAtom> atoms;
    MCEstimate total;
    double v_mag{0};
    double window{0};  //!< Relative half width of the time window

    nlohmann::json to_json() const;
};

/*!
 * Normalized hitting distribution from y = v t with hit times in
 * [t(1-window), t(1+window)], binned by angle about the center of each ball.
 * Paths carry the drift -v and the likelihood ratio is applied in log space.
 */
LambdaMeasure lambda_estimate(Obstacle const& obstacle, PointD const& v,
                              double t, PathConfig const& cfg,
                              int bins_per_ball = 128, double window = 0.1);

//---------------------------------------------------------------------------//
//! Exceedance P[|B_s| > a] for d = 2 mu + 2 started at radius r
MCEstimate bessel_tail_mc(double mu, double r, double a, double s,
                          PathConfig const& cfg);

/*!
 * Bridge from eta0 to eta in time s above a single flat barrier, emulated by
 * a ball of very large radius. Returns the weighted staying probability.
 */
MCEstimate halfspace_bridge(double eta0, double eta, double s,
                            PathConfig const& cfg);

/*!
 * Two-dimensional bridge from (0, eta) to (ell, eta_p) in time t staying
 * above the line Y = -k X, emulated by a large ball.
 */
MCEstimate line_bridge(double k, double eta, double eta_p, double ell,
                       double t, PathConfig const& cfg);

}  // namespace hk::mc
