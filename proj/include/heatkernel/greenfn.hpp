// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/greenfn.hpp
//! Obstacle potentials: e_A in the plane and u_A in d >= 3.
//---------------------------------------------------------------------------//
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "heatkernel/engine.hpp"
#include "heatkernel/euclid.hpp"

namespace hk::green
{
using euclid::Obstacle;
using euclid::PointD;
using mc::MCEstimate;

//! lg(|x| / a) for the disc of radius a centered at the origin
double e_disc(double a, PointD const& x);
//! 1 - (a / |x|)^{d-2} for the ball of radius a centered at the origin
double u_ball(double a, PointD const& x);

struct PotentialValue
{
    double value{0};
    double std_error{0};
};

struct PotentialBuildOptions
{
    std::uint64_t seed{1};
    std::uint64_t n_boundary{200000};  //!< Pooled walks from the outer circle
    std::uint64_t n_node{2000};  //!< Walks per interior grid node
    std::uint64_t n_eval{20000};  //!< Walks per on-demand evaluation (d >= 3)
    int n_angles{64};
    int max_harmonic{16};
    double outer_factor{8};  //!< Outer circle radius over R_A
    double far_factor{1e4};  //!< Escape radius over R_A for the mean
    unsigned workers{1};
};

/*!
 * The potential of an obstacle: e_A for d = 2 (zero on A, ~ lg|x| at
 * infinity) or u_A for d >= 3 (probability of never hitting A).
 *
 * Analytic models need a single ball centered at the origin. Estimated
 * models in the plane store a polar table inside the outer circle and a
 * Fourier series of the boundary values there; outside it the exterior
 * harmonic extension is exact given those values. In d >= 3 estimates are
 * computed on demand by walk on spheres with exact returns from infinity.
 */
class PotentialModel
{
  public:
    enum class Kind
    {
        analytic_disc,
        mc_estimated
    };

    static PotentialModel analytic(Obstacle obstacle);
    static PotentialModel estimate(Obstacle obstacle,
                                   PotentialBuildOptions const& opts = {});
    //! Analytic when possible, estimated otherwise
    static PotentialModel make(Obstacle obstacle,
                               PotentialBuildOptions const& opts = {});

    Kind kind() const { return kind_; }
    Obstacle const& obstacle() const { return obstacle_; }
    int dim() const { return obstacle_.dim(); }

    PotentialValue eval(PointD const& x) const;
    double operator()(PointD const& x) const { return this->eval(x).value; }

    //! Fresh walk-on-spheres estimate at a single point
    PotentialValue estimate_at(PointD const& x, std::uint64_t n,
                               std::uint64_t seed) const;

    //! Mean of e_A over the circle of radius r >= R_A (d = 2)
    PotentialValue circle_mean(double r) const;

    nlohmann::json to_json() const;
    static PotentialModel from_json(nlohmann::json const& j);

  private:
    PotentialModel(Obstacle obstacle, Kind kind);

    PotentialValue outer_value(PointD const& x) const;
    PotentialValue table_value(PointD const& x) const;

    Obstacle obstacle_;
    Kind kind_;
    PotentialBuildOptions opts_;

    // Estimated planar model
    double r_outer_{0};
    double mean_ra_{0};  //!< m_{R_A}(e_A)
    double mean_ra_err_{0};
    std::vector<int> harm_k_;
    std::vector<std::complex<double>> harm_c_;
    double harm_err_{0};  //!< Pointwise stderr of the boundary series
    std::vector<double> radii_;
    std::vector<double> table_;  //!< radii x angles
    std::vector<double> table_err_;
};

//---------------------------------------------------------------------------//
struct EscapeResult
{
    double value;  //!< Central value with delta = 0
    double lower;
    double upper;
};

/*!
 * Probability of reaching the circle of radius r before A from x (d = 2),
 * with the enclosure implied by the admissible correction window.
 */
EscapeResult escape_probability(PotentialModel const& model, PointD const& x,
                                double r);

struct EAEstimate
{
    MCEstimate estimate;  //!< e_A(x) from the regression slope
    double bias_bound{0};  //!< From the correction window
    double intercept_mean{0};  //!< Implied m_{R_A}(e_A)
    double plain{0};  //!< lg(r_max / R_A) times the exit fraction at r_max
    std::vector<double> radii;
    std::vector<double> exit_fraction;
};

/*!
 * Estimate e_A(x) from exit probabilities of nested circles by regressing
 * 1 / P(r) on lg(r / R_A); the slope is 1 / e_A(x).
 */
EAEstimate estimate_eA(Obstacle const& obstacle, PointD const& x,
                       std::vector<double> const& radii, std::uint64_t n,
                       std::uint64_t seed, unsigned workers = 1);

struct RecursionResidual
{
    double residual;
    double std_error;
};

/*!
 * e_A(x) - lg(|x| / R) - (harmonic average of e_A over the circle of
 * radius R seen from x) for |x| >= R >= R_A.
 */
RecursionResidual eA_recursion_check(PotentialModel const& model,
                                     PointD const& x, double R);

}  // namespace hk::green
