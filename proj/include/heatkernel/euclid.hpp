// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/euclid.hpp
//! Points, Gaussian kernels, ball-union obstacles and the frame behind a
//! single ball.
//---------------------------------------------------------------------------//
#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace hk::euclid
{
//---------------------------------------------------------------------------//
/*!
 * Point in R^d with d chosen at runtime.
 *
 * Equality is exact coordinate comparison.
 */
class PointD
{
  public:
    PointD() = default;
    explicit PointD(std::vector<double> coords);
    PointD(std::initializer_list<double> coords);

    static PointD zero(int d);
    static PointD axis(int d, int i, double value = 1.0);

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[i]; }
    std::span<double const> coords() const { return c_; }

    double norm2() const;
    double norm() const;
    double dot(PointD const& other) const;

    PointD operator+(PointD const& other) const;
    PointD operator-(PointD const& other) const;
    PointD operator*(double s) const;
    bool operator==(PointD const& other) const = default;

  private:
    std::vector<double> c_;
};

double distance(PointD const& a, PointD const& b);

//---------------------------------------------------------------------------//
struct Ball
{
    PointD center;
    double radius{};
};

/*!
 * Finite union of closed balls.
 *
 * Construction rejects nonpositive radii, mixed dimensions, and unions that
 * enclose a bounded exterior component (checked by flood fill on a coarse
 * grid).
 */
class Obstacle
{
  public:
    explicit Obstacle(std::vector<Ball> balls);

    //! Ball of radius a centered at the origin of R^d
    static Obstacle ball(double a, int d = 2);

    int dim() const { return dim_; }
    std::span<Ball const> balls() const { return balls_; }
    double bounding_radius() const { return r_a_; }
    double min_radius() const;

    bool hit(PointD const& p) const;
    bool in_exterior(PointD const& p) const { return !hit(p); }
    //! Signed distance to the union (negative inside)
    double distance(PointD const& p) const;

    bool is_centered_ball() const;
    //! Radius of a single origin-centered ball; throws otherwise
    double centered_radius() const;

    nlohmann::json to_json() const;
    static Obstacle from_json(nlohmann::json const& j);
    static Obstacle load(std::string const& path);

  private:
    std::vector<Ball> balls_;
    int dim_{0};
    double r_a_{0};
};

//---------------------------------------------------------------------------//
/*!
 * Coordinates of x in the frame where y = -y_mag e.
 */
struct Frame
{
    int d{};
    double y_mag{};
    double x1{};
    double xperp_norm{};

    //! Decompose x with e = -y/|y|
    static Frame from_points(PointD const& x, PointD const& y);
    //! Decompose x with e the first coordinate axis
    static Frame along_axis(PointD const& x, double y_mag);

    double x_norm() const;
};

//---------------------------------------------------------------------------//
// FREE FUNCTIONS
//---------------------------------------------------------------------------//

//! (2 pi t)^{-d/2} exp(-r^2 / 2t)
double gauss_kernel(int d, double t, double r);
double log_gauss_kernel(int d, double t, double r);

//! Membership in the region behind a ball, with e the first axis
bool in_W(Obstacle const& obstacle, PointD const& x);
bool in_W(double a, Frame const& f);

double rho(double x1, double y_mag);

}  // namespace hk::euclid
