// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file euclid.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "heatkernel/error.hpp"

namespace hk::euclid
{
namespace
{
void check_finite(std::vector<double> const& c)
{
    if (c.empty())
        fail(ErrorCode::domain, "point must have at least one coordinate");
    for (double v : c)
    {
        if (!std::isfinite(v))
            fail(ErrorCode::domain, "point coordinates must be finite");
    }
}

// Flood fill from the boundary of a grid covering the union; any free cell
// not reached lies in a bounded component of the complement.
bool has_enclosed_cavity(std::vector<Ball> const& balls, int d)
{
    if (balls.size() < 2)
        return false;
    std::vector<double> lo(d, 1e300), hi(d, -1e300);
    for (auto const& b : balls)
    {
        for (int i = 0; i < d; ++i)
        {
            lo[i] = std::min(lo[i], b.center[i] - b.radius);
            hi[i] = std::max(hi[i], b.center[i] + b.radius);
        }
    }
    long const budget = 2'000'000;
    int n = static_cast<int>(std::floor(std::pow(double(budget), 1.0 / d)));
    n = std::clamp(n, 8, 256);
    double width = 0;
    for (int i = 0; i < d; ++i)
        width = std::max(width, hi[i] - lo[i]);
    double h = width / (n - 2);
    for (int i = 0; i < d; ++i)
        lo[i] -= h;

    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= n;
    std::vector<std::uint8_t> state(total, 0);  // 0 free, 1 blocked, 2 seen
    std::vector<double> p(d);
    for (long k = 0; k < total; ++k)
    {
        long r = k;
        for (int i = 0; i < d; ++i)
        {
            p[i] = lo[i] + (r % n + 0.5) * h;
            r /= n;
        }
        for (auto const& b : balls)
        {
            double s = 0;
            for (int i = 0; i < d; ++i)
                s += (p[i] - b.center[i]) * (p[i] - b.center[i]);
            if (s <= b.radius * b.radius)
            {
                state[k] = 1;
                break;
            }
        }
    }
    std::vector<long> stack;
    auto push = [&](long k) {
        if (state[k] == 0)
        {
            state[k] = 2;
            stack.push_back(k);
        }
    };
    for (long k = 0; k < total; ++k)
    {
        long r = k;
        bool edge = false;
        for (int i = 0; i < d; ++i)
        {
            int c = r % n;
            r /= n;
            edge = edge || c == 0 || c == n - 1;
        }
        if (edge)
            push(k);
    }
    while (!stack.empty())
    {
        long k = stack.back();
        stack.pop_back();
        long stride = 1;
        for (int i = 0; i < d; ++i)
        {
            int c = (k / stride) % n;
            if (c > 0)
                push(k - stride);
            if (c < n - 1)
                push(k + stride);
            stride *= n;
        }
    }
    // Cusps between overlapping balls can strand single cells; only a cell
    // with clearance of a full cell diagonal counts as a cavity
    double clearance = h * std::sqrt(double(d));
    for (long k = 0; k < total; ++k)
    {
        if (state[k] != 0)
            continue;
        long r = k;
        for (int i = 0; i < d; ++i)
        {
            p[i] = lo[i] + (r % n + 0.5) * h;
            r /= n;
        }
        double gap = 1e300;
        for (auto const& b : balls)
        {
            double s = 0;
            for (int i = 0; i < d; ++i)
                s += (p[i] - b.center[i]) * (p[i] - b.center[i]);
            gap = std::min(gap, std::sqrt(s) - b.radius);
        }
        if (gap >= clearance)
            return true;
    }
    return false;
}
}  // namespace

//---------------------------------------------------------------------------//
PointD::PointD(std::vector<double> coords) : c_(std::move(coords))
{
    check_finite(c_);
}

PointD::PointD(std::initializer_list<double> coords) : c_(coords)
{
    check_finite(c_);
}

PointD PointD::zero(int d)
{
    return PointD(std::vector<double>(d, 0.0));
}

PointD PointD::axis(int d, int i, double value)
{
    std::vector<double> c(d, 0.0);
    c.at(i) = value;
    return PointD(std::move(c));
}

double PointD::norm2() const
{
    double s = 0;
    for (double v : c_)
        s += v * v;
    return s;
}

double PointD::norm() const
{
    return std::sqrt(this->norm2());
}

double PointD::dot(PointD const& other) const
{
    double s = 0;
    for (std::size_t i = 0; i < c_.size(); ++i)
        s += c_[i] * other.c_.at(i);
    return s;
}

PointD PointD::operator+(PointD const& other) const
{
    std::vector<double> c(c_);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] += other.c_.at(i);
    return PointD(std::move(c));
}

PointD PointD::operator-(PointD const& other) const
{
    std::vector<double> c(c_);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] -= other.c_.at(i);
    return PointD(std::move(c));
}

PointD PointD::operator*(double s) const
{
    std::vector<double> c(c_);
    for (double& v : c)
        v *= s;
    return PointD(std::move(c));
}

double distance(PointD const& a, PointD const& b)
{
    return (a - b).norm();
}

//---------------------------------------------------------------------------//
Obstacle::Obstacle(std::vector<Ball> balls) : balls_(std::move(balls))
{
    if (balls_.empty())
        fail(ErrorCode::domain, "obstacle needs at least one ball");
    dim_ = balls_.front().center.dim();
    if (dim_ < 1)
        fail(ErrorCode::domain, "ball center has no coordinates");
    for (auto const& b : balls_)
    {
        if (b.center.dim() != dim_)
            fail(ErrorCode::domain, "ball centers have mixed dimensions");
        if (!(b.radius > 0) || !std::isfinite(b.radius))
            fail(ErrorCode::domain, "ball radius must be positive");
        r_a_ = std::max(r_a_, b.center.norm() + b.radius);
    }
    if (has_enclosed_cavity(balls_, dim_))
        fail(ErrorCode::domain,
             "ball union encloses a bounded exterior component");
}

Obstacle Obstacle::ball(double a, int d)
{
    return Obstacle({Ball{PointD::zero(d), a}});
}

double Obstacle::min_radius() const
{
    double r = balls_.front().radius;
    for (auto const& b : balls_)
        r = std::min(r, b.radius);
    return r;
}

bool Obstacle::hit(PointD const& p) const
{
    for (auto const& b : balls_)
    {
        if ((p - b.center).norm2() <= b.radius * b.radius)
            return true;
    }
    return false;
}

double Obstacle::distance(PointD const& p) const
{
    double best = std::numeric_limits<double>::infinity();
    for (auto const& b : balls_)
        best = std::min(best, (p - b.center).norm() - b.radius);
    return best;
}

bool Obstacle::is_centered_ball() const
{
    return balls_.size() == 1 && balls_.front().center.norm2() == 0;
}

double Obstacle::centered_radius() const
{
    if (!this->is_centered_ball())
        fail(ErrorCode::unsupported,
             "operation requires a single origin-centered ball");
    return balls_.front().radius;
}

nlohmann::json Obstacle::to_json() const
{
    nlohmann::json balls = nlohmann::json::array();
    for (auto const& b : balls_)
    {
        balls.push_back(
            {{"center",
              std::vector<double>(b.center.coords().begin(),
                                  b.center.coords().end())},
             {"radius", b.radius}});
    }
    return {{"balls", balls}};
}

Obstacle Obstacle::from_json(nlohmann::json const& j)
{
    if (!j.is_object() || !j.contains("balls") || !j["balls"].is_array())
        fail(ErrorCode::parse, "obstacle JSON needs a \"balls\" array");
    std::vector<Ball> balls;
    for (auto const& b : j["balls"])
    {
        if (!b.contains("center") || !b.contains("radius")
            || !b["center"].is_array() || !b["radius"].is_number())
        {
            fail(ErrorCode::parse, "ball needs \"center\" and \"radius\"");
        }
        balls.push_back(
            Ball{PointD(b["center"].get<std::vector<double>>()),
                 b["radius"].get<double>()});
    }
    return Obstacle(std::move(balls));
}

Obstacle Obstacle::load(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot open obstacle file '" + path + "'");
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (nlohmann::json::exception const& e)
    {
        fail(ErrorCode::parse, std::string("obstacle file: ") + e.what());
    }
    return from_json(j);
}

//---------------------------------------------------------------------------//
Frame Frame::from_points(PointD const& x, PointD const& y)
{
    double ym = y.norm();
    require_domain(ym > 0, "frame needs y != 0");
    double x1 = -x.dot(y) / ym;
    double perp2 = 0;
    for (int i = 0; i < x.dim(); ++i)
    {
        double c = x[i] + x1 * y[i] / ym;
        perp2 += c * c;
    }
    return Frame{x.dim(), ym, x1, std::sqrt(perp2)};
}

Frame Frame::along_axis(PointD const& x, double y_mag)
{
    require_domain(y_mag > 0, "frame needs y_mag > 0");
    double s = 0;
    for (int i = 1; i < x.dim(); ++i)
        s += x[i] * x[i];
    return Frame{x.dim(), y_mag, x[0], std::sqrt(s)};
}

double Frame::x_norm() const
{
    return std::hypot(x1, xperp_norm);
}

//---------------------------------------------------------------------------//
double gauss_kernel(int d, double t, double r)
{
    require_domain(t > 0, "gauss_kernel needs t > 0");
    require_domain(r >= 0, "gauss_kernel needs r >= 0");
    require_domain(d >= 1, "gauss_kernel needs d >= 1");
    return std::pow(2 * std::numbers::pi * t, -0.5 * d)
           * std::exp(-r * r / (2 * t));
}

double log_gauss_kernel(int d, double t, double r)
{
    require_domain(t > 0, "gauss_kernel needs t > 0");
    return -0.5 * d * std::log(2 * std::numbers::pi * t) - r * r / (2 * t);
}

bool in_W(double a, Frame const& f)
{
    return f.x_norm() >= a && f.x1 > 0 && f.xperp_norm < a;
}

bool in_W(Obstacle const& obstacle, PointD const& x)
{
    double a = obstacle.centered_radius();
    if (x.dim() != obstacle.dim())
        fail(ErrorCode::domain, "point dimension differs from obstacle");
    double s = 0;
    for (int i = 1; i < x.dim(); ++i)
        s += x[i] * x[i];
    return x.norm() >= a && x[0] > 0 && std::sqrt(s) < a;
}

double rho(double x1, double y_mag)
{
    require_domain(x1 > 0, "rho needs x1 > 0");
    require_domain(y_mag > 0, "rho needs y > 0");
    return x1 / (y_mag + x1);
}

}  // namespace hk::euclid
