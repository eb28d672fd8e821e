// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bounds.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatkernel/error.hpp"
#include "heatkernel/quadrature.hpp"
#include "heatkernel/specfun.hpp"

namespace hk::bounds
{
namespace
{
constexpr double pi = std::numbers::pi;

void require_W(double a, Frame const& f)
{
    require_domain(a > 0, "radius must be positive");
    require_domain(f.x1 > 0, "point must satisfy x1 > 0");
    require_domain(f.xperp_norm <= a, "point must satisfy |x'| <= a");
    require_domain(f.x_norm() >= a * (1 - 1e-12), "point lies inside U(a)");
}

//! d-dimensional Gaussian kernel at radius r, zero when T = 0 and r > 0
double kernel(int d, double T, double r)
{
    if (T <= 0)
        return 0;
    return std::pow(2 * pi * T, -0.5 * d) * std::exp(-r * r / (2 * T));
}

double rho_t(Frame const& f, double t)
{
    return euclid::rho(f.x1, f.y_mag) * t;
}

quad::QuadOptions tight()
{
    quad::QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = 1e-11;
    o.max_evals = 400000;
    return o;
}

//! Integral over [lo, hi] split at an interior peak location
double split_integral(quad::Integrand const& f, double lo, double hi,
                      double peak)
{
    auto o = tight();
    if (peak > lo && peak < hi)
    {
        return quad::integrate(f, lo, peak, o).value
               + quad::integrate(f, peak, hi, o).value;
    }
    return quad::integrate(f, lo, hi, o).value;
}
}  // namespace

//---------------------------------------------------------------------------//
double k_upper(double a, Frame const& f)
{
    require_W(a, f);
    double b = a - f.xperp_norm;
    return f.x1 / (std::hypot(f.x1, b) + f.x1);
}

double tangent_u1(double a, Frame const& f)
{
    require_domain(a > 0, "radius must be positive");
    double h = f.xperp_norm;
    double r = f.x_norm();
    require_domain(r > a, "k_lower needs |x| > a");
    require_domain(f.x1 > 0 && h < a, "point must lie in W");
    double phi = std::atan2(h, f.x1) + std::acos(a / r);
    double t1 = a * std::cos(phi), t2 = a * std::sin(phi);
    require_domain(t2 > h, "tangent point lies below x");
    double lam = (a - h) / (t2 - h);
    return f.x1 + lam * (t1 - f.x1);
}

double k_lower(double a, Frame const& f)
{
    double u1 = tangent_u1(a, f);
    double dx = f.x1 - u1;
    return f.x1 / (dx + std::hypot(dx, a - f.xperp_norm));
}

//---------------------------------------------------------------------------//
BoundValue bound_upper_2d(double a, double t, Frame const& f,
                          Constants const& constants)
{
    require_domain(t > 0, "t must be positive");
    require_W(a, f);
    BoundValue out;
    out.constant_name = "C_upper_2d";
    out.branch = "upper";
    double b = a - f.xperp_norm;
    double rt = rho_t(f, t);
    if (b <= 0)
    {
        out.value = out.expression = 1;
        out.out_of_validity = true;
        return out;
    }
    out.expression = std::sqrt(rt) / b * std::exp(-k_upper(a, f) * b * b / rt);
    out.value = constants.get(out.constant_name) * out.expression;
    if (out.value > 1)
    {
        out.value = 1;
        out.clamped = true;
    }
    return out;
}

BoundValue bound_lower_2d(double a, double t, Frame const& f,
                          LowerVariant variant, double delta,
                          Constants const& constants)
{
    require_domain(t > 0, "t must be positive");
    require_W(a, f);
    BoundValue out;
    double b = a - f.xperp_norm;
    double rt = rho_t(f, t);
    double s = std::sqrt(rt);
    if (variant == LowerVariant::axis)
    {
        out.constant_name = "c0_lower_2d";
        out.branch = "lower-axis";
        out.out_of_validity = !(f.x1 > 2 * a && a * a < t && t < a * f.y_mag);
        out.expression = std::min(s / b, 1.0)
                         * std::exp(-b * b / (2 * rt) * (1 + 2 * a / f.x1));
    }
    else
    {
        require_domain(delta > 0, "delta must be positive");
        out.constant_name = "kappa_delta_2d";
        out.branch = "lower-general";
        out.out_of_validity = !(f.x_norm() >= a + delta * s && t > a * a
                                && b >= delta * s && f.x_norm() > a);
        if (f.x_norm() > a && b > 0)
        {
            double e = b / s + delta;
            out.expression = s / b * std::exp(-k_lower(a, f) * e * e);
        }
    }
    if (b <= 0)
    {
        out.expression = 0;
        out.out_of_validity = true;
    }
    out.value = out.out_of_validity
                    ? 0.0
                    : constants.get(out.constant_name) * out.expression;
    return out;
}

BoundValue bound_d3(double a, double t, Frame const& f, Side side,
                    Constants const& constants)
{
    require_domain(t > 0, "t must be positive");
    require_domain(f.d >= 3, "bound_d3 needs d >= 3");
    require_W(a, f);
    int const d = f.d;
    double const nu = 0.5 * d - 1;
    double const h = f.xperp_norm;
    double const b = a - h;
    double const rt = rho_t(f, t);
    double const s = std::sqrt(rt);

    BoundValue out;
    out.constant_name = side == Side::upper ? "C_upper_d3" : "c_lower_d3";
    double const c = constants.get(out.constant_name);
    if (b <= 0)
    {
        out.out_of_validity = true;
        out.value = side == Side::upper ? 1.0 : 0.0;
        return out;
    }

    double const expo = side == Side::upper
                            ? std::exp(-k_upper(a, f) * b * b / rt)
                            : std::exp(-b * b / (2 * rt) * (1 + 2 * a / f.x1));
    auto small_case = [&] {
        double base = side == Side::upper ? a / std::min(s, a) : a / s;
        return std::pow(base, d - 3) * expo;
    };
    auto large_case = [&] {
        double g = std::pow(a / h, nu) * s / b;
        if (side == Side::lower)
            g = std::min(g, 1.0);
        return g * expo;
    };
    bool small = a * h < rt;
    out.branch = std::string(side == Side::upper ? "upper" : "lower")
                 + (small ? "-small-perp" : "-large-perp");
    out.expression = small ? small_case() : large_case();
    if (std::fabs(a * h - rt) <= 1e-9 * rt && h > 0)
        out.seam_alternate = c * (small ? large_case() : small_case());
    if (side == Side::lower)
        out.out_of_validity = !(f.x1 >= 2 * a && a * a < t && t < a * f.y_mag);
    out.value = out.out_of_validity && side == Side::lower
                    ? 0.0
                    : c * out.expression;
    return out;
}

BoundPair
bound_pair(double a, double t, Frame const& f, double delta,
           Constants const& constants)
{
    BoundPair out;
    auto record = [&](BoundValue const& v) {
        out.constants_used[v.constant_name] = constants.get(v.constant_name);
    };
    if (f.d == 2)
    {
        auto up = bound_upper_2d(a, t, f, constants);
        record(up);
        out.upper = up.value;
        auto ax = bound_lower_2d(a, t, f, LowerVariant::axis, delta, constants);
        auto ge = bound_lower_2d(a, t, f, LowerVariant::general, delta,
                                 constants);
        out.lower = 0;
        if (!ax.out_of_validity)
        {
            record(ax);
            out.lower = std::max(out.lower, ax.value);
        }
        if (!ge.out_of_validity)
        {
            record(ge);
            out.lower = std::max(out.lower, ge.value);
        }
        out.out_of_validity = up.out_of_validity
                              || (ax.out_of_validity && ge.out_of_validity);
    }
    else
    {
        auto up = bound_d3(a, t, f, Side::upper, constants);
        auto lo = bound_d3(a, t, f, Side::lower, constants);
        record(up);
        out.upper = std::min(up.value, 1.0);
        out.lower = 0;
        if (!lo.out_of_validity)
        {
            record(lo);
            out.lower = lo.value;
        }
        out.out_of_validity = up.out_of_validity || lo.out_of_validity;
    }
    return out;
}

//---------------------------------------------------------------------------//
ConvolutionBound conv_bound_integral(int d, double theta, double t,
                                     double x_mag, double z_mag, double delta,
                                     Constants const& constants)
{
    require_domain(d >= 1, "d must be positive");
    require_domain(theta > 0 && theta < 1, "theta must lie in (0, 1)");
    require_domain(t > 0 && x_mag > 0 && z_mag > 0,
                   "t, x and z must be positive");
    require_domain(delta > 0, "delta must be positive");
    double const nu = 0.5 * d - 1;
    double const w = x_mag + z_mag;
    double const pt = euclid::gauss_kernel(d, t, w);

    // Product of kernels = p_t(x + z) p_T(((t-s) x - s z) / t)
    auto g = [&](double s) {
        double T = (t - s) * s / t;
        return kernel(d, T, std::fabs((t - s) * x_mag - s * z_mag) / t);
    };
    double peak = t * x_mag / w;

    ConvolutionBound out;
    out.out_of_validity = !(w * z_mag > delta * t);
    out.integral = pt * split_integral(g, theta * t, t, peak);
    out.lhs = std::pow(theta, 0.5 * d) * out.integral;
    out.expression = pt * std::pow(w / (t * z_mag), nu)
                     * std::sqrt(t / (w * z_mag));
    out.bound = constants.get("C_delta") * out.expression;
    if (z_mag <= x_mag)
        out.full_integral = pt * split_integral(g, 0, t, peak);
    return out;
}

double bessel_identity_integral(int d, double alpha, double beta)
{
    require_domain(d >= 1 && alpha > 0 && beta > 0,
                   "need d >= 1, alpha > 0, beta > 0");
    auto f = [&](double u) { return kernel(d, u, alpha * u - beta); };
    double peak = beta / alpha;
    auto o = tight();
    return quad::integrate(f, 0, peak, o).value
           + quad::integrate(f, peak, std::numeric_limits<double>::infinity(),
                             o)
                 .value;
}

double bessel_identity_closed(int d, double alpha, double beta)
{
    require_domain(d >= 1 && alpha > 0 && beta > 0,
                   "need d >= 1, alpha > 0, beta > 0");
    double nu = 0.5 * d - 1;
    return 2 * std::pow(2 * pi, -0.5 * d) * std::pow(alpha / beta, nu)
           * specfun::bessel_K_scaled(nu, alpha * beta);
}

//---------------------------------------------------------------------------//
PassageLower bridge_passage_lower(double b, double ell, double t,
                                  Passage which, double alpha, int d)
{
    require_domain(b > 0 && ell > b, "need 0 < b < ell");
    require_domain(t > 0, "t must be positive");
    require_domain(d >= 1, "d must be positive");
    double const rho1 = b / ell;
    double const k = ell / t;
    double const lo = 0.5 * rho1 * t, hi = rho1 * t;
    double const clamp = std::min(1.0, std::sqrt(b * ell / t));
    auto T = [&](double s) { return (t - s) * s / t; };
    double const peak = b / k;  // ks - b = 0

    PassageLower out;
    out.out_of_validity = rho1 > 0.5;
    switch (which)
    {
        case Passage::window: {
            auto f = [&](double s) { return kernel(1, T(s), k * s - b) * b / s; };
            out.lhs = split_integral(f, lo, hi, peak);
            out.rhs = clamp;
            out.ratio = out.lhs / out.rhs;
            break;
        }
        case Passage::window_first_passage: {
            auto f = [&](double s) {
                return t * (ell - b) / (ell * (t - s)) * b / s
                       * kernel(1, T(s), k * s - b);
            };
            double scaled = split_integral(f, lo, hi, peak);
            double q0 = specfun::first_passage_density(ell, t);
            out.lhs = scaled * q0;
            out.rhs = clamp * q0;
            out.ratio = scaled / clamp;
            break;
        }
        case Passage::weighted: {
            double nu = 0.5 * d - 1;
            auto f = [&](double s) {
                return kernel(d, T(s), k * s - b) * std::pow(s, alpha);
            };
            double scaled = split_integral(f, lo, hi, peak);
            double factor = std::pow(rho1 * t, alpha - nu)
                            * std::min(std::sqrt(t / (b * ell)), 1.0);
            double pt = euclid::gauss_kernel(d, t, ell);
            out.lhs = scaled * pt;
            out.rhs = factor * pt;
            out.ratio = scaled / factor;
            break;
        }
    }
    return out;
}

}  // namespace hk::bounds
