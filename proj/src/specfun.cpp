// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file specfun.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatkernel/error.hpp"
#include "heatkernel/euclid.hpp"
#include "heatkernel/quadrature.hpp"

namespace hk::specfun
{
double bessel_I_scaled_any(double nu, double z);

namespace
{
constexpr double pi = std::numbers::pi;
}

//---------------------------------------------------------------------------//
double exp_integral_E1(double w)
{
    require_domain(w > 0, "E1 needs w > 0");
    if (w <= 1)
    {
        double sum = 0;
        double term = 1;
        for (int k = 1; k < 100; ++k)
        {
            term *= -w / k;
            double del = -term / k;
            sum += del;
            if (std::fabs(del) < 1e-17 * std::fabs(sum))
                break;
        }
        return -std::numbers::egamma - std::log(w) + sum;
    }
    // Modified Lentz evaluation of the continued fraction
    double tiny = 1e-300;
    double b = w + 1;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i)
    {
        double an = -double(i) * i;
        b += 2;
        d = 1 / (an * d + b);
        c = b + an / c;
        double del = c * d;
        h *= del;
        if (std::fabs(del - 1) < 1e-16)
            break;
    }
    return h * std::exp(-w);
}

double normal_sf(double z)
{
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

//---------------------------------------------------------------------------//
double first_passage_density(double x, double t)
{
    require_domain(x > 0 && t > 0, "first passage needs x > 0, t > 0");
    return x / t * euclid::gauss_kernel(1, t, x);
}

double q_kernel(double y, double z, double t)
{
    return first_passage_density(y, t)
           * euclid::gauss_kernel(1, t, std::fabs(z));
}

double bridge_stay_positive(double eta0, double eta, double s)
{
    require_domain(eta0 >= 0 && eta >= 0 && s > 0,
                   "bridge_stay_positive needs eta0, eta >= 0 and s > 0");
    return -std::expm1(-2 * eta0 * eta / s);
}

double bridge_stay_above_line(double k, double eta, double eta_p, double ell,
                              double t)
{
    require_domain(k >= 0 && eta > 0 && ell > 0 && t > 0,
                   "bridge_stay_above_line needs k >= 0, eta, ell, t > 0");
    require_domain(eta_p > -k * ell, "bridge end point must lie above line");
    return -std::expm1(-2 * eta * (eta_p + k * ell) / ((1 + k * k) * t));
}

//---------------------------------------------------------------------------//
double bessel_transition_density(double mu, double r, double eta, double s)
{
    require_domain(mu > -1, "Bessel process order must exceed -1");
    require_domain(s > 0 && eta > 0 && r >= 0,
                   "Bessel density needs s, eta > 0 and r >= 0");
    if (r == 0)
    {
        double lg = (2 * mu + 1) * std::log(eta) - eta * eta / (2 * s)
                    - mu * std::log(2.0) - log_gamma(mu + 1)
                    - (mu + 1) * std::log(s);
        return std::exp(lg);
    }
    double z = r * eta / s;
    double ie = bessel_I_scaled_any(mu, z);
    double lg = mu * std::log(eta / r) + std::log(eta / s) + std::log(ie)
                - (eta - r) * (eta - r) / (2 * s);
    return std::exp(lg);
}

double bessel_tail(double mu, double r, double a, double s, TailMode mode)
{
    require_domain(mu > -1, "Bessel process order must exceed -1");
    require_domain(a > 0 && s > 0, "bessel_tail needs a, s > 0");
    require_domain(r >= 0 && r < a, "bessel_tail needs 0 <= r < a");
    if (mode == TailMode::asymptotic)
    {
        if (a * r < s)
        {
            double lg = 2 * mu * std::log(a) - (r * r + a * a) / (2 * s)
                        - mu * std::log(2.0) - log_gamma(mu + 1)
                        - mu * std::log(s);
            return std::exp(lg);
        }
        double lg = (mu + 0.5) * std::log(a / r) + 0.5 * std::log(s)
                    - (a - r) * (a - r) / (2 * s) - std::log(a - r)
                    - 0.5 * std::log(2 * pi);
        return std::exp(lg);
    }
    auto f = [=](double eta) {
        return bessel_transition_density(mu, r, eta, s);
    };
    // Truncate where the integrand drops below 1e-16 of its running peak
    double step = 0.25 * std::sqrt(s);
    double peak = f(a);
    double hi = a;
    for (int i = 0; i < 100000; ++i)
    {
        double v = f(hi + step);
        hi += step;
        peak = std::max(peak, v);
        if (v < 1e-16 * peak && hi > r + std::sqrt(s))
            break;
    }
    if (!(peak > 0))
        return 0.0;
    quad::QuadOptions opts;
    opts.abs_tol = 0;
    opts.rel_tol = 1e-11;
    return quad::integrate(f, a, hi, opts).value;
}

BandResult gaussian_tail_band(double alpha, double s, double floor)
{
    require_domain(alpha > 0 && s > 0, "gaussian_tail_band needs alpha, s > 0");
    double rs = std::sqrt(s);
    double u = alpha / rs;
    double hi = 2 * std::max(alpha, rs) / rs;
    BandResult r;
    r.band = normal_sf(u) - normal_sf(hi);
    r.reference = std::min(1.0, s / alpha * euclid::gauss_kernel(1, s, alpha));
    r.bound_holds = r.band >= floor * r.reference;
    return r;
}

}  // namespace hk::specfun
