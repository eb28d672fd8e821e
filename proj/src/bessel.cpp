// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bessel.cpp
//! Gamma and modified Bessel functions.
//---------------------------------------------------------------------------//
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatkernel/error.hpp"
#include "heatkernel/quadrature.hpp"
#include "heatkernel/specfun.hpp"

namespace hk::specfun
{
namespace
{
constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

// Lanczos approximation with g = 7, n = 9
constexpr double lanczos_g = 7.0;
constexpr double lanczos_c[9] = {0.99999999999980993,
                                 676.5203681218851,
                                 -1259.1392167224028,
                                 771.32342877765313,
                                 -176.61502916214059,
                                 12.507343278686905,
                                 -0.13857109526572012,
                                 9.9843695780195716e-6,
                                 1.5056327351493116e-7};

// Taylor coefficients of 1/Gamma(1+x) about x = 0
constexpr double rgamma_c[28] = {1.0,
                                 0.57721566490153286061,
                                 -0.65587807152025388108,
                                 -0.042002635034095235529,
                                 0.1665386113822914895,
                                 -0.042197734555544336748,
                                 -0.0096219715278769735621,
                                 0.0072189432466630995424,
                                 -0.0011651675918590651121,
                                 -0.00021524167411495097282,
                                 0.00012805028238811618615,
                                 -0.000020134854780788238656,
                                 -1.2504934821426706573e-6,
                                 1.1330272319816958824e-6,
                                 -2.0563384169776071035e-7,
                                 6.1160951044814158179e-9,
                                 5.0020076444692229301e-9,
                                 -1.1812745704870201446e-9,
                                 1.0434267116911005105e-10,
                                 7.782263439905071254e-12,
                                 -3.6968056186422057082e-12,
                                 5.100370287454475979e-13,
                                 -2.0583260535665067832e-14,
                                 -5.3481225394230179824e-15,
                                 1.2267786282382607902e-15,
                                 -1.1812593016974587695e-16,
                                 1.1866922547516003326e-18,
                                 1.4123806553180317816e-18};

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu))/2
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl,
                  double& gammi)
{
    double odd = 0, even = 0;
    double p = 1;  // mu^{2j}
    for (int k = 0; k < 28; k += 2)
    {
        even += rgamma_c[k] * p;
        odd += rgamma_c[k + 1] * p;
        p *= mu * mu;
    }
    gam1 = -odd;
    gam2 = even;
    gampl = even + mu * odd;  // 1/G(1+mu)
    gammi = even - mu * odd;  // 1/G(1-mu)
}

// K_nu(x) for x <= 2 by Temme's series plus forward recurrence
double bessel_K_temme(double nu, double x)
{
    int nl = static_cast<int>(nu + 0.5);
    double xmu = nu - nl;
    double xmu2 = xmu * xmu;
    double xi = 1.0 / x;
    double xi2 = 2.0 * xi;
    double x2 = 0.5 * x;
    double pimu = pi * xmu;
    double fact = (std::fabs(pimu) < eps ? 1.0 : pimu / std::sin(pimu));
    double d = -std::log(x2);
    double e = xmu * d;
    double fact2 = (std::fabs(e) < eps ? 1.0 : std::sinh(e) / e);
    double gam1, gam2, gampl, gammi;
    temme_gammas(xmu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i < 500; ++i)
    {
        ff = (i * ff + p + q) / (i * i - xmu2);
        c *= d / i;
        p /= (i - xmu);
        q /= (i + xmu);
        double del = c * ff;
        sum += del;
        double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::fabs(del) < std::fabs(sum) * eps)
            break;
    }
    double rkmu = sum;
    double rk1 = sum1 * xi2;
    for (int i = 1; i <= nl; ++i)
    {
        double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    return rkmu;
}

// K_nu(z) e^z from the integral of exp(-z (cosh u - 1)) cosh(nu u)
double bessel_K_scaled_quad(double nu, double z)
{
    auto logf = [nu, z](double u) {
        return nu * u - z * (std::cosh(u) - 1);
    };
    double ustar = std::asinh(nu / z);
    double peak = logf(ustar);
    double umax = ustar + 1;
    while (logf(umax) > peak - 40)
        umax = ustar + 2 * (umax - ustar);
    auto f = [nu, z](double u) {
        double w = z * (std::cosh(u) - 1);
        return 0.5 * (std::exp(nu * u - w) + std::exp(-nu * u - w));
    };
    quad::QuadOptions opts;
    opts.abs_tol = 0;
    opts.rel_tol = 1e-14;
    opts.max_evals = 20000;
    return quad::integrate(f, 0.0, umax, opts).value;
}

// Hankel expansion sum_k a_k(nu) (sign)^k / z^k
double hankel_series(double nu, double z, double sign)
{
    double mu4 = 4 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k)
    {
        double odd = 2 * k - 1;
        double next = term * (mu4 - odd * odd) / (8.0 * k * z) * sign;
        if (std::fabs(next) >= prev)
            break;
        prev = std::fabs(next);
        term = next;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum))
            break;
    }
    return sum;
}

double log_gamma_pos(double x)
{
    if (x < 0.5)
    {
        return std::log(pi / std::fabs(std::sin(pi * x)))
               - log_gamma_pos(1 - x);
    }
    x -= 1;
    double a = lanczos_c[0];
    double t = x + lanczos_g + 0.5;
    for (int i = 1; i < 9; ++i)
        a += lanczos_c[i] / (x + i);
    return 0.5 * std::log(2 * pi) + (x + 0.5) * std::log(t) - t
           + std::log(a);
}
}  // namespace

//---------------------------------------------------------------------------//
double log_gamma(double x)
{
    require_domain(x > 0, "log_gamma needs x > 0");
    return log_gamma_pos(x);
}

double gamma(double x)
{
    require_domain(x > 0, "gamma needs x > 0");
    if (x < 0.5)
        return pi / (std::sin(pi * x) * gamma(1 - x));
    x -= 1;
    double a = lanczos_c[0];
    double t = x + lanczos_g + 0.5;
    for (int i = 1; i < 9; ++i)
        a += lanczos_c[i] / (x + i);
    return std::sqrt(2 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

//---------------------------------------------------------------------------//
double bessel_K_scaled(double nu, double z)
{
    require_domain(z > 0, "bessel_K needs z > 0");
    require_domain(std::isfinite(nu), "bessel_K needs finite order");
    nu = std::fabs(nu);
    if (z <= 2)
        return bessel_K_temme(nu, z) * std::exp(z);
    if (z < std::max(30.0, nu * nu))
        return bessel_K_scaled_quad(nu, z);
    return std::sqrt(pi / (2 * z)) * hankel_series(nu, z, 1.0);
}

double bessel_K(double nu, double z)
{
    return bessel_K_scaled(nu, z) * std::exp(-z);
}

double log_bessel_K(double nu, double z)
{
    return std::log(bessel_K_scaled(nu, z)) - z;
}

// Internal entry point also used for orders in (-1, 0)
double bessel_I_scaled_any(double nu, double z)
{
    require_domain(z >= 0, "bessel_I needs z >= 0");
    require_domain(nu > -1, "bessel_I needs nu > -1");
    if (z == 0)
    {
        if (nu == 0)
            return 1.0;
        return nu > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (z >= std::max(30.0, 2 * nu * nu))
        return hankel_series(nu, z, -1.0) / std::sqrt(2 * pi * z);
    // Power series with all-positive terms, accumulated in log space
    double lt = nu * std::log(0.5 * z) - z - log_gamma_pos(nu + 1);
    double lq = 2 * std::log(0.5 * z);
    double sum = 0;
    for (int k = 0; k < 100000; ++k)
    {
        if (k > 0)
            lt += lq - std::log(k * (nu + k));
        double t = std::exp(lt);
        sum += t;
        if (k > 0.5 * z && t < 1e-17 * sum)
            break;
    }
    return sum;
}

double bessel_I_scaled(double nu, double z)
{
    if (nu < 0)
        fail(ErrorCode::unsupported, "bessel_I order must be >= 0");
    return bessel_I_scaled_any(nu, z);
}

double bessel_I(double nu, double z)
{
    double s = bessel_I_scaled(nu, z);
    return z > 700 ? std::exp(std::log(s) + z) : s * std::exp(z);
}

double lambda_nu(double nu, double y)
{
    require_domain(nu >= 0, "lambda_nu needs nu >= 0");
    require_domain(y >= 0, "lambda_nu needs y >= 0");
    if (y == 0)
    {
        if (nu == 0)
            return std::numeric_limits<double>::infinity();
        // y^nu K_nu(y) -> 2^{nu-1} Gamma(nu)
        return std::exp((nu + 1) * std::log(2 * pi) - nu * std::log(2.0)
                        - log_gamma(nu));
    }
    double lg = (nu + 1) * std::log(2 * pi) - std::log(2.0)
                - nu * std::log(y) - log_bessel_K(nu, y);
    return std::exp(lg);
}

}  // namespace hk::specfun
