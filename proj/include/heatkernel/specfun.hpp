// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file heatkernel/specfun.hpp
//! Modified Bessel functions, gamma, exponential integral, and the
//! first-passage and Bessel-process kernels built on them.
//---------------------------------------------------------------------------//
#pragma once

namespace hk::specfun
{
//---------------------------------------------------------------------------//
// GAMMA
//---------------------------------------------------------------------------//
double log_gamma(double x);  //!< x > 0
double gamma(double x);  //!< x > 0

//---------------------------------------------------------------------------//
// BESSEL
//---------------------------------------------------------------------------//
//! K_nu(z) e^z
double bessel_K_scaled(double nu, double z);
//! K_nu(z); returns 0 when the result underflows
double bessel_K(double nu, double z);
//! log K_nu(z)
double log_bessel_K(double nu, double z);

//! I_nu(z) e^{-z} for nu >= 0
double bessel_I_scaled(double nu, double z);
double bessel_I(double nu, double z);

//! (2 pi)^{nu+1} / (2 y^nu K_nu(y)); +inf at y = 0 when nu = 0
double lambda_nu(double nu, double y);

//---------------------------------------------------------------------------//
// ELEMENTARY TAILS
//---------------------------------------------------------------------------//
double exp_integral_E1(double w);
//! Standard normal upper tail P[N > z]
double normal_sf(double z);

//---------------------------------------------------------------------------//
// ONE-DIMENSIONAL PASSAGE KERNELS
//---------------------------------------------------------------------------//
//! Density of the first passage time of BM from 0 to level x
double first_passage_density(double x, double t);
double q_kernel(double y, double z, double t);
double bridge_stay_positive(double eta0, double eta, double s);
double bridge_stay_above_line(double k, double eta, double eta_p, double ell,
                              double t);

//---------------------------------------------------------------------------//
// BESSEL PROCESS
//---------------------------------------------------------------------------//
double bessel_transition_density(double mu, double r, double eta, double s);

enum class TailMode
{
    exact,
    asymptotic
};

double bessel_tail(double mu, double r, double a, double s, TailMode mode);

struct BandResult
{
    double band{};  //!< Exact integral of p_s over [alpha, 2(alpha v sqrt s)]
    double reference{};  //!< 1 ^ (s/alpha) p_s(alpha)
    bool bound_holds{};  //!< band >= floor * reference
};

//! Floor measured by a scan over alpha/sqrt(s) in [1e-3, 30]; the
//! minimum ratio is 0.3321 near alpha/sqrt(s) = 0.372
inline constexpr double gaussian_band_floor = 0.33;

BandResult gaussian_tail_band(double alpha, double s,
                              double floor = gaussian_band_floor);

}  // namespace hk::specfun
