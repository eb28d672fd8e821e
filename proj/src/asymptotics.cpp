// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file asymptotics.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "heatkernel/error.hpp"
#include "heatkernel/specfun.hpp"

namespace hk::asym
{
namespace
{
constexpr double pi = std::numbers::pi;

void require_exterior(Obstacle const& ob, PointD const& p)
{
    if (p.dim() != ob.dim())
        fail(ErrorCode::domain, "point dimension differs from obstacle");
    if (ob.distance(p) < 0)
        fail(ErrorCode::domain, "point lies inside the obstacle");
}

//! Order so that |x| <= |y|, ties broken by coordinates
std::pair<PointD, PointD> ordered(PointD const& x, PointD const& y)
{
    double nx = x.norm(), ny = y.norm();
    if (nx < ny)
        return {x, y};
    if (ny < nx)
        return {y, x};
    auto cx = x.coords(), cy = y.coords();
    if (std::lexicographical_compare(cy.begin(), cy.end(), cx.begin(),
                                     cx.end()))
    {
        return {y, x};
    }
    return {x, y};
}

double log_t(double t)
{
    require_domain(t > 1, "formula needs t > 1 (lg t > 0)");
    return std::log(t);
}

RegimeLabel label(Regime r)
{
    RegimeLabel l;
    l.tag = r;
    return l;
}
}  // namespace

//---------------------------------------------------------------------------//
char const* to_cstring(Regime r)
{
    switch (r)
    {
        case Regime::parabolic:
            return "parabolic";
        case Regime::intermediate:
            return "intermediate";
        case Regime::far:
            return "far";
        case Regime::ballistic:
            return "ballistic";
        case Regime::superballistic_W:
            return "superballistic-W";
        case Regime::superballistic_offW:
            return "superballistic-offW";
        case Regime::unclassified:
            return "unclassified";
    }
    return "unclassified";
}

RegimeLabel classify_regime(Obstacle const& obstacle, double t,
                            PointD const& x, PointD const& y, double M,
                            double epsilon)
{
    require_domain(t > 0, "t must be positive");
    require_domain(M >= 1, "M must be at least 1");
    require_domain(epsilon > 0, "epsilon must be positive");
    require_exterior(obstacle, x);
    require_exterior(obstacle, y);
    auto [p, q] = ordered(x, y);
    double xm = p.norm(), ym = q.norm();

    RegimeLabel out;
    out.M = M;
    out.epsilon = epsilon;
    if (ym >= M * t)
    {
        auto f = euclid::Frame::from_points(p, q);
        out.tag = euclid::in_W(obstacle.bounding_radius(), f)
                      ? Regime::superballistic_W
                      : Regime::superballistic_offW;
    }
    else if (ym <= M * std::sqrt(t))
        out.tag = Regime::parabolic;
    else if (xm < M && ym / t > epsilon)
        out.tag = Regime::ballistic;
    else if (xm * ym >= t / M)
        out.tag = Regime::far;
    else if (ym > std::sqrt(t) && xm * ym <= M * t)
        out.tag = Regime::intermediate;
    else
        out.tag = Regime::unclassified;
    return out;
}

nlohmann::json AsymptoticResult::to_json() const
{
    nlohmann::json j;
    j["value"] = value;
    j["regime"] = to_cstring(regime.tag);
    j["error_tag"] = error_tag;
    j["anchor"] = anchor;
    j["out_of_validity"] = out_of_validity;
    j["err_star"] = err_star;
    j["is_envelope"] = is_envelope;
    if (is_envelope)
    {
        j["lower"] = lower;
        j["upper"] = upper;
    }
    if (!diagnostics.empty())
        j["diagnostics"] = diagnostics;
    return j;
}

//---------------------------------------------------------------------------//
double err_star(Obstacle const& obstacle, PointD const& x, double t,
                Constants const& constants)
{
    double ra = obstacle.bounding_radius();
    if (x.norm() >= 2 * ra)
        return 0;
    if (t <= std::exp(1.0))
        return 1;
    double lam = constants.get("lambda_err");
    return std::exp(-lam * t / (ra * ra * std::log(t)));
}

AsymptoticResult ratio_parabolic(PotentialModel const& model, double t,
                                 PointD const& x, PointD const& y,
                                 Constants const& constants)
{
    if (model.dim() != 2)
        fail(ErrorCode::unsupported, "parabolic formula needs d = 2");
    double lg = log_t(t);
    auto ex = model.eval(x), ey = model.eval(y);
    AsymptoticResult r;
    r.regime = label(Regime::parabolic);
    r.value = 4 * ex.value * ey.value / (lg * lg);
    r.error_tag = "O(lglg t/lg t) + err_*";
    r.anchor = "parabolic product law";
    r.out_of_validity = r.value > 1;
    r.err_star = err_star(model.obstacle(), x, t, constants)
                 + err_star(model.obstacle(), y, t, constants);
    r.diagnostics["e_A_x"] = ex.value;
    r.diagnostics["e_A_y"] = ey.value;
    if (ex.std_error > 0 || ey.std_error > 0)
    {
        r.diagnostics["value_stderr"]
            = 4 / (lg * lg)
              * std::hypot(ex.std_error * ey.value, ey.std_error * ex.value);
    }
    return r;
}

AsymptoticResult ratio_intermediate(PotentialModel const& model, double t,
                                    PointD const& x, PointD const& y,
                                    Validity const& validity)
{
    if (model.dim() != 2)
        fail(ErrorCode::unsupported, "intermediate formula needs d = 2");
    require_domain(t > 0, "t must be positive");
    auto [p, q] = ordered(x, y);
    double ym = q.norm();
    AsymptoticResult r;
    r.regime = label(Regime::intermediate);
    r.error_tag = "o(1) as y/t->0";
    r.anchor = "intermediate escape law";
    double lg = std::log(t / ym);
    double e = model(p);
    r.diagnostics["e_A_x"] = e;
    if (!(lg > 0))
    {
        r.value = 1;
        r.out_of_validity = true;
        return r;
    }
    r.value = e / lg;
    r.out_of_validity = r.value > 1 || ym / t > validity.max_speed
                        || ym <= std::sqrt(t);
    return r;
}

AsymptoticResult ratio_far(Obstacle const& obstacle, double t,
                           PointD const& x, PointD const& y,
                           Validity const& validity)
{
    require_domain(t > 0, "t must be positive");
    AsymptoticResult r;
    r.regime = label(Regime::far);
    r.value = 1;
    r.error_tag = "o(1) as x^y->inf";
    r.anchor = "far-field limit";
    double lo = std::min(x.norm(), y.norm());
    r.out_of_validity = lo < validity.floor_factor * obstacle.bounding_radius();
    return r;
}

AsymptoticResult ratio_d3(PotentialModel const& model, double t,
                          PointD const& x, PointD const& y, double M,
                          Validity const& validity)
{
    if (model.dim() < 3)
        fail(ErrorCode::unsupported, "u_A product needs d >= 3");
    require_domain(t > 0, "t must be positive");
    auto ux = model.eval(x), uy = model.eval(y);
    AsymptoticResult r;
    r.regime = label(Regime::parabolic);
    r.value = ux.value * uy.value;
    r.error_tag = "o(1)";
    r.anchor = "u_A product law";
    double big = std::max(x.norm(), y.norm());
    bool slow = big / t <= validity.max_speed;
    bool linear = big > t / M && big < M * t;
    r.out_of_validity = !(slow || linear) || r.value > 1;
    r.diagnostics["u_A_x"] = ux.value;
    r.diagnostics["u_A_y"] = uy.value;
    if (ux.std_error > 0 || uy.std_error > 0)
    {
        r.diagnostics["value_stderr"] = std::hypot(ux.std_error * uy.value,
                                                   uy.std_error * ux.value);
    }
    return r;
}

//---------------------------------------------------------------------------//
AsymptoticResult
hitting_time_density_asymp(double a, int d, double x_mag, double t)
{
    require_domain(a > 0, "radius must be positive");
    require_domain(d >= 2, "d must be at least 2");
    require_domain(x_mag > a, "start must lie outside the ball");
    require_domain(t > 0, "t must be positive");
    AsymptoticResult r;
    r.regime = label(Regime::unclassified);
    r.error_tag = "relative o(1) as t->inf";
    r.anchor = "hitting-time density of a ball";
    double pt = euclid::gauss_kernel(d, t, x_mag);
    double nu = 0.5 * d - 1;
    // p_t(x) Lambda_nu(a x / t) in log space; both factors can overflow
    double yv = a * x_mag / t;
    double log_far = euclid::log_gauss_kernel(d, t, x_mag)
                     + (nu + 1) * std::log(2 * pi) - std::log(2.0)
                     - nu * std::log(yv) - specfun::log_bessel_K(nu, yv);
    if (d >= 3)
    {
        r.value = std::pow(a, 2 * nu) * std::exp(log_far)
                  * (1 - std::pow(a / x_mag, 2 * nu));
        return r;
    }
    double far = std::exp(log_far);
    double near = std::numeric_limits<double>::quiet_NaN();
    if (t > 1)
    {
        double lg = std::log(t);
        near = pt * 4 * pi * std::log(x_mag / a) / (lg * lg);
    }
    bool small = x_mag <= std::sqrt(t);
    r.value = small ? near : far;
    r.out_of_validity = !(t > 1);
    if (r.out_of_validity)
        r.value = far;
    r.diagnostics["small_x_branch"] = near;
    r.diagnostics["large_x_branch"] = far;
    r.diagnostics["branch_ratio"] = near / far;
    return r;
}

AsymptoticResult survival_2d(PotentialModel const& model, PointD const& x,
                             double t, SurvivalBranch branch)
{
    if (model.dim() != 2)
        fail(ErrorCode::unsupported, "survival law needs d = 2");
    require_domain(t > 0, "t must be positive");
    double xm = x.norm();
    AsymptoticResult r;
    r.regime = label(Regime::unclassified);
    if (branch == SurvivalBranch::small_x)
    {
        double lg = log_t(t);
        auto e = model.eval(x);
        r.value = 2 * e.value / lg;
        r.error_tag = "O(1/lg t)";
        r.anchor = "survival, small start";
        r.out_of_validity = xm > std::sqrt(t) || r.value > 1;
        r.diagnostics["quantity"] = "survival";
        if (e.std_error > 0)
            r.diagnostics["value_stderr"] = 2 * e.std_error / lg;
        return r;
    }
    double lg = std::log(t / xm);
    r.error_tag = "o(1)";
    r.anchor = "hitting probability, large start";
    r.diagnostics["quantity"] = "hitting";
    if (!(lg > 0))
    {
        r.value = 1;
        r.out_of_validity = true;
        return r;
    }
    r.value = specfun::exp_integral_E1(xm * xm / (2 * t)) / (2 * lg);
    r.out_of_validity = !(t > 1 && xm >= std::sqrt(t / std::log(t)))
                        || r.value > 1;
    return r;
}

//---------------------------------------------------------------------------//
BallisticResult ballistic_cstar(Obstacle const& obstacle, PointD const& x,
                                PointD const& v,
                                mc::LambdaMeasure const& lambda)
{
    require_exterior(obstacle, x);
    if (v.dim() != x.dim())
        fail(ErrorCode::domain, "velocity dimension differs from x");
    double vm = v.norm();
    require_domain(vm > 0, "velocity must be nonzero");
    double nu = 0.5 * x.dim() - 1;
    double pre = std::exp(-v.dot(x)) / specfun::bessel_K(nu, vm);
    double sum = 0, var = 0;
    for (auto const& atom : lambda.atoms)
    {
        double r = euclid::distance(x, atom.where);
        require_domain(r > 0, "x coincides with a boundary atom");
        double f = specfun::bessel_K(nu, vm * r) / std::pow(r, nu);
        sum += atom.weight * f;
        var += std::pow(atom.std_error * f, 2);
    }
    BallisticResult out;
    out.c_star = pre * sum;
    out.c_A = 1 - out.c_star;
    out.std_error = pre * std::sqrt(var);
    return out;
}

//---------------------------------------------------------------------------//
AsymptoticResult density_full(PotentialModel const& model, double t,
                              PointD const& x, PointD const& y,
                              Constants const& constants,
                              DensityOptions const& opts)
{
    Obstacle const& ob = model.obstacle();
    RegimeLabel lab = classify_regime(ob, t, x, y, opts.M, opts.epsilon);
    auto [p, q] = ordered(x, y);
    int const d = ob.dim();
    double const pt = euclid::gauss_kernel(d, t, euclid::distance(p, q));

    AsymptoticResult r;
    auto envelope = [&](double lo, double hi, bool flagged) {
        r.is_envelope = true;
        r.lower = lo * pt;
        r.upper = hi * pt;
        r.value = std::sqrt(lo * hi) * pt;
        r.out_of_validity = flagged;
    };

    switch (lab.tag)
    {
        case Regime::parabolic:
        case Regime::intermediate:
        case Regime::far:
            if (d >= 3)
                r = ratio_d3(model, t, p, q, opts.M, opts.validity);
            else if (lab.tag == Regime::parabolic)
                r = ratio_parabolic(model, t, p, q, constants);
            else if (lab.tag == Regime::intermediate)
                r = ratio_intermediate(model, t, p, q, opts.validity);
            else
                r = ratio_far(ob, t, p, q, opts.validity);
            r.diagnostics["ratio"] = r.value;
            r.value *= pt;
            break;
        case Regime::superballistic_W: {
            auto f = euclid::Frame::from_points(p, q);
            auto bp = bounds::bound_pair(ob.bounding_radius(), t, f,
                                         opts.delta, constants);
            double hi = ob.is_centered_ball() ? bp.upper : 1.0;
            envelope(bp.lower, hi, bp.out_of_validity);
            r.error_tag = "two-sided bound";
            r.anchor = "bounds behind a ball";
            r.diagnostics["constants_used"] = bp.constants_used;
            break;
        }
        case Regime::superballistic_offW: {
            double c = constants.get("c_offW");
            double a = ob.bounding_radius();
            bool ok = p.norm() > 1.5 * a && t > a * a;
            envelope(ok ? c : 0.0, 1.0, !ok);
            r.error_tag = "two-sided bound";
            r.anchor = "comparability outside the shadow";
            r.diagnostics["constants_used"] = {{"c_offW", c}};
            break;
        }
        case Regime::ballistic:
        case Regime::unclassified:
            envelope(0, 1, true);
            r.error_tag = "trivial bound";
            r.anchor = lab.tag == Regime::ballistic
                           ? "ballistic window (needs a hitting measure)"
                           : "none";
            break;
    }
    r.regime = lab;
    return r;
}

}  // namespace hk::asym
