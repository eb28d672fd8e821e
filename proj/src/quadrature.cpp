// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file quadrature.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "heatkernel/error.hpp"

namespace hk::quad
{
namespace
{
// Kronrod nodes on [0,1) of the symmetric rule; odd indices are Gauss nodes
constexpr double xgk[8] = {0.991455371120812639206854697526329,
                           0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926,
                           0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013,
                           0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245,
                           0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970,
                           0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518,
                           0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550,
                           0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649,
                           0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082,
                          0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975,
                          0.417959183673469387755102040816327};

struct Segment
{
    double a, b, value, err;
    bool operator<(Segment const& o) const { return err < o.err; }
};

Segment gk15(Integrand const& f, double a, double b)
{
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double rk = fc * wgk[7];
    double rg = fc * wg[3];
    for (int j = 0; j < 7; ++j)
    {
        double dx = h * xgk[j];
        double s = f(c - dx) + f(c + dx);
        rk += wgk[j] * s;
        if (j % 2 == 1)
            rg += wg[j / 2] * s;
    }
    return {a, b, rk * h, std::fabs((rk - rg) * h)};
}

QuadResult integrate_finite(Integrand const& f, double a, double b,
                            QuadOptions const& opts)
{
    QuadResult result;
    std::priority_queue<Segment> heap;
    Segment s = gk15(f, a, b);
    result.evals = 15;
    heap.push(s);
    double total = s.value;
    double err = s.err;
    auto accept = [&] {
        return err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
    };
    while (!accept())
    {
        if (result.evals + 30 > opts.max_evals)
        {
            result.flagged = true;
            break;
        }
        Segment worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
        {
            // Interval cannot be split further in floating point
            result.flagged = true;
            break;
        }
        heap.pop();
        Segment l = gk15(f, worst.a, mid);
        Segment r = gk15(f, mid, worst.b);
        result.evals += 30;
        total += l.value + r.value - worst.value;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to remove drift from incremental updates
    total = 0;
    err = 0;
    std::vector<Segment> segs;
    while (!heap.empty())
    {
        segs.push_back(heap.top());
        heap.pop();
    }
    for (auto const& seg : segs)
    {
        total += seg.value;
        err += seg.err;
    }
    result.value = total;
    result.abs_err_est = err;
    return result;
}
}  // namespace

QuadResult integrate(Integrand const& f, double a, double b, QuadOptions opts)
{
    require_domain(!std::isnan(a) && !std::isnan(b), "integration limits");
    if (a == b)
        return {};
    if (a > b)
    {
        auto r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    bool inf_a = std::isinf(a);
    bool inf_b = std::isinf(b);
    if (inf_a && inf_b)
    {
        auto l = integrate(f, a, 0.0, opts);
        auto r = integrate(f, 0.0, b, opts);
        return {l.value + r.value, l.abs_err_est + r.abs_err_est,
                l.evals + r.evals, l.flagged || r.flagged};
    }
    if (inf_b)
    {
        // x = a + (1-u)/u maps (0,1] onto [a, inf)
        auto g = [&f, a](double u) {
            if (u <= 0)
                return 0.0;
            double x = a + (1 - u) / u;
            double v = f(x) / (u * u);
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate_finite(g, 0.0, 1.0, opts);
    }
    if (inf_a)
    {
        auto g = [&f, b](double u) {
            if (u <= 0)
                return 0.0;
            double x = b - (1 - u) / u;
            double v = f(x) / (u * u);
            return std::isfinite(v) ? v : 0.0;
        };
        return integrate_finite(g, 0.0, 1.0, opts);
    }
    return integrate_finite(f, a, b, opts);
}

QuadResult integrate(Integrand const& f, double a, double b, double tol)
{
    QuadOptions opts;
    opts.abs_tol = tol;
    return integrate(f, a, b, opts);
}

QuadResult
integrate_log(Integrand const& f, double a, double b, QuadOptions opts)
{
    require_domain(a > 0 && b > a, "integrate_log needs 0 < a < b");
    auto g = [&f](double v) {
        double x = std::exp(v);
        double r = f(x) * x;
        return std::isfinite(r) ? r : 0.0;
    };
    double vb = std::isinf(b) ? std::numeric_limits<double>::infinity()
                              : std::log(b);
    return integrate(g, std::log(a), vb, opts);
}

double periodic_trapezoid(Integrand const& f, double a, double b, int n)
{
    require_domain(n > 0, "trapezoid needs n > 0");
    double h = (b - a) / n;
    double s = 0;
    for (int i = 0; i < n; ++i)
        s += f(a + i * h);
    return s * h;
}

}  // namespace hk::quad
