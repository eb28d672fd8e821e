// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file commands.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <variant>

#include "heatkernel/asymptotics.hpp"
#include "heatkernel/bounds.hpp"
#include "heatkernel/constants.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/greenfn.hpp"
#include "heatkernel/montecarlo.hpp"

namespace hk::cmd
{
namespace
{
using json = nlohmann::json;
using euclid::PointD;
using verify::GridPoint;

class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

[[noreturn]] void usage(std::string const& what)
{
    throw UsageError(what);
}

//---------------------------------------------------------------------------//
// TABLES
//---------------------------------------------------------------------------//
using Cell = std::variant<double, std::int64_t, std::string>;

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }

    std::string to_csv() const
    {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i)
            out += (i ? "," : "") + csv_field(columns[i]);
        out += "\n";
        for (auto const& r : rows)
        {
            for (std::size_t i = 0; i < r.size(); ++i)
            {
                if (i)
                    out += ",";
                std::visit(
                    [&](auto const& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            out += format_double(v);
                        else if constexpr (std::is_same_v<T, std::int64_t>)
                            out += std::to_string(v);
                        else
                            out += csv_field(v);
                    },
                    r[i]);
            }
            out += "\n";
        }
        return out;
    }

    json to_json() const
    {
        json arr = json::array();
        for (auto const& r : rows)
        {
            json o = json::object();
            for (std::size_t i = 0; i < r.size(); ++i)
            {
                std::visit(
                    [&](auto const& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            o[columns[i]] = std::isfinite(v) ? json(v) : json();
                        else
                            o[columns[i]] = v;
                    },
                    r[i]);
            }
            arr.push_back(o);
        }
        return arr;
    }
};

std::string render(Table const& t, std::string const& format)
{
    return format == "json" ? t.to_json().dump(2) + "\n" : t.to_csv();
}

void point_columns(Table& t, int d)
{
    t.columns.push_back("t");
    for (char const* p : {"x", "y"})
    {
        for (int i = 0; i < d; ++i)
            t.columns.push_back(p + std::to_string(i));
    }
}

std::vector<Cell> point_cells(GridPoint const& g)
{
    std::vector<Cell> r{g.t};
    for (double v : g.x.coords())
        r.emplace_back(v);
    for (double v : g.y.coords())
        r.emplace_back(v);
    return r;
}

//---------------------------------------------------------------------------//
// GRID EXPANSION
//---------------------------------------------------------------------------//
std::vector<double> expand_times(json const& t)
{
    if (t.is_number())
        return {t.get<double>()};
    if (t.is_array())
        return t.get<std::vector<double>>();
    if (t.is_object() && t.size() == 1)
    {
        auto const& [kind, spec] = *t.items().begin();
        if (!spec.is_array() || spec.size() != 3)
            usage("range '" + kind + "' needs [lo, hi, n]");
        double lo = spec[0].get<double>(), hi = spec[1].get<double>();
        int n = spec[2].get<int>();
        if (n < 1)
            usage("range needs n >= 1");
        std::vector<double> out;
        for (int i = 0; i < n; ++i)
        {
            double f = n == 1 ? 0.0 : double(i) / (n - 1);
            if (kind == "lin")
                out.push_back(lo + f * (hi - lo));
            else if (kind == "geom")
                out.push_back(std::pow(
                    10.0, std::log10(lo)
                              + f * (std::log10(hi) - std::log10(lo))));
            else if (kind == "exp")
                out.push_back(std::exp(lo + f * (hi - lo)));
            else
                usage("unknown range kind '" + kind + "'");
        }
        return out;
    }
    usage("grid field \"t\" must be a number, list, or range");
}

PointD make_point(json const& p, double t, int dim)
{
    std::vector<double> c;
    if (p.is_array())
    {
        c = p.get<std::vector<double>>();
    }
    else if (p.is_object() && p.contains("sqrt_t"))
    {
        double s = p["sqrt_t"].get<double>() * std::sqrt(t);
        std::vector<double> dir(dim, 0.0);
        dir[0] = 1;
        if (p.contains("dir"))
            dir = p["dir"].get<std::vector<double>>();
        double n = std::sqrt(std::inner_product(dir.begin(), dir.end(),
                                                dir.begin(), 0.0));
        if (!(n > 0))
            usage("point direction must be nonzero");
        for (double v : dir)
            c.push_back(s * v / n);
    }
    else
    {
        usage("a point must be a coordinate list or {\"sqrt_t\", \"dir\"}");
    }
    if (static_cast<int>(c.size()) != dim)
        usage("point dimension " + std::to_string(c.size())
              + " differs from obstacle dimension " + std::to_string(dim));
    return PointD(std::move(c));
}

//---------------------------------------------------------------------------//
// COMMANDS
//---------------------------------------------------------------------------//
Constants load_constants(RunSpec const& spec)
{
    if (!spec.constants_path.empty())
        return Constants::load(spec.constants_path);
    return Constants::from_environment();
}

green::PotentialModel load_model(RunSpec const& spec)
{
    if (spec.options.contains("potential"))
    {
        auto path = spec.options["potential"].get<std::string>();
        std::ifstream in(path);
        if (!in)
            fail(ErrorCode::io, "cannot read potential table '" + path + "'");
        json j;
        in >> j;
        return green::PotentialModel::from_json(j);
    }
    green::PotentialBuildOptions opts;
    opts.seed = spec.cfg.seed;
    opts.workers = spec.cfg.workers;
    return green::PotentialModel::make(spec.obstacle, opts);
}

asym::DensityOptions density_options(json const& o)
{
    asym::DensityOptions d;
    d.M = o.value("M", d.M);
    d.epsilon = o.value("epsilon", d.epsilon);
    d.delta = o.value("delta", d.delta);
    d.validity.floor_factor = o.value("floor_factor", d.validity.floor_factor);
    d.validity.max_speed = o.value("max_speed", d.validity.max_speed);
    return d;
}

CommandResult cmd_density(RunSpec const& spec)
{
    int d = spec.obstacle.dim();
    auto grid = expand_grid(spec.grid, d);
    auto model = load_model(spec);
    auto constants = load_constants(spec);
    auto opts = density_options(spec.options);
    Table t;
    point_columns(t, d);
    for (char const* c : {"regime", "value", "lower", "upper", "err_star",
                          "error_tag", "anchor", "flag"})
        t.columns.push_back(c);
    for (auto const& g : grid)
    {
        auto r = asym::density_full(model, g.t, g.x, g.y, constants, opts);
        auto row = point_cells(g);
        row.emplace_back(std::string(asym::to_cstring(r.regime.tag)));
        row.emplace_back(r.value);
        row.emplace_back(r.lower);
        row.emplace_back(r.upper);
        row.emplace_back(r.err_star);
        row.emplace_back(r.error_tag);
        row.emplace_back(r.anchor);
        row.emplace_back(std::int64_t{r.out_of_validity});
        t.add(std::move(row));
    }
    return {0, render(t, spec.format), ""};
}

CommandResult cmd_bounds(RunSpec const& spec)
{
    int d = spec.obstacle.dim();
    auto grid = expand_grid(spec.grid, d);
    auto constants = load_constants(spec);
    double a = spec.obstacle.bounding_radius();
    double delta = spec.options.value("delta", default_bound_delta);
    Table t;
    point_columns(t, d);
    for (char const* c : {"in_W", "x_axial", "x_perp", "rho_t", "k", "k_star",
                          "lower", "upper", "flag"})
        t.columns.push_back(c);
    double const nan = std::numeric_limits<double>::quiet_NaN();
    for (auto const& g : grid)
    {
        auto f = euclid::Frame::from_points(g.x, g.y);
        bool w = euclid::in_W(a, f);
        auto row = point_cells(g);
        row.emplace_back(std::int64_t{w});
        row.emplace_back(f.x1);
        row.emplace_back(f.xperp_norm);
        row.emplace_back(w ? euclid::rho(f.x1, f.y_mag) * g.t : nan);
        if (w)
        {
            auto bp = bounds::bound_pair(a, g.t, f, delta, constants);
            row.emplace_back(bounds::k_upper(a, f));
            double ks = nan;
            if (f.x_norm() > a)
                ks = bounds::k_lower(a, f);
            row.emplace_back(ks);
            row.emplace_back(bp.lower);
            row.emplace_back(bp.upper);
            row.emplace_back(std::int64_t{bp.out_of_validity});
        }
        else
        {
            for (int i = 0; i < 4; ++i)
                row.emplace_back(nan);
            row.emplace_back(std::int64_t{1});
        }
        t.add(std::move(row));
    }
    return {0, render(t, spec.format), ""};
}

CommandResult cmd_simulate(RunSpec const& spec)
{
    int d = spec.obstacle.dim();
    auto grid = expand_grid(spec.grid, d);
    auto est = spec.options.value("estimator", std::string("bridge"));
    if (est != "bridge" && est != "survival")
        usage("estimator must be bridge or survival");
    Table t;
    point_columns(t, d);
    for (char const* c : {"estimator", "mean", "stderr", "n", "seed",
                          "density", "density_stderr"})
        t.columns.push_back(c);
    std::uint64_t k = 0;
    for (auto const& g : grid)
    {
        auto cfg = spec.cfg;
        cfg.seed = mc::mix64(spec.cfg.seed + k++);
        mc::MCEstimate e;
        double p = std::numeric_limits<double>::quiet_NaN();
        if (est == "bridge")
        {
            e = mc::bridge_avoidance(spec.obstacle, g.x, g.y, g.t, cfg);
            p = euclid::gauss_kernel(d, g.t, euclid::distance(g.x, g.y));
        }
        else
        {
            e = mc::survival_probability(spec.obstacle, g.x, g.t, cfg);
        }
        auto row = point_cells(g);
        row.emplace_back(est);
        row.emplace_back(e.mean);
        row.emplace_back(e.std_error);
        row.emplace_back(static_cast<std::int64_t>(e.n));
        row.emplace_back(static_cast<std::int64_t>(cfg.seed));
        row.emplace_back(e.mean * p);
        row.emplace_back(e.std_error * p);
        t.add(std::move(row));
    }
    return {0, render(t, spec.format), ""};
}

CommandResult cmd_table(RunSpec const& spec)
{
    int d = spec.obstacle.dim();
    auto grid = expand_grid(spec.grid, d);
    if (grid.size() < 2)
        usage("table needs at least two grid points");
    std::stable_sort(grid.begin(), grid.end(),
                     [](GridPoint const& a, GridPoint const& b) {
                         return a.t < b.t;
                     });
    auto model = load_model(spec);
    auto constants = load_constants(spec);
    auto opts = density_options(spec.options);
    Table t;
    point_columns(t, d);
    for (char const* c : {"regime", "formula_ratio", "mc_ratio", "stderr",
                          "ratio", "abs_deviation", "flag"})
        t.columns.push_back(c);
    std::vector<double> ts, devs;
    std::uint64_t k = 0;
    for (auto const& g : grid)
    {
        auto r = asym::density_full(model, g.t, g.x, g.y, constants, opts);
        double p = euclid::gauss_kernel(d, g.t, euclid::distance(g.x, g.y));
        double formula = r.value / p;
        auto cfg = spec.cfg;
        cfg.seed = mc::mix64(spec.cfg.seed + k++);
        auto e = mc::bridge_avoidance(spec.obstacle, g.x, g.y, g.t, cfg);
        double ratio = e.mean / formula;
        auto row = point_cells(g);
        row.emplace_back(std::string(asym::to_cstring(r.regime.tag)));
        row.emplace_back(formula);
        row.emplace_back(e.mean);
        row.emplace_back(e.std_error);
        row.emplace_back(ratio);
        row.emplace_back(std::fabs(ratio - 1));
        row.emplace_back(std::int64_t{r.out_of_validity});
        t.add(std::move(row));
        ts.push_back(g.t);
        devs.push_back(std::fabs(ratio - 1));
    }
    double tau = verify::kendall_tau(ts, devs);
    CommandResult res;
    if (spec.format == "json")
    {
        json j{{"rows", t.to_json()}, {"kendall_tau", tau}};
        res.output = j.dump(2) + "\n";
    }
    else
    {
        res.output = t.to_csv() + "# kendall_tau," + format_double(tau) + "\n";
    }
    if (spec.options.value("require_decreasing", false) && !(tau < 0))
    {
        res.exit_code = 1;
        res.message = "deviation trend is not decreasing";
    }
    return res;
}

CommandResult cmd_verify(RunSpec const& spec)
{
    std::vector<std::string> suites{"identity"};
    if (spec.options.contains("suites"))
    {
        auto const& s = spec.options["suites"];
        if (s.is_string() && s.get<std::string>() == "all")
            suites = verify::suite_names();
        else if (s.is_array())
            suites = s.get<std::vector<std::string>>();
        else
            usage("options.suites must be a list or \"all\"");
    }
    if (suites.empty())
        usage("no suites selected");
    for (auto const& s : suites)
    {
        auto const& names = verify::suite_names();
        if (std::find(names.begin(), names.end(), s) == names.end())
            usage("unknown suite '" + s + "'");
    }
    verify::SuiteOptions o;
    o.seed = spec.cfg.seed;
    o.workers = spec.cfg.workers;
    o.n_paths = spec.paths_given ? spec.cfg.n_paths : 100000;
    o.constants = load_constants(spec);

    json report;
    report["seed"] = o.seed;
    report["n_paths"] = o.n_paths;
    report["constants"] = o.constants.to_json();
    report["suites"] = json::array();
    bool all = true;
    Table t;
    t.columns = {"suite", "check", "pass", "measured", "reference",
                 "tolerance", "stderr"};
    for (auto const& s : suites)
    {
        auto r = verify::run_suite(s, o);
        all = all && r.pass();
        report["suites"].push_back(r.to_json());
        for (auto const& c : r.checks)
        {
            t.add({s, c.name, std::int64_t{c.pass}, c.measured, c.reference,
                   c.tolerance, c.std_error});
        }
    }
    report["pass"] = all;
    CommandResult res;
    res.output = spec.format == "csv" ? t.to_csv() : report.dump(2) + "\n";
    if (!all)
    {
        res.exit_code = 1;
        res.message = "one or more checks failed";
    }
    return res;
}

CommandResult cmd_calibrate(RunSpec const& spec)
{
    verify::CalibrationOptions o;
    if (spec.seed_given)
        o.seed = spec.cfg.seed;
    if (spec.paths_given)
        o.n_paths = spec.cfg.n_paths;
    o.workers = spec.cfg.workers;
    o.n_planar = spec.options.value("n_planar", o.n_planar);
    o.n_spatial = spec.options.value("n_spatial", o.n_spatial);
    o.n_offw = spec.options.value("n_offw", o.n_offw);
    if (!spec.obstacle.is_centered_ball()
        || spec.obstacle.bounding_radius() != 1)
    {
        fail(ErrorCode::unsupported, "calibration runs on the unit ball");
    }
    auto r = verify::calibrate(o);
    CommandResult res;
    if (spec.format == "csv")
    {
        Table t;
        t.columns = {"name", "constant", "stderr", "calibration_grid_hash"};
        for (auto const& [name, e] : r.constants.entries())
            t.add({name, e.value, e.std_error, e.grid_hash});
        res.output = t.to_csv();
    }
    else
    {
        res.output = r.constants.to_json().dump(2) + "\n";
    }
    return res;
}

}  // namespace

//---------------------------------------------------------------------------//
std::vector<GridPoint> expand_grid(json const& grid, int dim)
{
    json entries = grid;
    if (entries.is_object())
        entries = json::array({grid});
    if (!entries.is_array())
        usage("grid must be a list of {t, x, y} entries");
    std::vector<GridPoint> out;
    for (auto const& e : entries)
    {
        if (!e.is_object() || !e.contains("t") || !e.contains("x")
            || !e.contains("y"))
            usage("grid entry needs \"t\", \"x\" and \"y\"");
        for (double t : expand_times(e["t"]))
        {
            if (!(t > 0) || !std::isfinite(t))
                usage("grid times must be positive and finite");
            out.push_back({t, make_point(e["x"], t, dim),
                           make_point(e["y"], t, dim)});
        }
    }
    if (out.empty())
        usage("grid is empty");
    return out;
}

RunSpec RunSpec::from_json(json const& j)
{
    if (!j.is_object())
        usage("run spec must be a JSON object");
    RunSpec s;
    s.command = j.value("command", std::string{});
    if (j.contains("obstacle"))
    {
        auto const& o = j["obstacle"];
        s.obstacle = o.is_string() ? euclid::Obstacle::load(o.get<std::string>())
                                   : euclid::Obstacle::from_json(o);
    }
    if (j.contains("grid"))
        s.grid = j["grid"];
    if (j.contains("cfg"))
    {
        s.cfg = mc::PathConfig::from_json(j["cfg"]);
        s.seed_given = j["cfg"].contains("seed");
        s.paths_given = j["cfg"].contains("n_paths");
    }
    if (j.contains("workers"))
        s.cfg.workers = j["workers"].get<unsigned>();
    s.format = j.value("format", std::string{});
    if (s.format.empty())
    {
        bool report = s.command == "verify" || s.command == "calibrate";
        s.format = report ? "json" : "csv";
    }
    if (s.format != "csv" && s.format != "json")
        usage("format must be csv or json");
    s.constants_path = j.value("constants", std::string{});
    if (j.contains("options"))
    {
        if (!j["options"].is_object())
            usage("options must be a JSON object");
        s.options = j["options"];
    }
    return s;
}

std::vector<std::string> const& command_names()
{
    static std::vector<std::string> const names{
        "density", "bounds", "simulate", "verify", "calibrate", "table"};
    return names;
}

CommandResult run(RunSpec const& spec)
{
    try
    {
        if (spec.command == "density")
            return cmd_density(spec);
        if (spec.command == "bounds")
            return cmd_bounds(spec);
        if (spec.command == "simulate")
            return cmd_simulate(spec);
        if (spec.command == "verify")
            return cmd_verify(spec);
        if (spec.command == "calibrate")
            return cmd_calibrate(spec);
        if (spec.command == "table")
            return cmd_table(spec);
        usage("unknown command '" + spec.command + "'");
    }
    catch (UsageError const& e)
    {
        return {2, "", e.what()};
    }
    catch (Error const& e)
    {
        return {2, "", e.what()};
    }
    catch (json::exception const& e)
    {
        return {2, "", std::string("malformed spec: ") + e.what()};
    }
}

CommandResult run_json(std::string const& spec_text)
{
    try
    {
        return run(RunSpec::from_json(json::parse(spec_text)));
    }
    catch (UsageError const& e)
    {
        return {2, "", e.what()};
    }
    catch (Error const& e)
    {
        return {2, "", e.what()};
    }
    catch (json::exception const& e)
    {
        return {2, "", std::string("malformed spec: ") + e.what()};
    }
}

}  // namespace hk::cmd
