// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file capi.cpp
//---------------------------------------------------------------------------//
#include "heatkernel/heatkernel.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "heatkernel/asymptotics.hpp"
#include "heatkernel/commands.hpp"
#include "heatkernel/constants.hpp"
#include "heatkernel/error.hpp"
#include "heatkernel/greenfn.hpp"
#include "heatkernel/montecarlo.hpp"

struct hk_obstacle
{
    hk::euclid::Obstacle ob;
};

struct hk_model
{
    hk::green::PotentialModel model;
};

struct hk_constants
{
    hk::Constants c;
};

namespace
{
thread_local std::string last_error;

hk_status set_error(hk_status s, char const* what)
{
    last_error = what;
    return s;
}

// Run f, translating exceptions into a status and the thread's last error
template<class F>
hk_status guarded(F&& f)
{
    last_error.clear();
    try
    {
        f();
        return HK_OK;
    }
    catch (hk::Error const& e)
    {
        return set_error(static_cast<hk_status>(e.code()), e.what());
    }
    catch (nlohmann::json::exception const& e)
    {
        return set_error(HK_ERR_PARSE, e.what());
    }
    catch (std::exception const& e)
    {
        return set_error(HK_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return set_error(HK_ERR_INTERNAL, "unknown exception");
    }
}

hk::euclid::PointD point(double const* x, int d)
{
    return hk::euclid::PointD(std::vector<double>(x, x + d));
}

char* copy_string(std::string const& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

char const* hk_version(void)
{
    return "0.1.0";
}

char const* hk_last_error(void)
{
    return last_error.c_str();
}

void hk_string_free(char* s)
{
    std::free(s);
}

char const* hk_regime_name(int regime)
{
    if (regime < 0 || regime > static_cast<int>(hk::asym::Regime::unclassified))
        return "invalid";
    return hk::asym::to_cstring(static_cast<hk::asym::Regime>(regime));
}

hk_status hk_obstacle_from_json(char const* json, hk_obstacle** out)
{
    if (!json || !out)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new hk_obstacle{
            hk::euclid::Obstacle::from_json(nlohmann::json::parse(json))};
    });
}

hk_status hk_obstacle_ball(double radius, int dim, hk_obstacle** out)
{
    if (!out)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded(
        [&] { *out = new hk_obstacle{hk::euclid::Obstacle::ball(radius, dim)}; });
}

int hk_obstacle_dim(hk_obstacle const* ob)
{
    return ob ? ob->ob.dim() : 0;
}

void hk_obstacle_free(hk_obstacle* ob)
{
    delete ob;
}

hk_status hk_model_create(hk_obstacle const* ob, uint64_t seed, hk_model** out)
{
    if (!ob || !out)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        hk::green::PotentialBuildOptions opts;
        opts.seed = seed;
        *out = new hk_model{hk::green::PotentialModel::make(ob->ob, opts)};
    });
}

void hk_model_free(hk_model* m)
{
    delete m;
}

hk_status
hk_potential(hk_model const* m, double const* x, double* value, double* std_error)
{
    if (!m || !x || !value)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto v = m->model.eval(point(x, m->model.dim()));
        *value = v.value;
        if (std_error)
            *std_error = v.std_error;
    });
}

hk_status hk_constants_load(char const* path, hk_constants** out)
{
    if (!out)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new hk_constants{path ? hk::Constants::load(path)
                                     : hk::Constants::from_environment()};
    });
}

hk_status hk_constants_get(hk_constants const* c, char const* name, double* value)
{
    if (!c || !name || !value)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *value = c->c.get(name); });
}

void hk_constants_free(hk_constants* c)
{
    delete c;
}

hk_status hk_density(hk_model const* m,
                     hk_constants const* c,
                     double t,
                     double const* x,
                     double const* y,
                     hk_density_result* out)
{
    if (!m || !x || !y || !out)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        int d = m->model.dim();
        auto constants = c ? c->c : hk::Constants::from_environment();
        auto r = hk::asym::density_full(m->model, t, point(x, d), point(y, d),
                                        constants);
        out->value = r.value;
        out->lower = r.lower;
        out->upper = r.upper;
        out->err_star = r.err_star;
        out->regime = static_cast<int>(r.regime.tag);
        out->out_of_validity = r.out_of_validity;
        out->is_envelope = r.is_envelope;
    });
}

hk_status hk_bridge_avoidance(hk_obstacle const* ob,
                              double t,
                              double const* x,
                              double const* y,
                              uint64_t n_paths,
                              uint64_t seed,
                              unsigned workers,
                              hk_estimate* out)
{
    if (!ob || !x || !y || !out)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        int d = ob->ob.dim();
        hk::mc::PathConfig cfg;
        cfg.n_paths = n_paths;
        cfg.seed = seed;
        cfg.workers = workers ? workers : 1;
        auto e = hk::mc::bridge_avoidance(ob->ob, point(x, d), point(y, d), t,
                                          cfg);
        out->mean = e.mean;
        out->std_error = e.std_error;
        out->n = e.n;
        out->seed = e.seed;
    });
}

hk_status hk_run_command(char const* spec_json, char** out, int* exit_code)
{
    if (!spec_json || !out || !exit_code)
        return set_error(HK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto r = hk::cmd::run_json(spec_json);
        *exit_code = r.exit_code;
        *out = copy_string(r.output);
        last_error = r.message;
    });
}

}  // extern "C"
