// Copyright 2026 The heatkernel authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file test_capi.cpp
//! Links only against the shared library.
//---------------------------------------------------------------------------//
#include <cmath>
#include <string>

#include <doctest.h>

#include "heatkernel/heatkernel.h"

TEST_CASE("obstacle and potential handles")
{
    hk_obstacle* ob = nullptr;
    REQUIRE(hk_obstacle_ball(1, 2, &ob) == HK_OK);
    CHECK(hk_obstacle_dim(ob) == 2);

    hk_model* m = nullptr;
    REQUIRE(hk_model_create(ob, 1, &m) == HK_OK);
    double x[] = {std::exp(1.0), 0};
    double v = 0, se = -1;
    REQUIRE(hk_potential(m, x, &v, &se) == HK_OK);
    CHECK(v == doctest::Approx(1).epsilon(1e-14));
    CHECK(se == 0);

    hk_constants* c = nullptr;
    REQUIRE(hk_constants_load(nullptr, &c) == HK_OK);
    double cu = 0;
    CHECK(hk_constants_get(c, "C_upper_2d", &cu) == HK_OK);
    CHECK(cu > 0);
    CHECK(hk_constants_get(c, "missing", &cu) != HK_OK);
    CHECK(std::string(hk_last_error()).find("missing") != std::string::npos);

    double e5 = std::exp(5.0);
    double px[] = {e5, 0}, py[] = {0, e5};
    hk_density_result r;
    REQUIRE(hk_density(m, c, std::exp(20.0), px, py, &r) == HK_OK);
    CHECK(std::string(hk_regime_name(r.regime)) == "parabolic");
    CHECK(r.value > 0);
    CHECK(!r.is_envelope);

    hk_estimate est;
    double bx[] = {3, 0}, by[] = {0, 3};
    REQUIRE(hk_bridge_avoidance(ob, 10, bx, by, 4000, 5, 2, &est) == HK_OK);
    CHECK(est.n == 4000);
    CHECK(est.mean > 0);
    CHECK(est.mean < 1);

    hk_constants_free(c);
    hk_model_free(m);
    hk_obstacle_free(ob);
}

TEST_CASE("errors map to status codes")
{
    hk_obstacle* ob = nullptr;
    CHECK(hk_obstacle_ball(-1, 2, &ob) != HK_OK);
    CHECK(ob == nullptr);
    CHECK(*hk_last_error() != '\0');
    CHECK(hk_obstacle_from_json("{bad", &ob) == HK_ERR_PARSE);
    CHECK(hk_obstacle_ball(1, 2, nullptr) == HK_ERR_INVALID_ARGUMENT);
    CHECK(std::string(hk_regime_name(42)) == "invalid");
}

TEST_CASE("commands through the C entry point")
{
    char* out = nullptr;
    int code = -1;
    REQUIRE(hk_run_command(
                R"({"command": "density",
                    "grid": {"t": 1e8, "x": [10, 0], "y": [0, 50]}})",
                &out, &code)
            == HK_OK);
    CHECK(code == 0);
    REQUIRE(out != nullptr);
    CHECK(std::string(out).rfind("t,x0,x1,y0,y1,regime", 0) == 0);
    hk_string_free(out);

    REQUIRE(hk_run_command(R"({"command": "density", "grid": []})", &out,
                           &code)
            == HK_OK);
    CHECK(code == 2);
    CHECK(std::string(hk_last_error()) == "grid is empty");
    hk_string_free(out);
}
