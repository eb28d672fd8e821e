/* Copyright 2026 The heatkernel authors.
 * SPDX-License-Identifier: Apache-2.0 */
/*---------------------------------------------------------------------------*/
/*! \file heatkernel/heatkernel.h
 * C interface to the heat kernel library.
 *
 * Functions return an hk_status; on failure hk_last_error() describes the
 * problem until the next call on the same thread. Strings handed out by the
 * library are released with hk_string_free.
 */
/*---------------------------------------------------------------------------*/
#ifndef HEATKERNEL_HEATKERNEL_H
#define HEATKERNEL_HEATKERNEL_H

#include <stdint.h>

#if defined(HK_BUILDING_LIBRARY)
#    define HK_API __attribute__((visibility("default")))
#else
#    define HK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hk_status
{
    HK_OK = 0,
    HK_ERR_DOMAIN = 1,
    HK_ERR_UNSUPPORTED = 2,
    HK_ERR_PARSE = 3,
    HK_ERR_IO = 4,
    HK_ERR_INVALID_ARGUMENT = 5,
    HK_ERR_INTERNAL = 99
} hk_status;

typedef struct hk_obstacle hk_obstacle;
typedef struct hk_model hk_model;
typedef struct hk_constants hk_constants;

typedef struct hk_density_result
{
    double value;
    double lower; /* NaN unless the regime returns an envelope */
    double upper;
    double err_star;
    int regime; /* See hk_regime_name */
    int out_of_validity;
    int is_envelope;
} hk_density_result;

typedef struct hk_estimate
{
    double mean;
    double std_error;
    uint64_t n;
    uint64_t seed;
} hk_estimate;

HK_API char const* hk_version(void);
HK_API char const* hk_last_error(void);
HK_API void hk_string_free(char* s);
HK_API char const* hk_regime_name(int regime);

/* Obstacles: a JSON union of balls, or a centered ball */
HK_API hk_status hk_obstacle_from_json(char const* json, hk_obstacle** out);
HK_API hk_status hk_obstacle_ball(double radius, int dim, hk_obstacle** out);
HK_API int hk_obstacle_dim(hk_obstacle const* ob);
HK_API void hk_obstacle_free(hk_obstacle* ob);

/* Potential model: analytic for a centered ball, estimated otherwise */
HK_API hk_status hk_model_create(hk_obstacle const* ob, uint64_t seed,
                                 hk_model** out);
HK_API void hk_model_free(hk_model* m);
HK_API hk_status hk_potential(hk_model const* m, double const* x,
                              double* value, double* std_error);

/* Constants: a null path reads HEATKERNEL_CONSTANTS, then built-in values */
HK_API hk_status hk_constants_load(char const* path, hk_constants** out);
HK_API hk_status hk_constants_get(hk_constants const* c, char const* name,
                                  double* value);
HK_API void hk_constants_free(hk_constants* c);

HK_API hk_status hk_density(hk_model const* m, hk_constants const* c,
                            double t, double const* x, double const* y,
                            hk_density_result* out);

/* Ratio of the obstacle-avoiding kernel to the free kernel by simulation */
HK_API hk_status hk_bridge_avoidance(hk_obstacle const* ob, double t,
                                     double const* x, double const* y,
                                     uint64_t n_paths, uint64_t seed,
                                     unsigned workers, hk_estimate* out);

/*!
 * Run a CLI command from a JSON spec. On HK_OK the command output is stored
 * in *out (free with hk_string_free) and its exit code in *exit_code; a
 * nonzero exit code also sets hk_last_error.
 */
HK_API hk_status hk_run_command(char const* spec_json, char** out,
                                int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
