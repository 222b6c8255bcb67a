// SPDX-License-Identifier: Apache-2.0
//
// beamtrack - phased-array beam steering and direction-of-arrival toolkit
// Copyright (C) 2026 The beamtrack authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/*
 * C interface to the beamtrack library.
 *
 * Every object is an opaque handle created by a bt_*_create/_load/_compute/_run call
 * and released with the matching bt_*_free. All functions return a bt_status; on
 * failure a description is available from bt_last_error() on the same thread.
 * Angles are degrees, frequencies hertz, lengths meters.
 */
#ifndef BEAMTRACK_H
#define BEAMTRACK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define BT_API __declspec(dllexport)
#else
#  define BT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bt_status
{
    BT_OK = 0,
    BT_ERR_INVALID_ARGUMENT = 1,
    BT_ERR_DIMENSION = 2,
    BT_ERR_DEGENERATE = 3,
    BT_ERR_INCOMPLETE_CUT = 4,
    BT_ERR_AMBIGUOUS = 5,
    BT_ERR_INVALID_SCENARIO = 6,
    BT_ERR_PARSE = 7,
    BT_ERR_CONFIG = 8,
    BT_ERR_IO = 9,
    BT_ERR_BUFFER_TOO_SMALL = 10,
    BT_ERR_INTERNAL = 11
} bt_status;

typedef enum bt_element_kind
{
    BT_ELEMENT_ISOTROPIC = 0,
    BT_ELEMENT_COSINE_POWER = 1
} bt_element_kind;

typedef enum bt_cut_axis
{
    BT_CUT_AZIMUTH = 0,
    BT_CUT_ELEVATION = 1
} bt_cut_axis;

typedef enum bt_output_kind
{
    BT_OUTPUT_PATTERN = 0,
    BT_OUTPUT_SNAPSHOTS = 1,
    BT_OUTPUT_SPECTRUM = 2,
    BT_OUTPUT_ESTIMATE = 3,
    BT_OUTPUT_TRACK = 4
} bt_output_kind;

typedef struct bt_array bt_array;
typedef struct bt_scenario bt_scenario;
typedef struct bt_pattern bt_pattern;
typedef struct bt_snapshots bt_snapshots;
typedef struct bt_doa_result bt_doa_result;
typedef struct bt_track_log bt_track_log;

typedef struct bt_pattern_request
{
    double steer_az_deg;
    double steer_el_deg;
    bt_cut_axis axis;
    double span_deg; /* cut runs from -span to +span */
    double step_deg;
} bt_pattern_request;

typedef struct bt_pattern_metrics
{
    double peak_gain_dbi;
    double peak_angle_deg;
    double hpbw_deg;
    double sidelobe_level_db; /* valid only when has_sidelobe != 0 */
    int has_sidelobe;
} bt_pattern_metrics;

typedef struct bt_track_row
{
    double time_s;
    double true_az_deg, true_el_deg;
    double est_az_deg, est_el_deg;
    double steer_az_deg, steer_el_deg;
    double pointing_error_deg;
    double realized_gain_dbi;
    unsigned flags; /* BT_TRACK_FLAG_* */
} bt_track_row;

#define BT_TRACK_FLAG_CLAMPED 1u
#define BT_TRACK_FLAG_DEGRADED 2u
#define BT_TRACK_FLAG_HOLD 4u

BT_API const char *bt_version(void);
BT_API const char *bt_last_error(void);
BT_API const char *bt_status_string(bt_status status);

/* Array geometry */
BT_API bt_status bt_array_create(double carrier_frequency_hz, size_t num_x, size_t num_y,
                                 double spacing_x_m, double spacing_y_m, double scan_limit_deg,
                                 bt_array **out);
BT_API void bt_array_free(bt_array *array);
BT_API bt_status bt_array_num_elements(const bt_array *array, size_t *out);
BT_API bt_status bt_array_wavelength(const bt_array *array, double *out_m);
BT_API bt_status bt_array_grating_lobe_free_limit(const bt_array *array, double *out_deg);
/* Interleaved (re, im) pairs, 2 * num_elements doubles. */
BT_API bt_status bt_array_steering_vector(const bt_array *array, double az_deg, double el_deg,
                                          double *out_interleaved, size_t capacity_doubles);
/* Directivity of phase-only weights steered at (az, el), evaluated at that direction. */
BT_API bt_status bt_array_directivity(const bt_array *array, bt_element_kind kind, double exponent,
                                      double steer_az_deg, double steer_el_deg, double *out_dbi);

/* Scenario documents (JSON) */
BT_API bt_status bt_scenario_load(const char *path, bt_scenario **out);
BT_API bt_status bt_scenario_parse(const char *json_text, bt_scenario **out);
BT_API void bt_scenario_free(bt_scenario *scenario);
BT_API bt_status bt_scenario_array(const bt_scenario *scenario, bt_array **out);
BT_API bt_status bt_scenario_noise_seed(const bt_scenario *scenario, uint64_t *out);
/* Copies the configured default output path (may be empty). `needed` receives the
 * length including the terminator; returns BT_ERR_BUFFER_TOO_SMALL if it does not fit. */
BT_API bt_status bt_scenario_output_path(const bt_scenario *scenario, bt_output_kind kind,
                                         char *buffer, size_t capacity, size_t *needed);

/* Pattern cuts */
BT_API bt_status bt_pattern_compute(const bt_scenario *scenario, const bt_pattern_request *request,
                                    bt_pattern **out);
BT_API void bt_pattern_free(bt_pattern *pattern);
BT_API bt_status bt_pattern_sample_count(const bt_pattern *pattern, size_t *out);
BT_API bt_status bt_pattern_sample(const bt_pattern *pattern, size_t index, double *angle_deg,
                                   double *gain_dbi);
BT_API bt_status bt_pattern_get_metrics(const bt_pattern *pattern, bt_pattern_metrics *out);
BT_API bt_status bt_pattern_metrics_record(const bt_pattern *pattern, char *buffer, size_t capacity,
                                           size_t *needed);
/* Writes the CSV cut and the metrics record; neither file appears unless both succeed. */
BT_API bt_status bt_pattern_write(const bt_pattern *pattern, const char *csv_path, const char *metrics_path);

/* Snapshots */
BT_API bt_status bt_snapshots_generate(const bt_scenario *scenario, size_t num_snapshots, uint64_t seed,
                                       bt_snapshots **out);
BT_API bt_status bt_snapshots_load(const char *path, bt_snapshots **out);
BT_API bt_status bt_snapshots_save(const bt_snapshots *snapshots, const char *path);
BT_API void bt_snapshots_free(bt_snapshots *snapshots);
BT_API bt_status bt_snapshots_shape(const bt_snapshots *snapshots, size_t *num_elements,
                                    size_t *num_snapshots);
BT_API bt_status bt_snapshots_get(const bt_snapshots *snapshots, size_t element, size_t snapshot,
                                  double *re, double *im);

/* MUSIC direction finding. grid_step_deg <= 0 keeps the scenario's grid step. */
BT_API bt_status bt_doa_estimate(const bt_scenario *scenario, const bt_snapshots *snapshots,
                                 size_t num_sources, double grid_step_deg, bt_doa_result **out);
BT_API void bt_doa_free(bt_doa_result *result);
BT_API bt_status bt_doa_source_count(const bt_doa_result *result, size_t *out);
BT_API bt_status bt_doa_source(const bt_doa_result *result, size_t index, double *az_deg, double *el_deg,
                               double *peak_value);
BT_API bt_status bt_doa_flags(const bt_doa_result *result, int *degraded, int *rank_deficient);
BT_API bt_status bt_doa_record(const bt_doa_result *result, char *buffer, size_t capacity, size_t *needed);
BT_API bt_status bt_doa_write(const bt_doa_result *result, const char *spectrum_path, const char *estimate_path);

/* Closed-loop tracking */
BT_API bt_status bt_track_run(const bt_scenario *scenario, uint64_t seed, bt_track_log **out);
BT_API void bt_track_free(bt_track_log *log);
BT_API bt_status bt_track_row_count(const bt_track_log *log, size_t *out);
BT_API bt_status bt_track_get_row(const bt_track_log *log, size_t index, bt_track_row *out);
BT_API bt_status bt_track_write(const bt_track_log *log, const char *path);

#ifdef __cplusplus
}
#endif

#endif
