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

#include "beamtrack/beamtrack.h"

#include "beamtrack/error.hpp"
#include "beamtrack/scenario.hpp"

#include <cstring>
#include <new>
#include <string>

struct bt_array
{
    beamtrack::ArrayConfig config;
};

struct bt_scenario
{
    beamtrack::ScenarioConfig config;
};

struct bt_pattern
{
    beamtrack::PatternCut cut;
};

struct bt_snapshots
{
    beamtrack::SnapshotMatrix matrix;
};

struct bt_doa_result
{
    beamtrack::DoaEstimate estimate;
};

struct bt_track_log
{
    beamtrack::TrackLog log;
};

namespace
{
    thread_local std::string last_error;

    bt_status to_status(beamtrack::ErrorKind kind)
    {
        using beamtrack::ErrorKind;
        switch (kind)
        {
        case ErrorKind::invalid_argument:
            return BT_ERR_INVALID_ARGUMENT;
        case ErrorKind::dimension:
            return BT_ERR_DIMENSION;
        case ErrorKind::degenerate:
            return BT_ERR_DEGENERATE;
        case ErrorKind::incomplete_cut:
            return BT_ERR_INCOMPLETE_CUT;
        case ErrorKind::ambiguous:
            return BT_ERR_AMBIGUOUS;
        case ErrorKind::invalid_scenario:
            return BT_ERR_INVALID_SCENARIO;
        case ErrorKind::parse:
            return BT_ERR_PARSE;
        case ErrorKind::config:
            return BT_ERR_CONFIG;
        case ErrorKind::io:
            return BT_ERR_IO;
        }
        return BT_ERR_INTERNAL;
    }

    bt_status fail(bt_status status, std::string message)
    {
        last_error = std::move(message);
        return status;
    }

    // Runs `body`, translating exceptions into status codes.
    template <typename F>
    bt_status guarded(F &&body)
    {
        try
        {
            last_error.clear();
            body();
            return BT_OK;
        }
        catch (const beamtrack::Error &e)
        {
            return fail(to_status(e.kind()), e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(BT_ERR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(BT_ERR_INTERNAL, e.what());
        }
    }

    bool null_arg(const void *p, const char *name, bt_status &status)
    {
        if (p)
            return false;
        status = fail(BT_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
        return true;
    }

    bt_status copy_text(const std::string &text, char *buffer, size_t capacity, size_t *needed)
    {
        if (needed)
            *needed = text.size() + 1;
        if (!buffer || capacity < text.size() + 1)
            return fail(BT_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(text.size() + 1) + " bytes");
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        return BT_OK;
    }

    beamtrack::PatternMetrics metrics_of(const bt_pattern *p) { return beamtrack::pattern_metrics(p->cut); }
}

#define BT_REQUIRE(ptr)                    \
    do                                     \
    {                                      \
        bt_status s_;                      \
        if (null_arg((ptr), #ptr, s_))     \
            return s_;                     \
    } while (0)

extern "C" {

const char *bt_version(void) { return "1.0.0"; }

const char *bt_last_error(void) { return last_error.c_str(); }

const char *bt_status_string(bt_status status)
{
    switch (status)
    {
    case BT_OK:
        return "ok";
    case BT_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case BT_ERR_DIMENSION:
        return "dimension mismatch";
    case BT_ERR_DEGENERATE:
        return "degenerate input";
    case BT_ERR_INCOMPLETE_CUT:
        return "incomplete pattern cut";
    case BT_ERR_AMBIGUOUS:
        return "ambiguous spectrum";
    case BT_ERR_INVALID_SCENARIO:
        return "invalid scenario";
    case BT_ERR_PARSE:
        return "parse error";
    case BT_ERR_CONFIG:
        return "config error";
    case BT_ERR_IO:
        return "i/o error";
    case BT_ERR_BUFFER_TOO_SMALL:
        return "buffer too small";
    case BT_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

bt_status bt_array_create(double carrier_frequency_hz, size_t num_x, size_t num_y, double spacing_x_m,
                          double spacing_y_m, double scan_limit_deg, bt_array **out)
{
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        *out = new bt_array{beamtrack::ArrayConfig(carrier_frequency_hz, num_x, num_y, spacing_x_m, spacing_y_m,
                                                   scan_limit_deg)};
    });
}

void bt_array_free(bt_array *array) { delete array; }

bt_status bt_array_num_elements(const bt_array *array, size_t *out)
{
    BT_REQUIRE(array);
    BT_REQUIRE(out);
    *out = array->config.num_elements();
    return BT_OK;
}

bt_status bt_array_wavelength(const bt_array *array, double *out_m)
{
    BT_REQUIRE(array);
    BT_REQUIRE(out_m);
    *out_m = array->config.wavelength();
    return BT_OK;
}

bt_status bt_array_grating_lobe_free_limit(const bt_array *array, double *out_deg)
{
    BT_REQUIRE(array);
    BT_REQUIRE(out_deg);
    *out_deg = beamtrack::grating_lobe_free_limit(array->config);
    return BT_OK;
}

bt_status bt_array_steering_vector(const bt_array *array, double az_deg, double el_deg, double *out_interleaved,
                                   size_t capacity_doubles)
{
    BT_REQUIRE(array);
    BT_REQUIRE(out_interleaved);
    const auto n = array->config.num_elements();
    if (capacity_doubles < 2 * n)
        return fail(BT_ERR_BUFFER_TOO_SMALL, "steering vector needs " + std::to_string(2 * n) + " doubles");
    return guarded([&] {
        const auto sv = beamtrack::steering_vector(array->config, beamtrack::DirectionAngles(az_deg, el_deg));
        for (size_t i = 0; i < n; ++i)
        {
            out_interleaved[2 * i] = sv.entries[static_cast<Eigen::Index>(i)].real();
            out_interleaved[2 * i + 1] = sv.entries[static_cast<Eigen::Index>(i)].imag();
        }
    });
}

bt_status bt_array_directivity(const bt_array *array, bt_element_kind kind, double exponent, double steer_az_deg,
                               double steer_el_deg, double *out_dbi)
{
    BT_REQUIRE(array);
    BT_REQUIRE(out_dbi);
    return guarded([&] {
        const auto model = kind == BT_ELEMENT_ISOTROPIC ? beamtrack::ElementModel::isotropic()
                                                        : beamtrack::ElementModel::cosine_power(exponent);
        const beamtrack::DirectionAngles steer(steer_az_deg, steer_el_deg);
        *out_dbi = beamtrack::directivity(array->config, beamtrack::steering_weights(array->config, steer), model,
                                          steer);
    });
}

bt_status bt_scenario_load(const char *path, bt_scenario **out)
{
    BT_REQUIRE(path);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new bt_scenario{beamtrack::load_scenario(path)}; });
}

bt_status bt_scenario_parse(const char *json_text, bt_scenario **out)
{
    BT_REQUIRE(json_text);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new bt_scenario{beamtrack::parse_scenario(json_text)}; });
}

void bt_scenario_free(bt_scenario *scenario) { delete scenario; }

bt_status bt_scenario_array(const bt_scenario *scenario, bt_array **out)
{
    BT_REQUIRE(scenario);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new bt_array{scenario->config.array}; });
}

bt_status bt_scenario_noise_seed(const bt_scenario *scenario, uint64_t *out)
{
    BT_REQUIRE(scenario);
    BT_REQUIRE(out);
    *out = scenario->config.noise.seed;
    return BT_OK;
}

bt_status bt_scenario_output_path(const bt_scenario *scenario, bt_output_kind kind, char *buffer, size_t capacity,
                                  size_t *needed)
{
    BT_REQUIRE(scenario);
    const auto &o = scenario->config.outputs;
    switch (kind)
    {
    case BT_OUTPUT_PATTERN:
        return copy_text(o.pattern, buffer, capacity, needed);
    case BT_OUTPUT_SNAPSHOTS:
        return copy_text(o.snapshots, buffer, capacity, needed);
    case BT_OUTPUT_SPECTRUM:
        return copy_text(o.spectrum, buffer, capacity, needed);
    case BT_OUTPUT_ESTIMATE:
        return copy_text(o.estimate, buffer, capacity, needed);
    case BT_OUTPUT_TRACK:
        return copy_text(o.track, buffer, capacity, needed);
    }
    return fail(BT_ERR_INVALID_ARGUMENT, "unknown output kind");
}

bt_status bt_pattern_compute(const bt_scenario *scenario, const bt_pattern_request *request, bt_pattern **out)
{
    BT_REQUIRE(scenario);
    BT_REQUIRE(request);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const auto &sc = scenario->config;
        const beamtrack::DirectionAngles steer(request->steer_az_deg, request->steer_el_deg);
        if (request->axis != BT_CUT_AZIMUTH && request->axis != BT_CUT_ELEVATION)
            throw beamtrack::Error(beamtrack::ErrorKind::invalid_argument, "unknown cut axis");
        const auto axis = request->axis == BT_CUT_AZIMUTH ? beamtrack::CutAxis::azimuth : beamtrack::CutAxis::elevation;
        const double other = axis == beamtrack::CutAxis::azimuth ? steer.elevation() : steer.azimuth();
        const auto weights = beamtrack::steering_weights(sc.array, steer);
        *out = new bt_pattern{beamtrack::pattern_cut(sc.array, weights, sc.element, axis, other, request->span_deg,
                                                     request->step_deg, sc.quadrature_step_deg)};
    });
}

void bt_pattern_free(bt_pattern *pattern) { delete pattern; }

bt_status bt_pattern_sample_count(const bt_pattern *pattern, size_t *out)
{
    BT_REQUIRE(pattern);
    BT_REQUIRE(out);
    *out = pattern->cut.samples.size();
    return BT_OK;
}

bt_status bt_pattern_sample(const bt_pattern *pattern, size_t index, double *angle_deg, double *gain_dbi)
{
    BT_REQUIRE(pattern);
    if (index >= pattern->cut.samples.size())
        return fail(BT_ERR_INVALID_ARGUMENT, "sample index out of range");
    if (angle_deg)
        *angle_deg = pattern->cut.samples[index].angle_deg;
    if (gain_dbi)
        *gain_dbi = pattern->cut.samples[index].gain_dbi;
    return BT_OK;
}

bt_status bt_pattern_get_metrics(const bt_pattern *pattern, bt_pattern_metrics *out)
{
    BT_REQUIRE(pattern);
    BT_REQUIRE(out);
    return guarded([&] {
        const auto m = metrics_of(pattern);
        out->peak_gain_dbi = m.peak_gain_dbi;
        out->peak_angle_deg = m.peak_angle_deg;
        out->hpbw_deg = m.hpbw_deg;
        out->has_sidelobe = m.sidelobe_level_db.has_value() ? 1 : 0;
        out->sidelobe_level_db = m.sidelobe_level_db.value_or(0.0);
    });
}

bt_status bt_pattern_metrics_record(const bt_pattern *pattern, char *buffer, size_t capacity, size_t *needed)
{
    BT_REQUIRE(pattern);
    std::string record;
    const auto st = guarded([&] { record = beamtrack::pattern_metrics_to_record(metrics_of(pattern)); });
    if (st != BT_OK)
        return st;
    return copy_text(record, buffer, capacity, needed);
}

bt_status bt_pattern_write(const bt_pattern *pattern, const char *csv_path, const char *metrics_path)
{
    BT_REQUIRE(pattern);
    BT_REQUIRE(csv_path);
    BT_REQUIRE(metrics_path);
    return guarded([&] {
        const auto record = beamtrack::pattern_metrics_to_record(metrics_of(pattern));
        beamtrack::write_files_atomic({{csv_path, beamtrack::pattern_cut_to_csv(pattern->cut)},
                                       {metrics_path, record + "\n"}});
    });
}

bt_status bt_snapshots_generate(const bt_scenario *scenario, size_t num_snapshots, uint64_t seed, bt_snapshots **out)
{
    BT_REQUIRE(scenario);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const auto &sc = scenario->config;
        auto noise = sc.noise;
        noise.seed = seed;
        *out = new bt_snapshots{
            beamtrack::generate_snapshots(sc.array, sc.sources, noise, num_snapshots, sc.element_gains)};
    });
}

bt_status bt_snapshots_load(const char *path, bt_snapshots **out)
{
    BT_REQUIRE(path);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] { *out = new bt_snapshots{beamtrack::load_snapshots(path)}; });
}

bt_status bt_snapshots_save(const bt_snapshots *snapshots, const char *path)
{
    BT_REQUIRE(snapshots);
    BT_REQUIRE(path);
    return guarded([&] { beamtrack::save_snapshots(snapshots->matrix, path); });
}

void bt_snapshots_free(bt_snapshots *snapshots) { delete snapshots; }

bt_status bt_snapshots_shape(const bt_snapshots *snapshots, size_t *num_elements, size_t *num_snapshots)
{
    BT_REQUIRE(snapshots);
    if (num_elements)
        *num_elements = static_cast<size_t>(snapshots->matrix.num_elements());
    if (num_snapshots)
        *num_snapshots = static_cast<size_t>(snapshots->matrix.num_snapshots());
    return BT_OK;
}

bt_status bt_snapshots_get(const bt_snapshots *snapshots, size_t element, size_t snapshot, double *re, double *im)
{
    BT_REQUIRE(snapshots);
    const auto &d = snapshots->matrix.data();
    if (element >= static_cast<size_t>(d.rows()) || snapshot >= static_cast<size_t>(d.cols()))
        return fail(BT_ERR_INVALID_ARGUMENT, "snapshot index out of range");
    const auto v = d(static_cast<Eigen::Index>(element), static_cast<Eigen::Index>(snapshot));
    if (re)
        *re = v.real();
    if (im)
        *im = v.imag();
    return BT_OK;
}

bt_status bt_doa_estimate(const bt_scenario *scenario, const bt_snapshots *snapshots, size_t num_sources,
                          double grid_step_deg, bt_doa_result **out)
{
    BT_REQUIRE(scenario);
    BT_REQUIRE(snapshots);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        auto options = scenario->config.doa;
        if (grid_step_deg > 0.0)
            options.grid.step = grid_step_deg;
        *out = new bt_doa_result{
            beamtrack::estimate_doa(scenario->config.array, snapshots->matrix, num_sources, options)};
    });
}

void bt_doa_free(bt_doa_result *result) { delete result; }

bt_status bt_doa_source_count(const bt_doa_result *result, size_t *out)
{
    BT_REQUIRE(result);
    BT_REQUIRE(out);
    *out = result->estimate.angles.size();
    return BT_OK;
}

bt_status bt_doa_source(const bt_doa_result *result, size_t index, double *az_deg, double *el_deg, double *peak_value)
{
    BT_REQUIRE(result);
    const auto &e = result->estimate;
    if (index >= e.angles.size())
        return fail(BT_ERR_INVALID_ARGUMENT, "source index out of range");
    if (az_deg)
        *az_deg = e.angles[index].azimuth();
    if (el_deg)
        *el_deg = e.angles[index].elevation();
    if (peak_value)
        *peak_value = e.peak_values[index];
    return BT_OK;
}

bt_status bt_doa_flags(const bt_doa_result *result, int *degraded, int *rank_deficient)
{
    BT_REQUIRE(result);
    if (degraded)
        *degraded = result->estimate.degraded ? 1 : 0;
    if (rank_deficient)
        *rank_deficient = result->estimate.rank_deficient ? 1 : 0;
    return BT_OK;
}

bt_status bt_doa_record(const bt_doa_result *result, char *buffer, size_t capacity, size_t *needed)
{
    BT_REQUIRE(result);
    return copy_text(beamtrack::estimate_to_record(result->estimate), buffer, capacity, needed);
}

bt_status bt_doa_write(const bt_doa_result *result, const char *spectrum_path, const char *estimate_path)
{
    BT_REQUIRE(result);
    BT_REQUIRE(spectrum_path);
    BT_REQUIRE(estimate_path);
    return guarded([&] {
        beamtrack::write_files_atomic({{spectrum_path, beamtrack::spectrum_to_csv(result->estimate.spectrum)},
                                       {estimate_path, beamtrack::estimate_to_record(result->estimate) + "\n"}});
    });
}

bt_status bt_track_run(const bt_scenario *scenario, uint64_t seed, bt_track_log **out)
{
    BT_REQUIRE(scenario);
    BT_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const auto &sc = scenario->config;
        if (!sc.trajectory)
            throw beamtrack::Error(beamtrack::ErrorKind::invalid_scenario, "scenario has no trajectory section");
        *out = new bt_track_log{beamtrack::run_tracking(sc.array, sc.element, *sc.trajectory, sc.tracker, seed)};
    });
}

void bt_track_free(bt_track_log *log) { delete log; }

bt_status bt_track_row_count(const bt_track_log *log, size_t *out)
{
    BT_REQUIRE(log);
    BT_REQUIRE(out);
    *out = log->log.rows.size();
    return BT_OK;
}

bt_status bt_track_get_row(const bt_track_log *log, size_t index, bt_track_row *out)
{
    BT_REQUIRE(log);
    BT_REQUIRE(out);
    if (index >= log->log.rows.size())
        return fail(BT_ERR_INVALID_ARGUMENT, "row index out of range");
    const auto &r = log->log.rows[index];
    *out = {r.time_s,
            r.true_angles.azimuth(),
            r.true_angles.elevation(),
            r.estimated.azimuth(),
            r.estimated.elevation(),
            r.steered.azimuth(),
            r.steered.elevation(),
            r.pointing_error_deg,
            r.realized_gain_dbi,
            r.flags};
    return BT_OK;
}

bt_status bt_track_write(const bt_track_log *log, const char *path)
{
    BT_REQUIRE(log);
    BT_REQUIRE(path);
    return guarded([&] { beamtrack::write_file_atomic(path, beamtrack::track_log_to_csv(log->log)); });
}

} // extern "C"
