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

#include "beamtrack/tracking.hpp"
#include "beamtrack/doa_music.hpp"
#include "beamtrack/error.hpp"
#include "beamtrack/signal_model.hpp"
#include "text_format.hpp"

#include <algorithm>
#include <cmath>

namespace beamtrack
{
    namespace
    {
        DirectionAngles visible_or_throw(double az, double el, const std::string &where)
        {
            if (!std::isfinite(az) || !std::isfinite(el) || std::abs(az) > 90.0 || std::abs(el) > 90.0)
                throw Error(ErrorKind::invalid_scenario, "trajectory leaves the visible half-space at " + where);
            return DirectionAngles(az, el);
        }

        // splitmix64 finalizer; decorrelates per-tick seeds derived from one run seed
        std::uint64_t mix_seed(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        DirectionAngles smooth(const DirectionAngles &prev, const DirectionAngles &target, double alpha)
        {
            return {prev.azimuth() + alpha * (target.azimuth() - prev.azimuth()),
                    prev.elevation() + alpha * (target.elevation() - prev.elevation())};
        }
    }

    Trajectory Trajectory::from_waypoints(std::vector<Waypoint> waypoints, double duration_s)
    {
        if (waypoints.empty())
            throw Error(ErrorKind::invalid_scenario, "trajectory needs at least one waypoint");
        if (!(std::isfinite(duration_s) && duration_s >= 0.0))
            throw Error(ErrorKind::invalid_scenario, "trajectory duration must be >= 0");
        for (std::size_t i = 0; i < waypoints.size(); ++i)
        {
            const auto &wp = waypoints[i];
            if (!std::isfinite(wp.time_s))
                throw Error(ErrorKind::invalid_scenario, "waypoint time must be finite");
            if (i > 0 && !(wp.time_s > waypoints[i - 1].time_s))
                throw Error(ErrorKind::invalid_scenario, "waypoint times must be strictly increasing");
            visible_or_throw(wp.angles.azimuth(), wp.angles.elevation(),
                             "waypoint " + std::to_string(i));
        }
        Trajectory t;
        t.waypoints_ = std::move(waypoints);
        t.duration_ = duration_s;
        return t;
    }

    Trajectory Trajectory::constant_rate(const DirectionAngles &start, double rate_az_deg_s,
                                         double rate_el_deg_s, double duration_s)
    {
        if (!(std::isfinite(duration_s) && duration_s >= 0.0))
            throw Error(ErrorKind::invalid_scenario, "trajectory duration must be >= 0");
        // linear in each angle, so checking both endpoints covers the whole path
        const auto end = visible_or_throw(start.azimuth() + rate_az_deg_s * duration_s,
                                          start.elevation() + rate_el_deg_s * duration_s, "the end time");
        std::vector<Waypoint> wps{{0.0, start}};
        if (duration_s > 0.0)
            wps.push_back({duration_s, end});
        return from_waypoints(std::move(wps), duration_s);
    }

    DirectionAngles Trajectory::at(double time_s) const
    {
        if (time_s <= waypoints_.front().time_s)
            return waypoints_.front().angles;
        if (time_s >= waypoints_.back().time_s)
            return waypoints_.back().angles;
        const auto hi = std::upper_bound(waypoints_.begin(), waypoints_.end(), time_s,
                                         [](double t, const Waypoint &w) { return t < w.time_s; });
        const auto lo = hi - 1;
        const double f = (time_s - lo->time_s) / (hi->time_s - lo->time_s);
        return {lo->angles.azimuth() + f * (hi->angles.azimuth() - lo->angles.azimuth()),
                lo->angles.elevation() + f * (hi->angles.elevation() - lo->angles.elevation())};
    }

    void TrackerConfig::validate() const
    {
        if (!(update_period_s > 0.0) || !std::isfinite(update_period_s))
            throw Error(ErrorKind::invalid_argument, "update_period must be > 0");
        if (!(smoothing_alpha > 0.0 && smoothing_alpha <= 1.0))
            throw Error(ErrorKind::invalid_argument, "smoothing_alpha must be in (0, 1]");
        if (snapshots_per_update < 1)
            throw Error(ErrorKind::invalid_argument, "snapshots_per_update must be >= 1");
        if (std::isnan(snr_db))
            throw Error(ErrorKind::invalid_argument, "snr_db must be a number");
        if (!(grid_step_deg > 0.0) || !std::isfinite(grid_step_deg))
            throw Error(ErrorKind::invalid_argument, "grid_step must be > 0");
        if (!(scan_limit_deg > 0.0 && scan_limit_deg <= 90.0))
            throw Error(ErrorKind::invalid_argument, "scan_limit must be in (0, 90]");
    }

    DirectionAngles clamp_to_scan_envelope(const DirectionAngles &angles, double limit_deg)
    {
        if (!(limit_deg > 0.0 && limit_deg <= 90.0))
            throw Error(ErrorKind::invalid_argument, "scan limit must be in (0, 90]");
        return {std::clamp(angles.azimuth(), -limit_deg, limit_deg),
                std::clamp(angles.elevation(), -limit_deg, limit_deg)};
    }

    TrackerState initial_tracker_state(const ArrayConfig &config)
    {
        const DirectionAngles boresight(0.0, 0.0);
        return {boresight, steering_weights(config, boresight)};
    }

    TrackerState tracker_step(const ArrayConfig &config, const TrackerState &state,
                              const DirectionAngles &estimate, const TrackerConfig &cfg)
    {
        const auto command =
            clamp_to_scan_envelope(smooth(state.command, estimate, cfg.smoothing_alpha), cfg.scan_limit_deg);
        return {command, steering_weights(config, command)};
    }

    TrackLog run_tracking(const ArrayConfig &config, const ElementModel &model,
                          const Trajectory &trajectory, const TrackerConfig &cfg, std::uint64_t seed)
    {
        cfg.validate();
        const auto ticks = static_cast<std::size_t>(std::floor(trajectory.duration() / cfg.update_period_s + 1e-9));
        if (ticks == 0)
            throw Error(ErrorKind::invalid_scenario, "trajectory duration is shorter than one update period");

        DoaOptions doa;
        doa.grid.step = cfg.grid_step_deg;

        TrackLog log;
        log.rows.reserve(ticks);
        TrackerState state = initial_tracker_state(config);
        double power = radiated_power(config, state.weights, model);

        for (std::size_t k = 0; k < ticks; ++k)
        {
            TrackRow row{};
            row.time_s = static_cast<double>(k) * cfg.update_period_s;
            row.true_angles = trajectory.at(row.time_s);

            const NoiseSpec noise{cfg.snr_db, mix_seed(seed ^ mix_seed(k))};
            const auto snaps = generate_snapshots(config, {{row.true_angles, 1.0}}, noise, cfg.snapshots_per_update);

            TrackerState next = state;
            try
            {
                const auto est = estimate_doa(config, snaps, 1, doa);
                row.estimated = est.angles.front();
                if (est.degraded)
                    row.flags |= track_flags::degraded;
                next = tracker_step(config, state, row.estimated, cfg);
                if (!(smooth(state.command, row.estimated, cfg.smoothing_alpha) == next.command))
                    row.flags |= track_flags::clamped;
            }
            catch (const Error &e)
            {
                if (e.kind() != ErrorKind::ambiguous)
                    throw;
                row.estimated = state.command;
                row.flags |= track_flags::hold;
            }

            if (!(next.command == state.command))
                power = radiated_power(config, next.weights, model);
            state = std::move(next);

            row.steered = state.command;
            row.pointing_error_deg = angular_separation(row.true_angles, row.steered);
            const double g = 4.0 * pi * std::norm(array_response(config, state.weights, model, row.true_angles)) / power;
            row.realized_gain_dbi = g > 0.0 ? std::max(10.0 * std::log10(g), gain_floor_dbi) : gain_floor_dbi;
            log.rows.push_back(row);
        }
        return log;
    }

    std::string track_log_to_csv(const TrackLog &log)
    {
        std::string out = "t_s,true_az,true_el,est_az,est_el,steer_az,steer_el,err_deg,gain_dbi,flags\n";
        auto num = [&](double v) {
            out += detail::format_significant(v, 9);
            out += ',';
        };
        for (const auto &r : log.rows)
        {
            num(r.time_s);
            num(r.true_angles.azimuth());
            num(r.true_angles.elevation());
            num(r.estimated.azimuth());
            num(r.estimated.elevation());
            num(r.steered.azimuth());
            num(r.steered.elevation());
            num(r.pointing_error_deg);
            num(r.realized_gain_dbi);
            std::string flags;
            if (r.flags & track_flags::clamped)
                flags += "clamped";
            if (r.flags & track_flags::degraded)
                flags += flags.empty() ? "degraded" : "|degraded";
            if (r.flags & track_flags::hold)
                flags += flags.empty() ? "hold" : "|hold";
            out += flags;
            out += '\n';
        }
        return out;
    }
}
