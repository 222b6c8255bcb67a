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

#ifndef BEAMTRACK_TRACKING_HPP
#define BEAMTRACK_TRACKING_HPP

#include "beamtrack/array_model.hpp"
#include "beamtrack/beamforming.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace beamtrack
{
    struct Waypoint
    {
        double time_s;
        DirectionAngles angles;
    };

    // Target angular path. Angles are interpolated linearly per axis; waypoint paths hold
    // the last waypoint after its time. Construction rejects paths leaving the visible
    // half-space.
    class Trajectory
    {
    public:
        static Trajectory from_waypoints(std::vector<Waypoint> waypoints, double duration_s);
        static Trajectory constant_rate(const DirectionAngles &start, double rate_az_deg_s,
                                        double rate_el_deg_s, double duration_s);

        DirectionAngles at(double time_s) const;
        double duration() const { return duration_; }

    private:
        Trajectory() = default;

        std::vector<Waypoint> waypoints_;
        double duration_ = 0.0;
    };

    struct TrackerConfig
    {
        double update_period_s = 0.1;
        double smoothing_alpha = 0.7;
        std::size_t snapshots_per_update = 100;
        double snr_db = 20.0;
        double grid_step_deg = 1.0;
        double scan_limit_deg = 42.0;

        void validate() const;
    };

    struct TrackerState
    {
        DirectionAngles command;
        WeightVector weights;
    };

    namespace track_flags
    {
        inline constexpr unsigned clamped = 1u << 0;  // command hit the scan envelope
        inline constexpr unsigned degraded = 1u << 1; // peak search fell back to non-local maxima
        inline constexpr unsigned hold = 1u << 2;     // estimator failed, previous command kept
    }

    struct TrackRow
    {
        double time_s;
        DirectionAngles true_angles;
        DirectionAngles estimated; // equals the held command when the hold flag is set
        DirectionAngles steered;
        double pointing_error_deg;
        double realized_gain_dbi;
        unsigned flags;
    };

    struct TrackLog
    {
        std::vector<TrackRow> rows;
    };

    DirectionAngles clamp_to_scan_envelope(const DirectionAngles &angles, double limit_deg);

    // Exponential smoothing toward the estimate per axis, clamped, then re-steered.
    TrackerState tracker_step(const ArrayConfig &config, const TrackerState &state,
                              const DirectionAngles &estimate, const TrackerConfig &cfg);

    TrackerState initial_tracker_state(const ArrayConfig &config);

    TrackLog run_tracking(const ArrayConfig &config, const ElementModel &model,
                          const Trajectory &trajectory, const TrackerConfig &cfg, std::uint64_t seed);

    // Header `t_s,true_az,true_el,est_az,est_el,steer_az,steer_el,err_deg,gain_dbi,flags`.
    std::string track_log_to_csv(const TrackLog &log);
}

#endif
