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

#include <catch_amalgamated.hpp>

#include "beamtrack/error.hpp"
#include "beamtrack/tracking.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace beamtrack;
using Catch::Approx;

namespace
{
    ErrorKind kind_of_run(const Trajectory &traj, const TrackerConfig &tc)
    {
        try
        {
            run_tracking(test::reference_array(), ElementModel{}, traj, tc, 1);
        }
        catch (const Error &e)
        {
            return e.kind();
        }
        FAIL("expected an error");
        return ErrorKind::invalid_argument;
    }
}

TEST_CASE("clamp_to_scan_envelope - examples")
{
    CHECK(clamp_to_scan_envelope({50.0, 10.0}, 42.0) == DirectionAngles(42.0, 10.0));
    CHECK(clamp_to_scan_envelope({-50.0, -60.0}, 42.0) == DirectionAngles(-42.0, -42.0));
    CHECK(clamp_to_scan_envelope({12.5, -3.0}, 42.0) == DirectionAngles(12.5, -3.0));
    CHECK(clamp_to_scan_envelope({42.0, 42.0}, 42.0) == DirectionAngles(42.0, 42.0));
    CHECK_THROWS_AS(clamp_to_scan_envelope({0.0, 0.0}, 0.0), Error);
    CHECK_THROWS_AS(clamp_to_scan_envelope({0.0, 0.0}, 91.0), Error);
}

TEST_CASE("tracker_step - examples")
{
    const auto cfg = test::reference_array();
    TrackerConfig tc;
    const auto s0 = initial_tracker_state(cfg);
    CHECK(s0.command == DirectionAngles(0.0, 0.0));

    tc.smoothing_alpha = 1.0;
    CHECK(tracker_step(cfg, s0, {20.0, 10.0}, tc).command == DirectionAngles(20.0, 10.0));

    tc.smoothing_alpha = 0.5;
    const auto half = tracker_step(cfg, s0, {10.0, 0.0}, tc);
    CHECK(half.command.azimuth() == Approx(5.0));
    CHECK(half.command.elevation() == Approx(0.0).margin(1e-15));
    CHECK((half.weights.entries - steering_weights(cfg, half.command).entries).norm() == 0.0);

    // estimate equal to the current command is a fixed point
    const auto fixed = tracker_step(cfg, half, half.command, tc);
    CHECK(fixed.command == half.command);

    tc.smoothing_alpha = 1.0;
    CHECK(tracker_step(cfg, s0, {60.0, -70.0}, tc).command == DirectionAngles(42.0, -42.0));
}

TEST_CASE("tracker_step - smoothing moves monotonically toward a fixed estimate")
{
    const auto cfg = test::reference_array();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> a(-40.0, 40.0), alpha(0.05, 1.0);
    for (int trial = 0; trial < 25; ++trial)
    {
        TrackerConfig tc;
        tc.smoothing_alpha = alpha(rng);
        const DirectionAngles target(a(rng), a(rng));
        auto s = initial_tracker_state(cfg);
        double prev = angular_separation(s.command, target);
        for (int k = 0; k < 15; ++k)
        {
            s = tracker_step(cfg, s, target, tc);
            const double d = angular_separation(s.command, target);
            CHECK(d <= prev + 1e-12);
            prev = d;
        }
    }
}

TEST_CASE("tracker_step - command stays inside the scan envelope")
{
    const auto cfg = test::reference_array();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> a(-90.0, 90.0), alpha(0.05, 1.0);
    TrackerConfig tc;
    auto s = initial_tracker_state(cfg);
    for (int k = 0; k < 200; ++k)
    {
        tc.smoothing_alpha = alpha(rng);
        s = tracker_step(cfg, s, {a(rng), a(rng)}, tc);
        CHECK(std::abs(s.command.azimuth()) <= tc.scan_limit_deg);
        CHECK(std::abs(s.command.elevation()) <= tc.scan_limit_deg);
    }
}

TEST_CASE("Trajectory - interpolation and validation")
{
    const auto t = Trajectory::from_waypoints({{0.0, {0.0, 0.0}}, {2.0, {20.0, -10.0}}}, 3.0);
    CHECK(t.at(1.0).azimuth() == Approx(10.0));
    CHECK(t.at(1.0).elevation() == Approx(-5.0));
    CHECK(t.at(2.5) == DirectionAngles(20.0, -10.0));
    CHECK(t.duration() == 3.0);

    const auto r = Trajectory::constant_rate({20.0, 5.0}, 10.0, -1.0, 5.0);
    CHECK(r.at(2.0).azimuth() == Approx(40.0));
    CHECK(r.at(2.0).elevation() == Approx(3.0));

    CHECK_THROWS_AS(Trajectory::from_waypoints({}, 1.0), Error);
    CHECK_THROWS_AS(Trajectory::from_waypoints({{1.0, {0.0, 0.0}}, {1.0, {1.0, 0.0}}}, 2.0), Error);
    CHECK_THROWS_AS(Trajectory::from_waypoints({{0.0, {120.0, 0.0}}}, 1.0), Error);
    CHECK_THROWS_AS(Trajectory::constant_rate({80.0, 0.0}, 10.0, 0.0, 5.0), Error);
    CHECK_THROWS_AS(Trajectory::constant_rate({0.0, 0.0}, 0.0, 0.0, -1.0), Error);
}

TEST_CASE("TrackerConfig - validation")
{
    TrackerConfig tc;
    CHECK_NOTHROW(tc.validate());
    for (auto mutate : std::vector<void (*)(TrackerConfig &)>{
             [](TrackerConfig &c) { c.update_period_s = 0.0; },
             [](TrackerConfig &c) { c.smoothing_alpha = 0.0; },
             [](TrackerConfig &c) { c.smoothing_alpha = 1.5; },
             [](TrackerConfig &c) { c.snapshots_per_update = 0; },
             [](TrackerConfig &c) { c.grid_step_deg = -1.0; },
             [](TrackerConfig &c) { c.scan_limit_deg = 95.0; }})
    {
        TrackerConfig bad;
        mutate(bad);
        CHECK_THROWS_AS(bad.validate(), Error);
    }
}

TEST_CASE("run_tracking - stationary target converges within three updates")
{
    const auto cfg = test::reference_array();
    const ElementModel model;
    const DirectionAngles target(20.0, 10.0);
    const auto traj = Trajectory::from_waypoints({{0.0, target}}, 1.0);
    const auto log = run_tracking(cfg, model, traj, TrackerConfig{}, 7);
    REQUIRE(log.rows.size() == 10);
    const double best_dbi = directivity(cfg, steering_weights(cfg, target), model, target);
    for (std::size_t k = 2; k < log.rows.size(); ++k)
    {
        CHECK(log.rows[k].pointing_error_deg <= 1.0);
        CHECK(log.rows[k].realized_gain_dbi >= best_dbi - 3.0);
        CHECK(log.rows[k].flags == 0u);
    }
    for (std::size_t k = 0; k < log.rows.size(); ++k)
        CHECK(log.rows[k].time_s == Approx(0.1 * static_cast<double>(k)));
}

TEST_CASE("run_tracking - target beyond the envelope saturates the command")
{
    const auto cfg = test::reference_array();
    const auto traj = Trajectory::constant_rate({20.0, 5.0}, 10.0, 0.0, 5.0);
    TrackerConfig tc;
    tc.update_period_s = 0.25;
    const auto log = run_tracking(cfg, ElementModel{}, traj, tc, 11);
    REQUIRE(log.rows.size() == 20);
    double prev_gain = 1e9;
    bool saw_beyond = false;
    for (const auto &r : log.rows)
    {
        CHECK(std::abs(r.steered.azimuth()) <= 42.0);
        if (r.true_angles.azimuth() >= 50.0)
        {
            saw_beyond = true;
            CHECK(r.steered.azimuth() == 42.0);
            CHECK((r.flags & track_flags::clamped) != 0u);
            CHECK(r.realized_gain_dbi < prev_gain);
            prev_gain = r.realized_gain_dbi;
        }
    }
    CHECK(saw_beyond);
}

TEST_CASE("run_tracking - tick count and zero-duration rejection")
{
    const auto cfg = test::reference_array();
    TrackerConfig tc;
    tc.update_period_s = 0.3;
    const auto traj = Trajectory::from_waypoints({{0.0, {5.0, 5.0}}}, 0.9);
    CHECK(run_tracking(cfg, ElementModel{}, traj, tc, 1).rows.size() == 3);

    CHECK(kind_of_run(Trajectory::from_waypoints({{0.0, {5.0, 5.0}}}, 0.0), TrackerConfig{}) ==
          ErrorKind::invalid_scenario);
    CHECK(kind_of_run(Trajectory::from_waypoints({{0.0, {5.0, 5.0}}}, 0.05), TrackerConfig{}) ==
          ErrorKind::invalid_scenario);
    TrackerConfig bad;
    bad.smoothing_alpha = 0.0;
    CHECK(kind_of_run(traj, bad) == ErrorKind::invalid_argument);
}

TEST_CASE("run_tracking - identical seeds give identical logs, different seeds differ")
{
    const auto cfg = test::reference_array();
    const auto traj = Trajectory::constant_rate({-10.0, 0.0}, 4.0, 2.0, 1.0);
    TrackerConfig tc;
    tc.snr_db = 5.0;
    tc.snapshots_per_update = 20;
    const auto a = track_log_to_csv(run_tracking(cfg, ElementModel{}, traj, tc, 99));
    const auto b = track_log_to_csv(run_tracking(cfg, ElementModel{}, traj, tc, 99));
    const auto c = track_log_to_csv(run_tracking(cfg, ElementModel{}, traj, tc, 100));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("track_log_to_csv - layout")
{
    TrackLog log;
    log.rows.push_back({0.5, {1.0, 2.0}, {1.5, 2.5}, {42.0, -3.0}, 0.25, 14.5,
                        track_flags::clamped | track_flags::hold});
    log.rows.push_back({1.0, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, 0.0, 15.0, 0u});
    CHECK(track_log_to_csv(log) == "t_s,true_az,true_el,est_az,est_el,steer_az,steer_el,err_deg,gain_dbi,flags\n"
                                   "0.5,1,2,1.5,2.5,42,-3,0.25,14.5,clamped|hold\n"
                                   "1,0,0,0,0,0,0,0,15,\n");
}
