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
#include "beamtrack/scenario.hpp"

#include <filesystem>
#include <string>

using namespace beamtrack;
namespace fs = std::filesystem;

namespace
{
    std::string config_error(const std::string &text)
    {
        try
        {
            parse_scenario(text);
        }
        catch (const Error &e)
        {
            CHECK(e.kind() == ErrorKind::config);
            return e.what();
        }
        FAIL("expected a config error for " << text);
        return {};
    }

    fs::path scratch_dir(const std::string &name)
    {
        const auto dir = fs::temp_directory_path() / ("beamtrack_scenario_" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    std::size_t entries_in(const fs::path &dir)
    {
        std::size_t n = 0;
        for ([[maybe_unused]] const auto &e : fs::directory_iterator(dir))
            ++n;
        return n;
    }
}

TEST_CASE("parse_scenario - empty document yields the reference defaults")
{
    const auto sc = parse_scenario("{}");
    CHECK(sc.array.num_elements() == 16);
    CHECK(sc.array.carrier_frequency() == 2.4e9);
    CHECK(sc.array.spacing_x() == 0.05);
    CHECK(sc.array.scan_limit() == 42.0);
    CHECK(sc.element.kind == ElementKind::cosine_power);
    CHECK(sc.element.exponent == default_cosine_exponent);
    CHECK(sc.sources.empty());
    CHECK(std::isinf(sc.noise.snr_db));
    CHECK_FALSE(sc.trajectory.has_value());
    CHECK_FALSE(sc.element_gains.has_value());
    CHECK(sc.tracker.scan_limit_deg == 42.0);
    CHECK(sc.doa.grid.step == 1.0);
    CHECK(sc.outputs.pattern.empty());
}

TEST_CASE("parse_scenario - full document")
{
    const auto sc = parse_scenario(R"({
      "array": {"carrier_frequency_hz": 3e9, "num_x": 2, "num_y": 3, "spacing_x_m": 0.04,
                "spacing_y_m": 0.045, "scan_limit_deg": 30, "metadata": {"patch_width_m": 0.038}},
      "element_model": {"kind": "isotropic"},
      "quadrature_step_deg": 1.0,
      "sources": [{"azimuth_deg": -30, "elevation_deg": 22.9389, "power": 2.0},
                  {"azimuth_deg": 10, "elevation_deg": -5}],
      "noise": {"snr_db": 15, "seed": 42},
      "calibration": {"element_gains": [[1,0],[0.9,0.1],[1,0],[1,0],[1,-0.2],[1,0]]},
      "trajectory": {"kind": "constant_rate", "start": {"azimuth_deg": 20, "elevation_deg": 5},
                     "rate_az_deg_s": 10, "rate_el_deg_s": 0, "duration_s": 5},
      "tracker": {"update_period_s": 0.25, "smoothing_alpha": 0.5, "snapshots_per_update": 50,
                  "snr_db": "inf", "grid_step_deg": 0.5},
      "doa": {"az_min_deg": -60, "az_max_deg": 60, "el_min_deg": -45, "el_max_deg": 45,
              "grid_step_deg": 0.5, "forward_backward": true, "refine": true},
      "outputs": {"pattern": "p.csv", "track": "t.csv"}
    })");
    CHECK(sc.array.num_x() == 2);
    CHECK(sc.array.num_y() == 3);
    CHECK(sc.array.spacing_y() == 0.045);
    CHECK(sc.array.metadata().at("patch_width_m") == "0.038");
    CHECK(sc.element.kind == ElementKind::isotropic);
    CHECK(sc.quadrature_step_deg == 1.0);
    REQUIRE(sc.sources.size() == 2);
    CHECK(sc.sources[0].power == 2.0);
    CHECK(sc.sources[1].power == 1.0);
    CHECK(sc.sources[1].angles == DirectionAngles(10.0, -5.0));
    CHECK(sc.noise.snr_db == 15.0);
    CHECK(sc.noise.seed == 42u);
    REQUIRE(sc.element_gains.has_value());
    CHECK((*sc.element_gains)[4] == cdouble(1.0, -0.2));
    REQUIRE(sc.trajectory.has_value());
    CHECK(sc.trajectory->duration() == 5.0);
    CHECK(sc.trajectory->at(1.0).azimuth() == Catch::Approx(30.0));
    CHECK(sc.tracker.update_period_s == 0.25);
    CHECK(sc.tracker.snapshots_per_update == 50u);
    CHECK(std::isinf(sc.tracker.snr_db));
    CHECK(sc.tracker.scan_limit_deg == 30.0);
    CHECK(sc.doa.grid.az_min == -60.0);
    CHECK(sc.doa.forward_backward);
    CHECK(sc.doa.refine);
    CHECK(sc.outputs.pattern == "p.csv");
    CHECK(sc.outputs.track == "t.csv");
    CHECK(sc.outputs.spectrum.empty());
}

TEST_CASE("parse_scenario - errors name the offending key")
{
    CHECK_THAT(config_error(R"({"array": {"num_z": 4}})"), Catch::Matchers::ContainsSubstring("array.num_z"));
    CHECK_THAT(config_error(R"({"bogus": 1})"), Catch::Matchers::ContainsSubstring("bogus"));
    CHECK_THAT(config_error(R"({"array": {"num_x": -1}})"), Catch::Matchers::ContainsSubstring("array.num_x"));
    CHECK_THAT(config_error(R"({"array": {"num_x": "four"}})"), Catch::Matchers::ContainsSubstring("array.num_x"));
    CHECK_THAT(config_error(R"({"array": {"carrier_frequency_hz": 0}})"),
               Catch::Matchers::ContainsSubstring("array"));
    CHECK_THAT(config_error(R"({"sources": [{"azimuth_deg": 0, "elevation_deg": 0, "power": -1}]})"),
               Catch::Matchers::ContainsSubstring("sources[0].power"));
    CHECK_THAT(config_error(R"({"sources": [{"azimuth_deg": 120, "elevation_deg": 0}]})"),
               Catch::Matchers::ContainsSubstring("sources[0]"));
    CHECK_THAT(config_error(R"({"sources": [{"azimuth_deg": 0, "elevation_deg": 95}]})"),
               Catch::Matchers::ContainsSubstring("sources[0].elevation_deg"));
    CHECK_THAT(config_error(R"({"element_model": {"kind": "horn"}})"),
               Catch::Matchers::ContainsSubstring("element_model.kind"));
    CHECK_THAT(config_error(R"({"noise": {"snr_db": "loud"}})"), Catch::Matchers::ContainsSubstring("noise.snr_db"));
    CHECK_THAT(config_error(R"({"calibration": {"element_gains": [[1,0]]}})"),
               Catch::Matchers::ContainsSubstring("calibration.element_gains"));
    CHECK_THAT(config_error(R"({"trajectory": {"kind": "spiral"}})"),
               Catch::Matchers::ContainsSubstring("trajectory.kind"));
    CHECK_THAT(config_error(R"({"trajectory": {"kind": "constant_rate", "start": {"azimuth_deg": 80},
                                "rate_az_deg_s": 10, "duration_s": 5}})"),
               Catch::Matchers::ContainsSubstring("trajectory"));
    CHECK_THAT(config_error(R"({"tracker": {"smoothing_alpha": 2}})"), Catch::Matchers::ContainsSubstring("tracker"));
    CHECK_THAT(config_error(R"({"doa": {"grid_step_deg": 0}})"), Catch::Matchers::ContainsSubstring("doa"));
    CHECK_THAT(config_error(R"({"quadrature_step_deg": 0})"), Catch::Matchers::ContainsSubstring("quadrature_step_deg"));
    CHECK_THAT(config_error("{not json"), Catch::Matchers::ContainsSubstring("JSON"));
    CHECK_THAT(config_error("[1, 2]"), Catch::Matchers::ContainsSubstring("object"));
}

TEST_CASE("load_scenario - missing file is a config error")
{
    try
    {
        load_scenario("/nonexistent/beamtrack/scenario.json");
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::config);
    }
}

TEST_CASE("load_scenario - bundled scenarios parse")
{
    for (const char *name : {"reference_doa.json", "stationary_track.json", "envelope_track.json"})
    {
        const auto sc = load_scenario(fs::path(BEAMTRACK_SCENARIO_DIR) / name);
        CHECK(sc.array.num_elements() == 16);
    }
}

TEST_CASE("write_files_atomic - writes every file and leaves no temporaries")
{
    const auto dir = scratch_dir("ok");
    write_files_atomic({{dir / "a.txt", "alpha"}, {dir / "b.txt", "beta\n"}});
    CHECK(read_file(dir / "a.txt") == "alpha");
    CHECK(read_file(dir / "b.txt") == "beta\n");
    CHECK(entries_in(dir) == 2);

    write_file_atomic(dir / "a.txt", "replaced");
    CHECK(read_file(dir / "a.txt") == "replaced");
    CHECK(entries_in(dir) == 2);
    fs::remove_all(dir);
}

TEST_CASE("write_files_atomic - failure on one file writes none")
{
    const auto dir = scratch_dir("fail");
    try
    {
        write_files_atomic({{dir / "good.txt", "x"}, {dir / "missing_subdir" / "bad.txt", "y"}});
        FAIL("expected an io error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::io);
    }
    CHECK(entries_in(dir) == 0);
    fs::remove_all(dir);
}

TEST_CASE("read_file - missing file is an io error")
{
    try
    {
        read_file("/nonexistent/beamtrack/file.txt");
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::io);
    }
}
