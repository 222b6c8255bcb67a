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

// Command-line front end. Links only the C interface of libbeamtrack.

#include "beamtrack/beamtrack.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace
{
    constexpr int exit_config = 2;
    constexpr int exit_numerical = 3;

    int exit_code_for(bt_status st)
    {
        switch (st)
        {
        case BT_ERR_DIMENSION:
        case BT_ERR_DEGENERATE:
        case BT_ERR_INCOMPLETE_CUT:
        case BT_ERR_AMBIGUOUS:
        case BT_ERR_INTERNAL:
            return exit_numerical;
        default:
            return exit_config;
        }
    }

    // Thrown out of a subcommand to unwind and exit with a code.
    struct StageFailure
    {
        int code;
    };

    void check(bt_status st, const char *stage)
    {
        if (st == BT_OK)
            return;
        std::fprintf(stderr, "beamtrack: %s failed (%s): %s\n", stage, bt_status_string(st), bt_last_error());
        throw StageFailure{exit_code_for(st)};
    }

    template <typename T, void (*Free)(T *)>
    struct Deleter
    {
        void operator()(T *p) const { Free(p); }
    };
    using ScenarioPtr = std::unique_ptr<bt_scenario, Deleter<bt_scenario, bt_scenario_free>>;
    using PatternPtr = std::unique_ptr<bt_pattern, Deleter<bt_pattern, bt_pattern_free>>;
    using SnapshotsPtr = std::unique_ptr<bt_snapshots, Deleter<bt_snapshots, bt_snapshots_free>>;
    using DoaPtr = std::unique_ptr<bt_doa_result, Deleter<bt_doa_result, bt_doa_free>>;
    using TrackPtr = std::unique_ptr<bt_track_log, Deleter<bt_track_log, bt_track_free>>;

    ScenarioPtr load(const std::string &path)
    {
        bt_scenario *raw = nullptr;
        check(bt_scenario_load(path.c_str(), &raw), "config");
        return ScenarioPtr(raw);
    }

    std::string output_path(const bt_scenario *sc, bt_output_kind kind, const std::string &flag_value,
                            const char *flag_name)
    {
        if (!flag_value.empty())
            return flag_value;
        size_t needed = 0;
        bt_scenario_output_path(sc, kind, nullptr, 0, &needed);
        std::vector<char> buf(needed);
        check(bt_scenario_output_path(sc, kind, buf.data(), buf.size(), &needed), "config");
        std::string path(buf.data());
        if (path.empty())
        {
            std::fprintf(stderr, "beamtrack: config failed: no %s given and none set under \"outputs\"\n", flag_name);
            throw StageFailure{exit_config};
        }
        return path;
    }

    template <typename Fn>
    std::string record_string(Fn &&fill, const char *stage)
    {
        size_t needed = 0;
        fill(nullptr, 0, &needed);
        std::vector<char> buf(needed > 0 ? needed : 1);
        check(fill(buf.data(), buf.size(), &needed), stage);
        return std::string(buf.data());
    }

    struct PatternArgs
    {
        std::string config;
        double steer_az = 0.0;
        double steer_el = 0.0;
        std::string cut = "az";
        double span = 90.0;
        double step = 0.1;
        std::string out;
        std::string out_metrics;
    };

    int run_pattern(const PatternArgs &a)
    {
        auto sc = load(a.config);
        const auto csv = output_path(sc.get(), BT_OUTPUT_PATTERN, a.out, "--out");
        const auto metrics_path = a.out_metrics.empty() ? csv + ".metrics.json" : a.out_metrics;

        const bt_pattern_request req{a.steer_az, a.steer_el, a.cut == "az" ? BT_CUT_AZIMUTH : BT_CUT_ELEVATION,
                                     a.span, a.step};
        bt_pattern *raw = nullptr;
        check(bt_pattern_compute(sc.get(), &req, &raw), "pattern");
        PatternPtr pattern(raw);

        const auto record = record_string(
            [&](char *b, size_t c, size_t *n) { return bt_pattern_metrics_record(pattern.get(), b, c, n); },
            "metrics");
        check(bt_pattern_write(pattern.get(), csv.c_str(), metrics_path.c_str()), "write");
        std::printf("%s\n", record.c_str());
        return 0;
    }

    struct SnapshotArgs
    {
        std::string config;
        std::size_t t = 1;
        std::uint64_t seed = 0;
        bool seed_given = false;
        std::string out;
    };

    int run_snapshots(const SnapshotArgs &a)
    {
        auto sc = load(a.config);
        const auto out = output_path(sc.get(), BT_OUTPUT_SNAPSHOTS, a.out, "--out");
        std::uint64_t seed = a.seed;
        if (!a.seed_given)
            check(bt_scenario_noise_seed(sc.get(), &seed), "config");
        bt_snapshots *raw = nullptr;
        check(bt_snapshots_generate(sc.get(), a.t, seed, &raw), "snapshots");
        SnapshotsPtr snaps(raw);
        check(bt_snapshots_save(snaps.get(), out.c_str()), "write");
        size_t n = 0, t = 0;
        bt_snapshots_shape(snaps.get(), &n, &t);
        std::printf("{\"n_elements\":%zu,\"t\":%zu,\"seed\":%llu,\"path\":\"%s\"}\n", n, t,
                    static_cast<unsigned long long>(seed), out.c_str());
        return 0;
    }

    struct DoaArgs
    {
        std::string config;
        std::string in;
        std::size_t sources = 1;
        double grid_step = 0.0;
        std::string out_spectrum;
        std::string out_estimate;
    };

    int run_doa(const DoaArgs &a)
    {
        auto sc = load(a.config);
        const auto spectrum = output_path(sc.get(), BT_OUTPUT_SPECTRUM, a.out_spectrum, "--out-spectrum");
        const auto estimate = output_path(sc.get(), BT_OUTPUT_ESTIMATE, a.out_estimate, "--out-estimate");

        bt_snapshots *raw_snaps = nullptr;
        check(bt_snapshots_load(a.in.c_str(), &raw_snaps), "load snapshots");
        SnapshotsPtr snaps(raw_snaps);

        bt_doa_result *raw = nullptr;
        check(bt_doa_estimate(sc.get(), snaps.get(), a.sources, a.grid_step, &raw), "doa");
        DoaPtr result(raw);

        const auto record =
            record_string([&](char *b, size_t c, size_t *n) { return bt_doa_record(result.get(), b, c, n); }, "doa");
        check(bt_doa_write(result.get(), spectrum.c_str(), estimate.c_str()), "write");
        std::printf("%s\n", record.c_str());
        return 0;
    }

    struct TrackArgs
    {
        std::string config;
        std::uint64_t seed = 0;
        std::string out;
    };

    int run_track(const TrackArgs &a)
    {
        auto sc = load(a.config);
        const auto out = output_path(sc.get(), BT_OUTPUT_TRACK, a.out, "--out");
        bt_track_log *raw = nullptr;
        check(bt_track_run(sc.get(), a.seed, &raw), "track");
        TrackPtr log(raw);
        check(bt_track_write(log.get(), out.c_str()), "write");

        size_t rows = 0;
        bt_track_row_count(log.get(), &rows);
        bt_track_row last{};
        if (rows > 0)
            bt_track_get_row(log.get(), rows - 1, &last);
        std::printf("{\"rows\":%zu,\"final_err_deg\":%.6g,\"final_gain_dbi\":%.6g,\"path\":\"%s\"}\n", rows,
                    last.pointing_error_deg, last.realized_gain_dbi, out.c_str());
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"beamtrack: phased-array pattern synthesis, MUSIC direction finding and beam tracking"};
    app.set_version_flag("--version", bt_version());
    app.require_subcommand(1);

    PatternArgs pattern;
    auto *pat = app.add_subcommand("pattern", "Steer the array and write a far-field pattern cut with its metrics");
    pat->add_option("--config", pattern.config, "Scenario file (JSON)")->required();
    pat->add_option("--steer-az", pattern.steer_az, "Steering azimuth [deg]");
    pat->add_option("--steer-el", pattern.steer_el, "Steering elevation [deg]");
    pat->add_option("--cut", pattern.cut, "Cut axis: az sweeps azimuth at the steer elevation, el sweeps elevation")
        ->check(CLI::IsMember({"az", "el"}));
    pat->add_option("--span", pattern.span, "Cut half-width: samples run from -span to +span [deg]");
    pat->add_option("--step", pattern.step, "Cut sample spacing [deg]");
    pat->add_option("--out", pattern.out, "Pattern CSV path (angle_deg,gain_dbi); defaults to outputs.pattern");
    pat->add_option("--out-metrics", pattern.out_metrics, "Metrics record path [default: <out>.metrics.json]");

    SnapshotArgs snaps;
    auto *snp = app.add_subcommand("snapshots", "Simulate array snapshots for the scenario's sources");
    snp->add_option("--config", snaps.config, "Scenario file (JSON)")->required();
    snp->add_option("--t", snaps.t, "Number of snapshots [count]")->required()->check(CLI::PositiveNumber);
    auto *seed_opt = snp->add_option("--seed", snaps.seed, "RNG seed [integer; default: noise.seed]");
    snp->add_option("--out", snaps.out, "Snapshot file path; defaults to outputs.snapshots");

    DoaArgs doa;
    auto *dcmd = app.add_subcommand("doa", "Estimate directions of arrival with MUSIC");
    dcmd->add_option("--config", doa.config, "Scenario file (JSON), provides the array geometry")->required();
    dcmd->add_option("--in", doa.in, "Snapshot file to analyse")->required();
    dcmd->add_option("--sources", doa.sources, "Assumed number of sources [count]");
    dcmd->add_option("--grid-step", doa.grid_step, "Spectrum grid step [deg; default: doa.grid_step_deg]");
    dcmd->add_option("--out-spectrum", doa.out_spectrum, "Spectrum CSV path (az_deg,el_deg,value)");
    dcmd->add_option("--out-estimate", doa.out_estimate, "Estimate record path (JSON)");

    TrackArgs track;
    auto *tcmd = app.add_subcommand("track", "Run the closed-loop tracker along the scenario trajectory");
    tcmd->add_option("--config", track.config, "Scenario file (JSON) with a trajectory section")->required();
    tcmd->add_option("--seed", track.seed, "RNG seed [integer]");
    tcmd->add_option("--out", track.out, "Track log CSV path; defaults to outputs.track");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try
    {
        if (*pat)
            return run_pattern(pattern);
        if (*snp)
        {
            snaps.seed_given = static_cast<bool>(*seed_opt);
            return run_snapshots(snaps);
        }
        if (*dcmd)
            return run_doa(doa);
        if (*tcmd)
            return run_track(track);
    }
    catch (const StageFailure &f)
    {
        return f.code;
    }
    return 0;
}
