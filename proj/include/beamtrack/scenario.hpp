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

#ifndef BEAMTRACK_SCENARIO_HPP
#define BEAMTRACK_SCENARIO_HPP

#include "beamtrack/array_model.hpp"
#include "beamtrack/beamforming.hpp"
#include "beamtrack/doa_music.hpp"
#include "beamtrack/signal_model.hpp"
#include "beamtrack/tracking.hpp"

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace beamtrack
{
    // Default output locations; command-line flags override them.
    struct OutputPaths
    {
        std::string pattern;
        std::string snapshots;
        std::string spectrum;
        std::string estimate;
        std::string track;
    };

    struct ScenarioConfig
    {
        ArrayConfig array = ArrayConfig::reference_4x4();
        ElementModel element;
        double quadrature_step_deg = default_quadrature_step_deg;
        std::vector<SourceSpec> sources;
        NoiseSpec noise;
        std::optional<Eigen::VectorXcd> element_gains;
        std::optional<Trajectory> trajectory;
        TrackerConfig tracker;
        DoaOptions doa;
        OutputPaths outputs;
    };

    // Parses a JSON scenario document. Every section is optional; unknown keys and
    // invariant violations raise ErrorKind::config naming the offending key.
    ScenarioConfig parse_scenario(const std::string &json_text);
    ScenarioConfig load_scenario(const std::filesystem::path &path);

    // Writes to a sibling temporary file and renames it into place.
    void write_file_atomic(const std::filesystem::path &path, const std::string &content);

    // Writes several files; nothing is renamed into place unless every temporary succeeded.
    void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>> &files);

    std::string read_file(const std::filesystem::path &path);
}

#endif
