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

#ifndef BEAMTRACK_SIGNAL_MODEL_HPP
#define BEAMTRACK_SIGNAL_MODEL_HPP

#include "beamtrack/array_model.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace beamtrack
{
    struct SourceSpec
    {
        DirectionAngles angles;
        double power = 1.0; // linear, > 0
    };

    // snr_db is per element, total source power over noise power. +inf disables noise.
    struct NoiseSpec
    {
        double snr_db = std::numeric_limits<double>::infinity();
        std::uint64_t seed = 0;

        bool noiseless() const { return snr_db == std::numeric_limits<double>::infinity(); }
    };

    // N_elements x T complex baseband samples; row order matches element_positions().
    class SnapshotMatrix
    {
    public:
        explicit SnapshotMatrix(Eigen::MatrixXcd data);

        const Eigen::MatrixXcd &data() const { return data_; }
        Eigen::Index num_elements() const { return data_.rows(); }
        Eigen::Index num_snapshots() const { return data_.cols(); }

        bool operator==(const SnapshotMatrix &other) const;

    private:
        Eigen::MatrixXcd data_;
    };

    // x(t) = sum_i sqrt(p_i) s_i(t) g .* a(theta_i) + n(t) with unit-variance circular
    // Gaussian symbols s_i and circular Gaussian noise of variance sum(p_i) / 10^(snr/10).
    //
    // Random numbers come from a single std::mt19937_64 stream seeded with noise.seed and
    // std::normal_distribution; per column the source symbols are drawn first (re, im per
    // source), then the noise (re, im per element). `element_gains`, when given, is a
    // per-element complex gain g applied to the signal part (calibration error model).
    SnapshotMatrix generate_snapshots(const ArrayConfig &config, const std::vector<SourceSpec> &sources,
                                      const NoiseSpec &noise, std::size_t num_snapshots,
                                      const std::optional<Eigen::VectorXcd> &element_gains = std::nullopt);

    // Header `n_elements,t` (the two counts), then N*T lines `re,im` in column-major order
    // with 17 significant digits.
    std::string snapshots_to_text(const SnapshotMatrix &m);
    SnapshotMatrix snapshots_from_text(const std::string &text);

    void save_snapshots(const SnapshotMatrix &m, const std::filesystem::path &path);
    SnapshotMatrix load_snapshots(const std::filesystem::path &path);
}

#endif
