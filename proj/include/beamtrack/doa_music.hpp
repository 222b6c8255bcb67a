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

#ifndef BEAMTRACK_DOA_MUSIC_HPP
#define BEAMTRACK_DOA_MUSIC_HPP

#include "beamtrack/array_model.hpp"
#include "beamtrack/signal_model.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace beamtrack
{
    struct CovarianceMatrix
    {
        Eigen::MatrixXcd data;
    };

    // Eigenvalues sorted descending; column k of `vectors` pairs with values(k).
    struct EigenDecomposition
    {
        Eigen::VectorXd values;
        Eigen::MatrixXcd vectors;
    };

    // Uniform scan grid, inclusive bounds, degrees.
    struct AngleGrid
    {
        double az_min = -90.0;
        double az_max = 90.0;
        double el_min = -90.0;
        double el_max = 90.0;
        double step = 1.0;

        std::vector<double> azimuths() const;
        std::vector<double> elevations() const;
    };

    // values are row-major with elevation outer, azimuth inner.
    struct MusicSpectrum
    {
        std::vector<double> az_grid;
        std::vector<double> el_grid;
        std::vector<double> values;

        double at(std::size_t el_index, std::size_t az_index) const
        {
            return values[el_index * az_grid.size() + az_index];
        }
    };

    struct PeakSearchResult
    {
        std::vector<DirectionAngles> angles;
        std::vector<double> peak_values; // descending
        bool degraded = false;           // fewer strict local maxima than requested
    };

    struct DoaEstimate
    {
        std::vector<DirectionAngles> angles;
        std::vector<double> peak_values;
        bool degraded = false;
        bool rank_deficient = false; // fewer snapshots than elements
        MusicSpectrum spectrum;
    };

    struct DoaOptions
    {
        AngleGrid grid;
        bool forward_backward = false; // forward-backward averaging of the covariance
        bool refine = false;           // quadratic interpolation around each grid peak
    };

    // R = X X^H / T. With forward_backward, R is replaced by (R + J conj(R) J) / 2.
    CovarianceMatrix covariance(const SnapshotMatrix &m, bool forward_backward = false);

    // Throws invalid_argument if r is not Hermitian to 1e-10 (relative to max |r_ij|, floor 1).
    EigenDecomposition eigendecompose(const CovarianceMatrix &r);

    // Eigenvectors of the N - num_sources smallest eigenvalues.
    Eigen::MatrixXcd noise_subspace(const EigenDecomposition &e, std::size_t num_sources);

    // 1 / max(|E_n^H a|^2, 1e-12 N) over the grid. A zero-column E_n gives a flat spectrum.
    MusicSpectrum music_spectrum(const ArrayConfig &config, const Eigen::MatrixXcd &noise_basis,
                                 const AngleGrid &grid);

    // Value of the MUSIC pseudo-spectrum at a single direction.
    double music_value(const ArrayConfig &config, const Eigen::MatrixXcd &noise_basis,
                       const DirectionAngles &angles);

    PeakSearchResult find_peaks(const MusicSpectrum &s, std::size_t num_sources, bool refine = false);

    DoaEstimate estimate_doa(const ArrayConfig &config, const SnapshotMatrix &m,
                             std::size_t num_sources, const DoaOptions &options = {});

    // CSV `az_deg,el_deg,value`, row-major over the grid.
    std::string spectrum_to_csv(const MusicSpectrum &s);

    // JSON record with azimuth_deg, elevation_deg, peak_value and degraded_flag per source.
    std::string estimate_to_record(const DoaEstimate &e);
}

#endif
