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

#include "beamtrack/doa_music.hpp"
#include "beamtrack/beamforming.hpp"
#include "beamtrack/error.hpp"
#include "text_format.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <utility>

namespace beamtrack
{
    namespace
    {
        std::vector<double> axis_points(double lo, double hi, double step, const char *name)
        {
            if (!(step > 0.0) || !std::isfinite(step))
                throw Error(ErrorKind::invalid_argument, "grid step must be > 0");
            if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
                throw Error(ErrorKind::invalid_argument, std::string(name) + " range is empty");
            const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
            std::vector<double> pts(count);
            for (std::size_t i = 0; i < count; ++i)
                pts[i] = lo + static_cast<double>(i) * step;
            return pts;
        }

        // Steering vectors over a grid without rebuilding the lattice every call.
        class ManifoldSampler
        {
        public:
            explicit ManifoldSampler(const ArrayConfig &config)
                : positions_(element_positions(config)), k_(config.wavenumber()),
                  a_(static_cast<Eigen::Index>(positions_.size()))
            {
            }

            const Eigen::VectorXcd &at(const DirectionAngles &angles)
            {
                const auto dc = direction_cosines(angles);
                for (std::size_t n = 0; n < positions_.size(); ++n)
                    a_[static_cast<Eigen::Index>(n)] =
                        std::polar(1.0, k_ * (positions_[n].x * dc.u + positions_[n].y * dc.v));
                return a_;
            }

        private:
            std::vector<ElementPosition> positions_;
            double k_;
            Eigen::VectorXcd a_;
        };

        double music_from_steering(const Eigen::MatrixXcd &noise_basis, const Eigen::VectorXcd &a)
        {
            const double floor = 1e-12 * static_cast<double>(a.size());
            const double denom = noise_basis.cols() == 0 ? 0.0 : (noise_basis.adjoint() * a).squaredNorm();
            return 1.0 / std::max(denom, floor);
        }

        // Vertex offset of the parabola through (-1, d_m), (0, d_0), (1, d_p), in [-0.5, 0.5].
        double parabolic_offset(double d_m, double d_0, double d_p)
        {
            const double curvature = d_m - 2.0 * d_0 + d_p;
            if (!(curvature > 0.0))
                return 0.0;
            return std::clamp(0.5 * (d_m - d_p) / curvature, -0.5, 0.5);
        }

        // Stationary point of the quadratic through a 3x3 neighbourhood of denominators,
        // d[de + 1][da + 1], in cells. Falls back to per-axis parabolas when the fit is not convex.
        std::pair<double, double> quadratic_offset(const double (&d)[3][3])
        {
            const double gaz = 0.5 * (d[1][2] - d[1][0]);
            const double gel = 0.5 * (d[2][1] - d[0][1]);
            const double haa = d[1][0] - 2.0 * d[1][1] + d[1][2];
            const double hee = d[0][1] - 2.0 * d[1][1] + d[2][1];
            const double hae = 0.25 * (d[2][2] - d[2][0] - d[0][2] + d[0][0]);
            const double det = haa * hee - hae * hae;
            if (haa > 0.0 && det > 0.0)
            {
                const double oaz = (-gaz * hee + gel * hae) / det;
                const double oel = (-gel * haa + gaz * hae) / det;
                return {std::clamp(oaz, -1.0, 1.0), std::clamp(oel, -1.0, 1.0)};
            }
            return {parabolic_offset(d[1][0], d[1][1], d[1][2]), parabolic_offset(d[0][1], d[1][1], d[2][1])};
        }
    }

    std::vector<double> AngleGrid::azimuths() const { return axis_points(az_min, az_max, step, "azimuth"); }

    std::vector<double> AngleGrid::elevations() const
    {
        if (el_min < -90.0 || el_max > 90.0)
            throw Error(ErrorKind::invalid_argument, "elevation grid must lie within [-90, 90]");
        return axis_points(el_min, el_max, step, "elevation");
    }

    CovarianceMatrix covariance(const SnapshotMatrix &m, bool forward_backward)
    {
        const auto &x = m.data();
        Eigen::MatrixXcd r = (x * x.adjoint()) / static_cast<double>(x.cols());
        if (forward_backward)
        {
            // J conj(R) J with J the exchange matrix: reverse rows and columns
            const Eigen::MatrixXcd flipped = r.conjugate().colwise().reverse().rowwise().reverse();
            r = 0.5 * (r + flipped);
        }
        // remove rounding asymmetry so R is exactly Hermitian
        r = 0.5 * (r + r.adjoint()).eval();
        return {std::move(r)};
    }

    EigenDecomposition eigendecompose(const CovarianceMatrix &r)
    {
        const auto &a = r.data;
        if (a.rows() != a.cols() || a.rows() == 0)
            throw Error(ErrorKind::dimension, "covariance must be a non-empty square matrix");
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
        if (!(asym <= 1e-10 * scale))
            throw Error(ErrorKind::invalid_argument, "covariance is not Hermitian (max |R - R^H| = " +
                                                         std::to_string(asym) + ")");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorKind::degenerate, "eigendecomposition did not converge");

        // Eigen returns ascending order
        EigenDecomposition e;
        e.values = solver.eigenvalues().reverse();
        e.vectors = solver.eigenvectors().rowwise().reverse();
        return e;
    }

    Eigen::MatrixXcd noise_subspace(const EigenDecomposition &e, std::size_t num_sources)
    {
        const auto n = static_cast<std::size_t>(e.values.size());
        if (num_sources < 1 || num_sources >= n)
            throw Error(ErrorKind::invalid_argument, "num_sources must be in [1, " + std::to_string(n - 1) +
                                                         "], got " + std::to_string(num_sources));
        const auto k = static_cast<Eigen::Index>(num_sources);
        return e.vectors.rightCols(static_cast<Eigen::Index>(n) - k);
    }

    double music_value(const ArrayConfig &config, const Eigen::MatrixXcd &noise_basis,
                       const DirectionAngles &angles)
    {
        return music_from_steering(noise_basis, steering_vector(config, angles).entries);
    }

    MusicSpectrum music_spectrum(const ArrayConfig &config, const Eigen::MatrixXcd &noise_basis,
                                 const AngleGrid &grid)
    {
        if (noise_basis.rows() != static_cast<Eigen::Index>(config.num_elements()))
            throw Error(ErrorKind::dimension, "noise subspace row count does not match the array");

        MusicSpectrum s;
        s.az_grid = grid.azimuths();
        s.el_grid = grid.elevations();
        s.values.resize(s.az_grid.size() * s.el_grid.size());

        ManifoldSampler sampler(config);
        std::size_t idx = 0;
        for (double el : s.el_grid)
            for (double az : s.az_grid)
                s.values[idx++] = music_from_steering(noise_basis, sampler.at(DirectionAngles(az, el)));
        return s;
    }

    PeakSearchResult find_peaks(const MusicSpectrum &s, std::size_t num_sources, bool refine)
    {
        const std::size_t naz = s.az_grid.size();
        const std::size_t nel = s.el_grid.size();
        if (num_sources < 1)
            throw Error(ErrorKind::invalid_argument, "num_sources must be >= 1");
        if (naz * nel == 0 || s.values.size() != naz * nel)
            throw Error(ErrorKind::dimension, "spectrum values do not match its grid");
        if (num_sources > naz * nel)
            throw Error(ErrorKind::invalid_argument, "more sources requested than grid cells");

        const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
        if (*mx - *mn <= 1e-12 * std::abs(*mx))
            throw Error(ErrorKind::ambiguous, "spectrum is constant; no peak can be selected");

        auto is_strict_max = [&](std::size_t ie, std::size_t ia) {
            const double v = s.at(ie, ia);
            for (int de = -1; de <= 1; ++de)
                for (int da = -1; da <= 1; ++da)
                {
                    if (de == 0 && da == 0)
                        continue;
                    const auto e = static_cast<long>(ie) + de;
                    const auto a = static_cast<long>(ia) + da;
                    if (e < 0 || a < 0 || e >= static_cast<long>(nel) || a >= static_cast<long>(naz))
                        continue;
                    if (!(v > s.at(static_cast<std::size_t>(e), static_cast<std::size_t>(a))))
                        return false;
                }
            return true;
        };

        // value descending, then smallest elevation, then smallest azimuth
        auto order = [&](std::size_t i, std::size_t j) {
            if (s.values[i] != s.values[j])
                return s.values[i] > s.values[j];
            return i < j; // row-major index: elevation outer, azimuth inner
        };

        std::vector<std::size_t> maxima;
        for (std::size_t ie = 0; ie < nel; ++ie)
            for (std::size_t ia = 0; ia < naz; ++ia)
                if (is_strict_max(ie, ia))
                    maxima.push_back(ie * naz + ia);
        std::sort(maxima.begin(), maxima.end(), order);

        PeakSearchResult out;
        std::vector<std::size_t> chosen(maxima.begin(), maxima.begin() + static_cast<long>(std::min(num_sources, maxima.size())));
        if (chosen.size() < num_sources)
        {
            out.degraded = true;
            std::vector<std::size_t> rest(s.values.size());
            std::iota(rest.begin(), rest.end(), std::size_t{0});
            std::sort(rest.begin(), rest.end(), order);
            for (std::size_t idx : rest)
            {
                if (chosen.size() == num_sources)
                    break;
                if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end())
                    chosen.push_back(idx);
            }
        }

        for (std::size_t idx : chosen)
        {
            const std::size_t ie = idx / naz;
            const std::size_t ia = idx % naz;
            double az = s.az_grid[ia];
            double el = s.el_grid[ie];
            if (refine)
            {
                const double d0 = 1.0 / s.at(ie, ia);
                const double daz = naz > 1 ? s.az_grid[1] - s.az_grid[0] : 0.0;
                const double del = nel > 1 ? s.el_grid[1] - s.el_grid[0] : 0.0;
                const bool az_inner = ia > 0 && ia + 1 < naz;
                const bool el_inner = ie > 0 && ie + 1 < nel;
                if (az_inner && el_inner)
                {
                    double d[3][3];
                    for (int de = -1; de <= 1; ++de)
                        for (int da = -1; da <= 1; ++da)
                            d[de + 1][da + 1] = 1.0 / s.at(ie + de, ia + da);
                    const auto [oaz, oel] = quadratic_offset(d);
                    az += daz * oaz;
                    el += del * oel;
                }
                else if (az_inner)
                    az += daz * parabolic_offset(1.0 / s.at(ie, ia - 1), d0, 1.0 / s.at(ie, ia + 1));
                else if (el_inner)
                    el += del * parabolic_offset(1.0 / s.at(ie - 1, ia), d0, 1.0 / s.at(ie + 1, ia));
                el = std::clamp(el, -90.0, 90.0);
            }
            out.angles.emplace_back(az, el);
            out.peak_values.push_back(s.values[idx]);
        }
        return out;
    }

    DoaEstimate estimate_doa(const ArrayConfig &config, const SnapshotMatrix &m,
                             std::size_t num_sources, const DoaOptions &options)
    {
        if (m.num_elements() != static_cast<Eigen::Index>(config.num_elements()))
            throw Error(ErrorKind::dimension, "snapshot rows (" + std::to_string(m.num_elements()) +
                                                  ") do not match array elements (" +
                                                  std::to_string(config.num_elements()) + ")");
        if (num_sources < 1 || num_sources >= config.num_elements())
            throw Error(ErrorKind::invalid_argument, "num_sources must be in [1, " +
                                                         std::to_string(config.num_elements() - 1) + "]");

        const auto r = covariance(m, options.forward_backward);
        const auto e = eigendecompose(r);
        const auto en = noise_subspace(e, num_sources);

        DoaEstimate est;
        est.spectrum = music_spectrum(config, en, options.grid);
        auto peaks = find_peaks(est.spectrum, num_sources, options.refine);
        est.angles = std::move(peaks.angles);
        est.peak_values = std::move(peaks.peak_values);
        est.degraded = peaks.degraded;
        est.rank_deficient = m.num_snapshots() < m.num_elements();
        return est;
    }

    std::string spectrum_to_csv(const MusicSpectrum &s)
    {
        std::string out = "az_deg,el_deg,value\n";
        for (std::size_t ie = 0; ie < s.el_grid.size(); ++ie)
            for (std::size_t ia = 0; ia < s.az_grid.size(); ++ia)
            {
                out += detail::format_significant(s.az_grid[ia], 9);
                out += ',';
                out += detail::format_significant(s.el_grid[ie], 9);
                out += ',';
                out += detail::format_significant(s.at(ie, ia), 9);
                out += '\n';
            }
        return out;
    }

    std::string estimate_to_record(const DoaEstimate &e)
    {
        nlohmann::ordered_json j;
        j["num_sources"] = e.angles.size();
        j["degraded_flag"] = e.degraded;
        j["rank_deficient_flag"] = e.rank_deficient;
        auto list = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < e.angles.size(); ++i)
        {
            nlohmann::ordered_json item;
            item["azimuth_deg"] = e.angles[i].azimuth();
            item["elevation_deg"] = e.angles[i].elevation();
            item["peak_value"] = e.peak_values[i];
            item["degraded_flag"] = e.degraded;
            list.push_back(std::move(item));
        }
        j["estimates"] = std::move(list);
        return j.dump();
    }
}
