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

#ifndef BEAMTRACK_BEAMFORMING_HPP
#define BEAMTRACK_BEAMFORMING_HPP

#include "beamtrack/array_model.hpp"

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace beamtrack
{
    using cdouble = std::complex<double>;

    // Per-element phase response to a plane wave, element order of element_positions().
    struct SteeringVector
    {
        Eigen::VectorXcd entries;
    };

    struct WeightVector
    {
        Eigen::VectorXcd entries;
    };

    // Default exponent of the cosine-power element surrogate.
    inline constexpr double default_cosine_exponent = 1.2;

    enum class ElementKind
    {
        isotropic,
        cosine_power
    };

    struct ElementModel
    {
        ElementKind kind = ElementKind::cosine_power;
        double exponent = default_cosine_exponent; // only used by cosine_power, >= 0

        static ElementModel isotropic() { return {ElementKind::isotropic, 0.0}; }
        static ElementModel cosine_power(double q);
    };

    enum class CutAxis
    {
        azimuth,  // sweep azimuth at fixed elevation
        elevation // sweep elevation at fixed azimuth
    };

    struct PatternSample
    {
        double angle_deg;
        double gain_dbi;
    };

    struct PatternCut
    {
        CutAxis axis = CutAxis::azimuth;
        double fixed_other_angle_deg = 0.0;
        std::vector<PatternSample> samples; // uniformly spaced, strictly increasing angle
    };

    struct PatternMetrics
    {
        double peak_gain_dbi = 0.0;
        double peak_angle_deg = 0.0;
        double hpbw_deg = 0.0;
        std::optional<double> sidelobe_level_db; // relative to peak, empty if no secondary lobe
    };

    // Angular step of the hemisphere quadrature used for gain normalization.
    inline constexpr double default_quadrature_step_deg = 0.5;

    // Gains below this floor (e.g. behind the array plane) are reported at -300 dBi.
    inline constexpr double gain_floor_dbi = -300.0;

    SteeringVector steering_vector(const ArrayConfig &config, const DirectionAngles &angles);

    // Conjugate of the steering vector at the target: uniform amplitude, phase only.
    WeightVector steering_weights(const ArrayConfig &config, const DirectionAngles &target);

    double element_amplitude(const ElementModel &model, const DirectionAngles &angles);

    cdouble array_response(const ArrayConfig &config, const WeightVector &weights,
                           const ElementModel &model, const DirectionAngles &angles);

    // Integral of |array_response|^2 over the visible hemisphere (w >= 0), midpoint rule
    // on a uniform (az, el) grid with the cos(el) Jacobian. Summation order is row-major
    // (elevation outer), so results do not depend on scheduling.
    double radiated_power(const ArrayConfig &config, const WeightVector &weights,
                          const ElementModel &model,
                          double quadrature_step_deg = default_quadrature_step_deg);

    // 4*pi*|F(steer)|^2 / P_rad in dBi.
    double directivity(const ArrayConfig &config, const WeightVector &weights,
                       const ElementModel &model, const DirectionAngles &steer,
                       double quadrature_step_deg = default_quadrature_step_deg);

    // Gain along a principal cut from -span to +span (deg) in `step` increments.
    PatternCut pattern_cut(const ArrayConfig &config, const WeightVector &weights,
                           const ElementModel &model, CutAxis axis, double fixed_other_angle_deg,
                           double span_deg, double step_deg,
                           double quadrature_step_deg = default_quadrature_step_deg);

    // Same, with the hemisphere power already known (avoids repeating the quadrature).
    PatternCut pattern_cut_normalized(const ArrayConfig &config, const WeightVector &weights,
                                      const ElementModel &model, CutAxis axis,
                                      double fixed_other_angle_deg, double span_deg,
                                      double step_deg, double radiated_power);

    PatternMetrics pattern_metrics(const PatternCut &cut);

    // CSV with header `angle_deg,gain_dbi`, 9 significant digits.
    std::string pattern_cut_to_csv(const PatternCut &cut);

    // One-line JSON record.
    std::string pattern_metrics_to_record(const PatternMetrics &metrics);

    const char *to_string(CutAxis axis) noexcept;
    const char *to_string(ElementKind kind) noexcept;
}

#endif
