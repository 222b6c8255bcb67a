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

#include "beamtrack/array_model.hpp"
#include "beamtrack/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beamtrack
{
    ArrayConfig::ArrayConfig(double carrier_frequency_hz, std::size_t num_x, std::size_t num_y,
                             double spacing_x_m, double spacing_y_m, double scan_limit_deg,
                             std::map<std::string, std::string> metadata)
        : frequency_(carrier_frequency_hz), num_x_(num_x), num_y_(num_y), spacing_x_(spacing_x_m),
          spacing_y_(spacing_y_m), scan_limit_(scan_limit_deg), metadata_(std::move(metadata))
    {
        if (!(std::isfinite(frequency_) && frequency_ > 0.0))
            throw Error(ErrorKind::invalid_argument, "carrier_frequency must be > 0");
        if (num_x_ < 1 || num_y_ < 1)
            throw Error(ErrorKind::invalid_argument, "num_x and num_y must be >= 1");
        if (!(std::isfinite(spacing_x_) && spacing_x_ > 0.0) || !(std::isfinite(spacing_y_) && spacing_y_ > 0.0))
            throw Error(ErrorKind::invalid_argument, "element spacing must be > 0");
        if (!(scan_limit_ > 0.0 && scan_limit_ <= 90.0))
            throw Error(ErrorKind::invalid_argument, "scan_limit must be in (0, 90]");
    }

    ArrayConfig ArrayConfig::reference_4x4()
    {
        // Patch dimensions in mm, carried along for reference only.
        std::map<std::string, std::string> patch = {
            {"substrate", "Rogers 6010.2LM"},
            {"substrate_width_mm", "33.5"},
            {"substrate_length_mm", "26.6"},
            {"substrate_height_mm", "1.27"},
            {"patch_width_mm", "25.8"},
            {"patch_length_mm", "18.2"},
            {"metal_thickness_mm", "0.035"},
            {"feed_length_mm", "10.03"},
            {"feed_width_mm", "1.12"},
            {"cut_length_mm", "8.1"},
            {"cut_width_mm", "1.1"}};
        return ArrayConfig(2.4e9, 4, 4, 0.05, 0.05, 42.0, std::move(patch));
    }

    DirectionAngles::DirectionAngles(double azimuth_deg, double elevation_deg)
    {
        if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg))
            throw Error(ErrorKind::invalid_argument, "direction angles must be finite");
        if (std::abs(elevation_deg) > 90.0)
            throw Error(ErrorKind::invalid_argument,
                        "elevation " + std::to_string(elevation_deg) + " deg outside [-90, 90]");

        double az = azimuth_deg;
        if (az < -180.0 || az >= 180.0)
        {
            az = std::fmod(az + 180.0, 360.0);
            if (az < 0.0)
                az += 360.0;
            az -= 180.0;
            if (az >= 180.0) // fmod rounding at the seam
                az -= 360.0;
        }
        azimuth_ = az;
        elevation_ = elevation_deg;
    }

    bool DirectionAngles::in_visible_half_space() const
    {
        return std::abs(azimuth_) <= 90.0 && std::abs(elevation_) <= 90.0;
    }

    std::vector<ElementPosition> element_positions(const ArrayConfig &config)
    {
        const double cx = 0.5 * static_cast<double>(config.num_x() - 1);
        const double cy = 0.5 * static_cast<double>(config.num_y() - 1);

        std::vector<ElementPosition> out;
        out.reserve(config.num_elements());
        for (std::size_t iy = 0; iy < config.num_y(); ++iy)
            for (std::size_t ix = 0; ix < config.num_x(); ++ix)
                out.push_back({(static_cast<double>(ix) - cx) * config.spacing_x(),
                               (static_cast<double>(iy) - cy) * config.spacing_y()});
        return out;
    }

    DirectionCosines direction_cosines(const DirectionAngles &angles)
    {
        const double az = deg2rad(angles.azimuth());
        const double el = deg2rad(angles.elevation());
        const double ce = std::cos(el);
        return {ce * std::sin(az), std::sin(el), ce * std::cos(az)};
    }

    double grating_lobe_free_limit(const ArrayConfig &config)
    {
        const double d_max = std::max(config.spacing_x(), config.spacing_y());
        const double s = config.wavelength() / d_max - 1.0;
        if (s >= 1.0)
            return 90.0;
        if (s <= 0.0)
            return 0.0;
        return rad2deg(std::asin(s));
    }

    double angular_separation(const DirectionAngles &a, const DirectionAngles &b)
    {
        const auto p = direction_cosines(a);
        const auto q = direction_cosines(b);
        // atan2 form stays accurate for nearly parallel vectors
        const double cx = p.v * q.w - p.w * q.v;
        const double cy = p.w * q.u - p.u * q.w;
        const double cz = p.u * q.v - p.v * q.u;
        const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
        const double dot = p.u * q.u + p.v * q.v + p.w * q.w;
        return rad2deg(std::atan2(cross, dot));
    }
}
