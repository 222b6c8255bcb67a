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

#ifndef BEAMTRACK_ARRAY_MODEL_HPP
#define BEAMTRACK_ARRAY_MODEL_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace beamtrack
{
    inline constexpr double speed_of_light = 299792458.0; // m/s, exact
    inline constexpr double pi = 3.14159265358979323846;

    inline constexpr double deg2rad(double deg) { return deg * (pi / 180.0); }
    inline constexpr double rad2deg(double rad) { return rad * (180.0 / pi); }

    // Uniform rectangular array lying in the x-y plane, boresight along +z.
    // Immutable once constructed; the constructor enforces all invariants.
    class ArrayConfig
    {
    public:
        ArrayConfig(double carrier_frequency_hz, std::size_t num_x, std::size_t num_y,
                    double spacing_x_m, double spacing_y_m, double scan_limit_deg = 42.0,
                    std::map<std::string, std::string> metadata = {});

        // 4x4 array at 2.4 GHz with 50 mm pitch and a +-42 deg scan envelope.
        static ArrayConfig reference_4x4();

        double carrier_frequency() const { return frequency_; }
        std::size_t num_x() const { return num_x_; }
        std::size_t num_y() const { return num_y_; }
        std::size_t num_elements() const { return num_x_ * num_y_; }
        double spacing_x() const { return spacing_x_; }
        double spacing_y() const { return spacing_y_; }
        double scan_limit() const { return scan_limit_; }
        double wavelength() const { return speed_of_light / frequency_; }
        double wavenumber() const { return 2.0 * pi / wavelength(); }
        const std::map<std::string, std::string> &metadata() const { return metadata_; }

    private:
        double frequency_;
        std::size_t num_x_;
        std::size_t num_y_;
        double spacing_x_;
        double spacing_y_;
        double scan_limit_;
        std::map<std::string, std::string> metadata_;
    };

    // Azimuth in [-180, 180), elevation in [-90, 90], both in degrees.
    // Azimuth is wrapped on construction; |elevation| > 90 is rejected.
    class DirectionAngles
    {
    public:
        DirectionAngles() = default;
        DirectionAngles(double azimuth_deg, double elevation_deg);

        double azimuth() const { return azimuth_; }
        double elevation() const { return elevation_; }

        // |az| <= 90 and |el| <= 90, i.e. the direction is in front of the array plane
        bool in_visible_half_space() const;

        bool operator==(const DirectionAngles &) const = default;

    private:
        double azimuth_ = 0.0;
        double elevation_ = 0.0;
    };

    struct DirectionCosines
    {
        double u = 0.0; // x component
        double v = 0.0; // y component
        double w = 1.0; // boresight component
    };

    struct ElementPosition
    {
        double x = 0.0; // meters
        double y = 0.0;
    };

    // Centered lattice, row-major: y outer, x inner.
    std::vector<ElementPosition> element_positions(const ArrayConfig &config);

    // u = cos(el) sin(az), v = sin(el), w = cos(el) cos(az)
    DirectionCosines direction_cosines(const DirectionAngles &angles);

    // Largest steer angle (deg) before a grating lobe enters visible space:
    // asin(lambda / d_max - 1), clamped to [0, 90].
    double grating_lobe_free_limit(const ArrayConfig &config);

    // Great-circle angle between two directions, degrees.
    double angular_separation(const DirectionAngles &a, const DirectionAngles &b);
}

#endif
