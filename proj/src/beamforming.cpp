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

#include "beamtrack/beamforming.hpp"
#include "beamtrack/error.hpp"
#include "text_format.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace beamtrack
{
    namespace
    {
        void require_weights(const ArrayConfig &config, const WeightVector &weights)
        {
            if (static_cast<std::size_t>(weights.entries.size()) != config.num_elements())
                throw Error(ErrorKind::dimension, "weight vector has " + std::to_string(weights.entries.size()) +
                                                      " entries, array has " + std::to_string(config.num_elements()));
        }

        double amplitude_from_w(const ElementModel &model, double w)
        {
            if (w < 0.0)
                return 0.0;
            if (model.kind == ElementKind::isotropic)
                return 1.0;
            return std::pow(w, model.exponent);
        }

        double to_dbi(double linear_gain)
        {
            if (!(linear_gain > 0.0))
                return gain_floor_dbi;
            return std::max(10.0 * std::log10(linear_gain), gain_floor_dbi);
        }

        // Lattice coordinates along each axis; element (ix, iy) sits at (xs[ix], ys[iy]).
        struct Lattice
        {
            std::vector<double> xs;
            std::vector<double> ys;

            explicit Lattice(const ArrayConfig &config)
            {
                const double cx = 0.5 * static_cast<double>(config.num_x() - 1);
                const double cy = 0.5 * static_cast<double>(config.num_y() - 1);
                for (std::size_t ix = 0; ix < config.num_x(); ++ix)
                    xs.push_back((static_cast<double>(ix) - cx) * config.spacing_x());
                for (std::size_t iy = 0; iy < config.num_y(); ++iy)
                    ys.push_back((static_cast<double>(iy) - cy) * config.spacing_y());
            }
        };

        // Array factor sum_n w_n a_n(u, v) evaluated as a separable double sum.
        class ArrayFactor
        {
        public:
            ArrayFactor(const ArrayConfig &config, const WeightVector &weights)
                : lattice_(config), k_(config.wavenumber()), weights_(weights.entries),
                  ex_(lattice_.xs.size()), ey_(lattice_.ys.size())
            {
            }

            void set_v(double v)
            {
                for (std::size_t iy = 0; iy < ey_.size(); ++iy)
                    ey_[iy] = std::polar(1.0, k_ * lattice_.ys[iy] * v);
            }

            cdouble at_u(double u)
            {
                const std::size_t nx = ex_.size();
                for (std::size_t ix = 0; ix < nx; ++ix)
                    ex_[ix] = std::polar(1.0, k_ * lattice_.xs[ix] * u);
                cdouble total{0.0, 0.0};
                for (std::size_t iy = 0; iy < ey_.size(); ++iy)
                {
                    cdouble row{0.0, 0.0};
                    for (std::size_t ix = 0; ix < nx; ++ix)
                        row += weights_[static_cast<Eigen::Index>(iy * nx + ix)] * ex_[ix];
                    total += ey_[iy] * row;
                }
                return total;
            }

        private:
            Lattice lattice_;
            double k_;
            const Eigen::VectorXcd &weights_;
            std::vector<cdouble> ex_;
            std::vector<cdouble> ey_;
        };
    }

    ElementModel ElementModel::cosine_power(double q)
    {
        if (!(std::isfinite(q) && q >= 0.0))
            throw Error(ErrorKind::invalid_argument, "cosine_power exponent must be >= 0");
        return {ElementKind::cosine_power, q};
    }

    SteeringVector steering_vector(const ArrayConfig &config, const DirectionAngles &angles)
    {
        const auto dc = direction_cosines(angles);
        const double k = config.wavenumber();
        const auto pos = element_positions(config);

        SteeringVector sv;
        sv.entries.resize(static_cast<Eigen::Index>(pos.size()));
        for (std::size_t n = 0; n < pos.size(); ++n)
            sv.entries[static_cast<Eigen::Index>(n)] = std::polar(1.0, k * (pos[n].x * dc.u + pos[n].y * dc.v));
        return sv;
    }

    WeightVector steering_weights(const ArrayConfig &config, const DirectionAngles &target)
    {
        if (!target.in_visible_half_space())
            throw Error(ErrorKind::invalid_argument, "steering target outside the visible half-space");
        return {steering_vector(config, target).entries.conjugate()};
    }

    double element_amplitude(const ElementModel &model, const DirectionAngles &angles)
    {
        return amplitude_from_w(model, direction_cosines(angles).w);
    }

    cdouble array_response(const ArrayConfig &config, const WeightVector &weights,
                           const ElementModel &model, const DirectionAngles &angles)
    {
        require_weights(config, weights);
        const double amp = element_amplitude(model, angles);
        if (amp == 0.0)
            return {0.0, 0.0};
        const auto a = steering_vector(config, angles);
        // plain sum w_n a_n, no conjugation: conjugate weights cancel the phases
        return amp * (weights.entries.array() * a.entries.array()).sum();
    }

    double radiated_power(const ArrayConfig &config, const WeightVector &weights,
                          const ElementModel &model, double quadrature_step_deg)
    {
        require_weights(config, weights);
        if (!(quadrature_step_deg > 0.0 && quadrature_step_deg <= 90.0))
            throw Error(ErrorKind::invalid_argument, "quadrature step must be in (0, 90] deg");

        const int cells = static_cast<int>(std::ceil(180.0 / quadrature_step_deg - 1e-9));
        const double h = 180.0 / cells;
        const double cell_area = deg2rad(h) * deg2rad(h);

        std::vector<double> sin_az(cells), cos_az(cells);
        for (int i = 0; i < cells; ++i)
        {
            const double az = deg2rad(-90.0 + (i + 0.5) * h);
            sin_az[i] = std::sin(az);
            cos_az[i] = std::cos(az);
        }

        ArrayFactor af(config, weights);
        double total = 0.0;
        for (int j = 0; j < cells; ++j)
        {
            const double el = deg2rad(-90.0 + (j + 0.5) * h);
            const double ce = std::cos(el);
            af.set_v(std::sin(el));
            double row = 0.0;
            for (int i = 0; i < cells; ++i)
            {
                const double amp = amplitude_from_w(model, ce * cos_az[i]);
                if (amp == 0.0)
                    continue;
                row += amp * amp * std::norm(af.at_u(ce * sin_az[i]));
            }
            total += row * ce;
        }
        return total * cell_area;
    }

    double directivity(const ArrayConfig &config, const WeightVector &weights,
                       const ElementModel &model, const DirectionAngles &steer,
                       double quadrature_step_deg)
    {
        const double p = radiated_power(config, weights, model, quadrature_step_deg);
        if (!(p > 0.0))
            throw Error(ErrorKind::degenerate, "total radiated power is zero");
        return to_dbi(4.0 * pi * std::norm(array_response(config, weights, model, steer)) / p);
    }

    PatternCut pattern_cut(const ArrayConfig &config, const WeightVector &weights,
                           const ElementModel &model, CutAxis axis, double fixed_other_angle_deg,
                           double span_deg, double step_deg, double quadrature_step_deg)
    {
        const double p = radiated_power(config, weights, model, quadrature_step_deg);
        return pattern_cut_normalized(config, weights, model, axis, fixed_other_angle_deg, span_deg, step_deg, p);
    }

    PatternCut pattern_cut_normalized(const ArrayConfig &config, const WeightVector &weights,
                                      const ElementModel &model, CutAxis axis,
                                      double fixed_other_angle_deg, double span_deg,
                                      double step_deg, double radiated_power)
    {
        require_weights(config, weights);
        if (!(step_deg > 0.0) || !std::isfinite(step_deg))
            throw Error(ErrorKind::invalid_argument, "cut step must be > 0");
        if (!(span_deg > 0.0) || !std::isfinite(span_deg))
            throw Error(ErrorKind::dimension, "empty cut grid: span must be > 0");
        const double max_span = axis == CutAxis::azimuth ? 180.0 : 90.0;
        if (span_deg > max_span)
            throw Error(ErrorKind::invalid_argument,
                        std::string(to_string(axis)) + " cut span exceeds " + std::to_string(max_span) + " deg");
        if (!(radiated_power > 0.0))
            throw Error(ErrorKind::degenerate, "total radiated power is zero");

        const auto count = static_cast<std::size_t>(std::floor(2.0 * span_deg / step_deg + 1e-9)) + 1;

        PatternCut cut;
        cut.axis = axis;
        cut.fixed_other_angle_deg = fixed_other_angle_deg;
        cut.samples.reserve(count);
        const double scale = 4.0 * pi / radiated_power;
        for (std::size_t i = 0; i < count; ++i)
        {
            const double angle = -span_deg + static_cast<double>(i) * step_deg;
            const DirectionAngles dir = axis == CutAxis::azimuth ? DirectionAngles(angle, fixed_other_angle_deg)
                                                                 : DirectionAngles(fixed_other_angle_deg, angle);
            cut.samples.push_back({angle, to_dbi(scale * std::norm(array_response(config, weights, model, dir)))});
        }
        return cut;
    }

    PatternMetrics pattern_metrics(const PatternCut &cut)
    {
        const auto &s = cut.samples;
        const std::size_t n = s.size();
        if (n < 2)
            throw Error(ErrorKind::incomplete_cut, "pattern cut needs at least two samples");

        std::size_t ipk = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (s[i].gain_dbi > s[ipk].gain_dbi)
                ipk = i;

        PatternMetrics m;
        m.peak_gain_dbi = s[ipk].gain_dbi;
        m.peak_angle_deg = s[ipk].angle_deg;

        const double threshold = m.peak_gain_dbi - 3.0;
        auto crossing = [&](std::size_t inner, std::size_t outer) {
            const double g0 = s[inner].gain_dbi, g1 = s[outer].gain_dbi;
            const double t = (g0 - threshold) / (g0 - g1);
            return s[inner].angle_deg + t * (s[outer].angle_deg - s[inner].angle_deg);
        };

        std::size_t r = ipk;
        while (r + 1 < n && s[r + 1].gain_dbi > threshold)
            ++r;
        std::size_t l = ipk;
        while (l > 0 && s[l - 1].gain_dbi > threshold)
            --l;
        if (r + 1 >= n || l == 0)
            throw Error(ErrorKind::incomplete_cut, "no -3 dB crossing inside the cut span on the " +
                                                       std::string(r + 1 >= n ? "upper" : "lower") + " side");
        m.hpbw_deg = crossing(r, r + 1) - crossing(l, l - 1);

        // main lobe ends at the first local minimum on each side
        std::size_t lo = ipk;
        while (lo > 0 && s[lo - 1].gain_dbi < s[lo].gain_dbi)
            --lo;
        std::size_t hi = ipk;
        while (hi + 1 < n && s[hi + 1].gain_dbi < s[hi].gain_dbi)
            ++hi;

        std::optional<double> best;
        for (std::size_t i = 1; i + 1 < n; ++i)
        {
            if (i >= lo && i <= hi)
                continue;
            const double g = s[i].gain_dbi;
            if (g > s[i - 1].gain_dbi && g >= s[i + 1].gain_dbi && (!best || g > *best))
                best = g;
        }
        if (best)
            m.sidelobe_level_db = *best - m.peak_gain_dbi;
        return m;
    }

    std::string pattern_cut_to_csv(const PatternCut &cut)
    {
        std::string out = "angle_deg,gain_dbi\n";
        for (const auto &sample : cut.samples)
        {
            out += detail::format_significant(sample.angle_deg, 9);
            out += ',';
            out += detail::format_significant(sample.gain_dbi, 9);
            out += '\n';
        }
        return out;
    }

    std::string pattern_metrics_to_record(const PatternMetrics &metrics)
    {
        nlohmann::ordered_json j;
        j["peak_gain_dbi"] = metrics.peak_gain_dbi;
        j["peak_angle_deg"] = metrics.peak_angle_deg;
        j["hpbw_deg"] = metrics.hpbw_deg;
        if (metrics.sidelobe_level_db)
            j["sidelobe_level_db"] = *metrics.sidelobe_level_db;
        else
            j["sidelobe_level_db"] = nullptr;
        return j.dump();
    }

    const char *to_string(CutAxis axis) noexcept
    {
        return axis == CutAxis::azimuth ? "azimuth" : "elevation";
    }

    const char *to_string(ElementKind kind) noexcept
    {
        return kind == ElementKind::isotropic ? "isotropic" : "cosine_power";
    }
}
