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

#include "beamtrack/signal_model.hpp"
#include "beamtrack/beamforming.hpp"
#include "beamtrack/error.hpp"
#include "beamtrack/scenario.hpp"
#include "text_format.hpp"

#include <cmath>
#include <random>
#include <string_view>

namespace beamtrack
{
    SnapshotMatrix::SnapshotMatrix(Eigen::MatrixXcd data) : data_(std::move(data))
    {
        if (data_.rows() < 1 || data_.cols() < 1)
            throw Error(ErrorKind::dimension, "snapshot matrix must be at least 1x1");
        if (!data_.allFinite())
            throw Error(ErrorKind::invalid_argument, "snapshot matrix contains non-finite entries");
    }

    bool SnapshotMatrix::operator==(const SnapshotMatrix &other) const
    {
        return data_.rows() == other.data_.rows() && data_.cols() == other.data_.cols() &&
               (data_.array() == other.data_.array()).all();
    }

    SnapshotMatrix generate_snapshots(const ArrayConfig &config, const std::vector<SourceSpec> &sources,
                                      const NoiseSpec &noise, std::size_t num_snapshots,
                                      const std::optional<Eigen::VectorXcd> &element_gains)
    {
        if (num_snapshots == 0)
            throw Error(ErrorKind::invalid_scenario, "snapshot count must be >= 1");
        if (sources.empty())
            throw Error(ErrorKind::invalid_scenario, "at least one source is required");

        const auto n = static_cast<Eigen::Index>(config.num_elements());
        if (element_gains && element_gains->size() != n)
            throw Error(ErrorKind::dimension, "element gain vector length does not match the array");

        double total_power = 0.0;
        Eigen::MatrixXcd manifold(n, static_cast<Eigen::Index>(sources.size()));
        for (std::size_t i = 0; i < sources.size(); ++i)
        {
            const auto &src = sources[i];
            if (!(std::isfinite(src.power) && src.power > 0.0))
                throw Error(ErrorKind::invalid_scenario, "source power must be > 0");
            if (!src.angles.in_visible_half_space())
                throw Error(ErrorKind::invalid_scenario, "source outside the visible half-space");
            total_power += src.power;
            Eigen::VectorXcd a = std::sqrt(src.power) * steering_vector(config, src.angles).entries;
            if (element_gains)
                a = a.cwiseProduct(*element_gains);
            manifold.col(static_cast<Eigen::Index>(i)) = a;
        }

        if (std::isnan(noise.snr_db) || noise.snr_db == -std::numeric_limits<double>::infinity())
            throw Error(ErrorKind::invalid_scenario, "snr_db must be a number or +inf");
        const double noise_sigma =
            noise.noiseless() ? 0.0 : std::sqrt(total_power / std::pow(10.0, noise.snr_db / 10.0));

        std::mt19937_64 rng(noise.seed);
        // circular complex Gaussian: each quadrature has variance 1/2
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

        const auto t_count = static_cast<Eigen::Index>(num_snapshots);
        const auto k = static_cast<Eigen::Index>(sources.size());
        Eigen::MatrixXcd x(n, t_count);
        Eigen::VectorXcd symbols(k);
        for (Eigen::Index t = 0; t < t_count; ++t)
        {
            for (Eigen::Index i = 0; i < k; ++i)
            {
                const double re = gauss(rng);
                const double im = gauss(rng);
                symbols[i] = {re, im};
            }
            x.col(t) = manifold * symbols;
            if (noise_sigma > 0.0)
                for (Eigen::Index e = 0; e < n; ++e)
                {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    x(e, t) += noise_sigma * cdouble(re, im);
                }
        }
        return SnapshotMatrix(std::move(x));
    }

    std::string snapshots_to_text(const SnapshotMatrix &m)
    {
        const auto &d = m.data();
        std::string out = std::to_string(d.rows()) + "," + std::to_string(d.cols()) + "\n";
        out.reserve(out.size() + static_cast<std::size_t>(d.size()) * 48);
        for (Eigen::Index t = 0; t < d.cols(); ++t)
            for (Eigen::Index e = 0; e < d.rows(); ++e)
            {
                out += detail::format_roundtrip(d(e, t).real());
                out += ',';
                out += detail::format_roundtrip(d(e, t).imag());
                out += '\n';
            }
        return out;
    }

    namespace
    {
        [[noreturn]] void parse_fail(std::size_t line, const std::string &what)
        {
            throw Error(ErrorKind::parse, "snapshot file line " + std::to_string(line) + ": " + what);
        }

        bool parse_count(std::string_view text, long long &out)
        {
            while (!text.empty() && (text.back() == '\r' || text.back() == ' '))
                text.remove_suffix(1);
            while (!text.empty() && text.front() == ' ')
                text.remove_prefix(1);
            const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
            return !text.empty() && res.ec == std::errc() && res.ptr == text.data() + text.size();
        }
    }

    SnapshotMatrix snapshots_from_text(const std::string &text)
    {
        std::string_view rest(text);
        std::size_t line_no = 0;
        auto next_line = [&](std::string_view &line) {
            if (rest.empty())
                return false;
            const auto pos = rest.find('\n');
            line = rest.substr(0, pos);
            rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
            ++line_no;
            return true;
        };

        std::string_view line;
        if (!next_line(line) || line.empty())
            parse_fail(1, "missing header `n_elements,t`");
        const auto comma = line.find(',');
        long long rows = 0, cols = 0;
        if (comma == std::string_view::npos || !parse_count(line.substr(0, comma), rows) ||
            !parse_count(line.substr(comma + 1), cols))
            parse_fail(1, "header must be two integers `n_elements,t`");
        if (rows < 1 || cols < 1)
            parse_fail(1, "header counts must be >= 1");

        Eigen::MatrixXcd data(rows, cols);
        const long long expected = rows * cols;
        for (long long idx = 0; idx < expected; ++idx)
        {
            if (!next_line(line))
                parse_fail(line_no + 1, "expected " + std::to_string(expected) + " data lines, found " +
                                            std::to_string(idx));
            const auto c = line.find(',');
            if (c == std::string_view::npos || line.find(',', c + 1) != std::string_view::npos)
                parse_fail(line_no, "expected exactly two comma-separated values `re,im`");
            double re = 0.0, im = 0.0;
            if (!detail::parse_double(line.substr(0, c), re) || !detail::parse_double(line.substr(c + 1), im))
                parse_fail(line_no, "non-numeric value");
            if (!std::isfinite(re) || !std::isfinite(im))
                parse_fail(line_no, "non-finite value");
            data(static_cast<Eigen::Index>(idx % rows), static_cast<Eigen::Index>(idx / rows)) = {re, im};
        }
        while (next_line(line))
        {
            if (!line.empty() && line != "\r")
                parse_fail(line_no, "unexpected trailing data");
        }
        return SnapshotMatrix(std::move(data));
    }

    void save_snapshots(const SnapshotMatrix &m, const std::filesystem::path &path)
    {
        write_file_atomic(path, snapshots_to_text(m));
    }

    SnapshotMatrix load_snapshots(const std::filesystem::path &path)
    {
        return snapshots_from_text(read_file(path));
    }
}
