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

#include "beamtrack/scenario.hpp"
#include "beamtrack/error.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <unistd.h>

namespace beamtrack
{
    namespace
    {
        using json = nlohmann::json;

        [[noreturn]] void config_fail(const std::string &key, const std::string &what)
        {
            throw Error(ErrorKind::config, key + ": " + what);
        }

        // Reads keys from one JSON object and rejects whatever was not read.
        class Section
        {
        public:
            Section(const json &node, std::string path) : node_(node), path_(std::move(path))
            {
                if (!node_.is_object())
                    config_fail(path_, "expected an object");
            }

            bool has(const std::string &key) const { return node_.contains(key); }

            std::string key(const std::string &k) const { return path_.empty() ? k : path_ + "." + k; }

            const json &raw(const std::string &k)
            {
                seen_.insert(k);
                return node_.at(k);
            }

            double number(const std::string &k, double fallback)
            {
                if (!has(k))
                    return fallback;
                const auto &v = raw(k);
                if (!v.is_number())
                    config_fail(key(k), "expected a number");
                return v.get<double>();
            }

            // number, or the strings "inf"/"+inf" for +infinity
            double number_or_inf(const std::string &k, double fallback)
            {
                if (!has(k))
                    return fallback;
                const auto &v = raw(k);
                if (v.is_string() && (v == "inf" || v == "+inf"))
                    return std::numeric_limits<double>::infinity();
                if (!v.is_number())
                    config_fail(key(k), "expected a number or \"inf\"");
                return v.get<double>();
            }

            std::uint64_t count(const std::string &k, std::uint64_t fallback)
            {
                if (!has(k))
                    return fallback;
                const auto &v = raw(k);
                if (!v.is_number_unsigned())
                    config_fail(key(k), "expected a non-negative integer");
                return v.get<std::uint64_t>();
            }

            bool flag(const std::string &k, bool fallback)
            {
                if (!has(k))
                    return fallback;
                const auto &v = raw(k);
                if (!v.is_boolean())
                    config_fail(key(k), "expected true or false");
                return v.get<bool>();
            }

            std::string text(const std::string &k, const std::string &fallback)
            {
                if (!has(k))
                    return fallback;
                const auto &v = raw(k);
                if (!v.is_string())
                    config_fail(key(k), "expected a string");
                return v.get<std::string>();
            }

            void finish() const
            {
                for (auto it = node_.begin(); it != node_.end(); ++it)
                    if (!seen_.count(it.key()))
                        config_fail(key(it.key()), "unknown key");
            }

        private:
            const json &node_;
            std::string path_;
            std::set<std::string> seen_;
        };

        // Re-throws invariant violations from domain constructors as config errors.
        template <typename F>
        auto checked(const std::string &key, F &&make)
        {
            try
            {
                return make();
            }
            catch (const Error &e)
            {
                if (e.kind() == ErrorKind::config)
                    throw;
                config_fail(key, e.what());
            }
        }

        DirectionAngles parse_angles(Section &s)
        {
            const double az = s.number("azimuth_deg", 0.0);
            const double el = s.number("elevation_deg", 0.0);
            return checked(s.key("elevation_deg"), [&] { return DirectionAngles(az, el); });
        }

        ArrayConfig parse_array(const json &node)
        {
            Section s(node, "array");
            const auto ref = ArrayConfig::reference_4x4();
            const double f = s.number("carrier_frequency_hz", ref.carrier_frequency());
            const auto nx = s.count("num_x", ref.num_x());
            const auto ny = s.count("num_y", ref.num_y());
            const double dx = s.number("spacing_x_m", ref.spacing_x());
            const double dy = s.number("spacing_y_m", ref.spacing_y());
            const double limit = s.number("scan_limit_deg", ref.scan_limit());
            std::map<std::string, std::string> meta;
            if (s.has("metadata"))
            {
                const auto &m = s.raw("metadata");
                if (!m.is_object())
                    config_fail("array.metadata", "expected an object");
                for (auto it = m.begin(); it != m.end(); ++it)
                    meta[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
            }
            else
            {
                meta = ref.metadata();
            }
            s.finish();
            return checked("array", [&] {
                return ArrayConfig(f, static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), dx, dy, limit,
                                   std::move(meta));
            });
        }

        ElementModel parse_element(const json &node)
        {
            Section s(node, "element_model");
            const auto kind = s.text("kind", "cosine_power");
            const double q = s.number("exponent", default_cosine_exponent);
            s.finish();
            if (kind == "isotropic")
                return ElementModel::isotropic();
            if (kind == "cosine_power")
                return checked("element_model.exponent", [&] { return ElementModel::cosine_power(q); });
            config_fail("element_model.kind", "expected \"isotropic\" or \"cosine_power\", got \"" + kind + "\"");
        }

        std::vector<SourceSpec> parse_sources(const json &node)
        {
            if (!node.is_array())
                config_fail("sources", "expected a list");
            std::vector<SourceSpec> out;
            for (std::size_t i = 0; i < node.size(); ++i)
            {
                Section s(node[i], "sources[" + std::to_string(i) + "]");
                SourceSpec src;
                src.angles = parse_angles(s);
                src.power = s.number("power", 1.0);
                s.finish();
                if (!(src.power > 0.0))
                    config_fail(s.key("power"), "must be > 0");
                if (!src.angles.in_visible_half_space())
                    config_fail(s.key("azimuth_deg"), "source must lie in the visible half-space (|az| <= 90)");
                out.push_back(src);
            }
            return out;
        }

        NoiseSpec parse_noise(const json &node)
        {
            Section s(node, "noise");
            NoiseSpec n;
            n.snr_db = s.number_or_inf("snr_db", n.snr_db);
            n.seed = s.count("seed", n.seed);
            s.finish();
            if (std::isnan(n.snr_db) || n.snr_db == -std::numeric_limits<double>::infinity())
                config_fail("noise.snr_db", "must be a number or \"inf\"");
            return n;
        }

        Eigen::VectorXcd parse_gains(const json &node)
        {
            Section s(node, "calibration");
            Eigen::VectorXcd gains;
            if (s.has("element_gains"))
            {
                const auto &g = s.raw("element_gains");
                if (!g.is_array())
                    config_fail("calibration.element_gains", "expected a list of [re, im] pairs");
                gains.resize(static_cast<Eigen::Index>(g.size()));
                for (std::size_t i = 0; i < g.size(); ++i)
                {
                    const auto &p = g[i];
                    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                        config_fail("calibration.element_gains[" + std::to_string(i) + "]", "expected [re, im]");
                    gains[static_cast<Eigen::Index>(i)] = {p[0].get<double>(), p[1].get<double>()};
                }
            }
            s.finish();
            return gains;
        }

        Trajectory parse_trajectory(const json &node)
        {
            Section s(node, "trajectory");
            const auto kind = s.text("kind", "");
            const double duration = s.number("duration_s", 0.0);
            if (kind == "waypoints")
            {
                if (!s.has("waypoints"))
                    config_fail("trajectory.waypoints", "missing");
                const auto &list = s.raw("waypoints");
                if (!list.is_array())
                    config_fail("trajectory.waypoints", "expected a list");
                std::vector<Waypoint> wps;
                for (std::size_t i = 0; i < list.size(); ++i)
                {
                    Section w(list[i], "trajectory.waypoints[" + std::to_string(i) + "]");
                    const double t = w.number("t_s", 0.0);
                    const auto a = parse_angles(w);
                    w.finish();
                    wps.push_back({t, a});
                }
                s.finish();
                return checked("trajectory", [&] { return Trajectory::from_waypoints(std::move(wps), duration); });
            }
            if (kind == "constant_rate")
            {
                if (!s.has("start"))
                    config_fail("trajectory.start", "missing");
                Section start(s.raw("start"), "trajectory.start");
                const auto a = parse_angles(start);
                start.finish();
                const double raz = s.number("rate_az_deg_s", 0.0);
                const double rel = s.number("rate_el_deg_s", 0.0);
                s.finish();
                return checked("trajectory", [&] { return Trajectory::constant_rate(a, raz, rel, duration); });
            }
            config_fail("trajectory.kind", "expected \"waypoints\" or \"constant_rate\"");
        }

        TrackerConfig parse_tracker(const json &node, double array_scan_limit)
        {
            Section s(node, "tracker");
            TrackerConfig c;
            c.scan_limit_deg = array_scan_limit;
            c.update_period_s = s.number("update_period_s", c.update_period_s);
            c.smoothing_alpha = s.number("smoothing_alpha", c.smoothing_alpha);
            c.snapshots_per_update = s.count("snapshots_per_update", c.snapshots_per_update);
            c.snr_db = s.number_or_inf("snr_db", c.snr_db);
            c.grid_step_deg = s.number("grid_step_deg", c.grid_step_deg);
            c.scan_limit_deg = s.number("scan_limit_deg", c.scan_limit_deg);
            s.finish();
            checked("tracker", [&] {
                c.validate();
                return 0;
            });
            return c;
        }

        DoaOptions parse_doa(const json &node)
        {
            Section s(node, "doa");
            DoaOptions d;
            d.grid.az_min = s.number("az_min_deg", d.grid.az_min);
            d.grid.az_max = s.number("az_max_deg", d.grid.az_max);
            d.grid.el_min = s.number("el_min_deg", d.grid.el_min);
            d.grid.el_max = s.number("el_max_deg", d.grid.el_max);
            d.grid.step = s.number("grid_step_deg", d.grid.step);
            d.forward_backward = s.flag("forward_backward", d.forward_backward);
            d.refine = s.flag("refine", d.refine);
            s.finish();
            checked("doa", [&] {
                d.grid.azimuths();
                d.grid.elevations();
                return 0;
            });
            return d;
        }

        OutputPaths parse_outputs(const json &node)
        {
            Section s(node, "outputs");
            OutputPaths o;
            o.pattern = s.text("pattern", "");
            o.snapshots = s.text("snapshots", "");
            o.spectrum = s.text("spectrum", "");
            o.estimate = s.text("estimate", "");
            o.track = s.text("track", "");
            s.finish();
            return o;
        }

        std::atomic<unsigned> temp_counter{0};
    }

    ScenarioConfig parse_scenario(const std::string &json_text)
    {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw Error(ErrorKind::config, std::string("scenario is not valid JSON: ") + e.what());
        }

        Section root(doc, "");
        ScenarioConfig sc;
        if (root.has("array"))
            sc.array = parse_array(root.raw("array"));
        if (root.has("element_model"))
            sc.element = parse_element(root.raw("element_model"));
        sc.quadrature_step_deg = root.number("quadrature_step_deg", sc.quadrature_step_deg);
        if (!(sc.quadrature_step_deg > 0.0 && sc.quadrature_step_deg <= 90.0))
            config_fail("quadrature_step_deg", "must be in (0, 90]");
        if (root.has("sources"))
            sc.sources = parse_sources(root.raw("sources"));
        if (root.has("noise"))
            sc.noise = parse_noise(root.raw("noise"));
        if (root.has("calibration"))
        {
            auto gains = parse_gains(root.raw("calibration"));
            if (gains.size() > 0)
            {
                if (gains.size() != static_cast<Eigen::Index>(sc.array.num_elements()))
                    config_fail("calibration.element_gains", "needs one entry per array element");
                sc.element_gains = std::move(gains);
            }
        }
        if (root.has("trajectory"))
            sc.trajectory = parse_trajectory(root.raw("trajectory"));
        sc.tracker = parse_tracker(root.has("tracker") ? root.raw("tracker") : json::object(), sc.array.scan_limit());
        if (root.has("doa"))
            sc.doa = parse_doa(root.raw("doa"));
        if (root.has("outputs"))
            sc.outputs = parse_outputs(root.raw("outputs"));
        root.finish();
        return sc;
    }

    ScenarioConfig load_scenario(const std::filesystem::path &path)
    {
        std::string text;
        try
        {
            text = read_file(path);
        }
        catch (const Error &e)
        {
            throw Error(ErrorKind::config, e.what());
        }
        return parse_scenario(text);
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorKind::io, "cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad())
            throw Error(ErrorKind::io, "failed reading " + path.string());
        return ss.str();
    }

    void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>> &files)
    {
        std::vector<std::filesystem::path> temps;
        auto cleanup = [&] {
            std::error_code ec;
            for (const auto &t : temps)
                std::filesystem::remove(t, ec);
        };

        for (const auto &[path, content] : files)
        {
            auto tmp = path;
            tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(temp_counter++);
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (out)
                out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.close();
            if (!out)
            {
                cleanup();
                throw Error(ErrorKind::io, "cannot write " + path.string());
            }
        }
        for (std::size_t i = 0; i < files.size(); ++i)
        {
            std::error_code ec;
            std::filesystem::rename(temps[i], files[i].first, ec);
            if (ec)
            {
                cleanup();
                throw Error(ErrorKind::io, "cannot move output into place at " + files[i].first.string() + ": " +
                                               ec.message());
            }
        }
    }

    void write_file_atomic(const std::filesystem::path &path, const std::string &content)
    {
        write_files_atomic({{path, content}});
    }
}
