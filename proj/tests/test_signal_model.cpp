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

#include <catch_amalgamated.hpp>

#include "beamtrack/beamforming.hpp"
#include "beamtrack/error.hpp"
#include "beamtrack/signal_model.hpp"
#include "test_support.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <limits>
#include <random>

using namespace beamtrack;
using Catch::Approx;

namespace
{
    int numerical_rank(const Eigen::MatrixXcd &m)
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        const auto &s = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s[i] > 1e-9 * s[0])
                ++rank;
        return rank;
    }

    std::filesystem::path temp_path(const std::string &name)
    {
        return std::filesystem::temp_directory_path() / ("beamtrack_test_" + name);
    }

    ErrorKind kind_of(const std::function<void()> &f)
    {
        try
        {
            f();
        }
        catch (const Error &e)
        {
            return e.kind();
        }
        FAIL("expected a beamtrack::Error");
        return ErrorKind::invalid_argument;
    }
}

TEST_CASE("generate_snapshots - noiseless single source is rank one")
{
    const auto cfg = test::reference_array();
    const SourceSpec src{{12.0, -7.0}, 2.5};
    const auto m = generate_snapshots(cfg, {src}, NoiseSpec{}, 1);
    REQUIRE(m.num_elements() == 16);
    REQUIRE(m.num_snapshots() == 1);

    // column = sqrt(p) s a, so dividing by the steering vector leaves one constant
    const auto a = steering_vector(cfg, src.angles).entries;
    const cdouble ratio = m.data()(0, 0) / a[0];
    for (Eigen::Index n = 0; n < 16; ++n)
        CHECK(std::abs(m.data()(n, 0) - ratio * a[n]) < 1e-12);
    CHECK(numerical_rank(generate_snapshots(cfg, {src}, NoiseSpec{}, 30).data()) == 1);
}

TEST_CASE("generate_snapshots - invalid scenarios")
{
    const auto cfg = test::reference_array();
    CHECK(kind_of([&] { generate_snapshots(cfg, {}, NoiseSpec{}, 10); }) == ErrorKind::invalid_scenario);
    CHECK(kind_of([&] { generate_snapshots(cfg, {{{0.0, 0.0}, 1.0}}, NoiseSpec{}, 0); }) == ErrorKind::invalid_scenario);
    CHECK(kind_of([&] { generate_snapshots(cfg, {{{0.0, 0.0}, 0.0}}, NoiseSpec{}, 1); }) == ErrorKind::invalid_scenario);
    CHECK(kind_of([&] { generate_snapshots(cfg, {{{120.0, 0.0}, 1.0}}, NoiseSpec{}, 1); }) ==
          ErrorKind::invalid_scenario);
    CHECK(kind_of([&] {
              generate_snapshots(cfg, {{{0.0, 0.0}, 1.0}}, NoiseSpec{}, 1, Eigen::VectorXcd::Ones(3));
          }) == ErrorKind::dimension);
}

TEST_CASE("generate_snapshots - per-element power matches power + noise variance")
{
    const auto cfg = test::reference_array();
    const auto m = generate_snapshots(cfg, {{{-30.0, 22.9389}, 1.0}}, NoiseSpec{20.0, 99}, 10000);
    const double expected = 1.0 + 0.01; // power + sigma^2 with sigma^2 = 1 / 10^(20/10)
    for (Eigen::Index n = 0; n < 16; ++n)
    {
        const double mean = m.data().row(n).cwiseAbs2().mean();
        CHECK(std::abs(mean - expected) / expected < 0.05);
    }
}

TEST_CASE("generate_snapshots - deterministic per seed")
{
    const auto cfg = test::reference_array();
    const std::vector<SourceSpec> srcs{{{10.0, 5.0}, 1.0}, {{-40.0, 20.0}, 0.5}};
    const auto a = generate_snapshots(cfg, srcs, NoiseSpec{10.0, 42}, 64);
    const auto b = generate_snapshots(cfg, srcs, NoiseSpec{10.0, 42}, 64);
    const auto c = generate_snapshots(cfg, srcs, NoiseSpec{10.0, 43}, 64);
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("generate_snapshots - noiseless K sources give rank K")
{
    const auto cfg = test::reference_array();
    const std::vector<SourceSpec> all{{{10.0, 5.0}, 1.0}, {{-40.0, 20.0}, 0.5}, {{25.0, -30.0}, 2.0}};
    for (std::size_t k = 1; k <= all.size(); ++k)
    {
        const std::vector<SourceSpec> srcs(all.begin(), all.begin() + static_cast<long>(k));
        for (std::size_t t : {k, k + 5, std::size_t{40}})
            CHECK(numerical_rank(generate_snapshots(cfg, srcs, NoiseSpec{std::numeric_limits<double>::infinity(), 5}, t)
                                     .data()) == static_cast<int>(k));
    }
}

TEST_CASE("generate_snapshots - scaling source powers scales the noiseless covariance")
{
    const auto cfg = test::reference_array();
    const double c = 3.7;
    const auto x1 = generate_snapshots(cfg, {{{10.0, 5.0}, 1.0}, {{-20.0, 0.0}, 0.4}}, NoiseSpec{}, 50).data();
    const auto x2 = generate_snapshots(cfg, {{{10.0, 5.0}, c}, {{-20.0, 0.0}, 0.4 * c}}, NoiseSpec{}, 50).data();
    const Eigen::MatrixXcd r1 = x1 * x1.adjoint() / 50.0;
    const Eigen::MatrixXcd r2 = x2 * x2.adjoint() / 50.0;
    CHECK((r2 - c * r1).cwiseAbs().maxCoeff() < 1e-10 * r2.cwiseAbs().maxCoeff());
}

TEST_CASE("generate_snapshots - element gains scale the signal part")
{
    const auto cfg = test::reference_array();
    Eigen::VectorXcd gains = Eigen::VectorXcd::Ones(16);
    gains[3] = {0.5, 0.5};
    const auto plain = generate_snapshots(cfg, {{{15.0, 0.0}, 1.0}}, NoiseSpec{}, 4);
    const auto skewed = generate_snapshots(cfg, {{{15.0, 0.0}, 1.0}}, NoiseSpec{}, 4, gains);
    for (Eigen::Index t = 0; t < 4; ++t)
        for (Eigen::Index n = 0; n < 16; ++n)
            CHECK(std::abs(skewed.data()(n, t) - gains[n] * plain.data()(n, t)) < 1e-12);
}

TEST_CASE("snapshot text - 1x1 layout")
{
    Eigen::MatrixXcd d(1, 1);
    d(0, 0) = {1.0, 2.0};
    const SnapshotMatrix m(d);
    CHECK(snapshots_to_text(m) == "1,1\n1.0,2.0\n");
    CHECK(snapshots_from_text("1,1\n1.0,2.0\n") == m);
}

TEST_CASE("snapshot text - column-major order")
{
    Eigen::MatrixXcd d(2, 2);
    d << cdouble(1, 0), cdouble(3, 0), cdouble(2, 0), cdouble(4, 0);
    CHECK(snapshots_to_text(SnapshotMatrix(d)) == "2,2\n1.0,0.0\n2.0,0.0\n3.0,0.0\n4.0,0.0\n");
}

TEST_CASE("snapshot text - parse errors name the line")
{
    auto message = [](const std::string &text) {
        try
        {
            snapshots_from_text(text);
        }
        catch (const Error &e)
        {
            CHECK(e.kind() == ErrorKind::parse);
            return std::string(e.what());
        }
        FAIL("expected parse error");
        return std::string();
    };
    CHECK_THAT(message(""), Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THAT(message("2;1\n"), Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THAT(message("2,1\n1.0,2.0\n1.0,abc\n"), Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THAT(message("2,1\n1.0,2.0,3.0\n0,0\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THAT(message("2,1\n1.0,2.0\n"), Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THAT(message("1,1\n1.0,2.0\n5,5\n"), Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THAT(message("1,1\nnan,0\n"), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("snapshot files - random matrices round-trip bit-exactly")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> expo(-300.0, 300.0);
    const auto path = temp_path("roundtrip.csv");
    for (int trial = 0; trial < 5; ++trial)
    {
        Eigen::MatrixXcd d(16, 100);
        for (Eigen::Index i = 0; i < d.size(); ++i)
            d.data()[i] = {g(rng) * std::pow(10.0, trial == 4 ? expo(rng) : 0.0), g(rng)};
        const SnapshotMatrix m(d);
        save_snapshots(m, path);
        CHECK(load_snapshots(path) == m);
    }
    std::filesystem::remove(path);

    std::ofstream(temp_path("empty.csv")).close();
    CHECK(kind_of([&] { load_snapshots(temp_path("empty.csv")); }) == ErrorKind::parse);
    std::filesystem::remove(temp_path("empty.csv"));
    CHECK(kind_of([&] { load_snapshots(temp_path("does_not_exist.csv")); }) == ErrorKind::io);
}
