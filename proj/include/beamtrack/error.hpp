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

#ifndef BEAMTRACK_ERROR_HPP
#define BEAMTRACK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace beamtrack
{
    // Failure categories. The C API maps these onto bt_status codes.
    enum class ErrorKind
    {
        invalid_argument, // value violates a type invariant or precondition
        dimension,        // vector/matrix sizes do not agree
        degenerate,       // input has no usable content (zero power, empty grid)
        incomplete_cut,   // pattern cut does not contain both -3 dB crossings
        ambiguous,        // spectrum has no distinguishable peak
        invalid_scenario, // scenario description is inconsistent
        parse,            // malformed file content
        config,           // bad configuration document
        io                // filesystem failure
    };

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    const char *to_string(ErrorKind kind) noexcept;
}

#endif
