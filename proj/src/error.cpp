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

#include "beamtrack/error.hpp"

namespace beamtrack
{
    const char *to_string(ErrorKind kind) noexcept
    {
        switch (kind)
        {
        case ErrorKind::invalid_argument:
            return "invalid argument";
        case ErrorKind::dimension:
            return "dimension mismatch";
        case ErrorKind::degenerate:
            return "degenerate input";
        case ErrorKind::incomplete_cut:
            return "incomplete cut";
        case ErrorKind::ambiguous:
            return "ambiguous spectrum";
        case ErrorKind::invalid_scenario:
            return "invalid scenario";
        case ErrorKind::parse:
            return "parse error";
        case ErrorKind::config:
            return "config error";
        case ErrorKind::io:
            return "i/o error";
        }
        return "unknown";
    }
}
