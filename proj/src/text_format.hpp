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

#ifndef BEAMTRACK_SRC_TEXT_FORMAT_HPP
#define BEAMTRACK_SRC_TEXT_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace beamtrack::detail
{
    // %.<digits>g without locale dependence.
    inline std::string format_significant(double value, int digits)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, digits);
        return std::string(buf, res.ptr);
    }

    // 17 significant digits, always carrying a decimal point or exponent ("1.0", not "1").
    inline std::string format_roundtrip(double value)
    {
        std::string s = format_significant(value, 17);
        if (s.find_first_of(".eEni") == std::string::npos)
            s += ".0";
        return s;
    }

    inline bool parse_double(std::string_view text, double &out)
    {
        while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
            text.remove_prefix(1);
        while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
            text.remove_suffix(1);
        if (text.empty())
            return false;
        if (text.front() == '+')
            text.remove_prefix(1);
        const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
        return res.ec == std::errc() && res.ptr == text.data() + text.size();
    }
}

#endif
