// Copyright 2026 The fockswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace fockswap {

/// Formats a double with `digits` significant digits ("%.*g"). Negative zero
/// prints as "0" so that output is stable across sign-of-zero noise.
inline std::string format_number(double value, int digits = 12) {
    if (value == 0.0) value = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    std::string out(buf);
    if (out == "-0") out = "0";
    return out;
}

/// Rounds to `digits` significant digits by a round trip through the printed form.
inline double round_significant(double value, int digits = 12) {
    if (!std::isfinite(value)) return value;
    return std::stod(format_number(value, digits));
}

}  // namespace fockswap
