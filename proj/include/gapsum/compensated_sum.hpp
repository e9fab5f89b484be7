// Copyright 2026 The gapsum Authors
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

namespace gapsum {

// Neumaier-style compensated accumulator. The (sum, carry) pair is the full
// state; restoring both reproduces the remaining additions bit for bit.
template <typename Real>
struct BasicCompensatedSum {
    Real sum = 0;
    Real carry = 0;

    void add(Real x) {
        const Real t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }

    Real value() const { return sum + carry; }
};

using CompensatedSum = BasicCompensatedSum<double>;

}  // namespace gapsum
