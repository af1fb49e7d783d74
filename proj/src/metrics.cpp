// Copyright 2026 The stereogen authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stereogen/metrics.hpp"

#include <cmath>

namespace stereogen {

EvalReport evaluate(const DisparityField& pred, const DisparityField& gt, const BitMask& valid) {
    if (!pred.same_shape(gt) || pred.width != valid.width || pred.height != valid.height)
        throw DimensionError("evaluate operand shapes differ");
    for (std::size_t i = 0; i < valid.bits.size(); ++i)
        if (valid.bits[i] && (!pred.valid.bits[i] || !gt.valid.bits[i]))
            throw ParameterError("evaluate mask selects an invalid pixel");

    EvalReport rep;
    double err_sum = 0.0;
    std::size_t bad2 = 0, d1 = 0;
    for (std::size_t i = 0; i < valid.bits.size(); ++i) {
        if (!valid.bits[i])
            continue;
        const double e = std::abs(pred.values[i] - gt.values[i]);
        err_sum += e;
        if (e > 2.0)
            ++bad2;
        if (e > 3.0 && e > 0.05 * gt.values[i])
            ++d1;
        ++rep.evaluated_pixels;
    }
    if (rep.evaluated_pixels == 0)
        throw EmptySelectionError("evaluate over an empty mask");
    const double n = static_cast<double>(rep.evaluated_pixels);
    rep.epe = err_sum / n;
    rep.bad2 = static_cast<double>(bad2) / n;
    rep.d1 = static_cast<double>(d1) / n;
    return rep;
}

} // namespace stereogen
