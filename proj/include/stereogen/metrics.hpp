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

#pragma once

#include <cstddef>

#include "stereogen/core.hpp"

namespace stereogen {

struct EvalReport {
    double epe = 0.0;   // mean |pred - gt| in pixels
    double d1 = 0.0;    // fraction with error > 3 px and > 5% of gt
    double bad2 = 0.0;  // fraction with error > 2 px (strict)
    std::size_t evaluated_pixels = 0;
};

/// Standard stereo metrics over the valid ground-truth pixels.
EvalReport evaluate(const DisparityField& pred, const DisparityField& gt, const BitMask& valid);

} // namespace stereogen
