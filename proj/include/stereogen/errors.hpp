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

#include <stdexcept>
#include <string>

namespace stereogen {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands disagree on raster dimensions.
struct DimensionError : Error {
    using Error::Error;
};

/// A scalar argument is outside its documented domain.
struct ParameterError : Error {
    using Error::Error;
};

/// A reduction was requested over zero (or too few) pixels.
struct EmptySelectionError : Error {
    using Error::Error;
};

/// The least-squares system has no unique solution (constant prediction).
struct DegenerateFitError : Error {
    using Error::Error;
};

/// A file does not follow the expected on-disk format.
struct FormatError : Error {
    using Error::Error;
};

/// An external inpainting command failed (nonzero exit status).
struct BackendError : Error {
    using Error::Error;
};

/// An external inpainting command violated the file protocol.
struct ProtocolError : Error {
    using Error::Error;
};

/// An external inpainting command exceeded its time budget.
struct TimeoutError : Error {
    using Error::Error;
};

} // namespace stereogen
