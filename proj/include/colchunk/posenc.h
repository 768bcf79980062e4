// Copyright 2026-present the colchunk project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "colchunk/core_types.h"

namespace colchunk {

/// 2D sinusoidal positional encoding parameters. `dim` must be a multiple of 4.
struct PosEncConfig {
    std::uint32_t dim = 0;
    double base = 10000.0;
};

void
check_posenc_config(const PosEncConfig& cfg);

/// Encodes normalized patch coordinates into a unit-norm `cfg.dim` vector.
///
/// The first half encodes x and the second half y. Within a half of width
/// H = dim / 2, slot pair (2m, 2m + 1) holds sin / cos of coord / base^(2m / H).
/// The raw vector is then divided by its L2 norm, which is sqrt(H) up to
/// rounding since each sin/cos pair has unit energy.
std::vector<double>
encode_position(const PosEncConfig& cfg, NormalizedCoords coords);

/// Writes the encoding into `out` (size cfg.dim) without allocating.
void
encode_position(const PosEncConfig& cfg, NormalizedCoords coords, std::span<double> out);

}  // namespace colchunk
