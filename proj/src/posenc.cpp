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

#include "colchunk/posenc.h"

#include <cmath>
#include <string>

namespace colchunk {

void
check_posenc_config(const PosEncConfig& cfg) {
    if (cfg.dim == 0 || cfg.dim % 4 != 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "positional encoding dim must be a positive multiple of 4, got " +
                        std::to_string(cfg.dim));
    }
    if (!(cfg.base > 1.0) || !std::isfinite(cfg.base)) {
        throw Error(ErrorCode::kInvalidArgument, "positional encoding base must be > 1");
    }
}

void
encode_position(const PosEncConfig& cfg, NormalizedCoords coords, std::span<double> out) {
    check_posenc_config(cfg);
    if (out.size() != cfg.dim) {
        throw Error(ErrorCode::kDimensionMismatch, "output buffer does not match encoding dim");
    }
    if (!(coords.x >= 0.0 && coords.x <= 1.0 && coords.y >= 0.0 && coords.y <= 1.0)) {
        throw Error(ErrorCode::kOutOfRange, "coordinates must lie in [0,1]^2");
    }

    const std::size_t half = cfg.dim / 2;
    const std::size_t pairs = half / 2;
    for (std::size_t m = 0; m < pairs; ++m) {
        const double freq = std::pow(cfg.base, -static_cast<double>(2 * m) / static_cast<double>(half));
        out[2 * m] = std::sin(coords.x * freq);
        out[2 * m + 1] = std::cos(coords.x * freq);
        out[half + 2 * m] = std::sin(coords.y * freq);
        out[half + 2 * m + 1] = std::cos(coords.y * freq);
    }

    const double norm = l2_norm(out);
    for (double& v : out) {
        v /= norm;
    }
}

std::vector<double>
encode_position(const PosEncConfig& cfg, NormalizedCoords coords) {
    check_posenc_config(cfg);
    std::vector<double> out(cfg.dim);
    encode_position(cfg, coords, out);
    return out;
}

}  // namespace colchunk
