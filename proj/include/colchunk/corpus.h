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
#include <string>
#include <vector>

#include "colchunk/core_types.h"

namespace colchunk {

/// Parameters the index was built with; stored in the index trailer.
struct BuildMeta {
    double omega = 0.2;
    std::uint32_t k_target = 40;
    std::string method = "hac_ward";
    double posenc_base = 10000.0;
    bool normalize_semantic = true;
    std::uint64_t seed = 0;
    std::string tool_version;
    /// Where the patch embeddings were taken from, e.g. "after-llm".
    std::string location;

    bool
    operator==(const BuildMeta&) const = default;
};

struct CorpusIndex {
    std::uint32_t dim = 0;
    std::vector<CompressedDocument> docs;
    BuildMeta build_meta;

    bool
    operator==(const CorpusIndex&) const = default;
};

/// Shared dim, unique doc ids, and per-document invariants.
ValidationReport
validate(const CorpusIndex& index, double unit_tolerance = 1e-6);

}  // namespace colchunk
