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
#include <string_view>
#include <vector>

#include "colchunk/core_types.h"
#include "colchunk/hac.h"
#include "colchunk/kmeans.h"
#include "colchunk/posenc.h"

namespace colchunk {

enum class ClusterMethod {
    kHacWard,
    kKMeans,
};

/// "hac_ward" or "kmeans".
std::string_view
method_name(ClusterMethod method);

/// Accepts "hac_ward", "hac", "ward" and "kmeans".
ClusterMethod
parse_method(std::string_view text);

struct ChunkerConfig {
    std::uint32_t k = 40;
    /// Weight of the positional prior in the clustering features.
    double omega = 0.2;
    ClusterMethod method = ClusterMethod::kHacWard;
    std::uint64_t seed = 0;
    std::uint32_t kmeans_max_iter = 100;
    double kmeans_tol = 1e-6;
    bool normalize_semantic_before_fusion = true;
};

void
check_chunker_config(const ChunkerConfig& cfg);

/// z_j = (1 - omega) * v_j + omega * p_j, with v_j unit-normalized first when
/// cfg.normalize_semantic_before_fusion is set and p_j the positional
/// encoding of patch j's center.
FusedFeatureSet
fuse(const PatchEmbeddingSet& set, const ChunkerConfig& cfg, const PosEncConfig& pe);

/// Dispatches on cfg.method with target min(cfg.k, N).
ChunkAssignment
cluster(const FusedFeatureSet& features, const ChunkerConfig& cfg);

struct PoolWarning {
    std::uint32_t chunk = 0;
    std::string message;
};

/// Chunk k becomes the L2-normalized mean of the original semantic vectors
/// of its members. A mean whose norm falls below 1e-12 is replaced by the
/// normalized vector of the chunk's smallest-index member; that fallback is
/// appended to `warnings`, or written to stderr when `warnings` is null.
CompressedDocument
pool(const PatchEmbeddingSet& set,
     const ChunkAssignment& assignment,
     std::vector<PoolWarning>* warnings = nullptr);

/// fuse -> cluster -> pool. Validates the input set first.
CompressedDocument
compress(const PatchEmbeddingSet& set,
         const ChunkerConfig& cfg,
         const PosEncConfig& pe,
         std::vector<PoolWarning>* warnings = nullptr);

}  // namespace colchunk
