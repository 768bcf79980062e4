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

/// Merge costs closer than this are treated as equal and resolved by index.
inline constexpr double kMergeTieTolerance = 1e-12;

/// One agglomeration step. Ids follow the usual dendrogram numbering:
/// 0..N-1 are the input points and the cluster formed at step s is N + s.
/// `left` is the cluster whose smallest member index is lower.
struct MergeStep {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    /// Increase in total within-cluster sum of squares caused by the merge,
    /// n_a * n_b / (n_a + n_b) * ||c_a - c_b||^2.
    double distance = 0.0;
    std::uint32_t new_size = 0;
};

struct HacResult {
    ChunkAssignment assignment;
    std::vector<MergeStep> merges;
};

/// Ward agglomerative clustering of the rows of `points` down to `k`
/// clusters (Lance-Williams updates on a squared-distance matrix).
///
/// When rows <= k every point is its own cluster and no merges are made.
/// Among merges whose costs agree within kMergeTieTolerance, the pair whose
/// smaller member index is smallest wins, then the one whose larger member
/// index is smallest. Labels are numbered by ascending smallest member.
HacResult
ward_agglomerate(const Matrix& points, std::uint32_t k);

HacResult
cluster_hac(const FusedFeatureSet& features, std::uint32_t k);

}  // namespace colchunk
