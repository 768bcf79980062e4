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

#include "colchunk/core_types.h"

namespace colchunk {

struct KMeansOptions {
    std::uint32_t k = 1;
    std::uint64_t seed = 0;
    std::uint32_t max_iter = 100;
    /// Stop once no centroid moves farther than this (L2).
    double tol = 1e-6;
};

struct KMeansResult {
    ChunkAssignment assignment;
    Matrix centroids;
    std::uint32_t iterations = 0;
    bool converged = false;
};

/// k-means++ seeding followed by Lloyd iterations.
///
/// Assignment ties go to the lower centroid index. A cluster that ends up
/// empty takes over the single point farthest from its own centroid (among
/// clusters with more than one member). Labels in the returned assignment
/// are renumbered by ascending smallest member; `centroids` keeps the
/// internal order.
KMeansResult
run_kmeans(const Matrix& points, const KMeansOptions& options);

ChunkAssignment
cluster_kmeans(const FusedFeatureSet& features,
               std::uint32_t k,
               std::uint64_t seed,
               std::uint32_t max_iter = 100,
               double tol = 1e-6);

}  // namespace colchunk
