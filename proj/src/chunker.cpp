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

#include "colchunk/chunker.h"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace colchunk {

namespace {

constexpr double kDegenerateNorm = 1e-12;

}  // namespace

std::string_view
method_name(ClusterMethod method) {
    switch (method) {
        case ClusterMethod::kHacWard:
            return "hac_ward";
        case ClusterMethod::kKMeans:
            return "kmeans";
    }
    return "unknown";
}

ClusterMethod
parse_method(std::string_view text) {
    if (text == "hac_ward" || text == "hac" || text == "ward") {
        return ClusterMethod::kHacWard;
    }
    if (text == "kmeans" || text == "k-means") {
        return ClusterMethod::kKMeans;
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown clustering method '" + std::string(text) + "'");
}

void
check_chunker_config(const ChunkerConfig& cfg) {
    if (cfg.k == 0) {
        throw Error(ErrorCode::kInvalidArgument, "target chunk count k must be >= 1");
    }
    if (!(cfg.omega >= 0.0 && cfg.omega <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "omega must lie in [0, 1]");
    }
    if (cfg.kmeans_max_iter == 0 || !(cfg.kmeans_tol > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "k-means needs max_iter >= 1 and tol > 0");
    }
}

FusedFeatureSet
fuse(const PatchEmbeddingSet& set, const ChunkerConfig& cfg, const PosEncConfig& pe) {
    check_chunker_config(cfg);
    check_posenc_config(pe);
    if (pe.dim != set.dim || set.vectors.cols() != set.dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    set.doc_id + ": positional encoding dim " + std::to_string(pe.dim) +
                        " does not match embedding dim " + std::to_string(set.dim));
    }
    if (set.vectors.rows() != set.grid.size()) {
        throw Error(ErrorCode::kValidation, set.doc_id + ": patch count does not match grid");
    }

    const std::size_t n = set.size();
    FusedFeatureSet out{set.dim, cfg.omega, Matrix(n, set.dim)};
    std::vector<double> position(set.dim);
    const double w_sem = 1.0 - cfg.omega;
    const double w_pos = cfg.omega;
    for (std::size_t j = 0; j < n; ++j) {
        const auto v = set.vectors.row(j);
        double scale = 1.0;
        if (cfg.normalize_semantic_before_fusion) {
            const double norm = l2_norm(v);
            if (!(norm > 0.0)) {
                throw Error(ErrorCode::kDegenerate,
                            set.doc_id + ": zero-norm semantic vector at patch " + std::to_string(j));
            }
            scale = norm;
        }
        encode_position(pe, patch_coords(set.grid, j), position);
        auto z = out.vectors.row(j);
        for (std::size_t d = 0; d < set.dim; ++d) {
            z[d] = w_sem * (v[d] / scale) + w_pos * position[d];
        }
    }
    return out;
}

ChunkAssignment
cluster(const FusedFeatureSet& features, const ChunkerConfig& cfg) {
    check_chunker_config(cfg);
    const auto n = static_cast<std::uint32_t>(features.size());
    const std::uint32_t k = std::min(cfg.k, n);
    switch (cfg.method) {
        case ClusterMethod::kHacWard:
            return cluster_hac(features, k).assignment;
        case ClusterMethod::kKMeans:
            return cluster_kmeans(features, k, cfg.seed, cfg.kmeans_max_iter, cfg.kmeans_tol);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown clustering method");
}

CompressedDocument
pool(const PatchEmbeddingSet& set, const ChunkAssignment& assignment, std::vector<PoolWarning>* warnings) {
    if (assignment.labels.size() != set.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    set.doc_id + ": assignment covers " + std::to_string(assignment.labels.size()) +
                        " patches, set has " + std::to_string(set.size()));
    }
    throw_if_invalid(validate(assignment), set.doc_id + ": assignment");

    const std::size_t dim = set.vectors.cols();
    CompressedDocument doc;
    doc.doc_id = set.doc_id;
    doc.dim = set.dim;
    doc.chunks = Matrix(assignment.k, dim);
    doc.chunk_sizes = assignment.sizes;

    std::vector<std::size_t> first_member(assignment.k, set.size());
    for (std::size_t j = 0; j < set.size(); ++j) {
        const auto label = assignment.labels[j];
        first_member[label] = std::min(first_member[label], j);
        auto acc = doc.chunks.row(label);
        const auto v = set.vectors.row(j);
        for (std::size_t d = 0; d < dim; ++d) {
            acc[d] += v[d];
        }
    }

    for (std::uint32_t c = 0; c < assignment.k; ++c) {
        auto chunk = doc.chunks.row(c);
        for (double& x : chunk) {
            x /= assignment.sizes[c];
        }
        double norm = l2_norm(chunk);
        if (norm < kDegenerateNorm) {
            const auto fallback = set.vectors.row(first_member[c]);
            std::copy(fallback.begin(), fallback.end(), chunk.begin());
            norm = l2_norm(chunk);
            PoolWarning w{c,
                          set.doc_id + ": chunk " + std::to_string(c) +
                              " has a near-zero centroid; using patch " +
                              std::to_string(first_member[c])};
            if (warnings != nullptr) {
                warnings->push_back(std::move(w));
            } else {
                std::cerr << "warning: " << w.message << '\n';
            }
            if (!(norm > 0.0)) {
                throw Error(ErrorCode::kDegenerate, set.doc_id + ": zero-norm fallback vector");
            }
        }
        for (double& x : chunk) {
            x /= norm;
        }
    }
    return doc;
}

CompressedDocument
compress(const PatchEmbeddingSet& set,
         const ChunkerConfig& cfg,
         const PosEncConfig& pe,
         std::vector<PoolWarning>* warnings) {
    throw_if_invalid(validate(set), set.doc_id.empty() ? "patch set" : set.doc_id);
    const FusedFeatureSet features = fuse(set, cfg, pe);
    return pool(set, cluster(features, cfg), warnings);
}

}  // namespace colchunk
