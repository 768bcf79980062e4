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
#include <filesystem>
#include <string>
#include <vector>

#include "colchunk/core_types.h"
#include "colchunk/eval.h"

namespace colchunk {

/// Desk-scale retrieval corpus with planted relevance.
///
/// Each query is `query_tokens` random unit directions. Its relevant document
/// holds a contiguous rectangular block of `signal_patches` patches whose
/// embeddings are the query's token directions plus Gaussian noise, tokens
/// laid out as contiguous runs inside the block. Every other patch is an
/// isotropic Gaussian vector scaled to unit length.
///
/// The noise added to a signal patch has i.i.d. N(0, sigma^2 / dim)
/// components, so its expected squared norm is sigma^2 relative to the unit
/// token direction whatever the dimension.
///
/// With `hard_negatives` > 0, that many further documents per query receive a
/// block of the same shape carrying only a subset of the query's tokens
/// (`hard_negative_overlap` of them, at least one). These documents are
/// judged non-relevant.
///
/// With `background_regions` > 0, patches outside planted blocks are no longer
/// independent noise: the grid is tiled into that many rectangles (the
/// factorization with the squarest tiles; a count with no factorization that
/// fits falls back to a single tile), each with its own random direction,
/// and each patch is its tile's direction plus the same noise as signal
/// patches. This gives every page competing content for the chunk budget.
struct SyntheticSpec {
    std::uint32_t num_docs = 100;
    std::uint32_t num_queries = 20;
    PatchGrid grid{32, 24};
    std::uint32_t dim = 128;
    std::uint32_t signal_patches = 48;
    std::uint32_t query_tokens = 8;
    double noise_sigma = 0.5;
    std::uint64_t seed = 7;
    std::uint32_t hard_negatives = 0;
    double hard_negative_overlap = 0.5;
    std::uint32_t background_regions = 0;
};

void
check_synthetic_spec(const SyntheticSpec& spec);

SyntheticSpec
load_synthetic_spec(const std::filesystem::path& path);

std::string
synthetic_spec_json(const SyntheticSpec& spec);

struct SyntheticCorpus {
    std::vector<PatchEmbeddingSet> docs;
    std::vector<QueryEmbeddingSet> queries;
    Qrels qrels;
};

/// Deterministic in `spec` (including the seed).
SyntheticCorpus
generate_synthetic(const SyntheticSpec& spec);

struct SyntheticPaths {
    std::filesystem::path manifest;
    std::filesystem::path queries;
    std::filesystem::path qrels;
};

/// Writes manifest.json (+ docs/), queries.json (+ queries/) and qrels.txt
/// into `dir`, creating it if needed.
SyntheticPaths
write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir, const std::string& location = "synthetic");

}  // namespace colchunk
