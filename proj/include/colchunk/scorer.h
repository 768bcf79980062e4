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
#include "colchunk/corpus.h"

namespace colchunk {

struct ScoredHit {
    std::string doc_id;
    double score = 0.0;
    std::uint32_t rank = 0;
};

/// Query tokens scaled to unit length. Scoring normalizes lazily so the
/// stored query dump stays untouched.
class NormalizedQuery {
public:
    explicit NormalizedQuery(const QueryEmbeddingSet& query);

    const std::string&
    id() const noexcept {
        return id_;
    }

    std::uint32_t
    dim() const noexcept {
        return static_cast<std::uint32_t>(tokens_.cols());
    }

    const Matrix&
    tokens() const noexcept {
        return tokens_;
    }

private:
    std::string id_;
    Matrix tokens_;
};

/// Late-interaction score: sum over query tokens of the best cosine against
/// any chunk. Chunks are stored unit-norm, so the cosine is the dot product
/// with the normalized token.
double
maxsim(const NormalizedQuery& query, const CompressedDocument& doc);

double
maxsim(const QueryEmbeddingSet& query, const CompressedDocument& doc);

struct RetrieveOptions {
    std::uint32_t top_k = 10;
    unsigned threads = 1;
};

/// Exhaustive top-k. Ties on score are broken by ascending doc_id, so the
/// result is the same for any thread count.
std::vector<ScoredHit>
retrieve(const QueryEmbeddingSet& query, const CorpusIndex& index, const RetrieveOptions& options);

}  // namespace colchunk
