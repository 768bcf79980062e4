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

#include "colchunk/scorer.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "colchunk/parallel.h"

namespace colchunk {

NormalizedQuery::NormalizedQuery(const QueryEmbeddingSet& query)
    : id_(query.query_id), tokens_(query.vectors) {
    throw_if_invalid(validate(query), "query " + query.query_id);
    for (std::size_t i = 0; i < tokens_.rows(); ++i) {
        auto row = tokens_.row(i);
        const double norm = l2_norm(row);
        for (double& v : row) {
            v /= norm;
        }
    }
}

double
maxsim(const NormalizedQuery& query, const CompressedDocument& doc) {
    if (query.dim() != doc.dim || doc.chunks.cols() != doc.dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "query " + query.id() + " has dim " + std::to_string(query.dim()) + " but doc " +
                        doc.doc_id + " has dim " + std::to_string(doc.dim));
    }
    if (doc.chunks.rows() == 0) {
        throw Error(ErrorCode::kValidation, "doc " + doc.doc_id + " has no chunks");
    }
    const Matrix& tokens = query.tokens();
    double score = 0.0;
    for (std::size_t i = 0; i < tokens.rows(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < doc.chunks.rows(); ++k) {
            best = std::max(best, dot(tokens.row(i), doc.chunks.row(k)));
        }
        score += best;
    }
    return score;
}

double
maxsim(const QueryEmbeddingSet& query, const CompressedDocument& doc) {
    return maxsim(NormalizedQuery(query), doc);
}

std::vector<ScoredHit>
retrieve(const QueryEmbeddingSet& query, const CorpusIndex& index, const RetrieveOptions& options) {
    if (index.docs.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "cannot retrieve from an empty index");
    }
    if (options.top_k == 0) {
        throw Error(ErrorCode::kInvalidArgument, "top_k must be >= 1");
    }
    const NormalizedQuery normalized(query);
    for (const auto& doc : index.docs) {
        if (doc.dim != normalized.dim()) {
            throw Error(ErrorCode::kDimensionMismatch,
                        "doc " + doc.doc_id + " has dim " + std::to_string(doc.dim) + ", query " +
                            query.query_id + " has dim " + std::to_string(normalized.dim()));
        }
    }

    std::vector<double> scores(index.docs.size());
    parallel_for(index.docs.size(), options.threads, [&](std::size_t i) {
        scores[i] = maxsim(normalized, index.docs[i]);
    });

    std::vector<std::size_t> order(index.docs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min<std::size_t>(options.top_k, order.size());
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return index.docs[a].doc_id < index.docs[b].doc_id;
    });

    std::vector<ScoredHit> hits;
    hits.reserve(keep);
    for (std::size_t r = 0; r < keep; ++r) {
        hits.push_back({index.docs[order[r]].doc_id, scores[order[r]], static_cast<std::uint32_t>(r + 1)});
    }
    return hits;
}

}  // namespace colchunk
