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
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colchunk/scorer.h"

namespace colchunk {

/// Relevance judgments: query_id -> doc_id -> grade. Absent pairs are grade 0.
class Qrels {
public:
    using Judgments = std::map<std::string, std::uint32_t, std::less<>>;

    void
    set(const std::string& query_id, const std::string& doc_id, std::uint32_t grade);

    std::uint32_t
    grade(std::string_view query_id, std::string_view doc_id) const;

    /// Empty map for unknown queries.
    const Judgments&
    judgments(std::string_view query_id) const;

    const std::map<std::string, Judgments, std::less<>>&
    all() const noexcept {
        return by_query_;
    }

    /// TREC qrels lines: "query_id 0 doc_id grade". Blank lines are skipped;
    /// anything else malformed throws Error(kParse) naming the line number.
    static Qrels
    parse(std::istream& in);

    static Qrels
    load(const std::string& path);

    void
    write(std::ostream& out) const;

private:
    std::map<std::string, Judgments, std::less<>> by_query_;
};

/// nDCG@k with gain = grade and discount 1 / log2(rank + 1). The ideal DCG
/// uses every judged grade for the query, sorted descending and cut at k.
/// Returns 0 when the query has no relevant documents.
double
ndcg_at_k(std::span<const std::string> ranking, const Qrels::Judgments& judgments, std::uint32_t k);

/// One ranked list per query, in rank order.
using RunRankings = std::map<std::string, std::vector<std::string>, std::less<>>;

/// "query_id Q0 doc_id rank score run_tag", one hit per line.
void
write_run(std::ostream& out, const std::string& query_id, std::span<const ScoredHit> hits, std::string_view run_tag);

/// Parses a TREC run file. Hits of each query are ordered by their rank
/// column. Malformed lines throw Error(kParse) with the line number.
RunRankings
parse_run(std::istream& in);

struct QueryScore {
    std::string query_id;
    double ndcg = 0.0;
};

struct RunEvaluation {
    std::vector<QueryScore> per_query;
    double mean = 0.0;
};

/// Scores every query that appears in the run or in the qrels (sorted by
/// id). Queries missing from the run score 0; so do queries without
/// relevant documents.
RunEvaluation
evaluate_run(const RunRankings& run, const Qrels& qrels, std::uint32_t k);

}  // namespace colchunk
