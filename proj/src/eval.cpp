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

#include "colchunk/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace colchunk {

namespace {

std::vector<std::string>
split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> fields;
    std::string f;
    while (in >> f) {
        fields.push_back(f);
    }
    return fields;
}

bool
is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

template <typename T>
bool
parse_number(const std::string& text, T& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

[[noreturn]] void
parse_error(std::size_t line_no, const std::string& what) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void
Qrels::set(const std::string& query_id, const std::string& doc_id, std::uint32_t grade) {
    by_query_[query_id][doc_id] = grade;
}

std::uint32_t
Qrels::grade(std::string_view query_id, std::string_view doc_id) const {
    const auto q = by_query_.find(query_id);
    if (q == by_query_.end()) {
        return 0;
    }
    const auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
}

const Qrels::Judgments&
Qrels::judgments(std::string_view query_id) const {
    static const Judgments kEmpty;
    const auto q = by_query_.find(query_id);
    return q == by_query_.end() ? kEmpty : q->second;
}

Qrels
Qrels::parse(std::istream& in) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        const auto f = split_ws(line);
        if (f.size() != 4) {
            parse_error(line_no, "expected 'query_id 0 doc_id grade', got " + std::to_string(f.size()) + " fields");
        }
        long long grade = 0;
        if (!parse_number(f[3], grade) || grade < 0 || grade > UINT32_MAX) {
            parse_error(line_no, "grade '" + f[3] + "' is not a non-negative integer");
        }
        qrels.set(f[0], f[2], static_cast<std::uint32_t>(grade));
    }
    return qrels;
}

Qrels
Qrels::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open qrels " + path);
    }
    try {
        return parse(in);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

void
Qrels::write(std::ostream& out) const {
    for (const auto& [query, docs] : by_query_) {
        for (const auto& [doc, grade] : docs) {
            out << query << " 0 " << doc << ' ' << grade << '\n';
        }
    }
}

double
ndcg_at_k(std::span<const std::string> ranking, const Qrels::Judgments& judgments, std::uint32_t k) {
    if (k == 0) {
        throw Error(ErrorCode::kInvalidArgument, "nDCG cutoff must be >= 1");
    }
    auto grade_of = [&](const std::string& doc) -> double {
        const auto it = judgments.find(doc);
        return it == judgments.end() ? 0.0 : static_cast<double>(it->second);
    };

    double dcg = 0.0;
    const std::size_t depth = std::min<std::size_t>(k, ranking.size());
    for (std::size_t i = 0; i < depth; ++i) {
        dcg += grade_of(ranking[i]) / std::log2(static_cast<double>(i) + 2.0);
    }

    std::vector<double> ideal;
    ideal.reserve(judgments.size());
    for (const auto& [doc, grade] : judgments) {
        ideal.push_back(static_cast<double>(grade));
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(k, ideal.size()); ++i) {
        idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
    }
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

void
write_run(std::ostream& out, const std::string& query_id, std::span<const ScoredHit> hits, std::string_view run_tag) {
    char score[64];
    for (const auto& hit : hits) {
        std::snprintf(score, sizeof(score), "%.9f", hit.score);
        out << query_id << " Q0 " << hit.doc_id << ' ' << hit.rank << ' ' << score << ' ' << run_tag << '\n';
    }
}

RunRankings
parse_run(std::istream& in) {
    std::map<std::string, std::vector<std::pair<std::uint64_t, std::string>>, std::less<>> staged;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        const auto f = split_ws(line);
        if (f.size() != 6) {
            parse_error(line_no, "expected 'query_id Q0 doc_id rank score run_tag', got " +
                                     std::to_string(f.size()) + " fields");
        }
        std::uint64_t rank = 0;
        if (!parse_number(f[3], rank) || rank == 0) {
            parse_error(line_no, "rank '" + f[3] + "' is not a positive integer");
        }
        double score = 0.0;
        if (!parse_number(f[4], score)) {
            parse_error(line_no, "score '" + f[4] + "' is not a number");
        }
        staged[f[0]].emplace_back(rank, f[2]);
    }
    RunRankings run;
    for (auto& [query, hits] : staged) {
        std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        auto& ranking = run[query];
        for (auto& [rank, doc] : hits) {
            ranking.push_back(std::move(doc));
        }
    }
    return run;
}

RunEvaluation
evaluate_run(const RunRankings& run, const Qrels& qrels, std::uint32_t k) {
    std::set<std::string, std::less<>> ids;
    for (const auto& [q, ranking] : run) {
        ids.insert(q);
    }
    for (const auto& [q, docs] : qrels.all()) {
        ids.insert(q);
    }
    RunEvaluation eval;
    double sum = 0.0;
    for (const auto& q : ids) {
        const auto it = run.find(q);
        const double score =
            it == run.end() ? 0.0 : ndcg_at_k(it->second, qrels.judgments(q), k);
        eval.per_query.push_back({q, score});
        sum += score;
    }
    eval.mean = ids.empty() ? 0.0 : sum / static_cast<double>(ids.size());
    return eval;
}

}  // namespace colchunk
