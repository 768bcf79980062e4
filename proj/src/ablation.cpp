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

#include "colchunk/ablation.h"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "colchunk/index_store.h"
#include "colchunk/parallel.h"
#include "colchunk/version.h"

namespace colchunk {

namespace {

std::string
format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

std::string
config_id(const ChunkerConfig& cfg) {
    return std::string(method_name(cfg.method)) + "-k" + std::to_string(cfg.k) + "-w" +
           format_double("%g", cfg.omega);
}

std::vector<AblationConfig>
sweep_k(std::span<const std::uint32_t> k_values, const ChunkerConfig& base) {
    std::vector<AblationConfig> out;
    for (auto k : k_values) {
        ChunkerConfig cfg = base;
        cfg.k = k;
        out.push_back({config_id(cfg), cfg});
    }
    return out;
}

std::vector<AblationConfig>
sweep_omega(std::span<const double> omega_values, const ChunkerConfig& base) {
    std::vector<AblationConfig> out;
    for (auto omega : omega_values) {
        ChunkerConfig cfg = base;
        cfg.omega = omega;
        out.push_back({config_id(cfg), cfg});
    }
    return out;
}

std::vector<AblationConfig>
sweep_methods(std::span<const ClusterMethod> methods, const ChunkerConfig& base) {
    std::vector<AblationConfig> out;
    for (auto method : methods) {
        ChunkerConfig cfg = base;
        cfg.method = method;
        out.push_back({config_id(cfg), cfg});
    }
    return out;
}

AblationRow
evaluate_config(const std::vector<PatchEmbeddingSet>& docs,
                const std::vector<QueryEmbeddingSet>& queries,
                const Qrels& qrels,
                const AblationConfig& config,
                const AblationOptions& options) {
    check_chunker_config(config.chunker);
    const auto start = std::chrono::steady_clock::now();
    if (docs.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "ablation needs at least one document");
    }

    const PosEncConfig pe{docs.front().dim, options.posenc_base};
    CorpusIndex index;
    index.dim = docs.front().dim;
    index.docs.resize(docs.size());
    index.build_meta = {config.chunker.omega,
                        config.chunker.k,
                        std::string(method_name(config.chunker.method)),
                        options.posenc_base,
                        config.chunker.normalize_semantic_before_fusion,
                        config.chunker.seed,
                        std::string(kToolVersion),
                        options.location};
    std::vector<std::vector<PoolWarning>> warnings(docs.size());
    parallel_for(docs.size(), options.threads, [&](std::size_t i) {
        index.docs[i] = compress(docs[i], config.chunker, pe, &warnings[i]);
    });
    for (const auto& doc_warnings : warnings) {
        for (const auto& w : doc_warnings) {
            std::cerr << "warning: " << w.message << '\n';
        }
    }

    std::ostringstream sink;
    write_index(index, sink);

    RunRankings run;
    for (const auto& query : queries) {
        const auto hits = retrieve(query, index, {options.ndcg_k, options.threads});
        auto& ranking = run[query.query_id];
        for (const auto& hit : hits) {
            ranking.push_back(hit.doc_id);
        }
    }
    const RunEvaluation eval = evaluate_run(run, qrels, options.ndcg_k);

    std::uint64_t vectors = 0;
    for (const auto& doc : index.docs) {
        vectors += doc.k();
    }
    AblationRow row;
    row.config_id = config.id;
    row.method = std::string(method_name(config.chunker.method));
    row.k = config.chunker.k;
    row.omega = config.chunker.omega;
    row.mean_ndcg = eval.mean;
    row.vectors_per_doc = static_cast<double>(vectors) / static_cast<double>(index.docs.size());
    row.index_bytes = sink.str().size();
    if (options.record_timing) {
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return row;
}

std::vector<AblationRow>
run_ablation(const std::vector<PatchEmbeddingSet>& docs,
             const std::vector<QueryEmbeddingSet>& queries,
             const Qrels& qrels,
             std::span<const AblationConfig> configs,
             const AblationOptions& options) {
    std::vector<AblationRow> rows;
    if (options.include_baseline) {
        ChunkerConfig base = configs.empty() ? ChunkerConfig{} : configs.front().chunker;
        base.k = 1;
        base.method = ClusterMethod::kHacWard;
        rows.push_back(evaluate_config(docs, queries, qrels, {"base", base}, options));
    }
    for (const auto& config : configs) {
        rows.push_back(evaluate_config(docs, queries, qrels, config, options));
    }
    return rows;
}

void
write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows) {
    out << "config_id,method,k,omega,mean_ndcg_at_5,vectors_per_doc,index_bytes,wall_ms\n";
    for (const auto& row : rows) {
        out << row.config_id << ',' << row.method << ',' << row.k << ',' << format_double("%g", row.omega) << ','
            << format_double("%.6f", row.mean_ndcg) << ',' << format_double("%.2f", row.vectors_per_doc) << ','
            << row.index_bytes << ',' << format_double("%.1f", row.wall_ms) << '\n';
    }
}

}  // namespace colchunk
