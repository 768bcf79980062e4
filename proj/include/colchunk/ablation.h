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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "colchunk/chunker.h"
#include "colchunk/eval.h"

namespace colchunk {

struct AblationConfig {
    std::string id;
    ChunkerConfig chunker;
};

/// e.g. "hac_ward-k40-w0.2".
std::string
config_id(const ChunkerConfig& cfg);

std::vector<AblationConfig>
sweep_k(std::span<const std::uint32_t> k_values, const ChunkerConfig& base);

std::vector<AblationConfig>
sweep_omega(std::span<const double> omega_values, const ChunkerConfig& base);

std::vector<AblationConfig>
sweep_methods(std::span<const ClusterMethod> methods, const ChunkerConfig& base);

struct AblationOptions {
    unsigned threads = 1;
    double posenc_base = 10000.0;
    std::uint32_t ndcg_k = 5;
    /// Prepend a K=1 row: one mean-pooled vector per page.
    bool include_baseline = true;
    /// When false, wall_ms is written as 0 so the table is reproducible.
    bool record_timing = true;
    std::string location = "synthetic";
};

struct AblationRow {
    std::string config_id;
    std::string method;
    std::uint32_t k = 0;
    double omega = 0.0;
    double mean_ndcg = 0.0;
    double vectors_per_doc = 0.0;
    std::uint64_t index_bytes = 0;
    double wall_ms = 0.0;
};

/// Compresses the corpus with one configuration, writes the index to memory
/// to count its bytes, retrieves every query and averages nDCG@ndcg_k.
AblationRow
evaluate_config(const std::vector<PatchEmbeddingSet>& docs,
                const std::vector<QueryEmbeddingSet>& queries,
                const Qrels& qrels,
                const AblationConfig& config,
                const AblationOptions& options);

/// Rows follow `configs` order, preceded by the "base" row when enabled.
std::vector<AblationRow>
run_ablation(const std::vector<PatchEmbeddingSet>& docs,
             const std::vector<QueryEmbeddingSet>& queries,
             const Qrels& qrels,
             std::span<const AblationConfig> configs,
             const AblationOptions& options);

/// Header: config_id,method,k,omega,mean_ndcg_at_5,vectors_per_doc,index_bytes,wall_ms
void
write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows);

}  // namespace colchunk
