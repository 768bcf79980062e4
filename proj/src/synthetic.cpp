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

#include "colchunk/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "colchunk/dump.h"
#include "colchunk/rng.h"
#include "json.hpp"

namespace colchunk {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPlanStream = 0xB10C;
constexpr std::uint64_t kDocStreamBase = 1'000'000;

struct BlockShape {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
};

// Most square rows x cols factorization of `area` that fits the grid.
std::optional<BlockShape>
block_shape(std::uint32_t area, const PatchGrid& grid) {
    std::optional<BlockShape> best;
    for (std::uint32_t r = 1; r <= grid.rows; ++r) {
        if (area % r != 0) {
            continue;
        }
        const std::uint32_t c = area / r;
        if (c > grid.cols) {
            continue;
        }
        const auto gap = [](BlockShape s) { return s.rows > s.cols ? s.rows - s.cols : s.cols - s.rows; };
        const BlockShape candidate{r, c};
        if (!best || gap(candidate) < gap(*best)) {
            best = candidate;
        }
    }
    return best;
}

// Splits the grid into `regions` tiles (rows x cols of tiles), preferring the
// factorization whose tiles are closest to square. Zero regions -> 1 x 1.
BlockShape
region_tiles(std::uint32_t regions, const PatchGrid& grid) {
    BlockShape best{1, 1};
    double best_gap = -1.0;
    for (std::uint32_t r = 1; r <= std::min(regions, grid.rows); ++r) {
        if (regions % r != 0 || regions / r > grid.cols) {
            continue;
        }
        const double tile_h = static_cast<double>(grid.rows) / r;
        const double tile_w = static_cast<double>(grid.cols) / (regions / r);
        const double gap = std::abs(std::log(tile_h / tile_w));
        if (best_gap < 0.0 || gap < best_gap) {
            best = {r, regions / r};
            best_gap = gap;
        }
    }
    return best;
}

struct PlantedBlock {
    std::uint32_t top = 0;
    std::uint32_t left = 0;
    std::uint32_t query = 0;
    std::vector<std::uint32_t> tokens;
};

std::string
padded_id(char prefix, std::uint32_t i, std::uint32_t count) {
    const int width = std::max(3, static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size()));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*u", prefix, width, i);
    return buf;
}

void
fill_unit_gaussian(Rng& rng, std::span<double> out) {
    double norm = 0.0;
    do {
        for (double& v : out) {
            v = rng.normal();
        }
        norm = l2_norm(out);
    } while (!(norm > 0.0));
    for (double& v : out) {
        v /= norm;
    }
}

}  // namespace

void
check_synthetic_spec(const SyntheticSpec& spec) {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, "synthetic spec: " + msg); };
    if (spec.num_docs == 0 || spec.num_queries == 0) {
        fail("num_docs and num_queries must be positive");
    }
    if (spec.grid.rows == 0 || spec.grid.cols == 0) {
        fail("grid must be non-empty");
    }
    if (spec.dim == 0 || spec.dim % 4 != 0) {
        fail("dim must be a positive multiple of 4");
    }
    if (spec.query_tokens == 0) {
        fail("query_tokens must be positive");
    }
    if (spec.signal_patches < spec.query_tokens) {
        fail("signal_patches must be >= query_tokens");
    }
    if (spec.signal_patches > spec.grid.size()) {
        fail("signal_patches exceeds rows x cols");
    }
    if (!block_shape(spec.signal_patches, spec.grid)) {
        fail("signal_patches=" + std::to_string(spec.signal_patches) + " has no rectangle fitting the grid");
    }
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
        fail("noise_sigma must be finite and >= 0");
    }
    if (!(spec.hard_negative_overlap > 0.0 && spec.hard_negative_overlap <= 1.0)) {
        fail("hard_negative_overlap must lie in (0, 1]");
    }
    if (spec.background_regions > spec.grid.size()) {
        fail("background_regions exceeds rows x cols");
    }
    const std::uint64_t planted = static_cast<std::uint64_t>(spec.num_queries) * (1 + spec.hard_negatives);
    if (planted > spec.num_docs) {
        fail("num_queries x (1 + hard_negatives) exceeds num_docs");
    }
}

SyntheticSpec
load_synthetic_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open synthetic spec " + path.string());
    }
    SyntheticSpec spec;
    try {
        const json j = json::parse(in);
        spec.num_docs = j.value("num_docs", spec.num_docs);
        spec.num_queries = j.value("num_queries", spec.num_queries);
        spec.grid.rows = j.value("rows", spec.grid.rows);
        spec.grid.cols = j.value("cols", spec.grid.cols);
        spec.dim = j.value("dim", spec.dim);
        spec.signal_patches = j.value("signal_patches", spec.signal_patches);
        spec.query_tokens = j.value("query_tokens", spec.query_tokens);
        spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
        spec.seed = j.value("seed", spec.seed);
        spec.hard_negatives = j.value("hard_negatives", spec.hard_negatives);
        spec.hard_negative_overlap = j.value("hard_negative_overlap", spec.hard_negative_overlap);
        spec.background_regions = j.value("background_regions", spec.background_regions);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    check_synthetic_spec(spec);
    return spec;
}

std::string
synthetic_spec_json(const SyntheticSpec& spec) {
    json j;
    j["num_docs"] = spec.num_docs;
    j["num_queries"] = spec.num_queries;
    j["rows"] = spec.grid.rows;
    j["cols"] = spec.grid.cols;
    j["dim"] = spec.dim;
    j["signal_patches"] = spec.signal_patches;
    j["query_tokens"] = spec.query_tokens;
    j["noise_sigma"] = spec.noise_sigma;
    j["seed"] = spec.seed;
    j["hard_negatives"] = spec.hard_negatives;
    j["hard_negative_overlap"] = spec.hard_negative_overlap;
    j["background_regions"] = spec.background_regions;
    return j.dump(2);
}

SyntheticCorpus
generate_synthetic(const SyntheticSpec& spec) {
    check_synthetic_spec(spec);
    const BlockShape shape = *block_shape(spec.signal_patches, spec.grid);
    Rng plan(mix_seed(spec.seed, kPlanStream));

    SyntheticCorpus corpus;
    corpus.queries.reserve(spec.num_queries);
    for (std::uint32_t q = 0; q < spec.num_queries; ++q) {
        QueryEmbeddingSet query{padded_id('q', q, spec.num_queries), spec.dim, Matrix(spec.query_tokens, spec.dim)};
        for (std::uint32_t t = 0; t < spec.query_tokens; ++t) {
            fill_unit_gaussian(plan, query.vectors.row(t));
        }
        corpus.queries.push_back(std::move(query));
    }

    std::vector<std::uint32_t> doc_order(spec.num_docs);
    std::iota(doc_order.begin(), doc_order.end(), 0U);
    for (std::uint32_t i = spec.num_docs - 1; i > 0; --i) {
        std::swap(doc_order[i], doc_order[plan.below(i + 1)]);
    }

    std::vector<std::optional<PlantedBlock>> blocks(spec.num_docs);
    auto place = [&](std::uint32_t doc, std::uint32_t query, std::vector<std::uint32_t> tokens) {
        PlantedBlock b;
        b.top = static_cast<std::uint32_t>(plan.below(spec.grid.rows - shape.rows + 1));
        b.left = static_cast<std::uint32_t>(plan.below(spec.grid.cols - shape.cols + 1));
        b.query = query;
        b.tokens = std::move(tokens);
        blocks[doc] = std::move(b);
    };

    std::vector<std::uint32_t> all_tokens(spec.query_tokens);
    std::iota(all_tokens.begin(), all_tokens.end(), 0U);
    std::size_t next_doc = 0;
    for (std::uint32_t q = 0; q < spec.num_queries; ++q) {
        const std::uint32_t doc = doc_order[next_doc++];
        place(doc, q, all_tokens);
        corpus.qrels.set(corpus.queries[q].query_id, padded_id('d', doc, spec.num_docs), 1);
    }
    const auto subset_size = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(std::lround(spec.hard_negative_overlap * spec.query_tokens)));
    for (std::uint32_t q = 0; q < spec.num_queries; ++q) {
        for (std::uint32_t h = 0; h < spec.hard_negatives; ++h) {
            std::vector<std::uint32_t> tokens = all_tokens;
            for (std::uint32_t i = spec.query_tokens - 1; i > 0; --i) {
                std::swap(tokens[i], tokens[plan.below(i + 1)]);
            }
            tokens.resize(subset_size);
            std::sort(tokens.begin(), tokens.end());
            place(doc_order[next_doc++], q, std::move(tokens));
        }
    }

    const BlockShape tiles = region_tiles(spec.background_regions, spec.grid);
    const double noise_scale = spec.noise_sigma / std::sqrt(static_cast<double>(spec.dim));
    corpus.docs.resize(spec.num_docs);
    for (std::uint32_t d = 0; d < spec.num_docs; ++d) {
        Rng rng(mix_seed(spec.seed, kDocStreamBase + d));
        PatchEmbeddingSet& set = corpus.docs[d];
        set.doc_id = padded_id('d', d, spec.num_docs);
        set.dim = spec.dim;
        set.grid = spec.grid;
        set.vectors = Matrix(spec.grid.size(), spec.dim);
        const auto& block = blocks[d];
        const std::uint32_t area = shape.rows * shape.cols;
        Matrix region_dirs(tiles.rows * tiles.cols, spec.dim);
        if (spec.background_regions > 0) {
            for (std::size_t t = 0; t < region_dirs.rows(); ++t) {
                fill_unit_gaussian(rng, region_dirs.row(t));
            }
        }
        for (std::uint32_t r = 0; r < spec.grid.rows; ++r) {
            for (std::uint32_t c = 0; c < spec.grid.cols; ++c) {
                auto v = set.vectors.row(static_cast<std::size_t>(r) * spec.grid.cols + c);
                const bool in_block = block && r >= block->top && r < block->top + shape.rows &&
                                      c >= block->left && c < block->left + shape.cols;
                if (!in_block && spec.background_regions == 0) {
                    fill_unit_gaussian(rng, v);
                    continue;
                }
                if (!in_block) {
                    const std::uint32_t tile = (r * tiles.rows / spec.grid.rows) * tiles.cols + c * tiles.cols / spec.grid.cols;
                    const auto dir = region_dirs.row(tile);
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        v[i] = dir[i] + noise_scale * rng.normal();
                    }
                    continue;
                }
                const std::uint32_t p = (r - block->top) * shape.cols + (c - block->left);
                const auto n_tok = static_cast<std::uint32_t>(block->tokens.size());
                const std::uint32_t token = block->tokens[static_cast<std::uint64_t>(p) * n_tok / area];
                const auto dir = corpus.queries[block->query].vectors.row(token);
                for (std::size_t i = 0; i < v.size(); ++i) {
                    v[i] = dir[i] + noise_scale * rng.normal();
                }
            }
        }
    }
    return corpus;
}

SyntheticPaths
write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& dir, const std::string& location) {
    std::filesystem::create_directories(dir);
    SyntheticPaths paths{dir / "manifest.json", dir / "queries.json", dir / "qrels.txt"};
    write_dump(paths.manifest, corpus.docs, location);
    write_queries(paths.queries, corpus.queries);
    std::ofstream out(paths.qrels, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot create " + paths.qrels.string());
    }
    corpus.qrels.write(out);
    return paths;
}

}  // namespace colchunk
