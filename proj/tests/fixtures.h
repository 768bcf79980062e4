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
#include <random>
#include <string>
#include <vector>

#include "colchunk/core_types.h"
#include "colchunk/corpus.h"
#include "colchunk/index_store.h"

namespace fixtures {

using Rows = std::vector<std::vector<double>>;

inline Rows
random_rows(std::mt19937_64& gen, std::size_t n, std::size_t dim) {
    std::normal_distribution<double> normal;
    Rows rows(n, std::vector<double>(dim));
    for (auto& r : rows) {
        for (double& v : r) {
            v = normal(gen);
        }
    }
    return rows;
}

inline colchunk::Matrix
to_matrix(const Rows& rows) {
    colchunk::Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

inline Rows
to_rows(const colchunk::Matrix& m) {
    Rows rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
}

inline colchunk::PatchEmbeddingSet
random_page(std::mt19937_64& gen, std::string id, std::uint32_t rows, std::uint32_t cols, std::uint32_t dim) {
    return {std::move(id), dim, {rows, cols}, to_matrix(random_rows(gen, static_cast<std::size_t>(rows) * cols, dim))};
}

inline colchunk::QueryEmbeddingSet
random_query(std::mt19937_64& gen, std::string id, std::uint32_t tokens, std::uint32_t dim) {
    return {std::move(id), dim, to_matrix(random_rows(gen, tokens, dim))};
}

// Unit chunks with arbitrary sizes; enough for storage and scoring tests.
inline colchunk::CompressedDocument
random_compressed(std::mt19937_64& gen, std::string id, std::uint32_t k, std::uint32_t dim) {
    colchunk::CompressedDocument doc;
    doc.doc_id = std::move(id);
    doc.dim = dim;
    doc.chunks = to_matrix(random_rows(gen, k, dim));
    for (std::size_t i = 0; i < k; ++i) {
        const double norm = colchunk::l2_norm(doc.chunks.row(i));
        for (double& v : doc.chunks.row(i)) {
            v /= norm;
        }
        doc.chunk_sizes.push_back(1 + static_cast<std::uint32_t>(gen() % 20));
    }
    return doc;
}

inline colchunk::CorpusIndex
random_index(std::mt19937_64& gen, std::size_t docs, std::uint32_t dim) {
    colchunk::CorpusIndex index;
    index.dim = dim;
    for (std::size_t d = 0; d < docs; ++d) {
        index.docs.push_back(
            random_compressed(gen, "doc-" + std::to_string(d), 1 + static_cast<std::uint32_t>(gen() % 12), dim));
    }
    index.build_meta.tool_version = "test";
    index.build_meta.location = "after-llm";
    return index;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("colchunk-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir&
    operator=(const TempDir&) = delete;

    const std::filesystem::path&
    path() const noexcept {
        return path_;
    }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
