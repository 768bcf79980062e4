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

// Embedding dumps produced by an external encoder.
//
// Document manifest (JSON):
//   {"dim": 128, "location": "after-llm",
//    "entries": [{"doc_id": "d0", "rows": 32, "cols": 24,
//                 "n_vectors": 768, "path": "docs/d0.f32"}, ...]}
//
// Query manifest (JSON):
//   {"dim": 128,
//    "queries": [{"query_id": "q0", "n_vectors": 8, "path": "queries/q0.f32"}]}
//
// Paths are relative to the manifest's directory. Each raw file is a flat
// float32 little-endian array of n_vectors x dim values, row-major.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "colchunk/core_types.h"

namespace colchunk {

struct DumpEntry {
    std::string doc_id;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::uint64_t n_vectors = 0;
    std::string path;
};

struct EmbeddingDumpManifest {
    std::uint32_t dim = 0;
    std::vector<DumpEntry> entries;
    std::string location;
    /// Directory the entry paths are resolved against.
    std::filesystem::path base_dir;

    std::filesystem::path
    resolve(const DumpEntry& entry) const {
        return base_dir / entry.path;
    }
};

/// Parses a manifest and checks it before any raw file is opened: dim > 0,
/// n_vectors == rows * cols, unique doc ids, and every referenced file exists.
/// Errors: kParse, kValidation, kIo (missing file, message names the doc).
EmbeddingDumpManifest
load_manifest(const std::filesystem::path& path);

/// Loads and validates one entry. Size mismatches and invalid vectors are
/// reported as kValidation naming the doc id.
PatchEmbeddingSet
load_entry(const EmbeddingDumpManifest& manifest, std::size_t index);

/// Yields the manifest's documents one at a time, in manifest order.
class DumpReader {
public:
    explicit DumpReader(const std::filesystem::path& manifest_path)
        : manifest_(load_manifest(manifest_path)) {
    }

    const EmbeddingDumpManifest&
    manifest() const noexcept {
        return manifest_;
    }

    std::optional<PatchEmbeddingSet>
    next();

private:
    EmbeddingDumpManifest manifest_;
    std::size_t cursor_ = 0;
};

/// Writes each set to <dir>/<raw_subdir>/<doc_id>.f32 plus the manifest at
/// `manifest_path`. Vectors are narrowed to float32.
void
write_dump(const std::filesystem::path& manifest_path,
           const std::vector<PatchEmbeddingSet>& sets,
           const std::string& location,
           const std::string& raw_subdir = "docs");

std::vector<QueryEmbeddingSet>
load_queries(const std::filesystem::path& path);

void
write_queries(const std::filesystem::path& manifest_path,
              const std::vector<QueryEmbeddingSet>& queries,
              const std::string& raw_subdir = "queries");

}  // namespace colchunk
