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

// Shared data model: patch grids, embedding sets, partitions and compressed
// multi-vector documents. Everything is a plain value; once built, objects are
// passed around by const reference and never mutated, so they can be shared
// across threads freely.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colchunk/error.h"
#include "colchunk/matrix.h"

namespace colchunk {

/// Patch layout of one page: `rows` x `cols` patches, stored row-major.
struct PatchGrid {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;

    std::size_t
    size() const noexcept {
        return static_cast<std::size_t>(rows) * cols;
    }

    bool
    operator==(const PatchGrid&) const = default;
};

/// Contextual patch embeddings of one page. Row j of `vectors` is the patch at
/// grid position (j / cols, j % cols).
struct PatchEmbeddingSet {
    std::string doc_id;
    std::uint32_t dim = 0;
    PatchGrid grid;
    Matrix vectors;

    std::size_t
    size() const noexcept {
        return vectors.rows();
    }
};

/// Patch-center coordinates in the unit square.
struct NormalizedCoords {
    double x = 0.0;
    double y = 0.0;

    bool
    operator==(const NormalizedCoords&) const = default;
};

/// Spatial-semantic features used only to drive clustering.
struct FusedFeatureSet {
    std::uint32_t dim = 0;
    double omega = 0.0;
    Matrix vectors;

    std::size_t
    size() const noexcept {
        return vectors.rows();
    }
};

/// Partition of N patch indices into K non-empty chunks.
struct ChunkAssignment {
    std::uint32_t k = 0;
    std::vector<std::uint32_t> labels;
    std::vector<std::uint32_t> sizes;

    bool
    operator==(const ChunkAssignment&) const = default;
};

/// K unit-norm chunk vectors standing in for a page's patches.
struct CompressedDocument {
    std::string doc_id;
    std::uint32_t dim = 0;
    Matrix chunks;
    std::vector<std::uint32_t> chunk_sizes;

    std::uint32_t
    k() const noexcept {
        return static_cast<std::uint32_t>(chunks.rows());
    }

    /// Number of source patches the document was built from.
    std::uint64_t
    source_patches() const noexcept;

    bool
    operator==(const CompressedDocument&) const = default;
};

struct QueryEmbeddingSet {
    std::string query_id;
    std::uint32_t dim = 0;
    Matrix vectors;

    std::size_t
    size() const noexcept {
        return vectors.rows();
    }
};

struct Violation {
    std::string field;
    std::optional<std::size_t> index;
    std::string message;
};

class ValidationReport {
public:
    bool
    ok() const noexcept {
        return violations_.empty();
    }

    const std::vector<Violation>&
    violations() const noexcept {
        return violations_;
    }

    void
    add(std::string field, std::optional<std::size_t> index, std::string message);

    /// One violation per line, e.g. "vectors[1]: non-finite component".
    std::string
    to_string() const;

private:
    std::vector<Violation> violations_;
};

// Violations are reported as data; these never throw.
ValidationReport
validate(const PatchEmbeddingSet& set);

ValidationReport
validate(const QueryEmbeddingSet& query);

/// `unit_tolerance` bounds | ||chunk|| - 1 |.
ValidationReport
validate(const CompressedDocument& doc, double unit_tolerance = 1e-6);

ValidationReport
validate(const ChunkAssignment& assignment);

/// Throws Error(kValidation) carrying the report text when `report` is not ok.
void
throw_if_invalid(const ValidationReport& report, const std::string& context);

/// Patch-center convention: x = (col + 0.5) / cols, y = (row + 0.5) / rows.
NormalizedCoords
patch_coords(const PatchGrid& grid, std::size_t j);

/// Builds an assignment from arbitrary cluster ids: ids are renumbered
/// 0..K-1 by ascending smallest member index and sizes are recounted.
ChunkAssignment
make_assignment(std::span<const std::uint32_t> raw_labels);

}  // namespace colchunk
