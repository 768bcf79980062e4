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

#include "colchunk/core_types.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace colchunk {

std::string_view
error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument:
            return "invalid argument";
        case ErrorCode::kOutOfRange:
            return "out of range";
        case ErrorCode::kDimensionMismatch:
            return "dimension mismatch";
        case ErrorCode::kValidation:
            return "validation";
        case ErrorCode::kDegenerate:
            return "degenerate";
        case ErrorCode::kParse:
            return "parse";
        case ErrorCode::kIo:
            return "i/o";
        case ErrorCode::kBadMagic:
            return "bad magic";
        case ErrorCode::kUnsupportedVersion:
            return "unsupported version";
        case ErrorCode::kTruncated:
            return "truncated";
        case ErrorCode::kCorrupt:
            return "corrupt";
    }
    return "unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::kInvalidArgument,
                    "matrix buffer holds " + std::to_string(data_.size()) + " values, expected " +
                        std::to_string(rows * cols));
    }
}

std::uint64_t
CompressedDocument::source_patches() const noexcept {
    return std::accumulate(chunk_sizes.begin(), chunk_sizes.end(), std::uint64_t{0});
}

void
ValidationReport::add(std::string field, std::optional<std::size_t> index, std::string message) {
    violations_.push_back({std::move(field), index, std::move(message)});
}

std::string
ValidationReport::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations_.size(); ++i) {
        const auto& v = violations_[i];
        if (i > 0) {
            out << '\n';
        }
        out << v.field;
        if (v.index) {
            out << '[' << *v.index << ']';
        }
        out << ": " << v.message;
    }
    return out.str();
}

void
throw_if_invalid(const ValidationReport& report, const std::string& context) {
    if (!report.ok()) {
        throw Error(ErrorCode::kValidation, context + ": " + report.to_string());
    }
}

namespace {

// Flags rows with non-finite components and, when requested, zero-norm rows.
void
check_rows(const Matrix& m, bool require_nonzero, ValidationReport& report) {
    for (std::size_t j = 0; j < m.rows(); ++j) {
        const auto row = m.row(j);
        bool finite = true;
        for (double v : row) {
            if (!std::isfinite(v)) {
                finite = false;
                break;
            }
        }
        if (!finite) {
            report.add("vectors", j, "non-finite component");
        } else if (require_nonzero && dot(row, row) == 0.0) {
            report.add("vectors", j, "zero-norm vector");
        }
    }
}

}  // namespace

ValidationReport
validate(const PatchEmbeddingSet& set) {
    ValidationReport report;
    if (set.dim == 0) {
        report.add("dim", std::nullopt, "must be positive");
    }
    if (set.grid.rows == 0) {
        report.add("grid.rows", std::nullopt, "must be positive");
    }
    if (set.grid.cols == 0) {
        report.add("grid.cols", std::nullopt, "must be positive");
    }
    if (set.vectors.rows() != set.grid.size()) {
        report.add("vectors",
                   std::nullopt,
                   "count mismatch: " + std::to_string(set.vectors.rows()) + " ≠ " +
                       std::to_string(set.grid.size()));
    }
    if (set.vectors.rows() > 0 && set.vectors.cols() != set.dim) {
        report.add("vectors",
                   std::nullopt,
                   "dim mismatch: " + std::to_string(set.vectors.cols()) + " ≠ " +
                       std::to_string(set.dim));
    }
    check_rows(set.vectors, true, report);
    return report;
}

ValidationReport
validate(const QueryEmbeddingSet& query) {
    ValidationReport report;
    if (query.dim == 0) {
        report.add("dim", std::nullopt, "must be positive");
    }
    if (query.vectors.rows() == 0) {
        report.add("vectors", std::nullopt, "query has no tokens");
    } else if (query.vectors.cols() != query.dim) {
        report.add("vectors",
                   std::nullopt,
                   "dim mismatch: " + std::to_string(query.vectors.cols()) + " ≠ " +
                       std::to_string(query.dim));
    }
    check_rows(query.vectors, true, report);
    return report;
}

ValidationReport
validate(const CompressedDocument& doc, double unit_tolerance) {
    ValidationReport report;
    if (doc.dim == 0) {
        report.add("dim", std::nullopt, "must be positive");
    }
    if (doc.chunks.rows() == 0) {
        report.add("chunks", std::nullopt, "document has no chunks");
    } else if (doc.chunks.cols() != doc.dim) {
        report.add("chunks",
                   std::nullopt,
                   "dim mismatch: " + std::to_string(doc.chunks.cols()) + " ≠ " +
                       std::to_string(doc.dim));
    }
    if (doc.chunk_sizes.size() != doc.chunks.rows()) {
        report.add("chunk_sizes",
                   std::nullopt,
                   "count mismatch: " + std::to_string(doc.chunk_sizes.size()) + " ≠ " +
                       std::to_string(doc.chunks.rows()));
    }
    for (std::size_t k = 0; k < doc.chunk_sizes.size(); ++k) {
        if (doc.chunk_sizes[k] == 0) {
            report.add("chunk_sizes", k, "empty chunk");
        }
    }
    for (std::size_t k = 0; k < doc.chunks.rows(); ++k) {
        const auto row = doc.chunks.row(k);
        const double norm = l2_norm(row);
        if (!std::isfinite(norm)) {
            report.add("chunks", k, "non-finite component");
        } else if (std::abs(norm - 1.0) > unit_tolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "norm " << norm << " is not unit";
            report.add("chunks", k, msg.str());
        }
    }
    return report;
}

ValidationReport
validate(const ChunkAssignment& assignment) {
    ValidationReport report;
    if (assignment.k == 0) {
        report.add("k", std::nullopt, "must be positive");
    }
    if (assignment.sizes.size() != assignment.k) {
        report.add("sizes",
                   std::nullopt,
                   "count mismatch: " + std::to_string(assignment.sizes.size()) + " ≠ " +
                       std::to_string(assignment.k));
        return report;
    }
    std::vector<std::uint32_t> counts(assignment.k, 0);
    for (std::size_t j = 0; j < assignment.labels.size(); ++j) {
        const auto label = assignment.labels[j];
        if (label >= assignment.k) {
            report.add("labels", j, "label " + std::to_string(label) + " out of range");
        } else {
            ++counts[label];
        }
    }
    for (std::uint32_t c = 0; c < assignment.k; ++c) {
        if (counts[c] == 0) {
            report.add("sizes", c, "cluster has no members");
        }
        if (counts[c] != assignment.sizes[c]) {
            report.add("sizes",
                       c,
                       "recorded size " + std::to_string(assignment.sizes[c]) + " ≠ " +
                           std::to_string(counts[c]));
        }
    }
    return report;
}

NormalizedCoords
patch_coords(const PatchGrid& grid, std::size_t j) {
    if (grid.rows == 0 || grid.cols == 0 || j >= grid.size()) {
        throw Error(ErrorCode::kOutOfRange,
                    "patch index " + std::to_string(j) + " outside " + std::to_string(grid.rows) +
                        "x" + std::to_string(grid.cols) + " grid");
    }
    const std::size_t row = j / grid.cols;
    const std::size_t col = j % grid.cols;
    return {(static_cast<double>(col) + 0.5) / grid.cols,
            (static_cast<double>(row) + 0.5) / grid.rows};
}

ChunkAssignment
make_assignment(std::span<const std::uint32_t> raw_labels) {
    ChunkAssignment out;
    out.labels.resize(raw_labels.size());
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    // Walking indices in order assigns new ids by first (= smallest) member.
    for (std::size_t j = 0; j < raw_labels.size(); ++j) {
        auto [it, inserted] = remap.try_emplace(raw_labels[j], static_cast<std::uint32_t>(remap.size()));
        if (inserted) {
            out.sizes.push_back(0);
        }
        out.labels[j] = it->second;
        ++out.sizes[it->second];
    }
    out.k = static_cast<std::uint32_t>(out.sizes.size());
    return out;
}

}  // namespace colchunk
