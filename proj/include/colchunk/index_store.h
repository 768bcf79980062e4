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

// On-disk layout of a compressed corpus ("CCHK" v1), all integers and
// floats little-endian:
//
//   magic        4 bytes   "CCHK"
//   version      u32       1
//   dim          u32
//   doc_count    u64
//   per document:
//     id_len     u16, then id_len bytes of UTF-8 doc id
//     k          u32
//     sizes      k x u32   patches pooled into each chunk
//     chunks     k x dim x f32, row-major
//   trailer      UTF-8 JSON object with the build metadata
//   trailer_len  u64       byte length of the JSON trailer (last 8 bytes)

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>

#include "colchunk/corpus.h"

namespace colchunk {

inline constexpr char kIndexMagic[4] = {'C', 'C', 'H', 'K'};
inline constexpr std::uint32_t kIndexVersion = 1;

/// Bytes of f32 vector payload one document occupies: k * dim * 4.
std::uint64_t
vector_payload_bytes(std::uint32_t k, std::uint32_t dim);

/// Bytes of one document record including its id, k and sizes.
std::uint64_t
document_record_bytes(const CompressedDocument& doc);

/// Serialized build metadata (compact JSON, keys sorted).
std::string
build_meta_json(const BuildMeta& meta);

BuildMeta
parse_build_meta(std::string_view json);

/// Validates the index, then writes it. Throws Error(kIo) on stream failure.
void
write_index(const CorpusIndex& index, std::ostream& out);

void
write_index(const CorpusIndex& index, const std::filesystem::path& path);

/// Parses and validates an index. Errors: kBadMagic, kUnsupportedVersion,
/// kTruncated, kCorrupt (bad trailer or trailing garbage), kValidation.
/// Chunk norms are checked with a tolerance that covers f32 rounding.
CorpusIndex
read_index(std::span<const std::uint8_t> bytes);

CorpusIndex
read_index(const std::filesystem::path& path);

}  // namespace colchunk
