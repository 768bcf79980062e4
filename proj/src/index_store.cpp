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

#include "colchunk/index_store.h"

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "colchunk/raw_io.h"
#include "json.hpp"

namespace colchunk {

namespace {

using nlohmann::json;

}  // namespace

ValidationReport
validate(const CorpusIndex& index, double unit_tolerance) {
    ValidationReport report;
    if (index.dim == 0) {
        report.add("dim", std::nullopt, "must be positive");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < index.docs.size(); ++i) {
        const auto& doc = index.docs[i];
        if (doc.dim != index.dim) {
            report.add("docs", i, doc.doc_id + ": dim " + std::to_string(doc.dim) + " ≠ " +
                                      std::to_string(index.dim));
        }
        if (!seen.insert(doc.doc_id).second) {
            report.add("docs", i, "duplicate doc_id '" + doc.doc_id + "'");
        }
        if (doc.doc_id.size() > std::numeric_limits<std::uint16_t>::max()) {
            report.add("docs", i, "doc_id longer than 65535 bytes");
        }
        const auto doc_report = validate(doc, unit_tolerance);
        for (const auto& v : doc_report.violations()) {
            std::string where = v.field;
            if (v.index) {
                where += "[" + std::to_string(*v.index) + "]";
            }
            report.add("docs", i, doc.doc_id + ": " + where + ": " + v.message);
        }
    }
    return report;
}

std::uint64_t
vector_payload_bytes(std::uint32_t k, std::uint32_t dim) {
    return static_cast<std::uint64_t>(k) * dim * 4;
}

std::uint64_t
document_record_bytes(const CompressedDocument& doc) {
    return 2 + doc.doc_id.size() + 4 + 4ULL * doc.k() + vector_payload_bytes(doc.k(), doc.dim);
}

std::string
build_meta_json(const BuildMeta& meta) {
    json j;
    j["omega"] = meta.omega;
    j["k_target"] = meta.k_target;
    j["method"] = meta.method;
    j["posenc_base"] = meta.posenc_base;
    j["normalize_semantic"] = meta.normalize_semantic;
    j["seed"] = meta.seed;
    j["tool_version"] = meta.tool_version;
    j["location"] = meta.location;
    return j.dump();
}

BuildMeta
parse_build_meta(std::string_view text) {
    try {
        const json j = json::parse(text);
        BuildMeta meta;
        meta.omega = j.at("omega").get<double>();
        meta.k_target = j.at("k_target").get<std::uint32_t>();
        meta.method = j.at("method").get<std::string>();
        meta.posenc_base = j.at("posenc_base").get<double>();
        meta.normalize_semantic = j.at("normalize_semantic").get<bool>();
        meta.seed = j.at("seed").get<std::uint64_t>();
        meta.tool_version = j.at("tool_version").get<std::string>();
        meta.location = j.at("location").get<std::string>();
        return meta;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kCorrupt, std::string("malformed index trailer: ") + e.what());
    }
}

void
write_index(const CorpusIndex& index, std::ostream& out) {
    // f32 rounding of in-memory unit vectors is far below this tolerance.
    throw_if_invalid(validate(index), "index");

    out.write(kIndexMagic, sizeof(kIndexMagic));
    io::put_u32(out, kIndexVersion);
    io::put_u32(out, index.dim);
    io::put_u64(out, index.docs.size());
    for (const auto& doc : index.docs) {
        io::put_u16(out, static_cast<std::uint16_t>(doc.doc_id.size()));
        out.write(doc.doc_id.data(), static_cast<std::streamsize>(doc.doc_id.size()));
        io::put_u32(out, doc.k());
        for (auto size : doc.chunk_sizes) {
            io::put_u32(out, size);
        }
        io::put_f32_values(out, doc.chunks.data());
    }
    const std::string trailer = build_meta_json(index.build_meta);
    out.write(trailer.data(), static_cast<std::streamsize>(trailer.size()));
    io::put_u64(out, trailer.size());
    if (!out) {
        throw Error(ErrorCode::kIo, "failed writing index");
    }
}

void
write_index(const CorpusIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot create " + path.string());
    }
    write_index(index, out);
    out.close();
    if (!out) {
        throw Error(ErrorCode::kIo, "failed closing " + path.string());
    }
}

CorpusIndex
read_index(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;
    if (bytes.size() < sizeof(kIndexMagic)) {
        throw Error(ErrorCode::kTruncated, "index shorter than its magic bytes");
    }
    if (!std::equal(std::begin(kIndexMagic), std::end(kIndexMagic), bytes.begin())) {
        throw Error(ErrorCode::kBadMagic, "not a CCHK index (bad magic bytes)");
    }
    if (bytes.size() < kHeaderBytes + 8) {
        throw Error(ErrorCode::kTruncated, "index shorter than header and trailer length");
    }

    io::ByteReader header(bytes.subspan(sizeof(kIndexMagic)));
    const std::uint32_t version = header.u32();
    if (version != kIndexVersion) {
        throw Error(ErrorCode::kUnsupportedVersion,
                    "unsupported index version " + std::to_string(version));
    }

    io::ByteReader tail(bytes.subspan(bytes.size() - 8));
    const std::uint64_t trailer_len = tail.u64();
    if (trailer_len > bytes.size() - kHeaderBytes - 8) {
        throw Error(ErrorCode::kTruncated, "trailer length exceeds file size");
    }
    const std::size_t body_end = bytes.size() - 8 - static_cast<std::size_t>(trailer_len);

    CorpusIndex index;
    index.dim = header.u32();
    const std::uint64_t doc_count = header.u64();

    io::ByteReader body(bytes.subspan(kHeaderBytes, body_end - kHeaderBytes));
    // Each record takes at least 2 + 4 bytes; reject absurd counts up front.
    if (doc_count > body.remaining() / 6 + 1) {
        throw Error(ErrorCode::kTruncated, "document count exceeds file size");
    }
    index.docs.reserve(static_cast<std::size_t>(doc_count));
    for (std::uint64_t d = 0; d < doc_count; ++d) {
        CompressedDocument doc;
        doc.dim = index.dim;
        doc.doc_id = body.string(body.u16());
        const std::uint32_t k = body.u32();
        if (k > body.remaining() / 4) {
            throw Error(ErrorCode::kTruncated, "chunk count of " + doc.doc_id + " exceeds file size");
        }
        doc.chunk_sizes.resize(k);
        for (auto& size : doc.chunk_sizes) {
            size = body.u32();
        }
        if (index.dim != 0 && k > body.remaining() / 4 / index.dim) {
            throw Error(ErrorCode::kTruncated, "chunk payload of " + doc.doc_id + " exceeds file size");
        }
        doc.chunks = Matrix(k, index.dim);
        body.f32_values(doc.chunks.data());
        index.docs.push_back(std::move(doc));
    }
    if (body.remaining() != 0) {
        throw Error(ErrorCode::kCorrupt,
                    std::to_string(body.remaining()) + " unexpected bytes before index trailer");
    }

    const std::string trailer(reinterpret_cast<const char*>(bytes.data() + body_end),
                              static_cast<std::size_t>(trailer_len));
    index.build_meta = parse_build_meta(trailer);

    // f32 storage perturbs unit norms by ~1e-7; keep the documented 1e-6.
    throw_if_invalid(validate(index, 1e-6), "index");
    return index;
}

CorpusIndex
read_index(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    return read_index(std::span<const std::uint8_t>(bytes));
}

}  // namespace colchunk
