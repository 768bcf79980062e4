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

#include "colchunk/dump.h"

#include <fstream>
#include <unordered_set>

#include "colchunk/raw_io.h"
#include "json.hpp"

namespace colchunk {

namespace {

using nlohmann::json;

json
parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
}

void
write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot create " + path.string());
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw Error(ErrorCode::kIo, "failed writing " + path.string());
    }
}

// Doc ids become file names in generated dumps.
void
check_file_safe_id(const std::string& id) {
    if (id.empty() || id.find('/') != std::string::npos || id.find('\\') != std::string::npos ||
        id == "." || id == "..") {
        throw Error(ErrorCode::kInvalidArgument, "id '" + id + "' cannot be used as a file name");
    }
}

}  // namespace

EmbeddingDumpManifest
load_manifest(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    EmbeddingDumpManifest manifest;
    manifest.base_dir = path.parent_path();
    try {
        manifest.dim = j.at("dim").get<std::uint32_t>();
        manifest.location = j.value("location", std::string{});
        for (const auto& e : j.at("entries")) {
            DumpEntry entry;
            entry.doc_id = e.at("doc_id").get<std::string>();
            entry.rows = e.at("rows").get<std::uint32_t>();
            entry.cols = e.at("cols").get<std::uint32_t>();
            entry.n_vectors = e.at("n_vectors").get<std::uint64_t>();
            entry.path = e.at("path").get<std::string>();
            manifest.entries.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }

    if (manifest.dim == 0) {
        throw Error(ErrorCode::kValidation, path.string() + ": dim must be positive");
    }
    std::unordered_set<std::string> seen;
    for (const auto& entry : manifest.entries) {
        if (!seen.insert(entry.doc_id).second) {
            throw Error(ErrorCode::kValidation, "duplicate doc_id '" + entry.doc_id + "' in manifest");
        }
        if (entry.rows == 0 || entry.cols == 0 ||
            entry.n_vectors != static_cast<std::uint64_t>(entry.rows) * entry.cols) {
            throw Error(ErrorCode::kValidation,
                        entry.doc_id + ": n_vectors " + std::to_string(entry.n_vectors) +
                            " does not match a " + std::to_string(entry.rows) + "x" +
                            std::to_string(entry.cols) + " grid");
        }
    }
    for (const auto& entry : manifest.entries) {
        if (!std::filesystem::is_regular_file(manifest.resolve(entry))) {
            throw Error(ErrorCode::kIo,
                        entry.doc_id + ": raw file " + manifest.resolve(entry).string() + " not found");
        }
    }
    return manifest;
}

PatchEmbeddingSet
load_entry(const EmbeddingDumpManifest& manifest, std::size_t index) {
    const DumpEntry& entry = manifest.entries.at(index);
    PatchEmbeddingSet set;
    set.doc_id = entry.doc_id;
    set.dim = manifest.dim;
    set.grid = {entry.rows, entry.cols};
    try {
        set.vectors = io::read_f32_matrix(manifest.resolve(entry), entry.n_vectors, manifest.dim);
    } catch (const Error& e) {
        throw Error(e.code(), entry.doc_id + ": " + e.what());
    }
    throw_if_invalid(validate(set), entry.doc_id);
    return set;
}

std::optional<PatchEmbeddingSet>
DumpReader::next() {
    if (cursor_ >= manifest_.entries.size()) {
        return std::nullopt;
    }
    return load_entry(manifest_, cursor_++);
}

void
write_dump(const std::filesystem::path& manifest_path,
           const std::vector<PatchEmbeddingSet>& sets,
           const std::string& location,
           const std::string& raw_subdir) {
    if (sets.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "refusing to write an empty dump");
    }
    const auto base = manifest_path.parent_path();
    std::filesystem::create_directories(base / raw_subdir);
    json j;
    j["dim"] = sets.front().dim;
    j["location"] = location;
    j["entries"] = json::array();
    for (const auto& set : sets) {
        check_file_safe_id(set.doc_id);
        throw_if_invalid(validate(set), set.doc_id);
        if (set.dim != sets.front().dim) {
            throw Error(ErrorCode::kDimensionMismatch, set.doc_id + ": dim differs within dump");
        }
        const std::string rel = raw_subdir + "/" + set.doc_id + ".f32";
        io::write_f32_matrix(base / rel, set.vectors);
        j["entries"].push_back({{"doc_id", set.doc_id},
                                {"rows", set.grid.rows},
                                {"cols", set.grid.cols},
                                {"n_vectors", set.size()},
                                {"path", rel}});
    }
    write_json_file(manifest_path, j);
}

std::vector<QueryEmbeddingSet>
load_queries(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    std::vector<QueryEmbeddingSet> queries;
    std::uint32_t dim = 0;
    struct Pending {
        std::string id;
        std::uint64_t n;
        std::filesystem::path file;
    };
    std::vector<Pending> pending;
    try {
        dim = j.at("dim").get<std::uint32_t>();
        for (const auto& q : j.at("queries")) {
            pending.push_back({q.at("query_id").get<std::string>(),
                               q.at("n_vectors").get<std::uint64_t>(),
                               path.parent_path() / q.at("path").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    if (dim == 0) {
        throw Error(ErrorCode::kValidation, path.string() + ": dim must be positive");
    }
    std::unordered_set<std::string> seen;
    for (const auto& p : pending) {
        if (!seen.insert(p.id).second) {
            throw Error(ErrorCode::kValidation, "duplicate query_id '" + p.id + "'");
        }
        if (!std::filesystem::is_regular_file(p.file)) {
            throw Error(ErrorCode::kIo, p.id + ": raw file " + p.file.string() + " not found");
        }
    }
    for (const auto& p : pending) {
        QueryEmbeddingSet query{p.id, dim, {}};
        try {
            query.vectors = io::read_f32_matrix(p.file, p.n, dim);
        } catch (const Error& e) {
            throw Error(e.code(), p.id + ": " + e.what());
        }
        throw_if_invalid(validate(query), "query " + p.id);
        queries.push_back(std::move(query));
    }
    return queries;
}

void
write_queries(const std::filesystem::path& manifest_path,
              const std::vector<QueryEmbeddingSet>& queries,
              const std::string& raw_subdir) {
    if (queries.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "refusing to write an empty query dump");
    }
    const auto base = manifest_path.parent_path();
    std::filesystem::create_directories(base / raw_subdir);
    json j;
    j["dim"] = queries.front().dim;
    j["queries"] = json::array();
    for (const auto& q : queries) {
        check_file_safe_id(q.query_id);
        throw_if_invalid(validate(q), "query " + q.query_id);
        const std::string rel = raw_subdir + "/" + q.query_id + ".f32";
        io::write_f32_matrix(base / rel, q.vectors);
        j["queries"].push_back({{"query_id", q.query_id}, {"n_vectors", q.size()}, {"path", rel}});
    }
    write_json_file(manifest_path, j);
}

}  // namespace colchunk
