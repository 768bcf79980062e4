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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "colchunk/dump.h"
#include "colchunk/scorer.h"
#include "colchunk/synthetic.h"
#include "fixtures.h"
#include "oracles/oracles.h"

using namespace colchunk;
using Catch::Matchers::WithinAbs;

namespace {

SyntheticSpec
small_spec() {
    SyntheticSpec spec;
    spec.num_docs = 12;
    spec.num_queries = 3;
    spec.grid = {6, 5};
    spec.dim = 16;
    spec.signal_patches = 6;
    spec.query_tokens = 3;
    return spec;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed", "[synthetic]") {
    const auto a = generate_synthetic(small_spec());
    const auto b = generate_synthetic(small_spec());
    auto other = small_spec();
    other.seed = 8;
    const auto c = generate_synthetic(other);
    REQUIRE(a.docs.size() == 12);
    for (std::size_t d = 0; d < a.docs.size(); ++d) {
        CHECK(a.docs[d].vectors == b.docs[d].vectors);
    }
    CHECK_FALSE(a.docs[0].vectors == c.docs[0].vectors);
    CHECK(a.qrels.all() == b.qrels.all());
}

TEST_CASE("ids and judgments", "[synthetic]") {
    const auto corpus = generate_synthetic(small_spec());
    CHECK(corpus.docs[0].doc_id == "d000");
    CHECK(corpus.queries[2].query_id == "q002");
    for (const auto& q : corpus.queries) {
        const auto& j = corpus.qrels.judgments(q.query_id);
        REQUIRE(j.size() == 1);
        CHECK(j.begin()->second == 1);
    }
}

TEST_CASE("zero noise plants exact query tokens", "[synthetic]") {
    auto spec = small_spec();
    spec.noise_sigma = 0.0;
    const auto corpus = generate_synthetic(spec);
    for (const auto& q : corpus.queries) {
        const auto& relevant = corpus.qrels.judgments(q.query_id).begin()->first;
        double best = -1.0;
        std::string best_doc;
        for (const auto& doc : corpus.docs) {
            const double s = oracle::maxsim(fixtures::to_rows(q.vectors), fixtures::to_rows(doc.vectors));
            if (s > best) {
                best = s;
                best_doc = doc.doc_id;
            }
        }
        CHECK(best_doc == relevant);
        CHECK_THAT(best, WithinAbs(static_cast<double>(q.size()), 1e-12));
    }
}

TEST_CASE("the planted block is a contiguous rectangle", "[synthetic]") {
    auto spec = small_spec();
    spec.noise_sigma = 0.0;
    const auto corpus = generate_synthetic(spec);
    const auto& q = corpus.queries[0];
    const auto& relevant = corpus.qrels.judgments(q.query_id).begin()->first;
    const auto& doc = *std::find_if(corpus.docs.begin(), corpus.docs.end(),
                                    [&](const auto& d) { return d.doc_id == relevant; });
    std::vector<std::size_t> hits;
    for (std::size_t j = 0; j < doc.size(); ++j) {
        for (std::size_t t = 0; t < q.size(); ++t) {
            if (dot(doc.vectors.row(j), q.vectors.row(t)) > 1.0 - 1e-12) {
                hits.push_back(j);
            }
        }
    }
    REQUIRE(hits.size() == 6);
    std::size_t r0 = 99, r1 = 0, c0 = 99, c1 = 0;
    for (auto j : hits) {
        r0 = std::min(r0, j / 5);
        r1 = std::max(r1, j / 5);
        c0 = std::min(c0, j % 5);
        c1 = std::max(c1, j % 5);
    }
    CHECK((r1 - r0 + 1) * (c1 - c0 + 1) == 6);
}

TEST_CASE("hard negatives carry part of the query", "[synthetic]") {
    auto spec = small_spec();
    spec.noise_sigma = 0.0;
    spec.hard_negatives = 2;
    spec.hard_negative_overlap = 0.67;
    const auto corpus = generate_synthetic(spec);
    const auto& q = corpus.queries[1];
    // Count documents holding exactly two of the three tokens verbatim.
    int partial = 0;
    for (const auto& doc : corpus.docs) {
        std::size_t exact = 0;
        for (std::size_t t = 0; t < q.size(); ++t) {
            for (std::size_t j = 0; j < doc.size(); ++j) {
                if (dot(doc.vectors.row(j), q.vectors.row(t)) > 1.0 - 1e-12) {
                    ++exact;
                    break;
                }
            }
        }
        partial += exact == 2 ? 1 : 0;
    }
    CHECK(partial == 2);
}

TEST_CASE("background regions give each tile one direction", "[synthetic]") {
    auto spec = small_spec();
    spec.noise_sigma = 0.0;
    spec.background_regions = 6;
    spec.num_queries = 1;
    const auto corpus = generate_synthetic(spec);
    // Some document without a planted block: 30 patches in 6 tiles.
    const auto& judged = corpus.qrels.judgments("q000").begin()->first;
    const auto& doc = corpus.docs[judged == "d000" ? 1 : 0];
    std::vector<std::size_t> distinct;
    for (std::size_t j = 0; j < doc.size(); ++j) {
        bool seen = false;
        for (auto k : distinct) {
            seen = seen || dot(doc.vectors.row(j), doc.vectors.row(k)) > 1.0 - 1e-12;
        }
        if (!seen) {
            distinct.push_back(j);
        }
    }
    CHECK(distinct.size() == 6);
}

TEST_CASE("spec checks", "[synthetic]") {
    auto spec = small_spec();
    spec.dim = 10;
    CHECK_THROWS_AS(check_synthetic_spec(spec), Error);
    spec = small_spec();
    spec.signal_patches = 31;
    CHECK_THROWS_AS(check_synthetic_spec(spec), Error);
    spec = small_spec();
    spec.hard_negatives = 4;
    CHECK_THROWS_AS(check_synthetic_spec(spec), Error);
}

TEST_CASE("spec json round-trip and written corpus", "[synthetic]") {
    fixtures::TempDir dir("synthetic");
    auto spec = small_spec();
    spec.background_regions = 4;
    std::ofstream(dir.path() / "spec.json") << synthetic_spec_json(spec);
    const auto back = load_synthetic_spec(dir.path() / "spec.json");
    CHECK(synthetic_spec_json(back) == synthetic_spec_json(spec));

    const auto corpus = generate_synthetic(spec);
    const auto paths = write_synthetic(corpus, dir.path() / "out");
    CHECK(load_manifest(paths.manifest).entries.size() == 12);
    CHECK(load_queries(paths.queries).size() == 3);
    CHECK(Qrels::load(paths.qrels.string()).all() == corpus.qrels.all());
}
