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

#include "colchunk/scorer.h"
#include "fixtures.h"
#include "oracles/oracles.h"

using namespace colchunk;
using Catch::Matchers::WithinAbs;

TEST_CASE("maxsim equals the naive double loop", "[scorer][oracle]") {
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint32_t dim = 4 * (1 + gen() % 8);
        const auto q = fixtures::random_query(gen, "q", 1 + gen() % 10, dim);
        const auto d = fixtures::random_compressed(gen, "d", 1 + gen() % 15, dim);
        CHECK_THAT(maxsim(q, d),
                   WithinAbs(oracle::maxsim(fixtures::to_rows(q.vectors), fixtures::to_rows(d.chunks)), 1e-12));
    }
}

TEST_CASE("query scale does not change the score", "[scorer]") {
    std::mt19937_64 gen(42);
    auto q = fixtures::random_query(gen, "q", 3, 8);
    const auto d = fixtures::random_compressed(gen, "d", 5, 8);
    const double before = maxsim(q, d);
    for (double& v : q.vectors.row(1)) {
        v *= 37.0;
    }
    CHECK_THAT(maxsim(q, d), WithinAbs(before, 1e-12));
}

TEST_CASE("maxsim rejects a dimension mismatch", "[scorer]") {
    std::mt19937_64 gen(43);
    const auto q = fixtures::random_query(gen, "q", 3, 8);
    const auto d = fixtures::random_compressed(gen, "d", 5, 12);
    CHECK_THROWS_AS(maxsim(q, d), Error);
}

TEST_CASE("retrieve ranks exhaustively and breaks ties by doc id", "[scorer]") {
    CorpusIndex index;
    index.dim = 2;
    auto make = [](std::string id, double x, double y) {
        CompressedDocument d{std::move(id), 2, Matrix(1, 2, {x, y}), {1}};
        return d;
    };
    index.docs = {make("c", 0, 1), make("b", 1, 0), make("a", 1, 0), make("z", 0.6, 0.8)};
    const QueryEmbeddingSet q{"q", 2, Matrix(1, 2, {1, 0})};
    const auto hits = retrieve(q, index, {3, 1});
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].doc_id == "a");
    CHECK(hits[1].doc_id == "b");
    CHECK(hits[2].doc_id == "z");
    CHECK(hits[2].rank == 3);
    CHECK_THAT(hits[2].score, WithinAbs(0.6, 1e-15));
}

TEST_CASE("retrieve is independent of the thread count", "[scorer]") {
    std::mt19937_64 gen(44);
    const auto index = fixtures::random_index(gen, 60, 16);
    const auto q = fixtures::random_query(gen, "q", 6, 16);
    const auto one = retrieve(q, index, {20, 1});
    const auto four = retrieve(q, index, {20, 4});
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].doc_id == four[i].doc_id);
        CHECK(one[i].score == four[i].score);
    }
}

TEST_CASE("retrieve names the offending document on dim mismatch", "[scorer]") {
    std::mt19937_64 gen(45);
    auto index = fixtures::random_index(gen, 3, 8);
    index.docs[1].dim = 4;
    index.docs[1].chunks = Matrix(1, 4, {1, 0, 0, 0});
    index.docs[1].chunk_sizes = {1};
    const auto q = fixtures::random_query(gen, "q", 2, 8);
    try {
        retrieve(q, index, {});
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kDimensionMismatch);
        CHECK(std::string(e.what()).find("doc-1") != std::string::npos);
    }
}
