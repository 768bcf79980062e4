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

#include "colchunk/hac.h"
#include "fixtures.h"
#include "oracles/oracles.h"

using namespace colchunk;

namespace {

bool
close_rel(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-12;
}

}  // namespace

TEST_CASE("ward merges the obvious pairs first", "[hac]") {
    const Matrix pts(5, 1, {0.0, 0.1, 5.0, 5.2, 20.0});
    const auto r = ward_agglomerate(pts, 1);
    REQUIRE(r.merges.size() == 4);
    CHECK(r.merges[0].left == 0);
    CHECK(r.merges[0].right == 1);
    CHECK_THAT(r.merges[0].distance, Catch::Matchers::WithinRel(0.005, 1e-12));
    CHECK(r.merges[1].left == 2);
    CHECK(r.merges[1].right == 3);
    CHECK(r.merges[2].left == 5);
    CHECK(r.merges[2].right == 6);
    CHECK(r.merges[3].new_size == 5);
    CHECK(r.assignment.k == 1);
}

TEST_CASE("cutting at k gives the expected partition", "[hac]") {
    const Matrix pts(5, 1, {0.0, 0.1, 5.0, 5.2, 20.0});
    const auto r = ward_agglomerate(pts, 3);
    CHECK(r.assignment.labels == std::vector<std::uint32_t>{0, 0, 1, 1, 2});
    CHECK(r.assignment.sizes == std::vector<std::uint32_t>{2, 2, 1});
}

TEST_CASE("exact ties go to the lowest index pair", "[hac]") {
    // Four corners of a unit square: all four edges cost the same.
    const Matrix pts(4, 2, {0, 0, 1, 0, 0, 1, 1, 1});
    const auto r = ward_agglomerate(pts, 2);
    CHECK(r.merges[0].left == 0);
    CHECK(r.merges[0].right == 1);
    CHECK(r.assignment.labels == std::vector<std::uint32_t>{0, 0, 1, 1});
}

TEST_CASE("duplicate points are handled", "[hac]") {
    const Matrix pts(4, 2, {1, 1, 1, 1, 1, 1, 1, 1});
    const auto r = ward_agglomerate(pts, 2);
    CHECK(r.assignment.sizes == std::vector<std::uint32_t>{3, 1});
    for (const auto& m : r.merges) {
        CHECK(m.distance == 0.0);
    }
}

TEST_CASE("k at least n is a pass-through", "[hac]") {
    const Matrix pts(3, 2, {0, 0, 1, 0, 2, 0});
    const auto r = ward_agglomerate(pts, 5);
    CHECK(r.merges.empty());
    CHECK(r.assignment.labels == std::vector<std::uint32_t>{0, 1, 2});
    CHECK_THROWS_AS(ward_agglomerate(pts, 0), Error);
}

TEST_CASE("ward agrees with the brute-force agglomerator", "[hac][oracle]") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + gen() % 30;
        const std::size_t dim = 1 + gen() % 6;
        const auto k = static_cast<std::uint32_t>(1 + gen() % n);
        const auto rows = fixtures::random_rows(gen, n, dim);
        const auto got = ward_agglomerate(fixtures::to_matrix(rows), k);
        const auto want = oracle::ward(rows, k);
        REQUIRE(got.assignment.labels == want.labels);
        REQUIRE(got.merges.size() == want.merges.size());
        for (std::size_t s = 0; s < want.merges.size(); ++s) {
            CHECK(got.merges[s].left == want.merges[s].left);
            CHECK(got.merges[s].right == want.merges[s].right);
            CHECK(got.merges[s].new_size == want.merges[s].size);
            CHECK(close_rel(got.merges[s].distance, want.merges[s].cost));
        }
    }
}

TEST_CASE("each merge cost equals the SSE increase", "[hac][oracle]") {
    std::mt19937_64 gen(12);
    const auto rows = fixtures::random_rows(gen, 12, 3);
    const auto r = ward_agglomerate(fixtures::to_matrix(rows), 1);
    double total = 0.0;
    for (const auto& m : r.merges) {
        total += m.distance;
    }
    std::vector<std::uint32_t> all(12);
    std::iota(all.begin(), all.end(), 0U);
    CHECK(close_rel(total, oracle::sse(rows, all)));
}

TEST_CASE("cluster_hac checks feature width", "[hac]") {
    FusedFeatureSet f{3, 0.2, Matrix(4, 2)};
    CHECK_THROWS_AS(cluster_hac(f, 2), Error);
}
