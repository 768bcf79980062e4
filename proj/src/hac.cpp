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

#include "colchunk/hac.h"

#include <limits>
#include <numeric>

namespace colchunk {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Strict "should replace" relation for candidate merges (cost, i, j), i < j.
bool
better(double cost, std::uint32_t i, std::uint32_t j, double best, std::uint32_t bi, std::uint32_t bj) {
    if (cost < best - kMergeTieTolerance) {
        return true;
    }
    if (cost > best + kMergeTieTolerance) {
        return false;
    }
    return i < bi || (i == bi && j < bj);
}

// Upper-triangular condensed storage of pairwise merge costs.
class CondensedMatrix {
public:
    explicit CondensedMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2) {
    }

    double&
    at(std::size_t i, std::size_t j) noexcept {
        if (i > j) {
            std::swap(i, j);
        }
        return data_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

}  // namespace

HacResult
ward_agglomerate(const Matrix& points, std::uint32_t k) {
    if (k == 0) {
        throw Error(ErrorCode::kInvalidArgument, "target cluster count must be >= 1");
    }
    const auto n = static_cast<std::uint32_t>(points.rows());
    HacResult result;
    if (n <= k) {
        std::vector<std::uint32_t> labels(n);
        std::iota(labels.begin(), labels.end(), 0U);
        result.assignment = make_assignment(labels);
        return result;
    }

    // Costs are kept on the Ward "increase in SSE" scale: for singletons
    // that is ||x - y||^2 / 2, and the Lance-Williams update is linear so the
    // same recurrence applies.
    CondensedMatrix cost(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            cost.at(i, j) = 0.5 * squared_l2(points.row(i), points.row(j));
        }
    }

    std::vector<char> active(n, 1);
    std::vector<std::uint32_t> size(n, 1);
    std::vector<std::uint32_t> node_id(n);
    std::iota(node_id.begin(), node_id.end(), 0U);
    std::vector<std::uint32_t> merged_into(n, kNone);

    // Nearest neighbour of row i among active j > i.
    std::vector<std::uint32_t> nn(n, kNone);
    std::vector<double> nn_cost(n, kInf);
    auto rescan = [&](std::uint32_t i) {
        nn[i] = kNone;
        nn_cost[i] = kInf;
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (!active[j]) {
                continue;
            }
            const double c = cost.at(i, j);
            if (nn[i] == kNone || better(c, i, j, nn_cost[i], i, nn[i])) {
                nn[i] = j;
                nn_cost[i] = c;
            }
        }
    };
    for (std::uint32_t i = 0; i < n; ++i) {
        rescan(i);
    }

    result.merges.reserve(n - k);
    for (std::uint32_t clusters = n; clusters > k; --clusters) {
        std::uint32_t a = kNone;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!active[i] || nn[i] == kNone) {
                continue;
            }
            if (a == kNone || better(nn_cost[i], i, nn[i], nn_cost[a], a, nn[a])) {
                a = i;
            }
        }
        const std::uint32_t b = nn[a];
        const double merge_cost = std::max(nn_cost[a], 0.0);

        const double na = size[a];
        const double nb = size[b];
        for (std::uint32_t w = 0; w < n; ++w) {
            if (!active[w] || w == a || w == b) {
                continue;
            }
            const double nw = size[w];
            const double updated =
                ((na + nw) * cost.at(a, w) + (nb + nw) * cost.at(b, w) - nw * merge_cost) /
                (na + nb + nw);
            cost.at(a, w) = std::max(updated, 0.0);
        }

        result.merges.push_back({node_id[a],
                                 node_id[b],
                                 merge_cost,
                                 size[a] + size[b]});
        active[b] = 0;
        size[a] += size[b];
        node_id[a] = n + static_cast<std::uint32_t>(result.merges.size() - 1);
        merged_into[b] = a;

        for (std::uint32_t i = 0; i < a; ++i) {
            if (!active[i]) {
                continue;
            }
            if (nn[i] == a || nn[i] == b) {
                rescan(i);
            } else if (nn[i] == kNone || better(cost.at(i, a), i, a, nn_cost[i], i, nn[i])) {
                nn[i] = a;
                nn_cost[i] = cost.at(i, a);
            }
        }
        rescan(a);
        for (std::uint32_t i = a + 1; i < b; ++i) {
            if (active[i] && nn[i] == b) {
                rescan(i);
            }
        }
    }

    // merged_into always points at a smaller index, so one ascending pass
    // resolves every point to its surviving representative.
    std::vector<std::uint32_t> root(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        root[j] = merged_into[j] == kNone ? j : root[merged_into[j]];
    }
    result.assignment = make_assignment(root);
    return result;
}

HacResult
cluster_hac(const FusedFeatureSet& features, std::uint32_t k) {
    if (features.vectors.rows() > 0 && features.vectors.cols() != features.dim) {
        throw Error(ErrorCode::kDimensionMismatch, "fused feature rows do not match dim");
    }
    return ward_agglomerate(features.vectors, k);
}

}  // namespace colchunk
