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

#include "colchunk/kmeans.h"

#include <algorithm>
#include <limits>

#include "colchunk/rng.h"

namespace colchunk {

namespace {

Matrix
seed_plus_plus(const Matrix& points, std::uint32_t k, Rng& rng) {
    const std::size_t n = points.rows();
    Matrix centroids(k, points.cols());
    std::vector<char> chosen(n, 0);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t c, std::size_t idx) {
        chosen[idx] = 1;
        std::copy_n(points.row(idx).begin(), points.cols(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_l2(points.row(i), points.row(idx)));
        }
    };

    take(0, rng.below(n));
    for (std::uint32_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += d2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += d2[i];
                if (cumulative > target) {
                    pick = i;
                    break;
                }
            }
            // Rounding can leave cumulative <= target at the end.
            if (pick == n) {
                for (std::size_t i = n; i-- > 0;) {
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every point coincides with a chosen centroid.
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
        }
        take(c, pick);
    }
    return centroids;
}

}  // namespace

KMeansResult
run_kmeans(const Matrix& points, const KMeansOptions& options) {
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();
    const std::uint32_t k = options.k;
    if (k == 0) {
        throw Error(ErrorCode::kInvalidArgument, "k-means needs k >= 1");
    }
    if (k > n) {
        throw Error(ErrorCode::kInvalidArgument,
                    "k-means k=" + std::to_string(k) + " exceeds point count " + std::to_string(n));
    }
    if (options.max_iter == 0 || !(options.tol > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "k-means needs max_iter >= 1 and tol > 0");
    }

    Rng rng(options.seed);
    KMeansResult result;
    result.centroids = seed_plus_plus(points, k, rng);

    std::vector<std::uint32_t> labels(n, 0);
    std::vector<double> own_dist(n, 0.0);
    std::vector<std::uint32_t> counts(k, 0);
    Matrix next(k, dim);

    for (std::uint32_t iter = 1; iter <= options.max_iter; ++iter) {
        std::fill(counts.begin(), counts.end(), 0U);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t best = 0;
            double best_d = squared_l2(points.row(i), result.centroids.row(0));
            for (std::uint32_t c = 1; c < k; ++c) {
                const double d = squared_l2(points.row(i), result.centroids.row(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            labels[i] = best;
            own_dist[i] = best_d;
            ++counts[best];
        }

        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[labels[i]] > 1 && (far == n || own_dist[i] > own_dist[far])) {
                    far = i;
                }
            }
            --counts[labels[far]];
            labels[far] = c;
            own_dist[far] = 0.0;
            counts[c] = 1;
        }

        std::fill(next.data().begin(), next.data().end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto dst = next.row(labels[i]);
            const auto src = points.row(i);
            for (std::size_t d = 0; d < dim; ++d) {
                dst[d] += src[d];
            }
        }
        double movement = 0.0;
        for (std::uint32_t c = 0; c < k; ++c) {
            auto row = next.row(c);
            for (double& v : row) {
                v /= counts[c];
            }
            movement = std::max(movement, std::sqrt(squared_l2(row, result.centroids.row(c))));
        }
        std::swap(result.centroids, next);
        result.iterations = iter;
        if (movement < options.tol) {
            result.converged = true;
            break;
        }
    }

    result.assignment = make_assignment(labels);
    return result;
}

ChunkAssignment
cluster_kmeans(const FusedFeatureSet& features,
               std::uint32_t k,
               std::uint64_t seed,
               std::uint32_t max_iter,
               double tol) {
    return run_kmeans(features.vectors, {k, seed, max_iter, tol}).assignment;
}

}  // namespace colchunk
