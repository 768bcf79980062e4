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

// Reference implementations used only by tests. They favour the most literal
// formulation over speed and share no code with the library beyond plain
// data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

struct Merge {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double cost = 0.0;
    std::uint32_t size = 0;
};

struct WardResult {
    std::vector<std::uint32_t> labels;
    std::vector<Merge> merges;
};

inline std::vector<double>
centroid(const Rows& x, const std::vector<std::uint32_t>& members) {
    std::vector<double> c(x.front().size(), 0.0);
    for (auto m : members) {
        for (std::size_t d = 0; d < c.size(); ++d) {
            c[d] += x[m][d];
        }
    }
    for (double& v : c) {
        v /= static_cast<double>(members.size());
    }
    return c;
}

inline double
sse(const Rows& x, const std::vector<std::uint32_t>& members) {
    const auto c = centroid(x, members);
    double s = 0.0;
    for (auto m : members) {
        for (std::size_t d = 0; d < c.size(); ++d) {
            s += (x[m][d] - c[d]) * (x[m][d] - c[d]);
        }
    }
    return s;
}

// Cubic Ward agglomeration. Every step recomputes all centroids from the
// member lists and the SSE increase of every pair of live clusters:
//   n_a n_b / (n_a + n_b) * ||c_a - c_b||^2.
// Costs within `tie` of the best are resolved by the pair of smallest member
// indices, compared lexicographically.
inline WardResult
ward(const Rows& x, std::uint32_t k, double tie = 1e-12) {
    const auto n = static_cast<std::uint32_t>(x.size());
    std::vector<std::vector<std::uint32_t>> clusters(n);
    std::vector<std::uint32_t> ids(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        clusters[i] = {i};
        ids[i] = i;
    }
    WardResult out;
    while (clusters.size() > k) {
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        double best = 0.0;
        bool have = false;
        std::vector<std::vector<double>> c(clusters.size());
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            c[a] = centroid(x, clusters[a]);
        }
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double d2 = 0.0;
                for (std::size_t d = 0; d < c[a].size(); ++d) {
                    d2 += (c[a][d] - c[b][d]) * (c[a][d] - c[b][d]);
                }
                const double na = static_cast<double>(clusters[a].size());
                const double nb = static_cast<double>(clusters[b].size());
                const double cost = na * nb / (na + nb) * d2;
                const auto key = [&](std::size_t p, std::size_t q) {
                    const auto lo = std::min(clusters[p].front(), clusters[q].front());
                    const auto hi = std::max(clusters[p].front(), clusters[q].front());
                    return std::pair{lo, hi};
                };
                bool take = !have || cost < best - tie;
                if (have && !take && cost <= best + tie) {
                    take = key(a, b) < key(best_a, best_b);
                }
                if (take) {
                    best = cost;
                    best_a = a;
                    best_b = b;
                    have = true;
                }
            }
        }
        auto& A = clusters[best_a];
        auto& B = clusters[best_b];
        const bool a_first = A.front() < B.front();
        Merge m;
        m.left = a_first ? ids[best_a] : ids[best_b];
        m.right = a_first ? ids[best_b] : ids[best_a];
        m.cost = best;
        m.size = static_cast<std::uint32_t>(A.size() + B.size());
        out.merges.push_back(m);
        A.insert(A.end(), B.begin(), B.end());
        std::sort(A.begin(), A.end());
        ids[best_a] = n + static_cast<std::uint32_t>(out.merges.size() - 1);
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& p, const auto& q) { return p.front() < q.front(); });
    out.labels.assign(n, 0);
    for (std::uint32_t c = 0; c < clusters.size(); ++c) {
        for (auto m : clusters[c]) {
            out.labels[m] = c;
        }
    }
    return out;
}

// Late-interaction score written exactly as the definition reads: for each
// query token, the largest cosine similarity against any document vector,
// summed over tokens.
inline double
maxsim(const Rows& query, const Rows& doc) {
    double total = 0.0;
    for (const auto& q : query) {
        double best = -INFINITY;
        for (const auto& d : doc) {
            double qd = 0.0;
            double qq = 0.0;
            double dd = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                qd += q[i] * d[i];
                qq += q[i] * q[i];
                dd += d[i] * d[i];
            }
            best = std::max(best, qd / (std::sqrt(qq) * std::sqrt(dd)));
        }
        total += best;
    }
    return total;
}

// nDCG@k: DCG = sum_{r=1..k} grade(r) / log2(r + 1), divided by the DCG of the
// judged grades sorted descending.
inline double
ndcg(const std::vector<std::string>& ranking, const std::map<std::string, std::uint32_t>& grades, std::uint32_t k) {
    double dcg = 0.0;
    for (std::size_t r = 1; r <= std::min<std::size_t>(k, ranking.size()); ++r) {
        const auto it = grades.find(ranking[r - 1]);
        const double g = it == grades.end() ? 0.0 : it->second;
        dcg += g / std::log2(static_cast<double>(r) + 1.0);
    }
    std::vector<std::uint32_t> ideal;
    for (const auto& [doc, g] : grades) {
        ideal.push_back(g);
    }
    std::sort(ideal.rbegin(), ideal.rend());
    double idcg = 0.0;
    for (std::size_t r = 1; r <= std::min<std::size_t>(k, ideal.size()); ++r) {
        idcg += ideal[r - 1] / std::log2(static_cast<double>(r) + 1.0);
    }
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

}  // namespace oracle
