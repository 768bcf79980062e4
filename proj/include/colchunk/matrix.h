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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace colchunk {

/// Dense row-major matrix of doubles. One row per vector.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    }

    /// Takes ownership of `data`; its size must be rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t
    rows() const noexcept {
        return rows_;
    }

    std::size_t
    cols() const noexcept {
        return cols_;
    }

    bool
    empty() const noexcept {
        return rows_ == 0;
    }

    std::span<const double>
    row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    std::span<double>
    row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    std::span<const double>
    data() const noexcept {
        return data_;
    }

    std::span<double>
    data() noexcept {
        return data_;
    }

    bool
    operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double
dot(std::span<const double> a, std::span<const double> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

inline double
squared_l2(std::span<const double> a, std::span<const double> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

inline double
l2_norm(std::span<const double> a) noexcept {
    return std::sqrt(dot(a, a));
}

}  // namespace colchunk
