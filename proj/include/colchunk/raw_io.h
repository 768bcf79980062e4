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

// Little-endian primitives shared by the index format and the raw embedding
// dumps. Byte order is fixed regardless of the host.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colchunk/matrix.h"

namespace colchunk::io {

void
put_u16(std::ostream& out, std::uint16_t v);
void
put_u32(std::ostream& out, std::uint32_t v);
void
put_u64(std::ostream& out, std::uint64_t v);
void
put_f32(std::ostream& out, float v);

/// Every value is narrowed to IEEE-754 binary32.
void
put_f32_values(std::ostream& out, std::span<const double> values);

/// Cursor over an in-memory buffer. Reading past the end throws
/// Error(kTruncated).
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
    }

    std::uint16_t
    u16();
    std::uint32_t
    u32();
    std::uint64_t
    u64();
    float
    f32();
    std::string
    string(std::size_t length);
    void
    f32_values(std::span<double> out);

    std::size_t
    position() const noexcept {
        return pos_;
    }

    std::size_t
    remaining() const noexcept {
        return bytes_.size() - pos_;
    }

private:
    void
    need(std::size_t n, std::string_view what) const;

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t>
read_file(const std::filesystem::path& path);

/// Reads a flat [rows x cols] float32 LE file. The file length must be
/// exactly rows * cols * 4 bytes.
Matrix
read_f32_matrix(const std::filesystem::path& path, std::size_t rows, std::size_t cols);

void
write_f32_matrix(const std::filesystem::path& path, const Matrix& m);

}  // namespace colchunk::io
