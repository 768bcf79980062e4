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

#include "colchunk/raw_io.h"

#include <bit>
#include <fstream>

#include "colchunk/error.h"

namespace colchunk::io {

namespace {

template <typename T>
void
put_le(std::ostream& out, T v) {
    char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(bytes, sizeof(T));
}

template <typename T>
T
get_le(const std::uint8_t* p) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<T>(p[i]) << (8 * i);
    }
    return v;
}

}  // namespace

void
put_u16(std::ostream& out, std::uint16_t v) {
    put_le(out, v);
}

void
put_u32(std::ostream& out, std::uint32_t v) {
    put_le(out, v);
}

void
put_u64(std::ostream& out, std::uint64_t v) {
    put_le(out, v);
}

void
put_f32(std::ostream& out, float v) {
    put_le(out, std::bit_cast<std::uint32_t>(v));
}

void
put_f32_values(std::ostream& out, std::span<const double> values) {
    std::vector<char> buffer(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
        for (std::size_t b = 0; b < 4; ++b) {
            buffer[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
        }
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void
ByteReader::need(std::size_t n, std::string_view what) const {
    if (remaining() < n) {
        throw Error(ErrorCode::kTruncated,
                    "unexpected end of data reading " + std::string(what) + " at offset " +
                        std::to_string(pos_));
    }
}

std::uint16_t
ByteReader::u16() {
    need(2, "u16");
    const auto v = get_le<std::uint16_t>(bytes_.data() + pos_);
    pos_ += 2;
    return v;
}

std::uint32_t
ByteReader::u32() {
    need(4, "u32");
    const auto v = get_le<std::uint32_t>(bytes_.data() + pos_);
    pos_ += 4;
    return v;
}

std::uint64_t
ByteReader::u64() {
    need(8, "u64");
    const auto v = get_le<std::uint64_t>(bytes_.data() + pos_);
    pos_ += 8;
    return v;
}

float
ByteReader::f32() {
    return std::bit_cast<float>(u32());
}

std::string
ByteReader::string(std::size_t length) {
    need(length, "string");
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), length);
    pos_ += length;
    return s;
}

void
ByteReader::f32_values(std::span<double> out) {
    if (out.size() > remaining() / 4) {
        need(out.size() * 4, "f32 block");
    }
    const std::uint8_t* p = bytes_.data() + pos_;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(p + 4 * i)));
    }
    pos_ += out.size() * 4;
}

std::vector<std::uint8_t>
read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open " + path.string());
    }
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    if (size < 0) {
        throw Error(ErrorCode::kIo, "cannot determine size of " + path.string());
    }
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    if (!bytes.empty() && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
        throw Error(ErrorCode::kIo, "failed reading " + path.string());
    }
    return bytes;
}

Matrix
read_f32_matrix(const std::filesystem::path& path, std::size_t rows, std::size_t cols) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) {
        throw Error(ErrorCode::kIo, "cannot stat " + path.string() + ": " + ec.message());
    }
    const std::uint64_t expected = static_cast<std::uint64_t>(rows) * cols * 4;
    if (size != expected) {
        throw Error(ErrorCode::kValidation,
                    "size mismatch: " + path.string() + " has " + std::to_string(size) +
                        " bytes, expected " + std::to_string(expected));
    }
    const auto bytes = read_file(path);
    Matrix m(rows, cols);
    ByteReader reader(bytes);
    reader.f32_values(m.data());
    return m;
}

void
write_f32_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot create " + path.string());
    }
    put_f32_values(out, m.data());
    if (!out) {
        throw Error(ErrorCode::kIo, "failed writing " + path.string());
    }
}

}  // namespace colchunk::io
