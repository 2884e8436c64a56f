// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "elc/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot serialization assumes a little-endian host");

namespace elc {

namespace {

constexpr char kMagic[4] = {'E', 'L', 'F', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
double get_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

template <std::size_t NC>
void write_impl(std::ostream& out, const BasicField<NC>& f, FieldKind kind) {
    out.write(kMagic, 4);
    put_u32(out, snapshot_format_version);
    put_u32(out, static_cast<std::uint32_t>(kind));
    for (int a = 0; a < 3; ++a) put_u64(out, f.grid().dims[a]);
    for (int a = 0; a < 3; ++a) put_f64(out, f.grid().box[a]);
    const auto raw = f.raw();
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!out) throw IoError("snapshot write failed");
}

template <typename FieldT>
FieldT read_payload(std::istream& in, const Grid& grid) {
    FieldT f(grid);
    auto raw = f.raw();
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!in) throw IoError("snapshot read failed: truncated data");
    return f;
}

}  // namespace

void write_snapshot(std::ostream& out, const ScalarField& f) {
    write_impl(out, f, FieldKind::scalar);
}
void write_snapshot(std::ostream& out, const VectorField& f) {
    write_impl(out, f, FieldKind::vector);
}
void write_snapshot(std::ostream& out, const TensorField& f) {
    write_impl(out, f, FieldKind::tensor);
}
void write_snapshot(std::ostream& out, const DirectorField& f) {
    write_impl(out, f, FieldKind::director);
}

void write_snapshot(const std::string& path, const AnyField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    std::visit([&](const auto& field) { write_snapshot(out, field); }, f);
}

AnyField read_snapshot(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("snapshot read failed: bad magic");
    const std::uint32_t version = get_u32(in);
    if (version != snapshot_format_version)
        throw IoError("snapshot read failed: unsupported version " + std::to_string(version));
    const std::uint32_t kind = get_u32(in);
    std::array<std::size_t, 3> dims{};
    for (int a = 0; a < 3; ++a) dims[a] = get_u64(in);
    std::array<double, 3> box{};
    for (int a = 0; a < 3; ++a) box[a] = get_f64(in);
    if (!in) throw IoError("snapshot read failed: truncated header");
    Grid grid(dims, box);
    switch (static_cast<FieldKind>(kind)) {
        case FieldKind::scalar:
            return read_payload<ScalarField>(in, grid);
        case FieldKind::vector:
            return read_payload<VectorField>(in, grid);
        case FieldKind::tensor:
            return read_payload<TensorField>(in, grid);
        case FieldKind::director:
            return read_payload<DirectorField>(in, grid);
    }
    throw IoError("snapshot read failed: unknown kind tag " + std::to_string(kind));
}

AnyField read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return read_snapshot(in);
}

FieldKind snapshot_kind(const AnyField& f) {
    return static_cast<FieldKind>(f.index());
}

}  // namespace elc
