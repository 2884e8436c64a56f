// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "elc/diagnostics.hpp"

namespace elc {

std::uint64_t fnv1a64(const void* data, std::size_t bytes);
std::uint64_t fnv1a64_file(const std::string& path);

/// %.17g rendering shared by every CSV writer so artifacts are
/// byte-reproducible.
std::string format_g17(double v);

/// Run manifest: ordered key-value entries plus a checksummed file
/// inventory. Written atomically (tmp file + rename).
class Manifest {
  public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::uint64_t value);

    /// Record `name` (relative to dir) with its checksum.
    void add_file(const std::string& dir, const std::string& name);

    void write_atomic(const std::string& dir, const std::string& name = "manifest.txt") const;

    static Manifest read(const std::string& path);

    /// Names of inventory files whose checksum no longer matches.
    std::vector<std::string> verify_files(const std::string& dir) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }
    struct FileRecord {
        std::string name;
        std::uint64_t bytes;
        std::uint64_t checksum;
    };
    const std::vector<FileRecord>& files() const { return files_; }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<FileRecord> files_;
};

/// Append the bootstrap functionals to a manifest as a key-value block.
void append_bootstrap(Manifest& manifest, const BootstrapReport& report);

/// RunRecord CSV stream: frozen column order, header row, %.17g floats.
class RunRecordWriter {
  public:
    explicit RunRecordWriter(std::ostream& out);
    void write(const RunRecord& record);

    static const char* header();

  private:
    std::ostream& out_;
};

std::vector<RunRecord> read_run_records(std::istream& in);
std::vector<RunRecord> read_run_records_file(const std::string& path);

void ensure_directory(const std::string& path);

}  // namespace elc
