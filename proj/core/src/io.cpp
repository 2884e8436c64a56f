// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include "elc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "elc/errors.hpp"

namespace elc {

std::uint64_t fnv1a64(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for checksumming");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, format_g17(value)); }
void Manifest::set(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

void Manifest::add_file(const std::string& dir, const std::string& name) {
    const std::string path = dir + "/" + name;
    const auto bytes = std::filesystem::file_size(path);
    files_.push_back({name, static_cast<std::uint64_t>(bytes), fnv1a64_file(path)});
}

void Manifest::write_atomic(const std::string& dir, const std::string& name) const {
    const std::string tmp = dir + "/" + name + ".tmp";
    const std::string final_path = dir + "/" + name;
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << "# elcflow manifest\n";
        for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
        char buf[64];
        for (const auto& f : files_) {
            std::snprintf(buf, sizeof buf, "%016llx",
                          static_cast<unsigned long long>(f.checksum));
            out << "file " << f.name << " " << f.bytes << " " << buf << "\n";
        }
        if (!out) throw IoError("manifest write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) throw IoError("manifest rename failed: " + ec.message());
}

Manifest Manifest::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("file ", 0) == 0) {
            std::istringstream row(line.substr(5));
            FileRecord rec;
            std::string hex;
            row >> rec.name >> rec.bytes >> hex;
            rec.checksum = std::stoull(hex, nullptr, 16);
            m.files_.push_back(rec);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto strip = [](std::string s) {
            while (!s.empty() && s.back() == ' ') s.pop_back();
            std::size_t b = 0;
            while (b < s.size() && s[b] == ' ') ++b;
            return s.substr(b);
        };
        m.entries_.emplace_back(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return m;
}

std::vector<std::string> Manifest::verify_files(const std::string& dir) const {
    std::vector<std::string> bad;
    for (const auto& f : files_) {
        const std::string path = dir + "/" + f.name;
        std::error_code ec;
        const auto bytes = std::filesystem::file_size(path, ec);
        if (ec || bytes != f.bytes || fnv1a64_file(path) != f.checksum) bad.push_back(f.name);
    }
    return bad;
}

void append_bootstrap(Manifest& manifest, const BootstrapReport& report) {
    manifest.set("bootstrap.e_d", report.e_d);
    manifest.set("bootstrap.e_rho1", report.e_rho1);
    manifest.set("bootstrap.e_rho2", report.e_rho2);
    manifest.set("bootstrap.e_rho3", report.e_rho3);
    manifest.set("bootstrap.e_u1", report.e_u1);
    manifest.set("bootstrap.e_u2", report.e_u2);
    manifest.set("bootstrap.n3", report.n3);
    manifest.set("bootstrap.ticks", static_cast<std::uint64_t>(report.ticks));
}

namespace {
constexpr const char* kHeader =
    "t,total_energy,mass,grad_d_l2,grad_d_l3,grad2_d_l2,rho_dev_linf,grad_rho_l2,"
    "grad_rho_lq,grad_u_l2,grad_u_linf,sqrt_rho_ut_l2,flux_residual,unit_defect,dt,"
    "flag_nonfinite,flag_density_band,flag_gradu,flag_dt_underflow";
}

RunRecordWriter::RunRecordWriter(std::ostream& out) : out_(out) { out_ << kHeader << "\n"; }

const char* RunRecordWriter::header() { return kHeader; }

void RunRecordWriter::write(const RunRecord& r) {
    out_ << format_g17(r.t) << ',' << format_g17(r.total_energy) << ',' << format_g17(r.mass)
         << ',' << format_g17(r.grad_d_l2) << ',' << format_g17(r.grad_d_l3) << ','
         << format_g17(r.grad2_d_l2) << ',' << format_g17(r.rho_dev_linf) << ','
         << format_g17(r.grad_rho_l2) << ',' << format_g17(r.grad_rho_lq) << ','
         << format_g17(r.grad_u_l2) << ',' << format_g17(r.grad_u_linf) << ','
         << format_g17(r.sqrt_rho_ut_l2) << ',' << format_g17(r.flux_residual) << ','
         << format_g17(r.unit_defect) << ',' << format_g17(r.dt) << ','
         << (r.flag_nonfinite ? 1 : 0) << ',' << (r.flag_density_band ? 1 : 0) << ','
         << (r.flag_gradu ? 1 : 0) << ',' << (r.flag_dt_underflow ? 1 : 0) << "\n";
}

std::vector<RunRecord> read_run_records(std::istream& in) {
    std::vector<RunRecord> out;
    std::string line;
    if (!std::getline(in, line)) return out;
    if (line != kHeader) throw IoError("run-record csv: unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 19) throw IoError("run-record csv: malformed row");
        RunRecord r;
        r.t = vals[0];
        r.total_energy = vals[1];
        r.mass = vals[2];
        r.grad_d_l2 = vals[3];
        r.grad_d_l3 = vals[4];
        r.grad2_d_l2 = vals[5];
        r.rho_dev_linf = vals[6];
        r.grad_rho_l2 = vals[7];
        r.grad_rho_lq = vals[8];
        r.grad_u_l2 = vals[9];
        r.grad_u_linf = vals[10];
        r.sqrt_rho_ut_l2 = vals[11];
        r.flux_residual = vals[12];
        r.unit_defect = vals[13];
        r.dt = vals[14];
        r.flag_nonfinite = vals[15] != 0.0;
        r.flag_density_band = vals[16] != 0.0;
        r.flag_gradu = vals[17] != 0.0;
        r.flag_dt_underflow = vals[18] != 0.0;
        out.push_back(r);
    }
    return out;
}

std::vector<RunRecord> read_run_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return read_run_records(in);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace elc
