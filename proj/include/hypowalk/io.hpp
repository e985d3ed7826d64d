#pragma once

// Artifact plumbing: fixed-format CSV emission, file helpers and the config
// hash.  All floats are printed with 17 significant digits so that re-runs of
// identical configurations produce byte-identical bodies.

#include <cstdint>
#include <string>
#include <vector>

namespace hypowalk::io {

std::string fmt_float(double v);
std::string fmt_int(long long v);

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each row matches the header
};

std::string csv_to_string(const Csv& csv);

void ensure_dir(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// 64-bit FNV-1a over the bytes of s
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t v);

}  // namespace hypowalk::io
