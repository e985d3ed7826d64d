#pragma once

// JSON experiment configuration: loading, schema validation (unknown keys are
// rejected), range-checked field access and the canonical hash that ties a
// manifest to its inputs.

#include <json.hpp>

#include <string>
#include <vector>

#include "hypowalk/fourier.hpp"

namespace hypowalk::cfg {

using json = nlohmann::json;

// parses the file; wraps parse failures into std::invalid_argument so the
// caller can map them onto the usage exit code
json load_json(const std::string& path);

// throws listing every key of j not in `allowed`
void require_keys(const json& j, const std::vector<std::string>& allowed,
                  const std::string& where);

// required / defaulted range-checked accessors; violations throw
// std::invalid_argument naming the key
double get_num(const json& j, const std::string& key, double lo, double hi);
double get_num_or(const json& j, const std::string& key, double def, double lo,
                  double hi);
long long get_int(const json& j, const std::string& key, long long lo,
                  long long hi);
long long get_int_or(const json& j, const std::string& key, long long def,
                     long long lo, long long hi);
std::string get_str(const json& j, const std::string& key);
std::string get_str_or(const json& j, const std::string& key,
                       const std::string& def);
bool get_bool_or(const json& j, const std::string& key, bool def);

// array of numbers in [lo, hi], at least min_len entries
std::vector<double> get_num_list(const json& j, const std::string& key,
                                 std::size_t min_len, double lo, double hi);

// trig polynomial from [[m, n, c], ...]
TrigPoly parse_trig(const json& spec);

// point from [x, y]; falls back to def when the key is absent
std::array<double, 2> get_point_or(const json& j, const std::string& key,
                                   std::array<double, 2> def);

// coefficient vector c_{mn} = exp(-a (m^2 + n^2)) over all basis indices
Eigen::VectorXd gaussian_coeffs(double a, int M);

// deterministic serialization (object keys sorted) and its FNV-1a hash
std::string canonical_dump(const json& j);
std::string config_hash(const json& j);

}  // namespace hypowalk::cfg
