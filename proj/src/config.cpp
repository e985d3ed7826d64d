#include "hypowalk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hypowalk/io.hpp"

namespace hypowalk::cfg {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
}

void require_keys(const json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument("config: " + where + " must be a JSON object");
  std::string unknown;
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      unknown += (unknown.empty() ? "" : ", ") + item.key();
  }
  if (!unknown.empty())
    throw std::invalid_argument("config: unknown key(s) in " + where + ": " +
                                unknown);
}

namespace {

const json& fetch(const json& j, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument("config: missing required key '" + key + "'");
  return *it;
}

double as_num(const json& v, const std::string& key, double lo, double hi) {
  if (!v.is_number())
    throw std::invalid_argument("config: '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x >= lo) || !(x <= hi))
    throw std::invalid_argument("config: '" + key + "' = " + io::fmt_float(x) +
                                " outside [" + io::fmt_float(lo) + ", " +
                                io::fmt_float(hi) + "]");
  return x;
}

long long as_int(const json& v, const std::string& key, long long lo,
                 long long hi) {
  if (!v.is_number_integer())
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    throw std::invalid_argument("config: '" + key + "' = " + io::fmt_int(x) +
                                " outside [" + io::fmt_int(lo) + ", " +
                                io::fmt_int(hi) + "]");
  return x;
}

}  // namespace

double get_num(const json& j, const std::string& key, double lo, double hi) {
  return as_num(fetch(j, key), key, lo, hi);
}

double get_num_or(const json& j, const std::string& key, double def, double lo,
                  double hi) {
  const auto it = j.find(key);
  return it == j.end() ? def : as_num(*it, key, lo, hi);
}

long long get_int(const json& j, const std::string& key, long long lo,
                  long long hi) {
  return as_int(fetch(j, key), key, lo, hi);
}

long long get_int_or(const json& j, const std::string& key, long long def,
                     long long lo, long long hi) {
  const auto it = j.find(key);
  return it == j.end() ? def : as_int(*it, key, lo, hi);
}

std::string get_str(const json& j, const std::string& key) {
  const json& v = fetch(j, key);
  if (!v.is_string())
    throw std::invalid_argument("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string get_str_or(const json& j, const std::string& key,
                       const std::string& def) {
  const auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_string())
    throw std::invalid_argument("config: '" + key + "' must be a string");
  return it->get<std::string>();
}

bool get_bool_or(const json& j, const std::string& key, bool def) {
  const auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_boolean())
    throw std::invalid_argument("config: '" + key + "' must be a boolean");
  return it->get<bool>();
}

std::vector<double> get_num_list(const json& j, const std::string& key,
                                 std::size_t min_len, double lo, double hi) {
  const json& v = fetch(j, key);
  if (!v.is_array() || v.size() < min_len)
    throw std::invalid_argument("config: '" + key + "' must be an array of at least " +
                                io::fmt_int(static_cast<long long>(min_len)) +
                                " numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) out.push_back(as_num(e, key, lo, hi));
  return out;
}

TrigPoly parse_trig(const json& spec) {
  if (!spec.is_array() || spec.empty())
    throw std::invalid_argument("config: trig polynomial must be a nonempty "
                                "array of [m, n, c] triples");
  TrigPoly f;
  for (const json& term : spec) {
    if (!term.is_array() || term.size() != 3)
      throw std::invalid_argument("config: trig term must be [m, n, c]");
    f.push_back({static_cast<int>(as_int(term[0], "f.m", -1000, 1000)),
                 static_cast<int>(as_int(term[1], "f.n", -1000, 1000)),
                 as_num(term[2], "f.c", -1e6, 1e6)});
  }
  return f;
}

std::array<double, 2> get_point_or(const json& j, const std::string& key,
                                   std::array<double, 2> def) {
  const auto it = j.find(key);
  if (it == j.end()) return def;
  if (!it->is_array() || it->size() != 2)
    throw std::invalid_argument("config: '" + key + "' must be [x, y]");
  return {as_num((*it)[0], key, -1e6, 1e6), as_num((*it)[1], key, -1e6, 1e6)};
}

Eigen::VectorXd gaussian_coeffs(double a, int M) {
  if (!(a > 0.0))
    throw std::invalid_argument("config: gaussian decay must be positive");
  const FourierBasis b(M);
  Eigen::VectorXd c(b.dim());
  for (int n = -M; n <= M; ++n)
    for (int m = -M; m <= M; ++m)
      c[b.idx(m, n)] = std::exp(-a * static_cast<double>(m * m + n * n));
  return c;
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string config_hash(const json& j) {
  return io::hash_hex(io::fnv1a(canonical_dump(j)));
}

}  // namespace hypowalk::cfg
