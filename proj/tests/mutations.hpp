#pragma once

// Single-point mutations of certificate JSON, and the detection rule used by
// the fuzz tests: a mutation is semantics-changing when the mutated document
// no longer parses to a certificate that serializes to the original bytes.

#include <random>
#include <string>
#include <vector>

#include "cantor/certificate.hpp"
#include "cantor/errors.hpp"
#include "cantor/verify.hpp"

namespace mutation {

using cantor::Json;

inline void collect(const Json& j, const Json::json_pointer& at, std::vector<Json::json_pointer>& out) {
  out.push_back(at);
  if (j.is_object())
    for (const auto& [k, v] : j.items()) collect(v, at / k, out);
  else if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) collect(j[i], at / i, out);
}

inline bool is_word(const std::string& s) {
  if (s == "∅") return true;
  if (s.empty()) return false;
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return true;
}

inline std::string mutate_word(std::string s, std::mt19937_64& rng) {
  if (s == "∅") return rng() % 2 ? "0" : "1";
  switch (rng() % 3) {
    case 0: {
      const std::size_t i = rng() % s.size();
      s[i] = s[i] == '0' ? '1' : '0';
      return s;
    }
    case 1: return s + (rng() % 2 ? '1' : '0');
    default: return s.size() == 1 ? std::string("∅") : s.substr(0, s.size() - 1);
  }
}

inline std::string mutate_text(std::string s, std::mt19937_64& rng) {
  if (s.empty()) return "x";
  std::vector<std::size_t> digits;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] >= '0' && s[i] <= '9') digits.push_back(i);
  if (!digits.empty() && rng() % 4 != 0) {
    const std::size_t i = digits[rng() % digits.size()];
    s[i] = static_cast<char>('0' + (s[i] - '0' + 1 + rng() % 9) % 10);
    return s;
  }
  const std::size_t i = rng() % s.size();
  s[i] = s[i] == 'a' ? 'b' : 'a';
  return s;
}

/// Applies one random mutation and returns a short label for it.
inline std::string mutate(Json& doc, std::mt19937_64& rng) {
  std::vector<Json::json_pointer> nodes;
  collect(doc, Json::json_pointer(), nodes);
  const auto at = nodes[1 + rng() % (nodes.size() - 1)];
  Json& node = doc[at];
  const std::string where = at.to_string();
  if (node.is_string()) {
    const std::string s = node.get<std::string>();
    node = is_word(s) ? mutate_word(s, rng) : mutate_text(s, rng);
    return "string " + where;
  }
  if (node.is_number_unsigned() || node.is_number_integer()) {
    const auto v = node.get<std::int64_t>();
    node = (v > 0 && rng() % 2) ? v - 1 : v + 1;
    return "number " + where;
  }
  if (node.is_boolean()) {
    node = !node.get<bool>();
    return "bool " + where;
  }
  if (node.is_array() && !node.empty()) {
    const std::size_t i = rng() % node.size();
    if (rng() % 2) node.erase(i);
    else node.push_back(node[i]);
    return "array " + where;
  }
  if (node.is_object() && !node.empty()) {
    auto it = node.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng() % node.size()));
    node.erase(it.key());
    return "drop-key " + where;
  }
  node = 7;
  return "retype " + where;
}

enum class Outcome { Unchanged, Detected, Missed };

/// Parses the mutated document and verifies it against `instance`.
template <class Instance>
Outcome classify(const Json& mutated, const std::string& original_bytes, const Instance& instance) {
  cantor::Certificate cert;
  try {
    cert = cantor::certificate_from_json(mutated);
  } catch (const cantor::Error&) {
    return Outcome::Detected;
  }
  if (cantor::serialize(cert) == original_bytes) return Outcome::Unchanged;
  try {
    return cantor::verify_certificate(cert, instance).pass ? Outcome::Missed : Outcome::Detected;
  } catch (const cantor::Error&) {
    return Outcome::Detected;
  }
}

}  // namespace mutation
