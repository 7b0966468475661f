#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace orbikit {

using Json = nlohmann::ordered_json;

struct CheckRecord {
  std::string name;
  std::string tag;  // stable certificate tag, e.g. "orbit-blocks-annihilate"
  bool ok = false;
  double residual = 0.0;
  Json details = Json::object();
};

/// Deterministic run record: serialization is byte-identical for identical
/// inputs, flags and seed (no timestamps, no addresses).
struct Report {
  std::string tool = "orbikit";
  std::string version = "0.1.0";
  std::string command;
  std::string input_digest;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;

  bool overall() const;
  void add(CheckRecord record);
  Json to_json() const;
  std::string to_text() const;
};

/// FNV-1a 64-bit digest, hex encoded.
std::string fnv1a_digest(std::string_view data);

}  // namespace orbikit
