#include "orbikit/report.hpp"

#include <cstdio>

namespace orbikit {

bool Report::overall() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

void Report::add(CheckRecord record) { checks.push_back(std::move(record)); }

Json Report::to_json() const {
  Json j;
  j["tool"] = tool;
  j["version"] = version;
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["seed"] = seed;
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json jc;
    jc["name"] = c.name;
    jc["tag"] = c.tag;
    jc["ok"] = c.ok;
    jc["residual"] = c.residual;
    jc["details"] = c.details;
    arr.push_back(std::move(jc));
  }
  j["checks"] = std::move(arr);
  j["overall"] = overall();
  return j;
}

std::string Report::to_text() const {
  std::string out;
  out += tool + " " + version + " : " + command + "\n";
  out += "input " + input_digest + "  seed " + std::to_string(seed) + "\n";
  for (const auto& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", c.residual);
    out += std::string(c.ok ? "[ OK ] " : "[FAIL] ") + c.name + " (" + c.tag +
           ") residual=" + buf + "\n";
    if (!c.details.empty()) out += "       " + c.details.dump() + "\n";
  }
  out += overall() ? "OVERALL: PASS\n" : "OVERALL: FAIL\n";
  return out;
}

std::string fnv1a_digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace orbikit
