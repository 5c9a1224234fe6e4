#include "perc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace perc {

Tree tree_from_json(const nlohmann::json& j, long long max_vertices) {
  if (!j.contains("kind"))
    throw Error(Errc::ConfigInvalid, "tree json missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    return build_explicit(
        j.at("children").get<std::vector<std::vector<int>>>());
  }
  if (kind == "spherical") {
    return build_spherical({j.at("degrees").get<std::vector<int>>()},
                           max_vertices);
  }
  if (kind == "galton_watson") {
    return build_galton_watson(
        j.at("offspring_probs").get<std::vector<double>>(),
        j.at("depth").get<int>(), j.at("seed").get<std::uint64_t>(),
        max_vertices);
  }
  throw Error(Errc::ConfigInvalid, "unknown tree kind '" + kind + "'");
}

TargetSet target_from_json(const nlohmann::json& j) {
  if (!j.contains("kind"))
    throw Error(Errc::ConfigInvalid, "target json missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "intervals") {
    std::vector<Interval> spec;
    for (const auto& pair : j.at("intervals")) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error(Errc::ConfigInvalid, "interval must be [lo, hi]");
      spec.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return from_intervals(spec);
  }
  if (kind == "point") return point_target(j.at("t").get<double>());
  if (kind == "cantor") {
    return cantor_set(j.at("base").get<int>(),
                      j.at("digits").get<std::vector<int>>(),
                      j.at("depth").get<int>());
  }
  throw Error(Errc::ConfigInvalid, "unknown target kind '" + kind + "'");
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, path + ": " + e.what());
  }
  return j;
}

Tree load_tree(const std::string& path, long long max_vertices) {
  return tree_from_json(load_json_file(path), max_vertices);
}

TargetSet load_target(const std::string& path) {
  return target_from_json(load_json_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ConfigInvalid, "cannot write '" + path + "'");
  out << content;
}

std::string double_to_string17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace perc
