#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "perc/target_set.hpp"
#include "perc/tree.hpp"

namespace perc {

// Tree JSON: {"kind":"explicit","children":[[...],...]}
//          | {"kind":"spherical","degrees":[...]}
//          | {"kind":"galton_watson","offspring_probs":[...],"depth":n,"seed":u64}
Tree tree_from_json(const nlohmann::json& j,
                    long long max_vertices = kDefaultVertexBudget);

// Target JSON: {"kind":"intervals","intervals":[[a,b],...]}
//            | {"kind":"point","t":x}
//            | {"kind":"cantor","base":b,"digits":[...],"depth":m}
TargetSet target_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
Tree load_tree(const std::string& path,
               long long max_vertices = kDefaultVertexBudget);
TargetSet load_target(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

// 17 significant digits; parses back to the identical double.
std::string double_to_string17(double v);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace perc
