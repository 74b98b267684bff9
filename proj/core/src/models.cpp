#include "aurcap/models.hpp"

#include <fstream>
#include <iterator>
#include <string>
#include <utility>

#include "aurcap/error.hpp"
#include "aurcap/ontology/turtle.hpp"

namespace aurcap::models {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded();
}

std::vector<ModelFile> embedded() {
  std::vector<ModelFile> out;
  for (const auto& [name, text] : detail::embedded()) out.push_back({name, text});
  return out;
}

std::string_view text(std::string_view name) {
  for (const auto& [n, t] : detail::embedded())
    if (n == name) return t;
  throw Error(Errc::UnknownTerm, "no shipped model named '" + std::string(name) + "'");
}

const std::vector<std::string_view>& seed_names() {
  static const std::vector<std::string_view> names = {
      "seed-anchors.ttl", "aur-structure.ttl", "aur-capability.ttl", "aur-property.ttl",
      "aur-skill.ttl",    "aur-alignment.ttl", "aur-cap.ttl",
  };
  return names;
}

KnowledgeBase load_seed() {
  KnowledgeBase kb;
  for (auto name : seed_names()) parse_turtle_into(kb, text(name));
  return kb;
}

KnowledgeBase load_seed_with_fleet() {
  KnowledgeBase kb = load_seed();
  parse_turtle_into(kb, text("fleet.ttl"));
  return kb;
}

void load_file(KnowledgeBase& kb, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read model file " + path.string());
  const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  parse_turtle_into(kb, content);
}

}  // namespace aurcap::models
