#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"

// Shipped Turtle models: the upper-ontology anchors, the four aspect patterns,
// the alignment, the capability taxonomy, and the default fleet and mission
// fixtures.
namespace aurcap::models {

struct ModelFile {
  std::string_view name;
  std::string_view text;
};

std::vector<ModelFile> embedded();
// Throws UnknownTerm for names that are not shipped.
std::string_view text(std::string_view name);

// Anchors, aspect patterns, alignment and capability taxonomy, in load order.
const std::vector<std::string_view>& seed_names();
KnowledgeBase load_seed();

// Seed plus fleet.ttl.
KnowledgeBase load_seed_with_fleet();

void load_file(KnowledgeBase& kb, const std::filesystem::path& path);

}  // namespace aurcap::models
