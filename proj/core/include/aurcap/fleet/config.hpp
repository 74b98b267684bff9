#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aurcap/ontology/knowledge_base.hpp"

namespace aurcap::fleet {

// Line-oriented key=value file. Keys:
//   listen = host:port
//   broker = inproc://name | mqtt://host:port   (empty: private in-process broker)
//   model  = path                               (repeatable, in load order)
//   log_level = trace|debug|info|warn|error|off
//   fleet  = true|false                          (host the default simulated fleet)
//   reusable = true|false                        (planner: concurrent steps may share a robot)
//   step_timeout_ms = n
// Blank lines and lines starting with '#' are ignored; a '#' after whitespace
// starts a trailing comment.
struct RegistryConfig {
  std::string listen = "127.0.0.1:8080";
  std::string broker_uri;
  std::vector<std::filesystem::path> model_paths;
  std::string log_level = "info";
  bool embedded_fleet = false;
  bool reusable = true;
  int step_timeout_ms = 60000;
};

struct ListenAddress {
  std::string host;
  int port = 0;
};

// All throw InvalidConfig.
RegistryConfig parse_config(std::string_view text);
RegistryConfig load_config(const std::filesystem::path& path);
ListenAddress parse_listen(std::string_view text);

// Seed vocabularies plus every model path, reasoned once. Throws whatever the
// parser or validators raise; paths are resolved relative to the working
// directory.
KnowledgeBase boot_kb(const RegistryConfig& config);

}  // namespace aurcap::fleet
