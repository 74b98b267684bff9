#include "aurcap/fleet/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "aurcap/capability.hpp"
#include "aurcap/error.hpp"
#include "aurcap/models.hpp"
#include "aurcap/ontology/reasoner.hpp"

namespace aurcap::fleet {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw Error(Errc::InvalidConfig, "line " + std::to_string(line) + ": " + what);
}

bool flag(std::size_t line, std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad(line, "expected true or false, got '" + std::string(v) + "'");
}

int number(std::string_view v) {
  int out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || end != v.data() + v.size()) return -1;
  return out;
}

}  // namespace

ListenAddress parse_listen(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw Error(Errc::InvalidConfig, "listen address must be host:port, got '" + std::string(text) + "'");
  const int port = number(text.substr(colon + 1));
  if (port < 0 || port > 65535) throw Error(Errc::InvalidConfig, "bad port in '" + std::string(text) + "'");
  return {std::string(text.substr(0, colon)), port};
}

RegistryConfig parse_config(std::string_view text) {
  RegistryConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto l = trim(raw);
    if (l.empty() || l.front() == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) bad(line, "expected key = value");
    const auto key = trim(l.substr(0, eq));
    auto rest = l.substr(eq + 1);
    // '#' after whitespace starts a trailing comment
    for (std::size_t i = 1; i < rest.size(); ++i)
      if (rest[i] == '#' && (rest[i - 1] == ' ' || rest[i - 1] == '\t')) {
        rest = rest.substr(0, i);
        break;
      }
    const auto value = trim(rest);
    if (key == "listen") {
      parse_listen(value);
      config.listen = value;
    } else if (key == "broker") {
      config.broker_uri = value;
    } else if (key == "model") {
      if (value.empty()) bad(line, "empty model path");
      config.model_paths.emplace_back(std::string(value));
    } else if (key == "log_level") {
      if (spdlog::level::from_str(std::string(value)) == spdlog::level::off && value != "off")
        bad(line, "unknown log level '" + std::string(value) + "'");
      config.log_level = value;
    } else if (key == "fleet") {
      config.embedded_fleet = flag(line, value);
    } else if (key == "reusable") {
      config.reusable = flag(line, value);
    } else if (key == "step_timeout_ms") {
      config.step_timeout_ms = number(value);
      if (config.step_timeout_ms <= 0) bad(line, "step_timeout_ms must be a positive integer");
    } else {
      bad(line, "unknown key '" + std::string(key) + "'");
    }
  }
  return config;
}

RegistryConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

KnowledgeBase boot_kb(const RegistryConfig& config) {
  auto kb = models::load_seed();
  for (const auto& path : config.model_paths) {
    spdlog::debug("loading {}", path.string());
    models::load_file(kb, path);
  }
  capability::check_decompositions(kb);
  kb.reasoner();
  return kb;
}

}  // namespace aurcap::fleet
