#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "aurcap/capability.hpp"
#include "aurcap/error.hpp"
#include "aurcap/fleet/config.hpp"
#include "aurcap/fleet/registry.hpp"
#include "aurcap/fleet/simulator.hpp"
#include "aurcap/models.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/ontology/turtle.hpp"
#include "aurcap/planning/mission.hpp"

namespace fs = std::filesystem;
using namespace aurcap;

namespace {

struct Globals {
  std::string config_path;
  std::string broker;
  std::string listen;
  std::string log_level;
  std::vector<std::string> models;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// A path on disk, or failing that the name of a shipped model.
std::string read_model(const std::string& name) {
  if (fs::exists(name)) return read_file(name);
  try {
    return std::string(models::text(fs::path(name).filename().string()));
  } catch (const Error&) {
    throw Error(Errc::InvalidConfig, "no such file or shipped model: " + name);
  }
}

fleet::RegistryConfig make_config(const Globals& g, const char* default_level) {
  auto config = g.config_path.empty() ? fleet::RegistryConfig{} : fleet::load_config(g.config_path);
  if (g.config_path.empty()) config.log_level = default_level;
  if (!g.broker.empty()) config.broker_uri = g.broker;
  if (!g.listen.empty()) {
    fleet::parse_listen(g.listen);
    config.listen = g.listen;
  }
  if (!g.log_level.empty()) config.log_level = g.log_level;
  for (const auto& m : g.models) config.model_paths.emplace_back(m);
  spdlog::set_level(spdlog::level::from_str(config.log_level));
  return config;
}

int fail(const Error& e) {
  std::cerr << fleet::error_json(e) << '\n';
  return 1;
}

int validate(const std::vector<std::string>& files) {
  int status = 0;
  for (const auto& f : files) {
    try {
      auto kb = models::load_seed();
      parse_turtle_into(kb, read_model(f));
      capability::check_decompositions(kb);
      kb.reasoner();
      std::cout << "ok " << f << '\n';
    } catch (const Error& e) {
      auto diag = nlohmann::ordered_json::parse(fleet::error_json(e));
      diag["file"] = f;
      std::cerr << diag.dump() << '\n';
      status = 1;
    }
  }
  return status;
}

int query_subclass(const Globals& g, const std::string& a, const std::string& b) {
  const auto kb = fleet::boot_kb(make_config(g, "warn"));
  std::cout << (is_subclass_of(kb, kb.resolve(a), kb.resolve(b)) ? "true" : "false") << '\n';
  return 0;
}

// The default simulated fleet on the configured broker, registered into `kb`.
std::unique_ptr<fleet::SimulatedFleet> embedded_fleet(KnowledgeBase& kb, const fleet::RegistryConfig& config) {
  fleet::FleetOptions options;
  options.broker_uri = config.broker_uri;
  return std::make_unique<fleet::SimulatedFleet>(kb, fleet::default_fleet(), options);
}

int match_verb(const Globals& g, const std::string& file) {
  const auto config = make_config(g, "warn");
  auto kb = fleet::boot_kb(config);
  auto sim = embedded_fleet(kb, config);
  const auto required = planning::parse_required_capability(read_model(file));
  std::cout << fleet::to_json(planning::match(kb, required)) << '\n';
  return 0;
}

int plan_verb(const Globals& g, const std::string& file) {
  const auto config = make_config(g, "warn");
  auto kb = fleet::boot_kb(config);
  auto sim = embedded_fleet(kb, config);
  const auto outcome = planning::plan(kb, planning::parse_mission(read_model(file)), {config.reusable});
  if (const auto* u = std::get_if<planning::Unsatisfiable>(&outcome)) {
    std::cout << fleet::to_json(*u) << '\n';
    return 1;
  }
  std::cout << fleet::to_json(std::get<planning::Plan>(outcome)) << '\n';
  return 0;
}

int run_remote(const std::string& registry, const std::string& mission) {
  httplib::Client client(registry);
  client.set_read_timeout(30, 0);
  auto posted = client.Post("/missions", mission, "text/turtle");
  if (!posted) throw Error(Errc::BrokerUnreachable, "registry " + registry + " is unreachable");
  if (posted->status != 201) {
    std::cout << posted->body << '\n';
    return 1;
  }
  const auto id = nlohmann::json::parse(posted->body).at("id").get<std::string>();
  auto started = client.Post("/missions/" + id + "/execute");
  if (!started || started->status != 202) throw Error(Errc::Rejected, "registry refused to execute " + id);
  while (true) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    auto got = client.Get("/missions/" + id);
    if (!got || got->status != 200) throw Error(Errc::BrokerUnreachable, "lost the registry while running " + id);
    const auto body = nlohmann::ordered_json::parse(got->body);
    const auto& report = body.at("report");
    const auto status = report.at("status").get<std::string>();
    if (status == "Succeeded" || status == "Failed") {
      std::cout << report.dump() << '\n';
      return status == "Succeeded" ? 0 : 1;
    }
  }
}

int run_verb(const Globals& g, const std::string& file, const std::string& registry) {
  const auto config = make_config(g, "warn");
  const auto text = read_model(file);
  if (!registry.empty()) return run_remote(registry, text);
  auto kb = fleet::boot_kb(config);
  auto sim = embedded_fleet(kb, config);
  const auto outcome = planning::plan(kb, planning::parse_mission(text), {config.reusable});
  if (const auto* u = std::get_if<planning::Unsatisfiable>(&outcome)) {
    std::cout << fleet::to_json(*u) << '\n';
    return 1;
  }
  planning::RemoteSkillInvoker invoker;
  planning::ExecutorOptions options;
  options.step_timeout = std::chrono::milliseconds(config.step_timeout_ms);
  const auto report = planning::execute(std::get<planning::Plan>(outcome), invoker, options);
  std::cout << fleet::to_json(report) << '\n';
  return report.status == planning::MissionStatus::Succeeded ? 0 : 1;
}

int serve(const Globals& g, bool with_fleet) {
  auto config = make_config(g, "info");
  config.embedded_fleet = config.embedded_fleet || with_fleet;
  const auto address = fleet::parse_listen(config.listen);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  fleet::RegistryOptions options;
  options.planner.reusable = config.reusable;
  options.executor.step_timeout = std::chrono::milliseconds(config.step_timeout_ms);
  fleet::Registry registry(fleet::boot_kb(config), options);
  std::unique_ptr<fleet::SimulatedFleet> sim;
  if (config.embedded_fleet) registry.write([&](KnowledgeBase& kb) { sim = embedded_fleet(kb, config); });
  registry.listen(address.host, static_cast<std::uint16_t>(address.port));
  std::cout << registry.base_url() << std::endl;

  int sig = 0;
  sigwait(&signals, &sig);
  spdlog::info("signal {}, shutting down", sig);
  registry.stop();
  registry.write([&](KnowledgeBase&) { sim.reset(); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("aurcap"));
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Robot capability knowledge base, matchmaker and fleet harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--broker", g.broker, "inproc://name or mqtt://host:port");
  app.add_option("--listen", g.listen, "registry address, host:port");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off");
  app.add_option("--model", g.models, "extra Turtle model loaded after the seed");

  std::vector<std::string> files;
  auto* validate_cmd = app.add_subcommand("validate", "parse and reason over Turtle files");
  validate_cmd->add_option("files", files)->required();

  std::string a, b;
  auto* query_cmd = app.add_subcommand("query", "ask the reasoner");
  query_cmd->require_subcommand(1);
  auto* subclass_cmd = query_cmd->add_subcommand("subclass", "is <a> a subclass of <b>");
  subclass_cmd->add_option("a", a)->required();
  subclass_cmd->add_option("b", b)->required();

  std::string file;
  auto* match_cmd = app.add_subcommand("match", "rank robots for a required capability");
  match_cmd->add_option("required", file, "Turtle holding one RequiredCapability")->required();

  auto* plan_cmd = app.add_subcommand("plan", "plan a mission against the default fleet");
  plan_cmd->add_option("mission", file)->required();

  std::string registry;
  auto* run_cmd = app.add_subcommand("run", "plan and execute a mission");
  run_cmd->add_option("mission", file)->required();
  run_cmd->add_option("--registry", registry, "registry base URL; default: an embedded fleet");

  bool with_fleet = false;
  auto* serve_cmd = app.add_subcommand("serve", "start the registry");
  serve_cmd->add_flag("--fleet", with_fleet, "also host the default simulated fleet");

  auto* describe_cmd = app.add_subcommand("describe-fleet", "print the default fleet as Turtle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) {
      if (!g.log_level.empty()) spdlog::set_level(spdlog::level::from_str(g.log_level));
      return validate(files);
    }
    if (*subclass_cmd) return query_subclass(g, a, b);
    if (*match_cmd) return match_verb(g, file);
    if (*plan_cmd) return plan_verb(g, file);
    if (*run_cmd) return run_verb(g, file, registry);
    if (*serve_cmd) return serve(g, with_fleet);
    if (*describe_cmd) {
      std::cout << fleet::fleet_turtle(fleet::default_fleet());
      return 0;
    }
  } catch (const Error& e) {
    return fail(e);
  }
  return 1;
}
