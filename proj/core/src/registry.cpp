#include "aurcap/fleet/registry.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include <json.hpp>

#include "aurcap/capability.hpp"
#include "aurcap/error.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"
#include "aurcap/ontology/turtle.hpp"
#include "aurcap/planning/mission.hpp"
#include "aurcap/structure.hpp"

namespace aurcap::fleet {

using json = nlohmann::ordered_json;
using namespace planning;

namespace {

json descriptor_json(const interfaces::Descriptor& d) {
  json j{{"id", d.id.str()}, {"kind", std::string(interfaces::to_string(d.kind))}, {"skill", d.skill.str()}};
  switch (d.kind) {
    case interfaces::InterfaceKind::Mqtt:
      j["brokerUri"] = d.broker_uri;
      j["commandTopic"] = d.command_topic;
      j["stateTopic"] = d.state_topic;
      j["qos"] = d.qos;
      break;
    case interfaces::InterfaceKind::Http:
      j["baseUrl"] = d.base_url;
      break;
    case interfaces::InterfaceKind::OpcUa:
      j["endpointUrl"] = d.endpoint_url;
      break;
  }
  return j;
}

json state_json(const wire::StateMessage& m) { return json::parse(wire::to_json(m)); }

json plan_json(const Plan& plan) {
  json steps = json::array();
  for (const auto& a : plan.assignments) {
    json params = json::array();
    for (const auto& p : wire::from_parameters(a.parameters))
      params.push_back({{"typeDescription", p.type_description}, {"value", p.value}, {"datatype", p.datatype}});
    json deps = json::array();
    for (const auto& d : a.depends_on) deps.push_back(d.str());
    steps.push_back({{"step", a.step.str()},
                     {"robot", a.robot.str()},
                     {"capability", a.capability.str()},
                     {"skill", a.skill.str()},
                     {"interface", descriptor_json(a.interface)},
                     {"parameters", std::move(params)},
                     {"dependsOn", std::move(deps)}});
  }
  return {{"mission", plan.mission.str()}, {"assignments", std::move(steps)}};
}

json report_json(const ExecutionReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    json trajectory = json::array();
    for (const auto& m : s.trajectory) trajectory.push_back(state_json(m));
    steps.push_back({{"step", s.step.str()},
                     {"robot", s.robot.str()},
                     {"capability", s.capability.str()},
                     {"skill", s.skill.str()},
                     {"started", s.started},
                     {"terminal", s.terminal ? json(std::string(skill::to_string(*s.terminal))) : json(nullptr)},
                     {"failure", s.failure},
                     {"trajectory", std::move(trajectory)}});
  }
  return {{"mission", r.mission.str()},
          {"status", std::string(to_string(r.status))},
          {"failedStep", r.failed_step ? json(r.failed_step->str()) : json(nullptr)},
          {"reason", r.reason},
          {"startedAt", r.started_at},
          {"finishedAt", r.finished_at},
          {"steps", std::move(steps)}};
}

json error_body(const Error& e) {
  json j{{"error", std::string(to_string(e.code()))}, {"detail", e.detail()}};
  if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) {
    j["line"] = s->line();
    j["column"] = s->column();
  } else if (const auto* u = dynamic_cast<const UnsupportedConstruct*>(&e)) {
    j["line"] = u->line();
    j["column"] = u->column();
  }
  return j;
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

std::string to_json(const interfaces::Descriptor& d) { return descriptor_json(d).dump(); }
std::string to_json(const Plan& plan) { return plan_json(plan).dump(); }
std::string to_json(const Unsatisfiable& u) {
  return json{{"error", "Unsatisfiable"}, {"step", u.step.str()}, {"reason", u.reason}}.dump();
}
std::string to_json(const ExecutionReport& report) { return report_json(report).dump(); }
std::string to_json(const std::vector<Match>& matches) {
  json out = json::array();
  for (const auto& m : matches) {
    json ifs = json::array();
    for (const auto& d : m.interfaces) ifs.push_back(descriptor_json(d));
    out.push_back({{"robot", m.robot.str()},
                   {"capability", m.capability.str()},
                   {"skill", m.skill.str()},
                   {"unusedAssurances", m.unused_assurances},
                   {"interfaces", std::move(ifs)}});
  }
  return out.dump();
}
std::string error_json(const Error& e) { return error_body(e).dump(); }

struct Registry::Impl {
  struct Entry {
    Mission mission;
    Plan plan;
    bool started = false;
    std::optional<ExecutionReport> report;
  };

  KnowledgeBase kb;
  mutable std::shared_mutex kb_mutex;
  RegistryOptions options;

  std::mutex missions_mutex;
  std::map<std::string, Entry> missions;
  int next_mission = 0;
  std::vector<std::thread> runs;

  httplib::Server server;
  std::thread thread;
  std::string host;
  std::uint16_t port = 0;

  Impl(KnowledgeBase k, RegistryOptions o) : kb(std::move(k)), options(std::move(o)) {}

  Iri capability_type(const KnowledgeBase& k, const std::string& text) const {
    if (Iri::is_valid(text) && k.is_class(Iri(text))) return Iri(text);
    if (auto e = k.expand(text); e && k.is_class(*e)) return *e;
    const auto local = ns::term(ns::aur_cap, text.c_str());
    if (k.is_class(local)) return local;
    throw Error(Errc::UnknownCapabilityType, "unknown capability type '" + text + "'");
  }

  void post_models(const httplib::Request& req, httplib::Response& res) {
    KnowledgeBase incoming;
    try {
      incoming = parse_turtle(req.body);
    } catch (const Error& e) {
      return reply(res, 400, error_body(e));
    }
    std::unique_lock lock(kb_mutex);
    auto merged = kb;
    merged.merge(incoming);
    try {
      capability::check_decompositions(merged);
    } catch (const Error& e) {
      return reply(res, 400, error_body(e));
    }
    kb = std::move(merged);
    spdlog::info("merged model: {} axioms, {} assertions", incoming.axioms().size(), incoming.assertions().size());
    reply(res, 201, {{"axioms", incoming.axioms().size()}, {"assertions", incoming.assertions().size()}});
  }

  void get_robots(const httplib::Request& req, httplib::Response& res) {
    std::shared_lock lock(kb_mutex);
    std::optional<Iri> type;
    std::optional<structure::Modality> modality;
    try {
      if (req.has_param("capabilityType")) type = capability_type(kb, req.get_param_value("capabilityType"));
      if (req.has_param("modality")) {
        modality = structure::modality_from_string(req.get_param_value("modality"));
        if (!modality)
          throw Error(Errc::UnknownTerm, "unknown modality '" + req.get_param_value("modality") + "'");
      }
    } catch (const Error& e) {
      return reply(res, 400, error_body(e));
    }
    const auto reasoner = kb.reasoner();
    json out = json::array();
    for (const auto& robot : reasoner->instances_of(vocab::Robot)) {
      if (modality && structure::modality_of(kb, robot) != modality) continue;
      const auto caps = capability::provided_by(kb, robot);
      bool offers = !type;
      json cap_list = json::array();
      for (const auto& c : caps) {
        if (type && reasoner->is_instance_of(c, *type)) offers = true;
        cap_list.push_back({{"id", c.str()}, {"type", capability::capability_type_of(kb, c).str()}});
      }
      if (!offers) continue;
      json ifs = json::array();
      for (const auto& skill : kb.subjects(vocab::hostedOn, robot))
        for (const auto& d : interfaces::read_descriptors(kb, skill)) ifs.push_back(descriptor_json(d));
      const auto m = structure::modality_of(kb, robot);
      out.push_back({{"robot", robot.str()},
                     {"modality", m ? json(std::string(structure::to_string(*m))) : json(nullptr)},
                     {"capabilities", std::move(cap_list)},
                     {"interfaces", std::move(ifs)}});
    }
    reply(res, 200, out);
  }

  void post_mission(const httplib::Request& req, httplib::Response& res) {
    Mission mission;
    PlanOutcome outcome;
    try {
      mission = parse_mission(req.body);
      std::shared_lock lock(kb_mutex);
      outcome = planning::plan(kb, mission, options.planner);
    } catch (const Error& e) {
      return reply(res, 400, error_body(e));
    }
    if (const auto* u = std::get_if<Unsatisfiable>(&outcome))
      return reply(res, 422, json::parse(to_json(*u)));
    std::lock_guard lock(missions_mutex);
    const auto id = "m" + std::to_string(++next_mission);
    auto& entry = missions[id];
    entry.mission = std::move(mission);
    entry.plan = std::get<Plan>(std::move(outcome));
    spdlog::info("mission {} planned: {} steps", id, entry.plan.assignments.size());
    reply(res, 201, {{"id", id}, {"plan", plan_json(entry.plan)}});
  }

  void run(const std::string& id, Plan plan) {
    RemoteSkillInvoker invoker(options.remote);
    auto record = [&](const ExecutionReport& r) {
      std::lock_guard lock(missions_mutex);
      missions[id].report = r;
    };
    try {
      record(execute(plan, invoker, options.executor, record));
    } catch (const Error& e) {
      ExecutionReport r;
      r.mission = plan.mission;
      r.status = MissionStatus::Failed;
      r.reason = e.what();
      record(r);
    }
    spdlog::info("mission {} finished", id);
  }

  void post_execute(const httplib::Request& req, httplib::Response& res) {
    const auto id = req.matches[1].str();
    std::lock_guard lock(missions_mutex);
    auto it = missions.find(id);
    if (it == missions.end()) return reply(res, 404, {{"error", "UnknownMission"}, {"detail", id}});
    if (it->second.started)
      return reply(res, 409, {{"error", "AlreadyExecuted"}, {"detail", "mission " + id + " was already executed"}});
    it->second.started = true;
    ExecutionReport pending;
    pending.mission = it->second.plan.mission;
    it->second.report = pending;
    runs.emplace_back([this, id, plan = it->second.plan] { run(id, plan); });
    reply(res, 202, {{"id", id}, {"status", "Running"}});
  }

  void get_mission(const httplib::Request& req, httplib::Response& res) {
    const auto id = req.matches[1].str();
    std::lock_guard lock(missions_mutex);
    auto it = missions.find(id);
    if (it == missions.end()) return reply(res, 404, {{"error", "UnknownMission"}, {"detail", id}});
    reply(res, 200,
          {{"id", id},
           {"plan", plan_json(it->second.plan)},
           {"report", it->second.report ? report_json(*it->second.report) : json(nullptr)}});
  }
};

Registry::Registry(KnowledgeBase kb, RegistryOptions options)
    : impl_(std::make_unique<Impl>(std::move(kb), std::move(options))) {
  auto& im = *impl_;
  im.server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  using Req = httplib::Request;
  using Res = httplib::Response;
  im.server.Post("/registry/models", [&im](const Req& q, Res& r) { im.post_models(q, r); });
  im.server.Get("/registry/robots", [&im](const Req& q, Res& r) { im.get_robots(q, r); });
  im.server.Post("/missions", [&im](const Req& q, Res& r) { im.post_mission(q, r); });
  im.server.Post(R"(/missions/([^/]+)/execute)", [&im](const Req& q, Res& r) { im.post_execute(q, r); });
  im.server.Get(R"(/missions/([^/]+))", [&im](const Req& q, Res& r) { im.get_mission(q, r); });
  im.server.set_exception_handler([](const Req&, Res& r, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      reply(r, 500, error_body(e));
    } catch (const std::exception& e) {
      reply(r, 500, {{"error", "Internal"}, {"detail", e.what()}});
    }
  });
}

Registry::~Registry() { stop(); }

void Registry::listen(const std::string& host, std::uint16_t port) {
  auto& im = *impl_;
  im.host = host;
  if (port == 0) {
    const int bound = im.server.bind_to_any_port(host);
    if (bound <= 0) throw Error(Errc::PortUnavailable, "cannot bind " + host);
    im.port = static_cast<std::uint16_t>(bound);
  } else {
    if (!im.server.bind_to_port(host, port))
      throw Error(Errc::PortUnavailable, host + ":" + std::to_string(port) + " is not bindable");
    im.port = port;
  }
  im.thread = std::thread([&im] { im.server.listen_after_bind(); });
  im.server.wait_until_ready();
  spdlog::info("registry listening on {}", base_url());
}

std::uint16_t Registry::port() const { return impl_->port; }

std::string Registry::base_url() const { return "http://" + impl_->host + ":" + std::to_string(impl_->port); }

void Registry::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  std::vector<std::thread> runs;
  {
    std::lock_guard lock(impl_->missions_mutex);
    runs.swap(impl_->runs);
  }
  for (auto& t : runs) t.join();
}

void Registry::write(const std::function<void(KnowledgeBase&)>& f) {
  std::unique_lock lock(impl_->kb_mutex);
  f(impl_->kb);
}

void Registry::read(const std::function<void(const KnowledgeBase&)>& f) const {
  std::shared_lock lock(impl_->kb_mutex);
  f(impl_->kb);
}

}  // namespace aurcap::fleet
