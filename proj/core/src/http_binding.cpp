#include <httplib.h>
#include <spdlog/spdlog.h>

#include <json.hpp>

#include "aurcap/error.hpp"
#include "aurcap/interfaces/bindings.hpp"

namespace aurcap::interfaces {

namespace {

constexpr const char* kJson = "application/json";

void reply_reason(httplib::Response& res, int status, const std::optional<std::string>& correlation,
                  const std::string& reason) {
  res.status = status;
  res.set_content(wire::to_json(wire::Rejection{correlation, reason}), kJson);
}

}  // namespace

std::string wadl_document(const std::string& base_url, const std::string& skill_segment) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<application xmlns=\"http://wadl.dev.java.net/2009/02\">\n"
      "  <resources base=\"" + base_url + "/skills/" + skill_segment + "/\">\n";
  for (const auto cmd : skill::kAllCommands) {
    const std::string name(skill::to_string(cmd));
    out += "    <resource path=\"transitions/" + name + "\">\n"
           "      <method name=\"POST\" id=\"" + name + "\">\n"
           "        <request><representation mediaType=\"application/json\"/></request>\n"
           "        <response status=\"202\"><representation mediaType=\"application/json\"/></response>\n"
           "        <response status=\"409\"><representation mediaType=\"application/json\"/></response>\n"
           "      </method>\n"
           "    </resource>\n";
  }
  out +=
      "    <resource path=\"state\">\n"
      "      <method name=\"GET\" id=\"state\">\n"
      "        <response status=\"200\"><representation mediaType=\"application/json\"/></response>\n"
      "      </method>\n"
      "    </resource>\n"
      "  </resources>\n"
      "</application>\n";
  return out;
}

struct HttpSkillServer::Impl {
  explicit Impl(skill::SkillRuntime& r) : runtime(r) {}

  skill::SkillRuntime& runtime;
  std::string host;
  std::uint16_t port = 0;
  httplib::Server server;
  std::thread thread;
  mutable std::mutex mutex;
  std::map<std::string, Iri> skills;  // by local name

  std::optional<Iri> find(const std::string& local) const {
    std::lock_guard lock(mutex);
    auto it = skills.find(local);
    if (it == skills.end()) return std::nullopt;
    return it->second;
  }

  std::string base_url() const { return "http://" + host + ":" + std::to_string(port); }

  void post_transition(const httplib::Request& req, httplib::Response& res) {
    const auto skill = find(req.matches[1]);
    const auto cmd = skill::command_from_string(req.matches[2].str());
    if (!skill) return reply_reason(res, 404, std::nullopt, "unknown skill " + req.matches[1].str());
    if (!cmd) return reply_reason(res, 404, std::nullopt, "unknown command " + req.matches[2].str());
    wire::CommandMessage message;
    message.command = *cmd;
    if (!req.body.empty()) {
      try {
        message = wire::parse_command(req.body);
      } catch (const Error& e) {
        return reply_reason(res, 400, std::nullopt, e.detail());
      }
      if (message.command != *cmd)
        return reply_reason(res, 400, message.correlation_id, "body command does not match the resource");
    }
    const auto correlation = message.correlation_id.value_or(wire::new_uuid());
    std::vector<skill::Parameter> params;
    try {
      params = wire::to_parameters(message.parameters);
    } catch (const Error& e) {
      return reply_reason(res, 400, correlation, e.detail());
    }
    const auto result = runtime.command(*skill, *cmd, params, correlation);
    if (!result.accepted) return reply_reason(res, 409, correlation, result.reason);
    res.status = 202;
    res.set_content(wire::to_json(wire::from_change(result.change)), kJson);
  }

  void get_state(const httplib::Request& req, httplib::Response& res) {
    const auto skill = find(req.matches[1]);
    if (!skill) return reply_reason(res, 404, std::nullopt, "unknown skill " + req.matches[1].str());
    res.set_content(wire::to_json(wire::from_change(runtime.current(*skill))), kJson);
  }

  void get_description(const httplib::Request& req, httplib::Response& res) {
    const auto skill = find(req.matches[1]);
    if (!skill) return reply_reason(res, 404, std::nullopt, "unknown skill " + req.matches[1].str());
    res.set_content(wadl_document(base_url(), encode_segment(skill->local_name())), "application/xml");
  }
};

HttpSkillServer::HttpSkillServer(skill::SkillRuntime& runtime, std::string host, std::uint16_t port)
    : impl_(std::make_unique<Impl>(runtime)) {
  auto& im = *impl_;
  im.host = std::move(host);
  // The library default sets SO_REUSEPORT, which would let two servers share a port.
  im.server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  im.server.Post(R"(/skills/([^/]+)/transitions/([^/]+))",
                 [&im](const httplib::Request& req, httplib::Response& res) { im.post_transition(req, res); });
  im.server.Get(R"(/skills/([^/]+)/state)",
                [&im](const httplib::Request& req, httplib::Response& res) { im.get_state(req, res); });
  im.server.Get(R"(/skills/([^/]+)/description)",
                [&im](const httplib::Request& req, httplib::Response& res) { im.get_description(req, res); });
  if (port == 0) {
    const int bound = im.server.bind_to_any_port(im.host);
    if (bound <= 0) throw Error(Errc::PortUnavailable, "cannot bind " + im.host);
    im.port = static_cast<std::uint16_t>(bound);
  } else {
    if (!im.server.bind_to_port(im.host, port))
      throw Error(Errc::PortUnavailable, im.host + ":" + std::to_string(port) + " is not bindable");
    im.port = port;
  }
  im.thread = std::thread([&im] { im.server.listen_after_bind(); });
  im.server.wait_until_ready();
}

HttpSkillServer::~HttpSkillServer() { stop(); }

void HttpSkillServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::uint16_t HttpSkillServer::port() const { return impl_->port; }

std::string HttpSkillServer::base_url() const { return impl_->base_url(); }

Descriptor HttpSkillServer::bind(KnowledgeBase& kb, const Iri& skill) {
  if (!impl_->runtime.has(skill)) throw Error(Errc::UnknownSkill, skill.str() + " is not hosted by this runtime");
  const std::string local(skill.local_name());
  encode_segment(local);  // rejects empty names
  {
    std::lock_guard lock(impl_->mutex);
    auto [it, inserted] = impl_->skills.emplace(local, skill);
    if (!inserted && it->second != skill)
      throw Error(Errc::DuplicateId, "another skill is served as '" + local + "'");
  }
  auto d = http_descriptor(skill, base_url());
  write_descriptor(kb, d);
  return d;
}

}  // namespace aurcap::interfaces
