#include "moral_debater/service.h"

#include <thread>

#include "httplib.h"
#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

ApiResponse json_response(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view kind, const std::string& message) {
  return json_response(status, {{"error", kind}, {"message", message}});
}

Json parse_body(std::string_view body) {
  if (trim(body).empty()) return Json::object();
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

struct Service::Server {
  httplib::Server http;
  std::thread thread;
};

Service::Service(std::shared_ptr<const Generator> generator, std::shared_ptr<StudyStore> study)
    : generator_(std::move(generator)), study_(std::move(study)) {}

Service::~Service() { stop(); }

ApiResponse Service::dispatch(std::string_view method, std::string_view path,
                              std::string_view body) const {
  try {
    if (path == "/api/generate") {
      if (method != "POST") return error_response(405, "method", "use POST");
      if (!generator_) return error_response(503, "unavailable", "no index loaded");
      const auto request = generation_request_from_json(parse_body(body));
      const auto result = generator_->generate(request);
      return json_response(result.argument ? 200 : 422, result_to_json(result, true));
    }
    if (!path.starts_with("/api/study/")) return error_response(404, "not_found", "no such route");
    if (!study_) return error_response(503, "unavailable", "no study configured");

    if (path == "/api/study/sessions") {
      if (method != "POST") return error_response(405, "method", "use POST");
      return json_response(201, study_->create_session(parse_body(body)));
    }
    if (path == "/api/study/export") {
      if (method != "GET") return error_response(405, "method", "use GET");
      return {200, study_->export_jsonl(), "application/x-ndjson"};
    }
    constexpr std::string_view kPrefix = "/api/study/sessions/";
    if (path.starts_with(kPrefix)) {
      const auto rest = path.substr(kPrefix.size());
      const auto slash = rest.find('/');
      if (slash == std::string_view::npos) return error_response(404, "not_found", "no such route");
      const std::string id(rest.substr(0, slash));
      const auto action = rest.substr(slash + 1);
      if (action == "next" && method == "GET") return json_response(200, study_->next(id));
      if (method == "POST") {
        const auto payload = parse_body(body);
        if (action == "stance") return json_response(200, study_->submit_stance(id, payload));
        if (action == "ranking") return json_response(200, study_->submit_ranking(id, payload));
        if (action == "questionnaire") {
          return json_response(200, study_->submit_questionnaire(id, payload));
        }
      }
    }
    return error_response(404, "not_found", "no such route");
  } catch (const NotFoundError& e) {
    return error_response(404, "not_found", e.what());
  } catch (const StateError& e) {
    return error_response(409, "state", e.what());
  } catch (const ValidationError& e) {
    return error_response(400, "validation", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

int Service::start(const std::string& host, int port,
                   const std::optional<std::filesystem::path>& static_dir) {
  if (server_) throw Error("service already started");
  server_ = std::make_unique<Server>();
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const auto r = dispatch(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->http.Get(R"(/api/.*)", handler);
  server_->http.Post(R"(/api/.*)", handler);
  if (static_dir && !server_->http.set_mount_point("/", static_dir->string())) {
    throw ValidationError("static directory " + static_dir->string() + " does not exist");
  }
  const int bound = port == 0 ? server_->http.bind_to_any_port(host)
                              : (server_->http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    server_.reset();
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  server_->thread = std::thread([s = server_.get()] { s->http.listen_after_bind(); });
  return bound;
}

void Service::wait() {
  if (server_ && server_->thread.joinable()) server_->thread.join();
}

void Service::stop() {
  if (!server_) return;
  server_->http.stop();
  if (server_->thread.joinable()) server_->thread.join();
  server_.reset();
}

}  // namespace moral_debater
