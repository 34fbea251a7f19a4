#include "edurec/service/http_server.hpp"

#include <charconv>
#include <iostream>

#include "httplib.h"

namespace edurec::service {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const ApiError& e) {
  send_json(res, e.status(), e.envelope());
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto body = json::parse(req.body);
    if (!body.is_object()) throw ApiError(400, "invalid_json", "request body must be an object");
    return body;
  } catch (const json::parse_error& e) {
    throw ApiError(400, "invalid_json", std::string("malformed JSON body: ") + e.what());
  }
}

template <typename T>
T require_field(const json& body, const char* key) {
  if (!body.contains(key)) {
    throw ApiError(400, "invalid_request", std::string("missing field '") + key + "'");
  }
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw ApiError(400, "invalid_request", std::string("field '") + key + "' has the wrong type");
  }
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ApiError(400, "invalid_request", "seed must be an unsigned integer");
  }
  return seed;
}

// Wraps a handler so every failure leaves as the JSON error envelope.
template <typename F>
httplib::Server::Handler guarded(F&& fn) {
  return [fn = std::forward<F>(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ApiError& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_error(res, ApiError(500, "internal", e.what()));
    }
  };
}

}  // namespace

HttpServer::HttpServer(QuizService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& svc = service_;
  auto& srv = *server_;

  const auto require_admin = [&svc](const httplib::Request& req) {
    if (svc.config().admin_token.empty()) {
      throw ApiError(403, "admin_disabled", "admin endpoints are disabled");
    }
    const auto auth = req.get_header_value("Authorization");
    const std::string prefix = "Bearer ";
    if (auth.rfind(prefix, 0) != 0 || !svc.check_admin_token(auth.substr(prefix.size()))) {
      throw ApiError(401, "unauthorized", "missing or invalid bearer token");
    }
  };

  srv.Get("/api/subjects", guarded([&svc](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, svc.subjects());
          }));

  srv.Post("/api/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             const auto body = parse_body(req);
             const auto phase_name = body.value("phase", std::string("prerequisite"));
             const auto phase = parse_phase(phase_name);
             if (!phase) {
               throw ApiError(400, "invalid_request", "phase must be prerequisite or followup");
             }
             const auto created =
                 svc.create_session(require_field<std::string>(body, "student"),
                                    require_field<std::string>(body, "subject"), *phase);
             send_json(res, 201,
                       {{"session_id", created.session_id}, {"questions", created.questions}});
           }));

  srv.Get(R"(/api/sessions/([^/]+))",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, svc.session_view(req.matches[1]));
          }));

  srv.Post(R"(/api/sessions/([^/]+)/answers)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             const auto body = parse_body(req);
             svc.submit_answer(req.matches[1], require_field<std::string>(body, "question_id"),
                               require_field<long long>(body, "option"));
             res.status = 204;
           }));

  srv.Post(R"(/api/sessions/([^/]+)/finalize)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             send_json(res, 200, svc.finalize(req.matches[1]));
           }));

  srv.Post("/api/admin/train",
           guarded([&svc, require_admin](const httplib::Request& req, httplib::Response& res) {
             require_admin(req);
             const auto body = parse_body(req);
             const auto seed = require_field<std::uint64_t>(body, "seed");
             send_json(res, 200,
                       svc.admin_train(require_field<std::string>(body, "dataset_path"),
                                       require_field<std::string>(body, "algorithm"),
                                       body.value("params", json::object()), seed));
           }));

  srv.Get("/api/admin/compare",
          guarded([&svc, require_admin](const httplib::Request& req, httplib::Response& res) {
            require_admin(req);
            if (!req.has_param("dataset")) {
              throw ApiError(400, "invalid_request", "missing query parameter 'dataset'");
            }
            const auto seed = req.has_param("seed") ? parse_seed(req.get_param_value("seed")) : 0;
            send_json(res, 200,
                      svc.admin_compare(req.get_param_value("dataset"), seed).to_json());
          }));

  if (!svc.config().static_dir.empty() && std::filesystem::is_directory(svc.config().static_dir)) {
    srv.set_mount_point("/", svc.config().static_dir.string());
  }
}

int HttpServer::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else if (server_->bind_to_port(host, port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpServer::listen(const std::string& host, int port) {
  port_ = port;
  if (!server_->listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace edurec::service
