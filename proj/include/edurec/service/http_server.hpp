#pragma once

#include <memory>
#include <string>
#include <thread>

#include "edurec/service/quiz_service.hpp"

namespace httplib {
class Server;
}

namespace edurec::service {

// HTTP/1.1 JSON front end for QuizService.
//
//   GET  /api/subjects
//   POST /api/sessions                    {student, subject, phase}
//   GET  /api/sessions/{id}
//   POST /api/sessions/{id}/answers       {question_id, option}
//   POST /api/sessions/{id}/finalize
//   POST /api/admin/train                 {dataset_path, algorithm, params, seed}
//   GET  /api/admin/compare?dataset=..&seed=..
//
// Admin routes need "Authorization: Bearer <admin_token>".
class HttpServer {
 public:
  explicit HttpServer(QuizService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port (port 0 picks a free one) and serves on a background
  // thread. Returns the bound port.
  int start(const std::string& host, int port);
  // Blocks serving on the calling thread.
  void listen(const std::string& host, int port);
  void stop();
  int port() const noexcept { return port_; }

 private:
  void install_routes();

  QuizService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace edurec::service
