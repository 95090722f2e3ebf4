#include "gcaptcha/http_server.hpp"

#include <httplib.h>

namespace gcaptcha {

namespace {

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
  res.set_header("Cache-Control", "no-store");
}

}  // namespace

HttpServer::HttpServer(CaptchaService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Post("/api/v1/challenge", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    send(res, service_.issue_challenge(req.remote_addr));
  });

  s.Post(R"(/api/v1/challenge/([^/]+)/answer)",
         [this](const httplib::Request& req, httplib::Response& res) {
           send(res, service_.answer(req.matches[1].str(), req.body,
                                     req.remote_addr));
         });

  s.Get(R"(/api/v1/assets/(.+))",
        [this](const httplib::Request& req, httplib::Response& res) {
          send(res, service_.asset(req.matches[1].str()));
        });

  s.Get(R"(/api/v1/verify/([^/]+))",
        [this](const httplib::Request& req, httplib::Response& res) {
          send(res, service_.verify_token(req.matches[1].str()));
        });

  // Unrouted paths and handler exceptions still answer with a JSON error.
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* code = res.status == 404 ? "not_found" : "http_error";
    send(res, error_response(res.status, code, httplib::status_message(res.status)));
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                             std::exception_ptr) {
    send(res, error_response(500, "internal", "internal server error"));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace gcaptcha
