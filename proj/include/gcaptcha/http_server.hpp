#pragma once

#include <memory>
#include <string>

#include "gcaptcha/api.hpp"

namespace httplib {
class Server;
}

namespace gcaptcha {

// Binds CaptchaService to HTTP/1.1 routes under /api/v1.
class HttpServer {
 public:
  explicit HttpServer(CaptchaService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  CaptchaService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace gcaptcha
