/*
 * Copyright 2026 The axai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AXAI_HTTP_SERVER_HPP_
#define AXAI_HTTP_SERVER_HPP_

#include <memory>
#include <string>

#include "axai/service.hpp"

namespace httplib {
class Server;
}

namespace axai {

struct HttpOptions {
  std::string host = "0.0.0.0";
  // Served at "/" when the directory exists.
  std::string static_dir;
};

// JSON API over an ExplainService:
//   GET  /api/predictions
//   GET  /api/explanations/{row_id}?method=...
//   GET  /api/scenario
//   GET  /api/health
//   POST /api/refresh
// Error bodies are {"error": code, "detail": text}.
class HttpServer {
 public:
  HttpServer(ExplainService& service, HttpOptions options = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  bool bind(int port);
  // Returns the chosen port, or -1.
  int bind_any_port();
  // Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  ExplainService& service_;
  HttpOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace axai

#endif  // AXAI_HTTP_SERVER_HPP_
