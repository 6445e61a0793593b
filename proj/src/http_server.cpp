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

#include "axai/http_server.hpp"

#include <charconv>
#include <filesystem>

#include <httplib.h>

namespace axai {

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, std::string_view code,
                std::string_view detail) {
  res.status = status;
  res.set_content(error_json(code, detail), kJson);
}

// Runs `handler`, mapping library errors onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& handler) {
  try {
    handler();
  } catch (const ServiceError& e) {
    send_error(res, http_status(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "InternalError", e.what());
  }
}

}  // namespace

HttpServer::HttpServer(ExplainService& service, HttpOptions options)
    : service_(service),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() = default;

void HttpServer::install_routes() {
  httplib::Server& s = *server_;

  s.Get("/api/predictions", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(to_json(service_.get_predictions()), kJson); });
  });

  s.Get(R"(/api/explanations/([^/]+))",
        [this](const httplib::Request& req, httplib::Response& res) {
          guarded(res, [&] {
            const std::string& id_text = req.matches[1];
            std::size_t row_id = 0;
            const auto [ptr, ec] =
                std::from_chars(id_text.data(), id_text.data() + id_text.size(), row_id);
            if (ec != std::errc() || ptr != id_text.data() + id_text.size()) {
              throw ServiceError(ServiceErrorCode::kRowNotFound,
                                 "row id '" + id_text + "' is not a row index");
            }
            const auto lookup = service_.get_explanation(
                row_id, req.has_param("method") ? req.get_param_value("method") : "");
            res.set_header("X-Cache", lookup.hit ? "hit" : "miss");
            res.set_content(*lookup.payload, kJson);
          });
        });

  s.Get("/api/scenario", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(to_json(service_.get_scenario()), kJson);
  });

  s.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(to_json(service_.health()), kJson);
  });

  s.Post("/api/refresh", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      service_.refresh();
      res.set_content(to_json(service_.health()), kJson);
    });
  });

  if (!options_.static_dir.empty() && std::filesystem::is_directory(options_.static_dir)) {
    s.set_mount_point("/", options_.static_dir);
  }

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    send_error(res, res.status, res.status == 404 ? "NotFound" : "HttpError",
               "no handler for " + req.method + " " + req.path);
    return httplib::Server::HandlerResponse::Handled;
  });
}

bool HttpServer::bind(int port) { return server_->bind_to_port(options_.host, port); }

int HttpServer::bind_any_port() { return server_->bind_to_any_port(options_.host); }

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace axai
