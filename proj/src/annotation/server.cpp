/*
 * Copyright 2026 The signemo Authors.
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

#include "signemo/annotation/server.hpp"

#include "httplib.h"
#include "signemo/util/strings.hpp"

namespace signemo::annotation {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

int status_for(const std::string& code) {
  if (code == "unknown_annotator" || code == "unknown_clip") return 404;
  if (code == "unauthorized") return 401;
  if (code == "not_served" || code == "incomplete" || code == "already_labeled") return 409;
  return 400;
}

void send_json(httplib::Response& res, const ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const std::string& code, const std::string& message) {
  ordered_json err{{"code", code}, {"message", message}};
  if (code == "invalid_key") err["keymap"] = keymap_json()["keys"];
  send_json(res, {{"error", err}}, status_for(code));
}

// Runs a handler, turning library errors into JSON error responses.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, "bad_request", e.what());
    }
  };
}

ordered_json progress_json(const Progress& p) { return {{"done", p.done}, {"total", p.total}}; }

}  // namespace

AnnotationServer::AnnotationServer(AnnotationService& service, ServerOptions options)
    : service_(service), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

AnnotationServer::~AnnotationServer() { stop(); }

void AnnotationServer::install_routes() {
  auto& s = *server_;
  s.Get("/api/keymap", guarded([](const httplib::Request&, httplib::Response& res) {
          send_json(res, keymap_json());
        }));

  s.Post("/api/session", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto body = json::parse(req.body);
           const auto id = body.at("annotator_id").get<std::string>();
           const auto token = service_.open_session(id);
           send_json(res, {{"annotator_id", id},
                           {"token", token},
                           {"progress", progress_json(service_.progress(id))}});
         }));

  s.Get("/api/session/:annotator/next",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto next = service_.next_task(req.path_params.at("annotator"));
          ordered_json body{{"done", !next.task.has_value()}};
          if (next.task) body["task"] = to_json(*next.task);
          body["progress"] = progress_json(next.progress);
          send_json(res, body);
        }));

  s.Get("/api/session/:annotator/task/:clip_id",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto& annotator = req.path_params.at("annotator");
          send_json(res, to_json(service_.task(annotator, req.path_params.at("clip_id"))));
        }));

  s.Post("/api/labels", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto body = json::parse(req.body);
           AnnotationEvent ev;
           ev.clip_id = body.at("clip_id").get<std::string>();
           ev.annotator_id = body.at("annotator_id").get<std::string>();
           const auto key = body.at("key_pressed").get<std::string>();
           if (key.size() != 1) {
             throw Error("invalid_key", "key_pressed must be a single character; valid keys: " +
                                            keymap_text());
           }
           ev.key_pressed = key[0];
           if (body.contains("attempt") && !body["attempt"].is_null()) {
             ev.attempt = body["attempt"].get<std::uint64_t>();
           }
           const auto token = body.value("token", req.get_header_value("X-Session-Token"));
           service_.progress(ev.annotator_id);  // throws for an unknown annotator
           if (!service_.check_token(ev.annotator_id, token)) {
             throw Error("unauthorized", "bad session token for '" + ev.annotator_id + "'");
           }
           if (body.contains("label") && !body["label"].is_null()) {
             const auto claimed = parse_emotion(body["label"].get<std::string>());
             if (emotion_for_key(ev.key_pressed) && claimed != *emotion_for_key(ev.key_pressed)) {
               throw ValidationError("label '" + std::string(to_string(claimed)) +
                                     "' does not match key '" + key + "'");
             }
           }
           const auto result = service_.submit_label(ev);
           send_json(res, {{"event", to_json(result.event)},
                           {"replaced", result.replaced},
                           {"duplicate", result.duplicate},
                           {"progress", progress_json(service_.progress(ev.annotator_id))}});
         }));

  s.Get("/api/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
          std::vector<std::string> ids;
          if (req.has_param("annotators")) {
            for (auto& p : util::split(req.get_param_value("annotators"), ',')) {
              if (!util::trim(p).empty()) ids.emplace_back(util::trim(p));
            }
          } else {
            ids = service_.annotators();
          }
          const auto partial_param = req.get_param_value("partial");
          const bool partial = partial_param == "1" || partial_param == "true";
          send_json(res, to_json(service_.export_annotations(ids, partial)));
        }));

  if (!options_.media_dir.empty()) s.set_mount_point("/media", options_.media_dir.string());
  if (!options_.static_dir.empty()) s.set_mount_point("/", options_.static_dir.string());
}

int AnnotationServer::bind() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  return port_;
}

void AnnotationServer::serve() { server_->listen_after_bind(); }

int AnnotationServer::start() {
  const int p = bind();
  thread_ = std::thread([this] { serve(); });
  server_->wait_until_ready();
  return p;
}

void AnnotationServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace signemo::annotation
