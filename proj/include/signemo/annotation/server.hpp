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

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "signemo/annotation/service.hpp"

namespace httplib {
class Server;
}

namespace signemo::annotation {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  /// Served under /media when set.
  std::filesystem::path media_dir;
  /// Served under / when set (the browser front end).
  std::filesystem::path static_dir;
};

/// JSON-over-HTTP front of an AnnotationService.
///
///   GET  /api/keymap
///   POST /api/session                    {"annotator_id"} -> {"annotator_id", "token"}
///   GET  /api/session/{annotator}/next   -> {"done", "task"?, "progress"}
///   GET  /api/session/{annotator}/task/{clip_id}   (revisit mode)
///   POST /api/labels                     AnnotationEvent fields + "token"
///   GET  /api/export?annotators=a,b&partial=1
///
/// Errors are {"error": {"code", "message"}} with a 4xx status.
class AnnotationServer {
 public:
  AnnotationServer(AnnotationService& service, ServerOptions options);
  ~AnnotationServer();

  /// Binds the socket and returns the bound port.
  int bind();
  /// Blocks until stop().
  void serve();
  /// bind() then serve() on a background thread.
  int start();
  void stop();
  int port() const { return port_; }

 private:
  void install_routes();

  AnnotationService& service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace signemo::annotation
