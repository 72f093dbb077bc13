// Copyright 2026 The edgeha Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// JSON-over-HTTP front end of the assistant service.
//
//   POST /sessions                  home config -> {session_id, devices}
//   POST /sessions/{id}/chat        {text} -> chat response
//   GET  /sessions/{id}/devices     device snapshot
//   GET  /sessions/{id}/events      ?cursor=N -> {events, next_cursor}
//   GET  /healthz
//   GET  /config
//
// Errors are {"error": {"class", "message"}}.

#ifndef EDGEHA_HTTP_API_HPP_
#define EDGEHA_HTTP_API_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "edgeha/assistant_service.hpp"

namespace edgeha {

struct HttpReply {
  int status = 200;
  std::string body;
};

// Routes one request. Never throws.
HttpReply dispatch(AssistantService& service, std::string_view method, std::string_view path,
                   const std::multimap<std::string, std::string>& query, std::string_view body);

class HttpServer {
 public:
  explicit HttpServer(AssistantService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and returns the port; port 0 picks a free one. Returns -1 on
  // failure.
  int bind(const std::string& host, int port);
  // Serves on the bound socket until stop(). Blocks.
  void serve();
  // bind + serve on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace edgeha

#endif  // EDGEHA_HTTP_API_HPP_
