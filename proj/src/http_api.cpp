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


#include "edgeha/http_api.hpp"

#include <charconv>
#include <vector>

#include <httplib.h>

namespace edgeha {

namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

HttpReply error_reply(int status, std::string_view cls, std::string_view message) {
  return {status, dump({{"error", {{"class", cls}, {"message", message}}}})};
}

int status_for(ServiceErrorKind kind) {
  switch (kind) {
    case ServiceErrorKind::kUnknownSession: return 404;
    case ServiceErrorKind::kInvalidHomeConfig:
    case ServiceErrorKind::kEmptyUtterance:
    case ServiceErrorKind::kBadRequest: return 400;
    case ServiceErrorKind::kBackendUnavailable: return 503;
  }
  return 500;
}

std::vector<std::string_view> segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) out.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

json devices_json(const std::vector<Device>& devices) {
  json out = json::array();
  for (const auto& d : devices) out.push_back(to_json(d));
  return out;
}

HttpReply route(AssistantService& service, std::string_view method, std::string_view path,
                const std::multimap<std::string, std::string>& query, std::string_view body) {
  const auto seg = segments(path);
  const bool get = method == "GET";
  const bool post = method == "POST";
  const auto wrong_method = [] { return error_reply(405, "MethodNotAllowed", "method not allowed"); };

  if (seg.size() == 1 && seg[0] == "healthz") {
    if (!get) return wrong_method();
    return {200, dump({{"status", "ok"}})};
  }
  if (seg.size() == 1 && seg[0] == "config") {
    if (!get) return wrong_method();
    return {200, dump(service.config())};
  }
  if (seg.size() == 1 && seg[0] == "sessions") {
    if (!post) return wrong_method();
    const std::string id = service.create_session(body);
    json devices = devices_json(service.get_devices(id));
    return {201, dump({{"session_id", id}, {"devices", std::move(devices)}})};
  }
  if (seg.size() == 3 && seg[0] == "sessions") {
    const std::string_view id = seg[1];
    if (seg[2] == "chat") {
      if (!post) return wrong_method();
      const json request = json::parse(body, nullptr, false);
      if (request.is_discarded() || !request.is_object() || !request.contains("text") ||
          !request["text"].is_string()) {
        throw ServiceError(ServiceErrorKind::kBadRequest, "body must be {\"text\": string}");
      }
      return {200, dump(to_json(service.handle_chat(id, request["text"].get<std::string>())))};
    }
    if (seg[2] == "devices") {
      if (!get) return wrong_method();
      json devices = devices_json(service.get_devices(id));
      return {200, dump({{"session_id", id}, {"devices", std::move(devices)}})};
    }
    if (seg[2] == "events") {
      if (!get) return wrong_method();
      std::uint64_t cursor = 0;
      if (auto it = query.find("cursor"); it != query.end()) {
        const std::string& v = it->second;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), cursor);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
          throw ServiceError(ServiceErrorKind::kBadRequest, "cursor must be a non-negative integer");
        }
      }
      json events = json::array();
      std::uint64_t next = cursor;
      for (const auto& e : service.events(id, cursor)) {
        events.push_back(to_json(e));
        next = e.sequence + 1;
      }
      return {200, dump({{"events", std::move(events)}, {"next_cursor", next}})};
    }
  }
  return error_reply(404, "NotFound", "no route for " + std::string(path));
}

}  // namespace

HttpReply dispatch(AssistantService& service, std::string_view method, std::string_view path,
                   const std::multimap<std::string, std::string>& query, std::string_view body) {
  try {
    return route(service, method, path, query, body);
  } catch (const ServiceError& e) {
    return error_reply(status_for(e.kind()), to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return error_reply(500, "Internal", e.what());
  } catch (...) {
    return error_reply(500, "Internal", "unknown failure");
  }
}

struct HttpServer::Impl {
  explicit Impl(AssistantService& s) : service(s) {}

  AssistantService& service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(AssistantService& service) : impl_(std::make_unique<Impl>(service)) {
  const auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const HttpReply reply = dispatch(impl_->service, req.method, req.path, query, req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  if (bound < 0) return bound;
  impl_->thread = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace edgeha
