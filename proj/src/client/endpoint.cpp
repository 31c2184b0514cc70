#include "layoutminer/client/endpoint.hpp"

#include <httplib.h>

#include <cstdio>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/store/hash.hpp"
#include "layoutminer/sync/http_routes.hpp"

namespace layoutminer {

void LocalEndpoint::create_scenario(const ScenarioKey& scenario) { service_.create_scenario(scenario); }

ScreenshotId LocalEndpoint::create_screenshot(const NewScreenshot& request) {
  return service_.create_screenshot(request);
}

WidgetId LocalEndpoint::create_widget(const NewWidget& request) { return service_.create_widget(request); }

Seq LocalEndpoint::place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                         std::optional<TimestampMs> at) {
  return service_.handle_place(ctx, widget_id, pose, at);
}

Seq LocalEndpoint::adjust_last(const SessionContext& ctx, const Pose& pose, std::optional<TimestampMs> at) {
  return service_.handle_adjust_last(ctx, pose, at);
}

Seq LocalEndpoint::reselect(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                            std::optional<TimestampMs> at) {
  return service_.handle_reselect_update(ctx, widget_id, pose, at);
}

void LocalEndpoint::pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at) {
  service_.handle_pose_sample(ctx, pose, at);
}

ChangeBatch LocalEndpoint::changes(const ScenarioKey& scenario, Seq since_seq, std::chrono::milliseconds wait) {
  return service_.handle_changes(scenario, since_seq, wait);
}

Layout LocalEndpoint::layout(const ScenarioKey& scenario) { return service_.layout(scenario); }

namespace {

std::string percent_encode(const std::string& text) {
  std::string out;
  for (const unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

std::string scenario_path(const ScenarioKey& key, const char* leaf) {
  return "/scenarios/" + percent_encode(key.participant_id) + "/" + percent_encode(key.environment) + "/" +
         percent_encode(key.task) + "/" + leaf;
}

Json session_body(const SessionContext& ctx) {
  return Json{{"client_id", ctx.client_id}, {"role", to_string(ctx.role)}};
}

}  // namespace

struct HttpEndpoint::Impl {
  explicit Impl(const std::string& base_url) : url(base_url), client(base_url) {
    client.set_url_encode(false);
    client.set_connection_timeout(std::chrono::seconds(5));
    client.set_read_timeout(std::chrono::milliseconds(kMaxWaitMs) + std::chrono::seconds(10));
    client.set_keep_alive(true);
    client.set_tcp_nodelay(true);
  }

  Json check(const httplib::Result& res) {
    if (!res) {
      throw Error(ErrorCode::Unreachable, url + ": " + httplib::to_string(res.error()));
    }
    const auto body = Json::parse(res->body, nullptr, false);
    if (res->status >= 200 && res->status < 300 && !body.is_discarded()) return body;
    if (!body.is_discarded() && body.is_object() && body.contains("error_code")) {
      const auto code = parse_error_code(body.value("error_code", ""));
      if (code) throw Error(*code, body.value("message", ""));
    }
    throw Error(ErrorCode::IoError, url + " answered HTTP " + std::to_string(res->status));
  }

  Json post(const std::string& path, const Json& body) {
    return check(client.Post(path, body.dump(), "application/json"));
  }

  Json get(const std::string& path) { return check(client.Get(path)); }

  std::string url;
  httplib::Client client;
};

HttpEndpoint::HttpEndpoint(const std::string& base_url) : impl_(std::make_unique<Impl>(base_url)) {
  if (!impl_->client.is_valid()) throw Error(ErrorCode::InvalidArgument, "invalid service URL '" + base_url + "'");
}

HttpEndpoint::~HttpEndpoint() = default;

void HttpEndpoint::create_scenario(const ScenarioKey& scenario) { impl_->post("/scenarios", to_json(scenario)); }

ScreenshotId HttpEndpoint::create_screenshot(const NewScreenshot& request) {
  Json body{{"participant_id", request.participant_id}, {"image_b64", base64_encode(request.image)},
            {"redacted", request.redacted}};
  if (request.id) body["screenshot_id"] = *request.id;
  if (request.app_hint) body["app_hint"] = *request.app_hint;
  if (request.captured_at) body["captured_at_ms"] = *request.captured_at;
  return impl_->post("/screenshots", body).at("screenshot_id").get<std::string>();
}

WidgetId HttpEndpoint::create_widget(const NewWidget& request) {
  Json body{{"screenshot_id", request.screenshot_id}, {"crop", to_json(request.crop)},
            {"image_b64", base64_encode(request.image)}};
  if (request.id) body["widget_id"] = *request.id;
  if (request.created_at) body["created_at_ms"] = *request.created_at;
  return impl_->post("/widgets", body).at("widget_id").get<std::string>();
}

Seq HttpEndpoint::place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                        std::optional<TimestampMs> at) {
  auto body = session_body(ctx);
  body["kind"] = "add";
  body["widget_id"] = widget_id;
  body["pose"] = to_json(pose);
  if (at) body["at_ms"] = *at;
  return impl_->post(scenario_path(ctx.scenario, "events"), body).at("seq").get<Seq>();
}

Seq HttpEndpoint::adjust_last(const SessionContext& ctx, const Pose& pose, std::optional<TimestampMs> at) {
  auto body = session_body(ctx);
  body["kind"] = "adjust_last";
  body["pose"] = to_json(pose);
  if (at) body["at_ms"] = *at;
  return impl_->post(scenario_path(ctx.scenario, "events"), body).at("seq").get<Seq>();
}

Seq HttpEndpoint::reselect(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                           std::optional<TimestampMs> at) {
  auto body = session_body(ctx);
  body["kind"] = "update";
  body["widget_id"] = widget_id;
  body["pose"] = to_json(pose);
  if (at) body["at_ms"] = *at;
  return impl_->post(scenario_path(ctx.scenario, "events"), body).at("seq").get<Seq>();
}

void HttpEndpoint::pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at) {
  auto body = session_body(ctx);
  body["pose"] = to_json(pose);
  body["at_ms"] = at;
  impl_->post(scenario_path(ctx.scenario, "pose_samples"), body);
}

ChangeBatch HttpEndpoint::changes(const ScenarioKey& scenario, Seq since_seq, std::chrono::milliseconds wait) {
  const auto path = scenario_path(scenario, "changes") + "?since=" + std::to_string(since_seq) +
                    "&wait_ms=" + std::to_string(std::max<long long>(0, wait.count()));
  const auto body = impl_->get(path);
  ChangeBatch batch;
  batch.max_seq = body.at("max_seq").get<Seq>();
  for (const auto& e : body.at("events")) batch.events.push_back(event_from_json(e, scenario));
  return batch;
}

Layout HttpEndpoint::layout(const ScenarioKey& scenario) {
  return layout_from_json(impl_->get(scenario_path(scenario, "layout")));
}

}  // namespace layoutminer
