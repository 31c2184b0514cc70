#include "layoutminer/sync/http_routes.hpp"

#include <httplib.h>

#include <charconv>

#include "layoutminer/store/hash.hpp"

namespace layoutminer {

namespace http {

int status_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownScenario:
    case ErrorCode::UnknownWidget:
    case ErrorCode::MissingBlob:
      return 404;
    case ErrorCode::WrongRole:
      return 403;
    case ErrorCode::VersionConflict:
    case ErrorCode::DuplicateId:
    case ErrorCode::NoLastWidget:
      return 409;
    case ErrorCode::DanglingReference:
    case ErrorCode::UpdateBeforeAdd:
    case ErrorCode::TimestampRegression:
      return 422;
    case ErrorCode::StorageFull:
      return 507;
    case ErrorCode::IoError:
    case ErrorCode::StoreCorrupt:
    case ErrorCode::IntegrityError:
      return 500;
    default:
      return 400;
  }
}

void respond(httplib::Response& res, const std::function<Json()>& fn, int success_status) {
  Json body;
  try {
    body = fn();
    res.status = success_status;
  } catch (const Error& e) {
    res.status = status_for(e.code());
    body = {{"error_code", to_string(e.code())}, {"message", e.detail()}};
  } catch (const std::exception& e) {
    res.status = 500;
    body = {{"error_code", to_string(ErrorCode::IoError)}, {"message", e.what()}};
  }
  res.set_content(body.dump(), "application/json");
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  }
  return j;
}

std::uint64_t query_uint(const httplib::Request& req, const char* name, std::uint64_t fallback,
                         ErrorCode code) {
  if (!req.has_param(name)) return fallback;
  const auto text = req.get_param_value(name);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(code, std::string("query parameter '") + name + "' must be a non-negative integer");
  }
  return value;
}

}  // namespace http

namespace {

constexpr const char* kScenarioPath = R"(/scenarios/([^/]+)/([^/]+)/([^/]+))";

ScenarioKey path_scenario(const httplib::Request& req) {
  return ScenarioKey{req.matches[1], req.matches[2], req.matches[3]};
}

template <typename T>
std::optional<T> optional_field(const Json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("field '") + name + "' has the wrong type");
  }
}

template <typename T>
T required_field(const Json& j, const char* name) {
  auto value = optional_field<T>(j, name);
  if (!value) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + name + "'");
  return *value;
}

std::string decode_image(const std::string& b64) {
  auto bytes = base64_decode(b64);
  if (!bytes) throw Error(ErrorCode::InvalidArgument, "image_b64 is not valid base64");
  return std::move(*bytes);
}

// Accepts a JSON body with image_b64, or multipart with an `image` file and
// either a `metadata` JSON part or one part per field.
std::pair<Json, std::string> upload(const httplib::Request& req) {
  if (!req.is_multipart_form_data()) {
    auto j = http::parse_body(req);
    return {j, decode_image(required_field<std::string>(j, "image_b64"))};
  }
  if (!req.has_file("image")) throw Error(ErrorCode::InvalidArgument, "multipart upload needs an 'image' part");
  Json meta = Json::object();
  if (req.has_file("metadata")) {
    meta = Json::parse(req.get_file_value("metadata").content, nullptr, false);
    if (meta.is_discarded() || !meta.is_object()) {
      throw Error(ErrorCode::InvalidArgument, "metadata part must be a JSON object");
    }
  } else {
    for (const auto& [name, part] : req.files) {
      if (name == "image") continue;
      const auto parsed = Json::parse(part.content, nullptr, false);
      meta[name] = parsed.is_discarded() ? Json(part.content) : parsed;
    }
  }
  return {meta, req.get_file_value("image").content};
}

SessionContext session_of(const Json& body, const ScenarioKey& key) {
  SessionContext ctx;
  ctx.scenario = key;
  if (auto id = optional_field<std::string>(body, "client_id")) ctx.client_id = *id;
  if (auto role = optional_field<std::string>(body, "role")) {
    const auto parsed = parse_client_role(*role);
    if (!parsed) throw Error(ErrorCode::InvalidArgument, "role must be placement or preview");
    ctx.role = *parsed;
  }
  return ctx;
}

Json batch_json(const ChangeBatch& batch) {
  Json events = Json::array();
  for (const auto& e : batch.events) events.push_back(to_json(e));
  return {{"events", std::move(events)}, {"max_seq", batch.max_seq}};
}

}  // namespace

void add_sync_routes(httplib::Server& server, SyncService& service) {
  server.Post("/scenarios", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] {
      const auto key = scenario_from_json(http::parse_body(req));
      const auto outcome = service.create_scenario(key);
      return Json{{"ok", true}, {"created", outcome == PutOutcome::Created}};
    });
  });

  server.Post("/screenshots", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] {
      auto [meta, image] = upload(req);
      NewScreenshot shot;
      shot.id = optional_field<std::string>(meta, "screenshot_id");
      shot.participant_id = required_field<std::string>(meta, "participant_id");
      shot.image = std::move(image);
      shot.app_hint = optional_field<std::string>(meta, "app_hint");
      shot.captured_at = optional_field<TimestampMs>(meta, "captured_at_ms");
      shot.redacted = optional_field<bool>(meta, "redacted").value_or(false);
      const auto id = service.create_screenshot(shot);
      return Json{{"screenshot_id", id}, {"image_hash", service.store().screenshot(id)->image_ref}};
    });
  });

  server.Post("/widgets", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] {
      auto [meta, image] = upload(req);
      NewWidget widget;
      widget.id = optional_field<std::string>(meta, "widget_id");
      widget.screenshot_id = required_field<std::string>(meta, "screenshot_id");
      widget.crop = crop_from_json(required_field<Json>(meta, "crop"));
      widget.image = std::move(image);
      widget.created_at = optional_field<TimestampMs>(meta, "created_at_ms");
      const auto id = service.create_widget(widget);
      return Json{{"widget_id", id}, {"image_hash", service.store().widget(id)->image_ref}};
    });
  });

  server.Post(std::string(kScenarioPath) + "/events",
              [&](const httplib::Request& req, httplib::Response& res) {
                http::respond(res, [&] {
                  const auto body = http::parse_body(req);
                  const auto ctx = session_of(body, path_scenario(req));
                  const auto kind = required_field<std::string>(body, "kind");
                  const auto pose = pose_from_json(required_field<Json>(body, "pose"));
                  const auto at = optional_field<TimestampMs>(body, "at_ms");
                  Seq seq = 0;
                  if (kind == "add") {
                    seq = service.handle_place(ctx, required_field<std::string>(body, "widget_id"), pose, at);
                  } else if (kind == "update") {
                    seq = service.handle_reselect_update(ctx, required_field<std::string>(body, "widget_id"),
                                                         pose, at);
                  } else if (kind == "adjust_last") {
                    seq = service.handle_adjust_last(ctx, pose, at);
                  } else {
                    throw Error(ErrorCode::InvalidArgument, "kind must be add, update or adjust_last");
                  }
                  return Json{{"seq", seq}};
                });
              });

  server.Get(std::string(kScenarioPath) + "/changes",
             [&](const httplib::Request& req, httplib::Response& res) {
               http::respond(res, [&] {
                 const auto since = http::query_uint(req, "since", 0);
                 const auto wait = std::min<std::uint64_t>(http::query_uint(req, "wait_ms", 0), kMaxWaitMs);
                 return batch_json(service.handle_changes(path_scenario(req), since,
                                                          std::chrono::milliseconds(wait)));
               });
             });

  server.Get(std::string(kScenarioPath) + "/layout",
             [&](const httplib::Request& req, httplib::Response& res) {
               http::respond(res, [&] { return to_json(service.layout(path_scenario(req))); });
             });

  server.Post(std::string(kScenarioPath) + "/pose_samples",
              [&](const httplib::Request& req, httplib::Response& res) {
                http::respond(res, [&] {
                  const auto body = http::parse_body(req);
                  const auto ctx = session_of(body, path_scenario(req));
                  service.handle_pose_sample(ctx, pose_from_json(required_field<Json>(body, "pose")),
                                             required_field<TimestampMs>(body, "at_ms"));
                  return Json{{"ok", true}};
                });
              });
}

}  // namespace layoutminer
