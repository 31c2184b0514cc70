#include "layoutminer/annotation/http_routes.hpp"

#include <httplib.h>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"
#include "layoutminer/reconstruct/image_info.hpp"
#include "layoutminer/reconstruct/scene.hpp"
#include "layoutminer/sync/http_routes.hpp"

namespace layoutminer {

namespace {

constexpr std::string_view kFilterPrefix = "filter.";

WidgetQuery parse_query(const httplib::Request& req) {
  WidgetQuery query;
  if (req.has_param("q")) query.q = req.get_param_value("q");
  for (const auto& [name, value] : req.params) {
    if (name.rfind(kFilterPrefix, 0) != 0) continue;
    const auto field = name.substr(kFilterPrefix.size());
    auto& values = query.filters[field];
    if (!value.empty()) values.insert(value);
  }
  if (req.has_param("sort")) {
    const auto sort = req.get_param_value("sort");
    const auto colon = sort.find(':');
    query.sort_field = sort.substr(0, colon);
    if (colon != std::string::npos) {
      const auto dir = sort.substr(colon + 1);
      if (dir != "asc" && dir != "desc") {
        throw Error(ErrorCode::InvalidSortField, "sort direction must be asc or desc");
      }
      query.descending = dir == "desc";
    }
  }
  query.offset = http::query_uint(req, "offset", 0, ErrorCode::InvalidPage);
  query.limit = http::query_uint(req, "limit", kDefaultPageLimit, ErrorCode::InvalidPage);
  return query;
}

std::string content_type_of(std::string_view bytes) {
  if (bytes.substr(0, 4) == "\x89PNG") return "image/png";
  if (bytes.substr(0, 3) == "GIF") return "image/gif";
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFF &&
      static_cast<unsigned char>(bytes[1]) == 0xD8)
    return "image/jpeg";
  return "application/octet-stream";
}

}  // namespace

void add_annotation_routes(httplib::Server& server, AnnotationService& service, EventStore& store) {
  server.Get("/api/widgets", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] { return to_json(service.query_widgets(parse_query(req))); });
  });

  server.Get(R"(/api/widgets/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] {
      const WidgetId id = req.matches[1];
      const auto widget = store.widget(id);
      if (!widget) throw Error(ErrorCode::UnknownWidget, "unknown widget " + id);
      const auto annotation = store.annotation(id);
      Json placements = Json::array();
      for (const auto& key : store.scenarios()) {
        const auto layout = fold_events(key, store.events(key));
        const auto it = layout.placements.find(id);
        if (it != layout.placements.end()) {
          placements.push_back({{"scenario", to_json(key)}, {"pose", to_json(it->second)}});
        }
      }
      return Json{{"widget", to_json(*widget)},
                  {"annotation", annotation ? to_json(*annotation) : Json(nullptr)},
                  {"placements", std::move(placements)}};
    });
  });

  server.Put(R"(/api/widgets/([^/]+)/annotation)", [&](const httplib::Request& req, httplib::Response& res) {
    const WidgetId id = req.matches[1];
    http::respond(res, [&] {
      auto body = http::parse_body(req);
      if (!body.contains("expected_version") || !body["expected_version"].is_number_unsigned()) {
        throw Error(ErrorCode::InvalidArgument, "expected_version must be a non-negative integer");
      }
      const auto expected = body["expected_version"].get<std::uint64_t>();
      body.erase("expected_version");
      body.erase("version");
      body["widget_id"] = id;
      service.upsert_annotation(id, annotation_from_json(body), expected);
      return to_json(*store.annotation(id));
    });
    // A conflict carries the stored annotation so the caller can merge.
    if (res.status == 409) {
      auto body = Json::parse(res.body);
      const auto current = store.annotation(id);
      body["current"] = current ? to_json(*current) : Json(nullptr);
      res.set_content(body.dump(), "application/json");
    }
  });

  server.Get("/api/suggest", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] {
      const auto field = req.get_param_value("field");
      const auto prefix = req.get_param_value("prefix");
      const auto k = http::query_uint(req, "k", 10);
      if (k < 1 || k > kMaxPageLimit) throw Error(ErrorCode::InvalidArgument, "k must be between 1 and 500");
      Json values = Json::array();
      for (const auto& s : service.suggest(field, prefix, k)) {
        values.push_back({{"value", s.value}, {"count", s.count}});
      }
      return Json{{"field", field}, {"prefix", prefix}, {"suggestions", std::move(values)}};
    });
  });

  server.Get("/api/summary", [&](const httplib::Request&, httplib::Response& res) {
    http::respond(res, [&] { return service.summary(); });
  });

  server.Get("/api/categories", [&](const httplib::Request&, httplib::Response& res) {
    http::respond(res, [&] { return Json{{"categories", service.categories().labels()}}; });
  });

  server.Get("/api/scenarios", [&](const httplib::Request&, httplib::Response& res) {
    http::respond(res, [&] {
      Json list = Json::array();
      for (const auto& key : store.scenarios()) {
        const auto layout = fold_events(key, store.events(key));
        Json entry = to_json(key);
        entry["events"] = layout.as_of_seq;
        entry["widgets"] = layout.placements.size();
        list.push_back(std::move(entry));
      }
      return Json{{"scenarios", std::move(list)}};
    });
  });

  server.Get(R"(/api/scenes/([^/]+)/([^/]+)/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    http::respond(res, [&] {
      const ScenarioKey key{req.matches[1], req.matches[2], req.matches[3]};
      SceneOptions options;
      if (req.has_param("quad_width_m")) {
        try {
          options.quad_width_m = std::stod(req.get_param_value("quad_width_m"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidArgument, "quad_width_m must be a number");
        }
      }
      options.flip_normals = req.get_param_value("flip_normals") == "true";
      if (req.get_param_value("steps") == "true") {
        Json scenes = Json::array();
        for (const auto& scene : step_history(store, key, options)) scenes.push_back(to_json(scene));
        return Json{{"steps", std::move(scenes)}};
      }
      std::optional<Seq> as_of;
      if (req.has_param("as_of")) as_of = http::query_uint(req, "as_of", 0);
      return to_json(export_scene(store, key, as_of, options));
    });
  });

  server.Get(R"(/api/images/([0-9a-f]{64}))", [&](const httplib::Request& req, httplib::Response& res) {
    const auto bytes = store.get_blob(req.matches[1]);
    if (!bytes) {
      http::respond(res, [&]() -> Json {
        throw Error(ErrorCode::MissingBlob, "no blob " + std::string(req.matches[1]));
      });
      return;
    }
    res.set_header("Cache-Control", "public, max-age=31536000, immutable");
    res.set_content(*bytes, content_type_of(*bytes));
  });
}

}  // namespace layoutminer
