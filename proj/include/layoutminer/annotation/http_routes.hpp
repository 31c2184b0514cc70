#pragma once

#include "layoutminer/annotation/annotation_service.hpp"

namespace httplib {
class Server;
}

namespace layoutminer {

// /api/widgets, /api/widgets/{id}, /api/widgets/{id}/annotation,
// /api/suggest, /api/summary, /api/categories, /api/scenarios,
// /api/scenes/{p}/{env}/{task} and /api/images/{hash}.
void add_annotation_routes(httplib::Server& server, AnnotationService& service, EventStore& store);

}  // namespace layoutminer
