#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/sync/sync_service.hpp"

namespace httplib {
class Server;
struct Request;
struct Response;
}  // namespace httplib

namespace layoutminer {

// Upper bound for the long-poll wait_ms parameter.
inline constexpr long kMaxWaitMs = 30000;

// POST /scenarios, /screenshots, /widgets and the per-scenario events,
// changes, layout and pose_samples endpoints.
void add_sync_routes(httplib::Server& server, SyncService& service);

namespace http {

// Runs `fn`, turning thrown errors into {error_code, message} responses.
void respond(httplib::Response& res, const std::function<Json()>& fn, int success_status = 200);
int status_for(ErrorCode code) noexcept;
Json parse_body(const httplib::Request& req);
// Error(code) unless the parameter, when present, is a non-negative integer.
std::uint64_t query_uint(const httplib::Request& req, const char* name, std::uint64_t fallback,
                         ErrorCode code = ErrorCode::InvalidArgument);

}  // namespace http

}  // namespace layoutminer
