#include "layoutminer/sync/service_host.hpp"

#include <httplib.h>

#include <thread>

#include "layoutminer/annotation/http_routes.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/sync/http_routes.hpp"

namespace layoutminer {

struct ServiceHost::Impl {
  httplib::Server server;
  std::thread thread;
};

ServiceHost::ServiceHost(EventStore& store, HostOptions options)
    : store_(store), options_(std::move(options)), sync_(store),
      annotations_(store, options_.categories_file.empty() ? CategoryList::app_store()
                                                          : CategoryList::from_file(options_.categories_file)) {}

ServiceHost::~ServiceHost() { stop(); }

void ServiceHost::start() {
  if (impl_) return;
  impl_ = std::make_unique<Impl>();
  auto& server = impl_->server;
  const auto threads = options_.worker_threads;
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server.set_tcp_nodelay(true);
  server.set_keep_alive_max_count(1000);
  server.set_read_timeout(std::chrono::seconds(kMaxWaitMs / 1000 + 5));
  server.set_write_timeout(std::chrono::seconds(kMaxWaitMs / 1000 + 5));
  add_sync_routes(server, sync_);
  add_annotation_routes(server, annotations_, store_);

  int bound = 0;
  if (options_.port == 0) {
    bound = server.bind_to_any_port(options_.bind_address);
  } else {
    bound = server.bind_to_port(options_.bind_address, options_.port) ? options_.port : -1;
  }
  if (bound <= 0) {
    impl_.reset();
    throw Error(ErrorCode::IoError, "cannot listen on " + options_.bind_address + ":" +
                                        std::to_string(options_.port));
  }
  port_ = static_cast<std::uint16_t>(bound);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ServiceHost::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_.reset();
}

std::string ServiceHost::base_url() const {
  return "http://" + options_.bind_address + ":" + std::to_string(port_);
}

}  // namespace layoutminer
