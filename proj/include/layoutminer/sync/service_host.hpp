#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "layoutminer/annotation/annotation_service.hpp"
#include "layoutminer/store/event_store.hpp"
#include "layoutminer/sync/sync_service.hpp"

namespace layoutminer {

struct HostOptions {
  std::string bind_address = "127.0.0.1";
  // 0 picks a free port.
  std::uint16_t port = 0;
  std::size_t worker_threads = 32;
  // Empty uses the built-in category list.
  std::filesystem::path categories_file;
};

// Serves the sync and annotation HTTP APIs for one store on a background
// thread until stopped or destroyed.
class ServiceHost {
 public:
  ServiceHost(EventStore& store, HostOptions options = {});
  ~ServiceHost();
  ServiceHost(const ServiceHost&) = delete;
  ServiceHost& operator=(const ServiceHost&) = delete;

  // Binds and starts serving; Error(IoError) when the port is unavailable.
  void start();
  void stop();

  std::uint16_t port() const noexcept { return port_; }
  std::string base_url() const;

  SyncService& sync() noexcept { return sync_; }
  AnnotationService& annotations() noexcept { return annotations_; }

 private:
  struct Impl;

  EventStore& store_;
  HostOptions options_;
  SyncService sync_;
  AnnotationService annotations_;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
};

}  // namespace layoutminer
