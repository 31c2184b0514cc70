#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "layoutminer/core/types.hpp"
#include "layoutminer/store/event_store.hpp"
#include "layoutminer/sync/sync_service.hpp"

namespace layoutminer {

// The slice of the sync protocol the simulated clients speak.
class SyncEndpoint {
 public:
  virtual ~SyncEndpoint() = default;

  virtual void create_scenario(const ScenarioKey& scenario) = 0;
  virtual ScreenshotId create_screenshot(const NewScreenshot& request) = 0;
  virtual WidgetId create_widget(const NewWidget& request) = 0;
  virtual Seq place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                    std::optional<TimestampMs> at) = 0;
  virtual Seq adjust_last(const SessionContext& ctx, const Pose& pose, std::optional<TimestampMs> at) = 0;
  virtual Seq reselect(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                       std::optional<TimestampMs> at) = 0;
  virtual void pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at) = 0;
  virtual ChangeBatch changes(const ScenarioKey& scenario, Seq since_seq, std::chrono::milliseconds wait) = 0;
  virtual Layout layout(const ScenarioKey& scenario) = 0;
};

// In-process endpoint calling a SyncService directly.
class LocalEndpoint final : public SyncEndpoint {
 public:
  explicit LocalEndpoint(SyncService& service) : service_(service) {}

  void create_scenario(const ScenarioKey& scenario) override;
  ScreenshotId create_screenshot(const NewScreenshot& request) override;
  WidgetId create_widget(const NewWidget& request) override;
  Seq place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
            std::optional<TimestampMs> at) override;
  Seq adjust_last(const SessionContext& ctx, const Pose& pose, std::optional<TimestampMs> at) override;
  Seq reselect(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
               std::optional<TimestampMs> at) override;
  void pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at) override;
  ChangeBatch changes(const ScenarioKey& scenario, Seq since_seq, std::chrono::milliseconds wait) override;
  Layout layout(const ScenarioKey& scenario) override;

 private:
  SyncService& service_;
};

// HTTP endpoint. Connection failures raise Error(Unreachable); service errors
// are rethrown with the server's error code.
class HttpEndpoint final : public SyncEndpoint {
 public:
  explicit HttpEndpoint(const std::string& base_url);
  ~HttpEndpoint() override;

  void create_scenario(const ScenarioKey& scenario) override;
  ScreenshotId create_screenshot(const NewScreenshot& request) override;
  WidgetId create_widget(const NewWidget& request) override;
  Seq place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
            std::optional<TimestampMs> at) override;
  Seq adjust_last(const SessionContext& ctx, const Pose& pose, std::optional<TimestampMs> at) override;
  Seq reselect(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
               std::optional<TimestampMs> at) override;
  void pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at) override;
  ChangeBatch changes(const ScenarioKey& scenario, Seq since_seq, std::chrono::milliseconds wait) override;
  Layout layout(const ScenarioKey& scenario) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace layoutminer
