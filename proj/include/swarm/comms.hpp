#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/planner.hpp"
#include "swarm/sensors.hpp"

namespace swarm {

inline constexpr const char* kGcsName = "GCS";

enum class MsgKind { MapShare, InspectCmd, DoneReport, FDReport, TransferCmd, PosePing };

const char* msg_kind_name(MsgKind k);

struct MapShare {
  std::vector<std::pair<std::int64_t, std::uint8_t>> cells;  // packed index, attrs
};

struct InspectCmd {
  int box_id = -1;
  Region region;
  std::vector<int> layers;  // inspection schedule within the region
};

struct DoneReport {
  int box_id = -1;
  int region_lo = -1;
};

struct TransferCmd {
  int path_index = -1;  // next task-area entry; ignored when go_home
  bool go_home = false;
};

struct PosePing {
  Vec3 pose;
  int mode = 0;
};

using Payload = std::variant<MapShare, InspectCmd, DoneReport, Capture, TransferCmd, PosePing>;

struct Message {
  int seq = -1;
  int sent_tick = -1;
  std::string from;
  std::string to;
  MsgKind kind = MsgKind::PosePing;
  Payload payload;
};

// LOS-gated store-and-forward bus. Regular messages queue until sender and
// recipient are in line of sight during a deliver() call; FDReports to the
// GCS are buffered at the sender (best quality per defect) and flushed
// whenever sender-GCS LOS holds.
class CommBus {
 public:
  explicit CommBus(const GroundTruthModel* model) : model_(model) {}

  // Returns the assigned sequence number.
  int send(const std::string& from, const std::string& to, MsgKind kind,
           Payload payload, int tick);

  // Moves every queued message whose endpoints are currently in LOS to the
  // recipient inbox, preserving send order.
  void deliver(const std::map<std::string, Vec3>& positions, int tick);

  // Drains the recipient's inbox.
  std::vector<Message> take_inbox(const std::string& name);

  // Queued messages from -> to of the given kind (delivery not yet possible).
  int pending_between(const std::string& from, const std::string& to, MsgKind kind) const;
  int pending_total() const { return static_cast<int>(pending_.size()); }
  int sent_total() const { return next_seq_; }
  int delivered_total() const { return delivered_count_; }

  // Best-quality-per-defect buffer of captures awaiting sender-GCS LOS.
  void report_capture(const std::string& sender, const Capture& cap);
  // Flushes buffers of every sender currently in LOS of the GCS; returns the
  // delivered captures in (sender, defect) order.
  std::vector<Capture> flush_fd(const std::map<std::string, Vec3>& positions, int tick);
  int buffered_fd_total() const;

  struct TraceRow {
    int seq;
    int sent_tick;
    int delivered_tick;  // -1 while undelivered
    std::string from, to;
    MsgKind kind;
  };
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  const GroundTruthModel* model_;
  int next_seq_ = 0;
  int delivered_count_ = 0;
  std::vector<Message> pending_;  // global send order; per-pair FIFO follows
  std::map<std::string, std::vector<Message>> inboxes_;
  std::map<std::string, std::map<int, Capture>> fd_buffers_;  // sender -> defect -> best
  std::vector<TraceRow> trace_;
};

}  // namespace swarm
