#include "swarm/comms.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarm {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::MapShare: return "MapShare";
    case MsgKind::InspectCmd: return "InspectCmd";
    case MsgKind::DoneReport: return "DoneReport";
    case MsgKind::FDReport: return "FDReport";
    case MsgKind::TransferCmd: return "TransferCmd";
    case MsgKind::PosePing: return "PosePing";
  }
  return "?";
}

int CommBus::send(const std::string& from, const std::string& to, MsgKind kind,
                  Payload payload, int tick) {
  Message m;
  m.seq = next_seq_++;
  m.sent_tick = tick;
  m.from = from;
  m.to = to;
  m.kind = kind;
  m.payload = std::move(payload);
  trace_.push_back({m.seq, tick, -1, from, to, kind});
  pending_.push_back(std::move(m));
  return pending_.back().seq;
}

void CommBus::deliver(const std::map<std::string, Vec3>& positions, int tick) {
  std::vector<Message> keep;
  keep.reserve(pending_.size());
  for (Message& m : pending_) {
    auto f = positions.find(m.from);
    auto t = positions.find(m.to);
    if (f == positions.end() || t == positions.end())
      throw std::runtime_error("CommBus::deliver: unknown endpoint " +
                               (f == positions.end() ? m.from : m.to));
    if (line_of_sight(f->second, t->second, *model_)) {
      trace_[m.seq].delivered_tick = tick;
      ++delivered_count_;
      inboxes_[m.to].push_back(std::move(m));
    } else {
      keep.push_back(std::move(m));
    }
  }
  pending_ = std::move(keep);
}

std::vector<Message> CommBus::take_inbox(const std::string& name) {
  auto it = inboxes_.find(name);
  if (it == inboxes_.end()) return {};
  std::vector<Message> out = std::move(it->second);
  inboxes_.erase(it);
  return out;
}

int CommBus::pending_between(const std::string& from, const std::string& to,
                             MsgKind kind) const {
  int n = 0;
  for (const Message& m : pending_)
    if (m.kind == kind && m.from == from && m.to == to) ++n;
  return n;
}

void CommBus::report_capture(const std::string& sender, const Capture& cap) {
  auto& slot = fd_buffers_[sender];
  auto it = slot.find(cap.defect_id);
  if (it == slot.end() || cap.quality > it->second.quality) slot[cap.defect_id] = cap;
}

std::vector<Capture> CommBus::flush_fd(const std::map<std::string, Vec3>& positions,
                                       int tick) {
  std::vector<Capture> delivered;
  auto gcs = positions.find(kGcsName);
  if (gcs == positions.end()) return delivered;
  for (auto& [sender, buffer] : fd_buffers_) {
    if (buffer.empty()) continue;
    auto pos = positions.find(sender);
    if (pos == positions.end()) continue;
    if (!line_of_sight(pos->second, gcs->second, *model_)) continue;
    for (auto& [defect, cap] : buffer) {
      int seq = next_seq_++;
      trace_.push_back({seq, cap.tick, tick, sender, kGcsName, MsgKind::FDReport});
      ++delivered_count_;
      delivered.push_back(cap);
    }
    buffer.clear();
  }
  return delivered;
}

int CommBus::buffered_fd_total() const {
  int n = 0;
  for (const auto& [_, buf] : fd_buffers_) n += static_cast<int>(buf.size());
  return n;
}

}  // namespace swarm
