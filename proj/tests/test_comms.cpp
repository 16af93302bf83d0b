#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "swarm/comms.hpp"
#include "swarm/world.hpp"

using namespace swarm;

namespace {

// One wall cell spanning [8,12) on every axis; a and b sit on opposite sides.
struct WalledWorld {
  GroundTruthModel model{4.0};
  std::map<std::string, Vec3> blocked{{"a", {2, 10, 10}}, {"b", {18, 10, 10}}};
  std::map<std::string, Vec3> clear{{"a", {2, 10, 10}}, {"b", {2, 18, 10}}};

  WalledWorld() {
    model.set_occupied({2, 2, 2});
    blocked["GCS"] = {2, 10, 10};
    clear["GCS"] = {2, 10, 10};
  }
};

}  // namespace

TEST_CASE("messages flow only once line of sight holds") {
  WalledWorld w;
  CommBus bus(&w.model);
  bus.send("a", "b", MsgKind::PosePing, PosePing{}, 0);

  bus.deliver(w.blocked, 0);
  CHECK(bus.pending_total() == 1);
  CHECK(bus.take_inbox("b").empty());

  bus.deliver(w.clear, 1);
  CHECK(bus.pending_total() == 0);
  auto inbox = bus.take_inbox("b");
  REQUIRE(inbox.size() == 1);
  CHECK(inbox[0].from == "a");
  CHECK(inbox[0].sent_tick == 0);
  CHECK(bus.take_inbox("b").empty());  // drained
}

TEST_CASE("per-pair delivery preserves send order") {
  WalledWorld w;
  CommBus bus(&w.model);
  for (int i = 0; i < 3; ++i) bus.send("a", "b", MsgKind::PosePing, PosePing{}, i);
  bus.deliver(w.clear, 5);
  auto inbox = bus.take_inbox("b");
  REQUIRE(inbox.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(inbox[i].seq == i);
    CHECK(inbox[i].sent_tick == i);
  }
}

TEST_CASE("a message queued under occlusion arrives the tick sight returns") {
  WalledWorld w;
  CommBus bus(&w.model);
  bus.send("a", "b", MsgKind::InspectCmd, InspectCmd{}, 0);
  for (int tick = 0; tick < 9; ++tick) {
    bus.deliver(w.blocked, tick);
    CHECK(bus.pending_between("a", "b", MsgKind::InspectCmd) == 1);
  }
  bus.deliver(w.clear, 9);
  CHECK(bus.pending_between("a", "b", MsgKind::InspectCmd) == 0);
  REQUIRE(bus.trace().size() == 1);
  CHECK(bus.trace()[0].delivered_tick == 9);
  CHECK(bus.trace()[0].sent_tick == 0);
}

TEST_CASE("delivering to an unknown endpoint is an error") {
  WalledWorld w;
  CommBus bus(&w.model);
  bus.send("a", "ghost", MsgKind::PosePing, PosePing{}, 0);
  CHECK_THROWS_AS(bus.deliver(w.clear, 0), std::runtime_error);
}

TEST_CASE("every message is delivered or still queued, never lost") {
  WalledWorld w;
  CommBus bus(&w.model);
  bus.send("a", "b", MsgKind::PosePing, PosePing{}, 0);
  bus.send("b", "a", MsgKind::PosePing, PosePing{}, 0);
  bus.send("a", "GCS", MsgKind::DoneReport, DoneReport{}, 0);
  bus.deliver(w.blocked, 0);  // a-b blocked, a-GCS same position: clear
  CHECK(bus.sent_total() == 3);
  CHECK(bus.delivered_total() + bus.pending_total() == bus.sent_total());
  CHECK(bus.delivered_total() == 1);

  bus.deliver(w.clear, 1);
  CHECK(bus.delivered_total() == 3);
  CHECK(bus.pending_total() == 0);
  for (const auto& row : bus.trace()) CHECK(row.delivered_tick >= 0);
}

TEST_CASE("capture buffers keep only the best quality per defect") {
  WalledWorld w;
  CommBus bus(&w.model);
  bus.report_capture("a", {7, 0.4, 3, "a"});
  bus.report_capture("a", {7, 0.8, 4, "a"});
  bus.report_capture("a", {7, 0.6, 5, "a"});
  bus.report_capture("a", {9, 0.2, 5, "a"});
  CHECK(bus.buffered_fd_total() == 2);

  auto flushed = bus.flush_fd(w.clear, 10);
  REQUIRE(flushed.size() == 2);
  CHECK(flushed[0].defect_id == 7);
  CHECK(flushed[0].quality == 0.8);
  CHECK(flushed[1].defect_id == 9);
  CHECK(bus.buffered_fd_total() == 0);
}

TEST_CASE("capture buffers hold while the sender is occluded from the GCS") {
  WalledWorld w;
  CommBus bus(&w.model);
  // GCS on the far side of the wall from b.
  std::map<std::string, Vec3> poses{{"b", {18, 10, 10}}, {"GCS", {2, 10, 10}}};
  bus.report_capture("b", {1, 0.9, 2, "b"});
  CHECK(bus.flush_fd(poses, 3).empty());
  CHECK(bus.buffered_fd_total() == 1);

  poses["b"] = {2, 18, 10};  // back in sight
  auto flushed = bus.flush_fd(poses, 8);
  REQUIRE(flushed.size() == 1);
  CHECK(flushed[0].quality == 0.9);
  CHECK(flushed[0].agent == "b");
}

TEST_CASE("flushed captures appear in the message trace as reports") {
  WalledWorld w;
  CommBus bus(&w.model);
  bus.report_capture("a", {3, 0.5, 1, "a"});
  bus.flush_fd(w.clear, 6);
  REQUIRE(bus.trace().size() == 1);
  CHECK(bus.trace()[0].kind == MsgKind::FDReport);
  CHECK(bus.trace()[0].delivered_tick == 6);
  CHECK(bus.trace()[0].to == std::string(kGcsName));
}
