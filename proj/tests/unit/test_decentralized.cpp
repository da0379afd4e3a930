#include <doctest.h>

#include "swarmwatch/error.hpp"
#include "swarmwatch/gnn/decentralized.hpp"
#include "swarmwatch/protocol.hpp"

using namespace swarmwatch;
using namespace swarmwatch::gnn;

TEST_CASE("decentralized choices equal the centralized argmax") {
  for (std::size_t t = 0; t < 100; ++t) {
    const auto p = GnnParams::random(GnnShape{}, 500 + t % 7);
    const std::size_t na = 2 + t % 5, ng = std::max<std::size_t>(na, 4 + t % 7);
    const auto g = pad_ghost_goals(sample_graph(na, ng, 10, 21, t).graph, 10);
    const auto d = decentralized_infer(p, local_views(g));
    REQUIRE(d.choices == gnn_forward(p, g, MessagePrecision::kFloat32).choices());
  }
}

TEST_CASE("traffic counters follow the ring") {
  const auto p = GnnParams::random(GnnShape{}, 1);
  const auto g = pad_ghost_goals(sample_graph(5, 8, 10, 2, 0).graph, 10);
  const auto d = decentralized_infer(p, local_views(g));
  REQUIRE(d.traffic.size() == 5);
  const std::size_t frame = wire::kFrameHeaderBytes + 1 + 4 * 32;
  for (const auto& round : d.traffic) {
    REQUIRE(round.size() == 5);
    for (const auto& link : round) {
      CHECK(link.messages == 2);
      CHECK(link.hidden_bytes == 256);
      CHECK(link.frame_bytes == 2 * frame);
    }
  }
}

TEST_CASE("two-agent ring keeps both links apart") {
  const auto p = GnnParams::random(GnnShape{}, 3);
  for (std::size_t k = 0; k < 20; ++k) {
    const auto g = pad_ghost_goals(sample_graph(2, 3, 10, 4, k).graph, 10);
    CHECK(decentralized_infer(p, local_views(g)).choices == gnn_forward(p, g).choices());
  }
}

TEST_CASE("local views hold only local knowledge") {
  const auto g = sample_graph(4, 10, 3, 5, 0).graph;
  const auto views = local_views(g);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(views[i].candidates == g.candidates[i]);
    CHECK(views[i].costs == g.costs[i]);
    CHECK(views[i].left == g.left[i]);
    CHECK(views[i].right == g.right[i]);
  }
  auto bad = views;
  bad[0].right = 9;
  CHECK_THROWS_AS(decentralized_infer(GnnParams::random(GnnShape{}, 1), bad), Error);
}
