#include <gtest/gtest.h>

#include <cmath>

#include "disambig/error.h"
#include "disambig/temporal_graph.h"
#include "support.h"

using namespace disambig;
using testing_support::Rng;

namespace {

std::vector<TimedCount> history(const TemporalGraph& g, const std::string& a,
                                const std::string& b) {
  const auto* e = g.find_edge(g.index_of(a), g.index_of(b));
  if (!e) return {};
  return e->counts;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(BuildGraph, CliqueExpansion) {
  const std::vector<CollabEvent> events{{"p1", 2014, {"a", "b", "c"}},
                                        {"p2", 2013, {"a", "b"}}};
  const auto g = build_graph(events);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(history(g, "a", "b"),
            (std::vector<TimedCount>{{2013, 1}, {2014, 1}}));
  EXPECT_EQ(history(g, "b", "a"), history(g, "a", "b"));
  EXPECT_EQ(history(g, "a", "c"), (std::vector<TimedCount>{{2014, 1}}));
  EXPECT_EQ(history(g, "b", "c"), (std::vector<TimedCount>{{2014, 1}}));
}

TEST(BuildGraph, Empty) {
  const auto g = build_graph({});
  EXPECT_EQ(g.num_nodes(), 0u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(BuildGraph, SingletonEventKeepsNodeWithoutEdges) {
  const std::vector<CollabEvent> events{{"p1", 2000, {"solo"}}};
  const auto g = build_graph(events);
  EXPECT_EQ(g.num_nodes(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
  EXPECT_EQ(g.num_events(), 1u);
  EXPECT_EQ(g.events_of(0).size(), 1u);
}

TEST(BuildGraph, PairCountsMatchBruteForce) {
  Rng rng(11);
  const auto events = testing_support::random_events(rng, 50, 1000, 6, 1990, 2020);
  const auto g = build_graph(events);
  const auto expected = testing_support::count_pairs(events);
  ASSERT_EQ(g.num_edges(), expected.size());
  for (const auto& [pair, times] : expected) {
    const auto h = history(g, pair.first, pair.second);
    std::vector<TimedCount> want;
    std::uint64_t total = 0;
    for (const auto& [t, n] : times) {
      want.push_back({t, static_cast<std::uint64_t>(n)});
      total += n;
    }
    EXPECT_EQ(h, want);
    EXPECT_EQ(g.find_edge(g.index_of(pair.first), g.index_of(pair.second))
                  ->total_count(),
              total);
  }
}

TEST(BuildGraph, Rejections) {
  const std::vector<CollabEvent> dup{{"p1", 1, {"a", "b"}}, {"p1", 2, {"c"}}};
  EXPECT_EQ(code_of([&] { build_graph(dup); }), ErrorCode::kDuplicateId);
  try {
    build_graph(dup);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("p1"), std::string::npos);
  }
  const std::vector<CollabEvent> empty{{"p1", 1, {}}};
  EXPECT_EQ(code_of([&] { build_graph(empty); }), ErrorCode::kInvalidArgument);
  const std::vector<CollabEvent> twice{{"p1", 1, {"a", "a"}}};
  EXPECT_EQ(code_of([&] { build_graph(twice); }), ErrorCode::kInvalidArgument);
}

TEST(DecayWeight, WorkedExample) {
  const std::vector<TimedCount> h{{2014, 2}, {2013, 3}, {2010, 4}};
  EXPECT_NEAR(decay_weight(h, 2014, 5.0), 6.25, 0.01);
}

TEST(DecayWeight, AllAtTmaxIsTotalCount) {
  const std::vector<TimedCount> h{{2014, 2}, {2014, 5}};
  EXPECT_DOUBLE_EQ(decay_weight(h, 2014, 5.0), 7.0);
}

TEST(DecayWeight, UnitTau) {
  const std::vector<TimedCount> h{{2014, 1}, {2013, 1}};
  EXPECT_NEAR(decay_weight(h, 2014, 1.0), 1.3679, 1e-4);
}

TEST(DecayWeight, Rejections) {
  const std::vector<TimedCount> h{{2015, 1}};
  EXPECT_THROW(decay_weight(h, 2014, 5.0), Error);
  EXPECT_THROW(decay_weight(h, 2015, 0.0), Error);
}

TEST(DecayWeight, MonotoneInCounts) {
  std::vector<TimedCount> h{{2010, 1}, {2012, 2}};
  const double before = decay_weight(h, 2012, 5.0);
  h[0].count = 4;
  EXPECT_GT(decay_weight(h, 2012, 5.0), before);
}

TEST(EgoNetwork, Star) {
  const std::vector<CollabEvent> events{{"1", 1, {"a", "b"}},
                                        {"2", 1, {"a", "c"}},
                                        {"3", 1, {"a", "d"}},
                                        {"4", 1, {"x", "b"}}};
  const auto g = build_graph(events);
  const auto ego = ego_network(g, g.index_of("a"), 5.0);
  EXPECT_EQ(ego.size(), 4u);
  EXPECT_EQ(ego.edges().size(), 3u);
  EXPECT_EQ(ego.ego(), g.index_of("a"));
}

TEST(EgoNetwork, Triangle) {
  const std::vector<CollabEvent> events{
      {"1", 1, {"b", "a"}}, {"2", 1, {"a", "c"}}, {"3", 1, {"b", "c"}}};
  const auto g = build_graph(events);
  const auto ego = ego_network(g, g.index_of("a"), 5.0);
  EXPECT_EQ(ego.size(), 3u);
  EXPECT_EQ(ego.edges().size(), 3u);
  for (const auto& e : ego.edges()) EXPECT_GT(e.weight, 0.0);
}

TEST(EgoNetwork, Errors) {
  const std::vector<CollabEvent> events{{"1", 1, {"a", "b"}},
                                        {"2", 1, {"lonely"}}};
  const auto g = build_graph(events);
  EXPECT_EQ(code_of([&] { ego_network(g, 99, 5.0); }), ErrorCode::kUnknownNode);
  EXPECT_EQ(code_of([&] { g.index_of("nobody"); }), ErrorCode::kUnknownNode);
  EXPECT_EQ(code_of([&] { ego_network(g, g.index_of("lonely"), 5.0); }),
            ErrorCode::kNoNeighbors);
  EXPECT_EQ(code_of([&] { ego_network(g, g.index_of("a"), -1.0); }),
            ErrorCode::kInvalidArgument);
}

// Edge set and weights against a scan of the raw events restricted to the ego's
// neighborhood, with t_max taken over that neighborhood.
TEST(EgoNetwork, InducedSubgraphMatchesBruteForce) {
  Rng rng(5);
  for (int trial = 0; trial < 120; ++trial) {
    const int nodes = 5 + static_cast<int>(rng() % 46);
    const auto events = testing_support::random_events(
        rng, nodes, 3 * nodes, 4, 2000, 2015);
    const auto g = build_graph(events);
    const std::string ego_name = events.front().participants.front();
    const auto nb = testing_support::neighbors_of(events, ego_name);
    if (nb.empty()) continue;
    const auto ego = ego_network(g, g.index_of(ego_name), 4.0);

    std::vector<std::string> members{ego_name};
    for (auto m : ego.members().subspan(1)) members.push_back(g.name(m));
    ASSERT_EQ(std::set<std::string>(members.begin() + 1, members.end()), nb);
    const auto dense = testing_support::dense_ego(events, members, 4.0);

    std::size_t expected_edges = 0;
    for (std::uint32_t a = 0; a < members.size(); ++a) {
      for (std::uint32_t b = a + 1; b < members.size(); ++b) {
        if (dense.w[a][b] > 0.0) ++expected_edges;
        EXPECT_NEAR(ego.weight(a, b), dense.w[a][b], 1e-9 * (1 + dense.w[a][b]));
      }
      if (a > 0) EXPECT_GT(ego.weight(0, a), 0.0);
    }
    EXPECT_EQ(ego.edges().size(), expected_edges);
  }
}

TEST(EgoNetwork, SymmetricTimeShiftAndLimit) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto events = testing_support::random_events(rng, 20, 60, 4, 1980, 2000);
    const auto g = build_graph(events);
    auto shifted = events;
    for (auto& e : shifted) e.time += 37;
    const auto gs = build_graph(shifted);
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
      if (g.degree(v) == 0) continue;
      const auto ego = ego_network(g, v, 5.0);
      const auto ego_s = ego_network(gs, v, 5.0);
      const auto ego_inf = ego_network(g, v, 1e9);
      for (std::uint32_t a = 0; a < ego.size(); ++a) {
        for (std::uint32_t b = 0; b < ego.size(); ++b) {
          EXPECT_DOUBLE_EQ(ego.weight(a, b), ego.weight(b, a));
          EXPECT_NEAR(ego.weight(a, b), ego_s.weight(a, b), 1e-12);
          double raw = 0.0;
          if (a != b) {
            if (const auto* e = g.find_edge(ego.members()[a], ego.members()[b])) {
              raw = static_cast<double>(e->total_count());
            }
          }
          EXPECT_NEAR(ego_inf.weight(a, b), raw, 1e-6 * std::max(1.0, raw));
        }
      }
    }
  }
}

TEST(EgoNetwork, ScaledAndFromEdges) {
  const auto ego = EgoNetwork::from_edges({7, 8, 9}, {{0, 1, 2.0}, {1, 2, 3.0}});
  EXPECT_EQ(ego.ego(), 7u);
  EXPECT_EQ(ego.local_index(9), std::optional<std::uint32_t>(2));
  EXPECT_FALSE(ego.local_index(3).has_value());
  const auto s = ego.scaled(10.0);
  EXPECT_DOUBLE_EQ(s.weight(2, 1), 30.0);
  EXPECT_DOUBLE_EQ(s.weight(0, 2), 0.0);
}
