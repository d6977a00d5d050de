#include "disambig/synth.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "disambig/error.h"

namespace disambig {
namespace {

using Rng = std::mt19937_64;

// Half-open range of year offsets.
struct Era {
  int begin = 0;
  int end = 0;
};

// Community structure and ego-event participant sets of one labeled node,
// before any timestamps are drawn. Members are numbered 0..num_members-1.
struct Blueprint {
  struct Link {
    int a, b;
    int community;  // -1 for a cross-community link
  };
  struct EgoEvent {
    int community;
    std::vector<int> members;
  };

  std::vector<std::vector<int>> communities;
  std::vector<Link> links;
  std::vector<EgoEvent> ego_events;
  int num_members = 0;
};

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Blueprint plant(const SynthConfig& cfg, const std::vector<Era>& eras,
                Rng& rng) {
  Blueprint bp;
  const int size = cfg.collaborators_per_entity;
  for (std::size_t c = 0; c < eras.size(); ++c) {
    std::vector<int> members(size);
    for (int i = 0; i < size; ++i) members[i] = bp.num_members++;

    // Spanning tree first so the community is connected, then ER pairs.
    std::vector<std::vector<bool>> linked(size, std::vector<bool>(size, false));
    for (int i = 1; i < size; ++i) {
      const int j = uniform_int(rng, 0, i - 1);
      linked[i][j] = linked[j][i] = true;
      bp.links.push_back({members[j], members[i], static_cast<int>(c)});
    }
    std::bernoulli_distribution coin(cfg.intra_density);
    for (int i = 0; i < size; ++i) {
      for (int j = i + 1; j < size; ++j) {
        if (coin(rng) && !linked[i][j]) {
          bp.links.push_back({members[i], members[j], static_cast<int>(c)});
        }
      }
    }

    const double mean_events =
        cfg.events_per_year * static_cast<double>(eras[c].end - eras[c].begin);
    const int num_events =
        std::max(1, std::poisson_distribution<int>(mean_events)(rng));
    const std::size_t first_event = bp.ego_events.size();
    std::vector<bool> covered(size, false);
    for (int e = 0; e < num_events; ++e) {
      const int take = uniform_int(rng, 1, std::min(3, size));
      std::vector<int> picked;
      std::sample(members.begin(), members.end(), std::back_inserter(picked),
                  take, rng);
      for (int m : picked) covered[m - members.front()] = true;
      bp.ego_events.push_back({static_cast<int>(c), std::move(picked)});
    }
    // Every collaborator must be a direct neighbor of the ego.
    for (int i = 0; i < size; ++i) {
      if (covered[i]) continue;
      const int e = uniform_int(rng, static_cast<int>(first_event),
                                static_cast<int>(bp.ego_events.size()) - 1);
      bp.ego_events[e].members.push_back(members[i]);
    }
    for (auto& e : bp.ego_events) std::sort(e.members.begin(), e.members.end());
    bp.communities.push_back(std::move(members));
  }
  const std::size_t intra_links = bp.links.size();

  if (bp.communities.size() >= 2) {
    const auto cross = static_cast<std::size_t>(
        std::llround(cfg.inter_noise * static_cast<double>(intra_links)));
    const int last = static_cast<int>(bp.communities.size()) - 1;
    for (std::size_t i = 0; i < cross; ++i) {
      const int ca = uniform_int(rng, 0, last);
      int cb = uniform_int(rng, 0, last - 1);
      if (cb >= ca) ++cb;
      const auto& ma = bp.communities[ca];
      const auto& mb = bp.communities[cb];
      bp.links.push_back({ma[uniform_int(rng, 0, size - 1)],
                          mb[uniform_int(rng, 0, size - 1)], -1});
    }
  }
  return bp;
}

class EventWriter {
 public:
  explicit EventWriter(const SynthConfig& cfg) : cfg_(cfg) {}

  std::string fresh_collaborator() { return fmt::format("v{:06d}", next_member_++); }

  void emit(std::vector<std::string> participants, int year_offset,
            std::vector<CollabEvent>& out) {
    out.push_back({fmt::format("e{:07d}", next_event_++),
                   cfg_.start_year + year_offset, std::move(participants)});
  }

 private:
  const SynthConfig& cfg_;
  int next_member_ = 0;
  int next_event_ = 0;
};

int year_in(const Era& era, Rng& rng) {
  return uniform_int(rng, era.begin, era.end - 1);
}

// Draws timestamps for a blueprint and appends its events. Returns the
// collaborator ids by blueprint member number.
std::vector<std::string> realize(const Blueprint& bp,
                                 const std::vector<Era>& eras, int years,
                                 const std::string& ego_id, EventWriter& writer,
                                 Rng& rng, std::vector<CollabEvent>& out) {
  std::vector<std::string> ids(bp.num_members);
  for (auto& id : ids) id = writer.fresh_collaborator();
  const Era everything{0, years};
  for (const auto& link : bp.links) {
    const Era& era = link.community >= 0 ? eras[link.community] : everything;
    writer.emit({ids[link.a], ids[link.b]}, year_in(era, rng), out);
  }
  for (const auto& e : bp.ego_events) {
    std::vector<std::string> participants{ego_id};
    for (int m : e.members) participants.push_back(ids[m]);
    writer.emit(std::move(participants), year_in(eras[e.community], rng), out);
  }
  return ids;
}

std::vector<std::vector<std::string>> community_ids(
    const Blueprint& bp, const std::vector<std::string>& ids) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : bp.communities) {
    auto& names = out.emplace_back();
    for (int m : c) names.push_back(ids[m]);
  }
  return out;
}

std::vector<Era> eras_for(NodeKind kind, const SynthConfig& cfg) {
  const Era all{0, cfg.years};
  switch (kind) {
    case NodeKind::kPure:
      return {all};
    case NodeKind::kMulti:
      return std::vector<Era>(cfg.entities_per_multi, all);
    case NodeKind::kMobile: {
      const int split = cfg.mobility_break.value_or(cfg.years / 2);
      return {Era{0, split}, Era{split, cfg.years}};
    }
  }
  return {all};
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("synthetic config: {}", what));
  };
  if (n_pure < 0 || n_multi < 0 || n_mobile < 0) fail("negative node count");
  if (entities_per_multi < 2) fail("entities_per_multi must be >= 2");
  if (collaborators_per_entity < 1) fail("collaborators_per_entity must be >= 1");
  if (!(intra_density > 0.0 && intra_density <= 1.0)) {
    fail("intra_density must be in (0, 1]");
  }
  if (!(inter_noise >= 0.0 && inter_noise < 1.0)) {
    fail("inter_noise must be in [0, 1)");
  }
  if (years < 1) fail("years must be >= 1");
  if (!(events_per_year > 0.0)) fail("events_per_year must be positive");
  if (n_mobile > 0) {
    const int split = mobility_break.value_or(years / 2);
    if (split < 1 || split >= years) {
      fail(fmt::format("mobility_break {} leaves an empty era in {} years",
                       split, years));
    }
  }
}

SynthBenchmark generate(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::vector<NodeKind> kinds;
  kinds.insert(kinds.end(), cfg.n_pure, NodeKind::kPure);
  kinds.insert(kinds.end(), cfg.n_multi, NodeKind::kMulti);
  kinds.insert(kinds.end(), cfg.n_mobile, NodeKind::kMobile);
  std::shuffle(kinds.begin(), kinds.end(), rng);

  SynthBenchmark bench;
  EventWriter writer(cfg);
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto eras = eras_for(kinds[i], cfg);
    const Blueprint bp = plant(cfg, eras, rng);
    SynthNode node{fmt::format("u{:04d}", i), kinds[i], {}};
    const auto ids =
        realize(bp, eras, cfg.years, node.id, writer, rng, bench.events);
    node.communities = community_ids(bp, ids);
    bench.labels.push_back({node.id, kinds[i] == NodeKind::kMulti});
    bench.nodes.push_back(std::move(node));
  }
  return bench;
}

MobilityPair generate_mobility_pair(const SynthConfig& cfg,
                                    std::uint64_t seed) {
  SynthConfig two = cfg;
  two.n_mobile = 1;
  two.validate();
  Rng rng(seed);
  const std::vector<Era> shared(2, Era{0, two.years});
  const Blueprint bp = plant(two, shared, rng);

  MobilityPair pair{{}, "mobile", "multi"};
  EventWriter writer(two);
  realize(bp, eras_for(NodeKind::kMobile, two), two.years, pair.mobile_id,
          writer, rng, pair.events);
  realize(bp, shared, two.years, pair.multi_id, writer, rng, pair.events);
  return pair;
}

}  // namespace disambig
