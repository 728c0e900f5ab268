#include "mulrf/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <thread>

#include "mulrf/spr.hpp"

namespace mulrf {

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

// Inserts taxon `a` into s at the position minimizing the summed distance to
// the profile trees restricted to the labels of s plus a.  One incremental
// scan per tree prices every position at once: attach a anywhere, then score
// moving it, with staying put as one more candidate.
UnrootedTree greedy_insert(const Profile& p, const UnrootedTree& s, int a) {
  int universe = p.taxa.size();
  UnrootedTree grown = attach_leaf(s, a, s.edge_list()[0]);
  Bitset have = grown.label_set(universe);
  std::vector<MulTree> restricted;
  restricted.reserve(p.trees.size());
  for (const MulTree& t : p.trees) {
    if (!(t.label_set(universe) & have).any()) continue;
    restricted.push_back(restrict_to_labels(t, have));
  }

  int leaf = grown.find_leaf(a);
  int hub = grown.adj[leaf][0];
  Edge cut = make_edge(leaf, hub);
  int side = cut.u == leaf ? 0 : 1;

  int64_t stay = 0;
  std::vector<int64_t> totals;
  std::vector<SprMove> moves;
  for (const MulTree& t : restricted) {
    stay += rf_multree_supertree(t, grown, p.taxa);
    std::vector<ScanEntry> entries = scan_cut_edge(grown, t, p.taxa, cut, side);
    if (totals.empty()) {
      totals.assign(entries.size(), 0);
      moves.reserve(entries.size());
      for (const ScanEntry& e : entries) moves.push_back(e.move);
    }
    for (size_t i = 0; i < entries.size(); ++i) totals[i] += entries[i].rf;
  }
  int best = -1;
  int64_t best_total = stay;
  for (size_t i = 0; i < totals.size(); ++i)
    if (totals[i] < best_total) {
      best_total = totals[i];
      best = static_cast<int>(i);
    }
  return best < 0 ? grown : apply_spr(grown, moves[best]);
}

}  // namespace

UnrootedTree initial_supertree(const Profile& p, InitStrategy strategy, std::mt19937_64& rng) {
  if (p.trees.empty()) throw TreeError("initial_supertree: empty profile");
  int universe = p.taxa.size();
  std::vector<int64_t> freq(universe, 0);
  for (const MulTree& t : p.trees) {
    std::vector<int> m = t.label_multiplicity(universe);
    for (int a = 0; a < universe; ++a) freq[a] += m[a];
  }
  std::vector<int> taxa;
  for (int a = 0; a < universe; ++a)
    if (freq[a] > 0) taxa.push_back(a);
  if (taxa.empty()) throw TreeError("initial_supertree: profile has no labels");
  if (taxa.size() == 1) return single_leaf_tree(taxa[0]);
  if (taxa.size() == 2) return two_leaf_tree(taxa[0], taxa[1]);

  if (strategy == InitStrategy::kRandom) {
    std::shuffle(taxa.begin(), taxa.end(), rng);
  } else {
    std::stable_sort(taxa.begin(), taxa.end(),
                     [&](int a, int b) { return freq[a] != freq[b] ? freq[a] > freq[b] : a < b; });
  }

  UnrootedTree s = star_tree({taxa[0], taxa[1], taxa[2]});
  for (size_t i = 3; i < taxa.size(); ++i) {
    if (strategy == InitStrategy::kRandom) {
      std::vector<Edge> edges = s.edge_list();
      std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
      s = attach_leaf(s, taxa[i], edges[pick(rng)]);
    } else {
      s = greedy_insert(p, s, taxa[i]);
    }
  }
  return s;
}

namespace {

struct RestartOutcome {
  UnrootedTree tree;
  int64_t score = 0;
  RestartTrace trace;
};

RestartOutcome run_restart(const Profile& p, const SearchConfig& cfg, int restart) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(mix_seed(cfg.seed, restart));
  InitStrategy strategy =
      (cfg.init == InitStrategy::kGreedyLeafAdd && restart == 0) ? InitStrategy::kGreedyLeafAdd
                                                                 : InitStrategy::kRandom;
  RestartOutcome out;
  out.tree = initial_supertree(p, strategy, rng);
  if (out.tree.leaf_count() < 4) {
    out.score = rf_profile(p, out.tree).total;
    out.trace.scores.push_back(out.score);
  } else {
    for (int accepted = 0;; ++accepted) {
      SprSearchResult res = spr_search(p, out.tree);
      if (out.trace.scores.empty()) out.trace.scores.push_back(res.current_score);
      out.score = res.current_score;
      if (accepted >= cfg.max_iterations || !res.has_move || res.best_score >= res.current_score)
        break;
      out.tree = apply_spr(out.tree, res.best_move);
      out.trace.scores.push_back(res.best_score);
    }
  }
  out.trace.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

SearchResult local_search(const Profile& p, const SearchConfig& cfg) {
  if (cfg.restarts < 1 || cfg.max_iterations < 1) throw TreeError("local_search: invalid config");
  if (p.trees.empty()) throw TreeError("local_search: empty profile");
  auto t0 = std::chrono::steady_clock::now();

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  int nthreads = std::min(std::max(1, cfg.workers), cfg.restarts);
  if (nthreads == 1) {
    for (int r = 0; r < cfg.restarts; ++r) outcomes[r] = run_restart(p, cfg, r);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      while (true) {
        int r = next.fetch_add(1);
        if (r >= cfg.restarts) break;
        outcomes[r] = run_restart(p, cfg, r);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SearchResult res;
  int best = 0;
  for (int r = 1; r < cfg.restarts; ++r)
    if (outcomes[r].score < outcomes[best].score) best = r;
  res.best_tree = std::move(outcomes[best].tree);
  res.best_score = outcomes[best].score;
  res.best_restart = best;
  res.trajectories.reserve(cfg.restarts);
  for (RestartOutcome& o : outcomes) res.trajectories.push_back(std::move(o.trace));
  res.total_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace mulrf
