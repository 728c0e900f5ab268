#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mulrf/newick.hpp"
#include "mulrf/oracle.hpp"
#include "mulrf/rf.hpp"
#include "mulrf/search.hpp"
#include "mulrf/sim.hpp"
#include "mulrf/spr.hpp"
#include "mulrf/tree.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // domain or IO failure
constexpr int kExitParse = 2;       // malformed input / invalid parameters
constexpr int kExitPrecondition = 3;  // too few taxa, mismatched leaf sets
constexpr int kExitHard = 4;        // exact mul-vs-mul distance requested

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct SupertreeOpts {
  std::string input, output, trace;
  int restarts = 10;
  int iterations = 1000;
  uint64_t seed = 0;
  int workers = 1;
  std::string init = "greedy";
  bool per_tree = false;
};

int cmd_supertree(const SupertreeOpts& o) {
  mulrf::TreeDocument doc = mulrf::parse_newick(read_file(o.input));
  if (doc.taxa.size() < 4) {
    std::cerr << "error: need at least 4 distinct taxa, profile has " << doc.taxa.size()
              << "\n";
    return kExitPrecondition;
  }
  mulrf::Profile p{doc.taxa, doc.trees};
  mulrf::SearchConfig cfg;
  cfg.restarts = o.restarts;
  cfg.max_iterations = o.iterations;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.init = o.init == "random" ? mulrf::InitStrategy::kRandom
                                : mulrf::InitStrategy::kGreedyLeafAdd;
  mulrf::SearchResult res = mulrf::local_search(p, cfg);

  std::string newick = mulrf::write_newick(res.best_tree, doc.taxa) + "\n";
  std::cout << "seed\t" << o.seed << "\n";
  std::cout << "score\t" << res.best_score << "\n";
  std::cout << "restart\t" << res.best_restart << "\n";
  std::cout << "time_ms\t" << static_cast<int64_t>(res.total_millis) << "\n";
  if (o.per_tree) {
    mulrf::ProfileRf breakdown = mulrf::rf_profile(p, res.best_tree);
    for (size_t i = 0; i < breakdown.per_tree.size(); ++i)
      std::cout << "tree\t" << i << "\t" << breakdown.per_tree[i] << "\n";
  }
  if (!o.trace.empty()) {
    std::ostringstream ts;
    ts << "iteration\tscore\n";
    for (const mulrf::RestartTrace& tr : res.trajectories)
      for (size_t i = 0; i < tr.scores.size(); ++i)
        ts << i << "\t" << tr.scores[i] << "\n";
    write_file(o.trace, ts.str());
  }
  if (o.output.empty())
    std::cout << newick;
  else
    write_file(o.output, newick);
  return kExitOk;
}

struct RfdistOpts {
  std::string file_a, file_b;
  bool oracle = false;
  bool oracle_small = false;
};

int cmd_rfdist(const RfdistOpts& o) {
  mulrf::TreeDocument da = mulrf::parse_newick(read_file(o.file_a));
  mulrf::TreeDocument db = mulrf::parse_newick(read_file(o.file_b), da.taxa);
  const mulrf::MulTree& t1 = da.trees.front();
  const mulrf::MulTree& t2 = db.trees.front();
  int universe = db.taxa.size();
  bool mul1 = !t1.is_singly_labeled();
  bool mul2 = !t2.is_singly_labeled();

  if (mul1 && mul2) {
    if (!o.oracle_small) {
      std::cerr << "error: both inputs are mul-trees; the exact distance between two "
                   "mul-trees is NP-hard to compute. Rerun with --oracle-small for a "
                   "tiny instance.\n";
      return kExitHard;
    }
    mulrf::DiffExhaustive d = mulrf::rf_differentiation_exhaustive(t1, t2, universe);
    std::cout << d.min << "\n";
    std::cout << "values";
    for (int64_t v : d.values) std::cout << "\t" << v;
    std::cout << "\n";
    return kExitOk;
  }

  int64_t engine;
  if (mul1 || mul2) {
    const mulrf::MulTree& mul = mul1 ? t1 : t2;
    const mulrf::UnrootedTree& single = mul1 ? t2 : t1;
    engine = mulrf::rf_multree_supertree(mul, single, db.taxa);
    std::cout << engine << "\n";
    if (o.oracle) {
      mulrf::DiffExhaustive d = mulrf::rf_differentiation_exhaustive(mul, single, universe);
      bool agree = d.min == engine && d.values.size() == 1;
      std::cout << "oracle\t" << d.min << "\tagreement\t" << (agree ? "yes" : "no") << "\n";
      if (!agree) {
        std::cerr << "error: oracle disagrees with the engine\n";
        return kExitError;
      }
    }
    return kExitOk;
  }

  mulrf::Bitset l1 = t1.label_set(universe), l2 = t2.label_set(universe);
  engine = l1.is_subset_of(l2) ? mulrf::rf_unrooted(t1, t2, universe)
                               : mulrf::rf_unrooted(t2, t1, universe);
  std::cout << engine << "\n";
  if (o.oracle) {
    const mulrf::UnrootedTree& small = l1.is_subset_of(l2) ? t1 : t2;
    const mulrf::UnrootedTree& big = l1.is_subset_of(l2) ? t2 : t1;
    mulrf::DiffExhaustive d = mulrf::rf_differentiation_exhaustive(small, big, universe);
    bool agree = d.min == engine && d.values.size() == 1;
    std::cout << "oracle\t" << d.min << "\tagreement\t" << (agree ? "yes" : "no") << "\n";
    if (!agree) {
      std::cerr << "error: oracle disagrees with the engine\n";
      return kExitError;
    }
  }
  return kExitOk;
}

struct SimulateOpts {
  int taxa = 16;
  int genes = 20;
  std::string condition = "none";
  double dl_rate = 0.002;
  int lgt = 2;
  double del = 0.0;
  double height = 50.0;
  int error_nni = 0;
  uint64_t seed = 0;
  std::string outdir;
};

int cmd_simulate(const SimulateOpts& o) {
  mulrf::SimParams prm;
  prm.n_taxa = o.taxa;
  prm.n_genes = o.genes;
  prm.tree_height = o.height;
  prm.seed = o.seed;
  prm.deletion_fraction = o.del;
  bool want_dl = o.condition == "dl" || o.condition == "both";
  bool want_lgt = o.condition == "lgt" || o.condition == "both";
  if (!want_dl && !want_lgt && o.condition != "none") {
    std::cerr << "error: unknown condition '" << o.condition << "'\n";
    return kExitParse;
  }
  prm.dl_rate = want_dl ? o.dl_rate : 0.0;
  prm.lgt_count = want_lgt ? o.lgt : 0;

  mulrf::SimOutput sim;
  try {
    sim = mulrf::simulate_profile(prm);
  } catch (const mulrf::TreeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  mulrf::TaxonTable taxa;
  for (int a = 0; a < prm.n_taxa; ++a) taxa.add("t" + std::to_string(a + 1));

  std::filesystem::create_directories(o.outdir);
  std::string species_path = o.outdir + "/species.nwk";
  std::string genes_path = o.outdir + "/genes.nwk";
  std::string events_path = o.outdir + "/events.tsv";

  write_file(species_path, mulrf::write_newick_rooted(sim.species.tree, taxa) + "\n");
  std::ostringstream gs, es;
  es << "gene_id\tevent\tdetail\n";
  std::mt19937_64 nni_rng(mulrf::mix_seed(prm.seed, 1u << 20));
  for (size_t g = 0; g < sim.genes.size(); ++g) {
    mulrf::MulTree tree = sim.genes[g].gene_tree;
    if (o.error_nni > 0) tree = mulrf::perturb_nni(tree, o.error_nni, nni_rng);
    gs << mulrf::write_newick(tree, taxa) << "\n";
    for (const mulrf::SimEvent& e : sim.genes[g].events)
      es << e.gene << "\t" << e.kind << "\t" << e.detail << "\n";
  }
  write_file(genes_path, gs.str());
  write_file(events_path, es.str());

  std::cout << "seed\t" << prm.seed << "\n";
  std::cout << "species\t" << species_path << "\n";
  std::cout << "genes\t" << genes_path << "\n";
  std::cout << "events\t" << events_path << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& true_path, const std::string& est_path) {
  mulrf::TreeDocument da = mulrf::parse_newick(read_file(true_path));
  mulrf::TreeDocument db = mulrf::parse_newick(read_file(est_path), da.taxa);
  const mulrf::UnrootedTree& t1 = da.trees.front();
  const mulrf::UnrootedTree& t2 = db.trees.front();
  int universe = db.taxa.size();
  if (!t1.is_singly_labeled() || !t2.is_singly_labeled() ||
      !(t1.label_set(universe) == t2.label_set(universe))) {
    std::cerr << "error: evaluate needs two singly-labeled trees on the same leaf set\n";
    return kExitPrecondition;
  }
  std::printf("%.2f\n", mulrf::ate(t1, t2, universe));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RF supertrees from multi-copy gene trees"};
  app.require_subcommand(1);

  SupertreeOpts so;
  CLI::App* sup = app.add_subcommand("supertree", "Infer a supertree from a gene-tree profile");
  sup->add_option("-i,--input", so.input, "Newick profile, one tree per line")->required();
  sup->add_option("-o,--output", so.output, "Output supertree file (default: stdout)");
  sup->add_option("--restarts", so.restarts, "Hill-climbing restarts");
  sup->add_option("--iterations", so.iterations, "Accepted-move cap per restart");
  sup->add_option("--seed", so.seed, "Random seed");
  sup->add_option("--workers", so.workers, "Worker threads");
  sup->add_option("--init", so.init, "Initial tree strategy: greedy or random")
      ->check(CLI::IsMember({"greedy", "random"}));
  sup->add_option("--trace", so.trace, "Write per-iteration scores (TSV)");
  sup->add_flag("--per-tree", so.per_tree, "Report the per-input-tree score breakdown");

  RfdistOpts ro;
  CLI::App* rfd = app.add_subcommand("rfdist", "Distance between two trees");
  rfd->add_option("A", ro.file_a, "First tree file")->required();
  rfd->add_option("B", ro.file_b, "Second tree file")->required();
  rfd->add_flag("--oracle", ro.oracle, "Also run the exhaustive oracle and compare");
  rfd->add_flag("--oracle-small", ro.oracle_small,
                "Allow mul-tree vs mul-tree via exhaustive differentiation (tiny inputs)");

  SimulateOpts mo;
  CLI::App* simc = app.add_subcommand("simulate", "Generate a species tree and gene trees");
  simc->add_option("--taxa", mo.taxa, "Species count");
  simc->add_option("--genes", mo.genes, "Gene tree count");
  simc->add_option("--condition", mo.condition, "none, dl, lgt, or both");
  simc->add_option("--dl-rate", mo.dl_rate, "Duplication and loss rate per time unit");
  simc->add_option("--lgt", mo.lgt, "Max transfers per gene tree");
  simc->add_option("--delete", mo.del, "Max per-gene taxon deletion fraction (<= 0.25)");
  simc->add_option("--height", mo.height, "Species tree height in time units");
  simc->add_option("--error-nni", mo.error_nni, "Random NNI moves per gene tree");
  simc->add_option("--seed", mo.seed, "Random seed");
  simc->add_option("-o,--output", mo.outdir, "Output directory")->required();

  std::string ev_true, ev_est;
  CLI::App* evc = app.add_subcommand("evaluate", "Topological error between two trees");
  evc->add_option("TRUE", ev_true, "Reference tree file")->required();
  evc->add_option("EST", ev_est, "Estimated tree file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sup->parsed()) return cmd_supertree(so);
    if (rfd->parsed()) return cmd_rfdist(ro);
    if (simc->parsed()) return cmd_simulate(mo);
    if (evc->parsed()) return cmd_evaluate(ev_true, ev_est);
  } catch (const mulrf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
