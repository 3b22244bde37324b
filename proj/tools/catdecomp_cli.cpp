// catdecomp: structure analysis for quantum states, channels, and catalysis.
//
// Wire format: UTF-8 JSON, complex numbers as [re, im] pairs.
//   state file:   {"dims": [...], "matrix": {"rows", "cols", "data"}}
//   channel file: {"dim_in", "dim_out", "kraus": [...]} or {..., "choi": ...}
//   catalysis instance file: {"system": <state>, "interaction": <channel>,
//                             "catalyst": <state>, "catalyst_cut": <int>}
//
// Exit codes: 0 computed (verdicts live in the report), 2 malformed
// input/usage, 3 numerical failure (genericity retries exhausted or
// tolerance inconsistencies).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "catdecomp/catalysis.hpp"
#include "catdecomp/fixed_points.hpp"
#include "catdecomp/generators.hpp"
#include "catdecomp/io.hpp"
#include "catdecomp/koashi_imoto.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using catdecomp::Json;
using catdecomp::Matrix;
using catdecomp::QuantumChannel;
using catdecomp::QuantumState;
using catdecomp::TensorShape;

struct CommonOpts {
  std::string in_path;
  std::string out_path;
  std::string cut;       // comma-separated factor dims, e.g. "2,2"
  int cut_at = 1;        // split after this many factors
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  auto* in = cmd->add_option("--in", o.in_path, "input JSON file");
  if (needs_input) in->required();
  cmd->add_option("--out", o.out_path, "write the report here as well");
  cmd->add_option("--cut", o.cut, "tensor factor dims, e.g. 2,2");
  cmd->add_option("--cut-at", o.cut_at,
                  "bipartition after this many factors (default 1)");
  cmd->add_option("--tol", o.tol, "numerical tolerance (default 1e-9)");
  cmd->add_option("--seed", o.seed, "RNG seed for genericity (default 0)");
}

bool logging_enabled() {
  const char* v = std::getenv("CATDECOMP_LOG");
  return v != nullptr && std::string(v) != "0" && std::string(v) != "";
}

void log_line(const std::string& msg) {
  if (logging_enabled()) std::cerr << "[catdecomp] " << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<int> parse_cut(const std::string& cut) {
  std::vector<int> dims;
  std::stringstream ss(cut);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t used = 0;
    int d = std::stoi(tok, &used);
    if (used != tok.size() || d <= 0)
      throw std::invalid_argument("bad --cut entry: " + tok);
    dims.push_back(d);
  }
  if (dims.empty()) throw std::invalid_argument("empty --cut");
  return dims;
}

QuantumState load_state(const CommonOpts& o, const std::string& raw) {
  QuantumState s = catdecomp::state_from_json(Json::parse(raw));
  if (!o.cut.empty()) {
    TensorShape shape{parse_cut(o.cut)};
    if (shape.total() != s.dim())
      throw std::invalid_argument("--cut dims do not match the state size");
    s.shape = shape;
  }
  if (o.cut_at <= 0 || o.cut_at >= s.shape.size())
    throw std::invalid_argument("--cut-at must split the factors in two");
  return s;
}

Json base_report(const std::string& command, const CommonOpts& o,
                 const std::string& raw_input) {
  return Json{{"command", command},
              {"version", kVersion},
              {"inputs_digest", catdecomp::fnv1a_hex(raw_input)},
              {"seed", o.seed},
              {"tol", o.tol}};
}

void emit(const Json& report, const CommonOpts& o) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open --out: " + o.out_path);
    f << text;
  }
}

Json ki_blocks_json(const catdecomp::KIDecomposition& dec,
                    const Matrix& marginal) {
  Json blocks = Json::array();
  for (const auto& blk : dec.blocks) {
    blocks.push_back(
        Json{{"dim_l", blk.dim_l},
             {"dim_r", blk.dim_r},
             {"probability", (blk.projector * marginal).trace().real()},
             {"common_state", catdecomp::matrix_to_wire(blk.common_state)}});
  }
  return blocks;
}

int run_state_classify(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  QuantumState s = load_state(o, raw);
  auto rng = catdecomp::seeded_rng(o.seed);
  auto res = catdecomp::classify_bipartite(s, o.cut_at, rng, o.tol);

  std::vector<int> a_factors;
  for (int f = 0; f < o.cut_at; ++f) a_factors.push_back(f);
  Matrix rho_a = catdecomp::partial_trace(s.matrix, s.shape, a_factors);

  Json rep = base_report("state classify", o, raw);
  rep["verdict"] = res.verdict == catdecomp::StateVerdict::TQQ ? "TQ-Q" : "PC-Q";
  rep["blocks"] = ki_blocks_json(res.decomposition, rho_a);
  rep["witness_residual"] = res.witness_residual;
  if (res.witness) rep["witness"] = catdecomp::channel_to_json(*res.witness);
  emit(rep, o);
  return 0;
}

int run_state_ki(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  QuantumState s = load_state(o, raw);
  auto rng = catdecomp::seeded_rng(o.seed);
  auto fam = catdecomp::steered_family(s, o.cut_at);
  auto dec = catdecomp::ki_decompose(fam.states, rng, o.tol);

  std::vector<int> a_factors;
  for (int f = 0; f < o.cut_at; ++f) a_factors.push_back(f);
  Matrix rho_a = catdecomp::partial_trace(s.matrix, s.shape, a_factors);

  Json rep = base_report("state ki", o, raw);
  rep["trivial"] = dec.trivial();
  rep["blocks"] = ki_blocks_json(dec, rho_a);
  emit(rep, o);
  return 0;
}

int run_channel_fixed_points(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  QuantumChannel ch = catdecomp::channel_from_json(Json::parse(raw));
  auto rng = catdecomp::seeded_rng(o.seed);
  auto st = catdecomp::structure_decompose(ch, rng, o.tol);

  Json blocks = Json::array();
  for (size_t i = 0; i < st.wedderburn.blocks.size(); ++i) {
    const auto& blk = st.wedderburn.blocks[i];
    blocks.push_back(
        Json{{"dim_h", blk.dim_h},
             {"dim_l", blk.dim_l},
             {"state", catdecomp::matrix_to_wire(st.block_states[i])}});
  }
  Json rep = base_report("channel fixed-points", o, raw);
  rep["fixed_space_dim"] = st.fixed_space_basis.dim();
  rep["blocks"] = std::move(blocks);
  emit(rep, o);
  return 0;
}

int run_channel_classify(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  QuantumChannel ch = catdecomp::channel_from_json(Json::parse(raw));
  auto rng = catdecomp::seeded_rng(o.seed);
  auto res = catdecomp::classify_channel_output(ch, rng, o.tol);

  Json rep = base_report("channel classify", o, raw);
  rep["verdict"] = res.verdict == catdecomp::ChannelVerdict::TQ ? "TQ" : "PC";
  rep["witness_residual"] = res.witness_residual;
  rep["tie_warning"] = res.tie_warning;
  if (res.witness) {
    Json projs = Json::array();
    for (const Matrix& p : res.witness->projectors)
      projs.push_back(catdecomp::matrix_to_wire(p));
    rep["witness_projectors"] = std::move(projs);
  }
  emit(rep, o);
  return 0;
}

catdecomp::CatalysisInstance load_instance(const CommonOpts& o,
                                           const std::string& raw) {
  Json j = Json::parse(raw);
  catdecomp::CatalysisInstance inst;
  inst.system = catdecomp::state_from_json(j.at("system"));
  inst.interaction = catdecomp::channel_from_json(j.at("interaction"));
  inst.catalyst = catdecomp::state_from_json(j.at("catalyst"));
  inst.catalyst_cut = j.value("catalyst_cut", 0);
  inst.tol = o.tol;
  return inst;
}

int run_catalysis_check(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  auto inst = load_instance(o, raw);
  auto rep0 = catdecomp::check_catalytic(inst);

  Json rep = base_report("catalysis check", o, raw);
  rep["catalytic"] = rep0.catalytic;
  rep["residual"] = rep0.residual;
  rep["trivial"] = rep0.trivial;
  rep["gamma_identity_distance"] = rep0.gamma_identity_distance;
  emit(rep, o);
  return 0;
}

int run_catalysis_ensemble(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  auto inst = load_instance(o, raw);
  auto check = catdecomp::check_catalytic(inst);
  if (!check.catalytic)
    throw std::invalid_argument(
        "catalysis ensemble: instance is not catalytic (residual " +
        std::to_string(check.residual) + ")");

  auto rng = catdecomp::seeded_rng(o.seed);
  catdecomp::KIDecomposition dec;
  if (inst.has_environment()) {
    QuantumState tau{inst.catalyst.matrix,
                     TensorShape{inst.dim_c(), inst.dim_e()}};
    auto fam = catdecomp::steered_family(tau, 1);
    dec = catdecomp::ki_decompose(fam.states, rng, o.tol);
  } else {
    dec = catdecomp::ki_decompose({inst.catalyst.matrix}, rng, o.tol);
  }
  auto red = catdecomp::ensemble_reduction(inst, dec);

  Json comps = Json::array();
  for (const auto& c : red.components)
    comps.push_back(
        Json{{"probability", c.probability},
             {"local_catalyst", catdecomp::matrix_to_wire(c.local_catalyst)},
             {"effective_choi",
              catdecomp::matrix_to_wire(c.effective.choi())}});
  Json rep = base_report("catalysis ensemble", o, raw);
  rep["components"] = std::move(comps);
  rep["reconstruction_residual"] = red.reconstruction_residual;
  rep["factorization_residual"] = red.factorization_residual;
  emit(rep, o);
  return 0;
}

int run_entropy_mi(const CommonOpts& o) {
  const std::string raw = read_file(o.in_path);
  QuantumState s = load_state(o, raw);
  Json rep = base_report("entropy mi", o, raw);
  rep["mi_bits"] = catdecomp::mutual_information(s, o.cut_at);
  emit(rep, o);
  return 0;
}

int run_gen(const std::string& which, const std::vector<double>& lambda,
            const CommonOpts& o) {
  QuantumState s;
  if (which == "bb84") {
    s = catdecomp::example_bb84_state();
  } else if (which == "bell") {
    s = catdecomp::example_bell_state();
  } else if (which == "extq") {
    s = catdecomp::example_extq_state(lambda);
  } else {
    throw std::invalid_argument("gen: unknown fixture " + which);
  }
  const std::string text = catdecomp::state_to_json(s).dump(2) + "\n";
  if (o.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open --out: " + o.out_path);
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catdecomp: quantum structure decomposition toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string gen_which;
  std::vector<double> gen_lambda;
  int selected = 0;
  enum Cmd {
    kNone,
    kStateClassify,
    kStateKI,
    kChFixed,
    kChClassify,
    kCatCheck,
    kCatEnsemble,
    kMI,
    kGen
  };

  auto* state = app.add_subcommand("state", "bipartite state analysis");
  state->require_subcommand(1);
  auto* sc = state->add_subcommand("classify", "TQ-Q / PC-Q verdict");
  add_common(sc, o);
  sc->callback([&] { selected = kStateClassify; });
  auto* ski = state->add_subcommand("ki", "Koashi-Imoto decomposition");
  add_common(ski, o);
  ski->callback([&] { selected = kStateKI; });

  auto* channel = app.add_subcommand("channel", "channel analysis");
  channel->require_subcommand(1);
  auto* cf = channel->add_subcommand("fixed-points", "fixed-point structure");
  add_common(cf, o);
  cf->callback([&] { selected = kChFixed; });
  auto* cc = channel->add_subcommand("classify", "TQ / PC output verdict");
  add_common(cc, o);
  cc->callback([&] { selected = kChClassify; });

  auto* cat = app.add_subcommand("catalysis", "catalysis verification");
  cat->require_subcommand(1);
  auto* chk = cat->add_subcommand("check", "catalytic constraint check");
  add_common(chk, o);
  chk->callback([&] { selected = kCatCheck; });
  auto* ens = cat->add_subcommand("ensemble", "local-catalyst reduction");
  add_common(ens, o);
  ens->callback([&] { selected = kCatEnsemble; });

  auto* ent = app.add_subcommand("entropy", "entropic quantities");
  ent->require_subcommand(1);
  auto* mi = ent->add_subcommand("mi", "mutual information in bits");
  add_common(mi, o);
  mi->callback([&] { selected = kMI; });

  auto* gen = app.add_subcommand("gen", "generate example state files");
  gen->add_option("fixture", gen_which, "bb84 | bell | extq")->required();
  gen->add_option("--lambda", gen_lambda,
                  "eigenvalues for extq (comma-separated)")
      ->delimiter(',');
  add_common(gen, o, /*needs_input=*/false);
  gen->callback([&] { selected = kGen; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    log_line("running with seed " + std::to_string(o.seed));
    switch (selected) {
      case kStateClassify: return run_state_classify(o);
      case kStateKI: return run_state_ki(o);
      case kChFixed: return run_channel_fixed_points(o);
      case kChClassify: return run_channel_classify(o);
      case kCatCheck: return run_catalysis_check(o);
      case kCatEnsemble: return run_catalysis_ensemble(o);
      case kMI: return run_entropy_mi(o);
      case kGen: return run_gen(gen_which, gen_lambda, o);
      default: std::cerr << "no subcommand selected\n"; return 2;
    }
  } catch (const catdecomp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
