// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// criteria pass. Property-based at desk scale (all dimensions <= 16).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "catdecomp/catalysis.hpp"
#include "catdecomp/fixed_points.hpp"
#include "catdecomp/generators.hpp"
#include "catdecomp/io.hpp"
#include "catdecomp/koashi_imoto.hpp"

using namespace catdecomp;

namespace {

constexpr std::uint64_t kMasterSeed = 20240817;

Matrix ket(int d, int i) {
  Matrix v = Matrix::Zero(d, 1);
  v(i, 0) = 1.0;
  return v;
}

struct PlantedInstance {
  PlantedChannel plant;
  FixedPointStructure structure;
  OperatorAlgebra adjoint_algebra;
};

std::vector<PlantedInstance> g_planted;  // shared between criteria 1/3/9

std::vector<std::pair<int, int>> draw_block_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u13(1, 3);
  std::vector<std::pair<int, int>> spec;
  int total = 0;
  for (int tries = 0; tries < 8 && spec.size() < 3; ++tries) {
    int h = u13(rng), l = u13(rng);
    if (total + h * l > 12) break;
    spec.emplace_back(h, l);
    total += h * l;
  }
  if (spec.empty()) spec.emplace_back(1, 1);
  return spec;
}

// ---- Criterion 1: planted fixed-point structure recovery -------------------

bool criterion1() {
  auto rng = seeded_rng(kMasterSeed, 1);
  for (int inst = 0; inst < 50; ++inst) {
    auto spec = draw_block_spec(rng);
    PlantedInstance pi{planted_fixed_point_channel(spec, rng), {}, {}};
    const int d = pi.plant.channel.dim_in;
    pi.adjoint_algebra = adjoint_fixed_point_algebra(pi.plant.channel);
    pi.structure = structure_decompose(pi.plant.channel, rng);

    // Dimension multisets agree exactly.
    std::vector<std::pair<int, int>> got, want = spec;
    for (const auto& b : pi.structure.wedderburn.blocks)
      got.emplace_back(b.dim_h, b.dim_l);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) {
      std::printf("  instance %d: block dims mismatch\n", inst);
      return false;
    }

    // Each recovered per-block state matches the planted one within 1e-7
    // trace distance, compared through canonical embedded representatives.
    std::vector<Matrix> planted_embeds;
    {
      int off = 0;
      for (size_t j = 0; j < spec.size(); ++j) {
        auto [h, l] = spec[j];
        Matrix full = Matrix::Zero(d, d);
        full.block(off, off, h * l, h * l) =
            tensor_product(identity(h) / h, pi.plant.block_states[j]);
        planted_embeds.push_back(pi.plant.conjugating_unitary * full *
                                 pi.plant.conjugating_unitary.adjoint());
        off += h * l;
      }
    }
    std::vector<bool> used(spec.size(), false);
    for (size_t i = 0; i < pi.structure.wedderburn.blocks.size(); ++i) {
      const auto& blk = pi.structure.wedderburn.blocks[i];
      Matrix emb = blk.block_isometry *
                   tensor_product(identity(blk.dim_h) / blk.dim_h,
                                  pi.structure.block_states[i]) *
                   blk.block_isometry.adjoint();
      double best = 1e9;
      int best_j = -1;
      for (size_t j = 0; j < spec.size(); ++j) {
        if (used[j]) continue;
        double dist = trace_norm(emb - planted_embeds[j]);
        if (dist < best) {
          best = dist;
          best_j = static_cast<int>(j);
        }
      }
      if (best_j < 0 || best > 1e-7) {
        std::printf("  instance %d: block state residual %.3e\n", inst, best);
        return false;
      }
      used[best_j] = true;
    }
    g_planted.push_back(std::move(pi));
  }
  return true;
}

// ---- Criterion 2: commutant route vs adjoint eigenspace --------------------

bool criterion2() {
  auto rng = seeded_rng(kMasterSeed, 2);
  std::uniform_int_distribution<int> dim(2, 4);
  for (int inst = 0; inst < 100; ++inst) {
    const int d = dim(rng);
    std::uniform_int_distribution<int> rk(1, d);
    QuantumChannel ch = random_channel(d, d, rk(rng), rng);
    OperatorAlgebra via_comm = adjoint_fixed_point_algebra(ch);

    Matrix s = superoperator(adjoint(ch));
    std::vector<Matrix> ops;
    for (const Vector& v : null_space(s - identity(d * d), 1e-9))
      ops.push_back(unvec(v, d, d));
    OperatorBasis eig = orthonormalize(ops);

    if (via_comm.dim() != eig.dim() ||
        span_distance(via_comm.basis, eig) > 1e-7) {
      std::printf("  instance %d: routes disagree (%d vs %d, angle %.2e)\n",
                  inst, via_comm.dim(), eig.dim(),
                  span_distance(via_comm.basis, eig));
      return false;
    }
  }
  return true;
}

// ---- Criterion 3: dimension identity ---------------------------------------

bool criterion3() {
  for (size_t i = 0; i < g_planted.size(); ++i) {
    const auto& pi = g_planted[i];
    const int expected = pi.structure.wedderburn.algebra_dim();
    if (pi.structure.fixed_space_basis.dim() != expected ||
        pi.adjoint_algebra.dim() != expected) {
      std::printf("  instance %zu: dims %d / %d / expected %d\n", i,
                  pi.structure.fixed_space_basis.dim(),
                  pi.adjoint_algebra.dim(), expected);
      return false;
    }
  }
  return !g_planted.empty();
}

// ---- Criterion 4: classification fixtures ----------------------------------

bool criterion4() {
  auto rng = seeded_rng(kMasterSeed, 4);

  if (classify_bipartite(example_extq_state({1.0 / 3, 2.0 / 3}), 1, rng)
          .verdict != StateVerdict::TQQ) {
    std::printf("  extq fixture misclassified\n");
    return false;
  }
  if (classify_bipartite(example_bb84_state(), 1, rng).verdict !=
      StateVerdict::TQQ) {
    std::printf("  memory-state fixture misclassified\n");
    return false;
  }

  // Sampled C-Q states.
  for (int inst = 0; inst < 10; ++inst) {
    std::uniform_int_distribution<int> dims(2, 3);
    const int da = dims(rng), db = dims(rng);
    Matrix rho = Matrix::Zero(da * db, da * db);
    std::vector<double> p(da);
    double tot = 0;
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (double& x : p) tot += (x = u(rng));
    Matrix basis = random_unitary(da, rng);
    for (int i = 0; i < da; ++i) {
      Matrix proj = basis.col(i) * basis.col(i).adjoint();
      rho += (p[i] / tot) *
             tensor_product(proj, random_density_matrix(db, rng));
    }
    auto res = classify_bipartite(QuantumState{rho, TensorShape{da, db}}, 1,
                                  rng);
    if (res.verdict != StateVerdict::PCQ || !res.witness ||
        res.witness_residual > 1e-9) {
      std::printf("  C-Q instance %d failed (residual %.2e)\n", inst,
                  res.witness_residual);
      return false;
    }
  }

  // Planted PC-Q states of assorted block shapes.
  std::vector<std::vector<PlantedBlockSpec>> shapes;
  {
    std::vector<PlantedBlockSpec> a(2);
    a[0].dim_l = 2;
    a[0].dim_r = 1;
    a[1].dim_l = 1;
    a[1].dim_r = 1;
    shapes.push_back(a);
    std::vector<PlantedBlockSpec> b(2);
    b[0].dim_l = 1;
    b[0].dim_r = 2;
    b[0].core = example_extq_state({0.3, 0.7});
    b[1].dim_l = 1;
    b[1].dim_r = 1;
    shapes.push_back(b);
    std::vector<PlantedBlockSpec> c(1);
    c[0].dim_l = 2;
    c[0].dim_r = 2;
    c[0].core = example_extq_state({0.25, 0.75});
    shapes.push_back(c);
  }
  for (int inst = 0; inst < 9; ++inst) {
    auto plant = planted_pcq_state(shapes[inst % shapes.size()], 2, rng);
    auto res = classify_bipartite(plant.state, 1, rng);
    if (res.verdict != StateVerdict::PCQ || !res.witness ||
        res.witness_residual > 1e-9) {
      std::printf("  planted PC-Q instance %d failed (residual %.2e)\n", inst,
                  res.witness_residual);
      return false;
    }
  }
  return true;
}

// ---- Criterion 5: no-catalysis falsification suite --------------------------

bool criterion5() {
  auto rng = seeded_rng(kMasterSeed, 5);
  int tested = 0, attempts = 0;
  CatalysisInstance inst;
  inst.catalyst_cut = 1;
  std::uniform_real_distribution<double> lam(0.05, 0.45);
  while (tested < 500 && attempts < 4000) {
    ++attempts;
    inst.system = QuantumState{random_density_matrix(2, rng), TensorShape{2}};
    const double l0 = lam(rng);
    inst.catalyst =
        QuantumState{example_extq_state({l0, 1 - l0}).matrix, TensorShape{2, 2}};
    std::uniform_int_distribution<int> rk(2, 4);
    inst.interaction = random_channel(4, 4, rk(rng), rng);
    auto rep = check_catalytic(inst);
    if (rep.gamma_identity_distance <= 0.01) continue;
    ++tested;
    if (rep.residual <= 1e-6) {
      std::printf("  counterexample at sample %d: residual %.2e\n", tested,
                  rep.residual);
      return false;
    }
  }
  if (tested < 500) {
    std::printf("  only %d admissible samples drawn\n", tested);
    return false;
  }
  return true;
}

// ---- Criterion 6: ensemble reduction on block-preserving plants -------------

bool criterion6() {
  auto rng = seeded_rng(kMasterSeed, 6);
  const int ds = 2;
  for (int inst_i = 0; inst_i < 20; ++inst_i) {
    std::uniform_int_distribution<int> nblocks_d(2, 3);
    const int nblocks = nblocks_d(rng);

    // C-Q catalyst sum_i p_i |i><i| (x) rho_E^i with planted weights.
    std::vector<double> p(nblocks);
    double tot = 0;
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (double& x : p) tot += (x = u(rng));
    for (double& x : p) x /= tot;
    Matrix tau = Matrix::Zero(2 * nblocks, 2 * nblocks);
    for (int i = 0; i < nblocks; ++i)
      tau += p[i] * tensor_product(ket(nblocks, i) * ket(nblocks, i).adjoint(),
                                   random_density_matrix(2, rng));

    CatalysisInstance inst;
    inst.system = QuantumState{random_density_matrix(ds, rng), TensorShape{ds}};
    inst.catalyst = QuantumState{tau, TensorShape{nblocks, 2}};
    inst.catalyst_cut = 1;

    std::vector<Matrix> kraus;
    std::vector<QuantumChannel> locals;
    for (int i = 0; i < nblocks; ++i) {
      locals.push_back(random_channel(ds, ds, 2, rng));
      for (const Matrix& k : locals.back().kraus)
        kraus.push_back(tensor_product(
            k, ket(nblocks, i) * ket(nblocks, i).adjoint()));
    }
    inst.interaction = make_channel(std::move(kraus));
    auto check = check_catalytic(inst);
    if (!check.catalytic) {
      std::printf("  instance %d unexpectedly non-catalytic\n", inst_i);
      return false;
    }

    SteeredFamily fam = steered_family(
        QuantumState{tau, TensorShape{nblocks, 2}}, 1);
    KIDecomposition dec = ki_decompose(fam.states, rng);
    EnsembleReduction red = ensemble_reduction(inst, dec);
    if (red.components.size() != static_cast<size_t>(nblocks)) {
      std::printf("  instance %d: %zu components, want %d\n", inst_i,
                  red.components.size(), nblocks);
      return false;
    }

    // Recovered probabilities match the plant to 1e-10.
    std::vector<double> got;
    for (const auto& c : red.components) got.push_back(c.probability);
    std::sort(got.begin(), got.end());
    std::vector<double> want = p;
    std::sort(want.begin(), want.end());
    for (int i = 0; i < nblocks; ++i)
      if (std::abs(got[i] - want[i]) > 1e-10) {
        std::printf("  instance %d: probability off by %.2e\n", inst_i,
                    std::abs(got[i] - want[i]));
        return false;
      }

    // Reconstruction matches the end-to-end channel on 20 random inputs.
    Matrix tau_c = partial_trace(tau, TensorShape{nblocks, 2}, {0});
    for (int t = 0; t < 20; ++t) {
      Matrix rho = random_density_matrix(ds, rng);
      Matrix direct = partial_trace(
          inst.interaction.apply(tensor_product(rho, tau_c)),
          TensorShape{ds, nblocks}, {0});
      Matrix viasum = Matrix::Zero(ds, ds);
      for (const auto& c : red.components)
        viasum += c.probability * c.effective.apply(rho);
      if (trace_norm(direct - viasum) > 1e-8) {
        std::printf("  instance %d: reconstruction off by %.2e\n", inst_i,
                    trace_norm(direct - viasum));
        return false;
      }
    }
  }
  return true;
}

// ---- Criterion 7: mutual-information suite ----------------------------------

bool criterion7() {
  auto rng = seeded_rng(kMasterSeed, 7);
  if (std::abs(mutual_information(example_bell_state(), 1) - 2.0) > 1e-9) {
    std::printf("  maximally entangled MI off\n");
    return false;
  }
  const double lam = 0.5 + std::sqrt(2.0) / 4;
  const double h = -(lam * std::log2(lam) + (1 - lam) * std::log2(1 - lam));
  if (std::abs(mutual_information(example_bb84_state(), 1) - h) > 1e-6) {
    std::printf("  memory-state MI off\n");
    return false;
  }

  std::uniform_real_distribution<double> lamd(0.05, 0.45);
  for (int inst = 0; inst < 100; ++inst) {
    const double l0 = lamd(rng);
    QuantumState rho = example_extq_state({l0, 1 - l0});
    // Mix unitary draws in so the preserved branch is exercised too.
    QuantumChannel ch = (inst % 5 == 0)
                            ? unitary_channel(random_unitary(2, rng))
                            : random_channel(2, 2, 2, rng);
    QuantumState out = apply_on_factor(ch, rho, 0);
    const double delta =
        mutual_information(rho, 1) - mutual_information(out, 1);
    if (delta < -1e-9) {
      std::printf("  instance %d: MI increased by %.2e\n", inst, -delta);
      return false;
    }
    if (std::abs(delta) <= 1e-9 && !is_unitary_channel(ch)) {
      std::printf("  instance %d: MI preserved by non-unitary channel\n",
                  inst);
      return false;
    }
  }
  return true;
}

// ---- Criterion 8: contagion ---------------------------------------------------

bool criterion8() {
  auto rng = seeded_rng(kMasterSeed, 8);
  std::uniform_real_distribution<double> lamd(0.05, 0.45);
  int verified = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const double l0 = lamd(rng);
    QuantumState rho = example_extq_state({l0, 1 - l0});
    Matrix v = random_isometry(2, 4, rng);
    ContagionReport rep = contagion_extend(rho, 1, v, 2, rng);
    if (!rep.marginal_full_rank) continue;  // precondition not met
    ++verified;
    if (!rep.verdict || *rep.verdict != StateVerdict::TQQ) {
      std::printf("  instance %d: extension misclassified\n", inst);
      return false;
    }
  }
  if (verified < 50) {
    std::printf("  only %d full-rank extensions drawn\n", verified);
    return false;
  }
  return true;
}

// ---- Criterion 9: Wedderburn internals ----------------------------------------

bool criterion9() {
  if (g_planted.empty()) return false;
  for (size_t i = 0; i < g_planted.size(); ++i) {
    const auto& pi = g_planted[i];
    const auto& dec = pi.structure.wedderburn;
    for (const auto& blk : dec.blocks) {
      for (int a = 0; a < blk.dim_h; ++a)
        for (int b = 0; b < blk.dim_h; ++b)
          for (int c = 0; c < blk.dim_h; ++c)
            for (int e = 0; e < blk.dim_h; ++e) {
              Matrix lhs = blk.unit(a, b) * blk.unit(c, e);
              if (b == c) lhs -= blk.unit(a, e);
              if (lhs.norm() > 1e-7) {
                std::printf("  instance %zu: unit relation residual %.2e\n", i,
                            lhs.norm());
                return false;
              }
            }
    }
    // Reconstruction of every algebra basis element from the units.
    for (const Matrix& b : pi.adjoint_algebra.basis.elements) {
      Matrix rec =
          Matrix::Zero(pi.adjoint_algebra.ambient_dim,
                       pi.adjoint_algebra.ambient_dim);
      for (const auto& blk : dec.blocks) {
        const double q1 = blk.minimal_projectors.front().trace().real();
        for (int a = 0; a < blk.dim_h; ++a)
          for (int c = 0; c < blk.dim_h; ++c)
            rec += (hs_inner(blk.unit(a, c), b) / q1) * blk.unit(a, c);
      }
      if ((rec - b).norm() > 1e-7) {
        std::printf("  instance %zu: reconstruction residual %.2e\n", i,
                    (rec - b).norm());
        return false;
      }
    }
  }
  return true;
}

// ---- Criterion 10: CLI golden files -------------------------------------------

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& dir, const std::string& args) {
  const std::string out_file = dir + "/stdout.txt";
  const std::string cmd = std::string(CATDECOMP_CLI_PATH) + " " + args +
                          " > " + out_file + " 2>/dev/null";
  CliRun r;
  int status = std::system(cmd.c_str());
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_file);
  std::ostringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

bool criterion10() {
  char tmpl[] = "/tmp/catdecomp_accept_XXXXXX";
  if (!mkdtemp(tmpl)) return false;
  const std::string dir = tmpl;

  if (run_cli(dir, "gen bb84 --out " + dir + "/bb84.json").exit_code != 0 ||
      run_cli(dir, "gen bell --out " + dir + "/bell.json").exit_code != 0) {
    std::printf("  fixture generation failed\n");
    return false;
  }
  std::ofstream(dir + "/malformed.json") << "{ this is not json";

  const std::string cmd1 =
      "state classify --in " + dir + "/bb84.json --cut 2,2 --tol 1e-9";
  const std::string cmd2 = "entropy mi --in " + dir + "/bell.json --cut 2,2";
  const std::string cmd3 = "state classify --in " + dir + "/malformed.json";

  CliRun a1 = run_cli(dir, cmd1), a2 = run_cli(dir, cmd1);
  CliRun b1 = run_cli(dir, cmd2), b2 = run_cli(dir, cmd2);
  CliRun c1 = run_cli(dir, cmd3), c2 = run_cli(dir, cmd3);

  if (a1.exit_code != 0 || b1.exit_code != 0 || c1.exit_code != 2) {
    std::printf("  exit codes: %d %d %d (want 0 0 2)\n", a1.exit_code,
                b1.exit_code, c1.exit_code);
    return false;
  }
  if (a1.out != a2.out || b1.out != b2.out || c1.out != c2.out) {
    std::printf("  reports differ across identical runs\n");
    return false;
  }
  Json rep1 = Json::parse(a1.out);
  if (rep1.at("verdict") != "TQ-Q") {
    std::printf("  memory-state verdict wrong\n");
    return false;
  }
  Json rep2 = Json::parse(b1.out);
  if (std::abs(rep2.at("mi_bits").get<double>() - 2.0) > 1e-9) {
    std::printf("  mi_bits wrong\n");
    return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*fn)();
  };
  const Criterion criteria[] = {
      {"1. fixed-point structure recovery on 50 planted channels",
       criterion1},
      {"2. commutant route matches adjoint eigenspace on 100 channels",
       criterion2},
      {"3. fixed-space dimension identity on every planted instance",
       criterion3},
      {"4. classification fixtures (named states, C-Q, planted PC-Q)",
       criterion4},
      {"5. no-catalysis falsification on 500 seeded instances", criterion5},
      {"6. ensemble reduction on 20 block-preserving instances", criterion6},
      {"7. mutual-information suite (named values + 100 local channels)",
       criterion7},
      {"8. contagion: 50 isometry extensions classify TQ-Q", criterion8},
      {"9. matrix-unit relations and reconstruction residuals", criterion9},
      {"10. CLI golden files byte-identical across runs", criterion10},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      std::printf("  exception: %s\n", e.what());
    }
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", c.name);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
