#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ltlab/commands.hpp"
#include "ltlab/report.hpp"

using namespace ltlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"ltlab: Lieb-Thirring numerical laboratory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::string config;
  app.add_option("--config", config, "JSON experiment config");
  app.add_option("--out", g.out_dir, "output directory (default: primary table to stdout)");
  app.add_option("--jobs", g.jobs, "parallel sweep levels")->check(CLI::Range(1, 1024));
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_flag("--strict", g.strict, "treat Fermi-level degeneracy as an error");

  int d_min = 1, d_max = 3, q_min = 1, q_max = 1;
  double mu = 1.0;
  auto* constants = app.add_subcommand("constants", "semiclassical constants per (d, q)");
  constants->add_option("--d-min", d_min);
  constants->add_option("--d-max", d_max);
  constants->add_option("--q-min", q_min);
  constants->add_option("--q-max", q_max);
  constants->add_option("--mu", mu);

  std::string fn = "psi";
  int d = 1;
  std::vector<double> ks;
  double k_min = 0.0, k_max = 4.0;
  int k_count = 41;
  auto* resp = app.add_subcommand("response", "Lindhard-type response functions on a k grid");
  resp->add_option("--fn", fn, "phi, psi or weight1d")->required();
  resp->add_option("--d", d);
  resp->add_option("--k", ks, "explicit k values (overrides the linear grid)");
  resp->add_option("--k-min", k_min);
  resp->add_option("--k-max", k_max);
  resp->add_option("--k-count", k_count);
  resp->add_option("--mu", mu, "chemical potential for weight1d");

  int grid = 400;
  auto* rum = app.add_subcommand("rumin", "Rumin-type constant khat(d) and its profile");
  rum->add_option("--d", d);
  rum->add_option("--grid", grid, "log-grid points before refinement")->check(CLI::Range(8, 1000000));

  auto* box = app.add_subcommand("box-run", "relative energy of one box configuration");

  std::string kind;
  auto* sweep = app.add_subcommand("sweep", "multi-level experiment driven by the config");
  sweep->add_option("--kind", kind, "thermo, peierls, second-order, li-yau, rumin, temperature");

  int pairs = 200, dim_min = 2, dim_max = 8, samples = 200;
  auto* mat = app.add_subcommand("matrix-oracle", "finite-dimensional identities on random matrices");
  mat->add_option("--pairs", pairs);
  mat->add_option("--dim-min", dim_min);
  mat->add_option("--dim-max", dim_max);
  mat->add_option("--samples", samples);

  std::string fault;
  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_option("--inject-fault", fault)->group("");  // hidden, for harness tests

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }
  if (!config.empty()) g.config = config;

  auto& out = std::cout;
  auto& err = std::cerr;
  return guarded([&]() -> int {
    if (*constants) return cmd_constants(g, d_min, d_max, q_min, q_max, mu, out);
    if (*resp) {
      if (ks.empty()) ks = linspace(k_min, k_max, k_count);
      return cmd_response(g, fn, d, ks, mu, out);
    }
    if (*rum) return cmd_rumin(g, d, grid, out);
    if (*box) return cmd_box_run(g, out);
    if (*sweep) return cmd_sweep(g, kind, out);
    if (*mat) return cmd_matrix_oracle(g, pairs, dim_min, dim_max, samples, out);
    return cmd_accept(g, fault, out, err);
  }, err);
}
