#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "magvol/magvol.hpp"

namespace {

void add_common(CLI::App* cmd, magvol::RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "Output format: json|csv (csv only for sweep commands)");
  cmd->add_option("--workers", cfg.workers, "Worker count recorded in the report")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "magvol: magnitude of finite metric spaces, intrinsic volumes of convex bodies,\n"
      "and bound-verification pipelines in hypermetric normed spaces"};
  app.require_subcommand(1);

  magvol::RunConfig cfg;
  if (const char* env = std::getenv("MAGVOL_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) cfg.workers = w;
  }

  auto* magnitude = app.add_subcommand(
      "magnitude", "Magnitude of a finite point set under a measure norm or lp norm");
  magnitude->add_option("--points", cfg.points_path, "Points JSON: {\"points\": [[...], ...]}")
      ->required();
  magnitude->add_option("--measure", cfg.measure_spec,
                        "Norm spec: l1 | l2:N | random:N:seed | file:PATH | lp:P");
  add_common(magnitude, cfg);

  auto* maxdiv = app.add_subcommand("maxdiv", "Maximum diversity of a finite point set");
  maxdiv->add_option("--points", cfg.points_path, "Points JSON")->required();
  maxdiv->add_option("--measure", cfg.measure_spec, "Norm spec (as for magnitude)");
  maxdiv->add_option("--tol", cfg.tol, "KKT certification tolerance");
  maxdiv->add_option("--max-iter", cfg.max_iter, "Iteration cap for the simplex solver");
  add_common(maxdiv, cfg);

  auto* l1iv = app.add_subcommand("l1iv", "l1 intrinsic volumes V'_m of a convex body");
  l1iv->add_option("--body", cfg.body_path, "Body JSON")->required();
  add_common(l1iv, cfg);

  auto* htiv =
      app.add_subcommand("htiv", "Holmes-Thompson intrinsic volumes for a generating measure");
  htiv->add_option("--body", cfg.body_path, "Body JSON")->required();
  htiv->add_option("--measure", cfg.measure_spec, "Measure spec: l1 | l2:N | random:N:seed | file:PATH");
  htiv->add_flag("--normalized", cfg.normalized, "Also emit mu_m / omega_m");
  add_common(htiv, cfg);

  auto* bound = app.add_subcommand(
      "bound", "Magnitude upper bounds: sum 4^{-m} mu_m and exp(mu_1/4)");
  bound->add_option("--body", cfg.body_path, "Body JSON")->required();
  bound->add_option("--measure", cfg.measure_spec, "Measure spec");
  add_common(bound, cfg);

  auto* l1exact =
      app.add_subcommand("l1exact", "Exact l1 magnitude of a full-dimensional body");
  l1exact->add_option("--body", cfg.body_path, "Body JSON")->required();
  add_common(l1exact, cfg);

  auto* mahler = app.add_subcommand(
      "mahler", "Mahler product vol(Z) * vol(polar Z) of a zonotope vs 4^n/n!");
  mahler->add_option("--body,--generators", cfg.body_path, "Zonotope body JSON")->required();
  mahler->add_option("--samples", cfg.samples, "Monte Carlo samples for the polar volume");
  mahler->add_option("--seed", cfg.seed, "Monte Carlo seed");
  add_common(mahler, cfg);

  auto* sudakov = app.add_subcommand(
      "sudakov", "Greedy epsilon-packing and the packing magnitude at t* = log(2N)/eps");
  sudakov->add_option("--body", cfg.body_path, "Body JSON")->required();
  sudakov->add_option("--epsilon", cfg.epsilon, "Separation distance")->required();
  sudakov->add_option("--seed", cfg.seed, "Start-point seed");
  sudakov->add_option("--grid-k", cfg.grid_k, "Candidate grid resolution per side");
  add_common(sudakov, cfg);

  auto* steiner = app.add_subcommand(
      "steiner", "Exact planar check of vol(K + t[0,1]^2) against the V' polynomial");
  steiner->add_option("--body", cfg.body_path, "Body JSON (n=2)")->required();
  steiner->add_option("--ts", cfg.ts, "Cube scales (default 0.25 0.5 1 2)");
  add_common(steiner, cfg);

  auto* wills = app.add_subcommand("wills", "Lattice point count vs the l1 Wills functional");
  wills->add_option("--body", cfg.body_path, "Body JSON (n<=3)")->required();
  add_common(wills, cfg);

  auto* smallt = app.add_subcommand(
      "smallt", "Small-t slope check: (grid magnitude - 1)/t vs mu_1/4");
  smallt->add_option("--body", cfg.body_path, "Body JSON")->required();
  smallt->add_option("--measure", cfg.measure_spec, "Measure spec");
  smallt->add_option("--ts", cfg.ts, "Scales (default 0.1 0.05 0.01)");
  smallt->add_option("--grid-k", cfg.grid_k, "Grid resolution per side");
  add_common(smallt, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return magvol::run_command(cfg, std::cout, std::cerr);
}
