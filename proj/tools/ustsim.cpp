#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ust/harness/experiments.hpp"
#include "ust/harness/parallel.hpp"
#include "ust/harness/table_io.hpp"
#include "ust/harness/validate.hpp"

namespace {

void print_files(const std::vector<std::string>& files) {
  for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ustsim: three-dimensional uniform spanning tree sampler and killed-walk "
      "collision experiments"};
  app.set_config("--config", "", "Key=value config file; command-line flags win");
  app.require_subcommand(1);

  ust::CommonOptions common;
  common.workers = ust::default_worker_count();
  app.add_option("--seed", common.seed, "Base seed; fully determines all output")
      ->capture_default_str();
  app.add_option("--workers", common.workers,
                 "Worker threads (UST_WORKERS overrides the default)")
      ->capture_default_str();
  app.add_option("--container-factor", common.container_factor,
                 "Container radius as a multiple of the region radius")
      ->capture_default_str();
  app.add_option("--out", common.out_prefix, "Output path prefix");
  app.add_flag("--plot", common.plot, "Also write SVG plots");

  auto* validate_cmd = app.add_subcommand("validate", "Run the built-in oracle suite");
  std::string inject_fault;
  validate_cmd->add_option("--inject-fault", inject_fault,
                           "Deliberately corrupt one check (self-test of the harness): "
                           "loop_erase");

  auto* beta_cmd =
      app.add_subcommand("beta", "Estimate the loop-erased walk growth exponent");
  ust::BetaCommand beta;
  beta_cmd->add_option("--radii", beta.radii, "Ball radii")->capture_default_str();
  beta_cmd->add_option("--samples", beta.samples, "Samples per radius")
      ->capture_default_str();

  auto* sample_cmd = app.add_subcommand("sample-ust", "Sample trees to files");
  ust::SampleUstCommand sample;
  std::string mode = "infinity";
  sample_cmd->add_option("--region-radius", sample.region_radius, "Region radius")
      ->capture_default_str();
  sample_cmd->add_option("--count", sample.count, "Number of trees")
      ->capture_default_str();
  sample_cmd->add_option("--mode", mode, "wired | infinity")->capture_default_str();

  auto* collisions_cmd =
      app.add_subcommand("collisions", "Collision moments of two killed walks");
  ust::CollisionsCommand collisions;
  collisions_cmd->add_option("--r", collisions.r, "Intrinsic ball radius")
      ->capture_default_str();
  collisions_cmd->add_option("--trees", collisions.trees, "Sampled trees")
      ->capture_default_str();
  collisions_cmd->add_option("--mc-runs", collisions.mc_runs, "Monte Carlo runs per tree")
      ->capture_default_str();
  collisions_cmd->add_option("--eps", collisions.eps_grid, "Epsilon grid")
      ->capture_default_str();
  collisions_cmd->add_option("--demo-targets", collisions.demo_targets,
                             "Collision counts N for the growing-ball demo");
  collisions_cmd->add_option("--demo-eps", collisions.demo_eps, "Demo epsilon")
      ->capture_default_str();
  collisions_cmd->add_option("--demo-runs", collisions.demo_runs, "Demo Monte Carlo runs")
      ->capture_default_str();

  auto* resistance_cmd =
      app.add_subcommand("resistance", "Effective-resistance survey on sampled trees");
  ust::ResistanceCommand resistance;
  resistance_cmd->add_option("--r", resistance.r_list, "Radii")->capture_default_str();
  resistance_cmd->add_option("--trees", resistance.trees, "Sampled trees")
      ->capture_default_str();
  resistance_cmd->add_option("--lambda", resistance.lambda_grid, "Lambda grid")
      ->capture_default_str();
  resistance_cmd->add_option("--beta", resistance.beta_exponent,
                             "Plug-in growth exponent")
      ->capture_default_str();
  resistance_cmd->add_flag("--container-sweep", resistance.container_sweep,
                           "Also compare container factors {2,4,8}");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) {
      const ust::ValidationReport report =
          ust::run_validation(common.seed, common.workers, inject_fault);
      for (const ust::ValidationCheck& check : report.checks) {
        std::printf("[%s] %s - %s\n", check.passed ? "PASS" : "FAIL",
                    check.name.c_str(), check.detail.c_str());
      }
      if (!common.out_prefix.empty()) {
        ust::TableWriter out(common.out_prefix + "_validate.csv",
                             {{"seed", std::to_string(common.seed)},
                              {"inject_fault", inject_fault}});
        out.line("check,passed,detail");
        for (const ust::ValidationCheck& check : report.checks) {
          out.line(ust::join_csv({check.name, check.passed ? "1" : "0", check.detail}));
        }
      }
      std::printf("%s\n", report.all_passed ? "validation passed" : "validation FAILED");
      return report.all_passed ? 0 : 1;
    }
    if (*beta_cmd) {
      beta.common = common;
      const ust::BetaCommandResult result = ust::cmd_beta(beta);
      std::printf("slope %.6f +/- %.6f (reference 1.624), r^2 %.6f\n",
                  result.estimate.slope, result.estimate.std_error,
                  result.estimate.r_squared);
      for (const ust::RadiusStat& rs : result.estimate.per_radius) {
        std::printf("  n=%lld mean=%.3f se=%.3f [%zu samples]\n",
                    (long long)rs.n, rs.mean_length, rs.std_error, rs.samples);
      }
      std::printf("upper tail decay rate %.3f (r^2 %.3f)\n", result.tail.rate,
                  result.tail.r_squared);
      print_files(result.files);
      return 0;
    }
    if (*sample_cmd) {
      sample.common = common;
      sample.boundary = mode == "wired" ? ust::WilsonConfig::Boundary::Wired
                                        : ust::WilsonConfig::Boundary::InfinityApprox;
      if (common.out_prefix.empty()) {
        std::fprintf(stderr, "sample-ust requires --out\n");
        return 2;
      }
      print_files(ust::cmd_sample_ust(sample));
      return 0;
    }
    if (*collisions_cmd) {
      collisions.common = common;
      if (collisions.trees == 0) {
        std::fprintf(stderr, "warning: --trees 0, nothing to sample\n");
        return 0;
      }
      const ust::CollisionsCommandResult result = ust::cmd_collisions(collisions);
      std::printf("r=%lld trees=%zu: upper-bound violations %zu/%zu\n",
                  (long long)collisions.r, result.reports.size(),
                  result.summary.upper_first_violations +
                      result.summary.upper_second_violations,
                  2 * result.reports.size());
      for (std::size_t e = 0; e < result.summary.eps_grid.size(); ++e) {
        std::printf(
            "  eps=%.3f lower-fail %zu (%.4f)  window p=%.5f (min %.5f, need >= %.5f)\n",
            result.summary.eps_grid[e], result.summary.lower_failures[e],
            result.summary.lower_failure_fraction[e], result.summary.window_prob[e],
            result.summary.window_min_prob[e], result.summary.window_threshold[e]);
      }
      for (const ust::CollisionDemoRow& row : result.demo) {
        std::printf("  demo N=%lld radius=%lld p=%.5f (se %.5f, need >= %.5f)\n",
                    (long long)row.n_target, (long long)row.radius, row.p_hat, row.se,
                    row.threshold);
      }
      print_files(result.files);
      return 0;
    }
    if (*resistance_cmd) {
      resistance.common = common;
      const ust::ResistanceSurveyResult result = ust::cmd_resistance(resistance);
      for (const ust::ResistanceCell& cell : result.cells) {
        std::printf("r=%lld lambda=%.1f threshold=%.4f exceed=%.4f\n",
                    (long long)cell.r, cell.lambda, cell.threshold,
                    cell.exceed_fraction);
      }
      for (const auto& [factor, mean] : result.container_mean_reff) {
        std::printf("container factor %.1f: mean R(0<->U\\U_r) %.4f\n", factor, mean);
      }
      print_files(result.files);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
