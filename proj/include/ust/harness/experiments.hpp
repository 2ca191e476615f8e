#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ust/collision.hpp"
#include "ust/network.hpp"
#include "ust/walk.hpp"
#include "ust/wilson.hpp"

namespace ust {

struct CommonOptions {
  std::uint64_t seed = 1;
  int workers = 1;
  double container_factor = 4.0;
  std::string out_prefix;  // empty = no files
  bool plot = false;
};

struct BetaCommand {
  std::vector<std::int64_t> radii = {16, 32, 64, 128, 256, 512};
  std::size_t samples = 2000;
  CommonOptions common;
};

struct BetaCommandResult {
  BetaEstimate estimate;
  TailFit tail;  // upper-tail decay at the largest radius
  std::vector<std::string> files;
};

BetaCommandResult cmd_beta(const BetaCommand& cmd);

struct CollisionsCommand {
  std::int64_t r = 50;
  std::size_t trees = 200;
  std::size_t mc_runs = 4000;
  std::vector<double> eps_grid = {0.5, 0.2, 0.1, 0.05, 0.02};
  // Optional growing-collision demo on the first sampled tree.
  std::vector<std::int64_t> demo_targets;
  double demo_eps = 0.25;
  std::size_t demo_runs = 2000;
  CommonOptions common;
};

struct CollisionsCommandResult {
  std::vector<MomentReport> reports;
  Theorem1Summary summary;
  std::vector<CollisionDemoRow> demo;
  std::vector<std::string> files;
};

CollisionsCommandResult cmd_collisions(const CollisionsCommand& cmd);

struct ResistanceCommand {
  std::vector<std::int64_t> r_list = {50};
  std::size_t trees = 200;
  std::vector<double> lambda_grid = {2, 4, 8, 16};
  double beta_exponent = 1.624;  // plug-in growth exponent
  bool container_sweep = false;  // repeat at container factors {2,4,8}
  CommonOptions common;
};

struct ResistanceCell {
  std::int64_t r = 0;
  double lambda = 0.0;
  double threshold = 0.0;       // r^beta / lambda^(1+4 beta)
  double exceed_fraction = 0.0; // P(R(0 <-> U\U_r) >= threshold)
};

struct ResistanceSurveyResult {
  std::vector<ResistanceReport> rows;     // one per (tree, r)
  std::vector<std::int64_t> row_r;        // r for each row
  std::vector<ResistanceCell> cells;
  // Container sensitivity: mean R(0 <-> U\U_r) per factor, when requested.
  std::vector<std::pair<double, double>> container_mean_reff;
  std::vector<std::string> files;
};

ResistanceSurveyResult cmd_resistance(const ResistanceCommand& cmd);

struct SampleUstCommand {
  std::int64_t region_radius = 25;
  std::size_t count = 1;
  WilsonConfig::Boundary boundary = WilsonConfig::Boundary::InfinityApprox;
  CommonOptions common;  // out_prefix required
};

std::vector<std::string> cmd_sample_ust(const SampleUstCommand& cmd);

}  // namespace ust
