#include "ust/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ust/harness/parallel.hpp"
#include "ust/harness/svg_plot.hpp"
#include "ust/harness/table_io.hpp"

namespace ust {

namespace {

using ConfigKv = std::vector<std::pair<std::string, std::string>>;

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }
std::string fmt_i64(std::int64_t v) { return std::to_string(v); }
std::string fmt_f(double v) { return TableWriter::format_double(v); }

std::string join_i64(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join_f(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt_f(v[i]);
  }
  return out;
}

ConfigKv common_config(const CommonOptions& common) {
  return {{"seed", fmt_u64(common.seed)},
          {"workers", std::to_string(common.workers)},
          {"container_factor", fmt_f(common.container_factor)}};
}

}  // namespace

BetaCommandResult cmd_beta(const BetaCommand& cmd) {
  BetaCommandResult result;
  const RngStream base(cmd.common.seed, 0);
  result.estimate = estimate_beta(cmd.radii, cmd.samples, base, cmd.common.workers);

  // Tail decay at the largest radius, refit from dedicated samples.
  std::vector<std::int64_t> sorted = cmd.radii;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t tail_radius = sorted.back();
  const std::size_t tail_samples = std::min<std::size_t>(cmd.samples, 2000);
  std::vector<double> lengths(tail_samples);
  parallel_for(tail_samples, cmd.common.workers, [&](std::size_t k) {
    RngStream stream = base.child2(0x7A11, k);
    lengths[k] = double(lerw_length_sample(tail_radius, stream).length);
  });
  const std::vector<double> kappa_grid = {1.0, 1.5, 2.0, 2.5, 3.0};
  result.tail = fit_upper_tail(lengths, kappa_grid);

  if (!cmd.common.out_prefix.empty()) {
    ConfigKv config = common_config(cmd.common);
    config.push_back({"radii", join_i64(cmd.radii)});
    config.push_back({"samples_per_radius", std::to_string(cmd.samples)});
    const std::string csv_path = cmd.common.out_prefix + "_beta.csv";
    TableWriter csv(csv_path, config);
    csv.line("n,mean_length,std_error,ci_low,ci_high,samples");
    for (const RadiusStat& rs : result.estimate.per_radius) {
      csv.line(join_csv({fmt_i64(rs.n), fmt_f(rs.mean_length), fmt_f(rs.std_error),
                         fmt_f(rs.ci_low), fmt_f(rs.ci_high),
                         std::to_string(rs.samples)}));
    }
    csv.line(join_csv({"slope", fmt_f(result.estimate.slope), "std_error",
                       fmt_f(result.estimate.std_error), "reference", "1.624"}));
    result.files.push_back(csv_path);

    if (cmd.common.plot) {
      PlotSpec spec;
      spec.title = "Loop-erased walk length vs radius (log-log)";
      spec.x_label = "radius n";
      spec.y_label = "mean erased length";
      spec.log_x = true;
      spec.log_y = true;
      PlotSeries data;
      data.label = "measured";
      for (const RadiusStat& rs : result.estimate.per_radius) {
        data.x.push_back(double(rs.n));
        data.y.push_back(rs.mean_length);
      }
      PlotSeries fit;
      fit.label = "fit slope " + fmt_f(result.estimate.slope);
      fit.color = "#d62728";
      fit.draw_points = false;
      for (const RadiusStat& rs : result.estimate.per_radius) {
        fit.x.push_back(double(rs.n));
        fit.y.push_back(std::exp(result.estimate.intercept +
                                 result.estimate.slope * std::log(double(rs.n))));
      }
      spec.series = {data, fit};
      const std::string svg_path = cmd.common.out_prefix + "_beta.svg";
      write_svg_plot(svg_path, spec);
      result.files.push_back(svg_path);
    }
  }
  return result;
}

CollisionsCommandResult cmd_collisions(const CollisionsCommand& cmd) {
  CollisionsCommandResult result;
  Theorem1Options opt;
  opt.r = cmd.r;
  opt.trees = cmd.trees;
  opt.mc_runs = cmd.mc_runs;
  opt.eps_grid = cmd.eps_grid;
  opt.container_factor = cmd.common.container_factor;
  opt.seed = cmd.common.seed;
  opt.workers = cmd.common.workers;
  if (cmd.trees == 0) {
    result.summary.eps_grid = cmd.eps_grid;
    return result;  // nothing to do; caller warns
  }
  result.reports = theorem1_experiment(opt, &result.summary);

  if (!cmd.demo_targets.empty()) {
    const std::int64_t max_target =
        *std::max_element(cmd.demo_targets.begin(), cmd.demo_targets.end());
    const std::int64_t demo_region =
        std::int64_t(std::ceil(double(max_target) / cmd.demo_eps)) + 1;
    WilsonConfig demo_cfg;
    demo_cfg.region_radius = demo_region;
    demo_cfg.container_factor = cmd.common.container_factor;
    RngStream demo_rng = RngStream(cmd.common.seed, 0xDE30).child(0);
    const SpanningTree demo_tree = wilson_infinity_approx(demo_cfg, demo_rng);
    result.demo =
        infinite_collision_demo(demo_tree, cmd.demo_eps, cmd.demo_targets,
                                cmd.demo_runs, RngStream(cmd.common.seed, 0xDE31));
  }

  if (!cmd.common.out_prefix.empty()) {
    ConfigKv config = common_config(cmd.common);
    config.push_back({"r", fmt_i64(cmd.r)});
    config.push_back({"trees", std::to_string(cmd.trees)});
    config.push_back({"mc_runs", std::to_string(cmd.mc_runs)});
    config.push_back({"eps_grid", join_f(cmd.eps_grid)});

    const std::string jsonl_path = cmd.common.out_prefix + "_collisions.jsonl";
    TableWriter jsonl(jsonl_path, config);
    for (const MomentReport& rep : result.reports) {
      std::ostringstream js;
      js << "{\"tree\":" << rep.tree_index << ",\"r\":" << rep.r
         << ",\"ball_size\":" << rep.ball_size << ",\"ur_size\":" << rep.ur_size
         << ",\"mu0\":" << rep.mu_origin << ",\"ez\":" << fmt_f(rep.ez)
         << ",\"ez2\":" << fmt_f(rep.ez2)
         << ",\"ez2_exact\":" << (rep.ez2_exact ? "true" : "false")
         << ",\"even_series\":" << fmt_f(rep.even_series)
         << ",\"green\":" << fmt_f(rep.green_electric)
         << ",\"reff_origin\":" << fmt_f(rep.r_eff_origin)
         << ",\"reff_ur\":" << fmt_f(rep.r_eff_ur) << ",\"mc_ez\":" << fmt_f(rep.mc_ez)
         << ",\"mc_ez_se\":" << fmt_f(rep.mc_ez_se)
         << ",\"mc_ez2\":" << fmt_f(rep.mc_ez2)
         << ",\"mc_ez2_se\":" << fmt_f(rep.mc_ez2_se)
         << ",\"upper1\":" << (rep.upper_first_ok ? "true" : "false")
         << ",\"upper2\":" << (rep.upper_second_ok ? "true" : "false") << ",\"lower\":[";
      for (std::size_t e = 0; e < rep.lower_ok.size(); ++e) {
        js << (e ? "," : "") << (rep.lower_ok[e] ? "true" : "false");
      }
      js << "],\"window_prob\":[";
      for (std::size_t e = 0; e < rep.window_prob.size(); ++e) {
        js << (e ? "," : "") << fmt_f(rep.window_prob[e]);
      }
      js << "]}";
      jsonl.line(js.str());
    }
    result.files.push_back(jsonl_path);

    const std::string csv_path = cmd.common.out_prefix + "_collisions_summary.csv";
    TableWriter csv(csv_path, config);
    csv.line("eps,threshold_eps_r,lower_failures,lower_failure_fraction,"
             "window_trees,window_prob,window_se,window_min_prob,window_threshold");
    for (std::size_t e = 0; e < result.summary.eps_grid.size(); ++e) {
      csv.line(join_csv(
          {fmt_f(result.summary.eps_grid[e]),
           fmt_f(result.summary.eps_grid[e] * double(cmd.r)),
           std::to_string(result.summary.lower_failures[e]),
           fmt_f(result.summary.lower_failure_fraction[e]),
           std::to_string(result.summary.window_trees[e]),
           fmt_f(result.summary.window_prob[e]), fmt_f(result.summary.window_se[e]),
           fmt_f(result.summary.window_min_prob[e]),
           fmt_f(result.summary.window_threshold[e])}));
    }
    result.files.push_back(csv_path);

    const std::string tree_csv_path = cmd.common.out_prefix + "_collisions_trees.csv";
    TableWriter tree_csv(tree_csv_path, config);
    tree_csv.line(
        "r,tree,ball_size,ur_size,mu0,ez_exact,ez2,ez2_exact,even_series,g00,"
        "reff_origin,reff_ur,mc_ez,mc_ez_se,upper1,upper2");
    for (const MomentReport& rep : result.reports) {
      tree_csv.line(join_csv(
          {fmt_i64(rep.r), std::to_string(rep.tree_index),
           std::to_string(rep.ball_size), std::to_string(rep.ur_size),
           std::to_string(rep.mu_origin), fmt_f(rep.ez), fmt_f(rep.ez2),
           rep.ez2_exact ? "1" : "0", fmt_f(rep.even_series),
           fmt_f(rep.green_electric), fmt_f(rep.r_eff_origin), fmt_f(rep.r_eff_ur),
           fmt_f(rep.mc_ez), fmt_f(rep.mc_ez_se), rep.upper_first_ok ? "1" : "0",
           rep.upper_second_ok ? "1" : "0"}));
    }
    result.files.push_back(tree_csv_path);

    if (!result.demo.empty()) {
      const std::string demo_path = cmd.common.out_prefix + "_collisions_demo.csv";
      TableWriter demo_csv(demo_path, config);
      demo_csv.line("N,radius,runs,p_hat,se,threshold");
      for (const CollisionDemoRow& row : result.demo) {
        demo_csv.line(join_csv({fmt_i64(row.n_target), fmt_i64(row.radius),
                                std::to_string(row.runs), fmt_f(row.p_hat),
                                fmt_f(row.se), fmt_f(row.threshold)}));
      }
      result.files.push_back(demo_path);
    }

    if (cmd.common.plot) {
      PlotSpec spec;
      spec.title = "Lower-bound failure fraction vs eps (r=" + std::to_string(cmd.r) + ")";
      spec.x_label = "eps";
      spec.y_label = "fraction of trees with E[Z] < eps r";
      PlotSeries s;
      s.label = "failure fraction";
      for (std::size_t e = 0; e < result.summary.eps_grid.size(); ++e) {
        s.x.push_back(result.summary.eps_grid[e]);
        s.y.push_back(result.summary.lower_failure_fraction[e]);
      }
      spec.series = {s};
      const std::string svg_path = cmd.common.out_prefix + "_collisions_eps.svg";
      write_svg_plot(svg_path, spec);
      result.files.push_back(svg_path);
    }
  }
  return result;
}

ResistanceSurveyResult cmd_resistance(const ResistanceCommand& cmd) {
  ResistanceSurveyResult result;
  const double beta = cmd.beta_exponent;

  for (std::int64_t r : cmd.r_list) {
    WilsonConfig cfg;
    cfg.region_radius = r + 1;
    cfg.container_factor = cmd.common.container_factor;
    cfg.validate();
    const std::vector<LatticePoint> order =
        spiral_order(Box{LatticePoint{}, cfg.region_radius, Norm::L2});
    std::vector<ResistanceReport> rows(cmd.trees);
    parallel_for(cmd.trees, cmd.common.workers, [&](std::size_t i) {
      RngStream sampler = RngStream(cmd.common.seed, i).child(0x5E);
      const SpanningTree tree = wilson_infinity_approx(cfg, sampler, &order);
      rows[i] = resistance_profile(tree, r);
    });
    for (double lambda : cmd.lambda_grid) {
      ResistanceCell cell;
      cell.r = r;
      cell.lambda = lambda;
      cell.threshold = std::pow(double(r), beta) / std::pow(lambda, 1.0 + 4.0 * beta);
      std::size_t hits = 0;
      for (const ResistanceReport& row : rows) {
        if (row.r_eff_ur >= cell.threshold) ++hits;
      }
      cell.exceed_fraction = cmd.trees ? double(hits) / double(cmd.trees) : 0.0;
      result.cells.push_back(cell);
    }
    for (const ResistanceReport& row : rows) {
      result.rows.push_back(row);
      result.row_r.push_back(r);
    }
  }

  if (cmd.container_sweep && !cmd.r_list.empty()) {
    const std::int64_t r = cmd.r_list.front();
    for (double factor : {2.0, 4.0, 8.0}) {
      WilsonConfig cfg;
      cfg.region_radius = r + 1;
      cfg.container_factor = factor;
      cfg.validate();
      const std::vector<LatticePoint> order =
          spiral_order(Box{LatticePoint{}, cfg.region_radius, Norm::L2});
      const std::size_t sweep_trees = std::min<std::size_t>(cmd.trees, 100);
      std::vector<double> reff(sweep_trees);
      parallel_for(sweep_trees, cmd.common.workers, [&](std::size_t i) {
        RngStream sampler = RngStream(cmd.common.seed, i).child(0x5F);
        const SpanningTree tree = wilson_infinity_approx(cfg, sampler, &order);
        reff[i] = resistance_profile(tree, r).r_eff_ur;
      });
      const MeanStats ms = mean_stats(reff);
      result.container_mean_reff.push_back({factor, ms.mean});
    }
  }

  if (!cmd.common.out_prefix.empty()) {
    ConfigKv config = common_config(cmd.common);
    config.push_back({"r_list", join_i64(cmd.r_list)});
    config.push_back({"trees", std::to_string(cmd.trees)});
    config.push_back({"lambda_grid", join_f(cmd.lambda_grid)});
    config.push_back({"beta", fmt_f(beta)});

    const std::string rows_path = cmd.common.out_prefix + "_resistance_trees.csv";
    TableWriter rows_csv(rows_path, config);
    rows_csv.line("r,reff_origin,reff_ur,green_origin,mu0,ball_size,ur_size,"
                  "ur_intrinsic_radius");
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const ResistanceReport& row = result.rows[i];
      rows_csv.line(join_csv({fmt_i64(result.row_r[i]), fmt_f(row.r_eff_origin),
                              fmt_f(row.r_eff_ur), fmt_f(row.green_origin),
                              std::to_string(row.mu_origin),
                              std::to_string(row.ball_size), std::to_string(row.ur_size),
                              fmt_i64(row.ur_intrinsic_radius)}));
    }
    result.files.push_back(rows_path);

    const std::string cells_path = cmd.common.out_prefix + "_resistance_cells.csv";
    TableWriter cells_csv(cells_path, config);
    cells_csv.line("r,lambda,threshold,exceed_fraction");
    for (const ResistanceCell& cell : result.cells) {
      cells_csv.line(join_csv({fmt_i64(cell.r), fmt_f(cell.lambda),
                               fmt_f(cell.threshold), fmt_f(cell.exceed_fraction)}));
    }
    result.files.push_back(cells_path);

    if (cmd.container_sweep) {
      const std::string sweep_path = cmd.common.out_prefix + "_container_sweep.csv";
      TableWriter sweep_csv(sweep_path, config);
      sweep_csv.line("container_factor,mean_reff_ur");
      for (const auto& [factor, mean] : result.container_mean_reff) {
        sweep_csv.line(join_csv({fmt_f(factor), fmt_f(mean)}));
      }
      result.files.push_back(sweep_path);
    }

    if (cmd.common.plot && !cmd.lambda_grid.empty()) {
      PlotSpec spec;
      spec.title = "Resistance exceedance vs lambda";
      spec.x_label = "lambda";
      spec.y_label = "P(R >= r^beta / lambda^(1+4beta))";
      for (std::int64_t r : cmd.r_list) {
        PlotSeries s;
        s.label = "r=" + std::to_string(r);
        for (const ResistanceCell& cell : result.cells) {
          if (cell.r == r) {
            s.x.push_back(cell.lambda);
            s.y.push_back(cell.exceed_fraction);
          }
        }
        spec.series.push_back(s);
      }
      const std::string svg_path = cmd.common.out_prefix + "_resistance.svg";
      write_svg_plot(svg_path, spec);
      result.files.push_back(svg_path);
    }
  }
  return result;
}

std::vector<std::string> cmd_sample_ust(const SampleUstCommand& cmd) {
  std::vector<std::string> files;
  if (cmd.common.out_prefix.empty()) {
    throw InvalidConfig("sample-ust: output prefix required");
  }
  for (std::size_t i = 0; i < cmd.count; ++i) {
    RngStream rng = RngStream(cmd.common.seed, i).child(0x54);
    SpanningTree tree;
    if (cmd.boundary == WilsonConfig::Boundary::Wired) {
      const Box box{LatticePoint{}, cmd.region_radius, Norm::Linf};
      tree = wilson_wired(box, rng);
    } else {
      WilsonConfig cfg;
      cfg.region_radius = cmd.region_radius;
      cfg.container_factor = cmd.common.container_factor;
      tree = wilson_infinity_approx(cfg, rng);
    }
    const std::string path = cmd.common.out_prefix + "_tree" + std::to_string(i) + ".txt";
    save_tree_file(tree, path);
    files.push_back(path);
  }
  return files;
}

}  // namespace ust
