#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "eventwarp/commands.hpp"

namespace {

constexpr const char* kVersion = "eventwarp 0.1.0";

int parse_k_range(const std::string& text, eventwarp::RunConfig& config) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) return 1;
  try {
    config.k_min = std::stoi(text.substr(0, sep));
    config.k_max = std::stoi(text.substr(sep + 2));
  } catch (const std::exception&) {
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Registration and clustering of event-time curves via pairwise dynamic time warping"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  eventwarp::RunConfig config;
  double domain_min = 0.0, domain_max = 1.0;
  std::string mode = "standardized";
  std::string k_range;
  std::string mu = "linear";
  std::string family = "sine";
  std::string spacing = "quantile";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--domain-min", domain_min, "Domain lower endpoint")->capture_default_str();
    cmd->add_option("--domain-max", domain_max, "Domain upper endpoint")->capture_default_str();
    cmd->add_option("--out-dir", config.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
  };
  auto add_curve_input = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--input", config.input, "Event CSV (curve_id,event_time[,value])");
    if (required) opt->required();
    cmd->add_option("--mode", mode, "Curve values: standardized or raw")
        ->check(CLI::IsMember({"standardized", "raw"}))
        ->capture_default_str();
    cmd->add_option("--delta", config.delta, "Slope of the spread for many-to-one alignments")
        ->capture_default_str();
    cmd->add_flag("--force-last-event", config.force_last_event,
                  "Force the last true events of each pair to be mapped together");
  };

  CLI::App* align = app.add_subcommand("align", "Align two curves and print the correspondence");
  add_common(align);
  add_curve_input(align, true);
  align->add_option("--id-a", config.id_a, "First curve id")->required();
  align->add_option("--id-b", config.id_b, "Second curve id")->required();

  CLI::App* reg = app.add_subcommand("register", "Estimate warping functions and register the sample");
  add_common(reg);
  add_curve_input(reg, true);
  reg->add_option("--grid", config.grid_size, "Common grid size")->capture_default_str();
  reg->add_flag("--recenter", config.recenter,
                "Re-center estimates so their sample average is the identity");

  CLI::App* cluster = app.add_subcommand("cluster", "Cluster curves by their warping estimates");
  add_common(cluster);
  add_curve_input(cluster, false);
  cluster->add_option("--warpings", config.warpings_input,
                      "Reuse a warpings.csv instead of raw events");
  cluster->add_option("--grid", config.grid_size, "Common grid size")->capture_default_str();
  cluster->add_option("--k", config.k, "Fixed number of clusters (skips the scan)");
  cluster->add_option("--k-range", k_range, "Scan range A..B (default 2..min(10, n-1))");
  cluster->add_option("--n-init", config.n_init, "Clustering restarts")->capture_default_str();
  cluster->add_option("--max-iter", config.max_iter, "Iteration cap per restart")
      ->capture_default_str();

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic time-warped sample");
  add_common(simulate);
  simulate->add_option("--n", config.scenario.n, "Number of curves")->capture_default_str();
  simulate->add_option("--events-min", config.scenario.events_min, "Minimum events per curve")
      ->capture_default_str();
  simulate->add_option("--events-max", config.scenario.events_max, "Maximum events per curve")
      ->capture_default_str();
  simulate->add_option("--mu", mu, "Base cumulative curve: linear or exp")
      ->check(CLI::IsMember({"linear", "exp"}))
      ->capture_default_str();
  simulate->add_option("--mu-rate", config.scenario.mu_rate, "Steepness of the exp-type mu")
      ->capture_default_str();
  simulate->add_option("--warp-family", family, "Warp family: sine or two-regime")
      ->check(CLI::IsMember({"sine", "two-regime"}))
      ->capture_default_str();
  auto* amp_opt = simulate->add_option("--amplitude", config.scenario.amplitude,
                                       "Sine warp amplitude")->capture_default_str();
  auto* comp_opt = simulate->add_option("--components", config.scenario.components,
                                        "Sine components")->capture_default_str();
  simulate->add_option("--regime-shift", config.scenario.regime_shift,
                       "Two-regime shift of the late group")->capture_default_str();
  simulate->add_option("--spacing", spacing, "Event placement: quantile or iid")
      ->check(CLI::IsMember({"quantile", "iid"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.domain = eventwarp::Domain(domain_min, domain_max);
  } catch (const eventwarp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  config.mode = mode == "raw" ? eventwarp::CurveMode::raw_count
                              : eventwarp::CurveMode::standardized;
  if (!k_range.empty() && parse_k_range(k_range, config) != 0) {
    std::cerr << "error: --k-range expects A..B\n";
    return 2;
  }
  config.scenario.mu = mu == "exp" ? eventwarp::MuKind::exponential : eventwarp::MuKind::linear;
  config.scenario.quantile_spacing = spacing != "iid";
  if (family == "two-regime") {
    config.scenario.family = eventwarp::WarpFamilyKind::two_regime;
    // gentler noise defaults keep the shifted warps strictly increasing
    if (amp_opt->count() == 0) config.scenario.amplitude = 0.03;
    if (comp_opt->count() == 0) config.scenario.components = 2;
  }

  if (align->parsed()) return eventwarp::cmd_align(config, std::cout, std::cerr);
  if (reg->parsed()) return eventwarp::cmd_register(config, std::cout, std::cerr);
  if (cluster->parsed()) return eventwarp::cmd_cluster(config, std::cout, std::cerr);
  if (simulate->parsed()) return eventwarp::cmd_simulate(config, std::cout, std::cerr);
  return 2;
}
