#include "eventwarp/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "eventwarp/csv.hpp"
#include "eventwarp/interp.hpp"

namespace eventwarp {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::vector<EventCurve> load_anchored(const RunConfig& config) {
  const auto rows = csv::read_events(config.input);
  std::vector<EventCurve> curves = csv::curves_from_rows(rows, config.domain, config.mode);
  for (EventCurve& c : curves) c = anchor_curve(c, config.domain);
  return curves;
}

std::string step_text(Move mv) {
  switch (mv) {
    case Move::both: return "(1,1)";
    case Move::source: return "(1,0)";
    default: return "(0,1)";
  }
}

void print_alignment_report(std::ostream& out, const AlignResult& result) {
  out << "steps:";
  for (Move mv : result.alignment.steps) out << ' ' << step_text(mv);
  out << "\ncost: " << csv::format_double(result.cost) << '\n';

  // Figure-style correspondence: one column per path position.
  const auto path = lattice_path(result.alignment);
  std::vector<std::string> top, bottom;
  std::size_t width = 0;
  for (const auto& [L, M] : path) {
    top.push_back("a" + std::to_string(L));
    bottom.push_back("b" + std::to_string(M));
    width = std::max({width, top.back().size(), bottom.back().size()});
  }
  std::ostringstream t, b;
  for (std::size_t k = 0; k < top.size(); ++k) {
    t << (k ? " " : "") << std::setw(static_cast<int>(width)) << top[k];
    b << (k ? " " : "") << std::setw(static_cast<int>(width)) << bottom[k];
  }
  out << "correspondence:\n  " << t.str() << "\n  " << b.str() << '\n';
}

void write_pair_map(const std::string& path, const PairwiseWarp& fwd, const PairwiseWarp& bwd) {
  std::vector<std::string> lines{"source_id,target_id,source_time,mapped_time"};
  auto emit = [&lines](const PairwiseWarp& w) {
    for (Eigen::Index k = 0; k < w.source_times.size(); ++k)
      lines.push_back(w.source_id + "," + w.target_id + "," +
                      csv::format_double(w.source_times(k)) + "," +
                      csv::format_double(w.mapped_times(k)));
  };
  emit(fwd);
  emit(bwd);
  csv::write_lines(path, lines);
}

struct PipelineResult {
  std::vector<EventCurve> curves;
  std::vector<WarpingEstimate> estimates;  // with common grid filled
  RegistrationStats stats;
};

PipelineResult run_registration(const RunConfig& config) {
  PipelineResult r;
  r.curves = load_anchored(config);
  if (r.curves.size() < 2)
    throw Error(Errc::too_few_curves, "registration needs at least two curves");
  RegistrationOptions options;
  options.delta = config.delta;
  options.force_last_event = config.force_last_event;
  options.recenter = config.recenter;
  options.threads = config.threads;
  r.estimates = estimate_warpings(r.curves, options, &r.stats);
  for (WarpingEstimate& e : r.estimates)
    e = to_common_grid(std::move(e), config.grid_size, config.domain);
  return r;
}

void write_warpings(const std::string& path, const std::vector<WarpingEstimate>& estimates) {
  std::vector<std::string> lines{"curve_id,event_time,h_inv"};
  for (const WarpingEstimate& e : estimates)
    for (Eigen::Index k = 0; k < e.event_times.size(); ++k)
      lines.push_back(e.curve_id + "," + csv::format_double(e.event_times(k)) + "," +
                      csv::format_double(e.h_inv_values(k)));
  csv::write_lines(path, lines);
}

void write_clusters(const std::string& path, const std::vector<WarpingEstimate>& estimates,
                    const Clustering& clustering) {
  std::vector<std::string> lines{"curve_id,label,silhouette"};
  for (std::size_t i = 0; i < estimates.size(); ++i)
    lines.push_back(estimates[i].curve_id + "," + std::to_string(clustering.labels[i] + 1) + "," +
                    csv::format_double(clustering.silhouettes(static_cast<Eigen::Index>(i))));
  csv::write_lines(path, lines);
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_align(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<EventCurve> curves = load_anchored(config);
    auto find = [&curves](const std::string& id) -> const EventCurve& {
      for (const EventCurve& c : curves)
        if (c.id == id) return c;
      throw Error(Errc::bad_config, "curve id '" + id + "' not found in the input");
    };
    const EventCurve& a = find(config.id_a);
    const EventCurve& b = find(config.id_b);

    WarpPairOptions options;
    options.delta = config.delta;
    options.force_last_event = config.force_last_event;
    const WarpPairResult pair = warp_pair(a, b, options);

    out << "curves: " << a.id << " (" << a.n_events << " events) vs " << b.id << " ("
        << b.n_events << " events)\n";
    print_alignment_report(out, pair.alignment);

    fs::create_directories(config.out_dir);
    const std::string map_path = join(config.out_dir, "pair_map.csv");
    write_pair_map(map_path, pair.forward, pair.backward);
    out << "pair map written to " << map_path << '\n';
    return 0;
  });
}

int cmd_register(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    PipelineResult r = run_registration(config);
    const auto n = static_cast<Eigen::Index>(r.curves.size());

    std::vector<RegisteredCurve> registered;
    registered.reserve(r.curves.size());
    for (std::size_t i = 0; i < r.curves.size(); ++i)
      registered.push_back(register_curve(r.curves[i], r.estimates[i]));

    fs::create_directories(config.out_dir);
    write_warpings(join(config.out_dir, "warpings.csv"), r.estimates);

    std::vector<std::string> reg_lines{"curve_id,registered_time,value"};
    for (const RegisteredCurve& rc : registered)
      for (Eigen::Index k = 0; k < rc.times.size(); ++k)
        reg_lines.push_back(rc.curve_id + "," + csv::format_double(rc.times(k)) + "," +
                            csv::format_double(rc.values(k)));
    csv::write_lines(join(config.out_dir, "registered.csv"), reg_lines);

    // unregistered curves reuse the mean machinery via their anchored samples
    std::vector<RegisteredCurve> observed;
    observed.reserve(r.curves.size());
    for (const EventCurve& c : r.curves) observed.push_back({c.id, c.times, c.values});
    const MeanCurve before = mean_curve(observed, config.domain, config.grid_size);
    const MeanCurve after = mean_curve(registered, config.domain, config.grid_size);
    std::vector<std::string> mean_lines{"grid_t,mean_before,mean_after"};
    for (Eigen::Index g = 0; g < before.grid.size(); ++g)
      mean_lines.push_back(csv::format_double(before.grid(g)) + "," +
                           csv::format_double(before.mean_values(g)) + "," +
                           csv::format_double(after.mean_values(g)));
    csv::write_lines(join(config.out_dir, "mean_curve.csv"), mean_lines);

    std::vector<int> counts;
    counts.reserve(r.curves.size());
    for (const EventCurve& c : r.curves) counts.push_back(static_cast<int>(c.n_events));
    std::vector<std::string> group_lines{"group,grid_t,mean"};
    for (const auto& [group, mc] : group_means(registered, counts, config.domain, config.grid_size))
      for (Eigen::Index g = 0; g < mc.grid.size(); ++g)
        group_lines.push_back(std::to_string(group) + "," + csv::format_double(mc.grid(g)) + "," +
                              csv::format_double(mc.mean_values(g)));
    csv::write_lines(join(config.out_dir, "group_means.csv"), group_lines);

    double mean_events = 0.0;
    for (const EventCurve& c : r.curves) mean_events += double(c.n_events);
    mean_events /= double(n);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << "registered " << n << " curves (mean " << csv::format_double(mean_events)
        << " events), " << r.stats.pair_count << " pairwise alignments in "
        << csv::format_double(r.stats.pairwise_seconds) << " s, total "
        << csv::format_double(total) << " s\n";
    out << "outputs in " << config.out_dir << ": warpings.csv registered.csv mean_curve.csv"
        << " group_means.csv\n";
    return 0;
  });
}

int cmd_cluster(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<WarpingEstimate> estimates;
    if (!config.warpings_input.empty()) {
      std::vector<std::string> order;
      std::map<std::string, std::vector<csv::WarpingRow>> grouped;
      for (const csv::WarpingRow& row : csv::read_warpings(config.warpings_input)) {
        auto [it, inserted] = grouped.try_emplace(row.curve_id);
        if (inserted) order.push_back(row.curve_id);
        it->second.push_back(row);
      }
      for (const std::string& id : order) {
        const auto& rows = grouped[id];
        WarpingEstimate e;
        e.curve_id = id;
        e.event_times.resize(static_cast<Eigen::Index>(rows.size()));
        e.h_inv_values.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t k = 0; k < rows.size(); ++k) {
          e.event_times(static_cast<Eigen::Index>(k)) = rows[k].event_time;
          e.h_inv_values(static_cast<Eigen::Index>(k)) = rows[k].h_inv;
        }
        estimates.push_back(to_common_grid(std::move(e), config.grid_size, config.domain));
      }
    } else {
      estimates = run_registration(config).estimates;
    }

    const auto n = static_cast<Eigen::Index>(estimates.size());
    if (n < 3)
      throw Error(Errc::bad_k, "clustering needs at least 3 curves (k must satisfy 2 <= k <= n-1)");

    const DistanceMatrix d = distance_matrix(estimates, config.threads);
    KMedoidsOptions options{config.seed, config.n_init, config.max_iter};

    Clustering clustering;
    std::vector<std::pair<int, double>> scan;
    int chosen_k = 0;
    if (config.k > 0) {
      if (config.k < 2 || config.k > n)
        throw Error(Errc::bad_k, "--k must satisfy 2 <= k <= n");
      clustering = kmedoids(d, config.k, options);
      chosen_k = config.k;
      scan.emplace_back(config.k, clustering.coefficient);
    } else {
      const int k_max = std::min<int>(config.k_max, static_cast<int>(n) - 1);
      if (config.k_min > k_max)
        throw Error(Errc::empty_range, "empty k range after clamping to n-1");
      KSelection sel = select_k(d, config.k_min, k_max, options);
      clustering = std::move(sel.clustering);
      chosen_k = sel.k;
      scan = std::move(sel.scan);
    }

    fs::create_directories(config.out_dir);
    write_clusters(join(config.out_dir, "clusters.csv"), estimates, clustering);
    std::vector<std::string> scan_lines{"k,coefficient"};
    for (const auto& [k, coefficient] : scan)
      scan_lines.push_back(std::to_string(k) + "," + csv::format_double(coefficient));
    csv::write_lines(join(config.out_dir, "silhouette_scan.csv"), scan_lines);

    out << "clustered " << n << " curves: k=" << chosen_k << ", silhouette coefficient "
        << csv::format_double(clustering.coefficient) << " ("
        << silhouette_band(clustering.coefficient) << ")\n";
    out << "outputs in " << config.out_dir << ": clusters.csv silhouette_scan.csv\n";
    return 0;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    WarpScenario scenario = config.scenario;
    scenario.domain = config.domain;
    scenario.seed = config.seed;
    const SimulatedSample sample = simulate_sample(scenario);

    fs::create_directories(config.out_dir);
    std::vector<std::string> event_lines{"curve_id,event_time"};
    for (const EventCurve& c : sample.curves)
      for (Eigen::Index k = 0; k < c.times.size(); ++k)
        event_lines.push_back(c.id + "," + csv::format_double(c.times(k)));
    csv::write_lines(join(config.out_dir, "events.csv"), event_lines);

    std::vector<std::string> truth_lines{"curve_id,grid_t,h_value"};
    for (std::size_t i = 0; i < sample.truth.size(); ++i)
      for (Eigen::Index g = 0; g < sample.truth[i].grid.size(); ++g)
        truth_lines.push_back(sample.curves[i].id + "," +
                              csv::format_double(sample.truth[i].grid(g)) + "," +
                              csv::format_double(sample.truth[i].values(g)));
    csv::write_lines(join(config.out_dir, "truth_warps.csv"), truth_lines);

    out << "simulated " << sample.curves.size() << " curves into " << config.out_dir
        << ": events.csv truth_warps.csv\n";
    return 0;
  });
}

}  // namespace eventwarp
