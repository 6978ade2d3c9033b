// gpcert command-line driver.
#include "gpcert/certificate.hpp"
#include "gpcert/datasets.hpp"
#include "gpcert/io.hpp"
#include "gpcert/nngp.hpp"
#include "gpcert/sampling.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace gpcert;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

bool g_verbose = false;

void log(const std::string& msg) {
  if (g_verbose) std::cerr << "[gpcert] " << msg << '\n';
}

struct Options {
  std::string config;
  std::string out;
};

RunConfig load_config(const Options& o) {
  RunConfig c = RunConfig::load(o.config);
  if (!o.out.empty()) c.output_dir = fs::absolute(o.out);
  fs::create_directories(c.output_dir);
  return c;
}

fs::path model_path(const RunConfig& c) { return c.model.is_absolute() ? c.model : c.output_dir / c.model; }

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

std::optional<FeatureMask> pick_mask(const RunConfig& c) {
  if (c.masks_path.empty()) return std::nullopt;
  const auto masks = read_masks(c.masks_path);
  require(!masks.empty(), "mask file " + c.masks_path.string() + " has no masks");
  if (c.mask_name.empty()) return masks.front();
  for (const auto& m : masks) {
    if (m.name == c.mask_name) return m;
  }
  throw InputError("mask '" + c.mask_name + "' not found in " + c.masks_path.string());
}

std::function<Box(double)> box_builder(const RunConfig& c, const std::optional<FeatureMask>& mask, const Vector& x) {
  if (mask) {
    return [mask, x, clip = c.clip](double gamma) {
      FeatureMask m = *mask;
      m.gamma = gamma;
      return feature_box(x, m, clip);
    };
  }
  return [x](double gamma) { return Box::around(x, gamma); };
}

int cmd_fit(const Options& o) {
  const RunConfig c = load_config(o);
  require(c.dataset.has_value(), "config has no 'dataset'");
  const LoadedData data = load_dataset(*c.dataset);
  log("loaded " + std::to_string(data.data.size()) + " rows from " + c.dataset->path.string());
  KernelSpec spec = kernel_from_json(c.kernel, data.data.input_dim());
  double jitter = c.jitter;
  const Vector prior = Vector::Constant(data.data.output_dim(), c.prior_mean);
  if (!c.hyper_grid.empty()) {
    const auto best = hyper_grid_search(spec, data.data, c.hyper_grid, jitter, prior);
    log("grid search: " + std::to_string(best.evaluated) + " fits, " + std::to_string(best.failed) + " failed");
    spec = best.spec;
    jitter = best.jitter;
  }
  const TrainedGP gp = TrainedGP::fit(spec, data.data, jitter, prior);
  save_model(model_path(c), gp);
  std::cout << "kernel " << kernel_to_json(spec).dump() << '\n'
            << "jitter " << format_double(jitter) << '\n'
            << "log_marginal_likelihood " << format_double(log_marginal_likelihood(gp)) << '\n'
            << "fingerprint " << model_fingerprint(gp) << '\n'
            << "model " << model_path(c).string() << '\n';
  return 0;
}

int cmd_certify(const Options& o) {
  const RunConfig c = load_config(o);
  require(!c.points.empty(), "config has no 'certify' section");
  const TrainedGP gp = load_model(model_path(c));
  const auto mask = pick_mask(c);
  std::vector<SweepRow> rows;
  Json all = Json::array();
  for (const auto& p : c.points) {
    require(p.x.size() == gp.input_dim(), "point '" + p.id + "' has the wrong dimension");
    for (const auto mode : c.modes) {
      log("certify " + p.id + " " + std::string(mode_name(mode)));
      const auto cells =
          certificate_sweep(gp, p.x, box_builder(c, mask, p.x), c.gammas, c.deltas, mode, c.component, c.bnb, c.quad_tol);
      for (const auto& cell : cells) {
        if (cell.certificate.failed) std::cerr << "warning: " << p.id << " gamma=" << cell.gamma << ": " << cell.certificate.error << '\n';
        rows.push_back({p.id, cell.gamma, cell.delta, std::string(mode_name(mode)), cell.certificate.phi_hat,
                        cell.certificate, 0.0});
        Json e = certificate_to_json(cell.certificate);
        e["point"] = p.id;
        e["gamma"] = cell.gamma;
        e["mode"] = std::string(mode_name(mode));
        all.push_back(std::move(e));
      }
    }
  }
  auto csv = open_out(c.output_dir / "certificates.csv");
  write_sweep_csv(csv, rows);
  auto js = open_out(c.output_dir / "certificates.json");
  js << all.dump(2) << '\n';
  const auto vac = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.certificate->vacuous; });
  std::cout << rows.size() << " certificates (" << vac << " vacuous) -> " << (c.output_dir / "certificates.csv").string()
            << '\n';
  return 0;
}

int cmd_baseline(const Options& o) {
  const RunConfig c = load_config(o);
  require(!c.points.empty(), "config has no 'certify' section (points, gammas, deltas)");
  const TrainedGP gp = load_model(model_path(c));
  const auto mask = pick_mask(c);
  SamplingOptions so;
  so.n_samples = c.n_samples;
  so.seed = c.seed;
  std::vector<SweepRow> rows;
  for (const auto& p : c.points) {
    require(p.x.size() == gp.input_dim(), "point '" + p.id + "' has the wrong dimension");
    const auto build = box_builder(c, mask, p.x);
    for (double gamma : c.gammas) {
      const RowMatrix grid = grid_points(build(gamma), c.per_dim);
      log("sampling " + p.id + " gamma=" + format_double(gamma) + " on " + std::to_string(grid.rows()) + " points");
      const SupStatistics stats = omp::sample_sup_statistics(gp, p.x, grid, so);
      for (const auto mode : c.modes) {
        for (double d : c.deltas) {
          const auto e = empirical_phi(stats, d, mode, c.component);
          rows.push_back({p.id, gamma, d, "empirical_" + std::string(mode_name(mode)), e.estimate, std::nullopt, e.std_error});
        }
      }
    }
  }
  auto csv = open_out(c.output_dir / "baseline.csv");
  write_sweep_csv(csv, rows);
  std::cout << rows.size() << " empirical estimates -> " << (c.output_dir / "baseline.csv").string() << '\n';
  return 0;
}

int cmd_variance(const Options& o) {
  const RunConfig c = load_config(o);
  require(c.variance_train.has_value(), "config has no 'variance' section");
  auto mask = pick_mask(c);
  require(mask.has_value(), "variance sweep needs a mask file");
  if (!c.gammas.empty()) mask->gamma = c.gammas.front();
  DataSource train_src = *c.variance_train;
  train_src.normalize = true;
  DataSource point_src = *c.variance_points;
  point_src.normalize = true;
  DepthWidthSweep sweep;
  sweep.train = load_dataset(train_src).data;
  sweep.points = load_dataset(point_src).data.inputs;
  sweep.sizes = c.variance_sizes;
  sweep.layers = c.variance_layers;
  sweep.sigma_w2 = c.sigma_w2;
  sweep.sigma_b2 = c.sigma_b2;
  sweep.jitter = c.jitter;
  sweep.mask = *mask;
  sweep.clip = c.clip;
  for (Index n : sweep.sizes) {
    require(n >= 1 && n <= sweep.train.size(), "variance size " + std::to_string(n) + " exceeds the training rows");
  }
  const auto cells = depth_width_sweep(sweep, c.bnb);
  for (const auto& cell : cells) {
    if (!cell.error.empty()) std::cerr << "warning: L=" << cell.layers << " N=" << cell.n_train << ": " << cell.error << '\n';
  }
  auto csv = open_out(c.output_dir / "variance.csv");
  write_variance_csv(csv, cells);
  std::cout << cells.size() << " variance cells -> " << (c.output_dir / "variance.csv").string() << '\n';
  return 0;
}

int cmd_report(const Options& o) {
  const RunConfig c = load_config(o);
  std::ostringstream md;
  md << "# gpcert report\n\n";
  bool any = false;
  for (const char* name : {"certificates.csv", "baseline.csv"}) {
    const fs::path p = c.output_dir / name;
    if (!fs::exists(p)) continue;
    any = true;
    const TextTable t = read_text_csv(p);
    const auto col = [&](const std::string& n) {
      return static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), n) - t.header.begin());
    };
    const std::size_t c_mode = col("mode");
    const std::size_t c_phi = col("phi_hat");
    const std::size_t c_vac = col("vacuous");
    const std::size_t c_point = col("point");
    const std::size_t c_gamma = col("gamma");
    const std::size_t c_delta = col("delta");
    require(c_mode < t.header.size() && c_phi < t.header.size(), p.string() + ": not a sweep CSV");
    std::map<std::string, std::pair<int, int>> per_mode;  // rows, vacuous
    const std::vector<std::string>* tight = nullptr;
    const std::vector<std::string>* loose = nullptr;
    double tight_v = 2.0;
    double loose_v = -1.0;
    for (const auto& r : t.rows) {
      auto& e = per_mode[r[c_mode]];
      ++e.first;
      const bool vac = c_vac < r.size() && r[c_vac] == "1";
      if (vac) ++e.second;
      const double v = std::stod(r[c_phi]);
      if (!vac && v < tight_v) {
        tight_v = v;
        tight = &r;
      }
      if (!vac && v > loose_v) {
        loose_v = v;
        loose = &r;
      }
    }
    md << "## " << name << "\n\n" << t.rows.size() << " rows\n\n| mode | rows | vacuous |\n|---|---|---|\n";
    for (const auto& [mode, e] : per_mode) md << "| " << mode << " | " << e.first << " | " << e.second << " |\n";
    auto describe = [&](const std::vector<std::string>* r) {
      return (*r)[c_point] + " gamma=" + (*r)[c_gamma] + " delta=" + (*r)[c_delta] + " " + (*r)[c_mode] +
             " phi_hat=" + (*r)[c_phi];
    };
    if (tight) md << "\ntightest non-vacuous: " << describe(tight) << "\n";
    if (loose) md << "loosest non-vacuous: " << describe(loose) << "\n";
    md << '\n';
  }
  const fs::path vp = c.output_dir / "variance.csv";
  if (fs::exists(vp)) {
    any = true;
    const TextTable t = read_text_csv(vp);
    int nan = 0;
    double lo = 1e300;
    double hi = -1e300;
    for (const auto& r : t.rows) {
      if (r.back() == "nan") {
        ++nan;
        continue;
      }
      const double v = std::stod(r.back());
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    md << "## variance.csv\n\n" << t.rows.size() << " rows, " << nan << " failed";
    if (static_cast<int>(t.rows.size()) > nan) md << ", sigma_bar_sq in [" << lo << ", " << hi << "]";
    md << "\n";
  }
  if (!any) md << "no artifacts in " << c.output_dir.string() << "\n";
  std::cout << md.str();
  auto out = open_out(c.output_dir / "report.md");
  out << md.str();
  return 0;
}

int cmd_make_example(const std::string& path, const SaddleDatasetOptions& opts) {
  const Dataset d = make_saddle_dataset(opts);
  auto out = open_out(path);
  out << "x0,x1,y\n";
  for (Index r = 0; r < d.size(); ++r) {
    out << format_double(d.inputs(r, 0)) << ',' << format_double(d.inputs(r, 1)) << ','
        << format_double(d.targets(r, 0)) << '\n';
  }
  std::cout << d.size() << " rows -> " << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic robustness certificates for Gaussian-process predictions"};
  app.require_subcommand(1);
  Options opts;
  app.add_flag("--verbose,-v", g_verbose, "progress messages on stderr");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", opts.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", opts.out, "output directory (overrides the config)");
    sub->add_flag("--verbose,-v", g_verbose, "progress messages on stderr");
  };
  std::map<std::string, std::function<int()>> handlers;
  auto* fit = app.add_subcommand("fit", "fit the GP (optionally by grid search) and store the model");
  add_common(fit);
  handlers["fit"] = [&] { return cmd_fit(opts); };
  auto* certify = app.add_subcommand("certify", "compute phi1/phi2 certificates over the configured sweep");
  add_common(certify);
  handlers["certify"] = [&] { return cmd_certify(opts); };
  auto* baseline = app.add_subcommand("baseline", "Monte-Carlo estimates on a grid for the same sweep");
  add_common(baseline);
  handlers["baseline"] = [&] { return cmd_baseline(opts); };
  auto* variance = app.add_subcommand("variance", "normalised-variance sweep over depth and training size");
  add_common(variance);
  handlers["variance"] = [&] { return cmd_variance(opts); };
  auto* report = app.add_subcommand("report", "summarise the CSV outputs in the output directory");
  add_common(report);
  handlers["report"] = [&] { return cmd_report(opts); };

  std::string example_path = "example2.csv";
  SaddleDatasetOptions example;
  auto* make = app.add_subcommand("make-example", "write the synthetic 2-D saddle regression dataset");
  make->add_option("--path", example_path, "output CSV");
  make->add_option("--samples", example.samples);
  make->add_option("--seed", example.seed);
  make->add_option("--scale", example.scale);
  make->add_option("--noise", example.noise);
  handlers["make-example"] = [&] { return cmd_make_example(example_path, example); };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  try {
    return handlers.at(app.get_subcommands().front()->get_name())();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
