#pragma once

#include "gpcert/certificate.hpp"
#include "gpcert/gp.hpp"
#include "gpcert/nngp.hpp"
#include "gpcert/sampling.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gpcert {

using Json = nlohmann::ordered_json;

struct CsvTable {
  std::vector<std::string> header;
  RowMatrix values;

  /// Column index by name; throws InputError naming the column when missing.
  [[nodiscard]] Index column(const std::string& name) const;
};

/// Header plus string fields, for CSVs with text columns.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
TextTable read_text_csv(const std::filesystem::path& path);

/// Numeric CSV with a header row. Errors name the offending line.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::istream& in, const std::string& source);

/// Where a dataset comes from and how its columns are read.
/// Regression: the first n_inputs columns are inputs, the next n_targets are targets.
/// Classification: `label` names the label column, every other column is an input,
/// and targets are one-hot rows over n_classes.
struct DataSource {
  std::filesystem::path path;
  Index n_inputs = 0;
  Index n_targets = 0;
  std::string label;
  int n_classes = 0;
  double one_hot_on = 1.0;
  double one_hot_off = 0.0;
  bool normalize = false;  // divide every input row by its norm
  Index rows = 0;          // 0 keeps every row

  static DataSource from_json(const Json& j, const std::filesystem::path& base_dir);
};

struct LoadedData {
  Dataset data;
  std::vector<int> labels;  // classification only
};

LoadedData load_dataset(const DataSource& source);

KernelSpec kernel_from_json(const Json& j, Index dim);
Json kernel_to_json(const KernelSpec& spec);
/// Ordered hyperparameter grid from a JSON object of name -> array.
HyperGrid hyper_grid_from_json(const Json& j);
BnBConfig bnb_from_json(const Json& j);

std::vector<FeatureMask> read_masks(const std::filesystem::path& path);
std::vector<FeatureMask> masks_from_json(const Json& j);

/// FNV-1a over the kernel, jitter, prior mean and dataset bytes.
std::string model_fingerprint(const TrainedGP& gp);

/// One JSON header line followed by little-endian float64 blocks:
/// inputs, targets, Cholesky factor, weights, Gram inverse.
void save_model(const std::filesystem::path& path, const TrainedGP& gp);
TrainedGP load_model(const std::filesystem::path& path);

struct CertifyPoint {
  std::string id;
  Vector x;
};

struct RunConfig {
  std::filesystem::path base_dir;
  std::optional<DataSource> dataset;
  Json kernel;
  HyperGrid hyper_grid;
  double jitter = 1e-6;
  double prior_mean = 0.0;
  BnBConfig bnb;
  std::filesystem::path model = "model.gpm";
  std::filesystem::path output_dir = "out";

  // certify / baseline
  std::vector<CertifyPoint> points;
  std::vector<double> gammas;
  std::vector<double> deltas;
  std::vector<CertificateMode> modes{CertificateMode::Phi1, CertificateMode::Phi2};
  Index component = 0;
  std::filesystem::path masks_path;
  std::string mask_name;
  std::optional<Interval> clip;
  double quad_tol = 1e-8;
  int n_samples = 10000;
  int per_dim = 45;
  std::uint64_t seed = 0;

  // variance sweep
  std::optional<DataSource> variance_train;
  std::optional<DataSource> variance_points;
  std::vector<Index> variance_sizes;
  std::vector<int> variance_layers;
  double sigma_w2 = 3.19;
  double sigma_b2 = 0.0;

  /// Paths in the file are resolved against the config's directory.
  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_json(const Json& j, const std::filesystem::path& base_dir);
};

/// Column order shared by certificate and baseline CSVs.
extern const std::vector<std::string> kSweepColumns;

struct SweepRow {
  std::string point;
  double gamma = 0.0;
  double delta = 0.0;
  std::string mode;
  double phi_hat = 1.0;
  std::optional<Certificate> certificate;  // empty for empirical rows
  double std_error = 0.0;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
Json certificate_to_json(const Certificate& c);

void write_variance_csv(std::ostream& out, const std::vector<VarianceCell>& cells);

/// Formats a double so that it parses back to the same value.
std::string format_double(double v);

}  // namespace gpcert
