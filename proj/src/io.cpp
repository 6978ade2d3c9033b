#include "gpcert/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gpcert {

namespace fs = std::filesystem;

const std::vector<std::string> kSweepColumns = {"point",  "gamma", "delta",    "mode",     "phi_hat",
                                                "eta",    "xi_hat", "dudley",  "K",        "sup_d",
                                                "sup_mean", "vacuous", "std_error"};

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() ? p : base / p; }

Vector vector_from_json(const Json& j, Index dim, const std::string& what) {
  if (j.is_number()) {
    require(dim > 0, what + ": scalar given but dimension unknown");
    return Vector::Constant(dim, j.get<double>());
  }
  require(j.is_array(), what + " must be a number or an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Index>(k)] = j[k].get<double>();
  require(dim <= 0 || v.size() == dim, what + " has " + std::to_string(v.size()) + " entries, expected " +
                                           std::to_string(dim));
  return v;
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < n; ++k) {
    h ^= p[k];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_doubles(std::ostream& out, const double* data, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    auto bits = std::bit_cast<std::uint64_t>(data[k]);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

void read_doubles(std::istream& in, double* data, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if (!in) throw InputError("model file truncated");
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    data[k] = std::bit_cast<double>(bits);
  }
}

// Column-major copy so every block is written in one fixed layout.
void write_matrix(std::ostream& out, const Matrix& m) { write_doubles(out, m.data(), static_cast<std::size_t>(m.size())); }

Matrix read_matrix(std::istream& in, Index rows, Index cols) {
  Matrix m(rows, cols);
  read_doubles(in, m.data(), static_cast<std::size_t>(m.size()));
  return m;
}

}  // namespace

Index CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return static_cast<Index>(k);
  }
  throw InputError("CSV has no column named '" + name + "'");
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw InputError(source + ": empty CSV (header row required)");
  t.header = split(line);
  const std::size_t cols = t.header.size();
  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols) {
      throw InputError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      const auto& f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw InputError(source + ": line " + std::to_string(line_no) + ", column '" + t.header[c] +
                         "': not a finite number: '" + f + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  t.values = RowMatrix(rows, static_cast<Index>(cols));
  if (!values.empty()) std::memcpy(t.values.data(), values.data(), values.size() * sizeof(double));
  return t;
}

TextTable read_text_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open CSV file " + path.string());
  TextTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw InputError(path.string() + ": empty CSV (header row required)");
  return t;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open CSV file " + path.string());
  return parse_csv(in, path.string());
}

DataSource DataSource::from_json(const Json& j, const fs::path& base_dir) {
  require(j.is_object() && j.contains("path"), "dataset entry needs a 'path'");
  DataSource s;
  s.path = resolve(j.at("path").get<std::string>(), base_dir);
  s.n_inputs = j.value("n_inputs", Index{0});
  s.n_targets = j.value("n_targets", Index{0});
  s.label = j.value("label", std::string{});
  s.n_classes = j.value("n_classes", 0);
  s.normalize = j.value("normalize", false);
  s.rows = j.value("rows", Index{0});
  if (j.contains("one_hot")) {
    s.one_hot_off = j.at("one_hot").at(0).get<double>();
    s.one_hot_on = j.at("one_hot").at(1).get<double>();
  }
  if (s.label.empty()) {
    require(s.n_inputs >= 1 && s.n_targets >= 1, "regression dataset needs n_inputs >= 1 and n_targets >= 1");
  } else {
    require(s.n_classes >= 1, "classification dataset needs n_classes >= 1");
  }
  require(s.rows >= 0, "dataset 'rows' must be non-negative");
  return s;
}

LoadedData load_dataset(const DataSource& source) {
  const CsvTable t = read_csv(source.path);
  Index rows = t.values.rows();
  if (source.rows > 0) {
    require(source.rows <= rows, source.path.string() + ": asked for " + std::to_string(source.rows) +
                                     " rows but the file has " + std::to_string(rows));
    rows = source.rows;
  }
  require(rows >= 1, source.path.string() + ": no data rows");
  LoadedData out;
  if (source.label.empty()) {
    const Index need = source.n_inputs + source.n_targets;
    require(static_cast<Index>(t.header.size()) == need,
            source.path.string() + ": expected " + std::to_string(need) + " columns (" +
                std::to_string(source.n_inputs) + " inputs + " + std::to_string(source.n_targets) +
                " targets), found " + std::to_string(t.header.size()));
    out.data.inputs = t.values.topLeftCorner(rows, source.n_inputs);
    out.data.targets = t.values.block(0, source.n_inputs, rows, source.n_targets);
  } else {
    const Index lc = t.column(source.label);
    const Index m = t.values.cols() - 1;
    out.data.inputs.resize(rows, m);
    for (Index r = 0; r < rows; ++r) {
      Index k = 0;
      for (Index c = 0; c < t.values.cols(); ++c) {
        if (c != lc) out.data.inputs(r, k++) = t.values(r, c);
      }
      const double lab = t.values(r, lc);
      if (lab != std::floor(lab)) {
        throw InputError(source.path.string() + ": data row " + std::to_string(r + 1) + " has non-integer label");
      }
      out.labels.push_back(static_cast<int>(lab));
    }
    try {
      out.data.targets = one_hot_targets(out.labels, source.n_classes, source.one_hot_on, source.one_hot_off);
    } catch (const InputError& e) {
      throw InputError(source.path.string() + ": " + e.what());
    }
  }
  if (source.normalize) {
    try {
      out.data.inputs = unit_normalize_rows(out.data.inputs);
    } catch (const InputError& e) {
      throw InputError(source.path.string() + ": " + e.what());
    }
  }
  return out;
}

KernelSpec kernel_from_json(const Json& j, Index dim) {
  require(j.is_object() && j.contains("family"), "kernel entry needs a 'family'");
  const KernelFamily fam = family_from_name(j.at("family").get<std::string>());
  const Json params = j.value("params", Json::object());
  auto num = [&](const char* name, double fallback) { return params.value(name, fallback); };
  auto vec = [&](const char* name, double fallback) {
    return params.contains(name) ? vector_from_json(params.at(name), dim, name) : Vector::Constant(dim, fallback);
  };
  try {
    switch (fam) {
      case KernelFamily::SquaredExponential: return KernelSpec::squared_exponential(num("sigma2", 1.0), vec("theta", 1.0));
      case KernelFamily::ReluDeep:
        return KernelSpec::relu_deep(params.value("layers", 1), num("sigma_w2", 1.0), num("sigma_b2", 0.0), dim);
      case KernelFamily::RationalQuadratic:
        return KernelSpec::rational_quadratic(num("sigma2", 1.0), num("alpha", 1.0), vec("theta", 1.0));
      case KernelFamily::Linear: return KernelSpec::linear(num("sigma2", 1.0), vec("theta", 0.0));
      case KernelFamily::Periodic:
        return KernelSpec::periodic(num("sigma2", 1.0), vec("theta", 1.0), vec("freq", 1.0));
      case KernelFamily::MaternHalfInteger:
        return KernelSpec::matern(num("sigma2", 1.0), vec("theta", 1.0), params.value("p", 1));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("kernel parameters: ") + e.what());
  }
  throw InputError("unknown kernel family");
}

Json kernel_to_json(const KernelSpec& spec) {
  Json p = Json::object();
  switch (spec.family()) {
    case KernelFamily::ReluDeep:
      p["layers"] = spec.layers();
      p["sigma_w2"] = spec.sigma_w2();
      p["sigma_b2"] = spec.sigma_b2();
      break;
    case KernelFamily::RationalQuadratic:
      p["sigma2"] = spec.sigma2();
      p["alpha"] = spec.alpha();
      p["theta"] = vector_to_json(spec.theta());
      break;
    case KernelFamily::Periodic:
      p["sigma2"] = spec.sigma2();
      p["theta"] = vector_to_json(spec.theta());
      p["freq"] = vector_to_json(spec.freq());
      break;
    case KernelFamily::MaternHalfInteger:
      p["sigma2"] = spec.sigma2();
      p["theta"] = vector_to_json(spec.theta());
      p["p"] = spec.matern_p();
      break;
    default:
      p["sigma2"] = spec.sigma2();
      p["theta"] = vector_to_json(spec.theta());
  }
  return Json{{"family", std::string(family_name(spec.family()))}, {"params", p}};
}

HyperGrid hyper_grid_from_json(const Json& j) {
  require(j.is_object(), "hyper_grid must be an object of name -> list");
  HyperGrid g;
  for (const auto& [name, values] : j.items()) {
    require(values.is_array() && !values.empty(), "hyper_grid entry '" + name + "' must be a nonempty list");
    std::vector<double> v;
    for (const auto& x : values) v.push_back(x.get<double>());
    g.emplace_back(name, std::move(v));
  }
  return g;
}

BnBConfig bnb_from_json(const Json& j) {
  BnBConfig c;
  c.tolerance = j.value("tolerance", c.tolerance);
  c.max_regions = j.value("max_regions", c.max_regions);
  c.variance_rel_tolerance = j.value("variance_rel_tolerance", c.variance_rel_tolerance);
  c.qp_max_iter = j.value("qp_max_iter", c.qp_max_iter);
  c.validate();
  return c;
}

std::vector<FeatureMask> masks_from_json(const Json& j) {
  require(j.is_array(), "mask file must hold a JSON array");
  std::vector<FeatureMask> masks;
  for (const auto& e : j) {
    FeatureMask m;
    m.name = e.value("name", std::string{});
    for (const auto& p : e.at("pixels")) m.pixels.push_back(p.get<Index>());
    m.gamma = e.value("gamma", 0.0);
    require(!m.pixels.empty(), "mask '" + m.name + "' has no pixels");
    require(m.gamma >= 0.0, "mask '" + m.name + "' has a negative gamma");
    masks.push_back(std::move(m));
  }
  return masks;
}

std::vector<FeatureMask> read_masks(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mask file " + path.string());
  try {
    return masks_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string model_fingerprint(const TrainedGP& gp) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::string k = kernel_to_json(gp.spec()).dump();
  h = fnv1a(h, k.data(), k.size());
  const double j = gp.jitter();
  h = fnv1a(h, &j, sizeof j);
  h = fnv1a(h, gp.prior_mean().data(), static_cast<std::size_t>(gp.prior_mean().size()) * sizeof(double));
  const auto& d = gp.data();
  const std::int64_t dims[3] = {d.size(), d.input_dim(), d.output_dim()};
  h = fnv1a(h, dims, sizeof dims);
  h = fnv1a(h, d.inputs.data(), static_cast<std::size_t>(d.inputs.size()) * sizeof(double));
  h = fnv1a(h, d.targets.data(), static_cast<std::size_t>(d.targets.size()) * sizeof(double));
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

void save_model(const fs::path& path, const TrainedGP& gp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file " + path.string());
  Json header = {{"format", "gpcert-model"},
                 {"version", 1},
                 {"kernel", kernel_to_json(gp.spec())},
                 {"jitter", gp.jitter()},
                 {"prior_mean", vector_to_json(gp.prior_mean())},
                 {"n_train", gp.size()},
                 {"input_dim", gp.input_dim()},
                 {"output_dim", gp.output_dim()},
                 {"gram_inverse_norm", gp.gram_inverse_norm()},
                 {"log_marginal_likelihood", log_marginal_likelihood(gp)},
                 {"fingerprint", model_fingerprint(gp)}};
  out << header.dump() << '\n';
  write_matrix(out, Matrix(gp.data().inputs));
  write_matrix(out, gp.data().targets);
  write_matrix(out, gp.cholesky());
  write_matrix(out, gp.weights());
  write_matrix(out, gp.gram_inverse());
  if (!out) throw InputError("failed writing model file " + path.string());
}

TrainedGP load_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file " + path.string() + " (run 'fit' first)");
  std::string line;
  std::getline(in, line);
  Json h;
  try {
    h = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": bad model header: " + e.what());
  }
  require(h.value("format", std::string{}) == "gpcert-model", path.string() + ": not a model file");
  const Index n = h.at("n_train").get<Index>();
  const Index m = h.at("input_dim").get<Index>();
  const Index out_dim = h.at("output_dim").get<Index>();
  const KernelSpec spec = kernel_from_json(h.at("kernel"), m);
  Dataset d;
  d.inputs = read_matrix(in, n, m);
  d.targets = read_matrix(in, n, out_dim);
  Matrix chol = read_matrix(in, n, n);
  Matrix w = read_matrix(in, n, out_dim);
  Matrix q = read_matrix(in, n, n);
  TrainedGP gp = TrainedGP::restore(spec, std::move(d), h.at("jitter").get<double>(),
                                    vector_from_json(h.at("prior_mean"), out_dim, "prior_mean"), std::move(chol),
                                    std::move(w), std::move(q), h.at("gram_inverse_norm").get<double>());
  if (model_fingerprint(gp) != h.at("fingerprint").get<std::string>()) {
    throw InputError(path.string() + ": fingerprint mismatch (file corrupted?)");
  }
  return gp;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

RunConfig RunConfig::from_json(const Json& j, const fs::path& base_dir) {
  require(j.is_object(), "config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  try {
    if (j.contains("dataset")) c.dataset = DataSource::from_json(j.at("dataset"), base_dir);
    c.kernel = j.value("kernel", Json{});
    if (j.contains("hyper_grid")) c.hyper_grid = hyper_grid_from_json(j.at("hyper_grid"));
    c.jitter = j.value("jitter", c.jitter);
    require(c.jitter >= 0.0, "jitter must be non-negative");
    c.prior_mean = j.value("prior_mean", c.prior_mean);
    if (j.contains("bnb")) c.bnb = bnb_from_json(j.at("bnb"));
    c.output_dir = resolve(j.value("output_dir", std::string("out")), base_dir);
    c.model = j.value("model", std::string("model.gpm"));

    if (j.contains("certify")) {
      const Json& cj = j.at("certify");
      std::optional<LoadedData> point_rows;
      if (cj.contains("points_source")) point_rows = load_dataset(DataSource::from_json(cj.at("points_source"), base_dir));
      for (const auto& p : cj.at("points")) {
        CertifyPoint cp;
        cp.id = p.value("id", "p" + std::to_string(c.points.size()));
        if (p.contains("x")) {
          cp.x = vector_from_json(p.at("x"), 0, "point x");
        } else {
          require(point_rows.has_value(), "point '" + cp.id + "' uses 'row' but certify has no points_source");
          const Index r = p.at("row").get<Index>();
          require(r >= 0 && r < point_rows->data.size(), "point '" + cp.id + "' row out of range");
          cp.x = point_rows->data.inputs.row(r).transpose();
        }
        c.points.push_back(std::move(cp));
      }
      for (const auto& g : cj.at("gammas")) c.gammas.push_back(g.get<double>());
      for (const auto& d : cj.at("deltas")) c.deltas.push_back(d.get<double>());
      require(!c.points.empty(), "certify.points is empty");
      require(!c.gammas.empty(), "certify.gammas is empty");
      require(!c.deltas.empty(), "certify.deltas is empty");
      for (double g : c.gammas) require(g >= 0.0, "gamma must be non-negative");
      for (double d : c.deltas) require(d > 0.0, "delta must be positive");
      if (cj.contains("modes")) {
        c.modes.clear();
        for (const auto& m : cj.at("modes")) c.modes.push_back(mode_from_name(m.get<std::string>()));
      }
      c.component = cj.value("component", Index{0});
      if (cj.contains("masks")) c.masks_path = resolve(cj.at("masks").get<std::string>(), base_dir);
      c.mask_name = cj.value("mask", std::string{});
      if (cj.contains("clip")) c.clip = Interval{cj.at("clip").at(0).get<double>(), cj.at("clip").at(1).get<double>()};
      c.quad_tol = cj.value("quad_tol", c.quad_tol);
    }
    if (j.contains("baseline")) {
      const Json& bj = j.at("baseline");
      c.n_samples = bj.value("n_samples", c.n_samples);
      c.per_dim = bj.value("per_dim", c.per_dim);
      c.seed = bj.value("seed", c.seed);
      require(c.n_samples >= 1 && c.per_dim >= 1, "baseline n_samples and per_dim must be positive");
    }
    if (j.contains("variance")) {
      const Json& vj = j.at("variance");
      c.variance_train = DataSource::from_json(vj.at("train"), base_dir);
      c.variance_points = DataSource::from_json(vj.at("points"), base_dir);
      for (const auto& s : vj.at("sizes")) c.variance_sizes.push_back(s.get<Index>());
      for (const auto& l : vj.at("layers")) c.variance_layers.push_back(l.get<int>());
      c.sigma_w2 = vj.value("sigma_w2", c.sigma_w2);
      c.sigma_b2 = vj.value("sigma_b2", c.sigma_b2);
      if (vj.contains("masks")) c.masks_path = resolve(vj.at("masks").get<std::string>(), base_dir);
      c.mask_name = vj.value("mask", c.mask_name);
      if (vj.contains("gamma")) c.gammas = {vj.at("gamma").get<double>()};
      if (vj.contains("clip")) c.clip = Interval{vj.at("clip").at(0).get<double>(), vj.at("clip").at(1).get<double>()};
      require(!c.variance_sizes.empty() && !c.variance_layers.empty(), "variance sizes and layers must be nonempty");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return c;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (std::size_t k = 0; k < kSweepColumns.size(); ++k) out << (k ? "," : "") << kSweepColumns[k];
  out << '\n';
  for (const auto& r : rows) {
    out << r.point << ',' << format_double(r.gamma) << ',' << format_double(r.delta) << ',' << r.mode << ','
        << format_double(r.phi_hat) << ',';
    if (r.certificate) {
      const auto& c = *r.certificate;
      const auto& k = c.constants;
      out << format_double(c.eta) << ',' << format_double(k.xi_hat) << ',' << format_double(k.dudley) << ','
          << format_double(k.K) << ',' << format_double(k.sup_d) << ',' << format_double(k.sup_mean) << ','
          << (c.vacuous ? 1 : 0) << ',';
    } else {
      out << ",,,,,,,";
    }
    out << format_double(r.std_error) << '\n';
  }
}

Json certificate_to_json(const Certificate& c) {
  const auto& k = c.constants;
  Json terms = Json::array();
  for (double t : c.component_terms) terms.push_back(t);
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(format_double(v)); };
  return Json{{"phi_hat", num(c.phi_hat)},
              {"log_phi_hat", num(c.log_phi_hat)},
              {"delta", num(c.delta)},
              {"eta", num(c.eta)},
              {"xi_hat", num(k.xi_hat)},
              {"dudley", num(k.dudley)},
              {"K", num(k.K)},
              {"sup_d", num(k.sup_d)},
              {"sup_mean", num(k.sup_mean)},
              {"D", num(k.D)},
              {"m_eff", k.m_eff},
              {"bounds_converged", k.converged},
              {"component_terms", terms},
              {"vacuous", c.vacuous},
              {"failed", c.failed},
              {"error", c.error}};
}

void write_variance_csv(std::ostream& out, const std::vector<VarianceCell>& cells) {
  out << "L,N,point_id,sigma_bar_sq\n";
  for (const auto& c : cells) {
    out << c.layers << ',' << c.n_train << ',' << c.point_id << ',' << format_double(c.sigma_bar_sq) << '\n';
  }
}

}  // namespace gpcert
