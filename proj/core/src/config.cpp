#include "gibbs/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gibbs/csv.hpp"
#include "gibbs/error.hpp"
#include "overloaded.hpp"

namespace gibbs {
namespace {

using detail::overloaded;
using nlohmann::json;

const json kNull;

// A JSON object together with its dotted path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + what);
  }

  void require_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  void allow_keys(std::initializer_list<const char*> keys) const {
    require_object();
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, unused] : value_.items())
      if (!allowed.count(key)) child_path_fail(key, "unknown key");
  }

  bool has(const char* key) const { return value_.contains(key) && !value_.at(key).is_null(); }

  Node at(const char* key) const {
    if (!has(key)) child_path_fail(key, "missing required field");
    return Node(value_.at(key), child(key));
  }

  double number(const char* key) const {
    const Node n = at(key);
    if (!n.value_.is_number()) n.fail("expected a number");
    return n.value_.get<double>();
  }
  double number(const char* key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const char* key) const {
    const Node n = at(key);
    if (!n.value_.is_number_integer()) n.fail("expected an integer");
    return n.value_.get<std::int64_t>();
  }
  std::size_t count(const char* key) const {
    const std::int64_t v = integer(key);
    if (v < 0) at(key).fail("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  std::size_t count(const char* key, std::size_t fallback) const {
    return has(key) ? count(key) : fallback;
  }

  std::string string(const char* key) const {
    const Node n = at(key);
    if (!n.value_.is_string()) n.fail("expected a string");
    return n.value_.get<std::string>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const char* key) const {
    const Node n = at(key);
    if (!n.value_.is_array()) n.fail("expected an array of numbers");
    std::vector<double> out;
    for (const json& v : n.value_) {
      if (!v.is_number()) n.fail("expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::string type() const {
    require_object();
    return string("type");
  }

 private:
  std::string child(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& what) const {
    throw ConfigError((path_.empty() ? key : path_ + "." + key) + ": " + what);
  }

  const json& value_;
  std::string path_;
};

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

template <typename F>
auto guarded(const Node& node, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    node.fail(e.what());
  }
}

CubicBSpline parse_spline(const Node& n) {
  n.allow_keys({"type", "lo", "hi", "num_basis"});
  CubicBSpline s{n.number("lo"), n.number("hi"), static_cast<int>(n.integer("num_basis"))};
  if (!(s.hi > s.lo)) n.fail("hi must exceed lo");
  if (s.num_basis < 4) n.fail("a cubic B-spline needs num_basis >= 4");
  return s;
}

BasisSpec parse_basis(const Node& n) {
  const std::string type = n.type();
  if (type == "bspline") return parse_spline(n);
  if (type == "tensor_bspline") {
    n.allow_keys({"type", "first", "second"});
    return TensorBSpline{parse_spline(n.at("first")), parse_spline(n.at("second"))};
  }
  if (type == "raw") {
    n.allow_keys({"type", "terms"});
    const Node terms = n.at("terms");
    if (!terms.value().is_array() || terms.value().empty()) terms.fail("expected a list of terms");
    std::vector<std::string> names;
    for (const json& t : terms.value()) {
      if (!t.is_string()) terms.fail("terms must be strings");
      names.push_back(t.get<std::string>());
    }
    return guarded(n, [&] { return BasisSpec{RawDictionary::from_terms(names)}; });
  }
  if (type == "linear") {
    n.allow_keys({"type", "k"});
    const auto k = n.integer("k");
    if (k < 1) n.fail("k must be >= 1");
    return RawDictionary::from_terms(linear_terms(static_cast<int>(k)));
  }
  n.at("type").fail("unknown basis type '" + type + "'");
}

Generator parse_generator(const Node& n) {
  const std::string type = n.type();
  Generator gen;
  if (type == "mcid1") {
    n.allow_keys({"type", "shift", "sd"});
    gen = Mcid1Sim{n.number("shift", 0.05), n.number("sd", 0.5)};
  } else if (type == "mcid2") {
    n.allow_keys({"type", "shift", "sd"});
    gen = Mcid2Sim{n.number("shift", 0.05), n.number("sd", 1.0)};
  } else if (type == "quantile") {
    n.allow_keys({"type", "tau", "beta", "noise_sd"});
    QuantileRegSim g;
    g.tau = n.number("tau", g.tau);
    if (n.has("beta")) g.beta = to_vector(n.numbers("beta"));
    g.noise_sd = n.number("noise_sd", g.noise_sd);
    gen = g;
  } else if (type == "auc") {
    n.allow_keys({"type", "mu"});
    gen = AucSim{n.number("mu", 1.0)};
  } else if (type == "heavy_tail") {
    n.allow_keys({"type", "df", "beta"});
    HeavyTailSim g;
    g.df = n.number("df", g.df);
    if (n.has("beta")) g.beta = to_vector(n.numbers("beta"));
    gen = g;
  } else if (type == "mean_curve") {
    n.allow_keys({"type", "function", "noise_sd"});
    MeanCurveSim g;
    g.function = n.string("function", g.function);
    g.noise_sd = n.number("noise_sd", g.noise_sd);
    gen = g;
  } else if (type == "massart") {
    n.allow_keys({"type", "q", "support", "values", "flip"});
    MassartClassifierSim g;
    g.q = static_cast<int>(n.integer("q"));
    if (n.has("support")) {
      g.support.clear();
      for (double v : n.numbers("support")) g.support.push_back(static_cast<int>(v));
    }
    if (n.has("values")) g.values = n.numbers("values");
    g.flip = n.number("flip", g.flip);
    gen = g;
  } else {
    n.at("type").fail("unknown generator type '" + type + "'");
  }
  guarded(n, [&] { validate(gen); });
  return gen;
}

struct ParsedLoss {
  LossSpec loss;
  bool cap_from_rate = false;
};

ParsedLoss parse_loss(const Node& n) {
  const std::string type = n.type();
  ParsedLoss out;
  if (type == "check") {
    n.allow_keys({"type", "tau", "features"});
    out.loss = CheckLoss{n.number("tau"), parse_basis(n.at("features"))};
  } else if (type == "squared") {
    n.allow_keys({"type", "features"});
    out.loss = SquaredLoss{parse_basis(n.at("features"))};
  } else if (type == "capped_squared") {
    n.allow_keys({"type", "features", "cap"});
    out.cap_from_rate = !n.has("cap");
    out.loss = CappedSquaredLoss{parse_basis(n.at("features")), n.number("cap", 1.0)};
  } else if (type == "zero_one") {
    n.allow_keys({"type"});
    out.loss = ZeroOneLinearLoss{};
  } else if (type == "mcid") {
    n.allow_keys({"type", "basis"});
    out.loss = McidLoss{parse_basis(n.at("basis"))};
  } else if (type == "auc") {
    n.allow_keys({"type"});
    out.loss = AucLoss{};
  } else {
    n.at("type").fail("unknown loss type '" + type + "'");
  }
  guarded(n, [&] { validate(out.loss); });
  return out;
}

const BasisSpec* loss_basis(const LossSpec& loss) {
  return std::visit(overloaded{
                        [](const CheckLoss& l) -> const BasisSpec* { return &l.features; },
                        [](const SquaredLoss& l) -> const BasisSpec* { return &l.features; },
                        [](const CappedSquaredLoss& l) -> const BasisSpec* { return &l.features; },
                        [](const McidLoss& l) -> const BasisSpec* { return &l.basis; },
                        [](const auto&) -> const BasisSpec* { return nullptr; },
                    },
                    loss);
}

PriorSpec parse_prior(const Node& n, const LossSpec& loss) {
  const std::string type = n.type();
  PriorSpec prior;
  if (type == "gaussian") {
    n.allow_keys({"type", "mean", "sd", "dim"});
    prior.kind = GaussianIid{n.number("mean", 0.0), n.number("sd"),
                             static_cast<int>(n.has("dim") ? n.integer("dim") : 0)};
  } else if (type == "laplace") {
    n.allow_keys({"type", "rate", "dim"});
    prior.kind = LaplaceIid{n.number("rate"), static_cast<int>(n.has("dim") ? n.integer("dim") : 0)};
  } else if (type == "uniform") {
    n.allow_keys({"type", "lo", "hi", "dim"});
    prior.kind = UniformBox{n.number("lo"), n.number("hi"),
                            static_cast<int>(n.has("dim") ? n.integer("dim") : 0)};
  } else if (type == "spike_slab") {
    n.allow_keys({"type", "q", "a", "c", "lambda"});
    SpikeSlab s;
    s.q = static_cast<int>(n.integer("q"));
    s.a = n.number("a", s.a);
    s.c = n.number("c", s.c);
    s.lambda = n.has("lambda") ? n.number("lambda") : SpikeSlab::default_lambda(s.q);
    prior.kind = s;
  } else if (type == "hierarchical") {
    n.allow_keys({"type", "count_mean", "min_j", "mean", "sd", "basis"});
    HierarchicalBasis h;
    h.j_prior.mean = n.number("count_mean", h.j_prior.mean);
    h.j_prior.min_j = static_cast<int>(n.has("min_j") ? n.integer("min_j") : 1);
    h.mean = n.number("mean", h.mean);
    h.sd = n.number("sd", h.sd);
    const Node b = n.at("basis");
    b.allow_keys({"type", "lo", "hi"});
    if (b.type() != "bspline") b.at("type").fail("hierarchical priors take a bspline family");
    const double lo = b.number("lo");
    const double hi = b.number("hi");
    h.basis_factory = [lo, hi](int J) { return BasisSpec{CubicBSpline{lo, hi, J}}; };
    prior.kind = h;
  } else if (type == "truncated") {
    n.allow_keys({"type", "inner", "bound", "grid", "basis"});
    Truncated t;
    t.inner = std::make_shared<const PriorSpec>(parse_prior(n.at("inner"), loss));
    t.bound = n.number("bound");
    if (n.has("basis")) {
      t.basis = parse_basis(n.at("basis"));
    } else if (const BasisSpec* b = loss_basis(loss);
               b && !std::holds_alternative<HierarchicalBasis>(t.inner->kind)) {
      t.basis = *b;
    }
    if (n.has("grid")) {
      const Node g = n.at("grid");
      g.allow_keys({"lo", "hi", "points"});
      const double lo = g.number("lo");
      const double hi = g.number("hi");
      const auto points = static_cast<Eigen::Index>(g.count("points"));
      if (points < 2) g.fail("points must be >= 2");
      t.grid = Eigen::VectorXd::LinSpaced(points, lo, hi);
    }
    prior.kind = t;
  } else {
    n.at("type").fail("unknown prior type '" + type + "'");
  }
  guarded(n, [&] {
    // Dimensions may be resolved later; validate with a placeholder.
    validate(with_dimension(prior, 1));
  });
  return prior;
}

RateSchedule parse_rate(const Node& n) {
  const std::string type = n.type();
  RateSchedule rate;
  if (type == "fixed") {
    n.allow_keys({"type", "omega"});
    rate = FixedRate{n.number("omega")};
  } else if (type == "power_law") {
    n.allow_keys({"type", "c", "gamma"});
    rate = PowerLawRate{n.number("c"), n.number("gamma")};
  } else if (type == "heavy_tail") {
    n.allow_keys({"type", "s"});
    rate = HeavyTailRate{n.number("s")};
  } else if (type == "tsybakov") {
    n.allow_keys({"type", "gamma"});
    rate = TsybakovRate{n.number("gamma")};
  } else if (type == "auc") {
    n.allow_keys({"type", "multiplier"});
    AucDataDriven a;
    if (n.has("multiplier")) {
      const Node m = n.at("multiplier");
      if (m.value().is_number()) {
        a.multiplier = FixedMultiplier{m.value().get<double>()};
      } else if (m.value().is_string() && m.value().get<std::string>() == "log") {
        a.multiplier = LogMultiplier{};
      } else if (m.value().is_object()) {
        m.allow_keys({"c", "power"});
        a.multiplier = PowerMultiplier{m.number("c", 1.0), m.number("power")};
      } else {
        m.fail("expected a number, \"log\" or {\"c\", \"power\"}");
      }
    }
    rate = a;
  } else {
    n.at("type").fail("unknown rate type '" + type + "'");
  }
  guarded(n, [&] { validate(rate); });
  return rate;
}

void parse_mh(const Node& n, ExperimentSpec& spec) {
  n.allow_keys({"steps", "burn_in", "thin", "proposal_scale", "scale_n_power", "moves"});
  MHConfig& mh = spec.mh;
  mh.steps = n.count("steps", mh.steps);
  mh.burn_in = n.count("burn_in", mh.burn_in);
  mh.thin = n.count("thin", mh.thin);
  if (n.has("proposal_scale")) {
    const Node s = n.at("proposal_scale");
    if (s.value().is_number())
      mh.proposal_scale = Eigen::VectorXd::Constant(1, s.value().get<double>());
    else
      mh.proposal_scale = to_vector(n.numbers("proposal_scale"));
  }
  spec.scale_n_power = n.number("scale_n_power", 0.0);
  if (n.has("moves")) {
    const Node m = n.at("moves");
    m.allow_keys({"add", "remove", "within", "alpha_flip"});
    mh.moves.add = m.number("add", mh.moves.add);
    mh.moves.remove = m.number("remove", mh.moves.remove);
    mh.moves.within = m.number("within", mh.moves.within);
    mh.moves.alpha_flip = m.number("alpha_flip", mh.moves.alpha_flip);
  }
  guarded(n, [&] { validate(mh); });
}

Divergence parse_divergence(const Node& n, const ExperimentSpec& spec) {
  const std::string type = n.type();
  n.allow_keys({"type", "n", "basis"});
  const std::size_t mc = n.count("n", 10000);
  auto basis = [&]() -> BasisSpec {
    if (n.has("basis")) return parse_basis(n.at("basis"));
    if (const BasisSpec* b = loss_basis(spec.loss)) return *b;
    n.fail("this divergence needs a basis and the loss has none");
  };
  const Generator gen = spec.generator;
  const DataSampler sampler = [gen](std::size_t size, Rng& rng) {
    return generate(gen, size, rng).data;
  };
  if (type == "euclid") return Euclid{};
  if (type == "abs") return AbsScalar{};
  if (type == "empirical_l2") return EmpiricalL2{basis(), Eigen::MatrixXd()};
  if (type == "l2p") {
    L2P d;
    d.basis = basis();
    d.n = mc;
    d.covariates = [gen](std::size_t size, Rng& rng) {
      return generate(gen, size, rng).data.regression().x;
    };
    return d;
  }
  if (type == "risk_diff_sqrt") {
    RiskDiffSqrt d;
    d.loss = spec.loss;
    d.sampler = sampler;
    d.n = mc;
    return d;
  }
  if (type == "mcid") {
    MCIDMeasure d;
    d.basis = basis();
    d.sampler = sampler;
    d.n = mc;
    return d;
  }
  n.at("type").fail("unknown divergence type '" + type + "'");
}

std::size_t line_of(std::string_view text, std::size_t byte, std::size_t& column) {
  std::size_t line = 1;
  std::size_t line_start = 0;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i)
    if (text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  column = end - line_start;
  if (column == 0) column = 1;
  return line;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t column = 0;
    const std::size_t line = line_of(text, e.byte, column);
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] parse error at ..." prefix.
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                      ": malformed JSON: " + what);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

ExperimentConfig parse_config(const json& document, const std::string& base_dir) {
  const Node root(document, "");
  root.allow_keys({"schema", "name", "description", "generator", "loss", "prior", "rate", "mh",
                   "divergence", "n_grid", "replications", "full_replications", "base_seed",
                   "holdout", "level", "mgf", "data"});
  if (root.integer("schema") != kConfigSchema)
    root.at("schema").fail("unsupported schema version (expected 1)");

  ExperimentConfig config;
  config.document = document;
  ExperimentSpec& spec = config.spec;
  spec.generator = parse_generator(root.at("generator"));
  ParsedLoss loss = parse_loss(root.at("loss"));
  spec.loss = loss.loss;
  spec.cap_from_rate = loss.cap_from_rate;
  spec.prior = parse_prior(root.at("prior"), spec.loss);
  spec.rate = parse_rate(root.at("rate"));
  if (root.has("mh")) parse_mh(root.at("mh"), spec);
  spec.divergence = root.has("divergence") ? parse_divergence(root.at("divergence"), spec)
                                           : Divergence{Euclid{}};

  const Node grid = root.at("n_grid");
  if (!grid.value().is_array() || grid.value().empty()) grid.fail("expected a nonempty array");
  for (const json& v : grid.value()) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 2)
      grid.fail("entries must be integers >= 2");
    spec.n_grid.push_back(v.get<std::size_t>());
  }
  spec.replications = root.count("replications", 1);
  if (spec.replications < 1) root.at("replications").fail("must be >= 1");
  config.full_replications = root.count("full_replications", spec.replications);
  if (root.has("base_seed")) {
    const Node seed = root.at("base_seed");
    if (!seed.value().is_number_unsigned()) seed.fail("expected a nonnegative integer");
    spec.base_seed = seed.value().get<std::uint64_t>();
  }
  if (root.has("holdout")) spec.holdout = root.count("holdout");
  spec.level = root.number("level", spec.level);

  if (root.has("mgf")) {
    const Node m = root.at("mgf");
    m.allow_keys({"offsets", "omega", "r", "n"});
    MgfSettings s;
    if (m.has("offsets")) s.offsets = m.numbers("offsets");
    s.omega = m.number("omega", s.omega);
    s.r = m.number("r", s.r);
    s.n = m.count("n", s.n);
    if (s.offsets.empty()) m.at("offsets").fail("must not be empty");
    if (!(s.omega > 0.0)) m.at("omega").fail("must be positive");
    config.mgf = s;
  }
  if (root.has("data")) {
    const Node d = root.at("data");
    d.allow_keys({"path", "kind", "labels"});
    DataSource src;
    src.path = d.string("path");
    if (std::filesystem::path(src.path).is_relative())
      src.path = (std::filesystem::path(base_dir) / src.path).string();
    src.kind = d.string("kind", src.kind);
    if (src.kind != "regression" && src.kind != "classification" && src.kind != "two_sample")
      d.at("kind").fail("expected regression, classification or two_sample");
    const std::string labels = d.string("labels", "pm1");
    if (labels == "pm1")
      src.labels = LabelSet::PlusMinusOne;
    else if (labels == "01")
      src.labels = LabelSet::ZeroOne;
    else
      d.at("labels").fail("expected \"pm1\" or \"01\"");
    config.data = src;
  }
  guarded(root, [&] { validate(spec); });
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  const json document = load_json_file(path);
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(document, dir.empty() ? "." : dir.string());
}

Dataset load_dataset(const DataSource& source) {
  const csv::Table table = csv::read_file(source.path);
  if (table.rows.empty()) throw ConfigError(source.path + ": no data rows");
  auto number = [&](const std::string& text, std::size_t row) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(source.path + ": line " + std::to_string(row + 2) +
                        ": expected a number, got '" + text + "'");
    }
  };
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  if (source.kind == "two_sample") {
    const int g = table.column("group");
    const int u = table.column("u");
    if (g < 0 || u < 0) throw ConfigError(source.path + ": needs columns group and u");
    TwoSampleData d;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double group = number(table.rows[r][static_cast<std::size_t>(g)], r);
      const double value = number(table.rows[r][static_cast<std::size_t>(u)], r);
      if (group == 0.0)
        d.scores0.push_back(value);
      else if (group == 1.0)
        d.scores1.push_back(value);
      else
        throw ConfigError(source.path + ": group must be 0 or 1");
    }
    return guarded(Node(kNull, source.path), [&] { return Dataset(std::move(d)); });
  }
  const int y = table.column("y");
  if (y < 0) throw ConfigError(source.path + ": needs a y column");
  std::vector<int> xs, zs;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (static_cast<int>(c) == y) continue;
    if (source.kind == "classification" && !table.header[c].empty() && table.header[c][0] == 'z')
      zs.push_back(static_cast<int>(c));
    else
      xs.push_back(static_cast<int>(c));
  }
  auto fill = [&](const std::vector<int>& cols) {
    Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        m(r, static_cast<Eigen::Index>(c)) =
            number(table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols[c])],
                   static_cast<std::size_t>(r));
    return m;
  };
  const Node where(kNull, source.path);
  if (source.kind == "regression") {
    RegressionData d;
    d.x = fill(xs);
    d.y = fill({y}).col(0);
    return guarded(where, [&] { return Dataset(std::move(d)); });
  }
  ClassificationData d;
  d.x = fill(xs);
  d.z = fill(zs);
  const Eigen::VectorXd labels = fill({y}).col(0);
  d.y = labels.unaryExpr([](double v) { return static_cast<int>(v); });
  d.labels = source.labels;
  return guarded(where, [&] { return Dataset(std::move(d)); });
}

json experiment_summary(const ExperimentConfig& config, const std::vector<ResultRow>& rows) {
  json summary;
  summary["schema"] = kConfigSchema;
  summary["config"] = config.document;

  const ExperimentSpec& spec = config.spec;
  json resolved;
  resolved["generator"] = generator_name(spec.generator);
  resolved["loss"] = loss_name(spec.loss);
  resolved["prior"] = prior_name(spec.prior);
  resolved["rate"] = rate_name(spec.rate);
  resolved["divergence"] = divergence_name(spec.divergence);
  resolved["replications"] = spec.replications;
  resolved["n_grid"] = spec.n_grid;
  resolved["base_seed"] = spec.base_seed;
  resolved["mh"] = {{"steps", spec.mh.steps},
                    {"burn_in", spec.mh.burn_in},
                    {"thin", spec.mh.thin},
                    {"scale_n_power", spec.scale_n_power}};
  resolved["holdout"] = spec.holdout.value_or(default_holdout(spec.generator));
  json omega = json::array();
  for (std::size_t n : spec.n_grid) {
    json entry;
    entry["n"] = n;
    if (is_data_driven(spec.rate)) {
      json values = json::array();
      for (const ResultRow& r : rows)
        if (r.n == n) values.push_back(optional_json(r.omega));
      entry["data_driven"] = true;
      entry["omega"] = values;
    } else {
      const RateValue v = rate_at(spec.rate, n);
      entry["omega"] = v.omega;
      if (v.cap) entry["cap"] = *v.cap;
      if (v.epsilon) entry["epsilon"] = *v.epsilon;
    }
    omega.push_back(entry);
  }
  resolved["omega"] = omega;
  summary["resolved"] = resolved;

  json aggregates = json::array();
  std::size_t failures = 0;
  for (const Aggregate& a : aggregate(rows)) {
    failures += a.failures;
    aggregates.push_back({{"n", a.n},
                          {"rows", a.rows},
                          {"failures", a.failures},
                          {"mean_omega", optional_json(a.mean_omega)},
                          {"mean_radius_q90", optional_json(a.mean_radius)},
                          {"mean_div_point_est", optional_json(a.mean_div_point_est)},
                          {"mean_misclass_est", optional_json(a.mean_misclass_est)},
                          {"mean_misclass_truth", optional_json(a.mean_misclass_truth)},
                          {"mean_accept_rate", optional_json(a.mean_accept_rate)},
                          {"coverage", optional_json(a.coverage)}});
  }
  summary["aggregates"] = aggregates;
  summary["rows"] = rows.size();
  summary["failures"] = failures;
  if (const auto fit = radius_fit(rows))
    summary["radius_fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}};
  else
    summary["radius_fit"] = nullptr;
  return summary;
}

json to_json(const MgfReport& report) {
  json points = json::array();
  for (const MgfPoint& p : report.points) {
    points.push_back({{"theta", std::vector<double>(p.theta.data(), p.theta.data() + p.theta.size())},
                      {"estimate", p.estimate},
                      {"std_error", p.std_error},
                      {"log_estimate", p.log_estimate},
                      {"annealed", p.annealed},
                      {"divergence", p.divergence},
                      {"divergence_power", p.divergence_power},
                      {"k_hat", p.k_hat},
                      {"k_std_error", p.k_std_error}});
  }
  return {{"omega", report.omega},
          {"r", report.r},
          {"n", report.n},
          {"points", points},
          {"min_k_hat", report.min_k_hat},
          {"min_k_lower", report.min_k_lower}};
}

}  // namespace gibbs
