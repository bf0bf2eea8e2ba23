#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#ifdef OED_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "oed/category_design.hpp"
#include "oed/coin.hpp"

namespace oed::cli {

namespace {

using nlohmann::json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int lineOfOffset(const std::string& source, std::size_t offset) {
  offset = std::min(offset, source.size());
  return 1 + static_cast<int>(std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

int lineOfKey(const std::string& source, const std::string& key) {
  const auto pos = source.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : lineOfOffset(source, pos);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

int parseInt(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument(what + " is not an integer: '" + text + "'");
  return v;
}

// --- configuration -------------------------------------------------------------

const std::vector<std::string>& suiteModels(const std::string& suite) {
  return suite == "coin" ? coin::modelNames() : category::modelNames();
}

}  // namespace

RunConfig parseConfig(const std::string& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), lineOfOffset(source, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object", 1);

  RunConfig c;
  auto field = [&](const std::string& key, auto&& assign) {
    if (!j.contains(key)) return;
    try {
      assign(j.at(key));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), lineOfKey(source, key));
    } catch (const std::exception& e) {
      throw ConfigError("invalid value for \"" + key + "\": " + e.what(), lineOfKey(source, key));
    }
  };
  static const std::vector<std::string> known{"suite",      "models",   "prior",       "outcome_prior",
                                              "n",          "parameter_mode", "similarity", "output",
                                              "format",     "experiments",    "n_range",    "data",
                                              "prefix",     "softmax_temperature", "seed",  "threads"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key \"" + key + "\"", lineOfKey(source, key));
    }
  }
  field("suite", [&](const json& v) { c.suite = v.get<std::string>(); });
  field("models", [&](const json& v) { c.models = v.get<std::vector<std::string>>(); });
  field("prior", [&](const json& v) {
    if (!v.is_null()) c.prior = v.get<std::vector<double>>();
  });
  field("outcome_prior", [&](const json& v) {
    auto p = parseOutcomePrior(v.get<std::string>());
    if (!p) throw ConfigError("outcome_prior must be \"uniform\" or \"predictive\"");
    c.outcomePrior = *p;
  });
  field("n", [&](const json& v) { c.n = v.get<int>(); });
  field("parameter_mode", [&](const json& v) {
    auto m = category::parseParameterMode(v.get<std::string>());
    if (!m) throw ConfigError("parameter_mode must be \"point\" or \"marginalized\"");
    c.parameterMode = *m;
  });
  field("similarity", [&](const json& v) { c.similarity = v.get<std::array<double, 4>>(); });
  field("output", [&](const json& v) { c.output = v.get<std::string>(); });
  field("format", [&](const json& v) { c.format = v.get<std::string>(); });
  field("experiments", [&](const json& v) { c.experiments = v.get<std::vector<std::string>>(); });
  field("n_range", [&](const json& v) {
    const auto r = v.get<std::vector<int>>();
    if (r.size() != 2) throw ConfigError("n_range must be [min, max]");
    c.nMin = r[0];
    c.nMax = r[1];
  });
  field("data", [&](const json& v) { c.data = v.get<std::string>(); });
  field("prefix", [&](const json& v) { c.prefix = v.get<bool>(); });
  field("softmax_temperature", [&](const json& v) {
    if (!v.is_null()) c.softmaxTemperature = v.get<double>();
  });
  field("seed", [&](const json& v) {
    if (!v.is_null()) c.seed = v.get<std::uint64_t>();
  });
  field("threads", [&](const json& v) { c.threads = v.get<unsigned>(); });

  try {
    validateConfig(c);
  } catch (const ConfigError& e) {
    // Point at the offending key when the message names one.
    for (const auto& key : known) {
      if (std::string(e.what()).find(key) == 0) throw ConfigError(e.what(), lineOfKey(source, key));
    }
    throw;
  }
  return c;
}

void validateConfig(RunConfig& c) {
  if (c.suite != "coin" && c.suite != "category") throw ConfigError("suite must be \"coin\" or \"category\"");
  const auto& registry = suiteModels(c.suite);
  if (c.models.empty()) c.models = registry;
  for (const auto& m : c.models) {
    if (std::find(registry.begin(), registry.end(), m) == registry.end()) {
      throw ConfigError("models: unknown " + c.suite + " model \"" + m + "\"");
    }
  }
  for (std::size_t i = 0; i < c.models.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (c.models[i] == c.models[k]) throw ConfigError("models: duplicate model \"" + c.models[i] + "\"");
    }
  }
  if (c.models.size() < 2) throw ConfigError("models: at least two models are needed to compare");
  if (c.prior) {
    if (c.prior->size() != c.models.size()) throw ConfigError("prior: need one weight per model");
    for (double w : *c.prior) {
      if (!(w > 0.0)) throw ConfigError("prior: weights must be positive");
    }
  }
  if (c.n < 1) throw ConfigError("n: must be at least 1");
  if (c.nMin < 1 || c.nMax < c.nMin) throw ConfigError("n_range: need 1 <= min <= max");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format: must be \"csv\" or \"json\"");
  for (double s : c.similarity) {
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError("similarity: values must be in (0, 1]");
  }
  if (c.softmaxTemperature && !(*c.softmaxTemperature > 0.0)) {
    throw ConfigError("softmax_temperature: must be positive");
  }
  for (const auto& x : c.experiments) {
    try {
      if (c.suite == "coin") {
        (void)coin::CoinSequence::parse(x);
      } else if (x != "ms54") {
        (void)category::parseStructureKey(x);
      }
    } catch (const OedError& e) {
      throw ConfigError(std::string("experiments: ") + e.what());
    }
  }
}

OutcomePrior effectiveOutcomePrior(const RunConfig& c) {
  if (c.outcomePrior) return *c.outcomePrior;
  return c.suite == "coin" ? OutcomePrior::Uniform : OutcomePrior::Predictive;
}

json configToJson(const RunConfig& c) {
  json j;
  j["suite"] = c.suite;
  j["models"] = c.models;
  j["prior"] = c.prior ? json(*c.prior) : json(nullptr);
  j["outcome_prior"] = std::string(outcomePriorName(effectiveOutcomePrior(c)));
  j["n"] = c.n;
  j["parameter_mode"] = std::string(category::parameterModeName(c.parameterMode));
  j["similarity"] = c.similarity;
  j["output"] = c.output;
  j["format"] = c.format;
  j["experiments"] = c.experiments;
  j["n_range"] = {c.nMin, c.nMax};
  j["data"] = c.data;
  j["prefix"] = c.prefix;
  j["softmax_temperature"] = c.softmaxTemperature ? json(*c.softmaxTemperature) : json(nullptr);
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["threads"] = c.threads;
  return j;
}

namespace {

// --- suite plumbing -------------------------------------------------------------

ModelSpace<coin::CoinSequence, coin::Flip> coinSpace(const RunConfig& c) {
  std::vector<Model<coin::CoinSequence, coin::Flip>> models;
  for (const auto& name : c.models) models.push_back(coin::model(name));
  return {std::move(models), c.prior};
}

std::vector<coin::CoinSequence> coinExperiments(const RunConfig& c) {
  if (c.experiments.empty()) return coin::allSequences();
  std::vector<coin::CoinSequence> out;
  for (const auto& x : c.experiments) out.push_back(coin::CoinSequence::parse(x));
  return out;
}

category::CategoryStructure resolveStructure(const std::string& key) {
  if (key == "ms54") return category::canonicalize(category::ms54Structure());
  return category::parseStructureKey(key);
}

std::vector<category::CategoryStructure> categoryExperiments(const RunConfig& c) {
  if (c.experiments.empty()) return category::enumerateStructures();
  std::vector<category::CategoryStructure> out;
  for (const auto& x : c.experiments) out.push_back(resolveStructure(x));
  return out;
}

category::CategoryDesignOptions categoryOptions(const RunConfig& c, int n) {
  category::CategoryDesignOptions o;
  o.models = c.models;
  o.prior = c.prior;
  o.outcomePrior = effectiveOutcomePrior(c);
  o.mode = c.parameterMode;
  o.params = category::SimilarityParams(c.similarity);
  o.n = n;
  o.threads = c.threads;
  return o;
}

json priorJson(const RunConfig& c) {
  std::vector<std::pair<std::string, double>> w;
  for (std::size_t i = 0; i < c.models.size(); ++i) w.emplace_back(c.models[i], c.prior ? (*c.prior)[i] : 1.0);
  return FiniteDistribution<std::string>::normalize(std::move(w));
}

struct ReportRow {
  int rank = 0;
  std::string experiment;
  double eig = 0.0;
  json detail;
};

template <class X, class Y, class KeyFn>
std::vector<ReportRow> toRows(const std::vector<DesignReport<X, Y>>& reports, KeyFn key) {
  std::vector<ReportRow> rows;
  for (const auto& r : reports) {
    json detail = json::object();
    if (!r.perOutcome.empty()) detail["per_outcome"] = r.perOutcome;
    rows.push_back({r.rank, key(r.experiment), r.eig, std::move(detail)});
  }
  return rows;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("output: cannot open \"" + path + "\" for writing");
    }
  }
  std::ostream& stream() { return path_.empty() ? fallback_ : file_; }
  bool toFile() const { return !path_.empty(); }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ofstream file_;
};

void writeReports(std::ostream& os, const RunConfig& c, const std::vector<ReportRow>& rows) {
  if (c.format == "csv") {
    os << "rank,experiment,eig_nats\n";
    for (const auto& r : rows) os << r.rank << ',' << r.experiment << ',' << fixed6(r.eig) << '\n';
    return;
  }
  json j;
  j["suite"] = c.suite;
  j["models"] = c.models;
  j["prior"] = priorJson(c);
  j["outcome_prior"] = std::string(outcomePriorName(effectiveOutcomePrior(c)));
  j["n"] = c.n;
  if (c.suite == "category") j["parameter_mode"] = std::string(category::parameterModeName(c.parameterMode));
  j["reports"] = json::array();
  for (const auto& r : rows) {
    json e = r.detail;
    e["rank"] = r.rank;
    e["experiment"] = r.experiment;
    e["eig_nats"] = r.eig;
    e["eig_nats_6dp"] = fixed6(r.eig);
    j["reports"].push_back(std::move(e));
  }
  os << j.dump(2) << '\n';
}

void printTopTable(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << std::left << std::setw(6) << "rank" << std::setw(48) << "experiment" << "eig_nats\n";
  for (std::size_t i = 0; i < rows.size() && i < 5; ++i) {
    os << std::left << std::setw(6) << rows[i].rank << std::setw(48) << rows[i].experiment << fixed6(rows[i].eig)
       << '\n';
  }
}

// --- commands -------------------------------------------------------------------

int cmdRank(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<ReportRow> rows;
  if (c.suite == "coin") {
    const auto grouped = groupifySpace(coinSpace(c), coin::Flip::H);
    std::vector<coin::CoinExperiment> xs;
    for (const auto& s : coinExperiments(c)) xs.push_back({c.n, s});
    const auto reports = rankExperiments<coin::CoinExperiment, int>(
        grouped, xs, effectiveOutcomePrior(c), [](const coin::CoinExperiment& x) { return countResponseSpace(x.n); },
        c.threads);
    rows = toRows(reports, [](const coin::CoinExperiment& x) { return x.inner.str(); });
  } else {
    const auto reports = category::rankStructures(categoryExperiments(c), categoryOptions(c, c.n));
    rows = toRows(reports, [](const category::CategoryStructure& s) { return category::toKey(s); });
  }

  Output o(c.output, out);
  writeReports(o.stream(), c, rows);
  if (o.toFile()) printTopTable(out, rows);

  if (c.softmaxTemperature) {
    std::mt19937_64 rng(c.seed.value_or(0));
    std::vector<DesignReport<std::string, int>> plain;
    for (const auto& r : rows) plain.push_back({r.experiment, r.eig, {}, r.rank});
    const auto pick = softmaxSample<std::string, int>(plain, *c.softmaxTemperature, rng);
    (o.toFile() ? out : err) << "sampled experiment: " << rows[pick].experiment << '\n';
  }
  return kSuccess;
}

int cmdCurve(const RunConfig& c, std::ostream& out) {
  std::vector<int> range;
  for (int n = c.nMin; n <= c.nMax; ++n) range.push_back(n);
  struct Row {
    std::string experiment;
    int n;
    double eig;
  };
  std::vector<Row> rows;
  if (c.suite == "coin") {
    const auto space = coinSpace(c);
    for (const auto& s : coinExperiments(c)) {
      for (const auto& [n, eig] : eigCurve(space, s, coin::Flip::H, range, effectiveOutcomePrior(c))) {
        rows.push_back({s.str(), n, eig});
      }
    }
  } else {
    for (const auto& s : categoryExperiments(c)) {
      for (int n : range) rows.push_back({category::toKey(s), n, category::structureEig(s, categoryOptions(c, n)).eig});
    }
  }
  Output o(c.output, out);
  auto& os = o.stream();
  if (c.format == "csv") {
    os << "experiment,n,eig_nats\n";
    for (const auto& r : rows) os << r.experiment << ',' << r.n << ',' << fixed6(r.eig) << '\n';
  } else {
    json j = json::array();
    for (const auto& r : rows) j.push_back({{"experiment", r.experiment}, {"n", r.n}, {"eig_nats", r.eig}});
    os << j.dump(2) << '\n';
  }
  if (o.toFile()) out << "wrote " << rows.size() << " rows to " << c.output << '\n';
  return kSuccess;
}

int cmdEnumerate(const RunConfig& c, std::ostream& out) {
  if (c.suite != "category") throw ConfigError("suite: enumerate applies to the category suite");
  const auto structures = category::enumerateStructures();
  Output o(c.output, out);
  for (const auto& s : structures) o.stream() << category::structureToJson(s).dump() << '\n';
  (o.toFile() ? out : std::cerr) << structures.size() << " structures\n";
  return kSuccess;
}

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Record {
  std::size_t row = 0;
  std::string experiment;
  int n = 0;
  CountVector response;  // one entry for the coin suite
};

std::vector<Record> readData(const RunConfig& c) {
  std::ifstream in(c.data);
  if (!in) throw ConfigError("data: cannot open \"" + c.data + "\"");
  std::string line;
  if (!std::getline(in, line)) throw DataError("data file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "experiment,n,response") throw DataError("row 0: header must be 'experiment,n,response'");
  const std::size_t items = c.suite == "coin" ? 1 : category::kObjectCount;
  std::vector<Record> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto fields = split(line, ',');
      if (fields.size() != 3) throw std::invalid_argument("expected 3 fields");
      Record r{row, fields[0], parseInt(fields[1], "n"), {}};
      if (r.n < 1) throw std::invalid_argument("n must be at least 1");
      if (c.suite == "coin") {
        (void)coin::CoinSequence::parse(r.experiment);
      } else {
        (void)resolveStructure(r.experiment);
      }
      for (const auto& f : split(fields[2], ';')) r.response.push_back(parseInt(f, "response"));
      if (r.response.size() != items) {
        throw std::invalid_argument("response needs " + std::to_string(items) + " count(s)");
      }
      for (int k : r.response) {
        if (k < 0 || k > r.n) throw std::invalid_argument("count outside [0, n]");
      }
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw DataError("row " + std::to_string(row) + ": " + e.what());
    }
  }
  return out;
}

struct AigResult {
  std::optional<double> aig;
  std::optional<double> eig;
  std::vector<double> posterior;  // model order; empty on failure
  std::string status = "ok";
};

AigResult analyzeCoin(const RunConfig& c, const Record& r) {
  AigResult out;
  const auto grouped = groupifySpace(coinSpace(c), coin::Flip::H);
  const coin::CoinExperiment x{r.n, coin::CoinSequence::parse(r.experiment)};
  try {
    const auto post = modelPosterior(grouped, x, r.response[0]);
    for (const auto& m : c.models) out.posterior.push_back(post.probability(m));
    out.aig = klDivergence(post, grouped.prior());
  } catch (const OedError& e) {
    out.status = std::string(errorCodeName(e.code()));
  }
  out.eig = expectedInformationGain(grouped, x, effectiveOutcomePrior(c), countResponseSpace(r.n)).eig;
  return out;
}

AigResult analyzeCategory(const RunConfig& c, const Record& r) {
  AigResult out;
  const auto options = categoryOptions(c, r.n);
  const auto space = category::groupModelSpace(options);
  const GroupExperiment<category::CategoryStructure> x{r.n, resolveStructure(r.experiment)};
  try {
    const auto post = modelPosterior(space, x, r.response);
    for (const auto& m : c.models) out.posterior.push_back(post.probability(m));
    out.aig = klDivergence(post, space.prior());
  } catch (const OedError& e) {
    out.status = std::string(errorCodeName(e.code()));
  }
  try {
    out.eig = category::structureEig(x.inner, options).eig;
  } catch (const OedError& e) {
    if (e.code() != ErrorCode::SupportTooLarge) throw;
    if (out.status == "ok") out.status = "eig_unavailable";
  }
  return out;
}

int cmdAig(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.data.empty()) throw ConfigError("data: aig needs a data file (--data)");
  std::vector<Record> records;
  try {
    records = readData(c);
  } catch (const DataError& e) {
    err << "data error: " << c.data << ": " << e.what() << '\n';
    return kDataError;
  }

  // Prefix mode replaces each record with the running total of its experiment.
  if (c.prefix) {
    std::map<std::string, Record> totals;
    for (auto& r : records) {
      auto [it, fresh] = totals.try_emplace(r.experiment, r);
      if (!fresh) {
        it->second.n += r.n;
        for (std::size_t k = 0; k < r.response.size(); ++k) it->second.response[k] += r.response[k];
        it->second.row = r.row;
      }
      r = it->second;
    }
  }

  Output o(c.output, out);
  auto& os = o.stream();
  json rowsJson = json::array();
  if (c.format == "csv") {
    os << "row,experiment,n,response,aig_nats,eig_nats,status";
    for (const auto& m : c.models) os << ",post_" << m;
    os << '\n';
  }
  std::size_t failures = 0;
  for (const auto& r : records) {
    const auto res = c.suite == "coin" ? analyzeCoin(c, r) : analyzeCategory(c, r);
    failures += res.status != "ok" && res.status != "eig_unavailable";
    const std::string response = c.suite == "coin" ? std::to_string(r.response[0]) : toKey(r.response);
    if (c.format == "csv") {
      os << r.row << ',' << r.experiment << ',' << r.n << ',' << response << ','
         << (res.aig ? fixed6(*res.aig) : "") << ',' << (res.eig ? fixed6(*res.eig) : "") << ',' << res.status;
      for (std::size_t i = 0; i < c.models.size(); ++i) {
        os << ',' << (res.posterior.empty() ? "" : fixed6(res.posterior[i]));
      }
      os << '\n';
    } else {
      json e{{"row", r.row}, {"experiment", r.experiment}, {"n", r.n}, {"response", response}, {"status", res.status}};
      e["aig_nats"] = res.aig ? json(*res.aig) : json(nullptr);
      e["eig_nats"] = res.eig ? json(*res.eig) : json(nullptr);
      if (!res.posterior.empty()) {
        json post = json::object();
        for (std::size_t i = 0; i < c.models.size(); ++i) post[c.models[i]] = res.posterior[i];
        e["posterior"] = post;
      }
      rowsJson.push_back(std::move(e));
    }
  }
  if (c.format == "json") os << json{{"suite", c.suite}, {"models", c.models}, {"rows", rowsJson}}.dump(2) << '\n';
  if (failures > 0) {
    err << "analysis error: " << failures << " of " << records.size()
        << " rows could not be scored (see status column)\n";
    return kAnalysisError;
  }
  return kSuccess;
}

// --- argument handling ----------------------------------------------------------

struct Overrides {
  std::string config;
  std::optional<std::string> suite;
  std::vector<std::string> models;
  std::optional<int> n;
  std::optional<std::string> outcomePrior;
  std::optional<std::string> parameterMode;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> experiments;
  std::vector<int> nRange;
  std::optional<std::string> data;
  bool prefix = false;
  std::optional<double> softmaxTemperature;
  std::optional<unsigned> threads;
};

void addOptions(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--suite", o.suite, "coin or category");
  cmd->add_option("--models", o.models, "Comma-separated model names")->delimiter(',');
  cmd->add_option("--n", o.n, "Number of participants");
  cmd->add_option("--outcome-prior", o.outcomePrior, "uniform or predictive");
  cmd->add_option("--parameter-mode", o.parameterMode, "point or marginalized (category)");
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--seed", o.seed, "Seed for the softmax sampler");
  cmd->add_option("--experiments", o.experiments, "Comma-separated experiment keys")->delimiter(',');
  cmd->add_option("--n-range", o.nRange, "MIN,MAX participants for curve")->delimiter(',')->expected(2);
  cmd->add_option("--data", o.data, "Empirical data CSV for aig");
  cmd->add_flag("--prefix", o.prefix, "AIG on cumulative participant prefixes");
  cmd->add_option("--softmax-temperature", o.softmaxTemperature, "Also sample an experiment by softmax(EIG/T)");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
}

RunConfig resolveConfig(const Overrides& o) {
  RunConfig c;
  if (!o.config.empty()) {
    std::ifstream in(o.config, std::ios::binary);
    if (!in) throw ConfigError("cannot open config \"" + o.config + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      c = parseConfig(buf.str());
    } catch (const ConfigError& e) {
      throw ConfigError(o.config + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
    }
  }
  // Flags win over the file.
  if (o.suite) {
    if (*o.suite != c.suite && o.models.empty()) c.models.clear();
    c.suite = *o.suite;
  }
  if (!o.models.empty()) c.models = o.models;
  if (o.n) c.n = *o.n;
  if (o.outcomePrior) {
    auto p = parseOutcomePrior(*o.outcomePrior);
    if (!p) throw ConfigError("--outcome-prior must be uniform or predictive");
    c.outcomePrior = *p;
  }
  if (o.parameterMode) {
    auto m = category::parseParameterMode(*o.parameterMode);
    if (!m) throw ConfigError("--parameter-mode must be point or marginalized");
    c.parameterMode = *m;
  }
  if (o.out) c.output = *o.out;
  if (o.format) c.format = *o.format;
  if (o.seed) c.seed = *o.seed;
  if (!o.experiments.empty()) c.experiments = o.experiments;
  if (o.nRange.size() == 2) {
    c.nMin = o.nRange[0];
    c.nMax = o.nRange[1];
  }
  if (o.data) c.data = *o.data;
  if (o.prefix) c.prefix = true;
  if (o.softmaxTemperature) c.softmaxTemperature = *o.softmaxTemperature;
  if (o.threads) c.threads = *o.threads;
  if (c.prior && c.prior->size() != c.models.size()) {
    if (!o.models.empty()) c.prior.reset();  // file prior no longer matches overridden models
  }
  validateConfig(c);
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian optimal experiment design for model comparison", "oed"};
  app.require_subcommand(1);
  Overrides o;
  std::map<std::string, CLI::App*> cmds;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"rank", "Rank every experiment by expected information gain"},
           {"curve", "EIG versus number of participants"},
           {"enumerate", "List the canonical category structures"},
           {"aig", "Actual information gain of empirical data"},
           {"print-config", "Print the resolved configuration"}}) {
    cmds[name] = app.add_subcommand(name, help);
    addOptions(cmds[name], o);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    RunConfig c = resolveConfig(o);
    if (cmds["print-config"]->parsed()) {
      out << configToJson(c).dump(2) << '\n';
      return kSuccess;
    }
    if (cmds["rank"]->parsed()) return cmdRank(c, out, err);
    if (cmds["curve"]->parsed()) return cmdCurve(c, out);
    if (cmds["enumerate"]->parsed()) return cmdEnumerate(c, out);
    if (cmds["aig"]->parsed()) return cmdAig(c, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OedError& e) {
    err << "analysis error: " << e.what() << '\n';
    return kAnalysisError;
  }
  return kConfigError;
}

}  // namespace oed::cli
