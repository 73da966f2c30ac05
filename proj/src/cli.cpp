#include "logsift/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logsift/analytics.hpp"
#include "logsift/config.hpp"
#include "logsift/corpus.hpp"
#include "logsift/io.hpp"
#include "logsift/jobs.hpp"
#include "logsift/kde.hpp"
#include "logsift/matcher.hpp"
#include "logsift/parallel.hpp"
#include "logsift/peft.hpp"
#include "logsift/perturbation.hpp"
#include "logsift/signature.hpp"
#include "logsift/svg.hpp"
#include "logsift/template_generation.hpp"
#include "logsift/ward.hpp"

namespace logsift {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr std::size_t kBatch = 1 << 16;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Data destination: a file when a path is given, the command's stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  f << text;
}

// Options shared by every subcommand. Only values given on the command line
// override the config file.
struct Common {
  std::vector<std::string> inputs;
  std::string config_path;
  std::string templates;
  std::string out;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::int64_t window_s = 300;
  std::size_t n_samples = 5;
  std::string severity_rules;
  std::string category_rules;
  // The same flag exists on several subcommands; it counts if any copy was set.
  std::map<std::string, std::vector<CLI::Option*>> given;

  void note(const std::string& name, CLI::Option* opt) { given[name].push_back(opt); }

  bool has(const std::string& name) const {
    auto it = given.find(name);
    if (it == given.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [](CLI::Option* o) { return o->count() > 0; });
  }
};

void add_common(CLI::App* app, Common& c, bool with_inputs = true) {
  if (with_inputs) c.note("inputs", app->add_option("inputs", c.inputs, "Log files (- for stdin)"));
  c.note("config", app->add_option("--config", c.config_path, "Sectioned key=value config file"));
  c.note("out", app->add_option("-o,--out", c.out, "Output path (default stdout)"));
  c.note("seed", app->add_option("--seed", c.seed, "Random seed")->capture_default_str());
  c.note("threads", app->add_option("--threads", c.threads, "Worker threads (0 = all cores)"));
}

void add_templates_opt(CLI::App* app, Common& c) {
  c.note("templates", app->add_option("-t,--templates", c.templates, "Template file"));
}

void add_rules_opts(CLI::App* app, Common& c) {
  app->add_option("--severity-rules", c.severity_rules, "Severity rule file (default: built-in)");
  app->add_option("--category-rules", c.category_rules, "Category rule file (default: built-in)");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    try {
      apply_config(cfg, parse_config_text(read_file(c.config_path)));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      throw UsageError(e.what());
    }
  }
  apply_env(cfg);
  if (c.has("inputs")) cfg.inputs = c.inputs;
  if (c.has("templates")) cfg.templates_path = c.templates;
  if (c.has("seed")) cfg.seed = c.seed;
  if (c.has("threads")) cfg.threads = c.threads;
  if (c.has("window")) cfg.window_s = c.window_s;
  if (c.has("samples")) cfg.n_samples = c.n_samples;
  if (c.has("out")) cfg.output_dir = c.out;
  if (cfg.threads == 0) cfg.threads = default_threads();
  if (cfg.window_s <= 0) throw UsageError("--window must be positive");
  if (cfg.n_samples == 0) throw UsageError("--samples must be at least 1");
  cfg.validate();
  return cfg;
}

const SeverityRules& severity_rules(const Common& c, std::optional<SeverityRules>& storage) {
  if (c.severity_rules.empty()) return SeverityRules::defaults();
  storage = SeverityRules::load(c.severity_rules);
  return *storage;
}

const CategoryRules& category_rules(const Common& c, std::optional<CategoryRules>& storage) {
  if (c.category_rules.empty()) return CategoryRules::defaults();
  storage = CategoryRules::load(c.category_rules);
  return *storage;
}

CompiledTemplateSet load_templates(const RunConfig& cfg) {
  if (!cfg.templates_path) throw UsageError("a template file is required (--templates)");
  return CompiledTemplateSet::compile(read_templates(*cfg.templates_path));
}

// Reads every input in batches; `on_batch` sees each batch in input order.
template <typename Fn>
void for_each_batch(const std::vector<std::string>& inputs, std::istream& in, Fn&& on_batch) {
  std::vector<std::string> paths = inputs.empty() ? std::vector<std::string>{"-"} : inputs;
  std::vector<RawLogRecord> batch;
  for (const std::string& p : paths) {
    std::ifstream file;
    std::istream* src = &in;
    std::optional<std::string> source;
    if (p != "-") {
      file.open(p, std::ios::binary);
      if (!file) throw Error(ErrorCode::Io, "cannot open '" + p + "'");
      src = &file;
      source = p;
    }
    RecordReader reader(*src, source);
    while (reader.next_batch(batch, kBatch)) on_batch(batch);
  }
}

struct LineResult {
  std::optional<TemplateMatch> match;
  Severity severity = Severity::Unknown;
};

// Matches and classifies a batch in parallel, then calls `fn` per record in
// input order so downstream folds are independent of the thread count.
template <typename Fn>
void for_each_line(const RunConfig& cfg, std::istream& in, const CompiledTemplateSet* set,
                   const SeverityRules& rules, Fn&& fn) {
  std::vector<LineResult> results;
  for_each_batch(cfg.inputs, in, [&](const std::vector<RawLogRecord>& batch) {
    results.assign(batch.size(), {});
    parallel_chunks(batch.size(), cfg.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        if (set) results[i].match = set->match(batch[i].message);
        results[i].severity = rules.classify(batch[i].message);
      }
    });
    for (std::size_t i = 0; i < batch.size(); ++i) fn(batch[i], results[i]);
  });
}

ojson variables_json(const std::vector<std::pair<std::string, std::string>>& vars) {
  ojson obj = ojson::object();
  std::map<std::string, int> seen;
  for (const auto& [name, value] : vars) {
    const int n = ++seen[name];
    obj[n == 1 ? name : name + "#" + std::to_string(n)] = value;
  }
  return obj;
}

ojson record_json(const RawLogRecord& r) {
  ojson j;
  j["line_no"] = r.line_no;
  if (r.timestamp_ns) j["timestamp"] = format_epoch(*r.timestamp_ns);
  if (r.host) j["host"] = *r.host;
  j["message"] = r.message;
  return j;
}

RawLogRecord record_from_json(const ojson& j) {
  RawLogRecord r;
  r.line_no = j.value("line_no", std::uint64_t{0});
  if (j.contains("timestamp")) r.timestamp_ns = parse_epoch_ns(j["timestamp"].get<std::string>());
  if (j.contains("host")) r.host = j["host"].get<std::string>();
  r.message = j.at("message").get<std::string>();
  return r;
}

std::vector<SignatureGroup> read_groups(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open groups file '" + path + "'");
  std::vector<SignatureGroup> groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const ojson j = ojson::parse(line);
      SignatureGroup g;
      g.signature = make_signature(j.at("representatives").at(0).at("message").get<std::string>());
      g.signature.masked_form = j.at("masked_form").get<std::string>();
      g.signature.key = fnv1a64(g.signature.masked_form);
      g.member_count = j.at("member_count").get<std::uint64_t>();
      for (const auto& r : j.at("representatives")) g.representatives.push_back(record_from_json(r));
      groups.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, "groups line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return groups;
}

std::vector<SignatureGroup> collect_groups(const RunConfig& cfg, std::istream& in) {
  SignatureGrouper grouper(cfg.n_samples, cfg.seed);
  for_each_batch(cfg.inputs, in, [&](const std::vector<RawLogRecord>& batch) {
    grouper.add_batch(batch, cfg.threads);
  });
  return grouper.finish();
}

// ---------------------------------------------------------------------------
// One streaming pass feeding every analysis product.

struct Analysis {
  bool want_jobs = false;
  bool want_pairs = false;
  std::string sender_var = "sender";
  std::string receiver_var = "receiver";

  CoverageReport coverage;
  FingerprintTable fingerprints;
  std::map<Severity, std::uint64_t> severity_counts;
  TemporalAccumulator by_category;
  TemporalAccumulator by_severity;
  std::uint64_t untimed = 0;
  std::optional<JobIndex> jobs;
  std::map<std::pair<std::string, std::string>, double> category_domain;
  std::uint64_t joined = 0;
  std::uint64_t join_unmatched = 0;
  std::vector<WeightedPoint> pairs;

  explicit Analysis(std::int64_t window_ns) : by_category(window_ns), by_severity(window_ns) {}
};

std::optional<double> numeric_id(std::string_view value) {
  std::size_t b = value.find_first_of("0123456789");
  if (b == std::string_view::npos) return std::nullopt;
  // Prefer the last digit run so ids like x1000c0s2b0n1 map to the node index.
  std::size_t last_b = b, last_e = b;
  for (std::size_t i = b; i < value.size();) {
    if (std::isdigit(static_cast<unsigned char>(value[i]))) {
      std::size_t e = i;
      while (e < value.size() && std::isdigit(static_cast<unsigned char>(value[e]))) ++e;
      last_b = i;
      last_e = e;
      i = e;
    } else {
      ++i;
    }
  }
  return std::stod(std::string(value.substr(last_b, last_e - last_b)));
}

void run_analysis(const RunConfig& cfg, std::istream& in, const CompiledTemplateSet& set,
                  const SeverityRules& sev_rules, const CategoryRules& cat_rules, Analysis& a) {
  std::vector<std::string> category_of;
  for (const LogTemplate& t : set.templates()) category_of.push_back(cat_rules.categorize(t.raw()).id);
  for_each_line(cfg, in, &set, sev_rules, [&](const RawLogRecord& r, const LineResult& lr) {
    a.coverage.add(r.message, lr.match.has_value());
    ++a.severity_counts[lr.severity];
    if (r.timestamp_ns) a.by_severity.add(*r.timestamp_ns, severity_name(lr.severity));
    if (!lr.match) return;
    const LogTemplate& t = set.templates()[lr.match->template_index];
    a.fingerprints.add(t.id(), t.raw(), r.timestamp_ns, r.host, lr.severity);
    const std::string& category = category_of[lr.match->template_index];
    if (r.timestamp_ns) {
      a.by_category.add(*r.timestamp_ns, category);
    } else {
      ++a.untimed;
    }
    if (a.want_jobs && a.jobs) {
      std::optional<std::size_t> job;
      if (r.host && r.timestamp_ns) job = a.jobs->find(*r.host, *r.timestamp_ns);
      if (job) {
        ++a.joined;
        a.category_domain[{category, a.jobs->jobs()[*job].account}] += 1.0;
      } else {
        ++a.join_unmatched;
      }
    }
    if (a.want_pairs) {
      std::optional<double> s, d;
      for (const auto& [name, value] : lr.match->variables) {
        if (name == a.sender_var && !s) s = numeric_id(value);
        if (name == a.receiver_var && !d) d = numeric_id(value);
      }
      if (s && d) a.pairs.push_back({*s, *d, 1.0});
    }
  });
  a.coverage.finalize();
}

// ---------------------------------------------------------------------------
// Writers

void write_fingerprints(std::ostream& os, const std::vector<FingerprintRow>& rows, const std::string& format) {
  auto ts = [](const std::optional<std::int64_t>& t) { return t ? format_epoch(*t) : std::string(); };
  if (format == "jsonl") {
    for (const auto& r : rows) {
      ojson j;
      j["template_id"] = r.template_id;
      j["count"] = r.count;
      j["first_seen"] = r.first_seen_ns ? ojson(format_epoch(*r.first_seen_ns)) : ojson(nullptr);
      j["last_seen"] = r.last_seen_ns ? ojson(format_epoch(*r.last_seen_ns)) : ojson(nullptr);
      j["severity"] = severity_name(r.severity);
      j["distinct_hosts"] = r.distinct_hosts;
      j["pattern"] = r.pattern;
      os << j.dump() << '\n';
    }
    return;
  }
  const char sep = format == "csv" ? ',' : '\t';
  auto cell = [&](const std::string& s) {
    if (sep == '\t' || s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  os << "template_id" << sep << "count" << sep << "first_seen" << sep << "last_seen" << sep << "severity" << sep
     << "distinct_hosts" << sep << "pattern\n";
  for (const auto& r : rows) {
    os << r.template_id << sep << r.count << sep << ts(r.first_seen_ns) << sep << ts(r.last_seen_ns) << sep
       << severity_name(r.severity) << sep << r.distinct_hosts << sep << cell(r.pattern) << '\n';
  }
}

void write_severity(std::ostream& os, const std::vector<SeverityShare>& shares) {
  os << "severity,label,count,percent\n";
  for (const auto& s : shares) {
    os << severity_name(s.severity) << ',' << severity_label(s.severity) << ',' << s.count << ','
       << fixed(s.percent, 4) << '\n';
  }
}

void write_series(std::ostream& os, const TemporalSeries& s) {
  os << "window_start";
  for (const auto& c : s.categories) os << ',' << c;
  os << '\n';
  for (Eigen::Index r = 0; r < s.counts.rows(); ++r) {
    os << format_epoch(s.window_starts_ns[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < s.counts.cols(); ++c) os << ',' << s.counts(r, c);
    os << '\n';
  }
}

void write_cdf(std::ostream& os, const CdfCurves& cdf) {
  os << "window_start";
  for (const auto& c : cdf.categories) os << ',' << c;
  os << '\n';
  for (Eigen::Index r = 0; r < cdf.fraction.rows(); ++r) {
    os << format_epoch(cdf.window_starts_ns[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < cdf.fraction.cols(); ++c) os << ',' << fixed(cdf.fraction(r, c), 6);
    os << '\n';
  }
}

std::string cdf_svg(const CdfCurves& cdf, const std::string& title) {
  std::vector<double> xs;
  const double t0 = cdf.window_starts_ns.empty() ? 0.0 : static_cast<double>(cdf.window_starts_ns.front());
  for (auto t : cdf.window_starts_ns) xs.push_back((static_cast<double>(t) - t0) / 3.6e12);
  std::vector<svg::Series> series;
  for (Eigen::Index c = 0; c < cdf.fraction.cols(); ++c) {
    svg::Series s{cdf.categories[static_cast<std::size_t>(c)], {}};
    for (Eigen::Index r = 0; r < cdf.fraction.rows(); ++r) s.ys.push_back(cdf.fraction(r, c));
    series.push_back(std::move(s));
  }
  return svg::line_chart(title, xs, series, "hours since first window", "cumulative fraction");
}

CategoryDomainMatrix read_matrix_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out(1);
    for (char c : s) {
      if (c == ',') {
        out.emplace_back();
      } else if (c != '\r') {
        out.back() += c;
      }
    }
    return out;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyMatrix, "matrix file '" + path + "' is empty");
  auto header = split(line);
  CategoryDomainMatrix m;
  m.col_labels.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \r") == std::string::npos) continue;
    auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::Parse, "matrix line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " cells");
    }
    m.row_labels.push_back(cells[0]);
    std::vector<double> v;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      try {
        v.push_back(std::stod(cells[i]));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "matrix line " + std::to_string(line_no) + ": bad number '" + cells[i] + "'");
      }
    }
    rows.push_back(std::move(v));
  }
  m.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.col_labels.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m.counts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void write_cluster(const fs::path& dir, const CategoryDomainMatrix& m, const ClusterResult& r) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "category";
  for (auto c : r.col_order) csv << ',' << m.col_labels[c];
  csv << '\n';
  Eigen::MatrixXd ordered(m.counts.rows(), m.counts.cols());
  std::vector<std::string> rl, cl;
  for (std::size_t i = 0; i < r.row_order.size(); ++i) {
    const auto ri = static_cast<Eigen::Index>(r.row_order[i]);
    rl.push_back(m.row_labels[r.row_order[i]]);
    csv << m.row_labels[r.row_order[i]];
    for (std::size_t j = 0; j < r.col_order.size(); ++j) {
      const auto cj = static_cast<Eigen::Index>(r.col_order[j]);
      ordered(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.counts(ri, cj);
      csv << ',' << m.counts(ri, cj);
    }
    csv << '\n';
  }
  for (auto c : r.col_order) cl.push_back(m.col_labels[c]);
  write_text(dir / "matrix.csv", csv.str());

  auto order = [](const std::vector<std::string>& labels) {
    std::string s;
    for (const auto& l : labels) s += l + "\n";
    return s;
  };
  write_text(dir / "row_order.txt", order(rl));
  write_text(dir / "col_order.txt", order(cl));

  auto linkage = [](const Dendrogram& d) {
    std::string s = "left,right,height,size\n";
    for (const auto& m : d.merges) {
      s += std::to_string(m.left) + "," + std::to_string(m.right) + "," + fixed(m.height, 9) + "," +
           std::to_string(m.size) + "\n";
    }
    return s;
  };
  write_text(dir / "row_linkage.csv", linkage(r.rows));
  write_text(dir / "col_linkage.csv", linkage(r.cols));
  write_text(dir / "heatmap.svg", svg::heatmap("Error category x domain (log10(1+count))", ordered, rl, cl, true));
}

std::vector<WeightedPoint> read_pairs_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<WeightedPoint> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells(1);
    for (char c : line) {
      if (c == ',') {
        cells.emplace_back();
      } else {
        cells.back() += c;
      }
    }
    if (cells.size() < 2 || cells.size() > 3) {
      throw Error(ErrorCode::Parse, "pairs line " + std::to_string(line_no) + ": expected sender,receiver[,weight]");
    }
    try {
      pts.push_back({std::stod(cells[0]), std::stod(cells[1]), cells.size() == 3 ? std::stod(cells[2]) : 1.0});
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header row
      throw Error(ErrorCode::Parse, "pairs line " + std::to_string(line_no) + ": bad number");
    }
  }
  return pts;
}

void write_kde(std::ostream& os, const KdeGrid& g) {
  os << "x,y,density\n";
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    for (std::size_t j = 0; j < g.ys.size(); ++j) {
      os << fixed(g.xs[i], 6) << ',' << fixed(g.ys[j], 6) << ','
         << fixed(g.density(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 12) << '\n';
    }
  }
}

std::string kde_svg(const KdeGrid& g) {
  // Transposed so that receivers run down the rows.
  const Eigen::MatrixXd m = g.density.transpose().colwise().reverse();
  std::vector<std::string> rows, cols;
  for (auto it = g.ys.rbegin(); it != g.ys.rend(); ++it) rows.push_back(fixed(*it, 1));
  for (double x : g.xs) cols.push_back(fixed(x, 1));
  return svg::heatmap("Sender x receiver error density", m, rows, cols, false);
}

ojson coverage_json(const CoverageReport& c) {
  ojson j;
  j["total"] = c.total;
  j["parsed"] = c.parsed;
  j["coverage_pct"] = c.coverage_pct;
  j["empty_input"] = c.empty_input;
  j["unmatched_examples"] = c.unmatched_examples;
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_signatures(const Common& c, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve(c);
  auto groups = collect_groups(cfg, in);
  Sink sink(c.out, out);
  std::uint64_t members = 0;
  for (const auto& g : groups) {
    ojson j;
    j["signature"] = hex64(g.signature.key);
    j["masked_form"] = g.signature.masked_form;
    j["member_count"] = g.member_count;
    j["representatives"] = ojson::array();
    for (const auto& r : g.representatives) j["representatives"].push_back(record_json(r));
    *sink << j.dump() << '\n';
    members += g.member_count;
  }
  err << "signatures: " << members << " records in " << groups.size() << " groups\n";
  return kExitOk;
}

struct TemplatesArgs {
  std::string mode = "heuristic";
  std::string groups_path;
  std::string instructions_file;
  std::string directive_file;
  std::string model;
  std::string url;
  double timeout_s = 0;
  unsigned concurrency = 0;
};

int cmd_templates(const Common& c, const TemplatesArgs& t, std::istream& in, std::ostream& out,
                  std::ostream& err) {
  RunConfig cfg = resolve(c);
  if (auto m = mode_from_string(t.mode)) {
    cfg.mode = *m;
  } else {
    throw UsageError("--mode must be llm or heuristic");
  }
  if (!t.url.empty()) cfg.llm.base_url = t.url;
  if (!t.model.empty()) cfg.llm.model_name = t.model;
  if (t.timeout_s > 0) cfg.llm.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(t.timeout_s * 1000));
  if (t.concurrency > 0) cfg.llm.max_concurrent_requests = t.concurrency;
  cfg.validate();

  auto groups = t.groups_path.empty() ? collect_groups(cfg, in) : read_groups(t.groups_path);
  std::vector<LogTemplate> all;
  if (cfg.mode == TemplateMode::Heuristic) {
    for (const auto& g : groups) {
      for (auto& tmpl : heuristic_templates(g)) all.push_back(std::move(tmpl));
    }
  } else {
    PromptSpec spec = PromptSpec::defaults();
    spec.max_examples = cfg.n_samples;
    if (!t.instructions_file.empty()) spec.instructions = read_file(t.instructions_file);
    if (!t.directive_file.empty()) spec.cot_directive = read_file(t.directive_file);
    auto results = generate_llm_templates(groups, spec, cfg.llm);
    std::size_t endpoint_failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      for (const auto& le : r.line_errors) {
        ojson j;
        j["group"] = i;
        j["signature"] = hex64(groups[i].signature.key);
        j["line"] = le.line;
        j["error"] = to_string(le.code);
        j["message"] = le.message;
        err << j.dump() << '\n';
      }
      if (r.failure) {
        ojson j;
        j["group"] = i;
        j["signature"] = hex64(groups[i].signature.key);
        j["error"] = to_string(*r.failure);
        j["message"] = r.failure_message;
        err << j.dump() << '\n';
        if (*r.failure == ErrorCode::Timeout || *r.failure == ErrorCode::HttpStatus ||
            *r.failure == ErrorCode::MalformedResponse) {
          ++endpoint_failures;
        }
      }
      for (const auto& tmpl : r.templates) all.push_back(tmpl);
    }
    if (!groups.empty() && endpoint_failures == groups.size()) {
      err << "templates: endpoint failed for every group\n";
      return kExitEndpoint;
    }
  }
  std::vector<LogTemplate> unique;
  std::unordered_set<std::string> seen;
  for (auto& tmpl : all) {
    if (seen.insert(tmpl.raw()).second) unique.push_back(std::move(tmpl));
  }
  Sink sink(c.out, out);
  write_templates(*sink, unique);
  err << "templates: " << unique.size() << " templates from " << groups.size() << " groups\n";
  return kExitOk;
}

int cmd_parse(const Common& c, bool include_unmatched, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve(c);
  const CompiledTemplateSet set = load_templates(cfg);
  std::optional<SeverityRules> sr;
  const SeverityRules& rules = severity_rules(c, sr);
  Sink sink(c.out, out);
  std::uint64_t total = 0, parsed = 0;
  for_each_line(cfg, in, &set, rules, [&](const RawLogRecord& r, const LineResult& lr) {
    ++total;
    ojson j;
    j["line_no"] = r.line_no;
    if (lr.match) {
      ++parsed;
      j["template_id"] = set.templates()[lr.match->template_index].id();
      j["variables"] = variables_json(lr.match->variables);
    } else {
      if (!include_unmatched) return;
      j["template_id"] = nullptr;
      j["variables"] = ojson::object();
    }
    j["severity"] = severity_name(lr.severity);
    *sink << j.dump() << '\n';
  });
  err << "parse: " << parsed << " of " << total << " lines matched\n";
  return kExitOk;
}

int cmd_coverage(const Common& c, const std::string& format, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg = resolve(c);
  const CompiledTemplateSet set = load_templates(cfg);
  CoverageReport report;
  std::vector<std::uint8_t> hits;
  for_each_batch(cfg.inputs, in, [&](const std::vector<RawLogRecord>& batch) {
    hits.assign(batch.size(), 0);
    parallel_chunks(batch.size(), cfg.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i] = set.match(batch[i].message) ? 1 : 0;
    });
    for (std::size_t i = 0; i < batch.size(); ++i) report.add(batch[i].message, hits[i] != 0);
  });
  report.finalize();
  if (report.empty_input) err << "coverage: warning: input contained no log lines\n";
  Sink sink(c.out, out);
  if (format == "text") {
    *sink << "coverage: " << fixed(report.coverage_pct, 1) << "% (" << report.parsed << "/" << report.total
          << ")\n";
  } else {
    *sink << coverage_json(report).dump() << '\n';
  }
  return kExitOk;
}

struct PerturbArgs {
  std::size_t patterns = 100;
  std::size_t per_pattern = 3;
  std::vector<std::string> kinds;
  std::string extractor = "heuristic";
  std::string failures;
  bool message_level = false;
};

int cmd_perturb(const Common& c, const PerturbArgs& p, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve(c);
  const CompiledTemplateSet gold = load_templates(cfg);

  // Up to per_pattern instances for each of the first `patterns` templates seen.
  std::vector<std::string> messages;
  std::map<std::size_t, std::size_t> taken;
  std::size_t templates_used = 0;
  for_each_batch(cfg.inputs, in, [&](const std::vector<RawLogRecord>& batch) {
    for (const auto& r : batch) {
      auto m = gold.match(r.message);
      if (!m) continue;
      auto it = taken.find(m->template_index);
      if (it == taken.end()) {
        if (templates_used >= p.patterns) continue;
        ++templates_used;
        it = taken.emplace(m->template_index, 0).first;
      }
      if (it->second >= p.per_pattern) continue;
      ++it->second;
      messages.push_back(r.message);
    }
  });
  if (messages.empty()) throw Error(ErrorCode::EmptyInput, "no input line matches the gold templates");

  EvaluateOptions opts;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  opts.message_level = p.message_level;
  if (!p.kinds.empty()) {
    opts.kinds.clear();
    for (const auto& k : p.kinds) {
      auto kind = perturbation_from_id(k);
      if (!kind) throw UsageError("unknown perturbation '" + k + "'");
      opts.kinds.push_back(*kind);
    }
  }

  PatternExtractor extractor;
  if (p.extractor == "heuristic") {
    extractor = make_heuristic_extractor(gold);
  } else if (p.extractor == "llm") {
    cfg.llm.validate();
    const LlmEndpointConfig llm = cfg.llm;
    extractor = [llm](const RobustnessSample& s) -> std::string {
      PromptSpec spec = PromptSpec::defaults();
      spec.example_logs = {s.perturbed_message};
      auto ex = extract_templates(request_templates(render_prompt(spec), llm));
      if (ex.templates.empty()) throw Error(ErrorCode::NoTemplateBlock, "no valid template returned");
      return ex.templates.front().raw();
    };
  } else {
    throw UsageError("--extractor must be heuristic or llm");
  }

  auto rows = evaluate(gold, messages, extractor, opts);
  Sink sink(c.out, out);
  *sink << "Type,Acc.,Avg. Sim.,Lev.,WER,sample_count\n";
  for (const auto& r : rows) {
    *sink << perturbation_label(r.kind) << ',' << fixed(r.accuracy_pct, 1) << ',' << fixed(r.avg_similarity, 2)
          << ',' << fixed(r.levenshtein_norm, 2) << ',' << fixed(r.wer_pct, 1) << ',' << r.sample_count << '\n';
  }
  if (!p.failures.empty()) {
    Sink fsink(p.failures, out);
    for (const auto& r : rows) {
      for (const auto& [g, x] : r.failure_examples) {
        ojson j;
        j["type"] = perturbation_id(r.kind);
        j["gold"] = g;
        j["extracted"] = x;
        *fsink << j.dump() << '\n';
      }
    }
  }
  err << "perturb: " << messages.size() << " messages from " << templates_used << " patterns\n";
  return kExitOk;
}

struct MineArgs {
  std::string what;
  std::string format = "tsv";
  std::string by = "category";
  std::string cdf_out;
  std::string jobs;
  std::string matrix;
  std::string pairs;
  std::string sender_var = "sender";
  std::string receiver_var = "receiver";
  int nx = 64;
  int ny = 64;
  double hx = 0;
  double hy = 0;
};

int cmd_mine(const Common& c, const MineArgs& m, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg = resolve(c);
  std::optional<SeverityRules> sr;
  std::optional<CategoryRules> cr;
  const SeverityRules& srules = severity_rules(c, sr);
  const CategoryRules& crules = category_rules(c, cr);

  if (m.what == "severity") {
    std::map<Severity, std::uint64_t> counts;
    for_each_line(cfg, in, nullptr, srules, [&](const RawLogRecord&, const LineResult& lr) {
      ++counts[lr.severity];
    });
    Sink sink(c.out, out);
    write_severity(*sink, severity_distribution(counts));
    return kExitOk;
  }

  if (m.what == "cluster" && !m.matrix.empty()) {
    if (c.out.empty()) throw UsageError("mine cluster needs --out DIR");
    const auto matrix = read_matrix_csv(m.matrix);
    const auto result = ward_cluster(matrix);
    write_cluster(c.out, matrix, result);
    if (result.degenerate_rows || result.degenerate_cols) err << "cluster: warning: degenerate matrix\n";
    return kExitOk;
  }

  if (m.what == "kde" && !m.pairs.empty()) {
    KdeOptions ko;
    ko.nx = m.nx;
    ko.ny = m.ny;
    if (m.hx > 0) ko.hx = m.hx;
    if (m.hy > 0) ko.hy = m.hy;
    const auto grid = kde_density(read_pairs_csv(m.pairs), ko);
    Sink sink(c.out, out);
    write_kde(*sink, grid);
    err << "kde: hx=" << fixed(grid.hx, 4) << " hy=" << fixed(grid.hy, 4) << " raw_mass=" << fixed(grid.raw_mass, 6)
        << '\n';
    return kExitOk;
  }

  const CompiledTemplateSet set = load_templates(cfg);

  if (m.what == "jobs") {
    if (m.jobs.empty()) throw UsageError("mine jobs needs --jobs FILE");
    const JobIndex index = JobIndex::build(read_jobs_csv(m.jobs));
    Sink sink(c.out, out);
    std::uint64_t joined = 0, total = 0;
    for_each_line(cfg, in, &set, srules, [&](const RawLogRecord& r, const LineResult& lr) {
      ++total;
      std::optional<std::size_t> job;
      if (r.host && r.timestamp_ns) job = index.find(*r.host, *r.timestamp_ns);
      ojson j;
      j["line_no"] = r.line_no;
      j["host"] = r.host ? ojson(*r.host) : ojson(nullptr);
      j["timestamp"] = r.timestamp_ns ? ojson(format_epoch(*r.timestamp_ns)) : ojson(nullptr);
      j["template_id"] = lr.match ? ojson(set.templates()[lr.match->template_index].id()) : ojson(nullptr);
      j["job_id"] = job ? ojson(index.jobs()[*job].job_id) : ojson(nullptr);
      j["account"] = job ? ojson(index.jobs()[*job].account) : ojson(nullptr);
      j["matched"] = job.has_value();
      joined += job ? 1 : 0;
      *sink << j.dump() << '\n';
    });
    err << "jobs: " << joined << " of " << total << " events joined\n";
    return kExitOk;
  }

  Analysis a(cfg.window_s * 1'000'000'000LL);
  if (m.what == "cluster") {
    if (m.jobs.empty()) throw UsageError("mine cluster needs --matrix FILE or --jobs FILE with log input");
    if (c.out.empty()) throw UsageError("mine cluster needs --out DIR");
    a.want_jobs = true;
    a.jobs = JobIndex::build(read_jobs_csv(m.jobs));
  }
  if (m.what == "kde") {
    a.want_pairs = true;
    a.sender_var = m.sender_var;
    a.receiver_var = m.receiver_var;
  }
  run_analysis(cfg, in, set, srules, crules, a);

  if (m.what == "fingerprint") {
    Sink sink(c.out, out);
    write_fingerprints(*sink, a.fingerprints.rows(), m.format);
    err << "fingerprint: " << a.fingerprints.event_count() << " events, " << a.coverage.total - a.coverage.parsed
        << " unmatched lines\n";
  } else if (m.what == "temporal") {
    TemporalSeries series;
    if (m.by == "category") {
      series = a.by_category.finish();
    } else if (m.by == "severity") {
      series = a.by_severity.finish();
    } else {
      throw UsageError("--by must be category or severity");
    }
    Sink sink(c.out, out);
    write_series(*sink, series);
    if (!m.cdf_out.empty()) {
      Sink cdf(m.cdf_out, out);
      write_cdf(*cdf, category_cdf(series));
    }
    if (a.untimed > 0) err << "temporal: " << a.untimed << " events without timestamp skipped\n";
  } else if (m.what == "cluster") {
    const auto matrix = CategoryDomainMatrix::from_counts(a.category_domain);
    const auto result = ward_cluster(matrix);
    write_cluster(c.out, matrix, result);
    err << "cluster: " << a.joined << " events joined, " << a.join_unmatched << " unmatched\n";
  } else if (m.what == "kde") {
    KdeOptions ko;
    ko.nx = m.nx;
    ko.ny = m.ny;
    if (m.hx > 0) ko.hx = m.hx;
    if (m.hy > 0) ko.hy = m.hy;
    const auto grid = kde_density(a.pairs, ko);
    Sink sink(c.out, out);
    write_kde(*sink, grid);
  } else {
    throw UsageError("unknown mine target '" + m.what + "'");
  }
  return kExitOk;
}

struct ReportArgs {
  std::string jobs;
  std::string pairs;
  std::string sender_var = "sender";
  std::string receiver_var = "receiver";
};

int cmd_report(const Common& c, const ReportArgs& ra, std::istream& in, std::ostream& err) {
  RunConfig cfg = resolve(c);
  if (c.out.empty()) throw UsageError("report needs --out DIR");
  const fs::path dir = c.out;
  fs::create_directories(dir);
  std::optional<SeverityRules> sr;
  std::optional<CategoryRules> cr;
  const SeverityRules& srules = severity_rules(c, sr);
  const CategoryRules& crules = category_rules(c, cr);
  const CompiledTemplateSet set = load_templates(cfg);

  Analysis a(cfg.window_s * 1'000'000'000LL);
  if (!ra.jobs.empty()) {
    a.want_jobs = true;
    a.jobs = JobIndex::build(read_jobs_csv(ra.jobs));
  }
  a.want_pairs = ra.pairs.empty();
  a.sender_var = ra.sender_var;
  a.receiver_var = ra.receiver_var;
  run_analysis(cfg, in, set, srules, crules, a);

  write_text(dir / "coverage.json", coverage_json(a.coverage).dump(2) + "\n");
  {
    std::ostringstream s;
    write_fingerprints(s, a.fingerprints.rows(), "tsv");
    write_text(dir / "fingerprint.tsv", s.str());
  }
  const auto shares = severity_distribution(a.severity_counts);
  {
    std::ostringstream s;
    write_severity(s, shares);
    write_text(dir / "severity.csv", s.str());
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& sh : shares) {
      labels.emplace_back(severity_label(sh.severity));
      values.push_back(sh.percent);
    }
    write_text(dir / "severity.svg", svg::bar_chart("Severity distribution (%)", labels, values));
  }
  if (a.by_category.event_count() > 0) {
    const auto series = a.by_category.finish();
    const auto cdf = category_cdf(series);
    std::ostringstream s, d;
    write_series(s, series);
    write_cdf(d, cdf);
    write_text(dir / "temporal.csv", s.str());
    write_text(dir / "temporal_cdf.csv", d.str());
    write_text(dir / "temporal_cdf.svg", cdf_svg(cdf, "Cumulative events by category"));
  } else {
    err << "report: no timestamped events, temporal outputs skipped\n";
  }
  if (a.want_jobs) {
    if (a.category_domain.empty()) {
      err << "report: no events joined to jobs, cluster outputs skipped\n";
    } else {
      const auto matrix = CategoryDomainMatrix::from_counts(a.category_domain);
      write_cluster(dir / "cluster", matrix, ward_cluster(matrix));
    }
  }
  std::vector<WeightedPoint> pairs = ra.pairs.empty() ? a.pairs : read_pairs_csv(ra.pairs);
  if (!pairs.empty()) {
    const auto grid = kde_density(pairs, {});
    std::ostringstream s;
    write_kde(s, grid);
    write_text(dir / "kde.csv", s.str());
    write_text(dir / "kde.svg", kde_svg(grid));
  }
  err << "report: coverage " << fixed(a.coverage.coverage_pct, 1) << "% over " << a.coverage.total
      << " lines, " << a.fingerprints.rows().size() << " fingerprints\n";
  return kExitOk;
}

int cmd_gen(const Common& c, CorpusOptions opts, std::ostream& err) {
  if (c.out.empty()) throw UsageError("gen needs --out DIR");
  if (opts.templates == 0) throw UsageError("--templates must be at least 1");
  if (opts.lines < opts.templates) throw UsageError("--lines must be at least --templates");
  opts.seed = c.seed;
  write_corpus(opts, c.out);
  err << "gen: " << opts.lines << " lines from " << opts.templates << " templates in " << c.out << '\n';
  return kExitOk;
}

int cmd_peft_demo(std::ostream& out) {
  LoraAdapter<double> ad;
  ad.a = RowMatrix<double>(2, 1);
  ad.a << 1, 2;
  ad.b = RowMatrix<double>(1, 2);
  ad.b << 3, 4;
  ad.alpha = 2.0;
  RowMatrix<double> w0 = RowMatrix<double>::Identity(2, 2);
  const auto delta = lora_delta(ad);
  const auto w1 = lora_apply(w0, ad);
  Eigen::IOFormat fmt(Eigen::StreamPrecision, 0, ", ", "\n", "  [", "]");
  out << "LoRA update W' = W0 + (alpha / r) * A * B\n";
  out << "A (d x r = 2 x 1):\n" << ad.a.format(fmt) << "\n";
  out << "B (r x k = 1 x 2):\n" << ad.b.format(fmt) << "\n";
  out << "alpha = 2, r = 1, alpha / r = 2\n";
  out << "delta W:\n" << delta.format(fmt) << "\n";
  out << "W0:\n" << w0.format(fmt) << "\n";
  out << "W':\n" << w1.format(fmt) << "\n";
  out << "rank(delta W) = " << numerical_rank(delta) << " <= r = 1\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log template mining and analysis toolkit", "logsift"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  int exit_code = kExitOk;
  std::function<int()> action;

  auto* sig = app.add_subcommand("signatures", "Group lines by masked-token signature (JSONL)");
  add_common(sig, common);
  common.note("samples", sig->add_option("-n,--samples", common.n_samples, "Representatives per group")->capture_default_str());
  sig->callback([&] { action = [&] { return cmd_signatures(common, in, out, err); }; });

  TemplatesArgs targs;
  auto* tpl = app.add_subcommand("templates", "Generate templates per signature group");
  add_common(tpl, common);
  tpl->add_option("--mode", targs.mode, "llm or heuristic")->capture_default_str();
  tpl->add_option("--groups", targs.groups_path, "Read groups from a signatures JSONL file");
  tpl->add_option("--instructions-file", targs.instructions_file, "Replace the prompt instructions");
  tpl->add_option("--directive-file", targs.directive_file, "Replace the reasoning directive");
  tpl->add_option("--url", targs.url, "Endpoint base URL (e.g. http://host:8000/v1)");
  tpl->add_option("--model", targs.model, "Model name sent to the endpoint");
  tpl->add_option("--timeout", targs.timeout_s, "Request timeout in seconds");
  tpl->add_option("--concurrency", targs.concurrency, "Concurrent requests");
  common.note("samples", tpl->add_option("-n,--samples", common.n_samples, "Representatives per group")->capture_default_str());
  tpl->callback([&] { action = [&] { return cmd_templates(common, targs, in, out, err); }; });

  bool include_unmatched = false;
  auto* prs = app.add_subcommand("parse", "Match lines against templates (JSONL events)");
  add_common(prs, common);
  add_templates_opt(prs, common);
  add_rules_opts(prs, common);
  prs->add_flag("--include-unmatched", include_unmatched, "Emit unmatched lines with a null template_id");
  prs->callback([&] { action = [&] { return cmd_parse(common, include_unmatched, in, out, err); }; });

  std::string cov_format = "json";
  auto* cov = app.add_subcommand("coverage", "Share of lines fully matched by the templates");
  add_common(cov, common);
  add_templates_opt(cov, common);
  cov->add_option("--format", cov_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cov->callback([&] { action = [&] { return cmd_coverage(common, cov_format, in, out, err); }; });

  PerturbArgs pargs;
  auto* per = app.add_subcommand("perturb", "Robustness of an extractor under message perturbations (CSV)");
  add_common(per, common);
  add_templates_opt(per, common);
  per->add_option("--patterns", pargs.patterns, "Distinct gold patterns to sample")->capture_default_str();
  per->add_option("--per-pattern", pargs.per_pattern, "Instances per pattern")->capture_default_str();
  per->add_option("--kinds", pargs.kinds, "Subset of perturbation ids")->delimiter(',');
  per->add_option("--extractor", pargs.extractor, "heuristic or llm")->capture_default_str();
  per->add_option("--failures", pargs.failures, "Write failure examples as JSONL");
  per->add_flag("--message-level", pargs.message_level, "Compute Lev./WER between original and perturbed messages");
  per->callback([&] { action = [&] { return cmd_perturb(common, pargs, in, out, err); }; });

  MineArgs margs;
  auto* mine = app.add_subcommand("mine", "Analytics over parsed events");
  mine->add_option("what", margs.what, "fingerprint|severity|temporal|jobs|cluster|kde")
      ->required()
      ->check(CLI::IsMember({"fingerprint", "severity", "temporal", "jobs", "cluster", "kde"}));
  add_common(mine, common);
  add_templates_opt(mine, common);
  add_rules_opts(mine, common);
  mine->add_option("--format", margs.format, "tsv|csv|jsonl (fingerprint)")->check(CLI::IsMember({"tsv", "csv", "jsonl"}));
  common.note("window", mine->add_option("--window", common.window_s, "Window length in seconds")->capture_default_str());
  mine->add_option("--by", margs.by, "category or severity (temporal)")->capture_default_str();
  mine->add_option("--cdf-out", margs.cdf_out, "Also write per-category CDF CSV (temporal)");
  mine->add_option("--jobs", margs.jobs, "Job CSV (jobs, cluster)");
  mine->add_option("--matrix", margs.matrix, "Category x domain CSV (cluster)");
  mine->add_option("--pairs", margs.pairs, "sender,receiver[,weight] CSV (kde)");
  mine->add_option("--sender-var", margs.sender_var, "Placeholder holding the sender id (kde)");
  mine->add_option("--receiver-var", margs.receiver_var, "Placeholder holding the receiver id (kde)");
  mine->add_option("--nx", margs.nx, "Grid columns (kde)")->check(CLI::Range(2, 4096));
  mine->add_option("--ny", margs.ny, "Grid rows (kde)")->check(CLI::Range(2, 4096));
  mine->add_option("--hx", margs.hx, "Sender bandwidth (kde, default Silverman)");
  mine->add_option("--hy", margs.hy, "Receiver bandwidth (kde, default Silverman)");
  mine->callback([&] { action = [&] { return cmd_mine(common, margs, in, out, err); }; });

  ReportArgs rargs;
  auto* rep = app.add_subcommand("report", "CSV and SVG bundle into --out DIR");
  add_common(rep, common);
  add_templates_opt(rep, common);
  add_rules_opts(rep, common);
  common.note("window", rep->add_option("--window", common.window_s, "Window length in seconds")->capture_default_str());
  rep->add_option("--jobs", rargs.jobs, "Job CSV for the category x domain clustering");
  rep->add_option("--pairs", rargs.pairs, "sender,receiver[,weight] CSV for the density plot");
  rep->add_option("--sender-var", rargs.sender_var, "Placeholder holding the sender id");
  rep->add_option("--receiver-var", rargs.receiver_var, "Placeholder holding the receiver id");
  rep->callback([&] { action = [&] { return cmd_report(common, rargs, in, err); }; });

  CorpusOptions gopts;
  auto* gen = app.add_subcommand("gen", "Synthetic corpus with gold templates");
  add_common(gen, common, false);
  gen->add_option("--templates", gopts.templates, "Number of templates")->capture_default_str();
  gen->add_option("--lines", gopts.lines, "Number of lines")->capture_default_str();
  gen->add_option("--zipf", gopts.zipf_exponent, "Zipf exponent")->capture_default_str();
  gen->add_option("--hosts", gopts.hosts, "Number of hosts")->capture_default_str();
  gen->callback([&] { action = [&] { return cmd_gen(common, gopts, err); }; });

  auto* peft = app.add_subcommand("peft-demo", "Worked low-rank update example");
  peft->callback([&] { action = [&] { return cmd_peft_demo(out); }; });

  std::vector<std::string> argv_store{"logsift"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    exit_code = action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_endpoint_error() ? kExitEndpoint : kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return exit_code;
}

}  // namespace logsift
