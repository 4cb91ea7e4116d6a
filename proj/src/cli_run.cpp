#include "sspanel/cli_run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sspanel/dgp.hpp"
#include "sspanel/errors.hpp"
#include "sspanel/geometry.hpp"
#include "sspanel/ident.hpp"
#include "sspanel/links.hpp"
#include "sspanel/maxscore.hpp"
#include "sspanel/mc_study.hpp"
#include "sspanel/records.hpp"
#include "sspanel/sstest.hpp"
#include "sspanel/version.hpp"

namespace sspanel::cli {
namespace {

// ---------------------------------------------------------------------------
// Configuration file: "[section]" headers over "key = value" lines.
// ---------------------------------------------------------------------------

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

const std::set<std::string>& known_sections() {
  static const std::set<std::string> s{"run",    "design", "simulate",
                                       "maxscore", "sstest", "idscan",
                                       "geom",   "mc_study"};
  return s;
}

std::string trim(std::string_view sv) {
  constexpr const char* kWs = " \t\r";
  const auto b = sv.find_first_not_of(kWs);
  if (b == std::string_view::npos) return {};
  const auto e = sv.find_last_not_of(kWs);
  return std::string(sv.substr(b, e - b + 1));
}

[[noreturn]] void config_line_error(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::map<std::string, Entry> parse_config_text(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        config_line_error(line_no, "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (known_sections().count(section) == 0) {
        config_line_error(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_line_error(line_no, "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_line_error(line_no, "empty key");
    if (section.empty()) {
      config_line_error(line_no, "keys must appear inside a [section]");
    }
    const std::string dotted = section + "." + key;
    const auto [it, inserted] = entries.emplace(dotted, Entry{value, line_no});
    if (!inserted) {
      config_line_error(line_no, "duplicate key " + dotted +
                                     " (first set on line " +
                                     std::to_string(it->second.line) + ")");
    }
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Typed value parsing with key-labelled diagnostics.
// ---------------------------------------------------------------------------

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* last = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), last, v);
  if (ec != std::errc{} || p != last || t.empty()) {
    throw ConfigError("value of " + key + " is not a number: '" + t + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const char* last = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), last, v);
  if (ec != std::errc{} || p != last || t.empty()) {
    throw ConfigError("value of " + key + " is not an integer: '" + t + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const char* last = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), last, v);
  if (ec != std::errc{} || p != last || t.empty()) {
    throw ConfigError("value of " + key +
                      " is not a nonnegative integer: '" + t + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true") return true;
  if (t == "0" || t == "false") return false;
  throw ConfigError("value of " + key + " is not a boolean (true/false/1/0): '" +
                    t + "'");
}

std::vector<double> parse_vec(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::string piece;
  std::istringstream is(text);
  while (std::getline(is, piece, ',')) {
    out.push_back(parse_real(key, piece));
  }
  if (out.empty()) {
    throw ConfigError("value of " + key + " must list at least one number");
  }
  return out;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += records::fmt_real(v[i]);
  }
  return out;
}

std::string join_reals(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += records::fmt_real(v[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Merged settings: command-line overrides > config file > defaults. Every
// value actually read is echoed, canonically rendered, into the effective
// map that the run manifest reproduces.
// ---------------------------------------------------------------------------

class Settings {
 public:
  explicit Settings(std::map<std::string, Entry> cfg) : cfg_(std::move(cfg)) {}

  void set_override(const std::string& key, const std::string& value) {
    overrides_[key] = value;
  }

  std::optional<std::string> maybe_str(const std::string& key) {
    const auto v = raw(key);
    if (v) effective_[key] = *v;
    return v;
  }

  std::string get_str(const std::string& key, const std::string& fallback) {
    const std::string v = raw(key).value_or(fallback);
    effective_[key] = v;
    return v;
  }

  std::optional<double> maybe_real(const std::string& key) {
    const auto v = raw(key);
    if (!v) return std::nullopt;
    const double parsed = parse_real(key, *v);
    effective_[key] = records::fmt_real(parsed);
    return parsed;
  }

  double get_real(const std::string& key, double fallback) {
    const auto v = maybe_real(key);
    if (v) return *v;
    effective_[key] = records::fmt_real(fallback);
    return fallback;
  }

  std::optional<long long> maybe_int(const std::string& key) {
    const auto v = raw(key);
    if (!v) return std::nullopt;
    const long long parsed = parse_int(key, *v);
    effective_[key] = records::fmt_int(parsed);
    return parsed;
  }

  long long get_int(const std::string& key, long long fallback) {
    const auto v = maybe_int(key);
    if (v) return *v;
    effective_[key] = records::fmt_int(fallback);
    return fallback;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    const auto v = raw(key);
    const std::uint64_t parsed = v ? parse_u64(key, *v) : fallback;
    effective_[key] = std::to_string(parsed);
    return parsed;
  }

  bool get_bool(const std::string& key, bool fallback) {
    const auto v = raw(key);
    const bool parsed = v ? parse_bool(key, *v) : fallback;
    effective_[key] = parsed ? "1" : "0";
    return parsed;
  }

  std::optional<std::vector<double>> maybe_vec(const std::string& key) {
    const auto v = raw(key);
    if (!v) return std::nullopt;
    auto parsed = parse_vec(key, *v);
    effective_[key] = join_reals(parsed);
    return parsed;
  }

  /// Rejects config keys under the given prefixes that no getter consumed
  /// (typos, or settings the chosen command cannot honor).
  void require_consumed(const std::vector<std::string>& strict_prefixes) const {
    for (const auto& [key, entry] : cfg_) {
      if (entry.used) continue;
      for (const auto& prefix : strict_prefixes) {
        if (key.rfind(prefix, 0) == 0) {
          config_line_error(entry.line,
                            "key " + key + " is not used by this command");
        }
      }
    }
  }

  const std::map<std::string, std::string>& effective() const {
    return effective_;
  }

 private:
  std::optional<std::string> raw(const std::string& key) {
    const auto c = cfg_.find(key);
    if (c != cfg_.end()) c->second.used = true;
    const auto o = overrides_.find(key);
    if (o != overrides_.end()) return o->second;
    if (c != cfg_.end()) return c->second.value;
    return std::nullopt;
  }

  std::map<std::string, Entry> cfg_;
  std::map<std::string, std::string> overrides_;
  std::map<std::string, std::string> effective_;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Builders shared by the subcommands.
// ---------------------------------------------------------------------------

links::Link make_link(const std::string& name, double periodic_a) {
  if (name == "logistic") return links::Link::logistic();
  if (name == "periodic_gdot") return links::Link::periodic_gdot(periodic_a);
  if (name == "gaussian_tail") return links::Link::gaussian_tail();
  throw ConfigError("unknown link '" + name +
                    "' (expected logistic, periodic_gdot, or gaussian_tail)");
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[i];
  }
  return out;
}

dgp::PanelDesign build_design(Settings& s) {
  const std::string kind = s.get_str("design.kind", "");
  if (kind.empty()) {
    throw ConfigError(
        "design.kind is required (uniform_example or chamberlain)");
  }

  const std::string link_name = s.get_str("design.link", "logistic");
  double link_a = 2.0;
  if (link_name == "periodic_gdot") {
    link_a = s.get_real("design.link_a", 2.0);
  }
  const links::Link link = make_link(link_name, link_a);

  const std::string fe_name = s.get_str("design.fe", "normal");
  dgp::FixedEffectLaw fe;
  if (fe_name == "normal") {
    fe = dgp::FixedEffectLaw::normal(s.get_real("design.fe_mean", 0.0),
                                     s.get_real("design.fe_sd", 1.0));
  } else if (fe_name == "location_shift") {
    const auto shift = s.maybe_vec("design.fe_shift");
    if (!shift) {
      throw ConfigError("design.fe_shift is required for fe = location_shift");
    }
    fe = dgp::FixedEffectLaw::location_shift(to_eigen(*shift),
                                             s.get_real("design.fe_sd", 1.0));
  } else {
    throw ConfigError("unknown fixed-effect law '" + fe_name +
                      "' (expected normal or location_shift)");
  }

  if (kind == "uniform_example") {
    const auto beta = s.maybe_vec("design.beta");
    if (beta) {
      if (beta->size() != 2) {
        throw ConfigError(
            "design.beta for uniform_example needs exactly 2 components");
      }
      dgp::PanelDesign design = dgp::uniform_example_design(0.0, link, fe);
      design.beta = to_eigen(*beta);
      return design;
    }
    const auto beta2 = s.maybe_real("design.beta2");
    if (!beta2) {
      throw ConfigError(
          "uniform_example needs design.beta2 (or a full design.beta)");
    }
    return dgp::uniform_example_design(*beta2, link, fe);
  }
  if (kind == "chamberlain") {
    const auto beta = s.maybe_vec("design.beta");
    if (!beta) throw ConfigError("chamberlain needs design.beta");
    const dgp::ZLaw z{s.get_real("design.z_lo", -1.0),
                      s.get_real("design.z_hi", 1.0)};
    return dgp::chamberlain_design(to_eigen(*beta), z, link, fe);
  }
  throw ConfigError("unknown design.kind '" + kind +
                    "' (expected uniform_example or chamberlain)");
}

long long require_int(Settings& s, const std::string& key) {
  const auto v = s.maybe_int(key);
  if (!v) throw ConfigError(key + " is required");
  return *v;
}

double require_real(Settings& s, const std::string& key) {
  const auto v = s.maybe_real(key);
  if (!v) throw ConfigError(key + " is required");
  return *v;
}

maxscore::MaxOptions optimizer_options(Settings& s, const std::string& section,
                                       std::uint64_t seed) {
  maxscore::MaxOptions opts;
  const std::string method = s.get_str(section + ".method", "exact");
  if (method == "exact") {
    opts.method = maxscore::Method::kExactArrangement;
    opts.k3_row_cap = s.get_int(section + ".k3_row_cap", opts.k3_row_cap);
  } else if (method == "random" || method == "grid") {
    opts.method = method == "random" ? maxscore::Method::kRandomSearch
                                     : maxscore::Method::kGridSearch;
    opts.iterations = s.get_int(section + ".iterations", opts.iterations);
  } else {
    throw ConfigError("unknown optimizer method '" + method +
                      "' (expected exact, random, or grid)");
  }
  opts.seed = seed;
  return opts;
}

sstest::BoundaryRule parse_boundary(const std::string& name) {
  if (name == "inclusive") return sstest::BoundaryRule::kInclusive;
  if (name == "strict") return sstest::BoundaryRule::kStrictBootstrap;
  throw ConfigError("unknown boundary rule '" + name +
                    "' (expected inclusive or strict)");
}

/// Sample for data-consuming commands: an explicit CSV file wins;
/// otherwise the design is simulated at the requested size.
dgp::PanelSample obtain_sample(Settings& s, const std::string& section,
                               std::uint64_t seed, bool& used_design) {
  const auto data = s.maybe_str(section + ".data");
  if (data) return dgp::from_csv(read_file(*data));
  used_design = true;
  const dgp::PanelDesign design = build_design(s);
  const auto n = s.maybe_int(section + ".n");
  if (!n) {
    throw ConfigError(section + ".n is required when no " + section +
                      ".data file is given");
  }
  return dgp::simulate(design, *n, seed);
}

// ---------------------------------------------------------------------------
// Output rendering.
// ---------------------------------------------------------------------------

std::string render_report(const records::Record& rec,
                          const std::string& format) {
  return format == "csv" ? records::to_csv_row(rec)
                         : records::to_record_text(rec);
}

std::string render_record_table(const std::vector<records::Record>& rows) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += "\n";
    out += records::to_record_text(rows[i]);
  }
  return out;
}

struct RunContext {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format;
  const std::atomic<bool>* stop = nullptr;
};

// ---------------------------------------------------------------------------
// Subcommand implementations. Each returns the primary output text.
// ---------------------------------------------------------------------------

std::string run_simulate(Settings& s, const RunContext& ctx,
                         bool& used_design) {
  used_design = true;
  const dgp::PanelDesign design = build_design(s);
  const long long n = require_int(s, "simulate.n");
  const dgp::PanelSample sample = dgp::simulate(design, n, ctx.seed);
  if (ctx.format == "csv") return dgp::to_csv(sample);
  std::vector<records::Record> rows;
  rows.reserve(static_cast<std::size_t>(sample.n()));
  for (int i = 0; i < sample.n(); ++i) {
    records::Record row;
    for (int j = 0; j < sample.k(); ++j) {
      row.emplace_back("w_" + std::to_string(j + 1),
                       records::fmt_real(sample.w(i, j)));
    }
    row.emplace_back("y0", records::fmt_int(sample.y0[i]));
    row.emplace_back("y1", records::fmt_int(sample.y1[i]));
    rows.push_back(std::move(row));
  }
  return render_record_table(rows);
}

std::string run_maxscore(Settings& s, const RunContext& ctx,
                         bool& used_design) {
  const dgp::PanelSample sample =
      obtain_sample(s, "maxscore", ctx.seed, used_design);
  const maxscore::MaxOptions opts =
      optimizer_options(s, "maxscore", ctx.seed);
  const std::string direction = s.get_str("maxscore.direction", "both");
  if (direction != "max" && direction != "min" && direction != "both") {
    throw ConfigError("maxscore.direction must be max, min, or both");
  }
  records::Record rec;
  rec.emplace_back("n", records::fmt_int(sample.n()));
  rec.emplace_back("k", records::fmt_int(sample.k()));
  if (direction != "min") {
    const maxscore::MaxScoreResult res =
        maxscore::maximize(sample.w, sample.d, opts);
    rec.emplace_back("sup_value", records::fmt_real(res.value));
    rec.emplace_back("sup_num", records::fmt_int(res.num));
    rec.emplace_back("sup_argq", join_reals(res.argq));
    rec.emplace_back("sup_cells_visited", records::fmt_int(res.cells_visited));
  }
  if (direction != "max") {
    const maxscore::MaxScoreResult res =
        maxscore::minimize(sample.w, sample.d, opts);
    rec.emplace_back("inf_value", records::fmt_real(res.value));
    rec.emplace_back("inf_num", records::fmt_int(res.num));
    rec.emplace_back("inf_argq", join_reals(res.argq));
    rec.emplace_back("inf_cells_visited", records::fmt_int(res.cells_visited));
  }
  return render_report(rec, ctx.format);
}

std::string run_sstest(Settings& s, const RunContext& ctx, bool& used_design) {
  const dgp::PanelSample sample =
      obtain_sample(s, "sstest", ctx.seed, used_design);
  sstest::TestConfig cfg;
  cfg.alpha = s.get_real("sstest.alpha", cfg.alpha);
  cfg.b_reps = static_cast<int>(s.get_int("sstest.b_reps", cfg.b_reps));
  cfg.boundary = parse_boundary(s.get_str("sstest.boundary", "inclusive"));
  cfg.optimizer = optimizer_options(s, "sstest", ctx.seed);
  cfg.seed = ctx.seed;
  const std::string direction = s.get_str("sstest.direction", "both");

  records::Record rec;
  rec.emplace_back("n", records::fmt_int(sample.n()));
  rec.emplace_back("alpha", records::fmt_real(cfg.alpha));
  rec.emplace_back("b_reps", records::fmt_int(cfg.b_reps));
  rec.emplace_back("direction", direction);
  if (direction == "upper") {
    const sstest::TestReport rep = sstest::test_upper(sample, cfg);
    rec.emplace_back("t_upper", records::fmt_real(rep.t_n));
    rec.emplace_back("c_upper", records::fmt_real(rep.c_crit));
    rec.emplace_back("reject_upper", rep.reject ? "1" : "0");
  } else if (direction == "lower") {
    const sstest::TestReport rep = sstest::test_lower(sample, cfg);
    rec.emplace_back("t_lower", records::fmt_real(rep.t_n));
    rec.emplace_back("c_lower", records::fmt_real(rep.c_crit));
    rec.emplace_back("reject_lower", rep.reject ? "1" : "0");
  } else if (direction == "both") {
    const sstest::CheckResult check = sstest::sign_saturation_check(sample, cfg);
    rec.emplace_back("t_upper", records::fmt_real(check.upper.t_n));
    rec.emplace_back("c_upper", records::fmt_real(check.upper.c_crit));
    rec.emplace_back("reject_upper", check.upper.reject ? "1" : "0");
    rec.emplace_back("t_lower", records::fmt_real(check.lower.t_n));
    rec.emplace_back("c_lower", records::fmt_real(check.lower.c_crit));
    rec.emplace_back("reject_lower", check.lower.reject ? "1" : "0");
    rec.emplace_back("verdict",
                     check.verdict == sstest::CheckVerdict::kSaturationSupported
                         ? "SaturationSupported"
                         : "Inconclusive");
  } else {
    throw ConfigError("sstest.direction must be upper, lower, or both");
  }
  return render_report(rec, ctx.format);
}

std::string run_idscan(Settings& s, const RunContext& ctx, bool& used_design) {
  used_design = true;
  const dgp::PanelDesign design = build_design(s);

  const auto b_list = s.maybe_str("idscan.b_list");
  const auto b2_range = s.maybe_str("idscan.b2_range");
  if (static_cast<bool>(b_list) == static_cast<bool>(b2_range)) {
    throw ConfigError(
        "exactly one of idscan.b_list and idscan.b2_range is required");
  }
  std::vector<Eigen::VectorXd> grid;
  if (b_list) {
    std::istringstream is(*b_list);
    std::string piece;
    while (std::getline(is, piece, ';')) {
      if (trim(piece).empty()) continue;
      grid.push_back(to_eigen(parse_vec("idscan.b_list", piece)));
    }
    if (grid.empty()) {
      throw ConfigError("idscan.b_list lists no directions");
    }
  } else {
    const std::vector<double> spec = parse_vec("idscan.b2_range", *b2_range);
    if (spec.size() != 3) {
      throw ConfigError("idscan.b2_range must be lo,hi,count");
    }
    const double lo = spec[0];
    const double hi = spec[1];
    const long long count = parse_int("idscan.b2_range count",
                                      records::fmt_real(spec[2]));
    if (count < 1) throw ConfigError("idscan.b2_range count must be >= 1");
    for (long long j = 0; j < count; ++j) {
      const double b2 =
          count == 1 ? lo
                     : lo + (hi - lo) * static_cast<double>(j) /
                               static_cast<double>(count - 1);
      Eigen::VectorXd b(2);
      b << 1.0, b2;
      grid.push_back(b);
    }
  }

  ident::IdOptions opts;
  opts.r_tol = s.get_real("idscan.r_tol", opts.r_tol);
  opts.mc_draws = s.get_int("idscan.mc_draws", opts.mc_draws);
  opts.force_monte_carlo =
      s.get_bool("idscan.force_monte_carlo", opts.force_monte_carlo);
  opts.seed = ctx.seed;

  const std::vector<ident::IdReport> table = ident::id_scan(design, grid, opts);
  if (ctx.format == "csv") return ident::id_scan_csv(table);
  std::vector<records::Record> rows;
  rows.reserve(table.size());
  for (const ident::IdReport& rep : table) {
    records::Record row;
    for (Eigen::Index j = 0; j < rep.b.size(); ++j) {
      row.emplace_back("b_" + std::to_string(j + 1),
                       records::fmt_real(rep.b[j]));
    }
    row.emplace_back("r_value", records::fmt_real(rep.r_value));
    row.emplace_back("se", records::fmt_real(rep.r_se));
    row.emplace_back("mass_pos", records::fmt_real(rep.mass_pos));
    row.emplace_back("mass_neg", records::fmt_real(rep.mass_neg));
    row.emplace_back("verdict", ident::verdict_name(rep.verdict));
    row.emplace_back("method", ident::method_name(rep.method));
    rows.push_back(std::move(row));
  }
  return render_record_table(rows);
}

const char* verdict_text(geometry::HullVerdict v) {
  switch (v) {
    case geometry::HullVerdict::kDisjoint:
      return "Disjoint";
    case geometry::HullVerdict::kIntersecting:
      return "Intersecting";
    case geometry::HullVerdict::kUnknown:
      return "Unknown";
  }
  return "Unknown";
}

void append_certificate(records::Record& rec,
                        const geometry::HullCertificate& cert) {
  rec.emplace_back("verdict", verdict_text(cert.verdict));
  rec.emplace_back("residual", records::fmt_real(cert.residual));
  if (cert.separator) {
    rec.emplace_back("separator", join_reals(Eigen::VectorXd(*cert.separator)));
  }
  if (cert.weights_s) rec.emplace_back("weights_s", join_reals(*cert.weights_s));
  if (cert.weights_t) rec.emplace_back("weights_t", join_reals(*cert.weights_t));
  if (!cert.note.empty()) rec.emplace_back("note", cert.note);
}

std::string run_geom(Settings& s, const RunContext& ctx) {
  const std::string link_name = s.get_str("geom.link", "");
  if (link_name.empty()) throw ConfigError("geom.link is required");
  double link_a = 2.0;
  if (link_name == "periodic_gdot") link_a = s.get_real("geom.a", 2.0);
  const links::Link link = make_link(link_name, link_a);
  const double sv = require_real(s, "geom.s");
  const double tv = require_real(s, "geom.t");
  const std::string op = s.get_str("geom.op", "status");

  records::Record rec;
  rec.emplace_back("link", link.label());
  rec.emplace_back("s", records::fmt_real(sv));
  rec.emplace_back("t", records::fmt_real(tv));
  rec.emplace_back("op", op);
  const links::PeriodClass pc = links::classify_period(link);
  rec.emplace_back("period_kind",
                   pc.kind == links::PeriodKind::kConstant     ? "constant"
                   : pc.kind == links::PeriodKind::kPeriodic   ? "periodic"
                                                               : "non_periodic");
  if (pc.kind == links::PeriodKind::kPeriodic) {
    rec.emplace_back("period", records::fmt_real(pc.period));
    rec.emplace_back("period_increment", records::fmt_real(pc.increment));
  }

  const auto read_window = [&s]() -> std::optional<geometry::Window> {
    const auto lo = s.maybe_real("geom.window_lo");
    const auto hi = s.maybe_real("geom.window_hi");
    if (static_cast<bool>(lo) != static_cast<bool>(hi)) {
      throw ConfigError(
          "geom.window_lo and geom.window_hi must be given together");
    }
    if (!lo) return std::nullopt;
    return geometry::Window{*lo, *hi};
  };

  if (op == "epsilon") {
    const std::optional<double> eps = geometry::find_epsilon(link, sv, tv);
    rec.emplace_back("found", eps ? "1" : "0");
    if (eps) rec.emplace_back("epsilon", records::fmt_real(*eps));
  } else if (op == "intersect") {
    geometry::AlphaGrid grid;
    grid.lo = s.get_real("geom.grid_lo", grid.lo);
    grid.hi = s.get_real("geom.grid_hi", grid.hi);
    grid.n = static_cast<int>(s.get_int("geom.grid_n", grid.n));
    append_certificate(rec, geometry::certify_intersect(link, sv, tv, grid));
  } else if (op == "disjoint") {
    geometry::DisjointOptions opts;
    opts.window = read_window();
    opts.margin = s.get_real("geom.margin", opts.margin);
    const geometry::GapSummary gap =
        geometry::gap_summary(link, sv, tv, opts.window);
    rec.emplace_back("gap_s_inf", records::fmt_real(gap.s_inf));
    rec.emplace_back("gap_t_sup", records::fmt_real(gap.t_sup));
    rec.emplace_back("gap_exact", gap.exact ? "1" : "0");
    append_certificate(rec, geometry::certify_disjoint(link, sv, tv, opts));
  } else if (op == "status") {
    geometry::HullOptions opts;
    opts.window = read_window();
    opts.margin = s.get_real("geom.margin", opts.margin);
    opts.grid.lo = s.get_real("geom.grid_lo", opts.grid.lo);
    opts.grid.hi = s.get_real("geom.grid_hi", opts.grid.hi);
    opts.grid.n = static_cast<int>(s.get_int("geom.grid_n", opts.grid.n));
    append_certificate(rec, geometry::hull_status(link, sv, tv, opts));
  } else {
    throw ConfigError(
        "geom.op must be status, disjoint, intersect, or epsilon");
  }
  return render_report(rec, ctx.format);
}

std::string run_mc_study(Settings& s, const RunContext& ctx,
                         bool& used_design) {
  used_design = true;
  mc::StudyConfig cfg;
  cfg.design = build_design(s);
  cfg.n = require_int(s, "mc_study.n");
  cfg.trials = static_cast<int>(require_int(s, "mc_study.trials"));
  cfg.test.alpha = s.get_real("mc_study.alpha", cfg.test.alpha);
  cfg.test.b_reps = static_cast<int>(s.get_int("mc_study.b_reps", cfg.test.b_reps));
  cfg.test.boundary = parse_boundary(s.get_str("mc_study.boundary", "inclusive"));
  cfg.test.optimizer = optimizer_options(s, "mc_study", ctx.seed);
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  const mc::StudyResult res = mc::run_study(cfg, ctx.stop);
  if (ctx.format == "csv") return mc::summary_csv(res.summary);
  const mc::StudySummary& sum = res.summary;
  records::Record rec;
  rec.emplace_back("trials_requested", records::fmt_int(sum.trials_requested));
  rec.emplace_back("trials_done", records::fmt_int(sum.trials_done));
  rec.emplace_back("n", records::fmt_int(sum.n));
  rec.emplace_back("alpha", records::fmt_real(sum.alpha));
  rec.emplace_back("b_reps", records::fmt_int(sum.b_reps));
  rec.emplace_back("upper_reject_rate", records::fmt_real(sum.upper_reject_rate));
  rec.emplace_back("upper_reject_se", records::fmt_real(sum.upper_reject_se));
  rec.emplace_back("lower_reject_rate", records::fmt_real(sum.lower_reject_rate));
  rec.emplace_back("lower_reject_se", records::fmt_real(sum.lower_reject_se));
  rec.emplace_back("saturation_rate", records::fmt_real(sum.saturation_rate));
  rec.emplace_back("saturation_se", records::fmt_real(sum.saturation_se));
  rec.emplace_back("mean_rho_at_minus_beta",
                   records::fmt_real(sum.mean_rho_at_minus_beta));
  rec.emplace_back("scaled_var_rho_at_minus_beta",
                   records::fmt_real(sum.scaled_var_rho_at_minus_beta));
  rec.emplace_back("truncated", sum.truncated ? "1" : "0");
  return records::to_record_text(rec);
}

std::string manifest_text(const std::string& command, const Settings& s) {
  records::Record rec;
  rec.emplace_back("version", kVersion);
  rec.emplace_back("command", command);
  for (const auto& [key, value] : s.effective()) {
    if (key == "run.threads") continue;
    rec.emplace_back(key, value);
  }
  return records::to_record_text(rec);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err, const std::atomic<bool>* stop) {
  CLI::App app{"sign-saturation panel binary-choice toolkit"};
  app.fallthrough(true);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path;
  CLI::Option* opt_config =
      app.add_option("--config", config_path,
                     "configuration file ([section] headers, key = value)");
  std::uint64_t seed_flag = 0;
  CLI::Option* opt_seed =
      app.add_option("--seed", seed_flag, "master random seed");
  int threads_flag = 1;
  CLI::Option* opt_threads =
      app.add_option("--threads", threads_flag,
                     "worker thread cap (never changes results)");
  std::string format_flag;
  CLI::Option* opt_format = app.add_option(
      "--format", format_flag, "output format: csv or record");
  std::string out_flag;
  CLI::Option* opt_out = app.add_option(
      "--out", out_flag,
      "write output to this file plus a <file>.manifest echo of the run");

  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "draw a panel sample from a design");
  long long n_simulate = 0;
  CLI::Option* opt_sim_n =
      cmd_simulate->add_option("--n", n_simulate, "sample size");

  CLI::App* cmd_maxscore = app.add_subcommand(
      "maxscore", "sup/inf of the sample score over directions");
  std::string ms_data, ms_direction, ms_method;
  long long ms_n = 0;
  CLI::Option* opt_ms_data =
      cmd_maxscore->add_option("--data", ms_data, "input sample CSV");
  CLI::Option* opt_ms_n =
      cmd_maxscore->add_option("--n", ms_n, "simulated sample size");
  CLI::Option* opt_ms_direction = cmd_maxscore->add_option(
      "--direction", ms_direction, "max, min, or both");
  CLI::Option* opt_ms_method = cmd_maxscore->add_option(
      "--method", ms_method, "exact, random, or grid");

  CLI::App* cmd_sstest = app.add_subcommand(
      "sstest", "bootstrap sign-saturation test on a sample");
  std::string st_data, st_direction, st_boundary, st_method;
  long long st_n = 0;
  int st_breps = 0;
  double st_alpha = 0.0;
  CLI::Option* opt_st_data =
      cmd_sstest->add_option("--data", st_data, "input sample CSV");
  CLI::Option* opt_st_n =
      cmd_sstest->add_option("--n", st_n, "simulated sample size");
  CLI::Option* opt_st_direction = cmd_sstest->add_option(
      "--direction", st_direction, "upper, lower, or both");
  CLI::Option* opt_st_alpha =
      cmd_sstest->add_option("--alpha", st_alpha, "test level");
  CLI::Option* opt_st_breps =
      cmd_sstest->add_option("--b-reps", st_breps, "bootstrap replicates");
  CLI::Option* opt_st_boundary = cmd_sstest->add_option(
      "--boundary", st_boundary, "inclusive or strict");
  CLI::Option* opt_st_method = cmd_sstest->add_option(
      "--method", st_method, "exact, random, or grid");

  CLI::App* cmd_idscan = app.add_subcommand(
      "idscan", "population diagnostics over a direction grid");
  long long is_mc_draws = 0;
  CLI::Option* opt_is_mc_draws = cmd_idscan->add_option(
      "--mc-draws", is_mc_draws, "Monte Carlo draws per direction");
  CLI::Option* opt_is_force_mc = cmd_idscan->add_flag(
      "--force-mc", "evaluate by simulation even when a closed form exists");

  CLI::App* cmd_geom = app.add_subcommand(
      "geom", "hull certificates for a link's moment curve");
  std::string gm_link, gm_op;
  double gm_a = 0.0, gm_s = 0.0, gm_t = 0.0;
  CLI::Option* opt_gm_link =
      cmd_geom->add_option("--link", gm_link,
                           "logistic, periodic_gdot, or gaussian_tail");
  CLI::Option* opt_gm_a =
      cmd_geom->add_option("--a", gm_a, "periodic_gdot slope parameter");
  CLI::Option* opt_gm_s = cmd_geom->add_option("--s", gm_s, "larger shift");
  CLI::Option* opt_gm_t = cmd_geom->add_option("--t", gm_t, "smaller shift");
  CLI::Option* opt_gm_op = cmd_geom->add_option(
      "--op", gm_op, "status, disjoint, intersect, or epsilon");

  CLI::App* cmd_mc_study = app.add_subcommand(
      "mc-study", "repeated simulate-and-test study with summary rates");
  long long mcs_trials = 0, mcs_n = 0;
  int mcs_breps = 0;
  double mcs_alpha = 0.0;
  CLI::Option* opt_mcs_trials =
      cmd_mc_study->add_option("--trials", mcs_trials, "number of trials");
  CLI::Option* opt_mcs_n =
      cmd_mc_study->add_option("--n", mcs_n, "rows per simulated sample");
  CLI::Option* opt_mcs_alpha =
      cmd_mc_study->add_option("--alpha", mcs_alpha, "test level");
  CLI::Option* opt_mcs_breps = cmd_mc_study->add_option(
      "--b-reps", mcs_breps, "bootstrap replicates per trial");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("sspanel");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_storage.size());
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    std::map<std::string, Entry> cfg;
    if (opt_config->count() > 0) {
      cfg = parse_config_text(read_file(config_path));
    }
    Settings s(std::move(cfg));

    if (opt_seed->count() > 0) {
      s.set_override("run.seed", std::to_string(seed_flag));
    }
    if (opt_threads->count() > 0) {
      s.set_override("run.threads", records::fmt_int(threads_flag));
    }
    if (opt_format->count() > 0) s.set_override("run.format", format_flag);

    if (opt_sim_n->count() > 0) {
      s.set_override("simulate.n", records::fmt_int(n_simulate));
    }
    if (opt_ms_data->count() > 0) s.set_override("maxscore.data", ms_data);
    if (opt_ms_n->count() > 0) {
      s.set_override("maxscore.n", records::fmt_int(ms_n));
    }
    if (opt_ms_direction->count() > 0) {
      s.set_override("maxscore.direction", ms_direction);
    }
    if (opt_ms_method->count() > 0) s.set_override("maxscore.method", ms_method);
    if (opt_st_data->count() > 0) s.set_override("sstest.data", st_data);
    if (opt_st_n->count() > 0) s.set_override("sstest.n", records::fmt_int(st_n));
    if (opt_st_direction->count() > 0) {
      s.set_override("sstest.direction", st_direction);
    }
    if (opt_st_alpha->count() > 0) {
      s.set_override("sstest.alpha", records::fmt_real(st_alpha));
    }
    if (opt_st_breps->count() > 0) {
      s.set_override("sstest.b_reps", records::fmt_int(st_breps));
    }
    if (opt_st_boundary->count() > 0) {
      s.set_override("sstest.boundary", st_boundary);
    }
    if (opt_st_method->count() > 0) s.set_override("sstest.method", st_method);
    if (opt_is_mc_draws->count() > 0) {
      s.set_override("idscan.mc_draws", records::fmt_int(is_mc_draws));
    }
    if (opt_is_force_mc->count() > 0) {
      s.set_override("idscan.force_monte_carlo", "1");
    }
    if (opt_gm_link->count() > 0) s.set_override("geom.link", gm_link);
    if (opt_gm_a->count() > 0) {
      s.set_override("geom.a", records::fmt_real(gm_a));
    }
    if (opt_gm_s->count() > 0) {
      s.set_override("geom.s", records::fmt_real(gm_s));
    }
    if (opt_gm_t->count() > 0) {
      s.set_override("geom.t", records::fmt_real(gm_t));
    }
    if (opt_gm_op->count() > 0) s.set_override("geom.op", gm_op);
    if (opt_mcs_trials->count() > 0) {
      s.set_override("mc_study.trials", records::fmt_int(mcs_trials));
    }
    if (opt_mcs_n->count() > 0) {
      s.set_override("mc_study.n", records::fmt_int(mcs_n));
    }
    if (opt_mcs_alpha->count() > 0) {
      s.set_override("mc_study.alpha", records::fmt_real(mcs_alpha));
    }
    if (opt_mcs_breps->count() > 0) {
      s.set_override("mc_study.b_reps", records::fmt_int(mcs_breps));
    }

    std::string command;
    for (const CLI::App* sub :
         {cmd_simulate, cmd_maxscore, cmd_sstest, cmd_idscan, cmd_geom,
          cmd_mc_study}) {
      if (sub->parsed()) command = sub->get_name();
    }
    const std::string section =
        command == "mc-study" ? std::string("mc_study") : command;

    RunContext ctx;
    ctx.seed = s.get_u64("run.seed", 0);
    ctx.threads = static_cast<int>(s.get_int("run.threads", 1));
    if (ctx.threads < 1) throw ConfigError("run.threads must be >= 1");
    const bool table_command = command == "simulate" || command == "idscan" ||
                               command == "mc-study";
    ctx.format = s.get_str("run.format", table_command ? "csv" : "record");
    if (ctx.format != "csv" && ctx.format != "record") {
      throw ConfigError("run.format must be csv or record");
    }
    ctx.stop = stop;

    bool used_design = false;
    std::string text;
    if (command == "simulate") {
      text = run_simulate(s, ctx, used_design);
    } else if (command == "maxscore") {
      text = run_maxscore(s, ctx, used_design);
    } else if (command == "sstest") {
      text = run_sstest(s, ctx, used_design);
    } else if (command == "idscan") {
      text = run_idscan(s, ctx, used_design);
    } else if (command == "geom") {
      text = run_geom(s, ctx);
    } else if (command == "mc-study") {
      text = run_mc_study(s, ctx, used_design);
    } else {
      throw InternalError("unhandled command: " + command);
    }

    std::vector<std::string> strict{"run.", section + "."};
    if (used_design) strict.emplace_back("design.");
    s.require_consumed(strict);

    if (opt_out->count() > 0) {
      records::write_text_file(out_flag, text);
      records::write_text_file(out_flag + ".manifest",
                               manifest_text(command, s));
    } else {
      out << text;
    }
    return 0;
  } catch (const DegenerateDataError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, const std::atomic<bool>* stop) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc) - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err, stop);
}

}  // namespace sspanel::cli
