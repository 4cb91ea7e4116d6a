#include "sspanel/dgp.hpp"

#include <cstdlib>
#include <sstream>
#include <utility>
#include <vector>

#include "sspanel/errors.hpp"
#include "sspanel/records.hpp"
#include "sspanel/rng.hpp"

namespace sspanel::dgp {

namespace {

// The substream tag space reserves 16 slots for regressor components.
constexpr int kMaxRegressors = 16;

void validate(const PanelDesign& design, long long n) {
  if (n < 1) throw ConfigError("simulate: sample size must be at least 1");
  if (design.k < 1) throw ConfigError("simulate: regressor dimension must be positive");
  if (design.k > kMaxRegressors) {
    std::ostringstream os;
    os << "simulate: at most " << kMaxRegressors
       << " regressor components are supported (got " << design.k << ")";
    throw CapacityError(os.str());
  }
  if (design.beta.size() != design.k) {
    throw ConfigError("simulate: beta length must equal the regressor dimension");
  }
  if (design.regressors == RegressorKind::kUniformExample && design.k != 2) {
    throw ConfigError("simulate: the uniform example design has exactly 2 regressors");
  }
  if (design.regressors == RegressorKind::kChamberlain &&
      !(design.z_law.hi > design.z_law.lo)) {
    throw ConfigError("simulate: the bounded regressor law needs lo < hi");
  }
  switch (design.fe.kind) {
    case FixedEffectKind::kNormal:
      break;
    case FixedEffectKind::kLocationShift:
      if (design.fe.shift.size() != design.k) {
        throw ConfigError(
            "simulate: the location-shift coefficient length must equal the "
            "regressor dimension");
      }
      break;
    case FixedEffectKind::kCustom:
      if (!design.fe.custom) {
        throw ConfigError("simulate: custom fixed-effect law has no function");
      }
      break;
  }
  if (!(design.fe.sd >= 0.0)) {
    throw ConfigError("simulate: fixed-effect noise scale must be nonnegative");
  }
}

}  // namespace

FixedEffectLaw FixedEffectLaw::normal(double mean, double sd) {
  FixedEffectLaw law;
  law.kind = FixedEffectKind::kNormal;
  law.mean = mean;
  law.sd = sd;
  return law;
}

FixedEffectLaw FixedEffectLaw::location_shift(Eigen::VectorXd shift,
                                              double sd) {
  FixedEffectLaw law;
  law.kind = FixedEffectKind::kLocationShift;
  law.shift = std::move(shift);
  law.sd = sd;
  return law;
}

FixedEffectLaw FixedEffectLaw::custom_law(
    std::function<double(const Eigen::VectorXd&, double)> fn) {
  FixedEffectLaw law;
  law.kind = FixedEffectKind::kCustom;
  law.custom = std::move(fn);
  return law;
}

PanelDesign uniform_example_design(double beta2, links::Link link,
                                   FixedEffectLaw fe) {
  PanelDesign d;
  d.k = 2;
  d.beta = Eigen::Vector2d(1.0, beta2);
  d.regressors = RegressorKind::kUniformExample;
  d.fe = std::move(fe);
  d.link = std::move(link);
  return d;
}

PanelDesign chamberlain_design(Eigen::VectorXd beta, ZLaw z_law,
                               links::Link link, FixedEffectLaw fe) {
  PanelDesign d;
  d.k = static_cast<int>(beta.size());
  d.beta = std::move(beta);
  d.regressors = RegressorKind::kChamberlain;
  d.z_law = z_law;
  d.fe = std::move(fe);
  d.link = std::move(link);
  return d;
}

PanelSample simulate(const PanelDesign& design, long long n,
                     std::uint64_t seed) {
  validate(design, n);
  const int k = design.k;
  PanelSample sample;
  sample.w.resize(n, k);
  sample.y0.resize(n);
  sample.y1.resize(n);
  sample.d.resize(n);

  Eigen::VectorXd wrow(k);
  for (long long i = 0; i < n; ++i) {
    const auto row = static_cast<std::uint64_t>(i);
    switch (design.regressors) {
      case RegressorKind::kUniformExample:
        for (int j = 0; j < 2; ++j) {
          rng::Stream sw(seed, row, rng::kTagRegressor0 + j);
          wrow[j] = sw.next_uniform_sym();
        }
        break;
      case RegressorKind::kChamberlain:
        for (int j = 0; j < k - 1; ++j) {
          rng::Stream sw(seed, row, rng::kTagRegressor0 + j);
          wrow[j] = design.z_law.lo +
                    (design.z_law.hi - design.z_law.lo) * sw.next_uniform01();
        }
        wrow[k - 1] = 1.0;  // differenced time dummy, exact
        break;
    }

    rng::Stream sa(seed, row, rng::kTagAlpha);
    double alpha = 0.0;
    switch (design.fe.kind) {
      case FixedEffectKind::kNormal:
        alpha = design.fe.mean + design.fe.sd * sa.next_normal();
        break;
      case FixedEffectKind::kLocationShift:
        // Period 0 sits at the origin, so the per-row regressor average
        // across the two periods is w/2.
        alpha = 0.5 * design.fe.shift.dot(wrow) +
                design.fe.sd * sa.next_normal();
        break;
      case FixedEffectKind::kCustom:
        alpha = design.fe.custom(wrow, sa.next_normal());
        break;
    }

    rng::Stream s0(seed, row, rng::kTagU0);
    rng::Stream s1(seed, row, rng::kTagU1);
    const double u0 = links::quantile(design.link, s0.next_uniform_open01());
    const double u1 = links::quantile(design.link, s1.next_uniform_open01());

    const double index1 = wrow.dot(design.beta);
    const int y0 = (alpha >= u0) ? 1 : 0;
    const int y1 = (index1 + alpha >= u1) ? 1 : 0;
    sample.w.row(i) = wrow;
    sample.y0[i] = y0;
    sample.y1[i] = y1;
    sample.d[i] = y1 - y0;
  }
  return sample;
}

std::string to_csv(const PanelSample& sample) {
  std::ostringstream os;
  const int k = sample.k();
  for (int j = 0; j < k; ++j) os << "w_" << (j + 1) << ",";
  os << "y0,y1\n";
  for (int i = 0; i < sample.n(); ++i) {
    for (int j = 0; j < k; ++j) os << records::fmt_real(sample.w(i, j)) << ",";
    os << sample.y0[i] << "," << sample.y1[i] << "\n";
  }
  return os.str();
}

PanelSample from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw DegenerateDataError("panel CSV: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) header.push_back(field);
  }
  if (header.size() < 3 || header[header.size() - 2] != "y0" ||
      header.back() != "y1") {
    throw DegenerateDataError(
        "panel CSV: header must be w_1,...,w_k,y0,y1");
  }
  const int k = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < k; ++j) {
    std::ostringstream expect;
    expect << "w_" << (j + 1);
    if (header[j] != expect.str()) {
      throw DegenerateDataError(
          "panel CSV: header must be w_1,...,w_k,y0,y1");
    }
  }

  std::vector<std::vector<double>> wrows;
  std::vector<int> y0s, y1s;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != k + 2) {
      std::ostringstream os;
      os << "panel CSV: line " << line_no << " has " << fields.size()
         << " fields, expected " << (k + 2);
      throw DegenerateDataError(os.str());
    }
    std::vector<double> wrow(k);
    for (int j = 0; j < k + 2; ++j) {
      const char* begin = fields[j].c_str();
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        std::ostringstream os;
        os << "panel CSV: line " << line_no << " field " << (j + 1)
           << " is not numeric";
        throw DegenerateDataError(os.str());
      }
      if (j < k) {
        wrow[j] = value;
      } else {
        if (value != 0.0 && value != 1.0) {
          std::ostringstream os;
          os << "panel CSV: line " << line_no
             << " outcome must be 0 or 1";
          throw DegenerateDataError(os.str());
        }
        (j == k ? y0s : y1s).push_back(static_cast<int>(value));
      }
    }
    wrows.push_back(std::move(wrow));
  }
  if (wrows.empty()) {
    throw DegenerateDataError("panel CSV: no observation rows");
  }

  PanelSample sample;
  const int n = static_cast<int>(wrows.size());
  sample.w.resize(n, k);
  sample.y0.resize(n);
  sample.y1.resize(n);
  sample.d.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) sample.w(i, j) = wrows[i][j];
    sample.y0[i] = y0s[i];
    sample.y1[i] = y1s[i];
    sample.d[i] = y1s[i] - y0s[i];
  }
  return sample;
}

}  // namespace sspanel::dgp
