#include "gcaptcha/metrics.hpp"

#include <algorithm>
#include <boost/tokenizer.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace gcaptcha::metrics {

namespace {

const std::vector<std::string> kFixedColumns = {
    "participant_id",     "age",             "gender",
    "education",          "internet_years",  "internet_frequency",
    "vision_impaired",    "flash_solve_time_ms"};

constexpr std::string_view kFailedSuffix = "failed_attempts";

enum class ColumnKind { fixed, rating, failed };

struct Column {
  ColumnKind kind = ColumnKind::fixed;
  std::size_t fixed_index = 0;
  std::string label;
  Metric metric = Metric::learnability;
};

bool is_label(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::vector<std::string> split_csv(const std::string& line) {
  using Sep = boost::escaped_list_separator<char>;
  boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
  return {tok.begin(), tok.end()};
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  if (s == "yes" || s == "true" || s == "1") return true;
  if (s == "no" || s == "false" || s == "0") return false;
  return std::nullopt;
}

std::vector<Column> parse_header(const std::string& line) {
  const auto names = split_csv(line);
  std::set<std::string> seen;
  std::vector<Column> cols;
  std::vector<bool> have_fixed(kFixedColumns.size(), false);
  for (const auto& name : names) {
    if (!seen.insert(name).second) throw SchemaError("duplicate column '" + name + "'");
    Column c;
    const auto fixed = std::find(kFixedColumns.begin(), kFixedColumns.end(), name);
    if (fixed != kFixedColumns.end()) {
      c.fixed_index = static_cast<std::size_t>(fixed - kFixedColumns.begin());
      have_fixed[c.fixed_index] = true;
    } else {
      const auto dot = name.find('.');
      if (dot == std::string::npos) throw SchemaError("unknown column '" + name + "'");
      c.label = name.substr(0, dot);
      const std::string rest = name.substr(dot + 1);
      if (!is_label(c.label)) throw SchemaError("bad CAPTCHA label in column '" + name + "'");
      if (rest == kFailedSuffix) {
        c.kind = ColumnKind::failed;
      } else if (const auto m = parse_metric(rest)) {
        c.kind = ColumnKind::rating;
        c.metric = *m;
      } else {
        throw SchemaError("unknown measure in column '" + name + "'");
      }
    }
    cols.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < kFixedColumns.size(); ++i) {
    if (!have_fixed[i]) throw SchemaError("missing column '" + kFixedColumns[i] + "'");
  }
  return cols;
}

// Throws std::invalid_argument with a cell-level message.
SurveyResponse parse_row(const std::vector<Column>& cols,
                         const std::vector<std::string>& cells) {
  if (cells.size() != cols.size()) {
    throw std::invalid_argument("expected " + std::to_string(cols.size()) +
                                " fields, got " + std::to_string(cells.size()));
  }
  SurveyResponse r;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const Column& c = cols[i];
    const std::string& v = cells[i];
    if (c.kind == ColumnKind::rating) {
      if (v.empty()) continue;
      const auto n = parse_int(v);
      if (!n || *n < 1 || *n > 5) {
        throw std::invalid_argument("Likert value '" + v + "' outside 1..5 in " +
                                    c.label + "." + std::string(to_string(c.metric)));
      }
      r.ratings[c.label][c.metric] = static_cast<int>(*n);
      continue;
    }
    if (c.kind == ColumnKind::failed) {
      if (v.empty()) continue;
      const auto n = parse_int(v);
      if (!n || *n < 0) {
        throw std::invalid_argument("failed attempts '" + v + "' must be >= 0 in " + c.label);
      }
      r.failed_attempts[c.label] = *n;
      continue;
    }
    const std::string& name = kFixedColumns[c.fixed_index];
    auto need_int = [&](std::int64_t lo, std::int64_t hi) {
      const auto n = parse_int(v);
      if (!n || *n < lo || *n > hi) {
        throw std::invalid_argument(name + " '" + v + "' is not an integer in [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
      }
      return *n;
    };
    switch (c.fixed_index) {
      case 0:
        if (v.empty()) throw std::invalid_argument("participant_id is empty");
        r.participant_id = v;
        break;
      case 1: r.age = static_cast<int>(need_int(0, 150)); break;
      case 2: r.gender = v; break;
      case 3: r.education = v; break;
      case 4: r.internet_years = static_cast<int>(need_int(0, 150)); break;
      case 5: {
        const auto f = parse_frequency(v);
        if (!f) throw std::invalid_argument("internet_frequency '" + v + "' is not daily/weekly/monthly");
        r.internet_frequency = *f;
        break;
      }
      case 6: {
        const auto b = parse_bool(v);
        if (!b) throw std::invalid_argument("vision_impaired '" + v + "' is not yes/no");
        r.vision_impaired = *b;
        break;
      }
      case 7:
        if (!v.empty()) r.flash_solve_time_ms = need_int(0, INT64_MAX);
        break;
    }
  }
  return r;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string_view to_string(Frequency f) {
  switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::weekly: return "weekly";
    case Frequency::monthly: return "monthly";
  }
  return "unknown";
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::learnability: return "learnability";
    case Metric::efficiency: return "efficiency";
    case Metric::memorability: return "memorability";
    case Metric::satisfaction: return "satisfaction";
  }
  return "unknown";
}

std::optional<Frequency> parse_frequency(std::string_view s) {
  for (Frequency f : kFrequencies) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view s) {
  for (Metric m : kMetrics) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

IngestResult ingest(std::istream& csv) {
  std::string line;
  if (!std::getline(csv, line)) throw SchemaError("missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<Column> cols = parse_header(line);

  IngestResult out;
  std::size_t line_no = 1;
  std::set<std::string> ids;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      SurveyResponse r = parse_row(cols, split_csv(line));
      if (!ids.insert(r.participant_id).second) {
        throw std::invalid_argument("duplicate participant_id " + r.participant_id);
      }
      out.responses.push_back(std::move(r));
    } catch (const boost::escaped_list_error& e) {
      out.errors.push_back({line_no, std::string("malformed CSV: ") + e.what()});
    } catch (const std::invalid_argument& e) {
      out.errors.push_back({line_no, e.what()});
    }
  }
  return out;
}

std::int64_t percent_hundredths(std::int64_t count, std::int64_t total) {
  if (total <= 0) throw std::invalid_argument("percentage of an empty total");
  return (count * 20000 + total) / (2 * total);
}

double round2(double value) { return std::floor(value * 100.0 + 0.5) / 100.0; }

double Buckets::difficult_pct() const {
  return static_cast<double>(percent_hundredths(difficult, total())) / 100.0;
}
double Buckets::neutral_pct() const {
  return static_cast<double>(percent_hundredths(neutral, total())) / 100.0;
}
double Buckets::easy_pct() const {
  return static_cast<double>(percent_hundredths(easy, total())) / 100.0;
}

Buckets likert_buckets(std::span<const int> ratings) {
  if (ratings.empty()) throw EmptyInput();
  Buckets b;
  for (int r : ratings) {
    if (r == 1 || r == 2) {
      ++b.difficult;
    } else if (r == 3) {
      ++b.neutral;
    } else if (r == 4 || r == 5) {
      ++b.easy;
    } else {
      throw std::invalid_argument("Likert rating " + std::to_string(r) + " outside 1..5");
    }
  }
  return b;
}

SolveTimes mean_time_by_frequency(std::span<const SurveyResponse> rs) {
  std::map<Frequency, std::pair<std::int64_t, std::int64_t>> sums;
  std::int64_t total = 0;
  std::int64_t n = 0;
  for (const auto& r : rs) {
    if (!r.flash_solve_time_ms) continue;
    auto& [sum, count] = sums[r.internet_frequency];
    sum += *r.flash_solve_time_ms;
    ++count;
    total += *r.flash_solve_time_ms;
    ++n;
  }
  if (n == 0) throw NoTimingData();
  SolveTimes out;
  for (const auto& [f, sc] : sums) {
    out.mean_ms_by_frequency[f] = static_cast<double>(sc.first) / static_cast<double>(sc.second);
  }
  out.overall_mean_ms = static_cast<double>(total) / static_cast<double>(n);
  return out;
}

std::map<std::string, std::int64_t> failed_attempt_totals(
    std::span<const SurveyResponse> rs) {
  std::map<std::string, std::int64_t> totals;
  for (const auto& r : rs) {
    for (const auto& [label, count] : r.failed_attempts) totals[label] += count;
  }
  return totals;
}

const CellReport* UsabilityReport::cell(std::string_view label, Metric m) const {
  for (const auto& c : cells) {
    if (c.label == label && c.metric == m) return &c;
  }
  return nullptr;
}

UsabilityReport report(std::span<const SurveyResponse> rs) {
  if (rs.empty()) throw EmptyInput();
  UsabilityReport out;
  out.participants = rs.size();

  std::map<std::string, std::map<Metric, std::vector<int>>> by_cell;
  std::int64_t years = 0;
  for (const auto& r : rs) {
    years += r.internet_years;
    for (const auto& [label, per_metric] : r.ratings) {
      for (const auto& [metric, value] : per_metric) by_cell[label][metric].push_back(value);
    }
  }
  for (const auto& [label, per_metric] : by_cell) {
    for (Metric m : kMetrics) {
      const auto it = per_metric.find(m);
      if (it == per_metric.end()) continue;
      out.cells.push_back({label, m, likert_buckets(it->second)});
    }
  }
  out.failed_attempt_totals = failed_attempt_totals(rs);
  try {
    out.solve_times = mean_time_by_frequency(rs);
  } catch (const NoTimingData&) {
    out.solve_times.reset();
  }
  out.mean_internet_years = static_cast<double>(years) / static_cast<double>(rs.size());
  return out;
}

std::string render_text(const UsabilityReport& r) {
  std::ostringstream os;
  char line[160];
  os << "Usability report (" << r.participants << " participants)\n\n";
  std::snprintf(line, sizeof line, "%-14s %-14s %5s %11s %11s %11s\n", "captcha",
                "metric", "n", "difficult%", "neutral%", "easy%");
  os << line;
  for (const auto& c : r.cells) {
    std::snprintf(line, sizeof line, "%-14s %-14s %5lld %11s %11s %11s\n",
                  c.label.c_str(), std::string(to_string(c.metric)).c_str(),
                  static_cast<long long>(c.buckets.total()),
                  fmt2(c.buckets.difficult_pct()).c_str(),
                  fmt2(c.buckets.neutral_pct()).c_str(),
                  fmt2(c.buckets.easy_pct()).c_str());
    os << line;
  }
  os << "\nerrors (failed attempts)\n";
  for (const auto& [label, total] : r.failed_attempt_totals) {
    std::snprintf(line, sizeof line, "%-14s %8lld\n", label.c_str(),
                  static_cast<long long>(total));
    os << line;
  }
  os << "\nsolve time\n";
  if (r.solve_times) {
    for (const auto& [f, ms] : r.solve_times->mean_ms_by_frequency) {
      std::snprintf(line, sizeof line, "%-14s %10s ms %8s s\n",
                    std::string(to_string(f)).c_str(), fmt2(ms).c_str(),
                    fmt2(ms / 1000.0).c_str());
      os << line;
    }
    std::snprintf(line, sizeof line, "%-14s %10s ms %8s s\n", "overall",
                  fmt2(r.solve_times->overall_mean_ms).c_str(),
                  fmt2(r.solve_times->overall_mean_ms / 1000.0).c_str());
    os << line;
  } else {
    os << "(no timing data)\n";
  }
  os << "\nmean internet years: " << fmt2(r.mean_internet_years) << '\n';
  return os.str();
}

nlohmann::ordered_json to_json(const UsabilityReport& r) {
  using nlohmann::ordered_json;
  ordered_json cells = ordered_json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"captcha", c.label},
                     {"metric", std::string(to_string(c.metric))},
                     {"respondents", c.buckets.total()},
                     {"difficult_pct", c.buckets.difficult_pct()},
                     {"neutral_pct", c.buckets.neutral_pct()},
                     {"easy_pct", c.buckets.easy_pct()}});
  }
  ordered_json failed = ordered_json::object();
  for (const auto& [label, total] : r.failed_attempt_totals) failed[label] = total;
  ordered_json times = nullptr;
  if (r.solve_times) {
    ordered_json groups = ordered_json::object();
    for (const auto& [f, ms] : r.solve_times->mean_ms_by_frequency) {
      groups[std::string(to_string(f))] = round2(ms);
    }
    times = {{"mean_solve_time_ms_by_frequency", groups},
             {"mean_solve_time_ms", round2(r.solve_times->overall_mean_ms)}};
  }
  return {{"participants", r.participants},
          {"cells", cells},
          {"failed_attempt_totals", failed},
          {"solve_time", times},
          {"mean_internet_years", round2(r.mean_internet_years)}};
}

}  // namespace gcaptcha::metrics
