#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gcaptcha::metrics {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public std::invalid_argument {
 public:
  EmptyInput() : std::invalid_argument("no ratings to bucket") {}
};

class NoTimingData : public std::runtime_error {
 public:
  NoTimingData() : std::runtime_error("no response carries a solve time") {}
};

enum class Frequency { daily, weekly, monthly };
// Nielsen order; errors are reported separately as failed-attempt totals.
enum class Metric { learnability, efficiency, memorability, satisfaction };

inline constexpr std::array kMetrics = {Metric::learnability, Metric::efficiency,
                                        Metric::memorability, Metric::satisfaction};
inline constexpr std::array kFrequencies = {Frequency::daily, Frequency::weekly,
                                            Frequency::monthly};

[[nodiscard]] std::string_view to_string(Frequency f);
[[nodiscard]] std::string_view to_string(Metric m);
[[nodiscard]] std::optional<Frequency> parse_frequency(std::string_view s);
[[nodiscard]] std::optional<Metric> parse_metric(std::string_view s);

// Ratings are 1 (very difficult) .. 5 (very easy).
struct SurveyResponse {
  std::string participant_id;
  int age = 0;
  std::string gender;
  std::string education;
  int internet_years = 0;
  Frequency internet_frequency = Frequency::daily;
  bool vision_impaired = false;
  std::map<std::string, std::map<Metric, int>> ratings;
  std::map<std::string, std::int64_t> failed_attempts;
  std::optional<std::int64_t> flash_solve_time_ms;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct IngestResult {
  std::vector<SurveyResponse> responses;
  std::vector<RowError> errors;
};

// Header must match the documented schema (SchemaError otherwise). Bad rows
// are skipped and reported with their 1-based line number.
[[nodiscard]] IngestResult ingest(std::istream& csv);

// Percentages rounded half-up to hundredths, from exact counts.
[[nodiscard]] std::int64_t percent_hundredths(std::int64_t count, std::int64_t total);
[[nodiscard]] double round2(double value);

struct Buckets {
  std::int64_t difficult = 0;  // ratings 1 and 2
  std::int64_t neutral = 0;    // rating 3
  std::int64_t easy = 0;       // ratings 4 and 5

  [[nodiscard]] std::int64_t total() const { return difficult + neutral + easy; }
  [[nodiscard]] double difficult_pct() const;
  [[nodiscard]] double neutral_pct() const;
  [[nodiscard]] double easy_pct() const;
};

// Throws EmptyInput on an empty list and std::invalid_argument on a value
// outside 1..5.
[[nodiscard]] Buckets likert_buckets(std::span<const int> ratings);

struct SolveTimes {
  std::map<Frequency, double> mean_ms_by_frequency;  // groups without data omitted
  double overall_mean_ms = 0.0;
};

[[nodiscard]] SolveTimes mean_time_by_frequency(std::span<const SurveyResponse> rs);

[[nodiscard]] std::map<std::string, std::int64_t> failed_attempt_totals(
    std::span<const SurveyResponse> rs);

struct CellReport {
  std::string label;
  Metric metric = Metric::learnability;
  Buckets buckets;
};

struct UsabilityReport {
  std::size_t participants = 0;
  // Labels alphabetical, metrics in Nielsen order.
  std::vector<CellReport> cells;
  std::map<std::string, std::int64_t> failed_attempt_totals;
  std::optional<SolveTimes> solve_times;
  double mean_internet_years = 0.0;

  [[nodiscard]] const CellReport* cell(std::string_view label, Metric m) const;
};

// Throws EmptyInput when there are no responses.
[[nodiscard]] UsabilityReport report(std::span<const SurveyResponse> rs);

[[nodiscard]] std::string render_text(const UsabilityReport& r);
[[nodiscard]] nlohmann::ordered_json to_json(const UsabilityReport& r);

}  // namespace gcaptcha::metrics
