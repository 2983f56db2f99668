#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mram/ndtm.hpp"
#include "mram/transpile.hpp"

namespace mram::bench {

/// One instance of a scaling experiment. Field names double as CSV columns.
struct ScalingRow {
  std::uint64_t n = 0;
  std::uint64_t S = 0;
  std::uint64_t T = 0;
  std::uint64_t N_bits = 0;
  std::uint64_t oracle_nodes = 0;
  std::uint64_t executed = 0;
  std::uint64_t unit_cost = 0;
  std::uint64_t log_cost = 0;
  double wall_ms = 0;

  // Not written to the CSV: the emit bound for this row.
  double executed_bound = 0;
};

/// Raised when the three simulation levels disagree on an instance.
class DisagreementError : public std::runtime_error {
 public:
  DisagreementError(std::string what, std::vector<ScalingRow> rows_so_far)
      : std::runtime_error(std::move(what)), rows(std::move(rows_so_far)) {}
  std::vector<ScalingRow> rows;
};

struct Instance {
  ndtm::NdtmSpec spec;
  std::vector<std::string> input;
  ndtm::Bounds bounds;
};

/// Instance for size n: "sat" draws a formula with n variables, 2n clauses and
/// 3 literals per clause from `seed`; corpus names ("guess-bit",
/// "always-reject", "parity") use S = n + 1 with the input described in the
/// README.
Instance make_instance(const std::string& problem, std::uint64_t n, std::uint64_t seed);

struct ScalingOptions {
  transpile::TripleCheckOptions check;
  /// Replaces triple_check; tests use it to inject disagreements.
  std::function<transpile::TripleReport(const ndtm::Machine&, const std::vector<int>&,
                                        ndtm::Bounds)>
      checker;
};

std::vector<ScalingRow> run_scaling(const std::string& problem,
                                    const std::vector<std::uint64_t>& sizes, std::uint64_t seed,
                                    const ScalingOptions& options = {});

enum class Growth { PolynomialConsistent, Superpolynomial };

struct MetricFit {
  std::string metric;
  std::vector<double> values;
  std::vector<double> slopes;      // successive log-log slopes
  std::vector<double> increments;  // slope differences
  double growth_score = 0;         // see kGrowthScore; 0 when undefined
  Growth growth = Growth::PolynomialConsistent;
};

struct FitReport {
  std::vector<double> n;
  std::vector<MetricFit> metrics;  // unit_cost, log_cost, oracle_nodes

  const MetricFit& metric(const std::string& name) const;
};

/// Growth score: how far the successive log-log slopes climb, relative to how
/// far they would climb for an exponential b^n over the same sizes
///   score = (last/first - 1) / (last_exp/first_exp - 1).
/// A power law scores 0 and every exponential scores 1 whatever its base.
/// Metrics scoring at least kGrowthScore are classified superpolynomial.
inline constexpr double kGrowthScore = 1.0 / 3.0;

MetricFit fit_metric(const std::string& name, const std::vector<double>& n,
                     const std::vector<double>& values);
FitReport fit_report(const std::vector<ScalingRow>& rows);
nlohmann::json fit_to_json(const FitReport& r);
std::string growth_name(Growth g);

std::string rows_to_csv(const std::vector<ScalingRow>& rows);

struct ReportConfig {
  std::string problem;
  std::vector<std::uint64_t> sizes;
  std::uint64_t seed = 0;
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t bit_budget = kDefaultBitBudget;
};

/// Writes `path` (CSV) and a JSON sidecar next to it (same stem, .json).
/// Returns the sidecar path. Throws std::runtime_error if unwritable.
std::string write_report(const std::vector<ScalingRow>& rows, const FitReport& report,
                         const ReportConfig& config, const std::string& path);

std::vector<std::uint64_t> parse_sizes(const std::string& text);

}  // namespace mram::bench
