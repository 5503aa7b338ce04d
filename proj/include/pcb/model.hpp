#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcb/error.hpp"

namespace pcb {

/// Row-major m x n matrix. The first index is always the treatment value,
/// the second the outcome value.
template <class T>
class Table {
 public:
  Table() = default;
  Table(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {}

  /// Builds from nested rows; throws ShapeMismatch when rows are ragged.
  static Table from_rows(const std::vector<std::vector<T>>& rows);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  const T& operator()(int row, int col) const { return cells_[index(row, col)]; }
  T& operator()(int row, int col) { return cells_[index(row, col)]; }

  bool operator==(const Table&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * cols_ + col;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> cells_;
};

using CountTable = Table<std::int64_t>;
using ProbabilityTable = Table<double>;

/// Sizes of the treatment axis X (m values) and the outcome axis Y (n values).
class ProblemSpace {
 public:
  ProblemSpace(int treatments, int outcomes);
  ProblemSpace(std::vector<std::string> treatmentLabels, std::vector<std::string> outcomeLabels);

  int treatments() const noexcept { return m_; }
  int outcomes() const noexcept { return n_; }

  /// Display label; falls back to "x<j+1>" / "y<i+1>".
  std::string treatment_label(int j) const;
  std::string outcome_label(int i) const;

  const std::vector<std::string>& treatment_labels() const noexcept { return xLabels_; }
  const std::vector<std::string>& outcome_labels() const noexcept { return yLabels_; }

  bool operator==(const ProblemSpace&) const = default;

 private:
  int m_;
  int n_;
  std::vector<std::string> xLabels_;
  std::vector<std::string> yLabels_;
};

/// P(y_i | do(x_j)) stored as at(j, i).
class ExperimentalDistribution {
 public:
  explicit ExperimentalDistribution(ProbabilityTable probabilities);

  double at(int treatment, int outcome) const { return p_(treatment, outcome); }
  const ProbabilityTable& table() const noexcept { return p_; }

 private:
  ProbabilityTable p_;
};

/// Observational joint P(x_j, y_i); marginals are always recomputed from the joint.
class ObservationalDistribution {
 public:
  explicit ObservationalDistribution(ProbabilityTable joint);

  double joint(int treatment, int outcome) const { return p_(treatment, outcome); }
  double treatment_marginal(int treatment) const;
  double outcome_marginal(int outcome) const;
  const ProbabilityTable& table() const noexcept { return p_; }

 private:
  ProbabilityTable p_;
};

enum class ViolationKind { Lower, Upper, RowSum, TotalSum };

const char* to_string(ViolationKind kind);

struct Violation {
  int treatment = -1;  ///< -1 when the defect is not tied to a row
  int outcome = -1;    ///< -1 when the defect is not tied to a cell
  ViolationKind kind = ViolationKind::Lower;
  double magnitude = 0.0;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Tolerances used when checking sums and the experimental/observational relation.
struct Tolerances {
  double sum = 1e-9;
  double consistency = 1e-9;

  static Tolerances counts() { return {1e-9, 1e-9}; }
  static Tolerances user_probabilities() { return {1e-6, 1e-6}; }
};

/// Counts a dataset was ingested from; kept so exact rational arithmetic can
/// reproduce the same probabilities without float round-off.
struct CountSource {
  CountTable experimental;
  CountTable observational;
};

class Dataset {
 public:
  /// Shapes must match the space; entries must lie in [0, 1] within tolerances.sum.
  Dataset(ProblemSpace space, ExperimentalDistribution exp, ObservationalDistribution obs,
          Tolerances tolerances = Tolerances::user_probabilities(),
          std::optional<CountSource> counts = std::nullopt);

  const ProblemSpace& space() const noexcept { return space_; }
  int treatments() const noexcept { return space_.treatments(); }
  int outcomes() const noexcept { return space_.outcomes(); }

  const ExperimentalDistribution& experimental() const noexcept { return exp_; }
  const ObservationalDistribution& observational() const noexcept { return obs_; }

  /// P(y_i | do(x_j))
  double exp(int treatment, int outcome) const { return exp_.at(treatment, outcome); }
  /// P(x_j, y_i)
  double joint(int treatment, int outcome) const { return obs_.joint(treatment, outcome); }
  double px(int treatment) const { return obs_.treatment_marginal(treatment); }
  double py(int outcome) const { return obs_.outcome_marginal(outcome); }

  const ValidationReport& validation() const noexcept { return validation_; }
  const Tolerances& tolerances() const noexcept { return tolerances_; }
  const std::optional<CountSource>& counts() const noexcept { return counts_; }

 private:
  ProblemSpace space_;
  ExperimentalDistribution exp_;
  ObservationalDistribution obs_;
  Tolerances tolerances_;
  std::optional<CountSource> counts_;
  ValidationReport validation_;
};

/// Frequency estimates: experimental rows normalised per treatment arm,
/// observational cells normalised by the grand total.
Dataset dataset_from_counts(const CountTable& expCounts, const CountTable& obsCounts,
                            const ProblemSpace& space);

Dataset dataset_from_probabilities(const ProbabilityTable& exp, const ProbabilityTable& joint,
                                   const ProblemSpace& space,
                                   Tolerances tolerances = Tolerances::user_probabilities());

/// Lists every cell breaking P(x_j,y_i) <= P(y_i|do(x_j)) <= P(x_j,y_i) + 1 - P(x_j),
/// plus experimental row-sum and observational total-sum defects.
ValidationReport validate(const Dataset& dataset, double consistencyTolerance);

ValidationReport validate(const ProblemSpace& space, const ExperimentalDistribution& exp,
                          const ObservationalDistribution& obs, Tolerances tolerances);

}  // namespace pcb
