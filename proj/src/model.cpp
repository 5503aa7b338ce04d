#include "pcb/model.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace pcb {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Lower: return "lower";
    case ViolationKind::Upper: return "upper";
    case ViolationKind::RowSum: return "rowSum";
    case ViolationKind::TotalSum: return "totalSum";
  }
  return "unknown";
}

template <class T>
Table<T> Table<T>::from_rows(const std::vector<std::vector<T>>& rows) {
  if (rows.empty()) return Table<T>();
  const int cols = static_cast<int>(rows.front().size());
  Table<T> table(static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) {
      throw Error(ErrorCode::ShapeMismatch, "row " + std::to_string(r + 1) + " has " +
                                                std::to_string(rows[r].size()) +
                                                " entries, expected " + std::to_string(cols));
    }
    for (int c = 0; c < cols; ++c) table(static_cast<int>(r), c) = rows[r][c];
  }
  return table;
}

template class Table<std::int64_t>;
template class Table<double>;

namespace {

void check_labels(const std::vector<std::string>& labels, const char* axis) {
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::InvalidData, std::string("duplicate ") + axis + " label '" + label + "'");
    }
  }
}

void check_shape(const ProblemSpace& space, int rows, int cols, const char* what) {
  if (rows != space.treatments() || cols != space.outcomes()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + " is " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", problem space is " + std::to_string(space.treatments()) + "x" +
                    std::to_string(space.outcomes()));
  }
}

void check_entries(const ProbabilityTable& table, double slack, const char* what) {
  for (int j = 0; j < table.rows(); ++j) {
    for (int i = 0; i < table.cols(); ++i) {
      const double v = table(j, i);
      if (!std::isfinite(v) || v < -slack || v > 1.0 + slack) {
        throw Error(ErrorCode::InvalidProbability,
                    std::string(what) + " entry (" + std::to_string(j + 1) + "," +
                        std::to_string(i + 1) + ") = " + std::to_string(v) + " is not a probability");
      }
    }
  }
}

}  // namespace

ProblemSpace::ProblemSpace(int treatments, int outcomes) : m_(treatments), n_(outcomes) {
  if (m_ < 2 || n_ < 2) {
    throw Error(ErrorCode::InvalidData, "problem space needs at least 2 treatment and 2 outcome values");
  }
}

ProblemSpace::ProblemSpace(std::vector<std::string> treatmentLabels,
                           std::vector<std::string> outcomeLabels)
    : ProblemSpace(static_cast<int>(treatmentLabels.size()), static_cast<int>(outcomeLabels.size())) {
  check_labels(treatmentLabels, "treatment");
  check_labels(outcomeLabels, "outcome");
  xLabels_ = std::move(treatmentLabels);
  yLabels_ = std::move(outcomeLabels);
}

std::string ProblemSpace::treatment_label(int j) const {
  if (!xLabels_.empty()) return xLabels_.at(j);
  return "x" + std::to_string(j + 1);
}

std::string ProblemSpace::outcome_label(int i) const {
  if (!yLabels_.empty()) return yLabels_.at(i);
  return "y" + std::to_string(i + 1);
}

ExperimentalDistribution::ExperimentalDistribution(ProbabilityTable probabilities)
    : p_(std::move(probabilities)) {}

ObservationalDistribution::ObservationalDistribution(ProbabilityTable joint) : p_(std::move(joint)) {}

double ObservationalDistribution::treatment_marginal(int treatment) const {
  double sum = 0.0;
  for (int i = 0; i < p_.cols(); ++i) sum += p_(treatment, i);
  return sum;
}

double ObservationalDistribution::outcome_marginal(int outcome) const {
  double sum = 0.0;
  for (int j = 0; j < p_.rows(); ++j) sum += p_(j, outcome);
  return sum;
}

Dataset::Dataset(ProblemSpace space, ExperimentalDistribution exp, ObservationalDistribution obs,
                 Tolerances tolerances, std::optional<CountSource> counts)
    : space_(std::move(space)),
      exp_(std::move(exp)),
      obs_(std::move(obs)),
      tolerances_(tolerances),
      counts_(std::move(counts)) {
  check_shape(space_, exp_.table().rows(), exp_.table().cols(), "experimental distribution");
  check_shape(space_, obs_.table().rows(), obs_.table().cols(), "observational distribution");
  check_entries(exp_.table(), tolerances_.sum, "experimental");
  check_entries(obs_.table(), tolerances_.sum, "observational");
  validation_ = validate(space_, exp_, obs_, tolerances_);
}

Dataset dataset_from_counts(const CountTable& expCounts, const CountTable& obsCounts,
                            const ProblemSpace& space) {
  check_shape(space, expCounts.rows(), expCounts.cols(), "experimental counts");
  check_shape(space, obsCounts.rows(), obsCounts.cols(), "observational counts");

  const int m = space.treatments();
  const int n = space.outcomes();
  std::int64_t grand = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      if (expCounts(j, i) < 0 || obsCounts(j, i) < 0) {
        throw Error(ErrorCode::InvalidData, "counts must be nonnegative");
      }
      grand += obsCounts(j, i);
    }
  }
  if (grand <= 0) throw Error(ErrorCode::ZeroGrandTotal, "observational counts sum to zero");

  ProbabilityTable exp(m, n);
  ProbabilityTable joint(m, n);
  for (int j = 0; j < m; ++j) {
    std::int64_t rowTotal = 0;
    for (int i = 0; i < n; ++i) rowTotal += expCounts(j, i);
    if (rowTotal <= 0) {
      throw Error(ErrorCode::ZeroRowTotal,
                  "experimental arm " + space.treatment_label(j) + " has no observations");
    }
    for (int i = 0; i < n; ++i) {
      exp(j, i) = static_cast<double>(expCounts(j, i)) / static_cast<double>(rowTotal);
      joint(j, i) = static_cast<double>(obsCounts(j, i)) / static_cast<double>(grand);
    }
  }
  return Dataset(space, ExperimentalDistribution(std::move(exp)),
                 ObservationalDistribution(std::move(joint)), Tolerances::counts(),
                 CountSource{expCounts, obsCounts});
}

Dataset dataset_from_probabilities(const ProbabilityTable& exp, const ProbabilityTable& joint,
                                   const ProblemSpace& space, Tolerances tolerances) {
  return Dataset(space, ExperimentalDistribution(exp), ObservationalDistribution(joint), tolerances);
}

ValidationReport validate(const ProblemSpace& space, const ExperimentalDistribution& exp,
                          const ObservationalDistribution& obs, Tolerances tolerances) {
  ValidationReport report;
  const int m = space.treatments();
  const int n = space.outcomes();

  for (int j = 0; j < m; ++j) {
    const double px = obs.treatment_marginal(j);
    double rowSum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double causal = exp.at(j, i);
      const double cell = obs.joint(j, i);
      rowSum += causal;
      if (cell > causal + tolerances.consistency) {
        report.violations.push_back({j, i, ViolationKind::Lower, cell - causal});
      }
      const double ceiling = cell + 1.0 - px;
      if (causal > ceiling + tolerances.consistency) {
        report.violations.push_back({j, i, ViolationKind::Upper, causal - ceiling});
      }
    }
    if (std::abs(rowSum - 1.0) > tolerances.sum) {
      report.violations.push_back({j, -1, ViolationKind::RowSum, rowSum - 1.0});
    }
  }

  double total = 0.0;
  for (int j = 0; j < m; ++j) total += obs.treatment_marginal(j);
  if (std::abs(total - 1.0) > tolerances.sum) {
    report.violations.push_back({-1, -1, ViolationKind::TotalSum, total - 1.0});
  }
  return report;
}

ValidationReport validate(const Dataset& dataset, double consistencyTolerance) {
  Tolerances tolerances = dataset.tolerances();
  tolerances.consistency = consistencyTolerance;
  return validate(dataset.space(), dataset.experimental(), dataset.observational(), tolerances);
}

}  // namespace pcb
