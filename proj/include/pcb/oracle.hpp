#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pcb/frechet.hpp"
#include "pcb/model.hpp"
#include "pcb/query.hpp"

namespace pcb {

/// assignment[j] = outcome index the unit would show under x_j.
struct ResponseType {
  std::vector<int> assignment;
  bool operator==(const ResponseType&) const = default;
};

/// All n^m response types, lexicographic with x_1 most significant.
std::vector<ResponseType> enumerate_response_types(const ProblemSpace& space);

/// Equality-form LP over q[t][j] >= 0, the mass of response type t among
/// units observed under x_j. Variable index is t * m + j. Every coefficient
/// is 1, so rows and the objective are stored as column lists.
struct LinearProgram {
  struct Row {
    std::string name;
    std::vector<std::size_t> columns;
    mpq_class rhs;
  };
  std::vector<std::string> variables;
  std::vector<Row> constraints;
  std::vector<std::size_t> objective;
};

/// Plain-text dump: variables, "min/max" objective, one "name: a + b = rhs" line per row.
std::string write_lp(const LinearProgram& lp);

struct OracleOptions {
  std::size_t maxVariables = 4096;
  /// Rational arithmetic up to this many variables, doubles beyond.
  std::size_t exactVariables = 81;
};

/// Exact dataset probabilities: count ratios when the dataset came from counts,
/// otherwise each double rationalised within 1e-12 and rows renormalised.
struct RationalData {
  std::vector<std::vector<mpq_class>> experimental;
  std::vector<std::vector<mpq_class>> joint;
};
RationalData rational_data(const Dataset& dataset);

/// Tight bounds by linear programming over response types. Phase 1 is solved
/// once at construction; each query costs two phase-2 solves.
class ResponseTypeOracle {
 public:
  explicit ResponseTypeOracle(const Dataset& dataset, OracleOptions options = {});
  ~ResponseTypeOracle();
  ResponseTypeOracle(ResponseTypeOracle&&) noexcept;
  ResponseTypeOracle& operator=(ResponseTypeOracle&&) noexcept;

  bool feasible() const noexcept;
  bool exact() const noexcept;
  std::size_t variables() const noexcept;

  /// Zero -> [0,0]; conditional -> joint bounds over the exact evidence probability.
  /// Throws Infeasible when the dataset admits no joint distribution.
  Interval bounds(const CanonicalQuery& query) const;

  /// The LP whose min/max is the joint part of `query`.
  LinearProgram program(const CanonicalQuery& query) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Interval tight_bounds(const Dataset& dataset, const CanonicalQuery& query, OracleOptions options = {});
bool feasible(const Dataset& dataset, OracleOptions options = {});

}  // namespace pcb
