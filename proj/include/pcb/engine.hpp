#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcb/frechet.hpp"
#include "pcb/model.hpp"
#include "pcb/query.hpp"

namespace pcb {

/// Which rule produced a bound.
///
///  T1  P(y_i_{x_j}, y_i)           T5  P(terms)
///  T2  P(y_i_{x_j}, y_k), k != i   T6  P(terms, x_p)
///  T3  P(y_i_{x_j}, x_k), k != j   T7  P(terms, y_q)
///  T4  P(y_i_{x_j}, x_p, y_k)      T8  P(terms, x_p, y_q)
///
/// Exact covers experimental points and observational cells/marginals.
enum class Theorem { Zero, Exact, T1, T2, T3, T4, T5, T6, T7, T8, TianPearlPns, TianPearlPn, TianPearlPs };

const char* to_string(Theorem theorem);

/// One candidate inside a max{...} or min{...}, before clamping.
struct Branch {
  std::string label;
  double value = 0.0;
};

struct BoundTrace {
  std::string query;
  Theorem theorem = Theorem::Exact;
  std::vector<Branch> lower;
  std::vector<Branch> upper;
  std::string lowerBranch;  ///< label of the winning lower candidate
  std::string upperBranch;  ///< label of the winning upper candidate
  Interval interval;
  std::vector<std::shared_ptr<const BoundTrace>> children;
};

using TracePtr = std::shared_ptr<const BoundTrace>;

/// Nested {query, theorem, lower_branch, upper_branch, lo, hi, branches, children}.
/// Nodes shared through memoisation are expanded once; later occurrences are
/// emitted without children and flagged "repeat": true.
std::string trace_to_json(const BoundTrace& trace, int indent = 2);

struct EngineOptions {
  bool memoize = true;
  /// Refuse datasets whose validation report is not ok.
  bool strict = false;
  std::size_t maxTerms = 8;
};

struct BoundResult {
  CanonicalQuery query;
  Interval interval;
  TracePtr trace;
  /// Distinct subqueries bounded while answering the query.
  std::size_t statsEvaluated = 0;
  /// Exact probability the joint bound was divided by, for conditional queries.
  std::optional<double> evidenceProbability;

  /// 2^(k+2) for k hypothetical terms.
  std::size_t recursion_budget() const noexcept {
    return std::size_t{1} << (query.hypothetical_terms() + 2);
  }
};

BoundResult bound(const Dataset& dataset, const Query& query, const EngineOptions& options = {});
BoundResult bound(const Dataset& dataset, const CanonicalQuery& query, const EngineOptions& options = {});

/// Recursive evaluator for joint queries. Holds the per-call memo table; not
/// meant to outlive a single top-level query. Terms passed in must have
/// distinct treatments, none equal to the observed treatment.
class BoundEngine {
 public:
  explicit BoundEngine(const Dataset& dataset, EngineOptions options = {});

  /// Dispatches on the number of terms and the evidence present.
  TracePtr evaluate(std::vector<CounterfactualTerm> terms, Evidence evidence = {});

  /// P(y_i_{x_j}, y_k): T1 when k == i, T2 otherwise.
  Interval term_with_outcome(int outcome, int treatment, int observedOutcome);
  /// P(y_i_{x_j}, x_k), k != j.
  Interval term_with_treatment(int outcome, int treatment, int observedTreatment);
  /// P(y_i_{x_j}, x_p, y_k), p != j.
  Interval term_with_both(int outcome, int treatment, int observedOutcome, int observedTreatment);

  Interval conjunction(const std::vector<CounterfactualTerm>& terms);
  Interval conjunction_with_treatment(const std::vector<CounterfactualTerm>& terms, int p);
  Interval conjunction_with_outcome(const std::vector<CounterfactualTerm>& terms, int q);
  Interval conjunction_with_both(const std::vector<CounterfactualTerm>& terms, int p, int q);

  std::size_t evaluated() const noexcept { return seen_.size(); }

 private:
  struct Key {
    std::vector<CounterfactualTerm> terms;
    Evidence evidence;
    auto operator<=>(const Key&) const = default;
  };

  TracePtr compute(const Key& key);
  TracePtr exact(const Key& key);
  TracePtr single_term(const Key& key);
  TracePtr conjunction_node(const Key& key);
  TracePtr conjunction_node_with_treatment(const Key& key);
  TracePtr conjunction_node_with_outcome(const Key& key);
  TracePtr conjunction_node_with_both(const Key& key);

  const Dataset& data_;
  EngineOptions options_;
  std::map<Key, TracePtr> memo_;
  std::set<Key> seen_;
};

enum class CausationKind { PNS, PN, PS };

/// Closed-form bounds for binary X and Y, with x = x1, x' = x2, y = y1, y' = y2:
/// PNS = P(y_x, y'_x'), PN = P(y'_x' | x, y), PS = P(y_x | x', y').
Interval tian_pearl(const Dataset& dataset, CausationKind kind);
BoundResult tian_pearl_traced(const Dataset& dataset, CausationKind kind);

/// The query each binary quantity denotes, in the same orientation.
Query causation_query(CausationKind kind);

}  // namespace pcb
