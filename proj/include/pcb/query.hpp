#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcb/model.hpp"

namespace pcb {

/// The event Y_{x_j} = y_i. Indices are zero-based; text uses x1..xm, y1..yn.
struct CounterfactualTerm {
  int treatment = 0;
  int outcome = 0;

  auto operator<=>(const CounterfactualTerm&) const = default;
};

/// Observed (factual) events X = x_p and/or Y = y_q.
struct Evidence {
  std::optional<int> treatment;
  std::optional<int> outcome;

  bool empty() const noexcept { return !treatment && !outcome; }
  auto operator<=>(const Evidence&) const = default;
};

/// A conjunction of counterfactual terms, optionally joint with or
/// conditioned on observed evidence.
struct Query {
  std::vector<CounterfactualTerm> terms;
  Evidence evidence;
  /// Divide by the probability of `evidence`.
  bool conditional = false;

  bool operator==(const Query&) const = default;
};

enum class QueryKind {
  Zero,               ///< identically zero event
  ExactObservational, ///< a cell or marginal of the observational joint
  Standard,           ///< distinct term treatments, evidence treatment outside them
};

const char* to_string(QueryKind kind);

struct CanonicalQuery {
  QueryKind kind = QueryKind::Zero;
  /// Sorted by treatment; empty unless Standard.
  std::vector<CounterfactualTerm> terms;
  /// Joint evidence after consistency absorption.
  Evidence evidence;
  /// Evidence of the original query when it was conditional.
  std::optional<Evidence> conditioning;

  std::size_t hypothetical_terms() const noexcept { return terms.size(); }
  bool operator==(const CanonicalQuery&) const = default;
};

/// Grammar (whitespace insignificant, 1-based indices):
///
///   query  := "P(" events ( "|" events )? ")"
///   events := event ( "," event )*
///   event  := OUTCOME "_" TREATMENT | TREATMENT | OUTCOME
///
/// Counterfactual terms go left of the bar and bare events right of it when a
/// bar is present. At most one bare treatment and one bare outcome.
Query parse_query(std::string_view text, const ProblemSpace& space);

/// Dedupes terms, detects contradictions, absorbs a term whose treatment is
/// the observed one and sorts the remaining terms.
CanonicalQuery canonicalize(const Query& query);

/// Inverse of parse_query.
std::string format_query(const Query& query);
std::string format_query(const CanonicalQuery& query);

/// Joint (unconditioned) query with the given terms and evidence.
Query make_joint(std::vector<CounterfactualTerm> terms, Evidence evidence = {});

}  // namespace pcb
