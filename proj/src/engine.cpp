#include "pcb/engine.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

namespace pcb {

const char* to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::Zero: return "Zero";
    case Theorem::Exact: return "Exact";
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
    case Theorem::T4: return "T4";
    case Theorem::T5: return "T5";
    case Theorem::T6: return "T6";
    case Theorem::T7: return "T7";
    case Theorem::T8: return "T8";
    case Theorem::TianPearlPns: return "TP-PNS";
    case Theorem::TianPearlPn: return "TP-PN";
    case Theorem::TianPearlPs: return "TP-PS";
  }
  return "Unknown";
}

namespace {

std::string term_name(const CounterfactualTerm& t) {
  return fmt::format("y{}_x{}", t.outcome + 1, t.treatment + 1);
}

// Accumulates candidates for one node and resolves them into an interval.
class Node {
 public:
  Node(std::string query, Theorem theorem) {
    trace_.query = std::move(query);
    trace_.theorem = theorem;
  }

  void lower(std::string label, double value) { trace_.lower.push_back({std::move(label), value}); }
  void upper(std::string label, double value) { trace_.upper.push_back({std::move(label), value}); }
  void child(TracePtr node) { trace_.children.push_back(std::move(node)); }

  TracePtr finish() {
    std::vector<Interval> candidates;
    std::vector<std::string> labels;
    for (const Branch& b : trace_.lower) {
      candidates.push_back(Interval::clamped(b.value, 1.0));
      labels.push_back("lower " + b.label);
    }
    for (const Branch& b : trace_.upper) {
      candidates.push_back(Interval::clamped(0.0, b.value));
      labels.push_back("upper " + b.label);
    }
    std::vector<std::string_view> views(labels.begin(), labels.end());
    try {
      trace_.interval = intersect(candidates, views);
    } catch (const Error& e) {
      throw Error(e.code(), trace_.query + ": " + e.what());
    }
    trace_.lowerBranch = winner(trace_.lower, [](double a, double b) { return a > b; });
    trace_.upperBranch = winner(trace_.upper, [](double a, double b) { return a < b; });
    return std::make_shared<const BoundTrace>(std::move(trace_));
  }

 private:
  // First candidate attaining the extreme raw value.
  template <class Better>
  static std::string winner(const std::vector<Branch>& branches, Better better) {
    if (branches.empty()) return {};
    std::size_t best = 0;
    for (std::size_t k = 1; k < branches.size(); ++k) {
      if (better(branches[k].value, branches[best].value)) best = k;
    }
    return branches[best].label;
  }

  BoundTrace trace_;
};

std::vector<CounterfactualTerm> without(const std::vector<CounterfactualTerm>& terms, std::size_t drop) {
  std::vector<CounterfactualTerm> out;
  out.reserve(terms.size() - 1);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t != drop) out.push_back(terms[t]);
  }
  return out;
}

bool uses_treatment(const std::vector<CounterfactualTerm>& terms, int p) {
  return std::any_of(terms.begin(), terms.end(), [p](const CounterfactualTerm& t) { return t.treatment == p; });
}

Evidence observed(std::optional<int> treatment, std::optional<int> outcome) {
  Evidence e;
  e.treatment = treatment;
  e.outcome = outcome;
  return e;
}

}  // namespace


BoundEngine::BoundEngine(const Dataset& dataset, EngineOptions options) : data_(dataset), options_(options) {}

TracePtr BoundEngine::evaluate(std::vector<CounterfactualTerm> terms, Evidence evidence) {
  std::sort(terms.begin(), terms.end());
  Key key{std::move(terms), evidence};
  seen_.insert(key);
  if (options_.memoize) {
    if (auto hit = memo_.find(key); hit != memo_.end()) return hit->second;
  }
  TracePtr node = compute(key);
  if (options_.memoize) memo_.emplace(std::move(key), node);
  return node;
}

TracePtr BoundEngine::compute(const Key& key) {
  const std::size_t k = key.terms.size();
  if (k == 0) return exact(key);
  if (k == 1) return single_term(key);
  const Evidence& e = key.evidence;
  if (e.treatment && e.outcome) return conjunction_node_with_both(key);
  if (e.treatment) return conjunction_node_with_treatment(key);
  if (e.outcome) return conjunction_node_with_outcome(key);
  return conjunction_node(key);
}

TracePtr BoundEngine::exact(const Key& key) {
  const Evidence& e = key.evidence;
  std::string label;
  double value = 1.0;
  if (e.treatment && e.outcome) {
    label = "observational_cell";
    value = data_.joint(*e.treatment, *e.outcome);
  } else if (e.treatment) {
    label = "treatment_marginal";
    value = data_.px(*e.treatment);
  } else if (e.outcome) {
    label = "outcome_marginal";
    value = data_.py(*e.outcome);
  } else {
    label = "certain";
  }
  Node node(format_query(make_joint({}, e)), Theorem::Exact);
  node.lower(label, value);
  node.upper(label, value);
  return node.finish();
}

TracePtr BoundEngine::single_term(const Key& key) {
  const CounterfactualTerm t = key.terms.front();
  const int j = t.treatment;
  const int i = t.outcome;
  const double e = data_.exp(j, i);
  const Evidence& ev = key.evidence;
  const std::string name = format_query(make_joint(key.terms, ev));

  if (ev.empty()) {
    Node node(name, Theorem::Exact);
    node.lower("experimental", e);
    node.upper("experimental", e);
    return node.finish();
  }

  const double cell = data_.joint(j, i);
  const double pxj = data_.px(j);

  if (ev.treatment && ev.outcome) {
    const int p = *ev.treatment;
    const int q = *ev.outcome;
    Node node(name, Theorem::T4);
    node.lower("zero", 0.0);
    node.lower("complement", e + data_.joint(p, q) - 1.0 + pxj - cell);
    node.upper("experimental_minus_cell", e - cell);
    node.upper("observational_cell", data_.joint(p, q));
    return node.finish();
  }

  if (ev.treatment) {
    const int p = *ev.treatment;
    Node node(name, Theorem::T3);
    node.lower("zero", 0.0);
    node.lower("complement", e - cell - 1.0 + pxj + data_.px(p));
    node.upper("experimental_minus_cell", e - cell);
    node.upper("treatment_marginal", data_.px(p));
    return node.finish();
  }

  const int q = *ev.outcome;
  if (q == i) {
    Node node(name, Theorem::T1);
    node.lower("observational_cell", cell);
    node.lower("frechet", e + data_.py(i) - 1.0);
    node.upper("experimental", e);
    node.upper("outcome_marginal", data_.py(i));
    return node.finish();
  }

  Node node(name, Theorem::T2);
  double sum = 0.0;
  for (int p = 0; p < data_.treatments(); ++p) {
    if (p == j) continue;
    sum += std::max(0.0, e + data_.joint(p, q) - 1.0 + pxj - cell);
  }
  node.lower("zero", 0.0);
  node.lower("frechet", e + data_.py(q) - 1.0);
  node.lower("treatment_sum", sum);
  node.upper("experimental_minus_cell", e - cell);
  node.upper("outcome_marginal_minus_cell", data_.py(q) - data_.joint(j, q));
  return node.finish();
}

TracePtr BoundEngine::conjunction_node(const Key& key) {
  const auto& terms = key.terms;
  const std::size_t k = terms.size();
  Node node(format_query(make_joint(terms)), Theorem::T5);

  double expSum = 0.0;
  double expMin = 1.0;
  for (const auto& t : terms) {
    const double e = data_.exp(t.treatment, t.outcome);
    expSum += e;
    expMin = std::min(expMin, e);
  }
  node.lower("zero", 0.0);
  node.lower("frechet", expSum - static_cast<double>(k) + 1.0);

  std::vector<TracePtr> subs;
  for (std::size_t t = 0; t < k; ++t) subs.push_back(evaluate(without(terms, t)));
  for (std::size_t t = 0; t < k; ++t) {
    node.lower("leave_one_out[" + term_name(terms[t]) + "]",
               subs[t]->interval.lo() + data_.exp(terms[t].treatment, terms[t].outcome) - 1.0);
  }

  // Split on the observed treatment: X = x_{j_r} turns term r factual.
  double decLo = 0.0;
  double decHi = 0.0;
  std::vector<TracePtr> parts;
  for (std::size_t t = 0; t < k; ++t) {
    parts.push_back(evaluate(without(terms, t), observed(terms[t].treatment, terms[t].outcome)));
  }
  for (int p = 0; p < data_.treatments(); ++p) {
    if (!uses_treatment(terms, p)) parts.push_back(evaluate(terms, observed(p, std::nullopt)));
  }
  for (const auto& part : parts) {
    decLo += part->interval.lo();
    decHi += part->interval.hi();
  }
  node.lower("decomposition", decLo);

  node.upper("frechet", expMin);
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("leave_one_out[" + term_name(terms[t]) + "]", subs[t]->interval.hi());
  }
  node.upper("decomposition", decHi);

  for (auto& s : subs) node.child(s);
  for (auto& s : parts) node.child(s);
  return node.finish();
}

TracePtr BoundEngine::conjunction_node_with_treatment(const Key& key) {
  const auto& terms = key.terms;
  const std::size_t k = terms.size();
  const int p = *key.evidence.treatment;
  Node node(format_query(make_joint(terms, key.evidence)), Theorem::T6);

  double expSum = 0.0;
  double expMin = 1.0;
  for (const auto& t : terms) {
    const double e = data_.exp(t.treatment, t.outcome);
    expSum += e;
    expMin = std::min(expMin, e);
  }
  const double evidence = data_.px(p);

  std::vector<TracePtr> subs;
  std::vector<TracePtr> singles;
  for (std::size_t t = 0; t < k; ++t) {
    subs.push_back(evaluate(without(terms, t)));
    singles.push_back(evaluate({terms[t]}, key.evidence));
  }

  node.lower("zero", 0.0);
  node.lower("frechet", expSum + evidence - static_cast<double>(k));
  for (std::size_t t = 0; t < k; ++t) {
    node.lower("leave_one_out[" + term_name(terms[t]) + "]",
               subs[t]->interval.lo() + singles[t]->interval.lo() - 1.0);
  }
  node.upper("frechet", expMin);
  node.upper("evidence_marginal", evidence);
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("leave_one_out[" + term_name(terms[t]) + "]", subs[t]->interval.hi());
  }
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("single_term[" + term_name(terms[t]) + "]", singles[t]->interval.hi());
  }

  for (auto& s : subs) node.child(s);
  for (auto& s : singles) node.child(s);
  return node.finish();
}

TracePtr BoundEngine::conjunction_node_with_outcome(const Key& key) {
  const auto& terms = key.terms;
  const std::size_t k = terms.size();
  const int q = *key.evidence.outcome;
  Node node(format_query(make_joint(terms, key.evidence)), Theorem::T7);

  double expSum = 0.0;
  double expMin = 1.0;
  for (const auto& t : terms) {
    const double e = data_.exp(t.treatment, t.outcome);
    expSum += e;
    expMin = std::min(expMin, e);
  }
  const double evidence = data_.py(q);

  std::vector<TracePtr> subs;
  std::vector<TracePtr> singles;
  for (std::size_t t = 0; t < k; ++t) {
    subs.push_back(evaluate(without(terms, t)));
    singles.push_back(evaluate({terms[t]}, key.evidence));
  }

  // X = x_{j_r} with Y = y_q only survives when term r says y_q; other
  // observed treatments outside the terms keep all k terms.
  std::vector<TracePtr> parts;
  for (std::size_t t = 0; t < k; ++t) {
    if (terms[t].outcome == q) parts.push_back(evaluate(without(terms, t), observed(terms[t].treatment, q)));
  }
  for (int p = 0; p < data_.treatments(); ++p) {
    if (!uses_treatment(terms, p)) parts.push_back(evaluate(terms, observed(p, q)));
  }
  double decLo = 0.0;
  double decHi = 0.0;
  for (const auto& part : parts) {
    decLo += part->interval.lo();
    decHi += part->interval.hi();
  }

  node.lower("zero", 0.0);
  node.lower("frechet", expSum + evidence - static_cast<double>(k));
  for (std::size_t t = 0; t < k; ++t) {
    node.lower("leave_one_out[" + term_name(terms[t]) + "]",
               subs[t]->interval.lo() + singles[t]->interval.lo() - 1.0);
  }
  node.lower("decomposition", decLo);
  node.upper("frechet", expMin);
  node.upper("evidence_marginal", evidence);
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("leave_one_out[" + term_name(terms[t]) + "]", subs[t]->interval.hi());
  }
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("single_term[" + term_name(terms[t]) + "]", singles[t]->interval.hi());
  }
  node.upper("decomposition", decHi);

  for (auto& s : subs) node.child(s);
  for (auto& s : singles) node.child(s);
  for (auto& s : parts) node.child(s);
  return node.finish();
}

TracePtr BoundEngine::conjunction_node_with_both(const Key& key) {
  const auto& terms = key.terms;
  const std::size_t k = terms.size();
  const int p = *key.evidence.treatment;
  const int q = *key.evidence.outcome;
  Node node(format_query(make_joint(terms, key.evidence)), Theorem::T8);

  double expSum = 0.0;
  double expMin = 1.0;
  for (const auto& t : terms) {
    const double e = data_.exp(t.treatment, t.outcome);
    expSum += e;
    expMin = std::min(expMin, e);
  }
  const double evidence = data_.joint(p, q);

  std::vector<TracePtr> subs;
  std::vector<TracePtr> singles;
  for (std::size_t t = 0; t < k; ++t) {
    subs.push_back(evaluate(without(terms, t)));
    singles.push_back(evaluate({terms[t]}, key.evidence));
  }

  node.lower("zero", 0.0);
  node.lower("frechet", expSum + evidence - static_cast<double>(k));
  for (std::size_t t = 0; t < k; ++t) {
    node.lower("leave_one_out[" + term_name(terms[t]) + "]",
               subs[t]->interval.lo() + singles[t]->interval.lo() - 1.0);
  }
  node.upper("frechet", expMin);
  node.upper("evidence_cell", evidence);
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("leave_one_out[" + term_name(terms[t]) + "]", subs[t]->interval.hi());
  }
  for (std::size_t t = 0; t < k; ++t) {
    node.upper("single_term[" + term_name(terms[t]) + "]", singles[t]->interval.hi());
  }

  for (auto& s : subs) node.child(s);
  for (auto& s : singles) node.child(s);
  return node.finish();
}

Interval BoundEngine::term_with_outcome(int outcome, int treatment, int observedOutcome) {
  return evaluate({{treatment, outcome}}, observed(std::nullopt, observedOutcome))->interval;
}

Interval BoundEngine::term_with_treatment(int outcome, int treatment, int observedTreatment) {
  if (observedTreatment == treatment) {
    throw Error(ErrorCode::UnsupportedQuery, "observed treatment must differ from the term's treatment");
  }
  return evaluate({{treatment, outcome}}, observed(observedTreatment, std::nullopt))->interval;
}

Interval BoundEngine::term_with_both(int outcome, int treatment, int observedOutcome, int observedTreatment) {
  if (observedTreatment == treatment) {
    throw Error(ErrorCode::UnsupportedQuery, "observed treatment must differ from the term's treatment");
  }
  return evaluate({{treatment, outcome}}, observed(observedTreatment, observedOutcome))->interval;
}

namespace {

void require_conjunction(const std::vector<CounterfactualTerm>& terms, std::optional<int> p) {
  if (terms.size() < 2) throw Error(ErrorCode::UnsupportedQuery, "a conjunction needs at least two terms");
  std::vector<int> seen;
  for (const auto& t : terms) seen.push_back(t.treatment);
  if (p) seen.push_back(*p);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw Error(ErrorCode::UnsupportedQuery, "term and evidence treatments must be distinct");
  }
}

}  // namespace

Interval BoundEngine::conjunction(const std::vector<CounterfactualTerm>& terms) {
  require_conjunction(terms, std::nullopt);
  return evaluate(terms)->interval;
}

Interval BoundEngine::conjunction_with_treatment(const std::vector<CounterfactualTerm>& terms, int p) {
  require_conjunction(terms, p);
  return evaluate(terms, observed(p, std::nullopt))->interval;
}

Interval BoundEngine::conjunction_with_outcome(const std::vector<CounterfactualTerm>& terms, int q) {
  require_conjunction(terms, std::nullopt);
  return evaluate(terms, observed(std::nullopt, q))->interval;
}

Interval BoundEngine::conjunction_with_both(const std::vector<CounterfactualTerm>& terms, int p, int q) {
  require_conjunction(terms, p);
  return evaluate(terms, observed(p, q))->interval;
}

namespace {

void check_indices(const Dataset& data, const std::vector<CounterfactualTerm>& terms, const Evidence& e) {
  auto check = [](int value, int limit, const char* axis) {
    if (value < 0 || value >= limit) {
      throw Error(ErrorCode::IndexOutOfRange,
                  fmt::format("{} index {} outside 1..{}", axis, value + 1, limit));
    }
  };
  for (const auto& t : terms) {
    check(t.treatment, data.treatments(), "treatment");
    check(t.outcome, data.outcomes(), "outcome");
  }
  if (e.treatment) check(*e.treatment, data.treatments(), "treatment");
  if (e.outcome) check(*e.outcome, data.outcomes(), "outcome");
}

double evidence_probability(const Dataset& data, const Evidence& e) {
  if (e.treatment && e.outcome) return data.joint(*e.treatment, *e.outcome);
  if (e.treatment) return data.px(*e.treatment);
  if (e.outcome) return data.py(*e.outcome);
  return 1.0;
}

std::string describe(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report.violations) {
    if (!out.empty()) out += "; ";
    if (v.treatment >= 0 && v.outcome >= 0) {
      out += fmt::format("{} at (x{}, y{}) by {:.3g}", to_string(v.kind), v.treatment + 1, v.outcome + 1,
                         v.magnitude);
    } else if (v.treatment >= 0) {
      out += fmt::format("{} at x{} by {:.3g}", to_string(v.kind), v.treatment + 1, v.magnitude);
    } else {
      out += fmt::format("{} by {:.3g}", to_string(v.kind), v.magnitude);
    }
  }
  return out;
}

}  // namespace

BoundResult bound(const Dataset& dataset, const CanonicalQuery& query, const EngineOptions& options) {
  if (options.strict && !dataset.validation().ok()) {
    throw Error(ErrorCode::InconsistentDataset, "dataset fails validation: " + describe(dataset.validation()));
  }
  check_indices(dataset, query.terms, query.evidence);
  if (query.conditioning) check_indices(dataset, {}, *query.conditioning);
  if (query.terms.size() > options.maxTerms) {
    throw Error(ErrorCode::UnsupportedQuery, fmt::format("{} hypothetical terms exceed the limit of {}",
                                                         query.terms.size(), options.maxTerms));
  }
  if (query.kind == QueryKind::Standard) {
    if (query.terms.empty()) throw Error(ErrorCode::UnsupportedQuery, "standard query without terms");
    for (std::size_t t = 1; t < query.terms.size(); ++t) {
      if (query.terms[t].treatment <= query.terms[t - 1].treatment) {
        throw Error(ErrorCode::UnsupportedQuery, "query is not canonical");
      }
    }
    if (query.evidence.treatment && uses_treatment(query.terms, *query.evidence.treatment)) {
      throw Error(ErrorCode::UnsupportedQuery, "query is not canonical");
    }
  }

  BoundResult result;
  result.query = query;

  TracePtr joint;
  if (query.kind == QueryKind::Zero) {
    Node node("0", Theorem::Zero);
    node.lower("impossible", 0.0);
    node.upper("impossible", 0.0);
    joint = node.finish();
    result.statsEvaluated = 1;
  } else {
    BoundEngine engine(dataset, options);
    joint = engine.evaluate(query.terms, query.evidence);
    result.statsEvaluated = engine.evaluated();
  }

  if (!query.conditioning) {
    result.interval = joint->interval;
    result.trace = joint;
    return result;
  }

  const double denominator = evidence_probability(dataset, *query.conditioning);
  if (denominator < kIntervalEpsilon) {
    throw Error(ErrorCode::ZeroEvidenceProbability,
                fmt::format("evidence of {} has probability {}", format_query(query), denominator));
  }
  result.evidenceProbability = denominator;
  Node node(format_query(query), joint->theorem);
  node.lower("joint_over_evidence", joint->interval.lo() / denominator);
  node.upper("joint_over_evidence", joint->interval.hi() / denominator);
  node.child(joint);
  auto root = node.finish();
  result.interval = joint->interval.scaled_down(denominator);
  result.trace = root;
  return result;
}

BoundResult bound(const Dataset& dataset, const Query& query, const EngineOptions& options) {
  check_indices(dataset, query.terms, query.evidence);
  return bound(dataset, canonicalize(query), options);
}

namespace {

nlohmann::ordered_json trace_json(const BoundTrace& trace, std::unordered_set<const BoundTrace*>& expanded) {
  nlohmann::ordered_json out;
  out["query"] = trace.query;
  out["theorem"] = to_string(trace.theorem);
  out["lower_branch"] = trace.lowerBranch;
  out["upper_branch"] = trace.upperBranch;
  out["lo"] = trace.interval.lo();
  out["hi"] = trace.interval.hi();
  if (!expanded.insert(&trace).second) {
    out["repeat"] = true;
    return out;
  }
  auto branches = [](const std::vector<Branch>& list) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& b : list) arr.push_back({{"label", b.label}, {"value", b.value}});
    return arr;
  };
  out["branches"] = {{"lower", branches(trace.lower)}, {"upper", branches(trace.upper)}};
  nlohmann::ordered_json children = nlohmann::ordered_json::array();
  for (const auto& c : trace.children) children.push_back(trace_json(*c, expanded));
  out["children"] = std::move(children);
  return out;
}

}  // namespace

std::string trace_to_json(const BoundTrace& trace, int indent) {
  std::unordered_set<const BoundTrace*> expanded;
  return trace_json(trace, expanded).dump(indent);
}

Query causation_query(CausationKind kind) {
  // x = x1, x' = x2, y = y1, y' = y2 (zero-based 0 and 1)
  switch (kind) {
    case CausationKind::PNS:
      return make_joint({{0, 0}, {1, 1}});
    case CausationKind::PN:
      return Query{{{1, 1}}, observed(0, 0), true};
    case CausationKind::PS:
      return Query{{{0, 0}}, observed(1, 1), true};
  }
  throw Error(ErrorCode::UnsupportedQuery, "unknown causation kind");
}

BoundResult tian_pearl_traced(const Dataset& dataset, CausationKind kind) {
  if (dataset.treatments() != 2 || dataset.outcomes() != 2) {
    throw Error(ErrorCode::NotBinary, fmt::format("closed-form PNS/PN/PS bounds need a 2x2 space, got {}x{}",
                                                  dataset.treatments(), dataset.outcomes()));
  }
  const Query query = causation_query(kind);
  const double yx = dataset.exp(0, 0);     // P(y_x)
  const double yxp = dataset.exp(1, 0);    // P(y_x')
  const double ypxp = dataset.exp(1, 1);   // P(y'_x')
  const double ypx = dataset.exp(0, 1);    // P(y'_x)
  const double xy = dataset.joint(0, 0);   // P(x, y)
  const double xyp = dataset.joint(0, 1);  // P(x, y')
  const double xpy = dataset.joint(1, 0);  // P(x', y)
  const double xpyp = dataset.joint(1, 1); // P(x', y')
  const double y = dataset.py(0);
  const double yp = dataset.py(1);

  BoundResult result;
  result.query = canonicalize(query);
  result.statsEvaluated = 1;

  std::optional<Node> node;
  switch (kind) {
    case CausationKind::PNS:
      node.emplace(format_query(query), Theorem::TianPearlPns);
      node->lower("zero", 0.0);
      node->lower("effect_difference", yx - yxp);
      node->lower("outcome_minus_control", y - yxp);
      node->lower("treated_minus_outcome", yx - y);
      node->upper("treated", yx);
      node->upper("control_complement", ypxp);
      node->upper("agreeing_cells", xy + xpyp);
      node->upper("effect_plus_disagreeing_cells", yx - yxp + xyp + xpy);
      break;
    case CausationKind::PN:
      if (xy < kIntervalEpsilon) {
        throw Error(ErrorCode::ZeroEvidenceProbability, "PN needs P(x, y) > 0");
      }
      result.evidenceProbability = xy;
      node.emplace(format_query(query), Theorem::TianPearlPn);
      node->lower("zero", 0.0);
      node->lower("excess_over_control", (y - yxp) / xy);
      node->upper("one", 1.0);
      node->upper("control_complement_share", (ypxp - xpyp) / xy);
      break;
    case CausationKind::PS:
      if (xpyp < kIntervalEpsilon) {
        throw Error(ErrorCode::ZeroEvidenceProbability, "PS needs P(x', y') > 0");
      }
      result.evidenceProbability = xpyp;
      node.emplace(format_query(query), Theorem::TianPearlPs);
      node->lower("zero", 0.0);
      node->lower("excess_over_treated", (yp - ypx) / xpyp);
      node->upper("one", 1.0);
      node->upper("treated_share", (yx - xy) / xpyp);
      break;
  }
  result.trace = node->finish();
  result.interval = result.trace->interval;
  return result;
}

Interval tian_pearl(const Dataset& dataset, CausationKind kind) {
  return tian_pearl_traced(dataset, kind).interval;
}

}  // namespace pcb
