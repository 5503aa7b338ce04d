#include "pcb/query.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace pcb {

const char* to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::Zero: return "Zero";
    case QueryKind::ExactObservational: return "ExactObservational";
    case QueryKind::Standard: return "Standard";
  }
  return "Unknown";
}

namespace {

enum class EventKind { Term, Treatment, Outcome };

struct Event {
  EventKind kind;
  int treatment = -1;
  int outcome = -1;
  std::size_t position = 0;
};

class QueryParser {
 public:
  QueryParser(std::string_view text, const ProblemSpace& space) : text_(text), space_(space) {}

  Query parse() {
    skip_space();
    if (at_end()) throw SyntaxError(pos_, "empty query");
    expect('P');
    expect('(');
    std::vector<Event> left = events();
    std::vector<Event> right;
    bool bar = false;
    if (peek() == '|') {
      ++pos_;
      bar = true;
      right = events();
    }
    expect(')');
    skip_space();
    if (!at_end()) throw SyntaxError(pos_, "unexpected trailing input");
    return build(left, right, bar);
  }

 private:
  std::vector<Event> events() {
    std::vector<Event> out;
    out.push_back(event());
    while (peek() == ',') {
      ++pos_;
      out.push_back(event());
    }
    return out;
  }

  Event event() {
    skip_space();
    const std::size_t start = pos_;
    const char c = peek();
    if (c == 'x') {
      ++pos_;
      return Event{EventKind::Treatment, index(space_.treatments(), "treatment"), -1, start};
    }
    if (c == 'y') {
      ++pos_;
      const int outcome = index(space_.outcomes(), "outcome");
      if (peek() == '_') {
        ++pos_;
        expect('x');
        const int treatment = index(space_.treatments(), "treatment");
        return Event{EventKind::Term, treatment, outcome, start};
      }
      return Event{EventKind::Outcome, -1, outcome, start};
    }
    if (at_end()) throw SyntaxError(pos_, "expected an event, found end of input");
    throw SyntaxError(pos_, std::string("expected an event, found '") + c + "'");
  }

  /// Parses a 1-based index and returns it zero-based.
  int index(int limit, const char* axis) {
    skip_space();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::IndexOutOfRange, std::string(axis) + " index too large");
      }
      ++pos_;
    }
    if (pos_ == start) throw SyntaxError(pos_, std::string("expected ") + axis + " index");
    if (value < 1 || value > limit) {
      throw Error(ErrorCode::IndexOutOfRange, std::string(axis) + " index " + std::to_string(value) +
                                                  " outside 1.." + std::to_string(limit));
    }
    return static_cast<int>(value) - 1;
  }

  Query build(const std::vector<Event>& left, const std::vector<Event>& right, bool bar) {
    Query query;
    query.conditional = bar;
    auto add_evidence = [&](const Event& e) {
      if (e.kind == EventKind::Treatment) {
        if (query.evidence.treatment) {
          throw Error(ErrorCode::UnsupportedQuery, "at most one observed treatment event is supported");
        }
        query.evidence.treatment = e.treatment;
      } else {
        if (query.evidence.outcome) {
          throw Error(ErrorCode::UnsupportedQuery, "at most one observed outcome event is supported");
        }
        query.evidence.outcome = e.outcome;
      }
    };
    for (const Event& e : left) {
      if (e.kind == EventKind::Term) {
        query.terms.push_back({e.treatment, e.outcome});
      } else if (bar) {
        throw Error(ErrorCode::UnsupportedQuery,
                    "observed events must follow '|' in a conditional query (position " +
                        std::to_string(e.position) + ")");
      } else {
        add_evidence(e);
      }
    }
    for (const Event& e : right) {
      if (e.kind == EventKind::Term) {
        throw Error(ErrorCode::UnsupportedQuery,
                    "conditioning on counterfactual events is not supported (position " +
                        std::to_string(e.position) + ")");
      }
      add_evidence(e);
    }
    return query;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return at_end() ? '\0' : text_[pos_];
  }

  void expect(char c) {
    if (peek() != c) {
      if (at_end()) throw SyntaxError(pos_, std::string("expected '") + c + "', found end of input");
      throw SyntaxError(pos_, std::string("expected '") + c + "', found '" + text_[pos_] + "'");
    }
    ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }

  std::string_view text_;
  const ProblemSpace& space_;
  std::size_t pos_ = 0;
};

std::string event_list(const std::vector<CounterfactualTerm>& terms, const Evidence& evidence) {
  std::string out;
  auto append = [&out](const std::string& item) {
    if (!out.empty()) out += ", ";
    out += item;
  };
  for (const auto& t : terms) {
    append("y" + std::to_string(t.outcome + 1) + "_x" + std::to_string(t.treatment + 1));
  }
  if (evidence.treatment) append("x" + std::to_string(*evidence.treatment + 1));
  if (evidence.outcome) append("y" + std::to_string(*evidence.outcome + 1));
  return out;
}

}  // namespace

Query parse_query(std::string_view text, const ProblemSpace& space) {
  return QueryParser(text, space).parse();
}

CanonicalQuery canonicalize(const Query& query) {
  if (query.conditional && query.evidence.empty()) {
    throw Error(ErrorCode::UnsupportedQuery, "a conditional query needs observed evidence");
  }

  CanonicalQuery out;
  if (query.conditional) out.conditioning = query.evidence;

  auto zero = [&out]() {
    out.kind = QueryKind::Zero;
    out.terms.clear();
    out.evidence = {};
    return out;
  };

  std::vector<CounterfactualTerm> terms = query.terms;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  // Y_{x_j} has a single value per unit.
  for (std::size_t t = 1; t < terms.size(); ++t) {
    if (terms[t].treatment == terms[t - 1].treatment) return zero();
  }

  Evidence evidence = query.evidence;
  if (evidence.treatment) {
    const int p = *evidence.treatment;
    auto hit = std::find_if(terms.begin(), terms.end(),
                            [p](const CounterfactualTerm& t) { return t.treatment == p; });
    if (hit != terms.end()) {
      // Consistency: X = x_p makes Y_{x_p} the factual Y.
      if (evidence.outcome && *evidence.outcome != hit->outcome) return zero();
      evidence.outcome = hit->outcome;
      terms.erase(hit);
    }
  }

  out.evidence = evidence;
  out.terms = std::move(terms);
  out.kind = out.terms.empty() ? QueryKind::ExactObservational : QueryKind::Standard;
  return out;
}

std::string format_query(const Query& query) {
  if (query.conditional) {
    return "P(" + event_list(query.terms, {}) + " | " + event_list({}, query.evidence) + ")";
  }
  return "P(" + event_list(query.terms, query.evidence) + ")";
}

std::string format_query(const CanonicalQuery& query) {
  std::string joint;
  if (query.kind == QueryKind::Zero) {
    joint = "0";
  } else {
    joint = event_list(query.terms, query.evidence);
  }
  if (query.conditioning) {
    return "P(" + joint + " | " + event_list({}, *query.conditioning) + ")";
  }
  return query.kind == QueryKind::Zero ? joint : "P(" + joint + ")";
}

Query make_joint(std::vector<CounterfactualTerm> terms, Evidence evidence) {
  return Query{std::move(terms), evidence, false};
}

}  // namespace pcb
