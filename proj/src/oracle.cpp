#include "pcb/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <variant>

#include <fmt/format.h>

#include "pcb/simplex.hpp"

namespace pcb {

std::vector<ResponseType> enumerate_response_types(const ProblemSpace& space) {
  const int m = space.treatments();
  const int n = space.outcomes();
  std::vector<ResponseType> out;
  ResponseType current{std::vector<int>(static_cast<std::size_t>(m), 0)};
  for (;;) {
    out.push_back(current);
    int pos = m - 1;
    while (pos >= 0 && current.assignment[pos] == n - 1) {
      current.assignment[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++current.assignment[pos];
  }
  return out;
}

namespace {

// Continued-fraction approximation within 1e-12; exact binary value if none is found.
mpq_class rationalize(double x) {
  if (x == 0.0) return mpq_class(0);
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int step = 0; step < 40; ++step) {
    const double whole = std::floor(rest);
    const mpz_class a(whole);
    mpz_class h2 = a * h1 + h0;
    mpz_class k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    mpq_class approx(h1, k1);
    approx.canonicalize();
    if (std::fabs(approx.get_d() - x) <= 1e-12) return approx;
    const double frac = rest - whole;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
  }
  return mpq_class(x);
}

std::string column_name(const ResponseType& t, int j) {
  std::string out = "q[";
  for (std::size_t k = 0; k < t.assignment.size(); ++k) {
    if (k) out += ",";
    out += fmt::format("y{}", t.assignment[k] + 1);
  }
  return out + fmt::format("][x{}]", j + 1);
}

}  // namespace

RationalData rational_data(const Dataset& dataset) {
  const int m = dataset.treatments();
  const int n = dataset.outcomes();
  RationalData out;
  out.experimental.assign(m, std::vector<mpq_class>(n));
  out.joint.assign(m, std::vector<mpq_class>(n));

  if (const auto& counts = dataset.counts()) {
    mpz_class grand = 0;
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) grand += mpz_class(std::to_string(counts->observational(j, i)));
    }
    for (int j = 0; j < m; ++j) {
      mpz_class row = 0;
      for (int i = 0; i < n; ++i) row += mpz_class(std::to_string(counts->experimental(j, i)));
      for (int i = 0; i < n; ++i) {
        out.experimental[j][i] = mpq_class(mpz_class(std::to_string(counts->experimental(j, i))), row);
        out.experimental[j][i].canonicalize();
        out.joint[j][i] = mpq_class(mpz_class(std::to_string(counts->observational(j, i))), grand);
        out.joint[j][i].canonicalize();
      }
    }
    return out;
  }

  mpq_class total = 0;
  for (int j = 0; j < m; ++j) {
    mpq_class row = 0;
    for (int i = 0; i < n; ++i) {
      out.experimental[j][i] = rationalize(dataset.exp(j, i));
      row += out.experimental[j][i];
      out.joint[j][i] = rationalize(dataset.joint(j, i));
      total += out.joint[j][i];
    }
    if (sgn(row) > 0) {
      for (int i = 0; i < n; ++i) out.experimental[j][i] /= row;
    }
  }
  if (sgn(total) > 0) {
    for (auto& row : out.joint) {
      for (auto& v : row) v /= total;
    }
  }
  return out;
}

std::string write_lp(const LinearProgram& lp) {
  std::string out = fmt::format("variables {}\n", lp.variables.size());
  for (std::size_t v = 0; v < lp.variables.size(); ++v) out += fmt::format("  {} {}\n", v, lp.variables[v]);
  auto sum = [&lp](const std::vector<std::size_t>& columns) {
    if (columns.empty()) return std::string("0");
    std::string s;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) s += " + ";
      s += lp.variables[columns[c]];
    }
    return s;
  };
  out += "objective min/max\n  " + sum(lp.objective) + "\n";
  out += fmt::format("subject to {}\n", lp.constraints.size());
  for (const auto& row : lp.constraints) {
    out += "  " + row.name + ": " + sum(row.columns) + " = " + row.rhs.get_str() + "\n";
  }
  out += "bounds\n  all variables >= 0\n";
  return out;
}

struct ResponseTypeOracle::Impl {
  int m = 0;
  int n = 0;
  std::vector<ResponseType> types;
  RationalData data;
  std::vector<std::string> names;
  std::vector<LinearProgram::Row> rows;
  std::variant<std::monostate, Simplex<mpq_class>, Simplex<double>> solver;

  std::size_t variables() const { return types.size() * static_cast<std::size_t>(m); }
  std::size_t column(std::size_t t, int j) const { return t * static_cast<std::size_t>(m) + j; }

  std::vector<std::size_t> objective(const std::vector<CounterfactualTerm>& terms, const Evidence& e) const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < types.size(); ++t) {
      const auto& a = types[t].assignment;
      bool match = true;
      for (const auto& term : terms) match = match && a[term.treatment] == term.outcome;
      if (!match) continue;
      for (int j = 0; j < m; ++j) {
        if (e.treatment && j != *e.treatment) continue;
        if (e.outcome && a[j] != *e.outcome) continue;
        out.push_back(column(t, j));
      }
    }
    return out;
  }

  mpq_class evidence_probability(const Evidence& e) const {
    if (e.treatment && e.outcome) return data.joint[*e.treatment][*e.outcome];
    mpq_class sum = 0;
    if (e.treatment) {
      for (int i = 0; i < n; ++i) sum += data.joint[*e.treatment][i];
    } else if (e.outcome) {
      for (int j = 0; j < m; ++j) sum += data.joint[j][*e.outcome];
    } else {
      sum = 1;
    }
    return sum;
  }

  template <class S>
  static std::vector<S> dense(const std::vector<std::size_t>& columns, std::size_t width) {
    std::vector<S> out(width, S(0));
    for (std::size_t c : columns) out[c] = S(1);
    return out;
  }
};

ResponseTypeOracle::ResponseTypeOracle(const Dataset& dataset, OracleOptions options)
    : impl_(std::make_unique<Impl>()) {
  Impl& d = *impl_;
  d.m = dataset.treatments();
  d.n = dataset.outcomes();

  // n^m * m without materialising anything first.
  double count = static_cast<double>(d.m);
  for (int j = 0; j < d.m; ++j) count *= d.n;
  if (count > static_cast<double>(options.maxVariables)) {
    throw Error(ErrorCode::BudgetExceeded, fmt::format("{}x{} space needs {} LP variables, budget is {}", d.m,
                                                       d.n, count, options.maxVariables));
  }

  d.types = enumerate_response_types(dataset.space());
  d.data = rational_data(dataset);
  for (std::size_t t = 0; t < d.types.size(); ++t) {
    for (int j = 0; j < d.m; ++j) d.names.push_back(column_name(d.types[t], j));
  }

  for (int j = 0; j < d.m; ++j) {
    for (int i = 0; i < d.n; ++i) {
      LinearProgram::Row row{fmt::format("obs(x{},y{})", j + 1, i + 1), {}, d.data.joint[j][i]};
      for (std::size_t t = 0; t < d.types.size(); ++t) {
        if (d.types[t].assignment[j] == i) row.columns.push_back(d.column(t, j));
      }
      d.rows.push_back(std::move(row));
    }
  }
  for (int j = 0; j < d.m; ++j) {
    for (int i = 0; i < d.n; ++i) {
      LinearProgram::Row row{fmt::format("exp(x{},y{})", j + 1, i + 1), {}, d.data.experimental[j][i]};
      for (std::size_t t = 0; t < d.types.size(); ++t) {
        if (d.types[t].assignment[j] != i) continue;
        for (int jp = 0; jp < d.m; ++jp) row.columns.push_back(d.column(t, jp));
      }
      d.rows.push_back(std::move(row));
    }
  }
  {
    LinearProgram::Row row{"total", {}, mpq_class(1)};
    for (std::size_t c = 0; c < d.variables(); ++c) row.columns.push_back(c);
    d.rows.push_back(std::move(row));
  }

  const std::size_t width = d.variables();
  if (width <= options.exactVariables) {
    std::vector<std::vector<mpq_class>> a;
    std::vector<mpq_class> b;
    for (const auto& row : d.rows) {
      a.push_back(Impl::dense<mpq_class>(row.columns, width));
      b.push_back(row.rhs);
    }
    d.solver.emplace<Simplex<mpq_class>>(a, b);
  } else {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (const auto& row : d.rows) {
      a.push_back(Impl::dense<double>(row.columns, width));
      b.push_back(row.rhs.get_d());
    }
    d.solver.emplace<Simplex<double>>(a, b);
  }
}

ResponseTypeOracle::~ResponseTypeOracle() = default;
ResponseTypeOracle::ResponseTypeOracle(ResponseTypeOracle&&) noexcept = default;
ResponseTypeOracle& ResponseTypeOracle::operator=(ResponseTypeOracle&&) noexcept = default;

bool ResponseTypeOracle::feasible() const noexcept {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) {
          return false;
        } else {
          return s.feasible();
        }
      },
      impl_->solver);
}

bool ResponseTypeOracle::exact() const noexcept {
  return std::holds_alternative<Simplex<mpq_class>>(impl_->solver);
}

std::size_t ResponseTypeOracle::variables() const noexcept { return impl_->variables(); }

LinearProgram ResponseTypeOracle::program(const CanonicalQuery& query) const {
  LinearProgram lp;
  lp.variables = impl_->names;
  lp.constraints = impl_->rows;
  if (query.kind != QueryKind::Zero) lp.objective = impl_->objective(query.terms, query.evidence);
  return lp;
}

Interval ResponseTypeOracle::bounds(const CanonicalQuery& query) const {
  const Impl& d = *impl_;
  if (!feasible()) {
    throw Error(ErrorCode::Infeasible, "dataset admits no joint distribution of response types and treatment");
  }
  auto check = [](int value, int limit) {
    if (value < 0 || value >= limit) throw Error(ErrorCode::IndexOutOfRange, "query index outside the space");
  };
  for (const auto& t : query.terms) {
    check(t.treatment, d.m);
    check(t.outcome, d.n);
  }
  if (query.evidence.treatment) check(*query.evidence.treatment, d.m);
  if (query.evidence.outcome) check(*query.evidence.outcome, d.n);

  double lo = 0.0;
  double hi = 0.0;
  mpq_class denominator = 1;
  if (query.conditioning) {
    denominator = d.evidence_probability(*query.conditioning);
    if (denominator.get_d() < kIntervalEpsilon) {
      throw Error(ErrorCode::ZeroEvidenceProbability, "conditioning evidence has probability zero");
    }
  }
  if (query.kind != QueryKind::Zero) {
    const auto columns = d.objective(query.terms, query.evidence);
    if (const auto* exactSolver = std::get_if<Simplex<mpq_class>>(&d.solver)) {
      const auto c = Impl::dense<mpq_class>(columns, d.variables());
      mpq_class min = exactSolver->minimize(c) / denominator;
      mpq_class max = exactSolver->maximize(c) / denominator;
      lo = min.get_d();
      hi = max.get_d();
    } else {
      const auto& floatSolver = std::get<Simplex<double>>(d.solver);
      const auto c = Impl::dense<double>(columns, d.variables());
      lo = floatSolver.minimize(c) / denominator.get_d();
      hi = floatSolver.maximize(c) / denominator.get_d();
    }
  }
  return Interval::clamped(lo, hi);
}

Interval tight_bounds(const Dataset& dataset, const CanonicalQuery& query, OracleOptions options) {
  return ResponseTypeOracle(dataset, options).bounds(query);
}

bool feasible(const Dataset& dataset, OracleOptions options) {
  return ResponseTypeOracle(dataset, options).feasible();
}

}  // namespace pcb
