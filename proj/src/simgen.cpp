#include "pcb/simgen.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "pcb/engine.hpp"

namespace pcb {

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

double SampleStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Query simulation_query() { return make_joint({{0, 0}, {1, 0}}); }

namespace {

struct Draw {
  std::array<double, 9> f{};
  ProbabilityTable exp{2, 3};
  ProbabilityTable joint{2, 3};
};

std::optional<Draw> draw(SampleStream& rng) {
  Draw d;
  std::array<double, 9> a{};
  for (int i = 0; i < 8; ++i) a[i] = rng.uniform();
  a[8] = 1.0;
  std::sort(a.begin(), a.end());
  d.f[0] = a[0];
  for (int i = 1; i < 9; ++i) d.f[i] = a[i] - a[i - 1];
  const auto& f = d.f;

  d.exp(0, 0) = f[0] + f[1] + f[2];
  d.exp(0, 1) = f[3] + f[4] + f[5];
  d.exp(0, 2) = f[6] + f[7] + f[8];
  d.exp(1, 0) = f[0] + f[3] + f[6];
  d.exp(1, 1) = f[1] + f[4] + f[7];
  d.exp(1, 2) = f[2] + f[5] + f[8];

  auto& J = d.joint;
  J(0, 0) = rng.uniform(0.0, d.exp(0, 0));
  J(0, 1) = rng.uniform(0.0, d.exp(0, 1));
  // The second cap uses P(y1_x2), exactly as the generator is stated.
  const double px1 = rng.uniform(J(0, 0) + J(0, 1),
                                 std::min(J(0, 0) + 1.0 - d.exp(0, 0), J(0, 1) + 1.0 - d.exp(1, 0)));
  J(0, 2) = px1 - J(0, 0) - J(0, 1);
  const double px2 = 1.0 - px1;
  J(1, 0) = rng.uniform(0.0, std::min(d.exp(1, 0), px2));
  J(1, 1) = rng.uniform(0.0, std::min(d.exp(1, 1), px2 - J(1, 0)));
  J(1, 2) = px2 - J(1, 0) - J(1, 1);

  const double px[2] = {px1, px2};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (d.exp(j, i) < J(j, i) || d.exp(j, i) > J(j, i) + 1.0 - px[j]) return std::nullopt;
    }
  }
  // Not part of the stated check, but a negative cell is not a distribution.
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (J(j, i) < 0.0) return std::nullopt;
    }
  }
  return d;
}

}  // namespace

SimulationRecord generate_sample(SampleStream& stream) {
  static const Query query = simulation_query();
  for (std::size_t attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    std::optional<Draw> d = draw(stream);
    if (!d) continue;
    Dataset dataset = dataset_from_probabilities(d->exp, d->joint, ProblemSpace(2, 3), Tolerances::counts());
    const Interval iv = bound(dataset, query).interval;
    SimulationRecord r{0, d->f, std::move(dataset), iv};
    r.realValue = d->f[0];
    r.gap = iv.width();
    r.midpoint = iv.midpoint();
    r.contained = iv.contains(r.realValue, kIntervalEpsilon);
    r.attempts = attempt;
    return r;
  }
  throw Error(ErrorCode::BudgetExceeded, fmt::format("no acceptable sample after {} draws", kMaxAttempts));
}

SimulationSummary summarize(std::vector<SimulationRecord> records) {
  SimulationSummary s;
  s.numSamples = records.size();
  if (!records.empty()) {
    std::vector<double> gaps;
    std::size_t hits = 0;
    for (const auto& r : records) {
      gaps.push_back(r.gap);
      hits += r.contained ? 1 : 0;
    }
    std::sort(gaps.begin(), gaps.end());
    double total = 0.0;
    for (double g : gaps) total += g;
    s.averageGap = total / static_cast<double>(records.size());
    s.containmentRate = static_cast<double>(hits) / static_cast<double>(records.size());
  }
  s.records = std::move(records);
  return s;
}

SimulationSummary run_simulation(std::size_t numSamples, std::uint64_t seed, SimulationOptions options) {
  if (numSamples == 0) throw Error(ErrorCode::InvalidData, "number of samples must be at least 1");
  std::vector<std::optional<SimulationRecord>> slots(numSamples);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < numSamples; k += step) {
      SampleStream stream(seed, k);
      slots[k] = generate_sample(stream);
      slots[k]->id = k + 1;
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(numSamples)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : failures) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<SimulationRecord> records;
  records.reserve(numSamples);
  for (auto& s : slots) records.push_back(std::move(*s));
  SimulationSummary summary = summarize(std::move(records));
  if (!options.keepRecords) summary.records.clear();
  return summary;
}

void export_csv(const std::vector<SimulationRecord>& records, std::ostream& out) {
  if (records.empty()) throw Error(ErrorCode::EmptySequence, "no simulation records to export");
  out << "sample_id,lower,upper,midpoint,real_value,gap,contained\n";
  for (const auto& r : records) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.id, r.interval.lo(), r.interval.hi(),
                       r.midpoint, r.realValue, r.gap, r.contained ? 1 : 0);
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing simulation CSV");
}

void export_csv(const std::vector<SimulationRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  export_csv(records, out);
}

}  // namespace pcb
