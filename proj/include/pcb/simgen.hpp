#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <vector>

#include "pcb/frechet.hpp"
#include "pcb/model.hpp"
#include "pcb/query.hpp"

namespace pcb {

/// Random stream for one sample: mt19937_64 seeded from seed_seq{seed, index}
/// (each split into 32-bit halves). Sample i draws the same numbers whether
/// the run is serial or threaded.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  /// 53 random bits scaled into [0, 1).
  double uniform();
  /// a + (b - a) * uniform(); b < a is allowed and mirrors the interval.
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

struct SimulationRecord {
  std::size_t id = 0;
  /// f[3 * a + b] = P(Y_{x1} = y_{a+1}, Y_{x2} = y_{b+1}).
  std::array<double, 9> fractions{};
  Dataset dataset;
  Interval interval;
  double realValue = 0.0;
  double gap = 0.0;
  double midpoint = 0.0;
  bool contained = false;
  /// Draws consumed before this one was accepted (1 = first try).
  std::size_t attempts = 0;
};

/// P(y1_x1, y1_x2), the quantity the study bounds.
Query simulation_query();

inline constexpr std::size_t kMaxAttempts = 1000000;

/// One accepted draw of the m = 2, n = 3 generator, bounded by the engine.
/// Throws BudgetExceeded after kMaxAttempts rejected draws.
SimulationRecord generate_sample(SampleStream& stream);

struct SimulationOptions {
  unsigned threads = 1;
  bool keepRecords = true;
};

struct SimulationSummary {
  std::size_t numSamples = 0;
  double averageGap = 0.0;
  double containmentRate = 0.0;
  std::vector<SimulationRecord> records;
};

inline constexpr std::uint64_t kDefaultSeed = 20240501;

SimulationSummary run_simulation(std::size_t numSamples, std::uint64_t seed = kDefaultSeed,
                                 SimulationOptions options = {});

/// Mean gap and containment share; independent of record order.
SimulationSummary summarize(std::vector<SimulationRecord> records);

/// Header sample_id,lower,upper,midpoint,real_value,gap,contained; %.17g numbers.
void export_csv(const std::vector<SimulationRecord>& records, std::ostream& out);
void export_csv(const std::vector<SimulationRecord>& records, const std::filesystem::path& path);

}  // namespace pcb
