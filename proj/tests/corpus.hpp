#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pcb/model.hpp"
#include "pcb/query.hpp"

namespace pcb::testing {

// Count datasets built from integer masses on (response type, observed treatment)
// pairs, so every one is jointly consistent and exact as rationals.
Dataset random_dataset(std::mt19937_64& rng, int m, int n);

// m, n drawn from {2, 3}.
Dataset random_small_dataset(std::mt19937_64& rng);

// Distinct term treatments, 1..min(3, m) terms, evidence variant chosen by `variant`:
// 0 none, 1 x_p, 2 y_q, 3 x_p and y_q. Variants needing a free treatment fall back
// to y_q evidence when none is left.
Query random_query(std::mt19937_64& rng, const ProblemSpace& space, int variant, bool conditional = false);

struct CorpusEntry {
  Dataset dataset;
  std::vector<Query> queries;
};

// The fixed corpus shared by the property tests.
std::vector<CorpusEntry> corpus(std::size_t datasets = 200, std::uint64_t seed = 7);

}  // namespace pcb::testing
