#pragma once

#include <filesystem>
#include <string>

#include "pcb/model.hpp"

namespace pcb {

/// Reads the dataset JSON schema:
///
///   { "treatments": [..], "outcomes": [..],
///     "experimental_counts" | "experimental_probs": [[..]],
///     "observational_counts" | "observational_probs": [[..]] }
///
/// Exactly one of the counts/probs forms must be present per distribution.
/// Count-only files get the strict count tolerances and keep their counts.
Dataset parse_dataset_json(const std::string& text);
Dataset load_dataset(const std::filesystem::path& path);

/// Writes probabilities (or counts when the dataset carries them).
std::string dataset_to_json(const Dataset& dataset);

}  // namespace pcb
