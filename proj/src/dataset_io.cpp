#include "pcb/dataset_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace pcb {

namespace {

using nlohmann::json;

std::vector<std::string> read_labels(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::InvalidData, std::string("missing '") + key + "'");
  const auto& node = doc.at(key);
  if (!node.is_array()) throw Error(ErrorCode::InvalidData, std::string("'") + key + "' must be an array");
  std::vector<std::string> labels;
  for (const auto& item : node) {
    if (!item.is_string()) {
      throw Error(ErrorCode::InvalidData, std::string("'") + key + "' must hold strings");
    }
    labels.push_back(item.get<std::string>());
  }
  return labels;
}

template <class T>
Table<T> read_matrix(const json& node, const std::string& key) {
  if (!node.is_array()) throw Error(ErrorCode::InvalidData, "'" + key + "' must be an array of rows");
  std::vector<std::vector<T>> rows;
  for (const auto& row : node) {
    if (!row.is_array()) throw Error(ErrorCode::InvalidData, "'" + key + "' rows must be arrays");
    std::vector<T> values;
    for (const auto& cell : row) {
      if constexpr (std::is_integral_v<T>) {
        if (!cell.is_number_integer()) {
          throw Error(ErrorCode::InvalidData, "'" + key + "' must hold integers");
        }
      } else {
        if (!cell.is_number()) throw Error(ErrorCode::InvalidData, "'" + key + "' must hold numbers");
      }
      values.push_back(cell.get<T>());
    }
    rows.push_back(std::move(values));
  }
  return Table<T>::from_rows(rows);
}

/// One distribution given either as counts or as probabilities.
struct MatrixInput {
  std::optional<CountTable> counts;
  std::optional<ProbabilityTable> probs;
};

MatrixInput read_distribution(const json& doc, const std::string& prefix) {
  const std::string countsKey = prefix + "_counts";
  const std::string probsKey = prefix + "_probs";
  const bool hasCounts = doc.contains(countsKey);
  const bool hasProbs = doc.contains(probsKey);
  if (hasCounts == hasProbs) {
    throw Error(ErrorCode::InvalidData,
                "exactly one of '" + countsKey + "' and '" + probsKey + "' is required");
  }
  MatrixInput input;
  if (hasCounts) {
    input.counts = read_matrix<std::int64_t>(doc.at(countsKey), countsKey);
  } else {
    input.probs = read_matrix<double>(doc.at(probsKey), probsKey);
  }
  return input;
}

ProbabilityTable experimental_from_counts(const CountTable& counts) {
  ProbabilityTable table(counts.rows(), counts.cols());
  for (int j = 0; j < counts.rows(); ++j) {
    std::int64_t total = 0;
    for (int i = 0; i < counts.cols(); ++i) {
      if (counts(j, i) < 0) throw Error(ErrorCode::InvalidData, "counts must be nonnegative");
      total += counts(j, i);
    }
    if (total <= 0) {
      throw Error(ErrorCode::ZeroRowTotal, "experimental row " + std::to_string(j + 1) + " is empty");
    }
    for (int i = 0; i < counts.cols(); ++i) {
      table(j, i) = static_cast<double>(counts(j, i)) / static_cast<double>(total);
    }
  }
  return table;
}

ProbabilityTable joint_from_counts(const CountTable& counts) {
  std::int64_t total = 0;
  for (int j = 0; j < counts.rows(); ++j) {
    for (int i = 0; i < counts.cols(); ++i) {
      if (counts(j, i) < 0) throw Error(ErrorCode::InvalidData, "counts must be nonnegative");
      total += counts(j, i);
    }
  }
  if (total <= 0) throw Error(ErrorCode::ZeroGrandTotal, "observational counts sum to zero");
  ProbabilityTable table(counts.rows(), counts.cols());
  for (int j = 0; j < counts.rows(); ++j) {
    for (int i = 0; i < counts.cols(); ++i) {
      table(j, i) = static_cast<double>(counts(j, i)) / static_cast<double>(total);
    }
  }
  return table;
}

template <class T>
json matrix_json(const Table<T>& table) {
  json rows = json::array();
  for (int j = 0; j < table.rows(); ++j) {
    json row = json::array();
    for (int i = 0; i < table.cols(); ++i) row.push_back(table(j, i));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Dataset parse_dataset_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidData, std::string("malformed dataset JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidData, "dataset JSON must be an object");

  ProblemSpace space(read_labels(doc, "treatments"), read_labels(doc, "outcomes"));
  const MatrixInput exp = read_distribution(doc, "experimental");
  const MatrixInput obs = read_distribution(doc, "observational");

  if (exp.counts && obs.counts) return dataset_from_counts(*exp.counts, *obs.counts, space);

  const ProbabilityTable expTable = exp.counts ? experimental_from_counts(*exp.counts) : *exp.probs;
  const ProbabilityTable obsTable = obs.counts ? joint_from_counts(*obs.counts) : *obs.probs;
  return dataset_from_probabilities(expTable, obsTable, space, Tolerances::user_probabilities());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset_json(buffer.str());
}

std::string dataset_to_json(const Dataset& dataset) {
  const auto& space = dataset.space();
  json doc;
  json xs = json::array();
  json ys = json::array();
  for (int j = 0; j < space.treatments(); ++j) xs.push_back(space.treatment_label(j));
  for (int i = 0; i < space.outcomes(); ++i) ys.push_back(space.outcome_label(i));
  doc["treatments"] = xs;
  doc["outcomes"] = ys;
  if (dataset.counts()) {
    doc["experimental_counts"] = matrix_json(dataset.counts()->experimental);
    doc["observational_counts"] = matrix_json(dataset.counts()->observational);
  } else {
    doc["experimental_probs"] = matrix_json(dataset.experimental().table());
    doc["observational_probs"] = matrix_json(dataset.observational().table());
  }
  return doc.dump(2);
}

}  // namespace pcb
