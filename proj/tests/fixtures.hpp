#pragma once

#include "pcb/model.hpp"

namespace pcb::testing {

inline Dataset treatment_data() {
  return dataset_from_counts(CountTable::from_rows({{80, 7, 213}, {184, 29, 87}, {87, 189, 24}}),
                             CountTable::from_rows({{238, 20, 7}, {10, 77, 259}, {147, 72, 70}}), ProblemSpace(3, 3));
}

inline Dataset institute_data() {
  return dataset_from_counts(CountTable::from_rows({{53, 247}, {269, 31}, {234, 66}, {151, 149}}),
                             CountTable::from_rows({{92, 58}, {55, 118}, {24, 231}, {599, 23}}), ProblemSpace(4, 2));
}

inline Dataset vaccine_data() {
  return dataset_from_counts(CountTable::from_rows({{205, 46, 343, 6}, {27, 122, 87, 364}}),
                             CountTable::from_rows({{6, 74, 632, 5}, {52, 243, 147, 41}}), ProblemSpace(2, 4));
}

}  // namespace pcb::testing
