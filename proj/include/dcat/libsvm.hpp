#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dcat/types.hpp"

namespace dcat {

struct Dataset {
  std::vector<std::vector<std::pair<int, double>>> rows;  // 0-based feature indices
  std::vector<double> labels;                             // in {-1, +1}
  int d = 0;
  int size() const { return static_cast<int>(rows.size()); }
  Mat dense(const std::vector<int>& idx, int d_out = -1) const;
  Vec label_vec(const std::vector<int>& idx) const;
};

// Label rule: "0" -> -1; "+1"/"1"/"-1" as given; other integers by parity
// (even -> +1, odd -> -1).
double map_label(const std::string& token);

Dataset parse_libsvm_text(const std::string& text);
Dataset parse_libsvm(const std::string& path);
std::string format_libsvm(const Dataset& ds);
void write_libsvm(const Dataset& ds, const std::string& path);

// Random permutation, then contiguous shards; the first N mod m shards get one extra row.
std::vector<std::vector<int>> partition(int N, int m, std::uint64_t seed);

}  // namespace dcat
