#pragma once

// Independent restatements of the stub embedding and of cosine similarity in
// extended precision, used to check the library's numbers.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

/// Sparse bucket -> signed count, before normalization.
std::map<std::size_t, long double> stub_features(std::string_view text, std::size_t dim = 256);

/// Cosine of two stub embeddings computed from their sparse features.
long double stub_cosine(std::string_view a, std::string_view b, std::size_t dim = 256);

long double cosine(const std::vector<double>& a, const std::vector<double>& b);

struct Ranked {
  std::size_t index;
  long double score;
};

/// Every row scored with cosine(), sorted by descending score rounded to 12
/// decimals, then by ascending id.
std::vector<Ranked> brute_force(const std::vector<std::vector<double>>& rows,
                                const std::vector<std::string>& ids,
                                const std::vector<double>& query);

}  // namespace oracle
