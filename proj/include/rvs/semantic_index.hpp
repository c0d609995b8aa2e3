#pragma once

// Exact cosine top-k search over embedded documents.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvs/backend.hpp"

namespace rvs::index {

enum class PayloadKind { Feature, ReleaseEntry };

struct DocInput {
  std::string doc_id;
  std::string text;
  PayloadKind kind = PayloadKind::Feature;
};

struct SearchHit {
  std::string doc_id;
  double score = 0.0;
  bool operator==(const SearchHit&) const = default;
};

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Throws ValidationError on a
/// dimension mismatch or a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const backend::EmbeddingVector& a, const backend::EmbeddingVector& b);

/// Immutable after construction; concurrent queries are safe. Vectors are
/// stored unit-normalized in one row-major matrix so a query is a single
/// pass of dot products.
/// Similarity rounded to 12 decimals. Rankings compare these keys so that
/// rounding noise cannot reorder items whose exact similarities coincide.
std::int64_t rank_key(double score);

class SemanticIndex {
 public:
  /// Throws ValidationError on duplicate ids; backend errors propagate.
  static SemanticIndex build(std::span<const DocInput> docs, const backend::Backend& backend);

  /// Throws ValidationError on duplicate ids, mixed dimensions or zero vectors.
  static SemanticIndex from_vectors(std::vector<std::string> ids, std::vector<PayloadKind> kinds,
                                    std::span<const backend::EmbeddingVector> vectors);

  /// Hits sorted by descending score, ties by ascending doc id; at most k.
  /// Scores with equal rank_key count as tied.
  /// Throws ValidationError when k == 0 or the index is empty.
  std::vector<SearchHit> query(std::string_view text, std::size_t k,
                               const backend::Backend& backend) const;
  std::vector<SearchHit> query_vector(std::span<const double> vector, std::size_t k) const;

  /// Cosine of `vector` against every document, in index order.
  std::vector<double> scores(std::span<const double> vector) const;

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::size_t dimension() const { return dim_; }
  const std::string& doc_id(std::size_t i) const { return ids_.at(i); }
  PayloadKind kind(std::size_t i) const { return kinds_.at(i); }
  std::span<const double> vector(std::size_t i) const;

  /// Binary layout, little-endian: "RVSIDX1", u32 dimension, u32 count, then
  /// per document u32 id length, id bytes and `dimension` f32 entries. Kinds
  /// are not stored; load() assigns one kind to every document.
  std::string serialize() const;
  static SemanticIndex deserialize(std::string_view bytes, PayloadKind kind);
  void save(const std::filesystem::path& path) const;
  static SemanticIndex load(const std::filesystem::path& path, PayloadKind kind);

 private:
  std::vector<std::string> ids_;
  std::vector<PayloadKind> kinds_;
  std::vector<double> matrix_;
  std::size_t dim_ = 0;
};

}  // namespace rvs::index
