#include "rvs/semantic_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include "rvs/error.hpp"
#include "rvs/ingest.hpp"
#include "rvs/simd/kernels.hpp"

namespace rvs::index {

namespace {

constexpr std::string_view kMagic = "RVSIDX1";

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto out = b_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw ValidationError("truncated index file");
  }
  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  const double na = simd::l2_norm(a);
  const double nb = simd::l2_norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw ValidationError("cosine: zero vector");
  return std::clamp(simd::dot(a, b) / (na * nb), -1.0, 1.0);
}

double cosine(const backend::EmbeddingVector& a, const backend::EmbeddingVector& b) {
  return cosine(a.view(), b.view());
}

SemanticIndex SemanticIndex::build(std::span<const DocInput> docs,
                                   const backend::Backend& backend) {
  std::set<std::string_view> seen;
  for (const auto& d : docs) {
    if (!seen.insert(d.doc_id).second) {
      throw ValidationError("duplicate document id '" + d.doc_id + "'");
    }
  }
  std::vector<std::string> ids;
  std::vector<PayloadKind> kinds;
  std::vector<backend::EmbeddingVector> vectors;
  for (const auto& d : docs) {
    ids.push_back(d.doc_id);
    kinds.push_back(d.kind);
    vectors.push_back(backend.embed(d.text));
  }
  return from_vectors(std::move(ids), std::move(kinds), vectors);
}

SemanticIndex SemanticIndex::from_vectors(std::vector<std::string> ids,
                                          std::vector<PayloadKind> kinds,
                                          std::span<const backend::EmbeddingVector> vectors) {
  if (ids.size() != kinds.size() || ids.size() != vectors.size()) {
    throw ValidationError("index inputs have different lengths");
  }
  std::set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw ValidationError("duplicate document id '" + id + "'");
  }
  SemanticIndex idx;
  idx.dim_ = vectors.empty() ? 0 : vectors.front().dimension();
  idx.matrix_.reserve(idx.dim_ * vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dimension() != idx.dim_ || idx.dim_ == 0) {
      throw ValidationError("document '" + ids[i] + "' has dimension " +
                            std::to_string(vectors[i].dimension()) + ", expected " +
                            std::to_string(idx.dim_));
    }
    std::vector<double> v = vectors[i].values;
    const double norm = simd::l2_norm(v);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ValidationError("document '" + ids[i] + "' has a zero or non-finite vector");
    }
    simd::scale(v, 1.0 / norm);
    idx.matrix_.insert(idx.matrix_.end(), v.begin(), v.end());
  }
  idx.ids_ = std::move(ids);
  idx.kinds_ = std::move(kinds);
  return idx;
}

std::span<const double> SemanticIndex::vector(std::size_t i) const {
  if (i >= ids_.size()) throw std::out_of_range("SemanticIndex::vector");
  return std::span<const double>(matrix_).subspan(i * dim_, dim_);
}

std::vector<double> SemanticIndex::scores(std::span<const double> vector) const {
  if (vector.size() != dim_) {
    throw ValidationError("query dimension " + std::to_string(vector.size()) +
                          " does not match index dimension " + std::to_string(dim_));
  }
  std::vector<double> q(vector.begin(), vector.end());
  const double norm = simd::l2_norm(q);
  if (!(norm > 0.0)) throw ValidationError("query vector is zero");
  simd::scale(q, 1.0 / norm);
  std::vector<double> out(ids_.size());
  simd::dot_rows(matrix_, dim_, q, out);
  for (double& s : out) s = std::clamp(s, -1.0, 1.0);
  return out;
}

std::int64_t rank_key(double score) { return std::llround(score * 1e12); }

std::vector<SearchHit> SemanticIndex::query_vector(std::span<const double> vector,
                                                   std::size_t k) const {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (empty()) throw ValidationError("cannot query an empty index");
  const std::vector<double> s = scores(vector);
  std::vector<std::int64_t> key(s.size());
  std::transform(s.begin(), s.end(), key.begin(), rank_key);
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return key[a] != key[b] ? key[a] > key[b] : ids_[a] < ids_[b];
                    });
  std::vector<SearchHit> hits;
  hits.reserve(take);
  for (std::size_t i = 0; i < take; ++i) hits.push_back({ids_[order[i]], s[order[i]]});
  return hits;
}

std::vector<SearchHit> SemanticIndex::query(std::string_view text, std::size_t k,
                                            const backend::Backend& backend) const {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (empty()) throw ValidationError("cannot query an empty index");
  return query_vector(backend.embed(text).view(), k);
}

std::string SemanticIndex::serialize() const {
  std::string out(kMagic);
  put_u32(out, static_cast<std::uint32_t>(dim_));
  put_u32(out, static_cast<std::uint32_t>(ids_.size()));
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    put_u32(out, static_cast<std::uint32_t>(ids_[i].size()));
    out += ids_[i];
    for (double x : vector(i)) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
  }
  return out;
}

SemanticIndex SemanticIndex::deserialize(std::string_view bytes, PayloadKind kind) {
  Reader r(bytes);
  if (r.bytes(kMagic.size()) != kMagic) throw ValidationError("not an index file (bad magic)");
  const std::uint32_t dim = r.u32();
  const std::uint32_t count = r.u32();
  std::vector<std::string> ids;
  std::vector<backend::EmbeddingVector> vectors;
  for (std::uint32_t i = 0; i < count; ++i) {
    ids.emplace_back(r.bytes(r.u32()));
    backend::EmbeddingVector v;
    v.values.reserve(dim);
    for (std::uint32_t j = 0; j < dim; ++j) {
      v.values.push_back(static_cast<double>(std::bit_cast<float>(r.u32())));
    }
    vectors.push_back(std::move(v));
  }
  if (!r.done()) throw ValidationError("trailing bytes after index data");
  std::vector<PayloadKind> kinds(ids.size(), kind);
  return from_vectors(std::move(ids), std::move(kinds), vectors);
}

void SemanticIndex::save(const std::filesystem::path& path) const {
  ingest::write_file(path, serialize());
}

SemanticIndex SemanticIndex::load(const std::filesystem::path& path, PayloadKind kind) {
  return deserialize(ingest::read_file(path), kind);
}

}  // namespace rvs::index
