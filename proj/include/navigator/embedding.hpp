#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "navigator/templating.hpp"

namespace navigator {

inline constexpr std::size_t kDefaultEmbeddingDim = 256;

/// Unit-norm vector, or all zeros for text without tokens.
struct EmbeddingVector {
    std::vector<float> values;

    std::size_t dim() const { return values.size(); }
    std::span<const float> view() const { return values; }
};

/// Words (identifier runs) and single punctuation marks; multi-byte symbols
/// such as `⁻¹`, `⊢` and `←` are tokens of their own.
std::vector<std::string> embedding_tokens(std::string_view text);

/// Signed feature hashing: each token adds ±1 to one bucket, the bucket and
/// the sign coming from two independent 64-bit hashes; the sum is
/// L2-normalized. Deterministic across processes and platforms.
EmbeddingVector embed(std::string_view text, std::size_t dim = kDefaultEmbeddingDim);

/// Cosine similarity in double precision; 0 when either side is zero.
double cosine(std::span<const float> a, std::span<const float> b);

/// Scales to unit L2 norm in place; zero vectors are left alone.
void normalize(std::span<float> v);

/// Externally computed vectors keyed by template text.
using EmbeddingTable = std::unordered_map<std::string, std::vector<float>>;

/// `{"text":"…","vector":[…]}` per line. All vectors must share a dimension.
EmbeddingTable read_embedding_table(const std::filesystem::path& path);

struct SearchHit {
    std::size_t entry;
    float similarity;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Exact nearest-template search by cosine similarity over a flat,
/// row-major matrix of unit vectors. Immutable after construction, so
/// concurrent queries need no locking.
class TemplateIndex {
public:
    TemplateIndex() = default;

    /// Embeds each template with embed(), or takes its vector from `table`
    /// when given (every template must be present; the dimension follows
    /// the table). Throws std::invalid_argument on duplicate template text,
    /// a missing vector, or mixed dimensions.
    static TemplateIndex build(std::vector<TacticTemplate> templates, const EmbeddingTable* table = nullptr,
                               std::size_t dim = kDefaultEmbeddingDim);

    std::size_t size() const { return templates_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return templates_.empty(); }
    const TacticTemplate& entry(std::size_t i) const { return templates_[i]; }
    std::span<const float> vector(std::size_t i) const { return {matrix_.data() + i * dim_, dim_}; }

    /// Top min(k, size) entries by similarity, descending, ties by
    /// insertion order. `query` is normalized before scoring.
    std::vector<SearchHit> query_vector(std::span<const float> query, std::size_t k) const;
    std::vector<SearchHit> query(std::string_view state_text, std::size_t k = 100) const;

    /// Same results as query_vector; scores partitions on `threads` threads.
    std::vector<SearchHit> query_vector_partitioned(std::span<const float> query, std::size_t k,
                                                    std::size_t threads) const;

    /// Binary layout: magic `NAVIDX1` (7 bytes), dim and count as
    /// little-endian u32, then per entry a u32 byte length, the UTF-8
    /// template text and dim little-endian f32 values.
    void save(const std::filesystem::path& path) const;
    static TemplateIndex load(const std::filesystem::path& path);

    /// Builds an index over the given rows as-is (rows are normalized).
    static TemplateIndex from_rows(std::vector<TacticTemplate> templates, std::vector<float> matrix, std::size_t dim);

private:
    std::vector<TacticTemplate> templates_;
    std::vector<float> matrix_;
    std::size_t dim_ = kDefaultEmbeddingDim;
};

/// Ranks `scores` (one per entry) into the top-k order used by the index.
std::vector<SearchHit> top_k(std::span<const float> scores, std::size_t k);

}  // namespace navigator
