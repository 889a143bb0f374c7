#include "navigator/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include <json.hpp>

#include "navigator/kernels.hpp"
#include "navigator/text.hpp"
#include "navigator/utf8.hpp"

namespace navigator {

namespace {

constexpr std::string_view kCompoundSymbols[] = {"⁻¹", ":="};

bool is_word_char(std::string_view s, std::size_t at, std::size_t& width) {
    const auto c = static_cast<unsigned char>(s[at]);
    if (c < 0x80) {
        width = 1;
        return std::isalnum(c) || c == '_' || c == '\'';
    }
    const auto cp = utf8::decode(s, at, width);
    return cp && utf8::is_identifier_letter(*cp);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated index file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

constexpr char kMagic[7] = {'N', 'A', 'V', 'I', 'D', 'X', '1'};

}  // namespace

std::vector<std::string> embedding_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text::is_space(text[i])) {
            ++i;
            continue;
        }
        bool compound = false;
        for (auto sym : kCompoundSymbols) {
            if (text::starts_with(text.substr(i), sym)) {
                out.emplace_back(sym);
                i += sym.size();
                compound = true;
                break;
            }
        }
        if (compound) continue;
        std::size_t w = 1;
        if (is_word_char(text, i, w)) {
            const std::size_t start = i;
            while (i < text.size() && is_word_char(text, i, w)) i += w;
            out.emplace_back(text.substr(start, i - start));
            continue;
        }
        utf8::decode(text, i, w);
        out.emplace_back(text.substr(i, w));
        i += w;
    }
    return out;
}

EmbeddingVector embed(std::string_view text, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
    EmbeddingVector v{std::vector<float>(dim, 0.f)};
    for (const auto& tok : embedding_tokens(text)) {
        const std::uint64_t bucket = splitmix(fnv1a(tok, 0xcbf29ce484222325ULL)) % dim;
        const bool negative = (splitmix(fnv1a(tok, 0x84222325cbf29ce4ULL) ^ 0x5bd1e995ULL) >> 63) != 0;
        v.values[bucket] += negative ? -1.f : 1.f;
    }
    normalize(v.values);
    return v;
}

void normalize(std::span<float> v) {
    double sq = 0.0;
    for (float x : v) sq += static_cast<double>(x) * x;
    if (sq == 0.0) return;
    const double inv = 1.0 / std::sqrt(sq);
    for (float& x : v) x = static_cast<float>(x * inv);
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine of vectors with different dimensions");
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += static_cast<double>(a[i]) * b[i];
        aa += static_cast<double>(a[i]) * a[i];
        bb += static_cast<double>(b[i]) * b[i];
    }
    if (aa == 0 || bb == 0) return 0.0;
    return ab / std::sqrt(aa * bb);
}

EmbeddingTable read_embedding_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embedding table " + path.string());
    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            auto vec = j.at("vector").get<std::vector<float>>();
            if (vec.empty()) throw std::invalid_argument("empty vector");
            if (dim == 0) dim = vec.size();
            if (vec.size() != dim) throw std::invalid_argument("dimension mismatch");
            table[j.at("text").get<std::string>()] = std::move(vec);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// TemplateIndex

TemplateIndex TemplateIndex::from_rows(std::vector<TacticTemplate> templates, std::vector<float> matrix,
                                       std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("index dimension must be positive");
    if (matrix.size() != templates.size() * dim) throw std::invalid_argument("matrix size does not match entries");
    std::set<std::string_view> seen;
    for (const auto& t : templates)
        if (!seen.insert(t.text).second) throw std::invalid_argument("duplicate template '" + t.text + "'");
    TemplateIndex index;
    index.dim_ = dim;
    index.templates_ = std::move(templates);
    index.matrix_ = std::move(matrix);
    for (std::size_t r = 0; r < index.templates_.size(); ++r)
        normalize(std::span<float>(index.matrix_.data() + r * dim, dim));
    return index;
}

TemplateIndex TemplateIndex::build(std::vector<TacticTemplate> templates, const EmbeddingTable* table,
                                   std::size_t dim) {
    if (table && !table->empty()) dim = table->begin()->second.size();
    std::vector<float> matrix;
    matrix.reserve(templates.size() * dim);
    for (const auto& t : templates) {
        if (table) {
            const auto it = table->find(t.text);
            if (it == table->end()) throw std::invalid_argument("no external vector for template '" + t.text + "'");
            if (it->second.size() != dim) throw std::invalid_argument("external vector dimension mismatch");
            matrix.insert(matrix.end(), it->second.begin(), it->second.end());
        } else {
            const EmbeddingVector v = embed(t.text, dim);
            matrix.insert(matrix.end(), v.values.begin(), v.values.end());
        }
    }
    return from_rows(std::move(templates), std::move(matrix), dim);
}

std::vector<SearchHit> top_k(std::span<const float> scores, std::size_t k) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t n = std::min(k, order.size());
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), better);
    std::vector<SearchHit> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back({order[i], scores[order[i]]});
    return out;
}

std::vector<SearchHit> TemplateIndex::query_vector(std::span<const float> query, std::size_t k) const {
    if (query.size() != dim_) throw std::invalid_argument("query dimension does not match the index");
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (templates_.empty()) return {};
    std::vector<float> q(query.begin(), query.end());
    normalize(q);
    std::vector<float> scores(templates_.size());
    kernels::active().dot_batch(q.data(), matrix_.data(), templates_.size(), dim_, scores.data());
    return top_k(scores, k);
}

std::vector<SearchHit> TemplateIndex::query(std::string_view state_text, std::size_t k) const {
    return query_vector(embed(state_text, dim_).values, k);
}

std::vector<SearchHit> TemplateIndex::query_vector_partitioned(std::span<const float> query, std::size_t k,
                                                               std::size_t threads) const {
    if (query.size() != dim_) throw std::invalid_argument("query dimension does not match the index");
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (templates_.empty()) return {};
    std::vector<float> q(query.begin(), query.end());
    normalize(q);
    std::vector<float> scores(templates_.size());
    threads = std::clamp<std::size_t>(threads, 1, templates_.size());
    const std::size_t chunk = (templates_.size() + threads - 1) / threads;
    const auto batch = kernels::active().dot_batch;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(templates_.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            batch(q.data(), matrix_.data() + begin * dim_, end - begin, dim_, scores.data() + begin);
        });
    }
    for (auto& th : pool) th.join();
    return top_k(scores, k);
}

void TemplateIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write index " + path.string());
    out.write(kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(dim_));
    put_u32(out, static_cast<std::uint32_t>(templates_.size()));
    for (std::size_t r = 0; r < templates_.size(); ++r) {
        const std::string& text = templates_[r].text;
        put_u32(out, static_cast<std::uint32_t>(text.size()));
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        for (float f : vector(r)) {
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            put_u32(out, bits);
        }
    }
    if (!out) throw std::runtime_error("failed writing index " + path.string());
}

TemplateIndex TemplateIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open index " + path.string());
    char magic[sizeof kMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error(path.string() + " is not a template index");
    const std::size_t dim = get_u32(in);
    const std::size_t count = get_u32(in);
    std::vector<TacticTemplate> templates;
    std::vector<float> matrix;
    templates.reserve(count);
    matrix.reserve(count * dim);
    for (std::size_t r = 0; r < count; ++r) {
        const std::uint32_t len = get_u32(in);
        std::string text(len, '\0');
        if (!in.read(text.data(), len)) throw std::runtime_error("truncated index file");
        templates.push_back(TacticTemplate::from_text(std::move(text)));
        for (std::size_t d = 0; d < dim; ++d) {
            const std::uint32_t bits = get_u32(in);
            float f;
            std::memcpy(&f, &bits, 4);
            matrix.push_back(f);
        }
    }
    TemplateIndex index;
    index.dim_ = dim;
    index.templates_ = std::move(templates);
    index.matrix_ = std::move(matrix);
    return index;
}

}  // namespace navigator
