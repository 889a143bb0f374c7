#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "navigator/embedding.hpp"
#include "navigator/engine.hpp"
#include "navigator/search.hpp"
#include "navigator/templating.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return NAVIGATOR_DATA_DIR; }

inline std::shared_ptr<const navigator::Theory> group() {
    static const auto theory = std::make_shared<const navigator::Theory>(navigator::group_theory());
    return theory;
}

inline std::vector<navigator::CorpusPair> corpus_pairs() {
    std::ifstream in(data_dir() / "proof_corpus.jsonl");
    std::vector<navigator::CorpusPair> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        out.push_back({j.at("state").get<std::string>(), j.at("tactic").get<std::string>()});
    }
    return out;
}

inline const navigator::TemplateIndex& corpus_index() {
    static const navigator::TemplateIndex index = [] {
        const auto pairs = corpus_pairs();
        return navigator::TemplateIndex::build(
            navigator::build_template_corpus(pairs, navigator::TemplateVocabulary::from_theory(*group())));
    }();
    return index;
}

inline std::vector<std::string> fixtures() { return navigator::read_theorem_file(data_dir() / "fixtures.txt"); }

inline navigator::EngineFactory builtin_factory() {
    return [] { return std::unique_ptr<navigator::ProofEngine>(new navigator::BuiltinEngine(group())); };
}

/// Random ground term over the group signature with variables from `vars`.
inline navigator::Term random_term(std::mt19937& rng, int depth, const std::vector<std::string>& vars) {
    using navigator::Term;
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = depth <= 0 ? pick(rng) % 3 : pick(rng);
    if (r == 0) return Term::constant("1");
    if (r <= 2) return Term::variable(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
    if (r <= 4) return Term::postfix("⁻¹", random_term(rng, depth - 1, vars));
    return Term::binary("*", random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars));
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("navigator-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

}  // namespace testing_support
