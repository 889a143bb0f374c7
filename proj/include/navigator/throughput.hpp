#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "navigator/explorer.hpp"

namespace navigator {

/// Emits the wrapped generator's candidates after sleeping a fixed time per
/// code point of each, a latency model of decoding one character at a time.
class DelayedGenerator final : public CandidateGenerator {
public:
    DelayedGenerator(CandidateGenerator& inner, std::chrono::microseconds per_char)
        : inner_(inner), per_char_(per_char) {}

    void begin(const std::string& pretty) override { inner_.begin(pretty); }
    std::optional<std::string> next() override;

    std::chrono::microseconds per_char() const { return per_char_; }

private:
    CandidateGenerator& inner_;
    std::chrono::microseconds per_char_;
};

struct CompareOptions {
    double window_seconds = 120.0;
    std::chrono::microseconds baseline_per_char{20000};
    std::size_t k_neighbors = 100;
    std::size_t instantiation_cap = 200;
    /// Memory guard: a run stops once its graph holds this many states
    /// (0 for no limit). The count reported for a capped run is then a
    /// lower bound on what the full window would reach.
    std::size_t max_states = 250000;
};

struct GeneratorProfile {
    std::string name;
    double window_seconds = 0.0;
    std::vector<std::size_t> states;  // per theorem, input order
    std::vector<std::int64_t> attempts;
    std::size_t capped = 0;           // runs stopped by max_states
    std::size_t failed = 0;           // theorems the engine rejected

    double average_states() const;
};

struct CompareReport {
    GeneratorProfile retrieval;
    GeneratorProfile baseline;

    /// retrieval average / baseline average (infinite when the baseline
    /// reached nothing).
    double ratio() const;
};

/// Explores every theorem once per generator with only the time budget,
/// sequentially, each run with a fresh engine session; session startup is
/// outside the window.
CompareReport compare(const std::vector<std::string>& theorems, const EngineFactory& factory,
                      const TemplateIndex& index, const CompareOptions& options);

/// The two-row table as lines: `{"generator":…,"avg_states":…,…}`, then
/// `{"ratio":…}`.
void write_compare_report(std::ostream& out, const CompareReport& report);

}  // namespace navigator
