#include "navigator/throughput.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "navigator/utf8.hpp"

namespace navigator {

std::optional<std::string> DelayedGenerator::next() {
    auto candidate = inner_.next();
    if (candidate) std::this_thread::sleep_for(per_char_ * static_cast<std::int64_t>(utf8::length(*candidate)));
    return candidate;
}

double GeneratorProfile::average_states() const {
    if (states.empty()) return 0.0;
    double sum = 0.0;
    for (auto s : states) sum += static_cast<double>(s);
    return sum / static_cast<double>(states.size());
}

double CompareReport::ratio() const {
    const double b = baseline.average_states();
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return retrieval.average_states() / b;
}

CompareReport compare(const std::vector<std::string>& theorems, const EngineFactory& factory,
                      const TemplateIndex& index, const CompareOptions& options) {
    if (!(options.window_seconds > 0)) throw std::invalid_argument("window must be positive");
    ExploreBudget budget;
    budget.max_transitions = std::numeric_limits<std::int64_t>::max();
    budget.max_seconds = options.window_seconds;
    budget.k_neighbors = options.k_neighbors;
    budget.instantiation_cap = options.instantiation_cap;
    budget.max_states = options.max_states;

    CompareReport report;
    report.retrieval.name = "retrieval";
    report.baseline.name = "baseline";
    for (GeneratorProfile* p : {&report.retrieval, &report.baseline}) {
        p->window_seconds = options.window_seconds;
        const bool delayed = p == &report.baseline;
        for (const auto& theorem : theorems) {
            auto engine = factory();
            RetrievalGenerator retrieval(index, options.k_neighbors, options.instantiation_cap);
            DelayedGenerator slow(retrieval, options.baseline_per_char);
            CandidateGenerator& gen = delayed ? static_cast<CandidateGenerator&>(slow) : retrieval;
            try {
                const StateGraph g = explore(theorem, "compare", *engine, gen, budget);
                p->states.push_back(g.size());
                p->attempts.push_back(g.transitions_attempted);
                if (options.max_states != 0 && g.size() >= options.max_states) ++p->capped;
            } catch (const EngineError&) {
                p->states.push_back(0);
                p->attempts.push_back(0);
                ++p->failed;
            }
            engine->close();
        }
    }
    return report;
}

void write_compare_report(std::ostream& out, const CompareReport& report) {
    for (const GeneratorProfile* p : {&report.retrieval, &report.baseline}) {
        nlohmann::ordered_json j;
        j["generator"] = p->name;
        j["window_seconds"] = p->window_seconds;
        j["avg_states"] = p->average_states();
        j["states"] = p->states;
        j["attempts"] = p->attempts;
        j["capped"] = p->capped;
        j["failed"] = p->failed;
        out << j.dump() << '\n';
    }
    nlohmann::ordered_json r;
    const double ratio = report.ratio();
    if (std::isinf(ratio)) r["ratio"] = nullptr;
    else r["ratio"] = ratio;
    out << r.dump() << '\n';
}

}  // namespace navigator
