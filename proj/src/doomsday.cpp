#include "netstress/doomsday.hpp"

#include <algorithm>
#include <map>

#include "netstress/parallel.hpp"

namespace netstress {

namespace {

// max component_count; ties -> lexicographically smallest attacked set
bool outcome_better(const AttackOutcome& candidate, const AttackOutcome& incumbent) {
    if (candidate.component_count != incumbent.component_count)
        return candidate.component_count > incumbent.component_count;
    return candidate.attacked_nodes < incumbent.attacked_nodes;
}

} // namespace

std::vector<RankedEntry> evaluate_scenarios(const MultiGraph& g, const CouplingMap& coupling,
                                            const std::vector<Scenario>& scenarios,
                                            const RuleSet& rs, AttackModeSpec mode,
                                            unsigned threads) {
    // De-duplicate by canonical_key; evaluation order is key order.
    std::map<std::string, const Scenario*> unique;
    for (const Scenario& s : scenarios) unique.emplace(s.canonical_key(), &s);
    std::vector<std::pair<std::string, const Scenario*>> work(unique.begin(), unique.end());

    std::vector<RankedEntry> entries(work.size());
    parallel_for_index(work.size(), threads, [&](std::size_t i) {
        const CoupledSystem system = couple(g, *work[i].second, coupling);
        std::vector<AttackOutcome> outcomes = attack_all(system, rs, mode);
        std::size_t best = 0;
        for (std::size_t j = 1; j < outcomes.size(); ++j)
            if (outcome_better(outcomes[j], outcomes[best])) best = j;
        entries[i] = RankedEntry{work[i].first, std::move(outcomes[best])};
    });
    return entries;
}

DoomsdayReport doomsday(const MultiGraph& g, const CouplingMap& coupling,
                        const std::vector<Scenario>& scenarios, const SeedSpec& spec,
                        const RuleSet& rs, AttackModeSpec mode, SearchModeInfo search_mode,
                        unsigned threads) {
    if (scenarios.empty())
        throw EmptyBinError(
            "no scenarios retained: the binning tolerance is too tight for this seed; "
            "increase epsilon (or sample more scenarios)");

    std::map<std::string, const Scenario*> by_key;
    for (const Scenario& s : scenarios) by_key.emplace(s.canonical_key(), &s);

    DoomsdayReport report;
    report.ranked = evaluate_scenarios(g, coupling, scenarios, rs, mode, threads);
    std::stable_sort(report.ranked.begin(), report.ranked.end(),
                     [](const RankedEntry& a, const RankedEntry& b) {
                         if (a.best.component_count != b.best.component_count)
                             return a.best.component_count > b.best.component_count;
                         return a.scenario_key < b.scenario_key;
                     });

    const RankedEntry& winner = report.ranked.front();
    report.doomsday_key = winner.scenario_key;
    for (const RankedEntry& e : report.ranked)
        if (e.best.component_count == winner.best.component_count)
            report.ties.push_back(e.scenario_key);
    report.doomsday_failed_nodes = winner.best.failed_nodes;
    report.tau_doomsday = spanning_tree_count(
        attacked_scenario_graph(*by_key.at(winner.scenario_key), winner.best.failed_nodes));
    report.tau_seed = risk_complexity(seed_scenario(spec));
    report.search_mode = search_mode;
    report.total_evaluated = report.ranked.size();
    return report;
}

BigInt risk_complexity(const MultiGraph& g) { return spanning_tree_count(g); }

BigInt risk_complexity(const Scenario& s) { return spanning_tree_count(scenario_graph(s)); }

} // namespace netstress
