#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netstress/attack.hpp"
#include "netstress/graph.hpp"
#include "netstress/scenario.hpp"

namespace netstress {

/// How the evaluated scenario set was produced; echoed into reports.
struct SearchModeInfo {
    ScenarioMode::Kind kind = ScenarioMode::Kind::Exhaustive;
    BigInt space_size = 0;          // full scenario-space cardinality
    std::uint64_t sample_count = 0; // Sample only: requested draws
    std::uint64_t rng_seed = 0;     // Sample only
};

struct RankedEntry {
    std::string scenario_key;
    AttackOutcome best; // max component_count; ties broken by smallest attacked set
};

/// Ranked attack outcomes: the doomsday scenario, every tying scenario, and
/// spanning-tree complexity scores for the attacked doomsday graph and the
/// seed.
struct DoomsdayReport {
    std::vector<RankedEntry> ranked; // component_count desc, canonical_key asc
    std::string doomsday_key;
    std::vector<std::string> ties;   // every key achieving the maximum
    std::vector<VertexId> doomsday_failed_nodes;
    BigInt tau_doomsday = 0;         // tau of the attacked doomsday scenario graph
    BigInt tau_seed = 0;             // tau of S0
    SearchModeInfo search_mode;
    std::uint64_t total_evaluated = 0;
};

/// For each scenario (de-duplicated by canonical_key) the best outcome over
/// attack_all: max component_count, ties within a scenario broken by the
/// lexicographically smallest attacked-node set. Deterministic; scenario
/// evaluations may run concurrently.
std::vector<RankedEntry> evaluate_scenarios(const MultiGraph& g, const CouplingMap& coupling,
                                            const std::vector<Scenario>& scenarios,
                                            const RuleSet& rs, AttackModeSpec mode,
                                            unsigned threads = 1);

/// The argmax search. Throws EmptyBinError when `scenarios` is empty (the
/// binning tolerance retained nothing).
DoomsdayReport doomsday(const MultiGraph& g, const CouplingMap& coupling,
                        const std::vector<Scenario>& scenarios, const SeedSpec& spec,
                        const RuleSet& rs, AttackModeSpec mode, SearchModeInfo search_mode,
                        unsigned threads = 1);

/// Spanning-tree complexity score (tau).
BigInt risk_complexity(const MultiGraph& g);
BigInt risk_complexity(const Scenario& s);

} // namespace netstress
