#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netstress/graph.hpp"
#include "netstress/scenario.hpp"

namespace netstress {

/// The map from driver-universe vertices to distinct vertices of the main
/// network, along which failures propagate.
struct CouplingMap {
    std::map<VertexId, VertexId> image;

    friend bool operator==(const CouplingMap&, const CouplingMap&) = default;
};

enum class TriggerKind {
    NodeAttacked,                   // target is in the attacked/failed set
    ScenarioNeighborFailedFraction, // failed fraction of target's scenario neighbors >= threshold
    ImageLeftGiantComponent,        // target's image survives but left the largest component
    ScenarioDegree,                 // target's structural scenario degree >= threshold
};

enum class ActionKind {
    DeleteImageVertex,
    DeleteImageEdges,
    ContractImageEdge, // contracts every edge incident to the image, ascending neighbor order
    FailScenarioNeighbors,
};

struct Trigger {
    TriggerKind kind = TriggerKind::NodeAttacked;
    double threshold = 0.0; // fraction / degree triggers only
};

struct Rule {
    Trigger trigger;
    ActionKind action = ActionKind::DeleteImageVertex;
};

struct RuleSet {
    std::string name;
    std::vector<Rule> rules; // applied in document order, one full pass per round
    int max_rounds = 1;
};

const std::vector<std::string>& builtin_rule_set_names();
RuleSet builtin_rule_set(const std::string& name);

/// Parses a rule-set document (JSON text). Unknown fields, triggers and
/// actions are rejected with the offending location. `where` names the
/// source in error messages.
RuleSet parse_rule_set_document(const std::string& json_text, const std::string& where);

/// `source` is a built-in name or a path to a rule-set document.
RuleSet load_rule_set(const std::string& source);

/// A scenario joined to the main network through the coupling map. Holds
/// copies; nothing here mutates the caller's graphs.
struct CoupledSystem {
    MultiGraph g;
    Scenario scenario;
    CouplingMap coupling;
};

/// Validates (injective map, images present in g, scenario covered by the
/// domain) before any attack can run.
CoupledSystem couple(const MultiGraph& g, const Scenario& s, const CouplingMap& d);

/// Concrete graph mutation recorded for replay. None marks a rule firing
/// with no graph effect (image already gone, or a scenario-only action).
enum class GraphEffect { None, DeleteVertex, DeleteIncidentEdges, ContractEdge };

struct ChangeRecord {
    int round = 0;
    std::size_t rule_index = 0;
    ActionKind action = ActionKind::DeleteImageVertex;
    VertexId scenario_node = 0;
    GraphEffect effect = GraphEffect::None;
    VertexId g_u = 0; // vertex target, or contracted edge endpoint
    VertexId g_v = 0; // second endpoint for ContractEdge
    std::vector<VertexId> newly_failed; // FailScenarioNeighbors only

    friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

struct AttackOutcome {
    std::string scenario_key;
    std::vector<VertexId> attacked_nodes; // ascending
    std::vector<VertexId> failed_nodes;   // final failed set, ascending
    MultiGraph post_g;
    std::size_t component_count = 0;
    std::vector<ChangeRecord> change_log;
    int rounds_used = 0;

    friend bool operator==(const AttackOutcome&, const AttackOutcome&) = default;
};

/// Attacks a single scenario node: the node fails and leaves the scenario
/// view, then rules run in rounds until no trigger fires or max_rounds is
/// reached. Each (rule, target) pair fires at most once. Deterministic.
AttackOutcome attack(const CoupledSystem& system, VertexId node, const RuleSet& rs);

/// Same, with every node in `nodes` failed at round zero.
AttackOutcome attack_nodes(const CoupledSystem& system, std::vector<VertexId> nodes,
                           const RuleSet& rs);

enum class AttackMode { Single, Simultaneous, Subsets };

struct AttackModeSpec {
    AttackMode kind = AttackMode::Single;
    std::uint32_t subset_size = 1; // Subsets only

    friend bool operator==(const AttackModeSpec&, const AttackModeSpec&) = default;
};

/// Single: one outcome per scenario node, ascending. Simultaneous: one
/// outcome with everything attacked at once. Subsets(k): one outcome per
/// k-subset, lexicographic. Outcomes never compound across each other.
std::vector<AttackOutcome> attack_all(const CoupledSystem& system, const RuleSet& rs,
                                      AttackModeSpec mode);

/// Applies the log's graph mutations, in order, to a fresh copy of g.
/// Replaying an outcome's log against the original graph reproduces its
/// post_g exactly.
MultiGraph replay_change_log(const MultiGraph& g, const std::vector<ChangeRecord>& log);

std::string trigger_kind_name(TriggerKind kind);
TriggerKind trigger_kind_from_name(const std::string& name);
std::string action_kind_name(ActionKind kind);
ActionKind action_kind_from_name(const std::string& name);
std::string graph_effect_name(GraphEffect effect);
GraphEffect graph_effect_from_name(const std::string& name);

} // namespace netstress
