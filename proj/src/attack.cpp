#include "netstress/attack.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace netstress {

namespace {

using nlohmann::json;

// Any positive failed fraction passes this threshold (fractions are at
// least 1/(N-1)), which is how NEIGHBOR_DELETE reaches every scenario
// neighbor of a failed node.
constexpr double kAnyFailedNeighbor = 1e-12;

constexpr int kBuiltinMaxRounds = 256;

std::map<VertexId, std::vector<VertexId>> scenario_adjacency(const Scenario& s) {
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const VertexId v : s.vertices) adj.emplace(v, std::vector<VertexId>{});
    for (const auto& [u, v] : s.edges) {
        adj.at(u).push_back(v);
        adj.at(v).push_back(u);
    }
    for (auto& [v, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

// Vertices of the component with the most members; ties go to the
// component containing the smallest vertex id.
std::set<VertexId> giant_component(const MultiGraph& g) {
    const ComponentPartition part = connected_components(g);
    if (part.count == 0) return {};
    std::vector<std::size_t> sizes(part.count, 0);
    for (const auto& [v, c] : part.assignment) ++sizes[c];
    // component indices are ordered by smallest contained vertex, so the
    // first argmax is the tie-break winner
    std::size_t giant = 0;
    for (std::size_t c = 1; c < part.count; ++c)
        if (sizes[c] > sizes[giant]) giant = c;
    std::set<VertexId> members;
    for (const auto& [v, c] : part.assignment)
        if (c == giant) members.insert(v);
    return members;
}

struct AttackState {
    const Scenario* scenario = nullptr;
    std::map<VertexId, std::vector<VertexId>> adjacency; // structural, never mutated
    std::set<VertexId> failed;
    MultiGraph g;
    std::map<VertexId, std::optional<VertexId>> image; // current image per scenario node
    std::vector<ChangeRecord> log;

    void drop_image(VertexId g_vertex) {
        for (auto& [a, img] : image)
            if (img && *img == g_vertex) img.reset();
    }

    void rename_image(VertexId from, VertexId to) {
        for (auto& [a, img] : image)
            if (img && *img == from) img = to;
    }
};

bool trigger_holds(const AttackState& st, const Trigger& t, VertexId a,
                   const std::set<VertexId>& giant) {
    switch (t.kind) {
        case TriggerKind::NodeAttacked:
            return st.failed.count(a) != 0;
        case TriggerKind::ScenarioNeighborFailedFraction: {
            const auto& nbrs = st.adjacency.at(a);
            if (nbrs.empty()) return false;
            std::size_t failed_nbrs = 0;
            for (const VertexId b : nbrs)
                if (st.failed.count(b)) ++failed_nbrs;
            return static_cast<double>(failed_nbrs) / static_cast<double>(nbrs.size()) >=
                   t.threshold;
        }
        case TriggerKind::ImageLeftGiantComponent: {
            const auto& img = st.image.at(a);
            return img && st.g.has_vertex(*img) && giant.count(*img) == 0;
        }
        case TriggerKind::ScenarioDegree:
            return static_cast<double>(st.adjacency.at(a).size()) >= t.threshold;
    }
    return false;
}

void apply_action(AttackState& st, ActionKind action, VertexId a, int round,
                  std::size_t rule_index) {
    ChangeRecord rec;
    rec.round = round;
    rec.rule_index = rule_index;
    rec.action = action;
    rec.scenario_node = a;

    switch (action) {
        case ActionKind::DeleteImageVertex: {
            const auto img = st.image.at(a);
            if (img && st.g.has_vertex(*img)) {
                rec.effect = GraphEffect::DeleteVertex;
                rec.g_u = *img;
                st.g = delete_vertex(st.g, *img);
                st.drop_image(*img);
            }
            st.log.push_back(std::move(rec));
            return;
        }
        case ActionKind::DeleteImageEdges: {
            const auto img = st.image.at(a);
            if (img && st.g.has_vertex(*img) && st.g.degree(*img) > 0) {
                rec.effect = GraphEffect::DeleteIncidentEdges;
                rec.g_u = *img;
                st.g = delete_incident_edges(st.g, *img);
            }
            st.log.push_back(std::move(rec));
            return;
        }
        case ActionKind::ContractImageEdge: {
            const auto img = st.image.at(a);
            if (!img || !st.g.has_vertex(*img)) {
                st.log.push_back(std::move(rec));
                return;
            }
            // Snapshot the neighbors once: the merge stays local to the
            // image's closed neighborhood at firing time.
            std::vector<VertexId> snapshot;
            for (const auto& [w, m] : st.g.neighbors(*img)) snapshot.push_back(w);
            if (snapshot.empty()) {
                st.log.push_back(std::move(rec));
                return;
            }
            VertexId current = *img;
            for (const VertexId w : snapshot) {
                if (!st.g.has_vertex(w) || st.g.multiplicity(current, w) == 0) continue;
                ChangeRecord step = rec;
                step.effect = GraphEffect::ContractEdge;
                step.g_u = current;
                step.g_v = w;
                st.log.push_back(std::move(step));
                st.g = contract_edge(st.g, current, w);
                const VertexId keep = std::min(current, w);
                st.rename_image(std::max(current, w), keep);
                current = keep;
            }
            return;
        }
        case ActionKind::FailScenarioNeighbors: {
            for (const VertexId b : st.adjacency.at(a)) {
                if (st.failed.insert(b).second) rec.newly_failed.push_back(b);
            }
            st.log.push_back(std::move(rec));
            return;
        }
    }
}

} // namespace

const std::vector<std::string>& builtin_rule_set_names() {
    static const std::vector<std::string> names = {"DIRECT_DELETE", "NEIGHBOR_DELETE",
                                                   "CONTRACT_LOCAL", "CASCADE"};
    return names;
}

RuleSet builtin_rule_set(const std::string& name) {
    RuleSet rs;
    rs.name = name;
    rs.max_rounds = kBuiltinMaxRounds;
    if (name == "DIRECT_DELETE") {
        rs.rules = {{{TriggerKind::NodeAttacked}, ActionKind::DeleteImageVertex}};
    } else if (name == "NEIGHBOR_DELETE") {
        rs.rules = {{{TriggerKind::NodeAttacked}, ActionKind::DeleteImageVertex},
                    {{TriggerKind::ScenarioNeighborFailedFraction, kAnyFailedNeighbor},
                     ActionKind::DeleteImageVertex}};
    } else if (name == "CONTRACT_LOCAL") {
        rs.rules = {{{TriggerKind::NodeAttacked}, ActionKind::ContractImageEdge}};
    } else if (name == "CASCADE") {
        rs.rules = {{{TriggerKind::NodeAttacked}, ActionKind::DeleteImageVertex},
                    {{TriggerKind::ImageLeftGiantComponent}, ActionKind::FailScenarioNeighbors}};
    } else {
        throw ConfigError("unknown built-in rule set '" + name + "'");
    }
    return rs;
}

namespace {

[[noreturn]] void rule_error(const std::string& where, const std::string& at,
                             const std::string& why) {
    throw ConfigError(where + ": " + at + ": " + why);
}

void reject_unknown_fields(const json& obj, const std::vector<std::string>& allowed,
                           const std::string& where, const std::string& at) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            rule_error(where, at, "unknown field '" + key + "'");
    }
}

Trigger parse_trigger(const json& j, const std::string& where, const std::string& at) {
    if (!j.is_object()) rule_error(where, at, "trigger must be an object");
    reject_unknown_fields(j, {"kind", "threshold"}, where, at);
    if (!j.contains("kind") || !j.at("kind").is_string())
        rule_error(where, at, "trigger needs a string 'kind'");
    Trigger t;
    try {
        t.kind = trigger_kind_from_name(j.at("kind").get<std::string>());
    } catch (const Error& e) {
        rule_error(where, at, e.what());
    }
    const bool wants_threshold = t.kind == TriggerKind::ScenarioNeighborFailedFraction ||
                                 t.kind == TriggerKind::ScenarioDegree;
    if (wants_threshold) {
        if (!j.contains("threshold") || !j.at("threshold").is_number())
            rule_error(where, at, "trigger '" + trigger_kind_name(t.kind) +
                                      "' needs a numeric 'threshold'");
        t.threshold = j.at("threshold").get<double>();
        if (t.threshold < 0.0) rule_error(where, at, "threshold must be >= 0");
    } else if (j.contains("threshold")) {
        rule_error(where, at,
                   "trigger '" + trigger_kind_name(t.kind) + "' takes no 'threshold'");
    }
    return t;
}

} // namespace

RuleSet parse_rule_set_document(const std::string& json_text, const std::string& where) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(where + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(where + ": rule-set document must be an object");
    reject_unknown_fields(doc, {"name", "max_rounds", "rules"}, where, "document");
    if (!doc.contains("name") || !doc.at("name").is_string())
        rule_error(where, "document", "needs a string 'name'");
    if (!doc.contains("max_rounds") || !doc.at("max_rounds").is_number_integer())
        rule_error(where, "document", "needs an integer 'max_rounds'");
    if (!doc.contains("rules") || !doc.at("rules").is_array())
        rule_error(where, "document", "needs an array 'rules'");

    RuleSet rs;
    rs.name = doc.at("name").get<std::string>();
    rs.max_rounds = doc.at("max_rounds").get<int>();
    if (rs.max_rounds < 1) rule_error(where, "max_rounds", "must be >= 1");
    const json& rules = doc.at("rules");
    if (rules.empty()) rule_error(where, "rules", "at least one rule is required");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string at = "rules[" + std::to_string(i) + "]";
        const json& jr = rules.at(i);
        if (!jr.is_object()) rule_error(where, at, "rule must be an object");
        reject_unknown_fields(jr, {"trigger", "action"}, where, at);
        if (!jr.contains("trigger")) rule_error(where, at, "missing 'trigger'");
        if (!jr.contains("action") || !jr.at("action").is_string())
            rule_error(where, at, "needs a string 'action'");
        Rule rule;
        rule.trigger = parse_trigger(jr.at("trigger"), where, at + ".trigger");
        try {
            rule.action = action_kind_from_name(jr.at("action").get<std::string>());
        } catch (const Error& e) {
            rule_error(where, at + ".action", e.what());
        }
        rs.rules.push_back(rule);
    }
    return rs;
}

RuleSet load_rule_set(const std::string& source) {
    const auto& names = builtin_rule_set_names();
    if (std::find(names.begin(), names.end(), source) != names.end())
        return builtin_rule_set(source);
    std::ifstream in(source);
    if (!in) throw ConfigError("rule set '" + source + "' is neither built-in nor a readable file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_rule_set_document(buffer.str(), source);
}

CoupledSystem couple(const MultiGraph& g, const Scenario& s, const CouplingMap& d) {
    std::set<VertexId> images;
    for (const auto& [a, b] : d.image) {
        if (!images.insert(b).second)
            throw AttackError("coupling map is not injective: " + std::to_string(b) +
                              " is the image of two driver nodes");
        if (!g.has_vertex(b))
            throw AttackError("coupling image " + std::to_string(b) +
                              " is not a vertex of the main network");
    }
    for (const VertexId a : s.vertices)
        if (d.image.find(a) == d.image.end())
            throw AttackError("scenario vertex " + std::to_string(a) +
                              " has no coupling image");
    return CoupledSystem{g, s, d};
}

AttackOutcome attack_nodes(const CoupledSystem& system, std::vector<VertexId> nodes,
                           const RuleSet& rs) {
    if (rs.rules.empty()) throw AttackError("rule set '" + rs.name + "' has no rules");
    if (rs.max_rounds < 1) throw AttackError("max_rounds must be >= 1");
    if (nodes.empty()) throw AttackError("no attack nodes given");
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (const VertexId a : nodes)
        if (!std::binary_search(system.scenario.vertices.begin(), system.scenario.vertices.end(), a))
            throw AttackError("attacked node " + std::to_string(a) + " is outside the scenario");

    AttackState st;
    st.scenario = &system.scenario;
    st.adjacency = scenario_adjacency(system.scenario);
    st.failed.insert(nodes.begin(), nodes.end());
    st.g = system.g;
    for (const VertexId a : system.scenario.vertices)
        st.image.emplace(a, system.coupling.image.at(a));

    std::set<std::pair<std::size_t, VertexId>> fired;
    int rounds_used = 0;
    for (int round = 1; round <= rs.max_rounds; ++round) {
        rounds_used = round;
        bool any_fired = false;
        for (std::size_t r = 0; r < rs.rules.size(); ++r) {
            const Rule& rule = rs.rules[r];
            // Target set is snapshotted per rule, then applied in ascending
            // order; triggers see mutations from earlier rules this round.
            const std::set<VertexId> giant =
                rule.trigger.kind == TriggerKind::ImageLeftGiantComponent ? giant_component(st.g)
                                                                          : std::set<VertexId>{};
            std::vector<VertexId> targets;
            for (const VertexId a : system.scenario.vertices) {
                if (fired.count({r, a})) continue;
                if (trigger_holds(st, rule.trigger, a, giant)) targets.push_back(a);
            }
            for (const VertexId a : targets) {
                fired.insert({r, a});
                apply_action(st, rule.action, a, round, r);
                any_fired = true;
            }
        }
        if (!any_fired) break;
    }

    AttackOutcome out;
    out.scenario_key = system.scenario.canonical_key();
    out.attacked_nodes = nodes;
    out.failed_nodes.assign(st.failed.begin(), st.failed.end());
    out.post_g = std::move(st.g);
    out.component_count = connected_components(out.post_g).count;
    out.change_log = std::move(st.log);
    out.rounds_used = rounds_used;
    return out;
}

AttackOutcome attack(const CoupledSystem& system, VertexId node, const RuleSet& rs) {
    return attack_nodes(system, {node}, rs);
}

namespace {

void k_subsets(const std::vector<VertexId>& verts, std::uint32_t k,
               std::vector<std::vector<VertexId>>& out) {
    std::vector<std::size_t> idx(k);
    for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        std::vector<VertexId> subset;
        subset.reserve(k);
        for (const std::size_t i : idx) subset.push_back(verts[i]);
        out.push_back(std::move(subset));
        // next combination, lexicographic
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (idx[pos] != pos + verts.size() - k) break;
            if (pos == 0) return;
        }
        if (idx[pos] == pos + verts.size() - k) return;
        ++idx[pos];
        for (std::size_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::vector<AttackOutcome> attack_all(const CoupledSystem& system, const RuleSet& rs,
                                      AttackModeSpec mode) {
    std::vector<AttackOutcome> out;
    switch (mode.kind) {
        case AttackMode::Single:
            for (const VertexId a : system.scenario.vertices)
                out.push_back(attack_nodes(system, {a}, rs));
            return out;
        case AttackMode::Simultaneous:
            out.push_back(attack_nodes(system, system.scenario.vertices, rs));
            return out;
        case AttackMode::Subsets: {
            const std::uint32_t k = mode.subset_size;
            if (k < 1 || k > system.scenario.vertices.size())
                throw AttackError("subset size " + std::to_string(k) +
                                  " exceeds the scenario's " +
                                  std::to_string(system.scenario.vertices.size()) + " vertices");
            std::vector<std::vector<VertexId>> subsets;
            k_subsets(system.scenario.vertices, k, subsets);
            for (auto& subset : subsets) out.push_back(attack_nodes(system, subset, rs));
            return out;
        }
    }
    throw AttackError("invalid attack mode");
}

MultiGraph replay_change_log(const MultiGraph& g, const std::vector<ChangeRecord>& log) {
    MultiGraph out = g;
    for (const ChangeRecord& rec : log) {
        switch (rec.effect) {
            case GraphEffect::None: break;
            case GraphEffect::DeleteVertex: out = delete_vertex(out, rec.g_u); break;
            case GraphEffect::DeleteIncidentEdges: out = delete_incident_edges(out, rec.g_u); break;
            case GraphEffect::ContractEdge: out = contract_edge(out, rec.g_u, rec.g_v); break;
        }
    }
    return out;
}

std::string trigger_kind_name(TriggerKind kind) {
    switch (kind) {
        case TriggerKind::NodeAttacked: return "NODE_ATTACKED";
        case TriggerKind::ScenarioNeighborFailedFraction: return "SCENARIO_NEIGHBOR_FAILED_FRACTION";
        case TriggerKind::ImageLeftGiantComponent: return "IMAGE_LEFT_GIANT_COMPONENT";
        case TriggerKind::ScenarioDegree: return "SCENARIO_DEGREE";
    }
    throw Error("invalid trigger kind");
}

TriggerKind trigger_kind_from_name(const std::string& name) {
    if (name == "NODE_ATTACKED") return TriggerKind::NodeAttacked;
    if (name == "SCENARIO_NEIGHBOR_FAILED_FRACTION") return TriggerKind::ScenarioNeighborFailedFraction;
    if (name == "IMAGE_LEFT_GIANT_COMPONENT") return TriggerKind::ImageLeftGiantComponent;
    if (name == "SCENARIO_DEGREE") return TriggerKind::ScenarioDegree;
    throw Error("unknown trigger kind '" + name + "'");
}

std::string action_kind_name(ActionKind kind) {
    switch (kind) {
        case ActionKind::DeleteImageVertex: return "DELETE_IMAGE_VERTEX";
        case ActionKind::DeleteImageEdges: return "DELETE_IMAGE_EDGES";
        case ActionKind::ContractImageEdge: return "CONTRACT_IMAGE_EDGE";
        case ActionKind::FailScenarioNeighbors: return "FAIL_SCENARIO_NEIGHBORS";
    }
    throw Error("invalid action kind");
}

ActionKind action_kind_from_name(const std::string& name) {
    if (name == "DELETE_IMAGE_VERTEX") return ActionKind::DeleteImageVertex;
    if (name == "DELETE_IMAGE_EDGES") return ActionKind::DeleteImageEdges;
    if (name == "CONTRACT_IMAGE_EDGE") return ActionKind::ContractImageEdge;
    if (name == "FAIL_SCENARIO_NEIGHBORS") return ActionKind::FailScenarioNeighbors;
    throw Error("unknown action kind '" + name + "'");
}

std::string graph_effect_name(GraphEffect effect) {
    switch (effect) {
        case GraphEffect::None: return "NONE";
        case GraphEffect::DeleteVertex: return "DELETE_VERTEX";
        case GraphEffect::DeleteIncidentEdges: return "DELETE_INCIDENT_EDGES";
        case GraphEffect::ContractEdge: return "CONTRACT_EDGE";
    }
    throw Error("invalid graph effect");
}

GraphEffect graph_effect_from_name(const std::string& name) {
    if (name == "NONE") return GraphEffect::None;
    if (name == "DELETE_VERTEX") return GraphEffect::DeleteVertex;
    if (name == "DELETE_INCIDENT_EDGES") return GraphEffect::DeleteIncidentEdges;
    if (name == "CONTRACT_EDGE") return GraphEffect::ContractEdge;
    throw Error("unknown graph effect '" + name + "'");
}

} // namespace netstress
