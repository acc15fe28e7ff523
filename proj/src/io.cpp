#include "netstress/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace netstress {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

[[noreturn]] void doc_error(const std::string& where, const std::string& at,
                            const std::string& why) {
    throw GraphError(where + ": " + at + ": " + why);
}

template <typename Err>
void require_fields(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where, const std::string& at) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw Err(where + ": " + at + ": unknown field '" + key + "'");
    }
}

VertexId vertex_from_json(const json& j, const std::string& where, const std::string& at) {
    if (!j.is_number_unsigned()) doc_error(where, at, "vertex id must be a non-negative integer");
    const std::uint64_t v = j.get<std::uint64_t>();
    if (v > 0xffffffffull) doc_error(where, at, "vertex id out of range");
    return static_cast<VertexId>(v);
}

} // namespace

MultiGraph parse_graph_document(const std::string& json_text, const std::string& where,
                                bool allow_disconnected, std::ostream* warnings) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw GraphError(where + ": " + e.what());
    }
    if (!doc.is_object()) doc_error(where, "document", "graph document must be an object");
    require_fields<GraphError>(doc, {"version", "vertices", "edges"}, where, "document");
    if (!doc.contains("version") || !doc.at("version").is_string())
        doc_error(where, "version", "needs a string 'version'");
    if (doc.at("version").get<std::string>() != "1")
        doc_error(where, "version", "unsupported version '" +
                                        doc.at("version").get<std::string>() + "'");
    if (!doc.contains("vertices") || !doc.at("vertices").is_array())
        doc_error(where, "vertices", "needs an array 'vertices'");
    if (!doc.contains("edges") || !doc.at("edges").is_array())
        doc_error(where, "edges", "needs an array 'edges'");

    MultiGraph g;
    const json& verts = doc.at("vertices");
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const std::string at = "vertices[" + std::to_string(i) + "]";
        const json& jv = verts.at(i);
        if (!jv.is_object()) doc_error(where, at, "vertex entry must be an object");
        require_fields<GraphError>(jv, {"id", "label"}, where, at);
        if (!jv.contains("id")) doc_error(where, at, "missing 'id'");
        const VertexId id = vertex_from_json(jv.at("id"), where, at + ".id");
        std::string label;
        if (jv.contains("label")) {
            if (!jv.at("label").is_string()) doc_error(where, at + ".label", "label must be a string");
            label = jv.at("label").get<std::string>();
        }
        if (g.has_vertex(id)) doc_error(where, at, "duplicate id " + std::to_string(id));
        g.add_vertex(id, std::move(label));
    }

    const json& edges = doc.at("edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string at = "edges[" + std::to_string(i) + "]";
        const json& je = edges.at(i);
        if (!je.is_object()) doc_error(where, at, "edge entry must be an object");
        require_fields<GraphError>(je, {"u", "v", "multiplicity"}, where, at);
        if (!je.contains("u") || !je.contains("v")) doc_error(where, at, "missing 'u' or 'v'");
        const VertexId u = vertex_from_json(je.at("u"), where, at + ".u");
        const VertexId v = vertex_from_json(je.at("v"), where, at + ".v");
        std::uint32_t multiplicity = 1;
        if (je.contains("multiplicity")) {
            if (!je.at("multiplicity").is_number_unsigned() ||
                je.at("multiplicity").get<std::uint64_t>() == 0 ||
                je.at("multiplicity").get<std::uint64_t>() > 0xffffffffull)
                doc_error(where, at + ".multiplicity", "multiplicity must be an integer >= 1");
            multiplicity = je.at("multiplicity").get<std::uint32_t>();
        }
        if (u == v) doc_error(where, at, "self-loops are not allowed");
        if (!g.has_vertex(u))
            doc_error(where, at + ".u", "references undeclared vertex " + std::to_string(u));
        if (!g.has_vertex(v))
            doc_error(where, at + ".v", "references undeclared vertex " + std::to_string(v));
        g.add_edge(u, v, multiplicity);
    }

    if (g.vertex_count() > 0 && connected_components(g).count != 1) {
        if (!allow_disconnected)
            throw GraphError(where + ": graph is disconnected; pass --allow-disconnected "
                             "to proceed anyway");
        if (warnings) *warnings << "warning: " << where << ": graph is disconnected\n";
    }
    return g;
}

MultiGraph load_graph(const std::filesystem::path& path, bool allow_disconnected,
                      std::ostream* warnings) {
    return parse_graph_document(read_file(path), path.string(), allow_disconnected, warnings);
}

nlohmann::json graph_to_json(const MultiGraph& g) {
    json verts = json::array();
    for (const VertexId v : g.vertices()) {
        json jv{{"id", v}};
        if (const std::string* lbl = g.label(v)) jv["label"] = *lbl;
        verts.push_back(std::move(jv));
    }
    json edges = json::array();
    for (const auto& [u, v, m] : g.edge_list())
        edges.push_back(json{{"u", u}, {"v", v}, {"multiplicity", m}});
    return json{{"version", "1"}, {"vertices", std::move(verts)}, {"edges", std::move(edges)}};
}

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string dot_vertex(const MultiGraph& g, VertexId v, const std::string& extra) {
    std::string line = "  " + dot_quote(std::to_string(v));
    std::vector<std::string> attrs;
    if (const std::string* lbl = g.label(v)) attrs.push_back("label=" + dot_quote(*lbl));
    if (!extra.empty()) attrs.push_back(extra);
    if (!attrs.empty()) {
        line += " [";
        for (std::size_t i = 0; i < attrs.size(); ++i) {
            if (i > 0) line += ", ";
            line += attrs[i];
        }
        line += "]";
    }
    return line + ";\n";
}

std::string dot_edge(VertexId u, VertexId v, const std::string& extra) {
    std::string line = "  " + dot_quote(std::to_string(u)) + " -- " + dot_quote(std::to_string(v));
    if (!extra.empty()) line += " [" + extra + "]";
    return line + ";\n";
}

} // namespace

std::string emit_dot(const MultiGraph& g) {
    std::string out = "graph G {\n";
    for (const VertexId v : g.vertices()) out += dot_vertex(g, v, "");
    for (const auto& [u, v, m] : g.edge_list())
        for (std::uint32_t i = 0; i < m; ++i) out += dot_edge(u, v, "");
    out += "}\n";
    return out;
}

std::string emit_dot_diff(const MultiGraph& original, const MultiGraph& post) {
    const std::string deleted_style = "style=dashed, color=gray";
    std::string out = "graph G {\n";
    for (const VertexId v : original.vertices())
        out += dot_vertex(original, v, post.has_vertex(v) ? "" : deleted_style);
    for (const auto& [u, v, m] : original.edge_list()) {
        const std::uint32_t surviving =
            (post.has_vertex(u) && post.has_vertex(v)) ? std::min(m, post.multiplicity(u, v)) : 0;
        for (std::uint32_t i = 0; i < surviving; ++i) out += dot_edge(u, v, "");
        for (std::uint32_t i = surviving; i < m; ++i) out += dot_edge(u, v, deleted_style);
    }
    // contraction can stack parallel copies beyond the original multiplicity
    for (const auto& [u, v, m] : post.edge_list()) {
        const std::uint32_t original_mult =
            (original.has_vertex(u) && original.has_vertex(v)) ? original.multiplicity(u, v) : 0;
        for (std::uint32_t i = original_mult; i < m; ++i) out += dot_edge(u, v, "style=bold");
    }
    out += "}\n";
    return out;
}

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& at,
                               const std::string& why) {
    throw ConfigError(where + ": " + at + ": " + why);
}

std::uint64_t uint_field(const json& j, const std::string& where, const std::string& at) {
    if (!j.is_number_unsigned()) config_error(where, at, "must be a non-negative integer");
    return j.get<std::uint64_t>();
}

SeedSpec parse_seed_spec(const json& j, const std::string& where) {
    const std::string at = "seed_spec";
    if (!j.is_object()) config_error(where, at, "must be an object");
    require_fields<ConfigError>(j, {"n_total", "marked", "seed_edges"}, where, at);
    if (!j.contains("n_total") || !j.contains("marked") || !j.contains("seed_edges"))
        config_error(where, at, "needs 'n_total', 'marked' and 'seed_edges'");
    SeedSpec spec;
    const std::uint64_t n = uint_field(j.at("n_total"), where, at + ".n_total");
    if (n == 0 || n > 0xffffffffull) config_error(where, at + ".n_total", "must be >= 1");
    spec.n_total = static_cast<std::uint32_t>(n);
    if (!j.at("marked").is_array()) config_error(where, at + ".marked", "must be an array");
    for (std::size_t i = 0; i < j.at("marked").size(); ++i)
        spec.marked.push_back(vertex_from_json(j.at("marked").at(i), where,
                                               at + ".marked[" + std::to_string(i) + "]"));
    if (!j.at("seed_edges").is_array()) config_error(where, at + ".seed_edges", "must be an array");
    for (std::size_t i = 0; i < j.at("seed_edges").size(); ++i) {
        const std::string eat = at + ".seed_edges[" + std::to_string(i) + "]";
        const json& je = j.at("seed_edges").at(i);
        if (!je.is_array() || je.size() != 2)
            config_error(where, eat, "must be a two-element array [u, v]");
        spec.seed_edges.emplace_back(vertex_from_json(je.at(0), where, eat + "[0]"),
                                     vertex_from_json(je.at(1), where, eat + "[1]"));
    }
    try {
        validate_seed_spec(spec);
    } catch (const Error& e) {
        config_error(where, at, e.what());
    }
    return spec;
}

CouplingMap parse_coupling(const json& j, const SeedSpec& spec, const std::string& where) {
    const std::string at = "coupling";
    if (!j.is_array()) config_error(where, at, "must be an array of [driver, image] pairs");
    CouplingMap coupling;
    std::set<VertexId> images;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string eat = at + "[" + std::to_string(i) + "]";
        const json& jp = j.at(i);
        if (!jp.is_array() || jp.size() != 2)
            config_error(where, eat, "must be a two-element array [driver, image]");
        const VertexId a = vertex_from_json(jp.at(0), where, eat + "[0]");
        const VertexId b = vertex_from_json(jp.at(1), where, eat + "[1]");
        if (a >= spec.n_total)
            config_error(where, eat, "driver vertex " + std::to_string(a) +
                                         " outside the universe 0.." +
                                         std::to_string(spec.n_total - 1));
        if (!coupling.image.emplace(a, b).second)
            config_error(where, eat, "driver vertex " + std::to_string(a) + " mapped twice");
        if (!images.insert(b).second)
            config_error(where, eat, "image vertex " + std::to_string(b) +
                                         " used twice; the coupling must be injective");
    }
    if (coupling.image.size() != spec.n_total)
        config_error(where, at, "coupling must cover all " + std::to_string(spec.n_total) +
                                    " driver vertices");
    return coupling;
}

MetricChoice parse_metric(const json& j, const std::string& where) {
    const std::string at = "metric";
    if (!j.is_object()) config_error(where, at, "must be an object");
    require_fields<ConfigError>(j, {"kind", "smoothing"}, where, at);
    if (!j.contains("kind") || !j.at("kind").is_string())
        config_error(where, at, "needs a string 'kind'");
    MetricChoice m;
    try {
        m.kind = metric_kind_from_name(j.at("kind").get<std::string>());
    } catch (const Error& e) {
        config_error(where, at + ".kind", e.what());
    }
    if (j.contains("smoothing")) {
        if (!j.at("smoothing").is_number()) config_error(where, at + ".smoothing", "must be a number");
        m.smoothing = j.at("smoothing").get<double>();
        if (m.smoothing < 0.0) config_error(where, at + ".smoothing", "must be >= 0");
    }
    return m;
}

AttackModeSpec parse_attack_mode(const json& j, const std::string& where) {
    const std::string at = "attack_mode";
    if (!j.is_object()) config_error(where, at, "must be an object");
    require_fields<ConfigError>(j, {"kind", "k"}, where, at);
    if (!j.contains("kind") || !j.at("kind").is_string())
        config_error(where, at, "needs a string 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    AttackModeSpec mode;
    if (kind == "SINGLE") {
        mode.kind = AttackMode::Single;
    } else if (kind == "SIMULTANEOUS") {
        mode.kind = AttackMode::Simultaneous;
    } else if (kind == "SUBSETS") {
        mode.kind = AttackMode::Subsets;
        if (!j.contains("k")) config_error(where, at, "SUBSETS needs 'k'");
        const std::uint64_t k = uint_field(j.at("k"), where, at + ".k");
        if (k < 1 || k > 0xffffffffull) config_error(where, at + ".k", "must be >= 1");
        mode.subset_size = static_cast<std::uint32_t>(k);
        return mode;
    } else {
        config_error(where, at + ".kind",
                     "expected SINGLE, SIMULTANEOUS or SUBSETS, got '" + kind + "'");
    }
    if (j.contains("k")) config_error(where, at, "'k' only applies to SUBSETS");
    return mode;
}

ScenarioMode parse_scenario_mode(const json& j, const std::string& where) {
    const std::string at = "scenario_mode";
    if (!j.is_object()) config_error(where, at, "must be an object");
    require_fields<ConfigError>(j, {"kind", "cap", "count", "rng_seed"}, where, at);
    if (!j.contains("kind") || !j.at("kind").is_string())
        config_error(where, at, "needs a string 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    ScenarioMode mode;
    if (kind == "EXHAUSTIVE") {
        mode.kind = ScenarioMode::Kind::Exhaustive;
        if (j.contains("count") || j.contains("rng_seed"))
            config_error(where, at, "'count'/'rng_seed' only apply to SAMPLE");
        if (j.contains("cap")) {
            const std::uint64_t cap = uint_field(j.at("cap"), where, at + ".cap");
            if (cap == 0) config_error(where, at + ".cap", "must be >= 1");
            mode.exhaustive_cap = cap;
        }
    } else if (kind == "SAMPLE") {
        mode.kind = ScenarioMode::Kind::Sample;
        if (j.contains("cap")) config_error(where, at, "'cap' only applies to EXHAUSTIVE");
        if (!j.contains("count")) config_error(where, at, "SAMPLE needs 'count'");
        mode.sample_count = uint_field(j.at("count"), where, at + ".count");
        if (mode.sample_count == 0) config_error(where, at + ".count", "must be >= 1");
        if (j.contains("rng_seed"))
            mode.rng_seed = uint_field(j.at("rng_seed"), where, at + ".rng_seed");
    } else {
        config_error(where, at + ".kind", "expected EXHAUSTIVE or SAMPLE, got '" + kind + "'");
    }
    return mode;
}

} // namespace

RunConfig parse_config_document(const std::string& json_text, const std::string& where,
                                const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(where + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(where + ": config must be an object");
    require_fields<ConfigError>(
        doc,
        {"version", "graph_path", "seed_spec", "coupling", "epsilon", "metric", "rule_set",
         "attack_mode", "scenario_mode", "output_path", "dot_path", "allow_disconnected"},
        where, "document");
    for (const char* required : {"version", "graph_path", "seed_spec", "coupling", "epsilon",
                                 "rule_set", "attack_mode", "scenario_mode"})
        if (!doc.contains(required))
            config_error(where, "document", std::string("missing required field '") + required + "'");

    if (!doc.at("version").is_string() || doc.at("version").get<std::string>() != "1")
        config_error(where, "version", "unsupported config version");
    if (!doc.at("graph_path").is_string() || doc.at("graph_path").get<std::string>().empty())
        config_error(where, "graph_path", "must be a non-empty string");

    RunConfig config;
    config.graph_path = base_dir / doc.at("graph_path").get<std::string>();
    config.seed = parse_seed_spec(doc.at("seed_spec"), where);
    config.coupling = parse_coupling(doc.at("coupling"), config.seed, where);

    const json& eps = doc.at("epsilon");
    if (eps.is_string()) {
        config.epsilon_text = eps.get<std::string>();
    } else if (eps.is_number()) {
        config.epsilon_text = eps.dump();
    } else {
        config_error(where, "epsilon", "must be a decimal string or number");
    }
    try {
        config.binning.epsilon = parse_epsilon(config.epsilon_text);
    } catch (const Error& e) {
        config_error(where, "epsilon", e.what());
    }
    if (config.binning.epsilon <= 0) config_error(where, "epsilon", "must be > 0");

    if (doc.contains("metric")) config.binning.metric = parse_metric(doc.at("metric"), where);
    config.binning.mode = parse_scenario_mode(doc.at("scenario_mode"), where);

    if (!doc.at("rule_set").is_string() || doc.at("rule_set").get<std::string>().empty())
        config_error(where, "rule_set", "must be a non-empty string");
    config.rule_set_source = doc.at("rule_set").get<std::string>();
    // resolve rule-set paths (built-in names pass through untouched)
    const auto& builtins = builtin_rule_set_names();
    if (std::find(builtins.begin(), builtins.end(), config.rule_set_source) == builtins.end())
        config.rule_set_source = (base_dir / config.rule_set_source).string();

    config.attack_mode = parse_attack_mode(doc.at("attack_mode"), where);

    if (doc.contains("output_path")) {
        if (!doc.at("output_path").is_string() || doc.at("output_path").get<std::string>().empty())
            config_error(where, "output_path", "must be a non-empty string");
        config.output_path = base_dir / doc.at("output_path").get<std::string>();
    } else {
        config.output_path = base_dir / "report.json";
    }
    if (doc.contains("dot_path")) {
        if (!doc.at("dot_path").is_string() || doc.at("dot_path").get<std::string>().empty())
            config_error(where, "dot_path", "must be a non-empty string");
        config.dot_path = base_dir / doc.at("dot_path").get<std::string>();
    }
    if (doc.contains("allow_disconnected")) {
        if (!doc.at("allow_disconnected").is_boolean())
            config_error(where, "allow_disconnected", "must be a boolean");
        config.allow_disconnected = doc.at("allow_disconnected").get<bool>();
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::filesystem::path base = path.parent_path();
    if (base.empty()) base = ".";
    return parse_config_document(read_file(path), path.string(), base);
}

void validate_coupling(const SeedSpec& spec, const CouplingMap& coupling, const MultiGraph& g) {
    if (coupling.image.size() != spec.n_total)
        throw ConfigError("coupling must cover all " + std::to_string(spec.n_total) +
                          " driver vertices");
    std::set<VertexId> images;
    for (const auto& [a, b] : coupling.image) {
        if (a >= spec.n_total)
            throw ConfigError("coupling driver vertex " + std::to_string(a) +
                              " outside the universe");
        if (!images.insert(b).second)
            throw ConfigError("coupling image " + std::to_string(b) + " used twice");
        if (!g.has_vertex(b))
            throw ConfigError("coupling image " + std::to_string(b) +
                              " is not a vertex of the graph");
    }
}

nlohmann::json outcome_to_json(const AttackOutcome& outcome, bool include_post_g) {
    json log = json::array();
    for (const ChangeRecord& rec : outcome.change_log) {
        json jr{{"round", rec.round},
                {"rule_index", rec.rule_index},
                {"action", action_kind_name(rec.action)},
                {"scenario_node", rec.scenario_node},
                {"effect", graph_effect_name(rec.effect)}};
        if (rec.effect == GraphEffect::DeleteVertex ||
            rec.effect == GraphEffect::DeleteIncidentEdges) {
            jr["g_u"] = rec.g_u;
        } else if (rec.effect == GraphEffect::ContractEdge) {
            jr["g_u"] = rec.g_u;
            jr["g_v"] = rec.g_v;
        }
        if (rec.action == ActionKind::FailScenarioNeighbors) jr["newly_failed"] = rec.newly_failed;
        log.push_back(std::move(jr));
    }
    json j{{"scenario_key", outcome.scenario_key},
           {"attacked_nodes", outcome.attacked_nodes},
           {"failed_nodes", outcome.failed_nodes},
           {"component_count", outcome.component_count},
           {"rounds_used", outcome.rounds_used},
           {"change_log", std::move(log)}};
    if (include_post_g) j["post_g"] = graph_to_json(outcome.post_g);
    return j;
}

nlohmann::json report_to_json(const DoomsdayReport& report, const RunConfig& config) {
    json search{{"kind", report.search_mode.kind == ScenarioMode::Kind::Exhaustive ? "EXHAUSTIVE"
                                                                                   : "SAMPLE"},
                {"space_size", report.search_mode.space_size.str()}};
    if (report.search_mode.kind == ScenarioMode::Kind::Sample) {
        search["sample_count"] = report.search_mode.sample_count;
        search["rng_seed"] = report.search_mode.rng_seed;
    }

    json ranked = json::array();
    for (const RankedEntry& e : report.ranked)
        ranked.push_back(json{{"scenario_key", e.scenario_key},
                              {"component_count", e.best.component_count},
                              {"attacked_nodes", e.best.attacked_nodes},
                              {"failed_nodes", e.best.failed_nodes},
                              {"rounds_used", e.best.rounds_used}});

    std::string attack_mode;
    switch (config.attack_mode.kind) {
        case AttackMode::Single: attack_mode = "SINGLE"; break;
        case AttackMode::Simultaneous: attack_mode = "SIMULTANEOUS"; break;
        case AttackMode::Subsets:
            attack_mode = "SUBSETS:" + std::to_string(config.attack_mode.subset_size);
            break;
    }

    const RankedEntry& winner = report.ranked.front();
    return json{{"version", "1"},
                {"attack_mode", attack_mode},
                {"epsilon", config.epsilon_text},
                {"metric",
                 json{{"kind", metric_kind_name(config.binning.metric.kind)},
                      {"smoothing", config.binning.metric.smoothing}}},
                {"rule_set", config.rule_set_source},
                {"search_mode", std::move(search)},
                {"total_evaluated", report.total_evaluated},
                {"doomsday", outcome_to_json(winner.best, true)},
                {"ties", report.ties},
                {"tau_doomsday", report.tau_doomsday.str()},
                {"tau_seed", report.tau_seed.str()},
                {"ranked", std::move(ranked)}};
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " +
                          ec.message());
}

PipelineResult run_pipeline(const RunConfig& config, unsigned threads, std::ostream* warnings) {
    const MultiGraph g = load_graph(config.graph_path, config.allow_disconnected, warnings);
    validate_coupling(config.seed, config.coupling, g);
    const RuleSet rs = load_rule_set(config.rule_set_source);

    const std::uint32_t n_marked = static_cast<std::uint32_t>(config.seed.marked.size());
    SearchModeInfo info;
    info.kind = config.binning.mode.kind;
    info.space_size = scenario_count(config.seed.n_total, n_marked);

    std::vector<Scenario> scenarios;
    if (config.binning.mode.kind == ScenarioMode::Kind::Exhaustive) {
        scenarios = enumerate_scenarios(config.seed, config.binning.mode.exhaustive_cap);
    } else {
        info.sample_count = config.binning.mode.sample_count;
        info.rng_seed = config.binning.mode.rng_seed;
        scenarios = sample_scenarios(config.seed, config.binning.mode.sample_count,
                                     config.binning.mode.rng_seed);
    }

    const std::vector<Scenario> retained =
        bin_scenarios(scenarios, config.seed, config.binning, threads);

    PipelineResult result;
    result.report = doomsday(g, config.coupling, retained, config.seed, rs, config.attack_mode,
                             info, threads);
    result.report_text = report_to_json(result.report, config).dump(2) + "\n";

    if (!config.output_path.empty()) write_text_atomic(config.output_path, result.report_text);
    if (config.dot_path) {
        const RankedEntry& winner = result.report.ranked.front();
        write_text_atomic(*config.dot_path, emit_dot_diff(g, winner.best.post_g));
    }
    return result;
}

} // namespace netstress
