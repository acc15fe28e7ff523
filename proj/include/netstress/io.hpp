#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "netstress/attack.hpp"
#include "netstress/doomsday.hpp"
#include "netstress/graph.hpp"
#include "netstress/scenario.hpp"

namespace netstress {

/// One run, fully described: every user input the engine needs. Paths are
/// resolved relative to the config file's directory at load time.
struct RunConfig {
    std::filesystem::path graph_path;
    SeedSpec seed;
    CouplingMap coupling; // full driver universe -> distinct G vertices
    BinningConfig binning;
    std::string epsilon_text; // original decimal spelling, echoed in reports
    std::string rule_set_source;
    AttackModeSpec attack_mode;
    std::filesystem::path output_path;
    std::optional<std::filesystem::path> dot_path;
    bool allow_disconnected = false;
};

/// Parses a graph document. Connectedness is validated here: error by
/// default, downgraded to a warning on `warnings` when allow_disconnected.
MultiGraph parse_graph_document(const std::string& json_text, const std::string& where,
                                bool allow_disconnected, std::ostream* warnings);
MultiGraph load_graph(const std::filesystem::path& path, bool allow_disconnected,
                      std::ostream* warnings);
nlohmann::json graph_to_json(const MultiGraph& g);

/// DOT text; parallel edges appear as repeated edge statements.
std::string emit_dot(const MultiGraph& g);
/// DOT diff: vertices and edge copies removed by an attack are styled
/// dashed/gray; edge copies created by contraction are styled bold.
std::string emit_dot_diff(const MultiGraph& original, const MultiGraph& post);

RunConfig parse_config_document(const std::string& json_text, const std::string& where,
                                const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Checks the coupling against the spec and graph: domain covers the whole
/// driver universe, injective, every image a vertex of g.
void validate_coupling(const SeedSpec& spec, const CouplingMap& coupling, const MultiGraph& g);

nlohmann::json outcome_to_json(const AttackOutcome& outcome, bool include_post_g);
nlohmann::json report_to_json(const DoomsdayReport& report, const RunConfig& config);

/// Writes via a temp file in the target directory plus rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct PipelineResult {
    DoomsdayReport report;
    std::string report_text; // the serialized document, byte-deterministic
};

/// parse -> enumerate/sample -> bin -> attack -> doomsday -> write.
PipelineResult run_pipeline(const RunConfig& config, unsigned threads, std::ostream* warnings);

} // namespace netstress
