#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "netstress/doomsday.hpp"
#include "netstress/io.hpp"

namespace {

using namespace netstress;

// Exit codes, one per pipeline stage (documented in docs/formats.md).
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitGraph = 4;
constexpr int kExitScenario = 5;
constexpr int kExitMetric = 6;
constexpr int kExitEmptyBin = 7;
constexpr int kExitAttack = 8;
constexpr int kExitIo = 9;

struct CliOptions {
    std::string config_path;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> metric;
    std::optional<std::string> epsilon;
    std::optional<std::string> rules;
    std::optional<std::string> attack_mode;
    std::optional<std::uint64_t> max_scenarios;
    bool allow_disconnected = false;
};

bool color_enabled() {
    return isatty(STDOUT_FILENO) != 0 && std::getenv("NO_COLOR") == nullptr;
}

std::string emph(const std::string& text) {
    return color_enabled() ? "\033[1;32m" + text + "\033[0m" : text;
}

AttackModeSpec parse_attack_mode_flag(const std::string& text) {
    if (text == "SINGLE") return {AttackMode::Single, 1};
    if (text == "SIMULTANEOUS") return {AttackMode::Simultaneous, 1};
    if (text.rfind("SUBSETS:", 0) == 0) {
        const std::string k = text.substr(8);
        if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos || k.size() > 9)
            throw ConfigError("bad subset size in --attack-mode '" + text + "'");
        const unsigned long value = std::stoul(k);
        if (value < 1) throw ConfigError("subset size must be >= 1");
        return {AttackMode::Subsets, static_cast<std::uint32_t>(value)};
    }
    throw ConfigError("bad --attack-mode '" + text +
                      "' (expected SINGLE, SIMULTANEOUS or SUBSETS:<k>)");
}

RunConfig load_config_with_overrides(const CliOptions& opts) {
    if (opts.config_path.empty()) throw ConfigError("no config given; pass --config <path>");
    RunConfig config = load_config(opts.config_path);
    if (opts.allow_disconnected) config.allow_disconnected = true;
    if (opts.seed) config.binning.mode.rng_seed = *opts.seed;
    if (opts.metric) config.binning.metric.kind = metric_kind_from_name(*opts.metric);
    if (opts.epsilon) {
        config.binning.epsilon = parse_epsilon(*opts.epsilon);
        if (config.binning.epsilon <= 0) throw ConfigError("--epsilon must be > 0");
        config.epsilon_text = *opts.epsilon;
    }
    if (opts.rules) config.rule_set_source = *opts.rules;
    if (opts.attack_mode) config.attack_mode = parse_attack_mode_flag(*opts.attack_mode);
    if (opts.max_scenarios) {
        if (*opts.max_scenarios == 0) throw ConfigError("--max-scenarios must be >= 1");
        config.binning.mode.exhaustive_cap = *opts.max_scenarios;
    }
    return config;
}

std::vector<Scenario> scenarios_for(const RunConfig& config) {
    if (config.binning.mode.kind == ScenarioMode::Kind::Exhaustive)
        return enumerate_scenarios(config.seed, config.binning.mode.exhaustive_cap);
    return sample_scenarios(config.seed, config.binning.mode.sample_count,
                            config.binning.mode.rng_seed);
}

int cmd_validate(const CliOptions& opts) {
    const RunConfig config = load_config_with_overrides(opts);
    const MultiGraph g = load_graph(config.graph_path, config.allow_disconnected, &std::cerr);
    validate_coupling(config.seed, config.coupling, g);
    const RuleSet rs = load_rule_set(config.rule_set_source);
    const BigInt space =
        scenario_count(config.seed.n_total, static_cast<std::uint32_t>(config.seed.marked.size()));
    std::cout << "config OK\n"
              << "  main network: " << g.vertex_count() << " vertices, " << g.edge_count()
              << " edges\n"
              << "  driver universe: N = " << config.seed.n_total << ", marked link nodes: "
              << config.seed.marked.size() << "\n"
              << "  scenario space: " << space.str() << "\n"
              << "  metric: " << metric_kind_name(config.binning.metric.kind)
              << ", epsilon = " << config.epsilon_text << "\n"
              << "  rule set: " << rs.name << " (" << rs.rules.size() << " rule(s), max "
              << rs.max_rounds << " round(s))\n";
    return 0;
}

int cmd_scenarios_count(const CliOptions& opts) {
    const RunConfig config = load_config_with_overrides(opts);
    std::cout << scenario_count(config.seed.n_total,
                                static_cast<std::uint32_t>(config.seed.marked.size()))
                     .str()
              << "\n";
    return 0;
}

int cmd_scenarios_enumerate(const CliOptions& opts) {
    const RunConfig config = load_config_with_overrides(opts);
    for (const Scenario& s : enumerate_scenarios(config.seed, config.binning.mode.exhaustive_cap))
        std::cout << s.canonical_key() << "\n";
    return 0;
}

int cmd_scenarios_sample(const CliOptions& opts, std::optional<std::uint64_t> count) {
    const RunConfig config = load_config_with_overrides(opts);
    std::uint64_t n = 0;
    if (count) {
        n = *count;
    } else if (config.binning.mode.kind == ScenarioMode::Kind::Sample) {
        n = config.binning.mode.sample_count;
    } else {
        throw ConfigError("config is not in SAMPLE mode; pass --count <n>");
    }
    for (const Scenario& s : sample_scenarios(config.seed, n, config.binning.mode.rng_seed))
        std::cout << s.canonical_key() << "\n";
    return 0;
}

int cmd_bin(const CliOptions& opts) {
    const RunConfig config = load_config_with_overrides(opts);
    const std::vector<Scenario> retained =
        bin_scenarios(scenarios_for(config), config.seed, config.binning, opts.threads);
    if (retained.empty())
        throw EmptyBinError("no scenarios retained: increase epsilon or sample more scenarios");
    for (const Scenario& s : retained) std::cout << s.canonical_key() << "\n";
    return 0;
}

int cmd_attack(const CliOptions& opts, const std::string& key,
               const std::vector<std::uint64_t>& nodes) {
    const RunConfig config = load_config_with_overrides(opts);
    const MultiGraph g = load_graph(config.graph_path, config.allow_disconnected, &std::cerr);
    validate_coupling(config.seed, config.coupling, g);
    const RuleSet rs = load_rule_set(config.rule_set_source);

    const Scenario scenario = Scenario::from_key(key);
    for (const VertexId v : scenario.vertices)
        if (v >= config.seed.n_total)
            throw ScenarioError("scenario vertex " + std::to_string(v) +
                                " outside the driver universe");
    for (const VertexId m : config.seed.marked)
        if (!std::binary_search(scenario.vertices.begin(), scenario.vertices.end(), m))
            throw ScenarioError("scenario does not contain marked link node " + std::to_string(m));

    std::vector<VertexId> attack_set;
    for (const std::uint64_t n : nodes) {
        if (n > 0xffffffffull) throw AttackError("node id out of range");
        attack_set.push_back(static_cast<VertexId>(n));
    }
    const CoupledSystem system = couple(g, scenario, config.coupling);
    const AttackOutcome outcome = attack_nodes(system, attack_set, rs);
    std::cout << outcome_to_json(outcome, true).dump(2) << "\n";
    return 0;
}

int cmd_doomsday(const CliOptions& opts) {
    const RunConfig config = load_config_with_overrides(opts);
    const PipelineResult result = run_pipeline(config, opts.threads, &std::cerr);
    const DoomsdayReport& report = result.report;
    const RankedEntry& winner = report.ranked.front();
    std::cout << emph("doomsday scenario") << ": " << report.doomsday_key << "\n"
              << "  component count: " << winner.best.component_count << "\n"
              << "  attacked nodes: " << nlohmann::json(winner.best.attacked_nodes).dump() << "\n"
              << "  ties: " << report.ties.size() << " scenario(s)\n"
              << "  tau(doomsday): " << report.tau_doomsday.str() << "\n"
              << "  tau(seed): " << report.tau_seed.str() << "\n"
              << "  evaluated: " << report.total_evaluated << " scenario(s) of "
              << report.search_mode.space_size.str() << " in the space\n";
    if (!config.output_path.empty())
        std::cout << "  report: " << config.output_path.string() << "\n";
    if (config.dot_path) std::cout << "  dot: " << config.dot_path->string() << "\n";
    return 0;
}

int cmd_report(const CliOptions& opts, bool dot) {
    if (!dot) throw ConfigError("report currently only supports --dot");
    const RunConfig config = load_config_with_overrides(opts);
    const MultiGraph g = load_graph(config.graph_path, config.allow_disconnected, &std::cerr);

    nlohmann::json report;
    try {
        report = nlohmann::json::parse(std::ifstream(config.output_path));
    } catch (const std::exception& e) {
        throw IoError("cannot parse report '" + config.output_path.string() + "': " + e.what() +
                      " (run doomsday first)");
    }
    if (!report.contains("doomsday") || !report.at("doomsday").contains("post_g"))
        throw IoError("report '" + config.output_path.string() + "' has no doomsday.post_g");
    const MultiGraph post = parse_graph_document(report.at("doomsday").at("post_g").dump(),
                                                 "report.doomsday.post_g", true, nullptr);
    std::cout << emit_dot_diff(g, post);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"netstress: graph-theoretic stress testing of coupled financial networks"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "run configuration (JSON)");
    app.add_option("--threads", opts.threads, "worker threads for scenario evaluation")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", opts.seed, "override the sample-mode RNG seed");
    app.add_option("--metric", opts.metric,
                   "override the metric (HELLINGER, BHATTACHARYYA_DISTANCE, KL_DIVERGENCE)");
    app.add_option("--epsilon", opts.epsilon, "override the binning tolerance (decimal string)");
    app.add_option("--rules", opts.rules, "override the rule set (built-in name or path)");
    app.add_option("--attack-mode", opts.attack_mode,
                   "override the attack mode (SINGLE, SIMULTANEOUS, SUBSETS:<k>)");
    app.add_option("--max-scenarios", opts.max_scenarios, "override the exhaustive-mode cap");
    app.add_flag("--allow-disconnected", opts.allow_disconnected,
                 "downgrade the disconnected-graph error to a warning");

    auto* validate = app.add_subcommand("validate", "validate a run configuration");
    std::string validate_config;
    validate->add_option("config", validate_config, "configuration path");

    auto* scenarios = app.add_subcommand("scenarios", "inspect the scenario space");
    scenarios->require_subcommand(1);
    auto* sc_count = scenarios->add_subcommand("count", "print the scenario-space cardinality");
    auto* sc_enumerate = scenarios->add_subcommand("enumerate", "print every canonical key");
    auto* sc_sample = scenarios->add_subcommand("sample", "print sampled canonical keys");
    std::optional<std::uint64_t> sample_count;
    sc_sample->add_option("--count", sample_count, "number of draws (defaults to the config's)");

    auto* bin = app.add_subcommand("bin", "print the canonical keys retained by binning");

    auto* attack = app.add_subcommand("attack", "attack one scenario and print the outcome");
    std::string attack_scenario;
    std::vector<std::uint64_t> attack_nodes_opt;
    attack->add_option("--scenario", attack_scenario, "canonical scenario key")->required();
    attack->add_option("--node", attack_nodes_opt, "scenario node to attack (repeatable)")
        ->required();

    auto* doomsday_cmd = app.add_subcommand("doomsday", "run the full pipeline and write the report");

    auto* report_cmd = app.add_subcommand("report", "render artifacts from a written report");
    bool report_dot = false;
    report_cmd->add_flag("--dot", report_dot, "emit a DOT diff of the doomsday attack");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) {
            if (!validate_config.empty()) opts.config_path = validate_config;
            return cmd_validate(opts);
        }
        if (scenarios->parsed()) {
            if (sc_count->parsed()) return cmd_scenarios_count(opts);
            if (sc_enumerate->parsed()) return cmd_scenarios_enumerate(opts);
            if (sc_sample->parsed()) return cmd_scenarios_sample(opts, sample_count);
        }
        if (bin->parsed()) return cmd_bin(opts);
        if (attack->parsed()) return cmd_attack(opts, attack_scenario, attack_nodes_opt);
        if (doomsday_cmd->parsed()) return cmd_doomsday(opts);
        if (report_cmd->parsed()) return cmd_report(opts, report_dot);
        std::cerr << "error: no command\n";
        return kExitUsage;
    } catch (const EmptyBinError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyBin;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGraph;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenario;
    } catch (const MetricError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMetric;
    } catch (const AttackError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAttack;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
