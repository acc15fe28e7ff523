#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "netstress/graph.hpp"
#include "netstress/metrics.hpp"

namespace netstress {

using BigRational = boost::multiprecision::cpp_rational;

/// The user's seed driver network S0 plus the fixed driver universe it
/// lives in. The universe is the vertex set {0, ..., n_total-1}; the seed's
/// vertex set is exactly that universe, and every scenario draws its
/// vertices from it.
struct SeedSpec {
    std::uint32_t n_total = 0;                         // N, the driver universe size
    std::vector<VertexId> marked;                      // link nodes a_1..a_n, ascending
    std::vector<std::pair<VertexId, VertexId>> seed_edges; // simple edges of S0, u < v, ascending

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Throws ScenarioError unless: 1 <= |marked| <= n_total, marked ids lie in
/// the universe and ascend strictly, and seed_edges are normalized simple
/// edges over the universe.
void validate_seed_spec(const SeedSpec& spec);

/// One hypothesis about the true driver network: a subgraph of the complete
/// graph on the universe that contains every marked node. Always simple.
struct Scenario {
    std::vector<VertexId> vertices;                    // ascending, unique
    std::vector<std::pair<VertexId, VertexId>> edges;  // u < v, ascending, unique

    /// Unique, totally ordered encoding, e.g. "V0,1,2|E0-1,1-2". Scenario
    /// order everywhere in the engine is plain byte order of these keys.
    std::string canonical_key() const;
    static Scenario from_key(const std::string& key);

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// S0 viewed as a scenario (all universe vertices included).
Scenario seed_scenario(const SeedSpec& spec);

/// The scenario as a MultiGraph over its included vertices.
MultiGraph scenario_graph(const Scenario& s);

/// Scenario structure minus the given failed vertices and their edges.
MultiGraph attacked_scenario_graph(const Scenario& s, const std::vector<VertexId>& failed);

/// Degree distribution over included vertices only; coupling links to the
/// main network never count.
DegreeDistribution scenario_degree_distribution(const Scenario& s);

struct ScenarioMode {
    enum class Kind { Exhaustive, Sample };
    Kind kind = Kind::Exhaustive;
    BigInt exhaustive_cap = 1000000;
    std::uint64_t sample_count = 0;
    std::uint64_t rng_seed = 0;
};

struct BinningConfig {
    BigRational epsilon;  // tolerance, > 0; compared exactly
    MetricChoice metric;
    ScenarioMode mode;
};

/// Parses a decimal string ("0.3", "1e-9", "2.5e2") to an exact rational.
BigRational parse_epsilon(const std::string& text);

/// |{scenarios}| in closed form: sum over k of C(N-n, k) * 2^C(n+k, 2).
BigInt scenario_count(std::uint32_t n_total, std::uint32_t n_marked);

/// Every scenario exactly once, in canonical_key order. The seed is always
/// among them. Refuses (ScenarioError) when the space exceeds `cap`.
std::vector<Scenario> enumerate_scenarios(const SeedSpec& spec, const BigInt& cap);

/// One exactly-uniform draw from the scenario space: the optional-vertex
/// subset is drawn with probability proportional to 2^C(n+|T|, 2) using
/// exact integer weights, then each edge of the induced complete graph is
/// kept with probability 1/2.
Scenario sample_scenario(const SeedSpec& spec, std::mt19937_64& eng);

/// `count` i.i.d. draws, de-duplicated by canonical_key, returned in
/// canonical_key order. Reproducible from rng_seed.
std::vector<Scenario> sample_scenarios(const SeedSpec& spec, std::uint64_t count,
                                       std::uint64_t rng_seed);

/// Keeps exactly the scenarios with distance(degdist(S_i), degdist(S0))
/// strictly below epsilon, in canonical_key order. Distances may be
/// evaluated concurrently; the comparison is exact (double vs rational).
std::vector<Scenario> bin_scenarios(const std::vector<Scenario>& scenarios, const SeedSpec& spec,
                                    const BinningConfig& config, unsigned threads = 1);

/// Erdos-Renyi seed: each of the C(N,2) edges present independently with
/// probability p; every universe vertex marked. Reproducible from rng_seed.
SeedSpec generate_er_seed(std::uint32_t n_total, double p, std::uint64_t rng_seed);

} // namespace netstress
