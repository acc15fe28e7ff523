#include "netstress/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "netstress/parallel.hpp"
#include "netstress/rng.hpp"

namespace netstress {

namespace {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

std::uint64_t pairs_of(std::uint64_t m) { return m * (m - 1) / 2; }

// Pairs of a sorted vertex set in canonical order: (v0,v1), (v0,v2), ...
std::vector<std::pair<VertexId, VertexId>> pair_list(const std::vector<VertexId>& verts) {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    pairs.reserve(pairs_of(verts.size()));
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            pairs.emplace_back(verts[i], verts[j]);
    return pairs;
}

std::vector<VertexId> optional_vertices(const SeedSpec& spec) {
    std::vector<VertexId> out;
    std::size_t m = 0;
    for (VertexId v = 0; v < spec.n_total; ++v) {
        if (m < spec.marked.size() && spec.marked[m] == v) {
            ++m;
        } else {
            out.push_back(v);
        }
    }
    return out;
}

} // namespace

void validate_seed_spec(const SeedSpec& spec) {
    if (spec.n_total == 0) throw ScenarioError("driver universe is empty (n_total = 0)");
    if (spec.marked.empty()) throw ScenarioError("at least one marked link node is required");
    if (spec.marked.size() > spec.n_total)
        throw ScenarioError("more marked nodes than universe vertices");
    for (std::size_t i = 0; i < spec.marked.size(); ++i) {
        if (spec.marked[i] >= spec.n_total)
            throw ScenarioError("marked node " + std::to_string(spec.marked[i]) +
                                " outside the driver universe 0.." +
                                std::to_string(spec.n_total - 1));
        if (i > 0 && spec.marked[i - 1] >= spec.marked[i])
            throw ScenarioError("marked nodes must ascend strictly");
    }
    for (std::size_t i = 0; i < spec.seed_edges.size(); ++i) {
        const auto& [u, v] = spec.seed_edges[i];
        if (u >= v) throw ScenarioError("seed edge must be normalized with u < v");
        if (v >= spec.n_total)
            throw ScenarioError("seed edge endpoint " + std::to_string(v) +
                                " outside the driver universe");
        if (i > 0 && !(spec.seed_edges[i - 1] < spec.seed_edges[i]))
            throw ScenarioError("seed edges must ascend strictly");
    }
}

std::string Scenario::canonical_key() const {
    std::string key = "V";
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (i > 0) key += ',';
        key += std::to_string(vertices[i]);
    }
    key += "|E";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0) key += ',';
        key += std::to_string(edges[i].first);
        key += '-';
        key += std::to_string(edges[i].second);
    }
    return key;
}

namespace {

class KeyParser {
public:
    explicit KeyParser(const std::string& text) : text_(text) {}

    Scenario parse() {
        expect('V');
        Scenario s;
        s.vertices.push_back(number());
        while (peek() == ',') {
            ++pos_;
            s.vertices.push_back(number());
        }
        expect('|');
        expect('E');
        if (pos_ < text_.size()) {
            s.edges.push_back(edge());
            while (peek() == ',') {
                ++pos_;
                s.edges.push_back(edge());
            }
        }
        if (pos_ != text_.size()) fail("trailing characters");
        for (std::size_t i = 1; i < s.vertices.size(); ++i)
            if (s.vertices[i - 1] >= s.vertices[i]) fail("vertices must ascend strictly");
        for (std::size_t i = 0; i < s.edges.size(); ++i) {
            const auto& [u, v] = s.edges[i];
            if (u >= v) fail("edge endpoints must satisfy u < v");
            if (!std::binary_search(s.vertices.begin(), s.vertices.end(), u) ||
                !std::binary_search(s.vertices.begin(), s.vertices.end(), v))
                fail("edge endpoint not among the listed vertices");
            if (i > 0 && !(s.edges[i - 1] < s.edges[i])) fail("edges must ascend strictly");
        }
        return s;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw ScenarioError("invalid scenario key '" + text_ + "': " + why);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    VertexId number() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a vertex id");
        std::uint64_t value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (value > 0xffffffffull) fail("vertex id out of range");
            ++pos_;
        }
        return static_cast<VertexId>(value);
    }

    std::pair<VertexId, VertexId> edge() {
        const VertexId u = number();
        expect('-');
        const VertexId v = number();
        return {u, v};
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

} // namespace

Scenario Scenario::from_key(const std::string& key) { return KeyParser(key).parse(); }

Scenario seed_scenario(const SeedSpec& spec) {
    Scenario s;
    s.vertices.reserve(spec.n_total);
    for (VertexId v = 0; v < spec.n_total; ++v) s.vertices.push_back(v);
    s.edges = spec.seed_edges;
    return s;
}

MultiGraph scenario_graph(const Scenario& s) {
    MultiGraph g;
    for (const VertexId v : s.vertices) g.add_vertex(v);
    for (const auto& [u, v] : s.edges) g.add_edge(u, v);
    return g;
}

MultiGraph attacked_scenario_graph(const Scenario& s, const std::vector<VertexId>& failed) {
    MultiGraph g;
    auto is_failed = [&](VertexId v) {
        return std::find(failed.begin(), failed.end(), v) != failed.end();
    };
    for (const VertexId v : s.vertices)
        if (!is_failed(v)) g.add_vertex(v);
    for (const auto& [u, v] : s.edges)
        if (!is_failed(u) && !is_failed(v)) g.add_edge(u, v);
    return g;
}

DegreeDistribution scenario_degree_distribution(const Scenario& s) {
    if (s.vertices.empty()) throw ScenarioError("scenario has no vertices");
    std::map<VertexId, std::size_t> deg;
    for (const VertexId v : s.vertices) deg.emplace(v, 0);
    for (const auto& [u, v] : s.edges) {
        ++deg.at(u);
        ++deg.at(v);
    }
    std::map<std::size_t, std::size_t> counts;
    for (const auto& [v, d] : deg) ++counts[d];
    const double n = static_cast<double>(s.vertices.size());
    DegreeDistribution dist;
    for (const auto& [k, c] : counts)
        dist.entries.emplace_back(k, static_cast<double>(c) / n);
    return dist;
}

BigRational parse_epsilon(const std::string& text) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) -> void {
        throw ScenarioError("invalid tolerance '" + text + "': " + why);
    };
    auto digits = [&]() -> std::string {
        std::string out;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            out += text[pos++];
        return out;
    };

    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    const std::string int_part = digits();
    std::string frac_part;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        frac_part = digits();
    }
    if (int_part.empty() && frac_part.empty()) fail("no digits");

    long long exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_negative = text[pos] == '-';
            ++pos;
        }
        const std::string exp_digits = digits();
        if (exp_digits.empty() || exp_digits.size() > 6) fail("bad exponent");
        exponent = std::stoll(exp_digits);
        if (exp_negative) exponent = -exponent;
    }
    if (pos != text.size()) fail("trailing characters");

    BigInt numerator{int_part.empty() ? "0" : int_part};
    for (const char c : frac_part) {
        numerator *= 10;
        numerator += c - '0';
    }
    BigInt denominator = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) denominator *= 10;
    if (exponent > 0)
        for (long long i = 0; i < exponent; ++i) numerator *= 10;
    else
        for (long long i = 0; i < -exponent; ++i) denominator *= 10;
    if (negative) numerator = -numerator;
    return BigRational(numerator, denominator);
}

BigInt scenario_count(std::uint32_t n_total, std::uint32_t n_marked) {
    if (n_marked < 1 || n_marked > n_total)
        throw ScenarioError("need 1 <= n <= N, got n = " + std::to_string(n_marked) +
                            ", N = " + std::to_string(n_total));
    BigInt total = 0;
    for (std::uint32_t k = 0; k <= n_total - n_marked; ++k)
        total += binomial(n_total - n_marked, k) << pairs_of(n_marked + k);
    return total;
}

std::vector<Scenario> enumerate_scenarios(const SeedSpec& spec, const BigInt& cap) {
    validate_seed_spec(spec);
    const BigInt total = scenario_count(spec.n_total, static_cast<std::uint32_t>(spec.marked.size()));
    if (total > cap)
        throw ScenarioError("scenario space has " + total.str() + " members, above the cap of " +
                            cap.str() + "; use sample mode");

    const std::vector<VertexId> optionals = optional_vertices(spec);
    std::vector<std::pair<std::string, Scenario>> keyed;
    keyed.reserve(static_cast<std::size_t>(total));

    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << optionals.size()); ++subset) {
        std::vector<VertexId> verts = spec.marked;
        for (std::size_t i = 0; i < optionals.size(); ++i)
            if (subset >> i & 1) verts.push_back(optionals[i]);
        std::sort(verts.begin(), verts.end());

        const auto pairs = pair_list(verts);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
            Scenario s;
            s.vertices = verts;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1) s.edges.push_back(pairs[i]);
            std::sort(s.edges.begin(), s.edges.end());
            std::string key = s.canonical_key();
            keyed.emplace_back(std::move(key), std::move(s));
        }
    }

    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Scenario> out;
    out.reserve(keyed.size());
    for (auto& [key, s] : keyed) out.push_back(std::move(s));
    return out;
}

Scenario sample_scenario(const SeedSpec& spec, std::mt19937_64& eng) {
    const std::vector<VertexId> optionals = optional_vertices(spec);
    const std::uint32_t n = static_cast<std::uint32_t>(spec.marked.size());

    // Subset-size weights computed exactly; within a size class every subset
    // is equally likely, so the overall draw is uniform over all scenarios.
    std::vector<BigInt> cumulative;
    BigInt total = 0;
    for (std::uint32_t k = 0; k <= optionals.size(); ++k) {
        total += binomial(optionals.size(), k) << pairs_of(n + k);
        cumulative.push_back(total);
    }
    const BigInt draw = rng_below_big(eng, total);
    std::uint32_t k = 0;
    while (cumulative[k] <= draw) ++k;

    // Uniform k-subset of the optional vertices via partial Fisher-Yates.
    std::vector<VertexId> pool = optionals;
    std::vector<VertexId> verts = spec.marked;
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + rng_below(eng, pool.size() - i);
        std::swap(pool[i], pool[j]);
        verts.push_back(pool[i]);
    }
    std::sort(verts.begin(), verts.end());

    Scenario s;
    s.vertices = std::move(verts);
    for (const auto& pair : pair_list(s.vertices))
        if (rng_below(eng, 2) == 1) s.edges.push_back(pair);
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

std::vector<Scenario> sample_scenarios(const SeedSpec& spec, std::uint64_t count,
                                       std::uint64_t rng_seed) {
    validate_seed_spec(spec);
    if (count < 1) throw ScenarioError("sample count must be >= 1");
    std::mt19937_64 eng(rng_seed);
    std::map<std::string, Scenario> unique;
    for (std::uint64_t i = 0; i < count; ++i) {
        Scenario s = sample_scenario(spec, eng);
        std::string key = s.canonical_key();
        unique.emplace(std::move(key), std::move(s));
    }
    std::vector<Scenario> out;
    out.reserve(unique.size());
    for (auto& [key, s] : unique) out.push_back(std::move(s));
    return out;
}

std::vector<Scenario> bin_scenarios(const std::vector<Scenario>& scenarios, const SeedSpec& spec,
                                    const BinningConfig& config, unsigned threads) {
    validate_seed_spec(spec);
    if (config.epsilon <= 0) throw ScenarioError("tolerance must be > 0");
    const DegreeDistribution seed_dist = scenario_degree_distribution(seed_scenario(spec));

    std::vector<char> keep(scenarios.size(), 0);
    parallel_for_index(scenarios.size(), threads, [&](std::size_t i) {
        const double d = distance(scenario_degree_distribution(scenarios[i]), seed_dist,
                                  config.metric);
        // doubles are dyadic rationals, so this comparison is exact
        keep[i] = BigRational(d) < config.epsilon ? 1 : 0;
    });

    std::vector<std::pair<std::string, Scenario>> keyed;
    for (std::size_t i = 0; i < scenarios.size(); ++i)
        if (keep[i]) keyed.emplace_back(scenarios[i].canonical_key(), scenarios[i]);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Scenario> out;
    out.reserve(keyed.size());
    for (auto& [key, s] : keyed) out.push_back(std::move(s));
    return out;
}

SeedSpec generate_er_seed(std::uint32_t n_total, double p, std::uint64_t rng_seed) {
    if (n_total == 0) throw ScenarioError("driver universe is empty (n_total = 0)");
    if (!(p >= 0.0 && p <= 1.0)) throw ScenarioError("edge probability must lie in [0, 1]");
    SeedSpec spec;
    spec.n_total = n_total;
    for (VertexId v = 0; v < n_total; ++v) spec.marked.push_back(v);
    std::mt19937_64 eng(rng_seed);
    for (VertexId u = 0; u < n_total; ++u)
        for (VertexId v = u + 1; v < n_total; ++v)
            if (rng_unit(eng) < p) spec.seed_edges.emplace_back(u, v);
    return spec;
}

} // namespace netstress
