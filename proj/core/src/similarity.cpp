#include "dlg/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dlg/canonical.hpp"
#include "dlg/errors.hpp"

namespace dlg {

const char* measure_name(Measure m) {
    switch (m) {
    case Measure::au: return "au";
    case Measure::props: return "props";
    case Measure::wprops: return "wprops";
    }
    return "?";
}

double WeightTable::weight_of(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? default_weight : it->second;
}

namespace {

OperatorSpec with_direction(const OperatorSpec& op, Direction d) {
    OperatorSpec out = op;
    out.direction = d;
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Disintegration seeds derive from the graph itself so that pairwise
// measures are symmetric in their arguments under a shared seed.
std::uint64_t graph_seed(std::uint64_t seed, const std::string& canonical) {
    return seed ^ fnv1a(canonical);
}

double entropy(const std::map<std::string, std::size_t>& counts) {
    std::size_t total = 0;
    for (const auto& [label, n] : counts)
        total += n;
    if (total == 0)
        return 0.0;
    double h = 0.0;
    for (const auto& [label, n] : counts) {
        if (n == 0)
            continue;
        double p = static_cast<double>(n) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace

Graph remainder(const Graph& g_u, const Graph& g_d, const OperatorSpec& op, std::uint64_t seed,
                const SearchOptions& opt) {
    op.validate();
    if (op.direction != Direction::up)
        throw invalid_input("remainder: needs an upward operator");
    RelationSpec spec = op.relation_spec(true);
    if (!subsumes(g_u, g_d, spec))
        throw invalid_input("remainder: g_u does not subsume g_d");

    std::vector<Graph> anchor; // generalizations of g_d subsumed by g_u
    for (const Graph& g : refine_set(g_d, op))
        if (subsumes(g_u, g, spec))
            anchor.push_back(g);

    std::mt19937_64 rng(seed);
    Graph pi = g_d;
    std::size_t budget = opt.step_budget;
    while (true) {
        if (budget-- == 0)
            throw budget_exhausted("remainder: step budget exhausted");
        std::vector<Graph> next;
        for (const Graph& g : refine_set(pi, op)) {
            if (subsumes(g, g_u, spec))
                continue;
            bool dominated = false;
            for (const Graph& a : anchor)
                if (subsumes(g, a, spec)) {
                    dominated = true;
                    break;
                }
            if (!dominated)
                next.push_back(g);
        }
        if (next.empty())
            return pi;
        pi = next[rng() % next.size()];
    }
}

PropertySet disintegrate(const Graph& g, const OperatorSpec& op, std::uint64_t seed,
                         const SearchOptions& opt) {
    op.validate();
    if (op.direction != Direction::up)
        throw invalid_input("disintegrate: needs an upward operator");
    if (!g.connected())
        throw invalid_input("disintegrate: graph is not connected");

    std::mt19937_64 rng(seed);
    PropertySet out;
    out.source = g;
    out.path.start = g;
    Graph cur = g;
    while (!cur.empty()) {
        // Distinct generalizations, each with a representative application.
        std::map<std::string, RuleApplication> options;
        for (const RuleApplication& app : refine(cur, op))
            options.emplace(canonical_key(app.result), app);
        if (options.empty())
            throw error("disintegrate: nonempty graph with no generalizations");
        std::size_t pick = rng() % options.size();
        auto it = options.begin();
        std::advance(it, pick);
        RuleApplication step = it->second;

        Graph prop = remainder(step.result, cur, op, rng(), opt);
        out.properties.push_back({prop, canonical_key(prop)});
        out.path.steps.push_back(step);
        cur = step.result;
    }
    out.path.end = cur;
    return out;
}

double sim_au(const Graph& g1, const Graph& g2, const OperatorSpec& op,
              const SearchOptions& opt) {
    OperatorSpec down = with_direction(op, Direction::down);
    LatticeResult au = antiunify(g1, g2, down, opt);
    std::size_t t = path_length_from_top(au.graph, down);
    std::size_t d1 = path_length_between(au.graph, g1, down);
    std::size_t d2 = path_length_between(au.graph, g2, down);
    std::size_t denom = t + d1 + d2;
    if (denom == 0)
        return 1.0;
    return static_cast<double>(t) / static_cast<double>(denom);
}

namespace {

// Deduplicated property pool of two disintegrations, with shared flags.
struct PropertyPool {
    std::vector<Property> properties;
    std::vector<bool> shared;
};

PropertyPool property_pool(const Graph& g1, const Graph& g2, const OperatorSpec& up,
                           std::uint64_t seed, const SearchOptions& opt) {
    RelationSpec spec = up.relation_spec(true);
    std::map<std::string, Graph> pool;
    for (const Graph* g : {&g1, &g2}) {
        PropertySet d = disintegrate(*g, up, graph_seed(seed, canonical_key(*g)), opt);
        for (Property& p : d.properties)
            pool.emplace(p.canonical_key, p.graph);
    }
    PropertyPool out;
    for (const auto& [key, graph] : pool) {
        bool in1 = subsumes(graph, g1, spec).has_value();
        bool in2 = in1 && subsumes(graph, g2, spec).has_value();
        out.properties.push_back({graph, key});
        out.shared.push_back(in1 && in2);
    }
    return out;
}

} // namespace

double sim_props(const Graph& g1, const Graph& g2, const OperatorSpec& op, std::uint64_t seed,
                 const SearchOptions& opt) {
    OperatorSpec up = with_direction(op, Direction::up);
    PropertyPool pool = property_pool(g1, g2, up, seed, opt);
    if (pool.properties.empty())
        return 1.0;
    std::size_t shared = 0;
    for (bool s : pool.shared)
        shared += s ? 1 : 0;
    return static_cast<double>(shared) / static_cast<double>(pool.properties.size());
}

WeightTable property_weights(const TrainingSet& train, const OperatorSpec& op,
                             std::uint64_t seed, WeightMode mode, const SearchOptions& opt) {
    if (train.examples.empty())
        throw invalid_input("property_weights: empty training set");
    OperatorSpec up = with_direction(op, Direction::up);
    RelationSpec spec = up.relation_spec(true);

    std::map<std::string, Graph> pool;
    for (const TrainingExample& ex : train.examples) {
        PropertySet d = disintegrate(ex.graph, up, graph_seed(seed, canonical_key(ex.graph)),
                                     opt);
        for (Property& p : d.properties)
            pool.emplace(p.canonical_key, p.graph);
    }

    std::map<std::string, std::size_t> all_counts;
    for (const TrainingExample& ex : train.examples)
        ++all_counts[ex.label];
    const double h_all = entropy(all_counts);
    const double total = static_cast<double>(train.examples.size());

    WeightTable table;
    for (const auto& [key, prop] : pool) {
        std::map<std::string, std::size_t> in, outp;
        for (const TrainingExample& ex : train.examples) {
            if (subsumes(prop, ex.graph, spec))
                ++in[ex.label];
            else
                ++outp[ex.label];
        }
        std::size_t n_in = 0, n_out = 0;
        for (const auto& [label, n] : in)
            n_in += n;
        for (const auto& [label, n] : outp)
            n_out += n;
        double split = (entropy(in) * static_cast<double>(n_in) +
                        entropy(outp) * static_cast<double>(n_out)) /
                       total;
        table.entries[key] = mode == WeightMode::split_entropy ? split : h_all - split;
    }
    return table;
}

double sim_wprops(const Graph& g1, const Graph& g2, const WeightTable& weights,
                  const OperatorSpec& op, std::uint64_t seed, const SearchOptions& opt) {
    OperatorSpec up = with_direction(op, Direction::up);
    PropertyPool pool = property_pool(g1, g2, up, seed, opt);
    if (pool.properties.empty())
        return 1.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pool.properties.size(); ++i) {
        double w = weights.weight_of(pool.properties[i].canonical_key);
        den += w;
        if (pool.shared[i])
            num += w;
    }
    if (den == 0.0) {
        // Degenerate table: fall back to the unweighted ratio.
        std::size_t shared = 0;
        for (bool s : pool.shared)
            shared += s ? 1 : 0;
        return static_cast<double>(shared) / static_cast<double>(pool.properties.size());
    }
    return num / den;
}

KnnReport knn_evaluate(const TrainingSet& train, const TrainingSet& test, std::size_t k,
                       Measure measure, const OperatorSpec& op, std::uint64_t seed,
                       const WeightTable* weights, const SearchOptions& opt) {
    if (train.examples.empty())
        throw invalid_input("knn: empty training set");
    if (k < 1)
        throw invalid_input("knn: k must be at least 1");
    if (measure == Measure::wprops && !weights)
        throw invalid_input("knn: wprops needs a weight table");

    std::vector<std::string> train_keys;
    for (const TrainingExample& ex : train.examples)
        train_keys.push_back(canonical_key(ex.graph));

    auto similarity = [&](const Graph& a, const Graph& b) {
        switch (measure) {
        case Measure::au: return sim_au(a, b, op, opt);
        case Measure::props: return sim_props(a, b, op, seed, opt);
        case Measure::wprops: return sim_wprops(a, b, *weights, op, seed, opt);
        }
        return 0.0;
    };

    KnnReport report;
    std::map<std::string, std::size_t> class_total, class_correct;
    std::size_t correct = 0;
    for (const TrainingExample& ex : test.examples) {
        struct Scored {
            double sim;
            std::string key;
            std::size_t index;
        };
        std::vector<Scored> scored;
        for (std::size_t i = 0; i < train.examples.size(); ++i)
            scored.push_back({similarity(ex.graph, train.examples[i].graph), train_keys[i], i});
        std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            if (a.sim != b.sim)
                return a.sim > b.sim;
            return a.key < b.key;
        });
        std::size_t take = std::min(k, scored.size());
        struct Vote {
            std::size_t count = 0;
            double sim_sum = 0.0;
        };
        std::map<std::string, Vote> votes;
        for (std::size_t i = 0; i < take; ++i) {
            Vote& v = votes[train.examples[scored[i].index].label];
            ++v.count;
            v.sim_sum += scored[i].sim;
        }
        std::string prediction;
        Vote best;
        bool first = true;
        for (const auto& [label, v] : votes) {
            bool better = first || v.count > best.count ||
                          (v.count == best.count && v.sim_sum > best.sim_sum);
            if (better) {
                prediction = label;
                best = v;
                first = false;
            }
        }
        report.predictions.push_back(prediction);
        ++class_total[ex.label];
        if (prediction == ex.label) {
            ++correct;
            ++class_correct[ex.label];
        }
    }
    report.overall_accuracy =
        test.examples.empty() ? 0.0
                              : static_cast<double>(correct) /
                                    static_cast<double>(test.examples.size());
    for (const auto& [label, total] : class_total)
        report.per_class_accuracy[label] =
            static_cast<double>(class_correct[label]) / static_cast<double>(total);
    return report;
}

} // namespace dlg
