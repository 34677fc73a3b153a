#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dlg/graph.hpp"
#include "dlg/lattice.hpp"
#include "dlg/refinement.hpp"

namespace dlg {

/// One piece of information extracted by disintegration, keyed by its
/// canonical serialization so isomorphic properties coincide.
struct Property {
    Graph graph;
    std::string canonical_key;
};

/// A disintegration: one property per generalization step of the path.
struct PropertySet {
    std::vector<Property> properties;
    Graph source;
    RefinementPath path;
};

struct TrainingExample {
    Graph graph;
    std::string label;
};

struct TrainingSet {
    std::vector<TrainingExample> examples;
};

/// Per-property weights, keyed by canonical serialization. Properties
/// missing from the table weigh default_weight.
struct WeightTable {
    std::map<std::string, double> entries;
    double default_weight = 1.0;

    double weight_of(const std::string& key) const;
};

/// The most general graph whose unification with g_u recovers g_d.
/// Starts from g_d and generalizes stochastically while the recovery
/// property is preserved; the same seed always yields the same graph.
/// Requires that g_u subsumes g_d under the operator's relation with
/// object identity. op must be an upward operator.
Graph remainder(const Graph& g_u, const Graph& g_d, const OperatorSpec& op, std::uint64_t seed,
                const SearchOptions& opt = {});

/// Builds a stochastic generalization path from g to the empty graph
/// and computes one remainder per step.
PropertySet disintegrate(const Graph& g, const OperatorSpec& op, std::uint64_t seed,
                         const SearchOptions& opt = {});

/// Anti-unification-based similarity: shared information over total
/// information, both measured as refinement path lengths. 1 for two
/// empty graphs.
double sim_au(const Graph& g1, const Graph& g2, const OperatorSpec& op,
              const SearchOptions& opt = {});

/// Properties-based similarity: the fraction of properties from both
/// disintegrations that subsume both graphs. 1 when both property sets
/// are empty. Each graph's disintegration is seeded from the graph's
/// canonical form, so the measure is symmetric for a shared seed.
double sim_props(const Graph& g1, const Graph& g2, const OperatorSpec& op, std::uint64_t seed,
                 const SearchOptions& opt = {});

/// split_entropy: the weighted post-split entropy of the class
/// partition induced by each property (low for discriminative
/// properties). gain: the entropy of the whole set minus that value.
enum class WeightMode { split_entropy, gain };

/// Disintegrates every training graph and assigns each distinct
/// property a weight from the class partition it induces.
WeightTable property_weights(const TrainingSet& train, const OperatorSpec& op,
                             std::uint64_t seed, WeightMode mode = WeightMode::split_entropy,
                             const SearchOptions& opt = {});

/// Weighted properties-based similarity: weight sum of the shared
/// properties over the weight sum of all properties. Falls back to
/// sim_props when every property weighs zero.
double sim_wprops(const Graph& g1, const Graph& g2, const WeightTable& weights,
                  const OperatorSpec& op, std::uint64_t seed, const SearchOptions& opt = {});

enum class Measure { au, props, wprops };

const char* measure_name(Measure m);

struct KnnReport {
    double overall_accuracy = 0.0;
    std::map<std::string, double> per_class_accuracy;
    std::vector<std::string> predictions; // one per test example, in order
};

/// k-nearest-neighbor classification of test against train with the
/// selected measure. Neighbor ties break on higher similarity, then on
/// the training graph's canonical key; class ties on total similarity,
/// then class name.
KnnReport knn_evaluate(const TrainingSet& train, const TrainingSet& test, std::size_t k,
                       Measure measure, const OperatorSpec& op, std::uint64_t seed,
                       const WeightTable* weights = nullptr, const SearchOptions& opt = {});

} // namespace dlg
