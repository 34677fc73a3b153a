#pragma once

#include <string>

#include "dlg/canonical.hpp"
#include "dlg/graph.hpp"
#include "dlg/similarity.hpp"
#include "dlg/taxonomy.hpp"

namespace dlg {

/// Graph document: {"vertices": [{"id", "label"}...], "edges": [{"from", "to", "label"}...]}.
/// Both keys are required; empty arrays give the empty graph.
Graph parse_graph(const std::string& text, const LabelTaxonomy* taxonomy = nullptr);

/// canonical=false: vertices sorted by id, pretty-printed, round-trip stable.
/// canonical=true: canonical_key(g), the single-line form with vertices
/// renamed n0..nk by the canonical ordering. Used as the property key
/// in weight tables.
std::string serialize_graph(const Graph& g, bool canonical = false);

/// Taxonomy document: {"top": label, "covers": [[parent, child]...]}.
LabelTaxonomy parse_taxonomy(const std::string& text);
std::string serialize_taxonomy(const LabelTaxonomy& t);

/// Manifest: {"examples": [{"graph": path, "class": label}...]}; graph
/// paths are resolved relative to the manifest file's directory.
TrainingSet load_dataset(const std::string& manifest_path,
                         const LabelTaxonomy* taxonomy = nullptr);

/// One "canonical_key<TAB>weight" line per entry, sorted by key.
std::string serialize_weight_table(const WeightTable& w);
WeightTable parse_weight_table(const std::string& text, double default_weight = 1.0);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Graphviz export, a convenience for visualization.
std::string to_dot(const Graph& g);

} // namespace dlg
