// Command-line front end: subsumption, refinement, lattice operations
// and similarity over directed labeled graphs stored as JSON documents.
//
// Exit codes: 0 success (for `subsumes`: the relation holds), 1 the
// relation does not hold, 2 usage error, 3 input error, 4 step budget
// exhausted.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dlg/canonical.hpp"
#include "dlg/errors.hpp"
#include "dlg/io.hpp"
#include "dlg/lattice.hpp"
#include "dlg/refinement.hpp"
#include "dlg/similarity.hpp"
#include "dlg/subsumption.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string relation = "plain";
    bool object_identity = false;
    std::string taxonomy_path;
    std::string alphabet_csv;
    std::uint64_t seed = 0;
    std::size_t budget = 5'000'000;
    std::string format = "text";
};

struct Context {
    dlg::RelationSpec spec;
    std::optional<dlg::LabelTaxonomy> taxonomy;
    std::vector<dlg::Label> alphabet; // empty means: derive from inputs
    std::uint64_t seed = 0;
    dlg::SearchOptions search;
    bool structured = false;
};

class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    for (char c : csv) {
        if (c == ',') {
            if (!item.empty())
                out.push_back(item);
            item.clear();
        } else {
            item += c;
        }
    }
    if (!item.empty())
        out.push_back(item);
    return out;
}

Context make_context(const Options& o) {
    Context ctx;
    auto rel = dlg::relation_from_name(o.relation);
    if (!rel)
        throw usage_error("unknown relation '" + o.relation + "'");
    ctx.spec.relation = *rel;
    ctx.spec.object_identity = o.object_identity;
    bool ordered = ctx.spec.ordered();
    if (ordered && o.taxonomy_path.empty())
        throw usage_error("relation '" + o.relation + "' requires --taxonomy");
    if (!ordered && !o.taxonomy_path.empty())
        throw usage_error("relation '" + o.relation + "' does not take --taxonomy");
    if (!o.taxonomy_path.empty()) {
        ctx.taxonomy = dlg::parse_taxonomy(dlg::read_file(o.taxonomy_path));
        ctx.spec.taxonomy = ctx.taxonomy;
    }
    if (!o.alphabet_csv.empty()) {
        if (ordered)
            throw usage_error("--alphabet only applies to the flat relations");
        ctx.alphabet = split_csv(o.alphabet_csv);
    }
    ctx.seed = o.seed;
    ctx.search.step_budget = o.budget;
    if (o.format == "structured")
        ctx.structured = true;
    else if (o.format != "text")
        throw usage_error("unknown format '" + o.format + "'");
    return ctx;
}

dlg::Graph load_graph(const Context& ctx, const std::string& path) {
    return dlg::parse_graph(dlg::read_file(path),
                            ctx.taxonomy ? &*ctx.taxonomy : nullptr);
}

// The operator matching the active relation. Flat operators take their
// alphabet from --alphabet or, by default, from the labels present in
// the inputs.
dlg::OperatorSpec make_operator(const Context& ctx, dlg::Direction dir,
                                const std::vector<const dlg::Graph*>& inputs) {
    dlg::OperatorSpec op;
    op.direction = dir;
    op.transitive = ctx.spec.transitive();
    if (ctx.spec.ordered()) {
        op.labeling = dlg::Labeling::ordered;
        op.taxonomy = ctx.taxonomy;
    } else {
        op.labeling = dlg::Labeling::flat;
        op.alphabet = ctx.alphabet;
        if (op.alphabet.empty()) {
            std::set<dlg::Label> seen;
            for (const dlg::Graph* g : inputs)
                for (const dlg::Label& l : g->label_set())
                    seen.insert(l);
            op.alphabet.assign(seen.begin(), seen.end());
            if (op.alphabet.empty())
                op.alphabet.push_back("a");
        }
    }
    return op;
}

json graph_json(const dlg::Graph& g) {
    return json::parse(dlg::serialize_graph(g));
}

json witness_json(const dlg::Witness& w) {
    json out;
    out["vertex_map"] = json::object();
    for (const auto& [v, img] : w.vertex_map)
        out["vertex_map"][v] = img;
    out["edge_paths"] = json::array();
    for (const auto& [key, chain] : w.edge_paths) {
        json entry{{"from", key.first}, {"to", key.second}};
        entry["chain"] = json::array();
        for (const auto& [f, t] : chain)
            entry["chain"].push_back(json::array({f, t}));
        out["edge_paths"].push_back(entry);
    }
    return out;
}

void print_witness_text(const dlg::Witness& w) {
    for (const auto& [v, img] : w.vertex_map)
        std::cout << "  " << v << " -> " << img << "\n";
    for (const auto& [key, chain] : w.edge_paths) {
        std::cout << "  (" << key.first << ", " << key.second << ") -> [";
        for (std::size_t i = 0; i < chain.size(); ++i)
            std::cout << (i ? ", " : "") << "(" << chain[i].first << ", " << chain[i].second
                      << ")";
        std::cout << "]\n";
    }
}

void emit(const Context& ctx, const json& structured, const std::string& text) {
    if (ctx.structured)
        std::cout << structured.dump(2) << "\n";
    else
        std::cout << text;
}

int run(int argc, char** argv) {
    CLI::App app{"directed labeled graphs: subsumption, refinement, similarity"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    Options o;
    app.add_option("--relation", o.relation, "plain, po, trans or trans_po")
        ->capture_default_str();
    app.add_flag("--oi", o.object_identity, "enforce object identity");
    app.add_option("--taxonomy", o.taxonomy_path, "label taxonomy file (po relations)");
    app.add_option("--alphabet", o.alphabet_csv, "comma-separated labels (flat relations)");
    app.add_option("--seed", o.seed, "seed for stochastic operations")->capture_default_str();
    app.add_option("--budget", o.budget, "search step budget")->capture_default_str();
    app.add_option("--format", o.format, "text or structured")->capture_default_str();

    std::string g1_path, g2_path, gu_path, gd_path;
    std::string measure = "props";
    std::string weights_path, out_path, train_path, test_path;
    std::string weight_mode = "split";
    std::string direction = "down";
    double default_weight = 1.0;
    std::size_t limit = 10;
    std::size_t k = 1;
    bool emit_witness = false;

    auto* c_subsumes = app.add_subcommand("subsumes", "decide g1 <= g2; exit 0 iff it holds");
    c_subsumes->add_option("g1", g1_path)->required();
    c_subsumes->add_option("g2", g2_path)->required();
    c_subsumes->add_flag("--emit-witness", emit_witness,
                         "print the witness (text mode prints it by default)");

    auto* c_refine = app.add_subcommand("refine", "enumerate refinements");
    c_refine->add_option("g", g1_path)->required();
    c_refine->add_option("--direction", direction, "down or up")->capture_default_str();

    auto* c_antiunify = app.add_subcommand("antiunify", "most specific common generalization");
    c_antiunify->add_option("g1", g1_path)->required();
    c_antiunify->add_option("g2", g2_path)->required();

    auto* c_unify = app.add_subcommand("unify", "most general common specializations");
    c_unify->add_option("g1", g1_path)->required();
    c_unify->add_option("g2", g2_path)->required();
    c_unify->add_option("--limit", limit)->capture_default_str();

    auto* c_remainder = app.add_subcommand("remainder", "information g_d adds over g_u");
    c_remainder->add_option("gu", gu_path)->required();
    c_remainder->add_option("gd", gd_path)->required();

    auto* c_disintegrate = app.add_subcommand("disintegrate", "decompose into properties");
    c_disintegrate->add_option("g", g1_path)->required();

    auto* c_sim = app.add_subcommand("sim", "similarity between two graphs");
    c_sim->add_option("g1", g1_path)->required();
    c_sim->add_option("g2", g2_path)->required();
    c_sim->add_option("--measure", measure, "au, props or wprops")->capture_default_str();
    c_sim->add_option("--weights", weights_path, "weight table file (wprops)");
    c_sim->add_option("--default-weight", default_weight, "weight for unseen properties")
        ->capture_default_str();

    auto* c_weights = app.add_subcommand("weights", "property weights from a training set");
    c_weights->add_option("--train", train_path)->required();
    c_weights->add_option("--out", out_path, "write the table here instead of stdout");
    c_weights->add_option("--mode", weight_mode, "split or gain")->capture_default_str();

    auto* c_knn = app.add_subcommand("knn", "k-nearest-neighbor evaluation");
    c_knn->add_option("--train", train_path)->required();
    c_knn->add_option("--test", test_path)->required();
    c_knn->add_option("-k", k)->capture_default_str();
    c_knn->add_option("--measure", measure, "au, props or wprops")->capture_default_str();
    c_knn->add_option("--weights", weights_path, "weight table file (wprops)");
    c_knn->add_option("--default-weight", default_weight)->capture_default_str();

    auto* c_pathlen = app.add_subcommand("pathlen", "refinement path length");
    c_pathlen->add_option("g", g1_path)->required();
    c_pathlen->add_option("g2", g2_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    Context ctx = make_context(o);

    if (c_subsumes->parsed()) {
        dlg::Graph g1 = load_graph(ctx, g1_path);
        dlg::Graph g2 = load_graph(ctx, g2_path);
        auto w = dlg::subsumes(g1, g2, ctx.spec);
        json out{{"holds", w.has_value()},
                 {"relation", o.relation},
                 {"object_identity", o.object_identity}};
        std::string text = w ? "holds\n" : "does not hold\n";
        if (w) {
            out["witness"] = witness_json(*w);
        }
        if (ctx.structured)
            std::cout << out.dump(2) << "\n";
        else {
            std::cout << text;
            if (w)
                print_witness_text(*w);
        }
        (void)emit_witness;
        return w ? 0 : 1;
    }

    if (c_refine->parsed()) {
        dlg::Graph g = load_graph(ctx, g1_path);
        dlg::Direction dir;
        if (direction == "down")
            dir = dlg::Direction::down;
        else if (direction == "up")
            dir = dlg::Direction::up;
        else
            throw usage_error("unknown direction '" + direction + "'");
        dlg::OperatorSpec op = make_operator(ctx, dir, {&g});
        auto apps = dlg::refine(g, op);
        json out{{"operator", op.name()}, {"count", apps.size()}};
        out["refinements"] = json::array();
        std::string text = std::string(op.name()) + ": " + std::to_string(apps.size()) +
                           " refinements\n";
        for (const auto& app_ : apps) {
            json entry{{"rule", dlg::rule_name(app_.rule)}, {"graph", graph_json(app_.result)}};
            entry["bindings"] = json::object();
            text += std::string(dlg::rule_name(app_.rule)) + " {";
            bool first = true;
            for (const auto& [var, value] : app_.bindings) {
                entry["bindings"][var] = value;
                text += (first ? "" : ", ") + var + "=" + value;
                first = false;
            }
            text += "} -> " + dlg::canonical_key(app_.result) + "\n";
            out["refinements"].push_back(entry);
        }
        emit(ctx, out, text);
        return 0;
    }

    if (c_antiunify->parsed()) {
        dlg::Graph g1 = load_graph(ctx, g1_path);
        dlg::Graph g2 = load_graph(ctx, g2_path);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::down, {&g1, &g2});
        dlg::LatticeResult res = dlg::antiunify(g1, g2, op, ctx.search);
        json out{{"graph", graph_json(res.graph)},
                 {"witness_left", witness_json(res.witness_left)},
                 {"witness_right", witness_json(res.witness_right)}};
        emit(ctx, out, dlg::serialize_graph(res.graph));
        return 0;
    }

    if (c_unify->parsed()) {
        dlg::Graph g1 = load_graph(ctx, g1_path);
        dlg::Graph g2 = load_graph(ctx, g2_path);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::down, {&g1, &g2});
        auto results = dlg::unify(g1, g2, op, limit, ctx.search);
        json out{{"count", results.size()}};
        out["unifiers"] = json::array();
        std::string text = std::to_string(results.size()) + " unifiers\n";
        for (const auto& r : results) {
            out["unifiers"].push_back({{"graph", graph_json(r.graph)},
                                       {"witness_left", witness_json(r.witness_left)},
                                       {"witness_right", witness_json(r.witness_right)}});
            text += dlg::canonical_key(r.graph) + "\n";
        }
        emit(ctx, out, text);
        return 0;
    }

    if (c_remainder->parsed()) {
        dlg::Graph gu = load_graph(ctx, gu_path);
        dlg::Graph gd = load_graph(ctx, gd_path);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::up, {&gu, &gd});
        dlg::Graph r = dlg::remainder(gu, gd, op, ctx.seed, ctx.search);
        emit(ctx, json{{"graph", graph_json(r)}}, dlg::serialize_graph(r));
        return 0;
    }

    if (c_disintegrate->parsed()) {
        dlg::Graph g = load_graph(ctx, g1_path);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::up, {&g});
        dlg::PropertySet props = dlg::disintegrate(g, op, ctx.seed, ctx.search);
        json out{{"count", props.properties.size()}};
        out["properties"] = json::array();
        std::string text = std::to_string(props.properties.size()) + " properties\n";
        for (const auto& p : props.properties) {
            out["properties"].push_back({{"key", p.canonical_key},
                                         {"graph", graph_json(p.graph)}});
            text += p.canonical_key + "\n";
        }
        emit(ctx, out, text);
        return 0;
    }

    if (c_sim->parsed() || c_knn->parsed()) {
        std::optional<dlg::Measure> m;
        if (measure == "au")
            m = dlg::Measure::au;
        else if (measure == "props")
            m = dlg::Measure::props;
        else if (measure == "wprops")
            m = dlg::Measure::wprops;
        if (!m)
            throw usage_error("unknown measure '" + measure + "'");
        dlg::WeightTable table;
        table.default_weight = default_weight;
        if (!weights_path.empty())
            table = dlg::parse_weight_table(dlg::read_file(weights_path), default_weight);
        else if (*m == dlg::Measure::wprops)
            throw usage_error("wprops needs --weights");

        if (c_sim->parsed()) {
            dlg::Graph g1 = load_graph(ctx, g1_path);
            dlg::Graph g2 = load_graph(ctx, g2_path);
            dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::up, {&g1, &g2});
            double value = 0.0;
            switch (*m) {
            case dlg::Measure::au: value = dlg::sim_au(g1, g2, op, ctx.search); break;
            case dlg::Measure::props:
                value = dlg::sim_props(g1, g2, op, ctx.seed, ctx.search);
                break;
            case dlg::Measure::wprops:
                value = dlg::sim_wprops(g1, g2, table, op, ctx.seed, ctx.search);
                break;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", value);
            emit(ctx, json{{"measure", measure}, {"value", value}},
                 std::string(buf) + "\n");
            return 0;
        }

        dlg::TrainingSet train =
            dlg::load_dataset(train_path, ctx.taxonomy ? &*ctx.taxonomy : nullptr);
        dlg::TrainingSet test =
            dlg::load_dataset(test_path, ctx.taxonomy ? &*ctx.taxonomy : nullptr);
        std::vector<const dlg::Graph*> inputs;
        for (const auto& ex : train.examples)
            inputs.push_back(&ex.graph);
        for (const auto& ex : test.examples)
            inputs.push_back(&ex.graph);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::up, inputs);
        dlg::KnnReport report = dlg::knn_evaluate(train, test, k, *m, op, ctx.seed,
                                                  weights_path.empty() ? nullptr : &table,
                                                  ctx.search);
        json out{{"overall_accuracy", report.overall_accuracy}};
        out["per_class_accuracy"] = json::object();
        for (const auto& [label, acc] : report.per_class_accuracy)
            out["per_class_accuracy"][label] = acc;
        out["predictions"] = report.predictions;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", report.overall_accuracy);
        std::string text = "accuracy " + std::string(buf) + "\n";
        for (const auto& [label, acc] : report.per_class_accuracy) {
            std::snprintf(buf, sizeof buf, "%.6f", acc);
            text += "  " + label + ": " + buf + "\n";
        }
        emit(ctx, out, text);
        return 0;
    }

    if (c_weights->parsed()) {
        dlg::WeightMode mode;
        if (weight_mode == "split")
            mode = dlg::WeightMode::split_entropy;
        else if (weight_mode == "gain")
            mode = dlg::WeightMode::gain;
        else
            throw usage_error("unknown weight mode '" + weight_mode + "'");
        dlg::TrainingSet train =
            dlg::load_dataset(train_path, ctx.taxonomy ? &*ctx.taxonomy : nullptr);
        std::vector<const dlg::Graph*> inputs;
        for (const auto& ex : train.examples)
            inputs.push_back(&ex.graph);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::up, inputs);
        dlg::WeightTable table = dlg::property_weights(train, op, ctx.seed, mode, ctx.search);
        std::string text = dlg::serialize_weight_table(table);
        if (out_path.empty())
            std::cout << text;
        else
            dlg::write_file(out_path, text);
        return 0;
    }

    if (c_pathlen->parsed()) {
        dlg::Graph g1 = load_graph(ctx, g1_path);
        if (g2_path.empty()) {
            dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::down, {&g1});
            std::size_t len = dlg::path_length_from_top(g1, op);
            emit(ctx, json{{"length", len}}, std::to_string(len) + "\n");
            return 0;
        }
        dlg::Graph g2 = load_graph(ctx, g2_path);
        dlg::OperatorSpec op = make_operator(ctx, dlg::Direction::down, {&g1, &g2});
        std::size_t len = dlg::path_length_between(g1, g2, op);
        emit(ctx, json{{"length", len}}, std::to_string(len) + "\n");
        return 0;
    }

    throw usage_error("no subcommand");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const dlg::budget_exhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << " (partial results discarded)\n";
        return 4;
    } catch (const dlg::error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }
}
