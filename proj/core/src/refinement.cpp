#include "dlg/refinement.hpp"

#include <algorithm>

#include "dlg/canonical.hpp"
#include "dlg/errors.hpp"

namespace dlg {

const char* rule_name(RuleId r) {
    switch (r) {
    case RuleId::R0: return "R0";
    case RuleId::R1: return "R1";
    case RuleId::R2: return "R2";
    case RuleId::R3: return "R3";
    case RuleId::R4: return "R4";
    case RuleId::UR0: return "UR0";
    case RuleId::UR1: return "UR1";
    case RuleId::UR2: return "UR2";
    case RuleId::R0PO: return "R0PO";
    case RuleId::R1PO: return "R1PO";
    case RuleId::R2PO: return "R2PO";
    case RuleId::R3PO: return "R3PO";
    case RuleId::R4PO: return "R4PO";
    case RuleId::R5PO: return "R5PO";
    case RuleId::R6PO: return "R6PO";
    case RuleId::UR0PO: return "UR0PO";
    case RuleId::UR1PO: return "UR1PO";
    case RuleId::UR2PO: return "UR2PO";
    case RuleId::UR3PO: return "UR3PO";
    case RuleId::UR4PO: return "UR4PO";
    }
    return "?";
}

std::optional<RuleId> rule_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(RuleId::UR4PO); ++i)
        if (name == rule_name(static_cast<RuleId>(i)))
            return static_cast<RuleId>(i);
    return std::nullopt;
}

void OperatorSpec::validate() const {
    if (labeling == Labeling::ordered) {
        if (!taxonomy)
            throw invalid_input("operator: ordered labeling requires a taxonomy");
        if (!alphabet.empty())
            throw invalid_input("operator: ordered labeling takes labels from the taxonomy, "
                                "not an alphabet");
    } else {
        if (alphabet.empty())
            throw invalid_input("operator: flat labeling requires a nonempty alphabet");
        if (taxonomy)
            throw invalid_input("operator: flat labeling does not take a taxonomy");
    }
}

std::vector<RuleId> OperatorSpec::rules() const {
    if (labeling == Labeling::flat) {
        if (direction == Direction::down) {
            std::vector<RuleId> rs{RuleId::R0, RuleId::R1, RuleId::R2, RuleId::R3};
            if (transitive)
                rs.push_back(RuleId::R4);
            return rs;
        }
        std::vector<RuleId> rs{RuleId::UR0, RuleId::UR1};
        if (transitive)
            rs.push_back(RuleId::UR2);
        return rs;
    }
    if (direction == Direction::down) {
        std::vector<RuleId> rs{RuleId::R0PO, RuleId::R1PO, RuleId::R2PO,
                               RuleId::R3PO, RuleId::R4PO, RuleId::R5PO};
        if (transitive)
            rs.push_back(RuleId::R6PO);
        return rs;
    }
    std::vector<RuleId> rs{RuleId::UR0PO, RuleId::UR1PO, RuleId::UR2PO, RuleId::UR3PO};
    if (transitive)
        rs.push_back(RuleId::UR4PO);
    return rs;
}

RelationSpec OperatorSpec::relation_spec(bool object_identity) const {
    RelationSpec spec;
    if (labeling == Labeling::flat)
        spec.relation = transitive ? Relation::trans : Relation::plain;
    else {
        spec.relation = transitive ? Relation::trans_po : Relation::po;
        spec.taxonomy = taxonomy;
    }
    spec.object_identity = object_identity;
    return spec;
}

OperatorSpec OperatorSpec::reversed() const {
    OperatorSpec r = *this;
    r.direction = direction == Direction::down ? Direction::up : Direction::down;
    return r;
}

const char* OperatorSpec::name() const {
    if (labeling == Labeling::flat) {
        if (direction == Direction::down)
            return transitive ? "rho_tf" : "rho_f";
        return transitive ? "gamma_tf" : "gamma_f";
    }
    if (direction == Direction::down)
        return transitive ? "rho_tpo" : "rho_po";
    return transitive ? "gamma_tpo" : "gamma_po";
}

VertexId fresh_vertex_id(const Graph& g) {
    for (int n = 0;; ++n) {
        VertexId id = "_" + std::to_string(n);
        if (!g.has_vertex(id))
            return id;
    }
}

namespace {

struct Parts {
    std::map<VertexId, Label> v;
    std::map<EdgeKey, Label> e;
};

Parts parts_of(const Graph& g) {
    Parts p;
    for (const VertexId& v : g.vertices())
        p.v[v] = g.vertex_label(v);
    for (const Graph::Edge& e : g.edges())
        p.e[{g.vertex_at(e.from), g.vertex_at(e.to)}] = e.label;
    return p;
}

Graph build(const Parts& p, const OperatorSpec& op) {
    return Graph::make(p.v, p.e, op.taxonomy ? &*op.taxonomy : nullptr);
}

const std::string& need(const Bindings& b, const char* key, RuleId rule) {
    auto it = b.find(key);
    if (it == b.end())
        throw invalid_input(std::string("rule ") + rule_name(rule) + ": missing binding '" +
                            key + "'");
    return it->second;
}

void require(bool ok, RuleId rule, const char* clause) {
    if (!ok)
        throw invalid_input(std::string("rule ") + rule_name(rule) + ": condition violated: " +
                            clause);
}

bool in_alphabet(const OperatorSpec& op, const Label& l) {
    return std::find(op.alphabet.begin(), op.alphabet.end(), l) != op.alphabet.end();
}

std::size_t incident_edges(const Graph& g, const VertexId& v) {
    return g.incident_count(g.index_of(v));
}

// [e' != e1 with e'.to == mid] or [e' != e2 with e'.from == mid]
bool mid_has_other_edges(const Graph& g, const EdgeKey& e1, const EdgeKey& e2,
                         const VertexId& mid) {
    for (const Graph::Edge& e : g.edges()) {
        EdgeKey key{g.vertex_at(e.from), g.vertex_at(e.to)};
        if (key.second == mid && key != e1)
            return true;
        if (key.first == mid && key != e2)
            return true;
    }
    return false;
}

} // namespace

Graph apply_rule(const Graph& g, RuleId rule, const Bindings& bind, const OperatorSpec& op) {
    op.validate();
    Parts p = parts_of(g);
    const LabelTaxonomy* tax = op.taxonomy ? &*op.taxonomy : nullptr;

    switch (rule) {
    case RuleId::R0: {
        const VertexId& vs = need(bind, "v*", rule);
        const Label& a = need(bind, "a", rule);
        require(!g.has_vertex(vs), rule, "v* not in V");
        require(g.empty(), rule, "V = {} and E = {}");
        require(in_alphabet(op, a), rule, "a in L");
        p.v[vs] = a;
        break;
    }
    case RuleId::R1:
    case RuleId::R2: {
        const VertexId& vs = need(bind, "v*", rule);
        const VertexId& v1 = need(bind, "v1", rule);
        const Label& a = need(bind, "a", rule);
        const Label& b = need(bind, "b", rule);
        require(!g.has_vertex(vs), rule, "v* not in V");
        require(g.has_vertex(v1), rule, "v1 in V");
        require(in_alphabet(op, a), rule, "a in L");
        require(in_alphabet(op, b), rule, "b in L");
        p.v[vs] = a;
        if (rule == RuleId::R1)
            p.e[{vs, v1}] = b;
        else
            p.e[{v1, vs}] = b;
        break;
    }
    case RuleId::R3: {
        const VertexId& v1 = need(bind, "v1", rule);
        const VertexId& v2 = need(bind, "v2", rule);
        const Label& a = need(bind, "a", rule);
        require(g.has_vertex(v1), rule, "v1 in V");
        require(g.has_vertex(v2), rule, "v2 in V");
        require(!g.has_edge(v1, v2), rule, "(v1, v2) not in E");
        require(in_alphabet(op, a), rule, "a in L");
        p.e[{v1, v2}] = a;
        break;
    }
    case RuleId::R4: {
        const VertexId& vs = need(bind, "v*", rule);
        const VertexId& v1 = need(bind, "v1", rule);
        const VertexId& v2 = need(bind, "v2", rule);
        const Label& a = need(bind, "a", rule);
        require(!g.has_vertex(vs), rule, "v* not in V");
        require(g.has_edge(v1, v2), rule, "(v1, v2) in E");
        require(in_alphabet(op, a), rule, "a in L");
        Label b = g.edge_label(v1, v2);
        p.e.erase({v1, v2});
        p.v[vs] = a;
        p.e[{v1, vs}] = b;
        p.e[{vs, v2}] = b;
        break;
    }
    case RuleId::UR0: {
        const VertexId& from = need(bind, "e.from", rule);
        const VertexId& to = need(bind, "e.to", rule);
        require(g.has_edge(from, to), rule, "e in E");
        require(!bridges(g).count({from, to}), rule, "e not a bridge");
        p.e.erase({from, to});
        break;
    }
    case RuleId::UR1: {
        const VertexId& v = need(bind, "v", rule);
        require(g.has_vertex(v), rule, "v in V");
        require(incident_edges(g, v) <= 1, rule, "|E_v| <= 1");
        p.v.erase(v);
        std::erase_if(p.e, [&](const auto& kv) {
            return kv.first.first == v || kv.first.second == v;
        });
        break;
    }
    case RuleId::UR2:
    case RuleId::UR4PO: {
        const VertexId& v1 = need(bind, "v1", rule);
        const VertexId& v2 = need(bind, "v2", rule);
        const VertexId& v3 = need(bind, "v3", rule);
        require(g.has_edge(v1, v2), rule, "e1 = (v1, v2) in E");
        require(g.has_edge(v2, v3), rule, "e2 = (v2, v3) in E");
        EdgeKey e1{v1, v2}, e2{v2, v3};
        require(e1 != e2, rule, "e1 and e2 are distinct edges");
        require(g.edge_label(v1, v2) == g.edge_label(v2, v3), rule, "l(e1) = l(e2)");
        require(!mid_has_other_edges(g, e1, e2, v2), rule,
                "no edge besides e1/e2 touches v2");
        if (rule == RuleId::UR4PO)
            require(tax && g.vertex_label(v2) == tax->top(), rule, "l(v2) = top");
        Label l = g.edge_label(v1, v2);
        p.v.erase(v2);
        p.e.erase(e1);
        p.e.erase(e2);
        p.e[{v1, v3}] = l;
        break;
    }
    case RuleId::R0PO: {
        const VertexId& vs = need(bind, "v*", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(!g.has_vertex(vs), rule, "v* not in V");
        require(g.empty(), rule, "V = {} and E = {}");
        p.v[vs] = tax->top();
        break;
    }
    case RuleId::R1PO:
    case RuleId::R2PO: {
        const VertexId& vs = need(bind, "v*", rule);
        const VertexId& v1 = need(bind, "v1", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(!g.has_vertex(vs), rule, "v* not in V");
        require(g.has_vertex(v1), rule, "v1 in V");
        p.v[vs] = tax->top();
        if (rule == RuleId::R1PO)
            p.e[{v1, vs}] = tax->top();
        else
            p.e[{vs, v1}] = tax->top();
        break;
    }
    case RuleId::R3PO: {
        const VertexId& v1 = need(bind, "v1", rule);
        const VertexId& v2 = need(bind, "v2", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_vertex(v1), rule, "v1 in V");
        require(g.has_vertex(v2), rule, "v2 in V");
        require(!g.has_edge(v1, v2), rule, "(v1, v2) not in E");
        p.e[{v1, v2}] = tax->top();
        break;
    }
    case RuleId::R4PO: {
        const VertexId& v1 = need(bind, "v1", rule);
        const Label& b = need(bind, "b", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_vertex(v1), rule, "v1 in V");
        require(tax->covers_step(g.vertex_label(v1), b), rule,
                "a < b with no label strictly between");
        p.v[v1] = b;
        break;
    }
    case RuleId::R5PO: {
        const VertexId& from = need(bind, "e.from", rule);
        const VertexId& to = need(bind, "e.to", rule);
        const Label& b = need(bind, "b", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_edge(from, to), rule, "e in E");
        require(tax->covers_step(g.edge_label(from, to), b), rule,
                "a < b with no label strictly between");
        p.e[{from, to}] = b;
        break;
    }
    case RuleId::R6PO: {
        const VertexId& vs = need(bind, "v*", rule);
        const VertexId& v1 = need(bind, "v1", rule);
        const VertexId& v2 = need(bind, "v2", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(!g.has_vertex(vs), rule, "v* not in V");
        require(g.has_edge(v1, v2), rule, "(v1, v2) in E");
        Label b = g.edge_label(v1, v2);
        p.e.erase({v1, v2});
        p.v[vs] = tax->top();
        p.e[{v1, vs}] = b;
        p.e[{vs, v2}] = b;
        break;
    }
    case RuleId::UR0PO: {
        const VertexId& v1 = need(bind, "v1", rule);
        const Label& b = need(bind, "b", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_vertex(v1), rule, "v1 in V");
        require(tax->covers_step(b, g.vertex_label(v1)), rule,
                "b < a with no label strictly between");
        p.v[v1] = b;
        break;
    }
    case RuleId::UR1PO: {
        const VertexId& from = need(bind, "e.from", rule);
        const VertexId& to = need(bind, "e.to", rule);
        const Label& b = need(bind, "b", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_edge(from, to), rule, "e in E");
        require(tax->covers_step(b, g.edge_label(from, to)), rule,
                "b < a with no label strictly between");
        p.e[{from, to}] = b;
        break;
    }
    case RuleId::UR2PO: {
        const VertexId& from = need(bind, "e.from", rule);
        const VertexId& to = need(bind, "e.to", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_edge(from, to), rule, "e in E");
        require(g.edge_label(from, to) == tax->top(), rule, "l(e) = top");
        require(!bridges(g).count({from, to}), rule, "e not a bridge");
        p.e.erase({from, to});
        break;
    }
    case RuleId::UR3PO: {
        const VertexId& v = need(bind, "v", rule);
        require(tax != nullptr, rule, "ordered labeling");
        require(g.has_vertex(v), rule, "v in V");
        require(g.vertex_label(v) == tax->top(), rule, "l(v) = top");
        require(incident_edges(g, v) <= 1, rule, "|E_v| <= 1");
        for (const Graph::Edge& e : g.edges()) {
            if (g.vertex_at(e.from) == v || g.vertex_at(e.to) == v)
                require(e.label == tax->top(), rule, "every edge of v has label top");
        }
        p.v.erase(v);
        std::erase_if(p.e, [&](const auto& kv) {
            return kv.first.first == v || kv.first.second == v;
        });
        break;
    }
    }
    return build(p, op);
}

namespace {

void push(std::vector<RuleApplication>& out, const Graph& g, RuleId rule, Bindings bind,
          const OperatorSpec& op) {
    out.push_back({rule, bind, apply_rule(g, rule, bind, op)});
}

void enumerate_rule(const Graph& g, RuleId rule, const OperatorSpec& op,
                    const std::vector<Label>& alpha, std::vector<RuleApplication>& out) {
    const LabelTaxonomy* tax = op.taxonomy ? &*op.taxonomy : nullptr;
    auto edge_key = [&](const Graph::Edge& e) {
        return EdgeKey{g.vertex_at(e.from), g.vertex_at(e.to)};
    };

    switch (rule) {
    case RuleId::R0:
        if (g.empty())
            for (const Label& a : alpha)
                push(out, g, rule, {{"v*", fresh_vertex_id(g)}, {"a", a}}, op);
        break;
    case RuleId::R1:
    case RuleId::R2:
        for (const VertexId& v1 : g.vertices())
            for (const Label& a : alpha)
                for (const Label& b : alpha)
                    push(out, g, rule,
                         {{"v*", fresh_vertex_id(g)}, {"v1", v1}, {"a", a}, {"b", b}}, op);
        break;
    case RuleId::R3:
        for (const VertexId& v1 : g.vertices())
            for (const VertexId& v2 : g.vertices()) {
                if (g.has_edge(v1, v2))
                    continue;
                for (const Label& a : alpha)
                    push(out, g, rule, {{"v1", v1}, {"v2", v2}, {"a", a}}, op);
            }
        break;
    case RuleId::R4:
        for (const Graph::Edge& e : g.edges())
            for (const Label& a : alpha)
                push(out, g, rule,
                     {{"v*", fresh_vertex_id(g)},
                      {"v1", g.vertex_at(e.from)},
                      {"v2", g.vertex_at(e.to)},
                      {"a", a},
                      {"b", e.label}},
                     op);
        break;
    case RuleId::UR0: {
        if (g.empty())
            break;
        auto bs = bridges(g);
        for (const Graph::Edge& e : g.edges()) {
            EdgeKey key = edge_key(e);
            if (!bs.count(key))
                push(out, g, rule, {{"e.from", key.first}, {"e.to", key.second}}, op);
        }
        break;
    }
    case RuleId::UR1:
        for (const VertexId& v : g.vertices())
            if (incident_edges(g, v) <= 1)
                push(out, g, rule, {{"v", v}}, op);
        break;
    case RuleId::UR2:
    case RuleId::UR4PO:
        for (const Graph::Edge& e1 : g.edges())
            for (const Graph::Edge& e2 : g.edges()) {
                if (e1.to != e2.from)
                    continue;
                EdgeKey k1 = edge_key(e1), k2 = edge_key(e2);
                if (k1 == k2 || e1.label != e2.label)
                    continue;
                const VertexId& mid = g.vertex_at(e1.to);
                if (mid_has_other_edges(g, k1, k2, mid))
                    continue;
                if (rule == RuleId::UR4PO && g.vertex_label(mid) != tax->top())
                    continue;
                push(out, g, rule, {{"v1", k1.first}, {"v2", mid}, {"v3", k2.second}}, op);
            }
        break;
    case RuleId::R0PO:
        if (g.empty())
            push(out, g, rule, {{"v*", fresh_vertex_id(g)}}, op);
        break;
    case RuleId::R1PO:
    case RuleId::R2PO:
        for (const VertexId& v1 : g.vertices())
            push(out, g, rule, {{"v*", fresh_vertex_id(g)}, {"v1", v1}}, op);
        break;
    case RuleId::R3PO:
        for (const VertexId& v1 : g.vertices())
            for (const VertexId& v2 : g.vertices())
                if (!g.has_edge(v1, v2))
                    push(out, g, rule, {{"v1", v1}, {"v2", v2}}, op);
        break;
    case RuleId::R4PO:
        for (const VertexId& v1 : g.vertices())
            for (const Label& b : tax->children(g.vertex_label(v1)))
                push(out, g, rule, {{"v1", v1}, {"a", g.vertex_label(v1)}, {"b", b}}, op);
        break;
    case RuleId::R5PO:
        for (const Graph::Edge& e : g.edges())
            for (const Label& b : tax->children(e.label)) {
                EdgeKey key = edge_key(e);
                push(out, g, rule,
                     {{"e.from", key.first}, {"e.to", key.second}, {"a", e.label}, {"b", b}},
                     op);
            }
        break;
    case RuleId::R6PO:
        for (const Graph::Edge& e : g.edges()) {
            EdgeKey key = edge_key(e);
            push(out, g, rule,
                 {{"v*", fresh_vertex_id(g)}, {"v1", key.first}, {"v2", key.second},
                  {"b", e.label}},
                 op);
        }
        break;
    case RuleId::UR0PO:
        for (const VertexId& v1 : g.vertices())
            for (const Label& b : tax->parents(g.vertex_label(v1)))
                push(out, g, rule, {{"v1", v1}, {"a", g.vertex_label(v1)}, {"b", b}}, op);
        break;
    case RuleId::UR1PO:
        for (const Graph::Edge& e : g.edges())
            for (const Label& b : tax->parents(e.label)) {
                EdgeKey key = edge_key(e);
                push(out, g, rule,
                     {{"e.from", key.first}, {"e.to", key.second}, {"a", e.label}, {"b", b}},
                     op);
            }
        break;
    case RuleId::UR2PO: {
        if (g.empty())
            break;
        auto bs = bridges(g);
        for (const Graph::Edge& e : g.edges()) {
            EdgeKey key = edge_key(e);
            if (e.label == tax->top() && !bs.count(key))
                push(out, g, rule, {{"e.from", key.first}, {"e.to", key.second}}, op);
        }
        break;
    }
    case RuleId::UR3PO:
        for (const VertexId& v : g.vertices()) {
            if (g.vertex_label(v) != tax->top() || incident_edges(g, v) > 1)
                continue;
            bool top_edges = true;
            for (const Graph::Edge& e : g.edges())
                if ((g.vertex_at(e.from) == v || g.vertex_at(e.to) == v) &&
                    e.label != tax->top())
                    top_edges = false;
            if (top_edges)
                push(out, g, rule, {{"v", v}}, op);
        }
        break;
    }
}

} // namespace

std::vector<RuleApplication> refine(const Graph& g, const OperatorSpec& op) {
    op.validate();
    if (!g.connected())
        throw invalid_input("refine: graph is not connected");
    std::vector<Label> alpha = op.alphabet;
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    for (const Label& l : g.label_set()) {
        if (op.labeling == Labeling::flat) {
            if (!std::binary_search(alpha.begin(), alpha.end(), l))
                throw invalid_input("refine: label '" + l + "' outside the alphabet");
        } else if (!op.taxonomy->contains(l)) {
            throw invalid_input("refine: label '" + l + "' outside the taxonomy");
        }
    }
    std::vector<RuleApplication> out;
    for (RuleId rule : op.rules())
        enumerate_rule(g, rule, op, alpha, out);
    return out;
}

std::vector<Graph> refine_set(const Graph& g, const OperatorSpec& op) {
    std::map<std::string, Graph> dedup;
    for (const RuleApplication& app : refine(g, op))
        dedup.emplace(canonical_key(app.result), app.result);
    std::vector<Graph> out;
    out.reserve(dedup.size());
    for (auto& [key, graph] : dedup)
        out.push_back(std::move(graph));
    return out;
}

std::size_t count_refinements(const Graph& g, const OperatorSpec& op) {
    return refine(g, op).size();
}

} // namespace dlg
