#include "dlg/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dlg/errors.hpp"

namespace dlg {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw invalid_input(std::string(what) + ": " + e.what());
    }
}

std::string string_field(const json& obj, const char* key, const char* what) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw invalid_input(std::string(what) + ": missing string field '" + key + "'");
    return obj[key].get<std::string>();
}

} // namespace

Graph parse_graph(const std::string& text, const LabelTaxonomy* taxonomy) {
    json doc = parse_json(text, "graph document");
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges") ||
        !doc["vertices"].is_array() || !doc["edges"].is_array())
        throw invalid_input("graph document: expected an object with 'vertices' and 'edges' "
                            "arrays");
    std::map<VertexId, Label> vls;
    for (const json& v : doc["vertices"]) {
        VertexId id = string_field(v, "id", "graph document vertex");
        Label label = string_field(v, "label", "graph document vertex");
        if (!vls.emplace(id, label).second)
            throw invalid_input("graph document: duplicate vertex id '" + id + "'");
    }
    std::map<EdgeKey, Label> els;
    for (const json& e : doc["edges"]) {
        EdgeKey key{string_field(e, "from", "graph document edge"),
                    string_field(e, "to", "graph document edge")};
        Label label = string_field(e, "label", "graph document edge");
        if (!els.emplace(key, label).second)
            throw invalid_input("graph document: duplicate edge (" + key.first + ", " +
                                key.second + ")");
    }
    return Graph::make(vls, els, taxonomy);
}

std::string serialize_graph(const Graph& g, bool canonical) {
    if (canonical)
        return canonical_key(g);
    json doc;
    doc["vertices"] = json::array();
    for (const VertexId& v : g.vertices())
        doc["vertices"].push_back({{"id", v}, {"label", g.vertex_label(v)}});
    doc["edges"] = json::array();
    for (const Graph::Edge& e : g.edges())
        doc["edges"].push_back({{"from", g.vertex_at(e.from)},
                                {"to", g.vertex_at(e.to)},
                                {"label", e.label}});
    return doc.dump(2) + "\n";
}

LabelTaxonomy parse_taxonomy(const std::string& text) {
    json doc = parse_json(text, "taxonomy document");
    if (!doc.is_object() || !doc.contains("top") || !doc["top"].is_string() ||
        !doc.contains("covers") || !doc["covers"].is_array())
        throw invalid_input("taxonomy document: expected an object with 'top' and 'covers'");
    std::vector<std::pair<Label, Label>> covers;
    for (const json& pair : doc["covers"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
            !pair[1].is_string())
            throw invalid_input("taxonomy document: covers entries are [parent, child] pairs");
        covers.push_back({pair[0].get<std::string>(), pair[1].get<std::string>()});
    }
    return LabelTaxonomy::make(doc["top"].get<std::string>(), covers);
}

std::string serialize_taxonomy(const LabelTaxonomy& t) {
    json doc;
    doc["top"] = t.top();
    doc["covers"] = json::array();
    for (const auto& [parent, child] : t.covers())
        doc["covers"].push_back(json::array({parent, child}));
    return doc.dump(2) + "\n";
}

TrainingSet load_dataset(const std::string& manifest_path, const LabelTaxonomy* taxonomy) {
    json doc = parse_json(read_file(manifest_path), "dataset manifest");
    if (!doc.is_object() || !doc.contains("examples") || !doc["examples"].is_array())
        throw invalid_input("dataset manifest: expected an object with an 'examples' array");
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    TrainingSet out;
    std::vector<std::string> problems;
    std::size_t index = 0;
    for (const json& entry : doc["examples"]) {
        ++index;
        try {
            std::string rel = string_field(entry, "graph", "dataset entry");
            std::string cls = string_field(entry, "class", "dataset entry");
            Graph g = parse_graph(read_file((base / rel).string()), taxonomy);
            out.examples.push_back({std::move(g), std::move(cls)});
        } catch (const std::exception& e) {
            problems.push_back("entry " + std::to_string(index) + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string all = "dataset manifest: " + std::to_string(problems.size()) +
                          " bad entries";
        for (const std::string& p : problems)
            all += "\n  " + p;
        throw invalid_input(all);
    }
    return out;
}

std::string serialize_weight_table(const WeightTable& w) {
    std::string out;
    char buf[64];
    for (const auto& [key, weight] : w.entries) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, weight);
        out += key;
        out += '\t';
        out.append(buf, end);
        out += '\n';
    }
    return out;
}

WeightTable parse_weight_table(const std::string& text, double default_weight) {
    WeightTable out;
    out.default_weight = default_weight;
    std::istringstream stream(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw invalid_input("weight table line " + std::to_string(lineno) +
                                ": expected key<TAB>weight");
        std::string key = line.substr(0, tab);
        std::string value = line.substr(tab + 1);
        double weight = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), weight);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw invalid_input("weight table line " + std::to_string(lineno) +
                                ": bad weight '" + value + "'");
        if (weight < 0.0)
            throw invalid_input("weight table line " + std::to_string(lineno) +
                                ": negative weight");
        out.entries[key] = weight;
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw invalid_input("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // Normalize line endings.
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
            continue;
        out += text[i] == '\r' ? '\n' : text[i];
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw invalid_input("cannot write file '" + path + "'");
    out << text;
}

std::string to_dot(const Graph& g) {
    std::string out = "digraph g {\n";
    for (const VertexId& v : g.vertices())
        out += "  \"" + v + "\" [label=\"" + v + ": " + g.vertex_label(v) + "\"];\n";
    for (const Graph::Edge& e : g.edges())
        out += "  \"" + g.vertex_at(e.from) + "\" -> \"" + g.vertex_at(e.to) + "\" [label=\"" +
               e.label + "\"];\n";
    out += "}\n";
    return out;
}

} // namespace dlg
