#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "dlg/graph.hpp"
#include "dlg/io.hpp"
#include "dlg/taxonomy.hpp"

inline std::string fixtures_dir() {
    const char* dir = std::getenv("DLG_FIXTURES");
    if (!dir)
        throw std::runtime_error("DLG_FIXTURES is not set");
    return dir;
}

inline dlg::Graph fixture_graph(const std::string& name,
                                const dlg::LabelTaxonomy* tax = nullptr) {
    return dlg::parse_graph(dlg::read_file(fixtures_dir() + "/" + name + ".json"), tax);
}

inline dlg::LabelTaxonomy fixture_taxonomy(const std::string& name) {
    return dlg::parse_taxonomy(dlg::read_file(fixtures_dir() + "/" + name + ".json"));
}
