#include "dlg/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dlg/errors.hpp"

namespace dlg {

LabelTaxonomy LabelTaxonomy::make(Label top,
                                  const std::vector<std::pair<Label, Label>>& covers) {
    LabelTaxonomy t;
    t.top_ = top;

    std::set<Label> label_set{top};
    std::set<std::pair<Label, Label>> cover_set;
    for (const auto& [parent, child] : covers) {
        label_set.insert(parent);
        label_set.insert(child);
        if (parent == child)
            throw invalid_input("taxonomy: cover pair relates '" + parent + "' to itself");
        if (!cover_set.insert({parent, child}).second)
            throw invalid_input("taxonomy: duplicate cover pair [" + parent + ", " + child + "]");
    }
    t.labels_.assign(label_set.begin(), label_set.end());
    t.covers_.assign(cover_set.begin(), cover_set.end());
    for (std::size_t i = 0; i < t.labels_.size(); ++i)
        t.index_[t.labels_[i]] = static_cast<int>(i);

    const int n = static_cast<int>(t.labels_.size());

    // Reachability of the raw cover pairs.
    std::vector<std::vector<int>> raw_children(n);
    for (const auto& [parent, child] : cover_set)
        raw_children[t.index_[parent]].push_back(t.index_[child]);
    t.leq_.assign(n, std::vector<char>(n, 0));
    for (int s = 0; s < n; ++s) {
        t.leq_[s][s] = 1;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : raw_children[u])
                if (!t.leq_[s][v]) {
                    t.leq_[s][v] = 1;
                    queue.push_back(v);
                }
        }
    }

    // Acyclicity: mutual reachability between distinct labels is a cycle.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (t.leq_[i][j] && t.leq_[j][i])
                throw invalid_input("taxonomy: cycle through '" + t.labels_[i] + "' and '" +
                                    t.labels_[j] + "'");

    // Top must reach everything.
    const int top_index = t.index_[top];
    for (int j = 0; j < n; ++j)
        if (!t.leq_[top_index][j])
            throw invalid_input("taxonomy: label '" + t.labels_[j] +
                                "' is not reachable from top '" + top + "'");

    // Hasse diagram of the induced order.
    t.covers_.clear();
    t.children_.resize(n);
    t.parents_.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !t.leq_[i][j])
                continue;
            bool direct = true;
            for (int c = 0; c < n && direct; ++c)
                if (c != i && c != j && t.leq_[i][c] && t.leq_[c][j])
                    direct = false;
            if (direct) {
                t.covers_.push_back({t.labels_[i], t.labels_[j]});
                t.children_[i].push_back(t.labels_[j]);
                t.parents_[j].push_back(t.labels_[i]);
            }
        }
    std::sort(t.covers_.begin(), t.covers_.end());

    // Shortest Hasse chains between every pair; -1 where unreachable.
    t.dist_.assign(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
        t.dist_[s][s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (const Label& c : t.children_[u]) {
                int v = t.index_[c];
                if (t.dist_[s][v] < 0) {
                    t.dist_[s][v] = t.dist_[s][u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }

    for (auto& c : t.children_)
        std::sort(c.begin(), c.end());
    for (auto& p : t.parents_)
        std::sort(p.begin(), p.end());
    return t;
}

int LabelTaxonomy::index_of(const Label& l) const {
    auto it = index_.find(l);
    if (it == index_.end())
        throw invalid_input("taxonomy: unknown label '" + l + "'");
    return it->second;
}

bool LabelTaxonomy::leq(const Label& a, const Label& b) const {
    return leq_[index_of(a)][index_of(b)] != 0;
}

std::optional<int> LabelTaxonomy::distance(const Label& a, const Label& b) const {
    int d = dist_[index_of(a)][index_of(b)];
    if (d < 0)
        return std::nullopt;
    return d;
}

int LabelTaxonomy::depth(const Label& l) const {
    return dist_[index_of(top_)][index_of(l)];
}

const std::vector<Label>& LabelTaxonomy::children(const Label& l) const {
    return children_[index_of(l)];
}

const std::vector<Label>& LabelTaxonomy::parents(const Label& l) const {
    return parents_[index_of(l)];
}

bool LabelTaxonomy::covers_step(const Label& a, const Label& b) const {
    index_of(b);
    const auto& c = children_[index_of(a)];
    return std::binary_search(c.begin(), c.end(), b);
}

std::vector<Label> LabelTaxonomy::deepest_common_generalizations(const Label& a,
                                                                 const Label& b) const {
    const int ia = index_of(a), ib = index_of(b);
    int best = -1;
    std::vector<Label> out;
    for (std::size_t c = 0; c < labels_.size(); ++c) {
        if (!leq_[c][ia] || !leq_[c][ib])
            continue;
        int d = depth(labels_[c]);
        if (d > best) {
            best = d;
            out.clear();
        }
        if (d == best)
            out.push_back(labels_[c]);
    }
    return out; // sorted because labels_ is sorted
}

std::vector<Label> LabelTaxonomy::minimal_common_specializations(const Label& a,
                                                                 const Label& b) const {
    const int ia = index_of(a), ib = index_of(b);
    std::vector<int> candidates;
    for (std::size_t c = 0; c < labels_.size(); ++c)
        if (leq_[ia][c] && leq_[ib][c])
            candidates.push_back(static_cast<int>(c));
    std::vector<Label> out;
    for (int c : candidates) {
        bool minimal = true;
        for (int d : candidates)
            if (d != c && leq_[d][c]) {
                minimal = false;
                break;
            }
        if (minimal)
            out.push_back(labels_[c]);
    }
    return out;
}

} // namespace dlg
