#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dlg {

using Label = std::string;

/// A partially ordered label set with a single most-general element.
///
/// The order is given by cover pairs (parent, child): the parent is
/// strictly more general than the child. `leq(a, b)` holds when `a` is
/// equal to or more general than `b`, i.e. `b` is reachable from `a`
/// through cover pairs. Every label must be reachable from the top
/// element. Redundant input pairs are normalized away: covers() returns
/// the Hasse diagram of the induced order, and distances count Hasse
/// steps.
class LabelTaxonomy {
public:
    LabelTaxonomy() = default;

    static LabelTaxonomy make(Label top,
                              const std::vector<std::pair<Label, Label>>& covers);

    const Label& top() const { return top_; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<std::pair<Label, Label>>& covers() const { return covers_; }
    bool contains(const Label& l) const { return index_.count(l) != 0; }

    /// True iff a is equal to or more general than b.
    bool leq(const Label& a, const Label& b) const;

    /// Number of cover steps on a shortest chain from a down to b;
    /// absent when !leq(a, b). distance(a, a) == 0.
    std::optional<int> distance(const Label& a, const Label& b) const;

    /// distance(top, l); every label has one.
    int depth(const Label& l) const;

    /// One Hasse step more specific / more general than l, sorted.
    const std::vector<Label>& children(const Label& l) const;
    const std::vector<Label>& parents(const Label& l) const;

    /// True iff b is exactly one Hasse step more specific than a: a is
    /// strictly more general and no third label sits strictly between.
    bool covers_step(const Label& a, const Label& b) const;

    /// Labels c with leq(c, a) && leq(c, b) of maximal depth, sorted.
    /// Never empty: the top element is always a common generalization.
    std::vector<Label> deepest_common_generalizations(const Label& a, const Label& b) const;

    /// Most general labels c with leq(a, c) && leq(b, c), sorted.
    /// Empty when a and b have no common specialization.
    std::vector<Label> minimal_common_specializations(const Label& a, const Label& b) const;

private:
    int index_of(const Label& l) const;

    Label top_;
    std::vector<Label> labels_; // sorted
    std::vector<std::pair<Label, Label>> covers_; // sorted
    std::map<Label, int> index_;
    std::vector<std::vector<Label>> children_, parents_;
    std::vector<std::vector<char>> leq_; // leq_[i][j]: labels_[i] <= labels_[j]
    std::vector<std::vector<int>> dist_; // cover steps, -1 when unrelated
};

} // namespace dlg
