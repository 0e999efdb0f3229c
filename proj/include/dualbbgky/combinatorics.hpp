#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "dualbbgky/errors.hpp"

namespace dualbbgky {

using Label = int;

/// Strictly increasing list of distinct positive particle labels.
class LabelSet {
public:
    LabelSet() = default;
    LabelSet(std::initializer_list<Label> labels) : LabelSet(std::vector<Label>(labels)) {}
    explicit LabelSet(std::vector<Label> labels);

    /// The canonical set {1, 2, ..., n}.
    static LabelSet range(int n);

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    Label operator[](std::size_t i) const { return labels_[i]; }
    const std::vector<Label>& labels() const { return labels_; }

    bool contains(Label l) const;
    bool is_subset_of(const LabelSet& other) const;
    /// Position of label l within the set, or -1.
    int index_of(Label l) const;

    LabelSet unite(const LabelSet& other) const;
    LabelSet minus(const LabelSet& other) const;

    auto begin() const { return labels_.begin(); }
    auto end() const { return labels_.end(); }

    bool operator==(const LabelSet&) const = default;
    bool operator<(const LabelSet& other) const { return labels_ < other.labels_; }

private:
    std::vector<Label> labels_;
};

/// One item of a partition ground set: a single particle label, or a
/// "cluster" standing in for a whole nonempty particle set fused into
/// one element. Clusters let one partition element carry several
/// particles, which is how the mixed cumulant arguments are indexed.
class Element {
public:
    static Element single(Label l) { return Element(LabelSet{l}, false); }
    static Element cluster(LabelSet labels);

    bool is_cluster() const { return cluster_; }
    const LabelSet& labels() const { return labels_; }
    Label least() const { return labels_[0]; }
    int particle_count() const { return static_cast<int>(labels_.size()); }

    bool operator==(const Element&) const = default;

private:
    Element(LabelSet labels, bool cluster) : labels_(std::move(labels)), cluster_(cluster) {}
    LabelSet labels_;
    bool cluster_ = false;
};

/// Blocks of elements from one enumeration step. Canonical form: elements
/// keep input order inside a block, blocks are ordered by first element.
struct Partition {
    std::vector<std::vector<Element>> blocks;
    std::size_t block_count() const { return blocks.size(); }
};

/// Bell(12) = 4,213,597; anything past that is not desk scale.
inline constexpr int kMaxPartitionElements = 12;

std::uint64_t factorial(int n);
std::uint64_t bell_number(int n);

/// Partitions of an n-set counted by block number k; exact integers.
/// stirling2(n, k) = 0 for k > n by convention.
std::uint64_t stirling2(int n, int k);

/// Sum of (-1)^{|P|-1} (|P|-1)! over all partitions P of an n-set.
/// Equals 1 for n = 1 and 0 otherwise; this collapse is what makes
/// every higher cumulant of a non-interacting group vanish.
std::int64_t signed_partition_sum(int n);

/// Sum of (-1)^{|P|} |P|! over all partitions of an n-set; the empty
/// set contributes one empty partition with |P| = 0. Equals (-1)^n.
std::int64_t signed_factorial_sum(int n);

namespace detail {

// Lexicographic restricted-growth strings: rgs[0] = 0 and
// rgs[i] <= 1 + max(rgs[0..i-1]). Each string is one set partition,
// blocks indexed by first occurrence.
template <typename Visitor>
void visit_partitions_rgs(std::span<const Element> elems, Visitor&& visit) {
    const int n = static_cast<int>(elems.size());
    std::vector<int> rgs(n, 0);
    std::vector<int> prefix_max(n, 0);  // prefix_max[i] = max(rgs[0..i])
    Partition part;
    for (;;) {
        const int nblocks = prefix_max[n - 1] + 1;
        part.blocks.assign(nblocks, {});
        for (int i = 0; i < n; ++i) part.blocks[rgs[i]].push_back(elems[i]);
        visit(std::as_const(part));

        int i = n - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
        if (i == 0) break;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (int j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

}  // namespace detail

/// Visit every set partition of the given elements exactly once, in a
/// fixed canonical order. With ascending input elements the blocks of
/// each partition come out sorted by least label.
template <typename Visitor>
void for_each_partition(std::span<const Element> elems, Visitor&& visit) {
    if (elems.empty()) throw ValidationError("for_each_partition: element list is empty");
    if (std::ssize(elems) > kMaxPartitionElements)
        throw CapacityError("for_each_partition: " + std::to_string(elems.size()) +
                            " elements exceeds the guard of " + std::to_string(kMaxPartitionElements));
    detail::visit_partitions_rgs(elems, std::forward<Visitor>(visit));
}

/// Materialized form of for_each_partition; count equals Bell(|elems|).
std::vector<Partition> enumerate_partitions(std::span<const Element> elems);

/// Convenience: the labels of Y as singleton elements, ascending.
std::vector<Element> singles_of(const LabelSet& y);

/// All ordered n-tuples of distinct labels drawn from Y, lexicographic
/// by position. n = 0 yields one empty tuple; n > |Y| yields nothing.
std::vector<std::vector<Label>> distinct_tuples(const LabelSet& y, int n);

/// All k-element subsets of Y, ascending within and across subsets.
std::vector<LabelSet> k_subsets(const LabelSet& y, int k);

/// All nonempty subsets of Y in a fixed (bitmask) order.
std::vector<LabelSet> nonempty_subsets(const LabelSet& y);

}  // namespace dualbbgky
