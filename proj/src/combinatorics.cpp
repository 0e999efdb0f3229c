#include "dualbbgky/combinatorics.hpp"

#include <algorithm>

namespace dualbbgky {

LabelSet::LabelSet(std::vector<Label> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
        throw ValidationError("LabelSet: duplicate label");
    if (!labels_.empty() && labels_.front() < 1)
        throw ValidationError("LabelSet: labels must be positive");
}

LabelSet LabelSet::range(int n) {
    if (n < 0) throw ValidationError("LabelSet::range: negative size");
    std::vector<Label> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    LabelSet out;
    out.labels_ = std::move(v);
    return out;
}

bool LabelSet::contains(Label l) const {
    return std::binary_search(labels_.begin(), labels_.end(), l);
}

bool LabelSet::is_subset_of(const LabelSet& other) const {
    return std::includes(other.labels_.begin(), other.labels_.end(), labels_.begin(), labels_.end());
}

int LabelSet::index_of(Label l) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
    if (it == labels_.end() || *it != l) return -1;
    return static_cast<int>(it - labels_.begin());
}

LabelSet LabelSet::unite(const LabelSet& other) const {
    std::vector<Label> v;
    v.reserve(size() + other.size());
    std::set_union(labels_.begin(), labels_.end(), other.labels_.begin(), other.labels_.end(),
                   std::back_inserter(v));
    LabelSet out;
    out.labels_ = std::move(v);
    return out;
}

LabelSet LabelSet::minus(const LabelSet& other) const {
    std::vector<Label> v;
    std::set_difference(labels_.begin(), labels_.end(), other.labels_.begin(), other.labels_.end(),
                        std::back_inserter(v));
    LabelSet out;
    out.labels_ = std::move(v);
    return out;
}

Element Element::cluster(LabelSet labels) {
    if (labels.empty()) throw ValidationError("Element::cluster: cluster must be nonempty");
    return Element(std::move(labels), true);
}

std::uint64_t factorial(int n) {
    if (n < 0 || n > 20) throw CapacityError("factorial: n out of exact-arithmetic range");
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::uint64_t bell_number(int n) {
    if (n < 0 || n > 20) throw CapacityError("bell_number: n out of exact-arithmetic range");
    // Bell triangle
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::size_t j = 0; j < row.size(); ++j) next.push_back(next[j] + row[j]);
        row = std::move(next);
    }
    return row.front();
}

std::uint64_t stirling2(int n, int k) {
    if (n < 0 || k < 0) throw ValidationError("stirling2: negative argument");
    if (n > 20) throw CapacityError("stirling2: n out of exact-arithmetic range");
    if (k > n) return 0;  // no partition of an n-set has more than n blocks
    if (n == 0) return k == 0 ? 1 : 0;
    if (k == 0) return 0;
    // S(n,k) = k S(n-1,k) + S(n-1,k-1)
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j)
            row[static_cast<std::size_t>(j)] =
                static_cast<std::uint64_t>(j) * row[static_cast<std::size_t>(j)] +
                row[static_cast<std::size_t>(j) - 1];
        row[0] = 0;
    }
    return row[static_cast<std::size_t>(k)];
}

std::int64_t signed_partition_sum(int n) {
    if (n < 1 || n > kMaxPartitionElements)
        throw CapacityError("signed_partition_sum: n outside [1, 12]");
    std::int64_t sum = 0;
    for (int k = 1; k <= n; ++k) {
        const auto term = static_cast<std::int64_t>(stirling2(n, k) * factorial(k - 1));
        sum += (k % 2 == 1) ? term : -term;
    }
    return sum;
}

std::int64_t signed_factorial_sum(int n) {
    if (n < 0 || n > kMaxPartitionElements)
        throw CapacityError("signed_factorial_sum: n outside [0, 12]");
    if (n == 0) return 1;
    std::int64_t sum = 0;
    for (int k = 1; k <= n; ++k) {
        const auto term = static_cast<std::int64_t>(stirling2(n, k) * factorial(k));
        sum += (k % 2 == 0) ? term : -term;
    }
    return sum;
}

std::vector<Partition> enumerate_partitions(std::span<const Element> elems) {
    std::vector<Partition> out;
    for_each_partition(elems, [&](const Partition& p) { out.push_back(p); });
    return out;
}

std::vector<Element> singles_of(const LabelSet& y) {
    std::vector<Element> out;
    out.reserve(y.size());
    for (Label l : y) out.push_back(Element::single(l));
    return out;
}

std::vector<std::vector<Label>> distinct_tuples(const LabelSet& y, int n) {
    if (n < 0) throw ValidationError("distinct_tuples: negative tuple length");
    if (std::ssize(y.labels()) > kMaxPartitionElements)
        throw CapacityError("distinct_tuples: ground set exceeds the guard");
    std::vector<std::vector<Label>> out;
    if (n > static_cast<int>(y.size())) return out;

    std::vector<Label> tuple;
    std::vector<bool> used(y.size(), false);
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(tuple.size()) == n) {
            out.push_back(tuple);
            return;
        }
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            tuple.push_back(y[i]);
            self(self);
            tuple.pop_back();
            used[i] = false;
        }
    };
    recurse(recurse);
    return out;
}

std::vector<LabelSet> k_subsets(const LabelSet& y, int k) {
    if (k < 0) throw ValidationError("k_subsets: negative subset size");
    std::vector<LabelSet> out;
    const int m = static_cast<int>(y.size());
    if (k > m) return out;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        std::vector<Label> v;
        v.reserve(static_cast<std::size_t>(k));
        for (int i : idx) v.push_back(y[static_cast<std::size_t>(i)]);
        out.push_back(LabelSet(std::move(v)));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
    }
    return out;
}

std::vector<LabelSet> nonempty_subsets(const LabelSet& y) {
    const int m = static_cast<int>(y.size());
    if (m > kMaxPartitionElements) throw CapacityError("nonempty_subsets: ground set exceeds the guard");
    std::vector<LabelSet> out;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<Label> v;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) v.push_back(y[static_cast<std::size_t>(i)]);
        out.push_back(LabelSet(std::move(v)));
    }
    return out;
}

}  // namespace dualbbgky
