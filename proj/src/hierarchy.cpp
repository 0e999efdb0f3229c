#include "dualbbgky/hierarchy.hpp"

#include <cassert>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dualbbgky {

namespace {

void require_compatible(const SystemSpec& spec, const OperatorSequence& seq, const char* where) {
    if (seq.site_dim() != spec.site_dim() || seq.order() != spec.truncation_order())
        throw ValidationError(std::string(where) + ": sequence shape does not match the system");
}

// The component-coupling formulas relabel lower components onto
// arbitrary label subsets, which is only meaningful for
// relabeling-invariant sequences. The contract asks for residuals
// within 1e-10; the guard sits a bit above roundoff accumulation.
void require_symmetric(const OperatorSequence& seq, const char* where) {
    const double residual = seq.symmetry_residual();
    if (residual > 1e-8)
        throw ValidationError(std::string(where) +
                              ": sequence is not relabeling-invariant (symmetry residual " +
                              std::to_string(residual) + ")");
}

double inv_factorial(int n) { return 1.0 / static_cast<double>(factorial(n)); }

LabelSet labels_of_tuple(const std::vector<Label>& tuple) {
    return LabelSet(std::vector<Label>(tuple.begin(), tuple.end()));
}

LabelSet tuple_prefix(const std::vector<Label>& tuple, int n) {
    return LabelSet(std::vector<Label>(tuple.begin(), tuple.begin() + n));
}

}  // namespace

// -- OperatorSequence ----------------------------------------------------

OperatorSequence::OperatorSequence(int site_dim, int truncation_order)
    : d_(site_dim), order_(truncation_order) {
    if (d_ < 2) throw ValidationError("OperatorSequence: site dimension must be >= 2");
    if (order_ < 1) throw ValidationError("OperatorSequence: truncation order must be >= 1");
    components_.reserve(static_cast<std::size_t>(order_) + 1);
    components_.push_back(ManyBodyOperator::scalar(0.0, d_));
    for (int s = 1; s <= order_; ++s)
        components_.push_back(ManyBodyOperator::zero(LabelSet::range(s), d_));
}

OperatorSequence OperatorSequence::zero(const SystemSpec& spec) {
    return OperatorSequence(spec.site_dim(), spec.truncation_order());
}

OperatorSequence OperatorSequence::identities(const SystemSpec& spec) {
    OperatorSequence out(spec.site_dim(), spec.truncation_order());
    out.set_scalar(1.0);
    for (int s = 1; s <= out.order(); ++s)
        out.set_component(s, ManyBodyOperator::identity(LabelSet::range(s), spec.site_dim()));
    return out;
}

const ManyBodyOperator& OperatorSequence::component(int s) const {
    if (s < 0 || s > order_) throw std::out_of_range("OperatorSequence::component");
    return components_[static_cast<std::size_t>(s)];
}

void OperatorSequence::set_component(int s, ManyBodyOperator op) {
    if (s < 0 || s > order_) throw std::out_of_range("OperatorSequence::set_component");
    if (op.site_dim() != d_) throw ValidationError("set_component: site dimension mismatch");
    if (op.labels() != LabelSet::range(s))
        throw ValidationError("set_component: component " + std::to_string(s) +
                              " must act on labels {1.." + std::to_string(s) + "}");
    components_[static_cast<std::size_t>(s)] = std::move(op);
}

void OperatorSequence::set_scalar(Complex value) {
    components_[0] = ManyBodyOperator::scalar(value, d_);
}

double OperatorSequence::symmetry_residual() const {
    double worst = 0.0;
    for (const auto& c : components_) worst = std::max(worst, check_symmetry(c));
    return worst;
}

double OperatorSequence::hermiticity_residual() const {
    double worst = 0.0;
    for (const auto& c : components_) worst = std::max(worst, dualbbgky::hermiticity_residual(c));
    return worst;
}

double OperatorSequence::positivity_floor() const {
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& c : components_) {
        if (c.is_scalar()) {
            floor = std::min(floor, c.scalar_value().real());
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c.matrix() + c.matrix().adjoint()));
        floor = std::min(floor, es.eigenvalues().minCoeff());
    }
    return floor;
}

OperatorSequence& OperatorSequence::operator+=(const OperatorSequence& other) {
    if (d_ != other.d_ || order_ != other.order_) throw ValidationError("sequence +=: shape mismatch");
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += other.components_[i];
    return *this;
}

OperatorSequence& OperatorSequence::operator-=(const OperatorSequence& other) {
    if (d_ != other.d_ || order_ != other.order_) throw ValidationError("sequence -=: shape mismatch");
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= other.components_[i];
    return *this;
}

OperatorSequence& OperatorSequence::operator*=(Complex factor) {
    for (auto& c : components_) c *= factor;
    return *this;
}

double max_component_distance(const OperatorSequence& a, const OperatorSequence& b) {
    if (a.site_dim() != b.site_dim() || a.order() != b.order())
        throw ValidationError("max_component_distance: shape mismatch");
    double worst = 0.0;
    for (int s = 0; s <= a.order(); ++s)
        worst = std::max(worst, norm(a.component(s) - b.component(s), NormKind::Operator));
    return worst;
}

// -- cumulants -----------------------------------------------------------

ClusterArgument::ClusterArgument(LabelSet cluster_labels, LabelSet single_labels)
    : cluster(std::move(cluster_labels)), singles(std::move(single_labels)) {
    if (cluster.empty()) throw ValidationError("ClusterArgument: cluster must be nonempty");
    if (cluster.unite(singles).size() != cluster.size() + singles.size())
        throw ValidationError("ClusterArgument: cluster and singles overlap");
}

std::vector<Element> ClusterArgument::elements() const {
    std::vector<Element> out;
    out.reserve(1 + singles.size());
    out.push_back(Element::cluster(cluster));
    for (Label l : singles) out.push_back(Element::single(l));
    return out;
}

CumulantMap::CumulantMap(const SystemSpec& spec, double t, std::vector<Element> elements)
    : spec_(&spec), t_(t), elements_(std::move(elements)) {
    if (elements_.empty()) throw ValidationError("CumulantMap: no elements");
    // canonical element order so partitions enumerate with blocks
    // sorted by least label
    std::sort(elements_.begin(), elements_.end(),
              [](const Element& a, const Element& b) { return a.least() < b.least(); });
    std::size_t total = 0;
    for (const Element& e : elements_) {
        support_ = support_.unite(e.labels());
        total += e.labels().size();
    }
    if (support_.size() != total) throw ValidationError("CumulantMap: elements carry overlapping labels");
    if (static_cast<int>(support_.size()) > spec.truncation_order())
        throw CapacityError("CumulantMap: support exceeds the truncation order");
}

ManyBodyOperator CumulantMap::apply(const ManyBodyOperator& operand) const {
    const LabelSet full = support_.unite(operand.labels());
    const ManyBodyOperator base = embed(operand, full);
    Matrix acc = Matrix::Zero(base.dim(), base.dim());

    for_each_partition(elements_, [&](const Partition& p) {
        const int nblocks = static_cast<int>(p.block_count());
        const double weight =
            ((nblocks - 1) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(factorial(nblocks - 1));

        Matrix u = Matrix::Identity(base.dim(), base.dim());
        for (const auto& block : p.blocks) {
            LabelSet block_labels;
            for (const Element& e : block) block_labels = block_labels.unite(e.labels());
            const ManyBodyOperator ub =
                embed(unitary_of(spec_->hamiltonian(block_labels), t_, spec_->hbar()), full);
            u = ub.matrix() * u;
        }
#ifndef NDEBUG
        {
            // block propagators live on disjoint labels and must commute
            Matrix v = Matrix::Identity(base.dim(), base.dim());
            for (auto it = p.blocks.rbegin(); it != p.blocks.rend(); ++it) {
                LabelSet block_labels;
                for (const Element& e : *it) block_labels = block_labels.unite(e.labels());
                v = embed(unitary_of(spec_->hamiltonian(block_labels), t_, spec_->hbar()), full).matrix() * v;
            }
            assert((u - v).cwiseAbs().maxCoeff() < 1e-10);
        }
#endif
        acc += weight * (u * base.matrix() * u.adjoint());
    });
    return ManyBodyOperator(full, base.site_dim(), std::move(acc));
}

CumulantMap dual_cumulant(const SystemSpec& spec, double t, const ClusterArgument& arg) {
    return CumulantMap(spec, t, arg.elements());
}

CumulantMap cumulant_state(const SystemSpec& spec, double t, const ClusterArgument& arg) {
    return CumulantMap(spec, -t, arg.elements());
}

ManyBodyOperator group_apply(const SystemSpec& spec, double t, const LabelSet& support,
                             const ManyBodyOperator& operand) {
    if (support.empty()) return operand;
    const LabelSet full = support.unite(operand.labels());
    const ManyBodyOperator u = embed(unitary_of(spec.hamiltonian(support), t, spec.hbar()), full);
    return conjugate(u, embed(operand, full));
}

// -- sequence-level evolution -------------------------------------------

ObservableSequence evolve_heisenberg(const SystemSpec& spec, double t, const ObservableSequence& a0) {
    require_compatible(spec, a0, "evolve_heisenberg");
    ObservableSequence out = a0;
    for (int s = 1; s <= out.order(); ++s)
        out.set_component(s, group_apply(spec, t, LabelSet::range(s), a0.component(s)));
    return out;
}

StateSequence evolve_vonneumann(const SystemSpec& spec, double t, const StateSequence& d0) {
    require_compatible(spec, d0, "evolve_vonneumann");
    StateSequence out = d0;
    for (int s = 1; s <= out.order(); ++s)
        out.set_component(s, group_apply(spec, -t, LabelSet::range(s), d0.component(s)));
    return out;
}

ObservableSequence a_plus(const ObservableSequence& g) {
    require_symmetric(g, "a_plus");
    ObservableSequence out(g.site_dim(), g.order());
    for (int s = 1; s <= g.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = ManyBodyOperator::zero(y, g.site_dim());
        for (Label j : y)
            acc += embed(g.component(s - 1).relabeled(y.minus(LabelSet{j})), y);
        out.set_component(s, acc);
    }
    return out;
}

ObservableSequence exp_a_plus(const ObservableSequence& g, int sign) {
    if (sign != 1 && sign != -1) throw ValidationError("exp_a_plus: sign must be +1 or -1");
    require_symmetric(g, "exp_a_plus");
    ObservableSequence out(g.site_dim(), g.order());
    out.set_scalar(g.scalar_component());
    for (int s = 1; s <= g.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = ManyBodyOperator::zero(y, g.site_dim());
        for (int n = 0; n <= s; ++n) {
            const double coeff = (sign > 0 || n % 2 == 0 ? 1.0 : -1.0) * inv_factorial(n);
            for (const auto& tuple : distinct_tuples(y, n)) {
                const LabelSet kept = y.minus(labels_of_tuple(tuple));
                acc += coeff * embed(g.component(s - n).relabeled(kept), y);
            }
        }
        out.set_component(s, acc);
    }
    return out;
}

ObservableSequence marginal_observables(const ObservableSequence& a) { return exp_a_plus(a, -1); }

// -- the dual hierarchy --------------------------------------------------

ObservableSequence solve_dual_cumulant(const SystemSpec& spec, double t, const ObservableSequence& g0) {
    require_compatible(spec, g0, "solve_dual_cumulant");
    require_symmetric(g0, "solve_dual_cumulant");
    ObservableSequence out(g0.site_dim(), g0.order());
    out.set_scalar(g0.scalar_component());
    for (int s = 1; s <= g0.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = ManyBodyOperator::zero(y, g0.site_dim());
        // n = number of singles; the cluster keeps s-n >= 1 particles.
        // The would-be n = s term carries an empty cluster and vanishes
        // identically, so the sum stops at n = s-1.
        for (int n = 0; n <= s - 1; ++n) {
            const int len = s - n;
            const double coeff = inv_factorial(len);
            for (const auto& tuple : distinct_tuples(y, len)) {
                const LabelSet cluster = labels_of_tuple(tuple);
                const ClusterArgument arg(cluster, y.minus(cluster));
                acc += coeff * dual_cumulant(spec, t, arg).apply(g0.component(len).relabeled(cluster));
            }
        }
        out.set_component(s, acc);
    }
    return out;
}

ObservableSequence solve_dual_similarity(const SystemSpec& spec, double t, const ObservableSequence& g0) {
    require_compatible(spec, g0, "solve_dual_similarity");
    return exp_a_plus(evolve_heisenberg(spec, t, exp_a_plus(g0, +1)), -1);
}

ObservableSequence solve_dual_pair_cumulant(const SystemSpec& spec, double t,
                                            const ObservableSequence& g0) {
    require_compatible(spec, g0, "solve_dual_pair_cumulant");
    require_symmetric(g0, "solve_dual_pair_cumulant");
    ObservableSequence out(g0.site_dim(), g0.order());
    out.set_scalar(g0.scalar_component());
    for (int s = 1; s <= g0.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = group_apply(spec, t, y, g0.component(s));
        for (int n = 1; n <= s - 1; ++n) {
            const int len = s - n;
            const double coeff = inv_factorial(len);
            for (const auto& tuple : distinct_tuples(y, len)) {
                const LabelSet w = labels_of_tuple(tuple);
                const LabelSet x = y.minus(w);
                for (const LabelSet& z : nonempty_subsets(x)) {
                    const double sign = (static_cast<int>(x.size() - z.size()) % 2 == 0) ? 1.0 : -1.0;
                    CumulantMap pair(spec, t, {Element::cluster(w), Element::cluster(z)});
                    acc += coeff * sign * embed(pair.apply(g0.component(len).relabeled(w)), y);
                }
            }
        }
        out.set_component(s, acc);
    }
    return out;
}

ObservableSequence liouville_sequence(const SystemSpec& spec, const ObservableSequence& g) {
    require_compatible(spec, g, "liouville_sequence");
    ObservableSequence out(g.site_dim(), g.order());
    for (int s = 1; s <= g.order(); ++s) out.set_component(s, liouville_observable(spec, g.component(s)));
    return out;
}

ObservableSequence dual_generator(const SystemSpec& spec, const ObservableSequence& g) {
    require_compatible(spec, g, "dual_generator");
    require_symmetric(g, "dual_generator");
    ObservableSequence out(g.site_dim(), g.order());
    for (int s = 1; s <= g.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = liouville_observable(spec, g.component(s));
        for (int n = 1; n <= s; ++n) {
            for (int k = n + 1; k <= s; ++k) {
                if (spec.potential(k) == nullptr) continue;  // absent orders contribute zero here
                const double coeff = inv_factorial(n) * inv_factorial(k - n);
                for (const auto& tuple : distinct_tuples(y, k)) {
                    const LabelSet removed = tuple_prefix(tuple, n);
                    const LabelSet pot_labels = labels_of_tuple(tuple);
                    const ManyBodyOperator lower =
                        embed(g.component(s - n).relabeled(y.minus(removed)), y);
                    acc += coeff * interaction_liouville(spec, k, pot_labels, lower);
                }
            }
        }
        out.set_component(s, acc);
    }
    return out;
}

ObservableSequence dual_generator_similarity(const SystemSpec& spec, const ObservableSequence& g) {
    require_compatible(spec, g, "dual_generator_similarity");
    return exp_a_plus(liouville_sequence(spec, exp_a_plus(g, +1)), -1);
}

// -- the state side ------------------------------------------------------

StateSequence bbgky_group_states(const SystemSpec& spec, double t, const StateSequence& f) {
    require_compatible(spec, f, "bbgky_group_states");
    require_symmetric(f, "bbgky_group_states");
    StateSequence out(f.site_dim(), f.order());
    out.set_scalar(f.scalar_component());
    const int order = f.order();
    for (int s = 1; s <= order; ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = ManyBodyOperator::zero(y, f.site_dim());
        for (int n = 0; n <= order - s; ++n) {
            const LabelSet extra = LabelSet::range(s + n).minus(y);
            const ClusterArgument arg(y, extra);
            const ManyBodyOperator evolved = cumulant_state(spec, t, arg).apply(f.component(s + n));
            acc += inv_factorial(n) * partial_trace(evolved, extra);
        }
        out.set_component(s, acc);
    }
    return out;
}

StateSequence bbgky_generator(const SystemSpec& spec, const StateSequence& f) {
    require_compatible(spec, f, "bbgky_generator");
    require_symmetric(f, "bbgky_generator");
    StateSequence out(f.site_dim(), f.order());
    const int order = f.order();
    for (int s = 1; s <= order; ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = liouville_state(spec, f.component(s));
        for (int k = 1; k <= s; ++k) {
            for (int n = 1; n <= order - s; ++n) {
                if (spec.potential(k + n) == nullptr) continue;
                const double coeff = inv_factorial(k) * inv_factorial(n);
                const LabelSet extra = LabelSet::range(s + n).minus(y);
                for (const auto& tuple : distinct_tuples(y, k)) {
                    const LabelSet pot_labels = labels_of_tuple(tuple).unite(extra);
                    const ManyBodyOperator moved =
                        interaction_liouville(spec, k + n, pot_labels, f.component(s + n));
                    acc -= coeff * partial_trace(moved, extra);
                }
            }
        }
        out.set_component(s, acc);
    }
    return out;
}

namespace {

Complex grand_canonical_factor(const OperatorSequence& d) {
    Complex c = 0.0;
    for (int n = 0; n <= d.order(); ++n) c += inv_factorial(n) * d.component(n).trace();
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw NormalizationError("grand-canonical factor is not finite");
    if (std::abs(c.imag()) > 1e-9 * std::max(1.0, std::abs(c)) || c.real() <= 0.0)
        throw NormalizationError("grand-canonical factor must be a positive real, got " +
                                 std::to_string(c.real()) + (c.imag() < 0 ? "-" : "+") +
                                 std::to_string(std::abs(c.imag())) + "i");
    return c;
}

}  // namespace

StateSequence marginalize_states(const StateSequence& d) {
    require_symmetric(d, "marginalize_states");
    const Complex c = grand_canonical_factor(d);
    StateSequence out(d.site_dim(), d.order());
    const int order = d.order();
    for (int s = 0; s <= order; ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = s == 0 ? ManyBodyOperator::scalar(0.0, d.site_dim())
                                      : ManyBodyOperator::zero(y, d.site_dim());
        for (int n = 0; n <= order - s; ++n) {
            const LabelSet extra = LabelSet::range(s + n).minus(y);
            acc += inv_factorial(n) * partial_trace(d.component(s + n), extra);
        }
        out.set_component(s, (1.0 / c) * acc);
    }
    return out;
}

Complex mean_value(const OperatorSequence& g, const OperatorSequence& f) {
    if (g.site_dim() != f.site_dim() || g.order() != f.order())
        throw ValidationError("mean_value: shape mismatch");
    Complex sum = 0.0;
    for (int s = 0; s <= g.order(); ++s)
        sum += inv_factorial(s) * (g.component(s) * f.component(s)).trace();
    return sum;
}

Complex grand_canonical_mean(const OperatorSequence& a, const OperatorSequence& d) {
    return mean_value(a, d) / grand_canonical_factor(d);
}

double gamma_norm(const OperatorSequence& g, double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw ValidationError("gamma_norm: gamma must lie in (0,1)");
    double worst = 0.0;
    double weight = 1.0;
    for (int n = 0; n <= g.order(); ++n) {
        worst = std::max(worst, weight * norm(g.component(n), NormKind::Operator));
        weight *= gamma / static_cast<double>(n + 1);
    }
    return worst;
}

}  // namespace dualbbgky
