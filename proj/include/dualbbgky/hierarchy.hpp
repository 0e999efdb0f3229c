#pragma once

#include <vector>

#include "dualbbgky/system.hpp"

namespace dualbbgky {

/// Truncated sequence (g_0, g_1, ..., g_N): component 0 is a scalar
/// (held as a 0-label operator) and component s acts on labels {1..s}.
/// The same shape carries marginal observables G, full observables A,
/// and the trace-pairing side D / F; only the interpretation differs.
class OperatorSequence {
public:
    OperatorSequence(int site_dim, int truncation_order);

    static OperatorSequence zero(const SystemSpec& spec);
    /// (1, I, I, ..., I): the unit observable.
    static OperatorSequence identities(const SystemSpec& spec);

    int site_dim() const { return d_; }
    int order() const { return order_; }

    const ManyBodyOperator& component(int s) const;
    void set_component(int s, ManyBodyOperator op);

    Complex scalar_component() const { return components_[0].scalar_value(); }
    void set_scalar(Complex value);

    /// Worst relabeling-invariance residual over all components.
    double symmetry_residual() const;
    /// Worst ||g_s - g_s^dagger|| over all components.
    double hermiticity_residual() const;
    /// Smallest eigenvalue over all components; >= -tol for a state.
    double positivity_floor() const;

    OperatorSequence& operator+=(const OperatorSequence& other);
    OperatorSequence& operator-=(const OperatorSequence& other);
    OperatorSequence& operator*=(Complex factor);
    friend OperatorSequence operator+(OperatorSequence a, const OperatorSequence& b) { return a += b; }
    friend OperatorSequence operator-(OperatorSequence a, const OperatorSequence& b) { return a -= b; }
    friend OperatorSequence operator*(Complex c, OperatorSequence a) { return a *= c; }

private:
    int d_;
    int order_;
    std::vector<ManyBodyOperator> components_;
};

using ObservableSequence = OperatorSequence;
using StateSequence = OperatorSequence;

/// Max over components of the operator-norm distance.
double max_component_distance(const OperatorSequence& a, const OperatorSequence& b);

/// The index structure of a mixed cumulant argument: one particle set
/// fused into a single element plus a disjoint set of singles.
struct ClusterArgument {
    LabelSet cluster;  // nonempty
    LabelSet singles;  // disjoint from cluster

    ClusterArgument(LabelSet cluster_labels, LabelSet single_labels);
    std::vector<Element> elements() const;
};

/// Signed partition sum of evolution-group products over a fixed list
/// of elements,
///   sum_P (-1)^{|P|-1} (|P|-1)! prod_{blocks X_i} G_{X_i}(t),
/// where a block's group evolves every particle its elements carry.
/// Applied as a linear map: the operand is embedded into the union of
/// the element labels (identity on whatever it does not touch) and each
/// block contributes conjugation by its own propagator. Blocks live on
/// disjoint labels, so the factor order is immaterial; debug builds
/// assert that instead of assuming it.
class CumulantMap {
public:
    CumulantMap(const SystemSpec& spec, double t, std::vector<Element> elements);

    ManyBodyOperator apply(const ManyBodyOperator& operand) const;
    ManyBodyOperator operator()(const ManyBodyOperator& operand) const { return apply(operand); }

    const LabelSet& support() const { return support_; }
    int element_count() const { return static_cast<int>(elements_.size()); }

private:
    const SystemSpec* spec_;
    double t_;
    std::vector<Element> elements_;
    LabelSet support_;
};

/// Dual cumulant of the forward (Heisenberg) groups over the argument's
/// cluster-plus-singles element set. First order is the group itself;
/// at t = 0 the map collapses to the identity for one element and to
/// zero for two or more.
CumulantMap dual_cumulant(const SystemSpec& spec, double t, const ClusterArgument& arg);

/// Same partition formula built on the backward groups G(-t); the
/// state-side counterpart used by the adjoint hierarchy group.
CumulantMap cumulant_state(const SystemSpec& spec, double t, const ClusterArgument& arg);

/// Conjugate the operand by the propagator of the given label set:
/// G_L(t) g = U_L(t) g U_L(t)^dagger, embedded as needed.
ManyBodyOperator group_apply(const SystemSpec& spec, double t, const LabelSet& support,
                             const ManyBodyOperator& operand);

// -- sequence-level evolution -------------------------------------------

/// Component-wise Heisenberg evolution A_n(t) = U_n(t) A_n U_n(t)^-1.
ObservableSequence evolve_heisenberg(const SystemSpec& spec, double t, const ObservableSequence& a0);

/// Component-wise von Neumann evolution with U(-t); preserves trace,
/// positivity and self-adjointness.
StateSequence evolve_vonneumann(const SystemSpec& spec, double t, const StateSequence& d0);

/// Creation-type map: (a+ g)_s = sum_j g_{s-1} placed on Y \ {j}.
ObservableSequence a_plus(const ObservableSequence& g);

/// (e^{+-a+} g)_s = sum_n (+-1)^n/n! sum over distinct index tuples of
/// g_{s-n} on the complementary labels; a finite sum per component, and
/// exp_a_plus(.,+1) and exp_a_plus(.,-1) invert each other exactly.
ObservableSequence exp_a_plus(const ObservableSequence& g, int sign);

/// Marginal observables G = e^{-a+} A.
ObservableSequence marginal_observables(const ObservableSequence& a);

// -- the dual hierarchy: solution representations and generators -------

/// Primary solution expansion: G_s(t) is a sum over cluster/singles
/// splittings of Y with the matching-order dual cumulant applied to the
/// initial component on the cluster labels.
ObservableSequence solve_dual_cumulant(const SystemSpec& spec, double t, const ObservableSequence& g0);

/// Equivalent closed form e^{-a+} G(t) e^{+a+} g0.
ObservableSequence solve_dual_similarity(const SystemSpec& spec, double t, const ObservableSequence& g0);

/// Equivalent representation using first- and second-order cumulants
/// only, with signed sums over nonempty subsets of the singles.
ObservableSequence solve_dual_pair_cumulant(const SystemSpec& spec, double t,
                                            const ObservableSequence& g0);

/// Hierarchy generator: the component Liouvillian plus interaction
/// couplings of g_s to every lower component.
ObservableSequence dual_generator(const SystemSpec& spec, const ObservableSequence& g);

/// Equivalent form e^{-a+} N e^{+a+} of the generator.
ObservableSequence dual_generator_similarity(const SystemSpec& spec, const ObservableSequence& g);

/// Component-wise observable Liouvillian of a sequence.
ObservableSequence liouville_sequence(const SystemSpec& spec, const ObservableSequence& g);

/// Adjoint (state-side) hierarchy group: (U(t) f)_s couples f_{s+n}
/// downward through backward cumulants with the kept labels fused as
/// one cluster, partial-traced over the extra particles. Finite at
/// truncation; the scalar component is left untouched.
StateSequence bbgky_group_states(const SystemSpec& spec, double t, const StateSequence& f);

/// Generator of the state-side hierarchy: the negative Liouvillian
/// plus partial-traced interaction couplings to higher components.
StateSequence bbgky_generator(const SystemSpec& spec, const StateSequence& f);

/// Marginal states F_s = c^-1 sum_n (1/n!) Tr_{s+1..s+n} D_{s+n}, with
/// the grand-canonical factor c = sum_n (1/n!) Tr D_n. Constructed so
/// the mean value of marginal observables against F reproduces the
/// mean of the full observables against D at truncation.
StateSequence marginalize_states(const StateSequence& d);

/// <G|F> = sum_s (1/s!) Tr G_s F_s, truncated at N.
Complex mean_value(const OperatorSequence& g, const OperatorSequence& f);

/// Normalized full-sequence mean <A|D> with the grand-canonical factor.
Complex grand_canonical_mean(const OperatorSequence& a, const OperatorSequence& d);

/// max_n gamma^n/n! ||g_n||; the gamma-weighted sup norm, 0 < gamma < 1.
double gamma_norm(const OperatorSequence& g, double gamma);

}  // namespace dualbbgky
