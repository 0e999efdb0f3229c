#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "dualbbgky/operators.hpp"

namespace dualbbgky {

/// A k-body coupling given on abstract slots 1..k. Hermitian and
/// invariant under slot permutations; both are enforced on construction.
struct InteractionPotential {
    int body_order = 0;
    ManyBodyOperator matrix;  // on labels {1..k}
};

/// Immutable description of the truncated many-particle system: the
/// single-particle dimension d, the truncation order N, a one-body
/// Hermitian term, and k-body potentials with distinct orders k <= N.
/// Every n-particle Hamiltonian the engine touches derives from it.
class SystemSpec {
public:
    struct Config {
        int site_dim = 2;
        int truncation_order = 1;
        Matrix one_body;                               // d x d Hermitian
        std::vector<std::pair<int, Matrix>> potentials;  // (k, d^k x d^k)
        double hbar = 1.0;
        bool symmetrize_potentials = false;
    };

    explicit SystemSpec(Config config);

    int site_dim() const { return d_; }
    int truncation_order() const { return order_; }
    double hbar() const { return hbar_; }
    const ManyBodyOperator& one_body() const { return one_body_; }
    const std::vector<InteractionPotential>& potentials() const { return potentials_; }

    /// The k-body potential, or nullptr when the order is not configured.
    const InteractionPotential* potential(int k) const;

    /// H on an arbitrary label set: one-body terms on every label plus
    /// every configured potential on every k-subset. H on the empty set
    /// is the scalar 0. Results are memoized per label set.
    ManyBodyOperator hamiltonian(const LabelSet& labels) const;
    /// H_n on the canonical labels {1..n}, n <= N.
    ManyBodyOperator hamiltonian(int n) const;

    /// Copy with all potentials removed (the non-interacting system).
    SystemSpec free_variant() const;
    /// Copy truncated at N = 1 (potentials drop out; no k <= 1 exists).
    SystemSpec order_one_variant() const;

    static constexpr Eigen::Index kMaxTotalDimension = 4096;
    static constexpr double kHermiticityTol = 1e-10;

private:
    int d_;
    int order_;
    double hbar_;
    ManyBodyOperator one_body_;
    std::vector<InteractionPotential> potentials_;

    struct Cache {
        std::mutex mutex;
        std::map<LabelSet, Matrix> hamiltonians;
    };
    std::shared_ptr<Cache> cache_;
};

/// Observable-side Liouvillian: -(i/hbar)(g H - H g) with H built on
/// the operator's own labels. Maps Hermitian to Hermitian.
ManyBodyOperator liouville_observable(const SystemSpec& spec, const ManyBodyOperator& g);

/// State-side Liouvillian: -(i/hbar)(H f - f H); the negative of the
/// observable-side one.
ManyBodyOperator liouville_state(const SystemSpec& spec, const ManyBodyOperator& f);

/// Interaction part only: -(i/hbar)(g Phi - Phi g) with the k-body
/// potential placed on the given target labels inside g's space.
/// Throws AbsentPotentialError when no k-body potential is configured.
ManyBodyOperator interaction_liouville(const SystemSpec& spec, int k, const LabelSet& target,
                                       const ManyBodyOperator& g);

}  // namespace dualbbgky
