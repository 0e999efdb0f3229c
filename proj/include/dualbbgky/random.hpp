#pragma once

#include <cstdint>
#include <random>

#include "dualbbgky/hierarchy.hpp"

namespace dualbbgky {

/// Seeded generator with explicit transforms so a fixed seed yields the
/// same stream on every run of the same build (std::mt19937_64 output is
/// standardized; the distribution code lives here, not in the library).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    double normal();
    Complex complex_normal() { return {normal() / std::numbers::sqrt2, normal() / std::numbers::sqrt2}; }
    /// A derived stream, for giving sub-tasks independent seeds.
    Rng fork() { return Rng(gen_()); }

private:
    std::mt19937_64 gen_;
};

/// (A + A^dagger)/2 from i.i.d. complex Gaussians, scaled to unit
/// operator norm.
Matrix random_hermitian(Rng& rng, Eigen::Index dim);

/// Hermitian, relabeling-invariant, unit operator norm.
ManyBodyOperator random_symmetric_hermitian(Rng& rng, int site_dim, const LabelSet& labels);

/// Positive semidefinite, Hermitian, relabeling-invariant, trace scaled
/// to the space dimension (identity-like normalization).
ManyBodyOperator random_symmetric_psd(Rng& rng, int site_dim, const LabelSet& labels);

/// Sequence of random symmetric Hermitian components with the given
/// scalar head.
ObservableSequence random_observable_sequence(Rng& rng, const SystemSpec& spec, Complex scalar = 1.0);

/// Sequence of random symmetric PSD components with scalar head 1; a
/// valid (unnormalized) state at every order.
StateSequence random_state_sequence(Rng& rng, const SystemSpec& spec);

/// A full random system: random Hermitian one-body term, random
/// symmetric pair potential, optionally a 3-body one, all scaled by
/// `coupling`.
SystemSpec::Config random_system_config(Rng& rng, int site_dim, int truncation_order,
                                        bool with_three_body, double coupling = 1.0);

}  // namespace dualbbgky
