#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dualbbgky/combinatorics.hpp"
#include "dualbbgky/errors.hpp"

namespace dualbbgky {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class NormKind {
    Operator,  // largest singular value
    Trace,     // sum of singular values
};

/// Dense operator on the tensor space of an explicit particle set.
///
/// Factor order is always ascending label order and indices are packed
/// row-major with the first (smallest) label most significant:
///   index = sum_k digit_k * d^(m-1-k).
/// Every operator carries its label set, so embeddings and partial
/// traces never have to guess which factor is which. An operator with
/// no labels is a scalar (1x1 matrix).
class ManyBodyOperator {
public:
    ManyBodyOperator(LabelSet labels, int site_dim, Matrix matrix);

    static ManyBodyOperator scalar(Complex value, int site_dim);
    static ManyBodyOperator identity(const LabelSet& labels, int site_dim);
    static ManyBodyOperator zero(const LabelSet& labels, int site_dim);

    const LabelSet& labels() const { return labels_; }
    int site_dim() const { return site_dim_; }
    const Matrix& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    int particle_count() const { return static_cast<int>(labels_.size()); }

    bool is_scalar() const { return labels_.empty(); }
    Complex scalar_value() const;

    /// Same matrix reinterpreted on a new label set of equal size.
    ManyBodyOperator relabeled(const LabelSet& new_labels) const;

    ManyBodyOperator adjoint() const;
    Complex trace() const { return matrix_.trace(); }

    ManyBodyOperator& operator+=(const ManyBodyOperator& other);
    ManyBodyOperator& operator-=(const ManyBodyOperator& other);
    ManyBodyOperator& operator*=(Complex factor);

    friend ManyBodyOperator operator+(ManyBodyOperator a, const ManyBodyOperator& b) { return a += b; }
    friend ManyBodyOperator operator-(ManyBodyOperator a, const ManyBodyOperator& b) { return a -= b; }
    friend ManyBodyOperator operator*(Complex c, ManyBodyOperator a) { return a *= c; }
    friend ManyBodyOperator operator*(ManyBodyOperator a, Complex c) { return a *= c; }
    /// Operator product; labels must match.
    friend ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b);

private:
    LabelSet labels_;
    int site_dim_;
    Matrix matrix_;
};

/// Tensor-extend op by identity onto target \ op.labels and order the
/// factors by the target's labels. Embedding the identity is the identity.
ManyBodyOperator embed(const ManyBodyOperator& op, const LabelSet& target);

/// Trace out the given labels; the result acts on op.labels \ traced.
ManyBodyOperator partial_trace(const ManyBodyOperator& op, const LabelSet& traced);

/// exp((i/hbar) t H) for Hermitian H, via eigendecomposition so the
/// result is unitary to roundoff. Rejects inputs whose Hermiticity
/// residual exceeds 1e-10 relative to the operator norm.
ManyBodyOperator unitary_of(const ManyBodyOperator& hermitian, double t, double hbar = 1.0);

/// U g U^dagger on a shared label set.
ManyBodyOperator conjugate(const ManyBodyOperator& u, const ManyBodyOperator& g);

double norm(const ManyBodyOperator& op, NormKind kind);

/// ||H - H^dagger|| in operator norm.
double hermiticity_residual(const ManyBodyOperator& op);

/// Reorder tensor factors: digit k of the result is digit perm[k] of
/// the input, applied to rows and columns alike.
ManyBodyOperator permute_factors(const ManyBodyOperator& op, const std::vector<int>& perm);

/// Max over all factor permutations of ||P op P^dagger - op||; zero
/// exactly when the operator is invariant under particle relabeling.
double check_symmetry(const ManyBodyOperator& op);

/// Average over all factor permutations; projects onto the
/// relabeling-invariant subspace.
ManyBodyOperator symmetrize(const ManyBodyOperator& op);

ManyBodyOperator commutator(const ManyBodyOperator& a, const ManyBodyOperator& b);

}  // namespace dualbbgky
