#include <doctest.h>

#include "dualbbgky/operators.hpp"
#include "dualbbgky/random.hpp"

using namespace dualbbgky;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

const Matrix kSwap = [] {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = s(3, 3) = 1.0;
    s(1, 2) = s(2, 1) = 1.0;
    return s;
}();

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

double dist(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("operator construction guards") {
    CHECK_THROWS_AS(ManyBodyOperator(LabelSet{1}, 2, Matrix::Zero(3, 3)), ValidationError);
    CHECK_THROWS_AS(ManyBodyOperator(LabelSet{1}, 1, Matrix::Zero(1, 1)), ValidationError);
    const auto scalar = ManyBodyOperator::scalar(2.0, 2);
    CHECK(scalar.is_scalar());
    CHECK(scalar.scalar_value() == Complex(2.0, 0.0));
}

TEST_CASE("embed: identity embeds to identity, factor order is label order") {
    const auto id1 = ManyBodyOperator::identity(LabelSet{2}, 2);
    const auto embedded = embed(id1, LabelSet{1, 2});
    CHECK(dist(embedded.matrix(), Matrix::Identity(4, 4)) == 0.0);

    const ManyBodyOperator sigma(LabelSet{2}, 2, pauli_x());
    const auto ix = embed(sigma, LabelSet{1, 2});
    CHECK(dist(ix.matrix(), kron(Matrix::Identity(2, 2), pauli_x())) == 0.0);

    const ManyBodyOperator sigma1(LabelSet{1}, 2, pauli_x());
    const auto xi = embed(sigma1, LabelSet{1, 2});
    CHECK(dist(xi.matrix(), kron(pauli_x(), Matrix::Identity(2, 2))) == 0.0);
}

TEST_CASE("embed on non-contiguous labels matches the swap-conjugated product") {
    Rng rng(7);
    const ManyBodyOperator g(LabelSet{1, 3}, 2, random_hermitian(rng, 4));
    const auto embedded = embed(g, LabelSet{1, 2, 3});
    // (g on factors 1,3) tensor I is ordered (1,3,2); swapping the last
    // two factors reorders to (1,2,3)
    const Matrix perm = kron(Matrix::Identity(2, 2), kSwap);
    const Matrix expected = perm * kron(g.matrix(), Matrix::Identity(2, 2)) * perm.adjoint();
    CHECK(dist(embedded.matrix(), expected) < 1e-14);

    CHECK_THROWS_AS(embed(g, LabelSet{1, 2}), std::domain_error);
}

TEST_CASE("embed of a scalar is a multiple of the identity") {
    const auto two = ManyBodyOperator::scalar(2.0, 2);
    const auto embedded = embed(two, LabelSet{1, 2});
    CHECK(dist(embedded.matrix(), 2.0 * Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("partial trace basics") {
    const auto id2 = ManyBodyOperator::identity(LabelSet{1, 2}, 2);
    const auto traced = partial_trace(id2, LabelSet{2});
    CHECK(traced.labels() == LabelSet{1});
    CHECK(dist(traced.matrix(), 2.0 * Matrix::Identity(2, 2)) == 0.0);

    Rng rng(3);
    const Matrix a = random_hermitian(rng, 2), b = random_hermitian(rng, 2);
    const ManyBodyOperator ab(LabelSet{1, 2}, 2, kron(a, b));
    const auto only_a = partial_trace(ab, LabelSet{2});
    CHECK(dist(only_a.matrix(), a * b.trace()) < 1e-14);

    // trace preservation on a random 3-particle operator
    const ManyBodyOperator big(LabelSet{1, 2, 3}, 2, random_hermitian(rng, 8));
    const auto reduced = partial_trace(big, LabelSet{1, 3});
    CHECK(std::abs(reduced.trace() - big.trace()) < 1e-12);

    CHECK_THROWS_AS(partial_trace(ab, LabelSet{3}), std::domain_error);
}

TEST_CASE("embed then trace out the added labels rescales by d^added") {
    Rng rng(11);
    const ManyBodyOperator g(LabelSet{2}, 2, random_hermitian(rng, 2));
    const auto back = partial_trace(embed(g, LabelSet{1, 2, 3}), LabelSet{1, 3});
    CHECK(dist(back.matrix(), 4.0 * g.matrix()) < 1e-13);
}

TEST_CASE("unitary_of: identity cases and the group law") {
    const ManyBodyOperator h(LabelSet{1}, 2, pauli_x());
    CHECK(dist(unitary_of(h, 0.0).matrix(), Matrix::Identity(2, 2)) < 1e-15);

    const auto zero = ManyBodyOperator::zero(LabelSet{1, 2}, 2);
    CHECK(dist(unitary_of(zero, 1.7).matrix(), Matrix::Identity(4, 4)) < 1e-15);

    Rng rng(5);
    const ManyBodyOperator h2(LabelSet{1, 2}, 2, random_hermitian(rng, 4));
    const auto u1 = unitary_of(h2, 0.4);
    const auto u2 = unitary_of(h2, 0.9);
    const auto u12 = unitary_of(h2, 1.3);
    CHECK(dist((u1 * u2).matrix(), u12.matrix()) < 1e-12);

    // unitarity and the inverse pair U(-t) = U(t)^dagger
    CHECK(dist((u1 * u1.adjoint()).matrix(), Matrix::Identity(4, 4)) < 1e-13);
    CHECK(dist(unitary_of(h2, -0.4).matrix(), u1.adjoint().matrix()) < 1e-13);

    // non-Hermitian input is rejected
    Matrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(unitary_of(ManyBodyOperator(LabelSet{1}, 2, bad), 1.0), ValidationError);

    // hbar scales the phase
    const auto u_hbar = unitary_of(h, 1.0, 2.0);
    CHECK(dist(u_hbar.matrix(), unitary_of(h, 0.5).matrix()) < 1e-14);
}

TEST_CASE("conjugate preserves identity, Hermiticity and operator norm") {
    Rng rng(13);
    const ManyBodyOperator h(LabelSet{1, 2}, 2, random_hermitian(rng, 4));
    const auto u = unitary_of(h, 0.8);
    const ManyBodyOperator g(LabelSet{1, 2}, 2, random_hermitian(rng, 4));

    CHECK(dist(conjugate(ManyBodyOperator::identity(LabelSet{1, 2}, 2), g).matrix(), g.matrix()) == 0.0);
    CHECK(dist(conjugate(u, ManyBodyOperator::identity(LabelSet{1, 2}, 2)).matrix(),
               Matrix::Identity(4, 4)) < 1e-13);

    const auto moved = conjugate(u, g);
    CHECK(hermiticity_residual(moved) < 1e-12);
    CHECK(norm(moved, NormKind::Operator) == doctest::Approx(norm(g, NormKind::Operator)).epsilon(1e-12));

    CHECK_THROWS_AS(conjugate(u, ManyBodyOperator::identity(LabelSet{1}, 2)), std::domain_error);
}

TEST_CASE("conjugation is an algebra homomorphism") {
    Rng rng(17);
    for (int n = 2; n <= 3; ++n) {
        const LabelSet y = LabelSet::range(n);
        const Eigen::Index dim = Eigen::Index(1) << n;
        const auto u = unitary_of(ManyBodyOperator(y, 2, random_hermitian(rng, dim)), 0.6);
        const ManyBodyOperator g(y, 2, random_hermitian(rng, dim));
        const ManyBodyOperator h(y, 2, random_hermitian(rng, dim));
        CHECK(dist(conjugate(u, g * h).matrix(), (conjugate(u, g) * conjugate(u, h)).matrix()) < 1e-12);
    }
}

TEST_CASE("norms from singular values") {
    CHECK(norm(ManyBodyOperator::identity(LabelSet{1}, 2), NormKind::Operator) == doctest::Approx(1.0));
    CHECK(norm(ManyBodyOperator::identity(LabelSet{1, 2}, 2), NormKind::Trace) == doctest::Approx(4.0));

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 3.0;
    diag(1, 1) = -1.0;
    const ManyBodyOperator op(LabelSet{1}, 2, diag);
    CHECK(norm(op, NormKind::Trace) == doctest::Approx(4.0));
    CHECK(norm(op, NormKind::Operator) == doctest::Approx(3.0));
}

TEST_CASE("symmetry residual and symmetrization") {
    CHECK(check_symmetry(ManyBodyOperator::identity(LabelSet{1, 2, 3}, 2)) == 0.0);

    Rng rng(23);
    const ManyBodyOperator raw(LabelSet{1, 2, 3}, 2, random_hermitian(rng, 8));
    const auto sym = symmetrize(raw);
    CHECK(check_symmetry(sym) < 1e-13);

    // a product state with unequal factors is not swap invariant
    const Matrix a = random_hermitian(rng, 2), b = random_hermitian(rng, 2);
    const ManyBodyOperator ab(LabelSet{1, 2}, 2, kron(a, b));
    const ManyBodyOperator ba(LabelSet{1, 2}, 2, kron(b, a));
    const double residual = check_symmetry(ab);
    CHECK(residual > 1e-3);
    CHECK(residual == doctest::Approx((ab.matrix() - ba.matrix()).jacobiSvd().singularValues()(0)));
}

TEST_CASE("partial trace is linear and positive on PSD operators") {
    Rng rng(29);
    for (int trial = 0; trial < 3; ++trial) {
        const auto psd = random_symmetric_psd(rng, 2, LabelSet::range(3));
        const auto reduced = partial_trace(psd, LabelSet{2, 3});
        Eigen::SelfAdjointEigenSolver<Matrix> es(reduced.matrix());
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
}
