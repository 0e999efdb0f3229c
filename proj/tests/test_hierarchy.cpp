#include <doctest.h>

#include "dualbbgky/hierarchy.hpp"
#include "dualbbgky/quadrature.hpp"
#include "dualbbgky/random.hpp"

using namespace dualbbgky;

namespace {

SystemSpec pair_system(int order = 3) {
    Rng rng(301);
    return SystemSpec(random_system_config(rng, 2, order, false));
}

SystemSpec pair_triple_system(int order = 3) {
    Rng rng(303);
    return SystemSpec(random_system_config(rng, 2, order, true));
}

SystemSpec free_system(int order = 3) { return pair_system(order).free_variant(); }

double opdist(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    return norm(a - b, NormKind::Operator);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

// ---- evolution groups -----------------------------------------------------

TEST_CASE("Heisenberg evolution: fixed points and factorization in the free case") {
    const auto spec = pair_system();
    Rng rng(1);
    const auto a0 = random_observable_sequence(rng, spec);

    CHECK(max_component_distance(evolve_heisenberg(spec, 0.0, a0), a0) < 1e-14);

    const auto ident = ObservableSequence::identities(spec);
    CHECK(max_component_distance(evolve_heisenberg(spec, 0.9, ident), ident) < 1e-13);

    // without interactions a product observable evolves factor by factor
    const auto free = free_system(2);
    const Matrix a = random_hermitian(rng, 2), b = random_hermitian(rng, 2);
    ObservableSequence prod = ObservableSequence::zero(free);
    prod.set_component(2, ManyBodyOperator(LabelSet{1, 2}, 2, kron(a, b)));
    const double t = 0.65;
    const auto evolved = evolve_heisenberg(free, t, prod);
    const auto ga = group_apply(free, t, LabelSet{1}, ManyBodyOperator(LabelSet{1}, 2, a));
    const auto gb = group_apply(free, t, LabelSet{2}, ManyBodyOperator(LabelSet{2}, 2, b));
    CHECK((evolved.component(2).matrix() - kron(ga.matrix(), gb.matrix())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("von Neumann evolution preserves trace and the trace pairing") {
    const auto spec = pair_system();
    Rng rng(2);
    const auto d0 = random_state_sequence(rng, spec);
    const auto a = random_observable_sequence(rng, spec);
    const double t = 0.8;

    CHECK(max_component_distance(evolve_vonneumann(spec, 0.0, d0), d0) < 1e-14);

    const auto dt = evolve_vonneumann(spec, t, d0);
    for (int s = 1; s <= spec.truncation_order(); ++s)
        CHECK(std::abs(dt.component(s).trace() - d0.component(s).trace()) < 1e-12);
    CHECK(dt.positivity_floor() > -1e-12);

    // componentwise: Tr[(G(t)A) D] = Tr[A (G(-t) D)]
    const auto at = evolve_heisenberg(spec, t, a);
    for (int s = 1; s <= spec.truncation_order(); ++s) {
        const Complex lhs = (at.component(s) * d0.component(s)).trace();
        const Complex rhs = (a.component(s) * dt.component(s)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-11);
    }
}

// ---- dual cumulants ---------------------------------------------------------

TEST_CASE("first-order dual cumulants are the evolution groups themselves") {
    const auto spec = pair_system();
    Rng rng(3);
    const double t = 0.45;

    const auto a1 = random_symmetric_hermitian(rng, 2, LabelSet{1});
    const auto single = dual_cumulant(spec, t, ClusterArgument(LabelSet{1}, {})).apply(a1);
    CHECK(opdist(single, group_apply(spec, t, LabelSet{1}, a1)) < 1e-13);

    const auto g12 = random_symmetric_hermitian(rng, 2, LabelSet{1, 2});
    const auto fused = dual_cumulant(spec, t, ClusterArgument(LabelSet{1, 2}, {})).apply(g12);
    CHECK(opdist(fused, group_apply(spec, t, LabelSet{1, 2}, g12)) < 1e-13);
}

TEST_CASE("second-order dual cumulant is the group minus the product of groups") {
    const auto spec = pair_system();
    Rng rng(4);
    const double t = 0.45;
    const auto a1 = random_symmetric_hermitian(rng, 2, LabelSet{1});

    const auto image = dual_cumulant(spec, t, ClusterArgument(LabelSet{1}, LabelSet{2})).apply(a1);
    const auto joint = group_apply(spec, t, LabelSet{1, 2}, a1);
    const auto split = embed(group_apply(spec, t, LabelSet{1}, a1), LabelSet{1, 2});
    CHECK(opdist(image, joint - split) < 1e-13);
}

TEST_CASE("state-side cumulants run the groups backwards") {
    const auto spec = pair_system();
    Rng rng(5);
    const double t = 0.45;
    const auto a1 = random_symmetric_hermitian(rng, 2, LabelSet{1});
    const auto g12 = random_symmetric_hermitian(rng, 2, LabelSet{1, 2});

    CHECK(opdist(cumulant_state(spec, t, ClusterArgument(LabelSet{1}, {})).apply(a1),
                 group_apply(spec, -t, LabelSet{1}, a1)) < 1e-13);
    CHECK(opdist(cumulant_state(spec, t, ClusterArgument(LabelSet{1, 2}, {})).apply(g12),
                 group_apply(spec, -t, LabelSet{1, 2}, g12)) < 1e-13);

    const auto free = free_system();
    const auto vanished = cumulant_state(free, t, ClusterArgument(LabelSet{1}, LabelSet{2})).apply(a1);
    CHECK(norm(vanished, NormKind::Operator) < 1e-13);
}

TEST_CASE("dual cumulants of a free system vanish beyond first order") {
    const auto free = free_system(4);
    Rng rng(6);
    const double t = 0.7;
    for (int n = 2; n <= 4; ++n) {
        const LabelSet cluster = LabelSet::range(n - 1);
        const LabelSet singles = LabelSet::range(n).minus(cluster);
        const auto operand = random_symmetric_hermitian(rng, 2, cluster);
        const auto image = dual_cumulant(free, t, ClusterArgument(cluster, singles)).apply(operand);
        CHECK(norm(image, NormKind::Operator) < 1e-12);
    }
}

TEST_CASE("dual cumulants at t = 0 collapse to the identity first-order map") {
    const auto spec = pair_triple_system();
    Rng rng(7);
    const auto operand = random_symmetric_hermitian(rng, 2, LabelSet{1, 2});
    const auto first = dual_cumulant(spec, 0.0, ClusterArgument(LabelSet{1, 2}, {})).apply(operand);
    CHECK(opdist(first, operand) < 1e-14);
    const auto second =
        dual_cumulant(spec, 0.0, ClusterArgument(LabelSet{1, 2}, LabelSet{3})).apply(operand);
    CHECK(norm(second, NormKind::Operator) < 1e-13);
}

// ---- the creation-type map and its exponential ------------------------------

TEST_CASE("a_plus: scalar head, two removals, symmetry preservation") {
    const auto spec = pair_system();
    ObservableSequence g = ObservableSequence::zero(spec);
    g.set_scalar(1.0);
    auto lifted = a_plus(g);
    CHECK(lifted.scalar_component() == Complex(0.0, 0.0));
    CHECK(opdist(lifted.component(1), ManyBodyOperator::identity(LabelSet{1}, 2)) < 1e-15);

    Rng rng(8);
    const auto a = random_symmetric_hermitian(rng, 2, LabelSet{1});
    ObservableSequence g1 = ObservableSequence::zero(spec);
    g1.set_component(1, a);
    const auto two = a_plus(g1).component(2);
    CHECK((two.matrix() - kron(a.matrix(), Matrix::Identity(2, 2)) -
           kron(Matrix::Identity(2, 2), a.matrix()))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

    const auto sym = random_observable_sequence(rng, spec);
    CHECK(a_plus(sym).symmetry_residual() < 1e-12);
}

TEST_CASE("exp_a_plus: signs invert each other and match the power series") {
    const auto spec = pair_system(3);
    Rng rng(9);
    const auto g = random_observable_sequence(rng, spec);

    const auto round_trip = exp_a_plus(exp_a_plus(g, +1), -1);
    CHECK(max_component_distance(round_trip, g) < 1e-12);

    // (e^{a+}) of (1, 0, 0): the double removal leaves the identity
    ObservableSequence head = ObservableSequence::zero(spec);
    head.set_scalar(1.0);
    const auto lifted = exp_a_plus(head, +1);
    CHECK(opdist(lifted.component(2), ManyBodyOperator::identity(LabelSet{1, 2}, 2)) < 1e-14);

    // truncated power series sum_k (a+)^k / k!
    ObservableSequence series = g;
    ObservableSequence power = g;
    for (int k = 1; k <= spec.truncation_order(); ++k) {
        power = a_plus(power);
        ObservableSequence term = power;
        term *= Complex(1.0 / static_cast<double>(factorial(k)), 0.0);
        series += term;
    }
    CHECK(max_component_distance(series, exp_a_plus(g, +1)) < 1e-12);
}

TEST_CASE("marginal observables: telescoping and frozen sign pattern") {
    const auto spec = pair_system(3);
    Rng rng(10);
    const auto a1 = random_symmetric_hermitian(rng, 2, LabelSet{1});

    // additive observables telescope to a one-component sequence
    ObservableSequence additive = ObservableSequence::zero(spec);
    for (int s = 1; s <= 3; ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = ManyBodyOperator::zero(y, 2);
        for (Label j : y) acc += embed(a1.relabeled(LabelSet{j}), y);
        additive.set_component(s, acc);
    }
    const auto marginal = marginal_observables(additive);
    CHECK(marginal.scalar_component() == Complex(0.0, 0.0));
    CHECK(opdist(marginal.component(1), a1) < 1e-14);
    CHECK(norm(marginal.component(2), NormKind::Operator) < 1e-13);
    CHECK(norm(marginal.component(3), NormKind::Operator) < 1e-13);

    // the all-scalar sequence (1, 0, 0, ...) picks up (-1)^s identities,
    // cross-checked against a direct evaluation of the defining sum
    ObservableSequence head = ObservableSequence::zero(spec);
    head.set_scalar(1.0);
    const auto flipped = marginal_observables(head);
    for (int s = 1; s <= 3; ++s) {
        const double sign = s % 2 == 0 ? 1.0 : -1.0;
        ManyBodyOperator direct = ManyBodyOperator::zero(LabelSet::range(s), 2);
        for (int n = 0; n <= s; ++n) {
            const double coeff = (n % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(factorial(n));
            for (const auto& tuple : distinct_tuples(LabelSet::range(s), n)) {
                LabelSet removed(std::vector<Label>(tuple.begin(), tuple.end()));
                direct += coeff * embed(head.component(s - n).relabeled(LabelSet::range(s).minus(removed)),
                                        LabelSet::range(s));
            }
        }
        CHECK(opdist(flipped.component(s), direct) < 1e-13);
        CHECK(opdist(flipped.component(s),
                     Complex(sign, 0.0) * ManyBodyOperator::identity(LabelSet::range(s), 2)) < 1e-13);
    }

    // number observable: A_n = n I marginalizes to (0, I, 0, ...)
    ObservableSequence number_full = ObservableSequence::zero(spec);
    for (int s = 1; s <= 3; ++s)
        number_full.set_component(
            s, Complex(static_cast<double>(s), 0.0) *
                   ManyBodyOperator::identity(LabelSet::range(s), 2));
    const auto number_marginal = marginal_observables(number_full);
    CHECK(opdist(number_marginal.component(1), ManyBodyOperator::identity(LabelSet{1}, 2)) < 1e-14);
    CHECK(norm(number_marginal.component(2), NormKind::Operator) < 1e-13);
    CHECK(norm(number_marginal.component(3), NormKind::Operator) < 1e-13);
}

// ---- solution representations ----------------------------------------------

TEST_CASE("cumulant-expansion solution: initial condition and low orders") {
    const auto spec = pair_system(3);
    Rng rng(11);
    const auto g0 = random_observable_sequence(rng, spec);
    const double t = 0.55;

    CHECK(max_component_distance(solve_dual_cumulant(spec, 0.0, g0), g0) < 1e-13);

    const auto solved = solve_dual_cumulant(spec, t, g0);

    // s = 1: a single first-order cumulant
    CHECK(opdist(solved.component(1), group_apply(spec, t, LabelSet{1}, g0.component(1))) < 1e-13);

    // s = 2: fused-pair term plus the mixed second-order cumulants
    ManyBodyOperator manual =
        dual_cumulant(spec, t, ClusterArgument(LabelSet{1, 2}, {})).apply(g0.component(2));
    for (Label j : LabelSet{1, 2}) {
        const LabelSet cluster{j};
        const LabelSet rest = LabelSet{1, 2}.minus(cluster);
        manual += dual_cumulant(spec, t, ClusterArgument(cluster, rest))
                      .apply(g0.component(1).relabeled(cluster));
    }
    CHECK(opdist(solved.component(2), manual) < 1e-13);
}

TEST_CASE("three solution representations coincide, including with a 3-body potential") {
    Rng rng(12);
    for (const bool with_triple : {false, true}) {
        const auto spec = with_triple ? pair_triple_system(3) : pair_system(3);
        const auto g0 = random_observable_sequence(rng, spec);
        for (const double t : {0.35, 1.1}) {
            const auto primary = solve_dual_cumulant(spec, t, g0);
            CHECK(max_component_distance(primary, solve_dual_similarity(spec, t, g0)) < 1e-10);
            CHECK(max_component_distance(primary, solve_dual_pair_cumulant(spec, t, g0)) < 1e-10);
        }
    }
}

TEST_CASE("similarity form commutator identity at first order") {
    // [G(t), a+] g at component s equals the sum over j of the mixed
    // second-order cumulant applied to g_{s-1} on Y \ {j}
    const auto spec = pair_system(3);
    Rng rng(13);
    const auto g = random_observable_sequence(rng, spec);
    const double t = 0.6;

    const auto commuted = [&] {
        auto forward = evolve_heisenberg(spec, t, a_plus(g));
        auto backward = a_plus(evolve_heisenberg(spec, t, g));
        forward -= backward;
        return forward;
    }();

    for (int s = 2; s <= 3; ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator manual = ManyBodyOperator::zero(y, 2);
        for (Label j : y) {
            const LabelSet rest = y.minus(LabelSet{j});
            manual += dual_cumulant(spec, t, ClusterArgument(rest, LabelSet{j}))
                          .apply(g.component(s - 1).relabeled(rest));
        }
        CHECK(opdist(commuted.component(s), manual) < 1e-12);
    }
}

TEST_CASE("pair-cumulant representation reduces to the first-order term for free systems") {
    const auto free = free_system(3);
    Rng rng(14);
    const auto g0 = random_observable_sequence(rng, free);
    const double t = 0.75;
    const auto solved = solve_dual_pair_cumulant(free, t, g0);
    for (int s = 1; s <= 3; ++s)
        CHECK(opdist(solved.component(s), group_apply(free, t, LabelSet::range(s), g0.component(s))) <
              1e-12);
}

TEST_CASE("group law of the solution expansion") {
    const auto spec = pair_system(3);
    Rng rng(15);
    const auto g0 = random_observable_sequence(rng, spec);
    const auto joint = solve_dual_cumulant(spec, 0.8, g0);
    const auto stepped = solve_dual_cumulant(spec, 0.3, solve_dual_cumulant(spec, 0.5, g0));
    CHECK(max_component_distance(joint, stepped) < 1e-9);
}

// ---- generators --------------------------------------------------------------

TEST_CASE("dual generator: identity kernel and the two-body hierarchy term") {
    const auto spec = pair_system(3);
    const auto ident = ObservableSequence::identities(spec);
    CHECK(max_component_distance(dual_generator(spec, ident), ObservableSequence::zero(spec)) < 1e-13);

    Rng rng(16);
    const auto g = random_observable_sequence(rng, spec);
    const auto generated = dual_generator(spec, g);

    // s = 2 with a pair potential only: N_2 g_2 + sum_{j1 != j2} pair
    // interaction applied to g_1 embedded on Y \ {j1}
    const LabelSet y = LabelSet::range(2);
    ManyBodyOperator manual = liouville_observable(spec, g.component(2));
    for (const auto& tuple : distinct_tuples(y, 2)) {
        const LabelSet removed{tuple[0]};
        const auto lower = embed(g.component(1).relabeled(y.minus(removed)), y);
        manual += interaction_liouville(spec, 2, y, lower);
    }
    CHECK(opdist(generated.component(2), manual) < 1e-13);
}

TEST_CASE("dual generator equals its similarity form") {
    Rng rng(17);
    for (const bool with_triple : {false, true}) {
        const auto spec = with_triple ? pair_triple_system(3) : pair_system(3);
        const auto g = random_observable_sequence(rng, spec);
        CHECK(max_component_distance(dual_generator(spec, g), dual_generator_similarity(spec, g)) <
              1e-10);
    }
}

TEST_CASE("central difference of the solution matches the dual generator") {
    const auto spec = pair_triple_system(3);
    Rng rng(18);
    const auto g0 = random_observable_sequence(rng, spec);
    const auto gen = dual_generator(spec, g0);

    double previous_error = 0.0;
    for (const double eps : {1e-4, 5e-5}) {
        auto diff = solve_dual_cumulant(spec, eps, g0);
        diff -= solve_dual_cumulant(spec, -eps, g0);
        diff *= Complex(1.0 / (2.0 * eps), 0.0);
        const double err = max_component_distance(diff, gen);
        CHECK(err < 1e-6);
        if (previous_error > 0.0) {
            // second-order convergence: quartering the step cuts the
            // error by ~4
            CHECK(previous_error / err == doctest::Approx(4.0).epsilon(0.2));
        }
        previous_error = err;
    }
}

// ---- the state side -----------------------------------------------------------

TEST_CASE("state-side hierarchy group: identity at t = 0 and the top component") {
    const auto spec = pair_system(3);
    Rng rng(19);
    const auto f = random_state_sequence(rng, spec);

    CHECK(max_component_distance(bbgky_group_states(spec, 0.0, f), f) < 1e-12);

    const double t = 0.5;
    const auto moved = bbgky_group_states(spec, t, f);
    CHECK(opdist(moved.component(3), group_apply(spec, -t, LabelSet::range(3), f.component(3))) < 1e-12);
}

TEST_CASE("state-side group is the trace-pairing adjoint of the observable-side group") {
    const auto spec = pair_triple_system(3);
    Rng rng(20);
    const auto g = random_observable_sequence(rng, spec);
    const auto f = random_state_sequence(rng, spec);
    for (const double t : {0.3, 0.9}) {
        const Complex lhs = mean_value(f, solve_dual_cumulant(spec, t, g));
        const Complex rhs = mean_value(bbgky_group_states(spec, t, f), g);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("state-side generator: identity kernel, duality, finite difference") {
    const auto spec = pair_system(3);
    const auto ident = StateSequence::identities(spec);
    CHECK(max_component_distance(bbgky_generator(spec, ident), StateSequence::zero(spec)) < 1e-13);

    Rng rng(21);
    const auto g = random_observable_sequence(rng, spec);
    const auto f = random_state_sequence(rng, spec);
    CHECK(std::abs(mean_value(dual_generator(spec, g), f) - mean_value(g, bbgky_generator(spec, f))) <
          1e-10);

    const auto gen = bbgky_generator(spec, f);
    const double eps = 1e-5;
    auto diff = bbgky_group_states(spec, eps, f);
    diff -= bbgky_group_states(spec, -eps, f);
    diff *= Complex(1.0 / (2.0 * eps), 0.0);
    CHECK(max_component_distance(diff, gen) < 1e-7);
}

// ---- marginal states and mean values -------------------------------------------

TEST_CASE("marginalize_states: vacuum normalization and duality of means") {
    const auto spec = pair_system(3);

    StateSequence vacuum = StateSequence::zero(spec);
    vacuum.set_scalar(1.0);
    const auto f_vac = marginalize_states(vacuum);
    CHECK(f_vac.scalar_component() == Complex(1.0, 0.0));
    for (int s = 1; s <= 3; ++s) CHECK(norm(f_vac.component(s), NormKind::Operator) < 1e-14);

    Rng rng(22);
    const auto a = random_observable_sequence(rng, spec);
    const auto d = random_state_sequence(rng, spec);
    const auto g = marginal_observables(a);
    const auto f = marginalize_states(d);

    // the mean value is invariant under marginalization
    CHECK(std::abs(grand_canonical_mean(a, d) - mean_value(g, f)) < 1e-12);

    // and stays invariant when both pictures evolve
    for (const double t : {0.2, 0.7, 1.3}) {
        const Complex full = grand_canonical_mean(evolve_heisenberg(spec, t, a), d);
        const Complex marginal = mean_value(solve_dual_cumulant(spec, t, g), f);
        CHECK(std::abs(full - marginal) < 1e-10);
    }

    // zero normalization is rejected
    StateSequence hollow = StateSequence::zero(spec);
    CHECK_THROWS_AS(marginalize_states(hollow), NormalizationError);
}

TEST_CASE("creation-map pairing identity at order two") {
    // <a+ A | D> = sum_s (1/s!) Tr[A_s Tr_{s+1} D_{s+1}]
    const auto spec = pair_system(2);
    Rng rng(23);
    const auto a = random_observable_sequence(rng, spec);
    const auto d = random_state_sequence(rng, spec);
    const Complex lhs = mean_value(a_plus(a), d);
    Complex rhs = 0.0;
    for (int s = 0; s <= 1; ++s) {
        const auto contracted =
            partial_trace(d.component(s + 1), LabelSet::range(s + 1).minus(LabelSet::range(s)));
        rhs += (1.0 / static_cast<double>(factorial(s))) * (a.component(s) * contracted).trace();
    }
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("number observable: invariance and mean value") {
    const auto spec = pair_triple_system(3);
    ObservableSequence number = ObservableSequence::zero(spec);
    number.set_component(1, ManyBodyOperator::identity(LabelSet{1}, 2));

    Rng rng(24);
    const auto f = marginalize_states(random_state_sequence(rng, spec));
    for (const double t : {0.4, 1.2}) {
        const auto moved = solve_dual_cumulant(spec, t, number);
        CHECK(max_component_distance(moved, number) < 1e-12);
        CHECK(std::abs(mean_value(moved, f) - f.component(1).trace()) < 1e-12);
    }
}

TEST_CASE("scalar-head mean value") {
    const auto spec = pair_system(2);
    OperatorSequence g = OperatorSequence::zero(spec);
    g.set_scalar(1.0);
    OperatorSequence f = OperatorSequence::zero(spec);
    f.set_scalar(1.0);
    CHECK(mean_value(g, f) == Complex(1.0, 0.0));
}

// ---- norms ---------------------------------------------------------------------

TEST_CASE("gamma-weighted norm") {
    const auto spec = pair_system(2);
    OperatorSequence head = OperatorSequence::zero(spec);
    head.set_scalar(1.0);
    CHECK(gamma_norm(head, 0.05) == doctest::Approx(1.0));
    CHECK(gamma_norm(head, 0.9) == doctest::Approx(1.0));

    const auto ident = OperatorSequence::identities(spec);
    CHECK(gamma_norm(ident, 0.3) == doctest::Approx(1.0));  // max(1, 0.3, 0.045)

    Rng rng(25);
    const auto g = random_observable_sequence(rng, spec);
    CHECK(gamma_norm(g, 0.3) >= gamma_norm(g, 0.15));
    CHECK_THROWS_AS(gamma_norm(g, 1.5), ValidationError);
}

// ---- the integral identity -------------------------------------------------------

TEST_CASE("Duhamel integral reproduces the second-order dual cumulant") {
    const auto spec = pair_system(2);
    Rng rng(26);
    const auto operand = random_symmetric_hermitian(rng, 2, LabelSet{1, 2});
    const double t = 0.25;

    auto integrand = [&](double t1) {
        ManyBodyOperator inner = group_apply(spec, t1, LabelSet{1}, operand);
        inner = group_apply(spec, t1, LabelSet{2}, inner);
        inner = interaction_liouville(spec, 2, LabelSet{1, 2}, inner);
        return group_apply(spec, t - t1, LabelSet{1, 2}, inner);
    };
    const QuadratureRule rule = gauss_legendre(32, 0.0, t);
    ManyBodyOperator integral = ManyBodyOperator::zero(LabelSet{1, 2}, 2);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        integral += Complex(rule.weights[i], 0.0) * integrand(rule.nodes[i]);

    const auto second_order =
        CumulantMap(spec, t, {Element::single(1), Element::single(2)}).apply(operand);
    CHECK(opdist(integral, second_order) < 1e-10);
}

// ---- cluster expansion and degenerate truncation ----------------------------------

TEST_CASE("cluster expansion over partitions reassembles the full group") {
    const auto spec = pair_triple_system(3);
    Rng rng(27);
    const double t = 0.6;
    for (int n = 1; n <= 3; ++n) {
        const LabelSet y = LabelSet::range(n);
        const auto operand = random_symmetric_hermitian(rng, 2, y);
        ManyBodyOperator sum = ManyBodyOperator::zero(y, 2);
        const auto elems = singles_of(y);
        for_each_partition(std::span<const Element>(elems), [&](const Partition& p) {
            ManyBodyOperator term = operand;
            for (const auto& block : p.blocks) {
                LabelSet block_labels;
                for (const Element& e : block) block_labels = block_labels.unite(e.labels());
                term = CumulantMap(spec, t, singles_of(block_labels)).apply(term);
            }
            sum += term;
        });
        CHECK(opdist(sum, group_apply(spec, t, y, operand)) < 1e-10);
    }
}

TEST_CASE("order-one truncation is plain Heisenberg evolution") {
    const auto spec = pair_system(3).order_one_variant();
    Rng rng(28);
    const auto g0 = random_observable_sequence(rng, spec);
    for (const double t : {0.3, 1.0})
        CHECK(max_component_distance(solve_dual_cumulant(spec, t, g0),
                                     evolve_heisenberg(spec, t, g0)) < 1e-12);
}

TEST_CASE("hbar rescales time") {
    Rng rng(30);
    SystemSpec::Config config = random_system_config(rng, 2, 2, false);
    SystemSpec::Config slowed = config;
    slowed.hbar = 2.0;
    const SystemSpec spec(config);
    const SystemSpec slow(slowed);
    Rng seq_rng(31);
    const auto g0 = random_observable_sequence(seq_rng, spec);
    CHECK(max_component_distance(solve_dual_cumulant(spec, 0.4, g0),
                                 solve_dual_cumulant(slow, 0.8, g0)) < 1e-12);
}

TEST_CASE("three-level sites work the same way") {
    Rng rng(32);
    const SystemSpec spec(random_system_config(rng, 3, 2, false));
    const auto g0 = random_observable_sequence(rng, spec);
    const double t = 0.5;
    const auto primary = solve_dual_cumulant(spec, t, g0);
    CHECK(max_component_distance(primary, solve_dual_similarity(spec, t, g0)) < 1e-11);
    const auto f = random_state_sequence(rng, spec);
    CHECK(std::abs(mean_value(f, primary) -
                   mean_value(bbgky_group_states(spec, t, f), g0)) < 1e-10);
}

TEST_CASE("mean value of Hermitian pairs is real") {
    const auto spec = pair_system(3);
    Rng rng(33);
    const auto g = random_observable_sequence(rng, spec);
    const auto f = random_state_sequence(rng, spec);
    CHECK(std::abs(mean_value(g, f).imag()) < 1e-11);
    CHECK(std::abs(grand_canonical_mean(g, f).imag()) < 1e-11);
}

TEST_CASE("non-symmetric sequences are rejected by the coupling maps") {
    const auto spec = pair_system(2);
    Rng rng(34);
    ObservableSequence crooked = ObservableSequence::zero(spec);
    const Matrix a = random_hermitian(rng, 2), b = random_hermitian(rng, 2);
    crooked.set_component(2, ManyBodyOperator(LabelSet{1, 2}, 2, kron(a, b)));
    CHECK_THROWS_AS(solve_dual_cumulant(spec, 0.1, crooked), ValidationError);
    CHECK_THROWS_AS(a_plus(crooked), ValidationError);
}

TEST_CASE("sequence shape mismatches are rejected") {
    const auto spec = pair_system(3);
    const auto other = pair_system(2);
    Rng rng(29);
    const auto g = random_observable_sequence(rng, other);
    CHECK_THROWS_AS(solve_dual_cumulant(spec, 0.1, g), ValidationError);
    CHECK_THROWS_AS(dual_cumulant(spec, 0.1,
                                  ClusterArgument(LabelSet::range(3), LabelSet{4})),
                    CapacityError);
}
