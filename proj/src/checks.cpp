#include "dualbbgky/checks.hpp"

#include <cmath>
#include <numbers>

#include "dualbbgky/quadrature.hpp"
#include "dualbbgky/random.hpp"

namespace dualbbgky {

namespace {

using nlohmann::json;

CheckRecord record(json params, double residual, double tolerance) {
    CheckRecord r;
    r.params = std::move(params);
    r.residual = residual;
    r.tolerance = tolerance;
    return r;
}

double opdist(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    return norm(a - b, NormKind::Operator);
}

double seq_opnorm(const OperatorSequence& s) {
    double worst = 0.0;
    for (int n = 0; n <= s.order(); ++n) worst = std::max(worst, norm(s.component(n), NormKind::Operator));
    return worst;
}

// ---- combinatorial identities -------------------------------------------

std::vector<CheckRecord> run_stirling(const CheckContext& ctx) {
    std::vector<CheckRecord> out;
    for (int n = 1; n <= 8; ++n) {
        const std::int64_t expected = n == 1 ? 1 : 0;
        out.push_back(record({{"identity", "partition-sum"}, {"n", n}},
                             std::abs(static_cast<double>(signed_partition_sum(n) - expected)),
                             ctx.tolerance));
    }
    for (int n = 0; n <= 8; ++n) {
        const std::int64_t expected = n % 2 == 0 ? 1 : -1;
        out.push_back(record({{"identity", "factorial-sum"}, {"n", n}},
                             std::abs(static_cast<double>(signed_factorial_sum(n) - expected)),
                             ctx.tolerance));
    }
    // grouping enumerated partitions by block count reproduces the
    // Stirling numbers, and their total the Bell number
    for (int n = 1; n <= 8; ++n) {
        std::vector<std::uint64_t> by_blocks(static_cast<std::size_t>(n) + 1, 0);
        std::uint64_t total = 0;
        const auto elems = singles_of(LabelSet::range(n));
        for_each_partition(std::span<const Element>(elems), [&](const Partition& p) {
            ++by_blocks[p.block_count()];
            ++total;
        });
        double residual = std::abs(static_cast<double>(total) - static_cast<double>(bell_number(n)));
        for (int k = 1; k <= n; ++k)
            residual = std::max(residual, std::abs(static_cast<double>(by_blocks[static_cast<std::size_t>(k)]) -
                                                   static_cast<double>(stirling2(n, k))));
        out.push_back(record({{"identity", "block-count-grouping"}, {"n", n}}, residual, ctx.tolerance));
    }
    return out;
}

// ---- cumulant structure ---------------------------------------------------

std::vector<CheckRecord> run_free_vanishing(const CheckContext& ctx) {
    const SystemSpec free = ctx.system.free_variant();
    Rng rng(ctx.seed);
    std::vector<CheckRecord> out;
    const int top = std::min(free.truncation_order(), 4);
    for (double t : ctx.times) {
        for (int m = 2; m <= top; ++m) {
            double worst = 0.0;
            // every split of m elements into one cluster plus singles
            for (int csize = 1; csize < m; ++csize) {
                const LabelSet cluster = LabelSet::range(csize);
                const LabelSet singles = LabelSet::range(m).minus(cluster);
                const auto operand = random_symmetric_hermitian(rng, free.site_dim(), cluster);
                const auto image = dual_cumulant(free, t, ClusterArgument(cluster, singles)).apply(operand);
                worst = std::max(worst, norm(image, NormKind::Operator));
            }
            out.push_back(record({{"t", t}, {"particles", m}}, worst, ctx.tolerance));
        }
    }
    return out;
}

std::vector<CheckRecord> run_initial_condition(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    std::vector<CheckRecord> out;
    for (int m = 1; m <= std::min(ctx.system.truncation_order(), 4); ++m) {
        double worst = 0.0;
        for (int csize = 1; csize <= m; ++csize) {
            const LabelSet cluster = LabelSet::range(csize);
            const LabelSet singles = LabelSet::range(m).minus(cluster);
            const auto operand = random_symmetric_hermitian(rng, ctx.system.site_dim(), cluster);
            const auto image = dual_cumulant(ctx.system, 0.0, ClusterArgument(cluster, singles)).apply(operand);
            const double residual = (m == csize)
                                        ? opdist(image, embed(operand, LabelSet::range(m)))
                                        : norm(image, NormKind::Operator);
            worst = std::max(worst, residual);
        }
        out.push_back(record({{"particles", m}}, worst, ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_cluster_expansion(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        for (int n = 1; n <= std::min(ctx.system.truncation_order(), 4); ++n) {
            const LabelSet y = LabelSet::range(n);
            const auto operand = random_symmetric_hermitian(rng, ctx.system.site_dim(), y);
            ManyBodyOperator sum = ManyBodyOperator::zero(y, ctx.system.site_dim());
            const auto elems = singles_of(y);
            for_each_partition(std::span<const Element>(elems), [&](const Partition& p) {
                ManyBodyOperator term = operand;
                for (const auto& block : p.blocks) {
                    LabelSet block_labels;
                    for (const Element& e : block) block_labels = block_labels.unite(e.labels());
                    term = CumulantMap(ctx.system, t, singles_of(block_labels)).apply(term);
                }
                sum += term;
            });
            const auto direct = group_apply(ctx.system, t, y, operand);
            out.push_back(record({{"t", t}, {"n", n}}, opdist(sum, direct), ctx.tolerance));
        }
    }
    return out;
}

// ---- solution representations --------------------------------------------

std::vector<CheckRecord> run_representation_equivalence(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    std::vector<CheckRecord> out;
    const auto g0 = random_observable_sequence(rng, ctx.system);
    for (double t : ctx.times) {
        const auto primary = solve_dual_cumulant(ctx.system, t, g0);
        out.push_back(record({{"t", t}, {"form", "similarity"}},
                             max_component_distance(primary, solve_dual_similarity(ctx.system, t, g0)),
                             ctx.tolerance));
        out.push_back(record({{"t", t}, {"form", "pair-cumulant"}},
                             max_component_distance(primary, solve_dual_pair_cumulant(ctx.system, t, g0)),
                             ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_generator_equivalence(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto g = random_observable_sequence(rng, ctx.system);
    const double residual =
        max_component_distance(dual_generator(ctx.system, g), dual_generator_similarity(ctx.system, g));
    return {record(json::object(), residual, ctx.tolerance)};
}

// Central difference against a generator, Richardson-verified: the
// second-order error constant is bounded through the generator applied
// three times, so the tolerance is pinned from the instance itself.
template <typename Evolve, typename Generator>
std::vector<CheckRecord> fd_generator_records(const CheckContext& ctx, const OperatorSequence& start,
                                              Evolve&& evolve, Generator&& generator) {
    const auto gen = generator(start);
    const auto third = generator(generator(gen));
    const double c_bound = std::max(1e-6, 1.5 / 6.0 * seq_opnorm(third));
    std::vector<CheckRecord> out;
    std::vector<double> errors;
    const std::vector<double> epsilons{1e-4, 5e-5};
    for (double eps : epsilons) {
        OperatorSequence diff = evolve(eps);
        diff -= evolve(-eps);
        diff *= Complex(1.0 / (2.0 * eps), 0.0);
        const double err = max_component_distance(diff, gen);
        errors.push_back(err);
        out.push_back(record({{"eps", eps}, {"error", err}, {"error_bound", c_bound * eps * eps}},
                             err / (c_bound * eps * eps), ctx.tolerance));
    }
    const double ratio_dev = std::abs(errors[0] / (4.0 * errors[1]) - 1.0);
    out.push_back(record({{"kind", "richardson-ratio"}, {"e1", errors[0]}, {"e2", errors[1]}}, ratio_dev,
                         0.35));
    return out;
}

std::vector<CheckRecord> run_generator_fd(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto g0 = random_observable_sequence(rng, ctx.system);
    return fd_generator_records(
        ctx, g0, [&](double eps) { return solve_dual_cumulant(ctx.system, eps, g0); },
        [&](const OperatorSequence& s) { return dual_generator(ctx.system, s); });
}

std::vector<CheckRecord> run_bbgky_fd(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto f0 = random_state_sequence(rng, ctx.system);
    return fd_generator_records(
        ctx, f0, [&](double eps) { return bbgky_group_states(ctx.system, eps, f0); },
        [&](const OperatorSequence& s) { return bbgky_generator(ctx.system, s); });
}

std::vector<CheckRecord> run_group_law(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto g0 = random_observable_sequence(rng, ctx.system);
    std::vector<CheckRecord> out;
    const std::vector<std::pair<double, double>> pairs{{0.1, 0.1}, {0.1, 0.7}, {0.7, 0.7}};
    for (auto [t1, t2] : pairs) {
        const auto joint = solve_dual_cumulant(ctx.system, t1 + t2, g0);
        const auto stepped = solve_dual_cumulant(ctx.system, t1, solve_dual_cumulant(ctx.system, t2, g0));
        out.push_back(record({{"t1", t1}, {"t2", t2}}, max_component_distance(joint, stepped), ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_duhamel(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const LabelSet pair_labels = LabelSet::range(2);
    if (ctx.system.truncation_order() < 2) return {};
    const auto operand = random_symmetric_hermitian(rng, ctx.system.site_dim(), pair_labels);
    std::vector<CheckRecord> out;

    auto integrand = [&](double t, double t1) {
        ManyBodyOperator inner = group_apply(ctx.system, t1, LabelSet{1}, operand);
        inner = group_apply(ctx.system, t1, LabelSet{2}, inner);
        if (ctx.system.potential(2) != nullptr)
            inner = interaction_liouville(ctx.system, 2, pair_labels, inner);
        else
            inner = ManyBodyOperator::zero(pair_labels, ctx.system.site_dim());
        return group_apply(ctx.system, t - t1, pair_labels, inner);
    };
    auto integrate = [&](double t, int nodes) {
        const QuadratureRule rule = gauss_legendre(nodes, 0.0, t);
        ManyBodyOperator acc = ManyBodyOperator::zero(pair_labels, ctx.system.site_dim());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += Complex(rule.weights[i], 0.0) * integrand(t, rule.nodes[i]);
        return acc;
    };

    for (double t : {0.25, 1.0}) {
        const auto rhs =
            CumulantMap(ctx.system, t, {Element::single(1), Element::single(2)}).apply(operand);
        const auto q32 = integrate(t, 32);
        const auto q64 = integrate(t, 64);
        out.push_back(record({{"t", t}, {"nodes", 32}}, opdist(q32, rhs), ctx.tolerance));
        out.push_back(
            record({{"t", t}, {"kind", "node-doubling-bound"}}, opdist(q32, q64), ctx.tolerance));
    }
    return out;
}

// ---- duality ---------------------------------------------------------------

std::vector<CheckRecord> run_duality_marginal(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto a = random_observable_sequence(rng, ctx.system);
    const auto d = random_state_sequence(rng, ctx.system);
    const auto g0 = marginal_observables(a);
    const auto f0 = marginalize_states(d);
    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        const Complex lhs = grand_canonical_mean(evolve_heisenberg(ctx.system, t, a), d);
        const Complex rhs = mean_value(solve_dual_cumulant(ctx.system, t, g0), f0);
        out.push_back(record({{"t", t}}, std::abs(lhs - rhs), ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_adjointness(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto g = random_observable_sequence(rng, ctx.system);
    const auto f = random_state_sequence(rng, ctx.system);
    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        const Complex lhs = mean_value(f, solve_dual_cumulant(ctx.system, t, g));
        const Complex rhs = mean_value(bbgky_group_states(ctx.system, t, f), g);
        out.push_back(record({{"t", t}}, std::abs(lhs - rhs), ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_number_observable(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    ObservableSequence number = ObservableSequence::zero(ctx.system);
    number.set_component(1, ManyBodyOperator::identity(LabelSet{1}, ctx.system.site_dim()));
    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        const auto evolved = solve_dual_cumulant(ctx.system, t, number);
        out.push_back(
            record({{"t", t}, {"kind", "invariance"}}, max_component_distance(evolved, number), ctx.tolerance));
        const auto f = marginalize_states(random_state_sequence(rng, ctx.system));
        const Complex mean = mean_value(evolved, f);
        out.push_back(record({{"t", t}, {"kind", "mean-is-tr-f1"}},
                             std::abs(mean - f.component(1).trace()), ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_norm_estimate(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    std::vector<CheckRecord> out;
    constexpr double inv_e = 1.0 / std::numbers::e;
    for (double gamma : ctx.gammas) {
        if (!(gamma > 0.0) || gamma >= inv_e) continue;  // the bound needs gamma < 1/e
        const double bound = std::numbers::e * std::numbers::e / (1.0 - gamma * std::numbers::e);
        double worst = 0.0;
        for (int instance = 0; instance < 3; ++instance) {
            // scale component s to norm s!/gamma^s so every order carries
            // equal weighted mass; a flat profile is the worst case for
            // this norm, otherwise the isometric bottom component always
            // dominates and the ratio pins at 1
            auto g = random_observable_sequence(rng, ctx.system, 0.0);
            double scale = 1.0;
            for (int s = 1; s <= g.order(); ++s) {
                scale *= static_cast<double>(s) / gamma;
                g.set_component(s, Complex(scale, 0.0) * g.component(s));
            }
            const double base = gamma_norm(g, gamma);
            for (double t : ctx.times) {
                const double grown = gamma_norm(solve_dual_cumulant(ctx.system, t, g), gamma);
                worst = std::max(worst, grown / base);
            }
        }
        out.push_back(record({{"gamma", gamma}, {"bound", bound}, {"worst_ratio", worst}}, worst / bound,
                             ctx.tolerance));
    }
    return out;
}

// ---- degenerate and structural cases ---------------------------------------

std::vector<CheckRecord> run_degenerate_heisenberg(const CheckContext& ctx) {
    const SystemSpec one = ctx.system.order_one_variant();
    Rng rng(ctx.seed);
    const auto g0 = random_observable_sequence(rng, one);
    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        const double residual = max_component_distance(solve_dual_cumulant(one, t, g0),
                                                       evolve_heisenberg(one, t, g0));
        out.push_back(record({{"t", t}}, residual, ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_identity_fixed_point(const CheckContext& ctx) {
    const auto ident = ObservableSequence::identities(ctx.system);
    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        out.push_back(record({{"t", t}},
                             max_component_distance(solve_dual_cumulant(ctx.system, t, ident), ident),
                             ctx.tolerance));
    }
    const auto annihilated = dual_generator(ctx.system, ident);
    out.push_back(record({{"kind", "generator-annihilates"}},
                         max_component_distance(annihilated, ObservableSequence::zero(ctx.system)),
                         ctx.tolerance));
    return out;
}

std::vector<CheckRecord> run_additive_recursion(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const int d = ctx.system.site_dim();
    const auto a1 = random_symmetric_hermitian(rng, d, LabelSet{1});

    ObservableSequence one_component = ObservableSequence::zero(ctx.system);
    one_component.set_component(1, a1);

    ObservableSequence additive = ObservableSequence::zero(ctx.system);
    for (int s = 1; s <= additive.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator acc = ManyBodyOperator::zero(y, d);
        for (Label j : y) acc += embed(a1.relabeled(LabelSet{j}), y);
        additive.set_component(s, acc);
    }

    std::vector<CheckRecord> out;
    for (double t : ctx.times) {
        const auto solved = solve_dual_cumulant(ctx.system, t, one_component);

        ObservableSequence top_order = ObservableSequence::zero(ctx.system);
        for (int s = 1; s <= top_order.order(); ++s) {
            const LabelSet y = LabelSet::range(s);
            top_order.set_component(
                s, CumulantMap(ctx.system, t, singles_of(y)).apply(additive.component(s)));
        }
        out.push_back(record({{"t", t}, {"kind", "top-order-cumulant"}},
                             max_component_distance(solved, top_order), ctx.tolerance));

        const auto oracle = marginal_observables(evolve_heisenberg(ctx.system, t, additive));
        out.push_back(record({{"t", t}, {"kind", "marginalized-heisenberg"}},
                             max_component_distance(solved, oracle), ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_index_identity(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto g = random_observable_sequence(rng, ctx.system);
    std::vector<CheckRecord> out;
    for (int s = 1; s <= g.order(); ++s) {
        const LabelSet y = LabelSet::range(s);
        ManyBodyOperator direct = ManyBodyOperator::zero(y, g.site_dim());
        ManyBodyOperator complement = ManyBodyOperator::zero(y, g.site_dim());
        for (int n = 0; n <= s; ++n) {
            for (const auto& tuple : distinct_tuples(y, s - n)) {
                const LabelSet chosen(std::vector<Label>(tuple.begin(), tuple.end()));
                direct += (1.0 / static_cast<double>(factorial(s - n))) *
                          embed(g.component(s - n).relabeled(chosen), y);
            }
            for (const auto& tuple : distinct_tuples(y, n)) {
                const LabelSet removed(std::vector<Label>(tuple.begin(), tuple.end()));
                complement += (1.0 / static_cast<double>(factorial(n))) *
                              embed(g.component(s - n).relabeled(y.minus(removed)), y);
            }
        }
        out.push_back(record({{"s", s}}, opdist(direct, complement), ctx.tolerance));
    }
    return out;
}

std::vector<CheckRecord> run_generator_duality(const CheckContext& ctx) {
    Rng rng(ctx.seed);
    const auto g = random_observable_sequence(rng, ctx.system);
    const auto f = random_state_sequence(rng, ctx.system);
    const Complex lhs = mean_value(dual_generator(ctx.system, g), f);
    const Complex rhs = mean_value(g, bbgky_generator(ctx.system, f));
    return {record(json::object(), std::abs(lhs - rhs), ctx.tolerance)};
}

}  // namespace

const std::vector<CheckDef>& check_registry() {
    static const std::vector<CheckDef> registry = {
        {"stirling-identities",
         "alternating partition sums: sum_P (-1)^(|P|-1)(|P|-1)! = delta_{n,1} and "
         "sum_P (-1)^|P| |P|! = (-1)^n, with block-count grouping matching Stirling/Bell numbers",
         0.0, run_stirling},
        {"cumulant-free-vanishing",
         "dual cumulants of the non-interacting evolution group vanish for two or more elements",
         1e-12, run_free_vanishing},
        {"cumulant-initial-condition",
         "at t = 0 the dual cumulant is the identity map for one element and zero for two or more",
         1e-12, run_initial_condition},
        {"cluster-expansion",
         "products of dual cumulants over set partitions reassemble the full n-particle group",
         1e-10, run_cluster_expansion},
        {"representation-equivalence",
         "cumulant expansion, conjugated-evolution form e^{-a+}G(t)e^{+a+}, and pair-cumulant form "
         "of the dual-hierarchy solution coincide",
         1e-10, run_representation_equivalence},
        {"generator-equivalence",
         "the dual-hierarchy generator equals its similarity form e^{-a+} N e^{+a+}",
         1e-10, run_generator_equivalence},
        {"generator-fd",
         "central time difference of the solution group converges to the hierarchy generator at "
         "second order (error within the bound from the thrice-applied generator)",
         1.0, run_generator_fd},
        {"group-law",
         "the solution expansion composes as a one-parameter group in time",
         1e-9, run_group_law},
        {"duhamel",
         "the time integral of the group-sandwiched pair interaction equals the second-order dual "
         "cumulant; quadrature error bounded separately by node doubling",
         1e-8, run_duhamel},
        {"duality-marginal",
         "mean values agree between the full pair (A(t), D(0)) and the marginal pair (G(t), F(0))",
         1e-9, run_duality_marginal},
        {"adjointness",
         "the state-side hierarchy group is the trace-pairing adjoint of the observable-side group",
         1e-10, run_adjointness},
        {"number-observable",
         "the number-of-particles observable (0, I, 0, ...) is invariant under the marginal "
         "evolution and its mean value equals Tr F_1",
         1e-12, run_number_observable},
        {"norm-estimate",
         "gamma-weighted norm growth of the solution group stays within e^2 (1 - gamma e)^{-1} for "
         "gamma < 1/e (ratio reported relative to the bound)",
         1.0, run_norm_estimate},
        {"degenerate-heisenberg",
         "at truncation order one the dual hierarchy reduces to plain Heisenberg evolution",
         1e-11, run_degenerate_heisenberg},
        {"identity-fixed-point",
         "all-identity observable sequences are fixed points of the solution group and are "
         "annihilated by the generator",
         1e-12, run_identity_fixed_point},
        {"additive-recursion",
         "one-component additive initial data evolve through the top-order dual cumulant alone and "
         "match the marginalized Heisenberg flow",
         1e-11, run_additive_recursion},
        {"index-identity",
         "complement-sum and direct-sum index orderings of the expansion coincide on symmetric "
         "sequences",
         1e-12, run_index_identity},
        {"generator-duality",
         "the hierarchy generators are mutually adjoint under the trace pairing: (B+ g, f) = (g, B f)",
         1e-10, run_generator_duality},
        {"bbgky-generator-fd",
         "central time difference of the state-side group converges to its generator at second "
         "order (error within the bound from the thrice-applied generator)",
         1.0, run_bbgky_fd},
    };
    return registry;
}

const CheckDef* find_check(const std::string& id) {
    for (const auto& def : check_registry())
        if (def.id == id) return &def;
    return nullptr;
}

std::vector<std::string> check_ids() {
    std::vector<std::string> ids;
    for (const auto& def : check_registry()) ids.push_back(def.id);
    return ids;
}

}  // namespace dualbbgky
