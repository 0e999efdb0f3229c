#include "dualbbgky/system.hpp"

#include <cmath>

namespace dualbbgky {

namespace {

Eigen::Index checked_dim(int d, int n) {
    Eigen::Index dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= d;
        if (dim > SystemSpec::kMaxTotalDimension)
            throw CapacityError("SystemSpec: d^N = " + std::to_string(d) + "^" + std::to_string(n) +
                                " exceeds the dimension guard of " +
                                std::to_string(SystemSpec::kMaxTotalDimension));
    }
    return dim;
}

}  // namespace

SystemSpec::SystemSpec(Config config)
    : d_(config.site_dim),
      order_(config.truncation_order),
      hbar_(config.hbar),
      one_body_(ManyBodyOperator::scalar(0.0, std::max(2, config.site_dim))),
      cache_(std::make_shared<Cache>()) {
    if (d_ < 2) throw ValidationError("d: single-particle dimension must be >= 2");
    if (order_ < 1) throw ValidationError("N: truncation order must be >= 1");
    checked_dim(d_, order_);
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ValidationError("hbar: must be a positive real");

    if (config.one_body.rows() != d_ || config.one_body.cols() != d_)
        throw ValidationError("h1: expected a " + std::to_string(d_) + "x" + std::to_string(d_) + " matrix");
    ManyBodyOperator h1(LabelSet{1}, d_, config.one_body);
    if (hermiticity_residual(h1) > kHermiticityTol * std::max(1.0, norm(h1, NormKind::Operator)))
        throw ValidationError("h1: not Hermitian within tolerance");
    one_body_ = std::move(h1);

    for (auto& [k, raw] : config.potentials) {
        if (k < 2) throw ValidationError("potentials: body order must be >= 2");
        if (k > order_)
            throw ValidationError("potentials: body order " + std::to_string(k) +
                                  " exceeds truncation order " + std::to_string(order_));
        if (potential(k) != nullptr)
            throw ValidationError("potentials: duplicate body order " + std::to_string(k));
        ManyBodyOperator phi(LabelSet::range(k), d_, std::move(raw));
        const double scale = std::max(1.0, norm(phi, NormKind::Operator));
        if (hermiticity_residual(phi) > kHermiticityTol * scale)
            throw ValidationError("potentials[k=" + std::to_string(k) + "]: not Hermitian within tolerance");
        if (config.symmetrize_potentials) {
            phi = symmetrize(phi);
        } else if (check_symmetry(phi) > kHermiticityTol * scale) {
            throw ValidationError("potentials[k=" + std::to_string(k) +
                                  "]: not permutation-symmetric (set symmetrize_potentials to project)");
        }
        potentials_.push_back({k, std::move(phi)});
    }
    std::sort(potentials_.begin(), potentials_.end(),
              [](const auto& a, const auto& b) { return a.body_order < b.body_order; });
}

const InteractionPotential* SystemSpec::potential(int k) const {
    for (const auto& p : potentials_)
        if (p.body_order == k) return &p;
    return nullptr;
}

ManyBodyOperator SystemSpec::hamiltonian(const LabelSet& labels) const {
    const int n = static_cast<int>(labels.size());
    if (n == 0) return ManyBodyOperator::scalar(0.0, d_);
    if (n > order_)
        throw CapacityError("hamiltonian: " + std::to_string(n) +
                            " particles exceeds the truncation order " + std::to_string(order_));
    checked_dim(d_, n);

    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->hamiltonians.find(labels);
        if (it != cache_->hamiltonians.end()) return ManyBodyOperator(labels, d_, it->second);
    }

    ManyBodyOperator h = ManyBodyOperator::zero(labels, d_);
    for (Label l : labels) h += embed(one_body_.relabeled(LabelSet{l}), labels);
    for (const auto& pot : potentials_) {
        if (pot.body_order > n) continue;
        for (const LabelSet& subset : k_subsets(labels, pot.body_order))
            h += embed(pot.matrix.relabeled(subset), labels);
    }

    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        cache_->hamiltonians.emplace(labels, h.matrix());
    }
    return h;
}

ManyBodyOperator SystemSpec::hamiltonian(int n) const {
    if (n < 0 || n > order_)
        throw CapacityError("hamiltonian: n = " + std::to_string(n) + " outside [0, N = " +
                            std::to_string(order_) + "]");
    return hamiltonian(LabelSet::range(n));
}

SystemSpec SystemSpec::free_variant() const {
    Config config;
    config.site_dim = d_;
    config.truncation_order = order_;
    config.one_body = one_body_.matrix();
    config.hbar = hbar_;
    return SystemSpec(std::move(config));
}

SystemSpec SystemSpec::order_one_variant() const {
    Config config;
    config.site_dim = d_;
    config.truncation_order = 1;
    config.one_body = one_body_.matrix();
    config.hbar = hbar_;
    return SystemSpec(std::move(config));
}

ManyBodyOperator liouville_observable(const SystemSpec& spec, const ManyBodyOperator& g) {
    if (g.is_scalar()) return ManyBodyOperator::scalar(0.0, spec.site_dim());
    const ManyBodyOperator h = spec.hamiltonian(g.labels());
    return Complex(0.0, -1.0 / spec.hbar()) * (g * h - h * g);
}

ManyBodyOperator liouville_state(const SystemSpec& spec, const ManyBodyOperator& f) {
    if (f.is_scalar()) return ManyBodyOperator::scalar(0.0, spec.site_dim());
    const ManyBodyOperator h = spec.hamiltonian(f.labels());
    return Complex(0.0, -1.0 / spec.hbar()) * (h * f - f * h);
}

ManyBodyOperator interaction_liouville(const SystemSpec& spec, int k, const LabelSet& target,
                                       const ManyBodyOperator& g) {
    if (static_cast<int>(target.size()) != k)
        throw ValidationError("interaction_liouville: target label count differs from body order");
    if (!target.is_subset_of(g.labels()))
        throw std::domain_error("interaction_liouville: target labels not contained in operand");
    const InteractionPotential* pot = spec.potential(k);
    if (pot == nullptr)
        throw AbsentPotentialError("interaction_liouville: no " + std::to_string(k) +
                                   "-body potential configured");
    const ManyBodyOperator phi = embed(pot->matrix.relabeled(target), g.labels());
    return Complex(0.0, -1.0 / spec.hbar()) * (g * phi - phi * g);
}

}  // namespace dualbbgky
