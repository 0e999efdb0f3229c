#include "dualbbgky/random.hpp"

#include <cmath>
#include <numbers>

namespace dualbbgky {

double Rng::normal() {
    // Box-Muller; one value per draw keeps the stream position simple.
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix random_hermitian(Rng& rng, Eigen::Index dim) {
    Matrix a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = rng.complex_normal();
    Matrix h = 0.5 * (a + a.adjoint());
    const double scale = Eigen::JacobiSVD<Matrix>(h).singularValues()(0);
    if (scale > 0.0) h /= scale;
    return h;
}

ManyBodyOperator random_symmetric_hermitian(Rng& rng, int site_dim, const LabelSet& labels) {
    if (labels.empty()) return ManyBodyOperator::scalar(rng.normal(), site_dim);
    ManyBodyOperator op(labels, site_dim, random_hermitian(rng, ManyBodyOperator::identity(labels, site_dim).dim()));
    op = symmetrize(op);
    const double scale = norm(op, NormKind::Operator);
    if (scale > 0.0) op *= Complex(1.0 / scale, 0.0);
    return op;
}

ManyBodyOperator random_symmetric_psd(Rng& rng, int site_dim, const LabelSet& labels) {
    if (labels.empty()) return ManyBodyOperator::scalar(1.0, site_dim);
    const Eigen::Index dim = ManyBodyOperator::identity(labels, site_dim).dim();
    Matrix a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = rng.complex_normal();
    ManyBodyOperator op(labels, site_dim, Matrix(a * a.adjoint()));
    // permutation-conjugating a PSD operator keeps it PSD, so the
    // symmetrized average is PSD as well
    op = symmetrize(op);
    const double tr = op.trace().real();
    op *= Complex(static_cast<double>(dim) / tr, 0.0);
    return op;
}

ObservableSequence random_observable_sequence(Rng& rng, const SystemSpec& spec, Complex scalar) {
    ObservableSequence out(spec.site_dim(), spec.truncation_order());
    out.set_scalar(scalar);
    for (int s = 1; s <= out.order(); ++s)
        out.set_component(s, random_symmetric_hermitian(rng, spec.site_dim(), LabelSet::range(s)));
    return out;
}

StateSequence random_state_sequence(Rng& rng, const SystemSpec& spec) {
    StateSequence out(spec.site_dim(), spec.truncation_order());
    out.set_scalar(1.0);
    for (int s = 1; s <= out.order(); ++s)
        out.set_component(s, random_symmetric_psd(rng, spec.site_dim(), LabelSet::range(s)));
    return out;
}

SystemSpec::Config random_system_config(Rng& rng, int site_dim, int truncation_order,
                                        bool with_three_body, double coupling) {
    SystemSpec::Config config;
    config.site_dim = site_dim;
    config.truncation_order = truncation_order;
    config.one_body = coupling * random_hermitian(rng, site_dim);
    if (truncation_order >= 2) {
        Matrix pair = coupling *
                      symmetrize(ManyBodyOperator(LabelSet::range(2), site_dim,
                                                  random_hermitian(rng, Eigen::Index(site_dim) * site_dim)))
                          .matrix();
        config.potentials.emplace_back(2, std::move(pair));
    }
    if (with_three_body && truncation_order >= 3) {
        const Eigen::Index dim3 = Eigen::Index(site_dim) * site_dim * site_dim;
        Matrix triple =
            coupling *
            symmetrize(ManyBodyOperator(LabelSet::range(3), site_dim, random_hermitian(rng, dim3))).matrix();
        config.potentials.emplace_back(3, std::move(triple));
    }
    return config;
}

}  // namespace dualbbgky
