#include "dualbbgky/operators.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dualbbgky {

namespace {

Eigen::Index pow_dim(int d, int m) {
    Eigen::Index dim = 1;
    for (int i = 0; i < m; ++i) {
        dim *= d;
        if (dim > (Eigen::Index{1} << 24)) throw CapacityError("tensor dimension guard exceeded");
    }
    return dim;
}

void unpack_digits(Eigen::Index idx, int m, int d, std::vector<int>& digits) {
    digits.resize(static_cast<std::size_t>(m));
    for (int k = m - 1; k >= 0; --k) {
        digits[static_cast<std::size_t>(k)] = static_cast<int>(idx % d);
        idx /= d;
    }
}

Eigen::Index pack_digits(const std::vector<int>& digits, int d) {
    Eigen::Index idx = 0;
    for (int digit : digits) idx = idx * d + digit;
    return idx;
}

double operator_norm(const Matrix& m) {
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

}  // namespace

ManyBodyOperator::ManyBodyOperator(LabelSet labels, int site_dim, Matrix matrix)
    : labels_(std::move(labels)), site_dim_(site_dim), matrix_(std::move(matrix)) {
    if (site_dim_ < 2) throw ValidationError("ManyBodyOperator: site dimension must be >= 2");
    const Eigen::Index dim = pow_dim(site_dim_, particle_count());
    if (matrix_.rows() != dim || matrix_.cols() != dim)
        throw ValidationError("ManyBodyOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + " but d^(particles) = " + std::to_string(dim));
    if (!matrix_.allFinite()) throw ValidationError("ManyBodyOperator: non-finite entries");
}

ManyBodyOperator ManyBodyOperator::scalar(Complex value, int site_dim) {
    Matrix m(1, 1);
    m(0, 0) = value;
    return ManyBodyOperator(LabelSet{}, site_dim, std::move(m));
}

ManyBodyOperator ManyBodyOperator::identity(const LabelSet& labels, int site_dim) {
    const Eigen::Index dim = pow_dim(site_dim, static_cast<int>(labels.size()));
    return ManyBodyOperator(labels, site_dim, Matrix::Identity(dim, dim));
}

ManyBodyOperator ManyBodyOperator::zero(const LabelSet& labels, int site_dim) {
    const Eigen::Index dim = pow_dim(site_dim, static_cast<int>(labels.size()));
    return ManyBodyOperator(labels, site_dim, Matrix::Zero(dim, dim));
}

Complex ManyBodyOperator::scalar_value() const {
    if (!is_scalar()) throw ValidationError("scalar_value: operator has particle labels");
    return matrix_(0, 0);
}

ManyBodyOperator ManyBodyOperator::relabeled(const LabelSet& new_labels) const {
    if (new_labels.size() != labels_.size())
        throw ValidationError("relabeled: label count mismatch");
    return ManyBodyOperator(new_labels, site_dim_, matrix_);
}

ManyBodyOperator ManyBodyOperator::adjoint() const {
    return ManyBodyOperator(labels_, site_dim_, matrix_.adjoint());
}

ManyBodyOperator& ManyBodyOperator::operator+=(const ManyBodyOperator& other) {
    if (labels_ != other.labels_ || site_dim_ != other.site_dim_)
        throw std::domain_error("operator+=: label or dimension mismatch");
    matrix_ += other.matrix_;
    return *this;
}

ManyBodyOperator& ManyBodyOperator::operator-=(const ManyBodyOperator& other) {
    if (labels_ != other.labels_ || site_dim_ != other.site_dim_)
        throw std::domain_error("operator-=: label or dimension mismatch");
    matrix_ -= other.matrix_;
    return *this;
}

ManyBodyOperator& ManyBodyOperator::operator*=(Complex factor) {
    matrix_ *= factor;
    return *this;
}

ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    if (a.labels() != b.labels() || a.site_dim() != b.site_dim())
        throw std::domain_error("operator*: label or dimension mismatch");
    return ManyBodyOperator(a.labels(), a.site_dim(), a.matrix() * b.matrix());
}

ManyBodyOperator embed(const ManyBodyOperator& op, const LabelSet& target) {
    if (!op.labels().is_subset_of(target))
        throw std::domain_error("embed: operator labels not contained in target");
    if (op.labels() == target) return op;

    const int d = op.site_dim();
    const int m = static_cast<int>(target.size());
    const int m_op = op.particle_count();
    const int m_env = m - m_op;

    std::vector<int> op_pos, env_pos;
    for (int k = 0; k < m; ++k) {
        if (op.labels().contains(target[static_cast<std::size_t>(k)]))
            op_pos.push_back(k);
        else
            env_pos.push_back(k);
    }

    const Eigen::Index dim = pow_dim(d, m);
    const Eigen::Index dim_op = op.dim();
    const Eigen::Index dim_env = pow_dim(d, m_env);
    Matrix out = Matrix::Zero(dim, dim);

    std::vector<int> row(static_cast<std::size_t>(m)), col(static_cast<std::size_t>(m));
    std::vector<int> rd, cd, ed;
    for (Eigen::Index e = 0; e < dim_env; ++e) {
        unpack_digits(e, m_env, d, ed);
        for (Eigen::Index r = 0; r < dim_op; ++r) {
            unpack_digits(r, m_op, d, rd);
            for (Eigen::Index c = 0; c < dim_op; ++c) {
                unpack_digits(c, m_op, d, cd);
                for (int k = 0; k < m_op; ++k) {
                    row[static_cast<std::size_t>(op_pos[static_cast<std::size_t>(k)])] = rd[static_cast<std::size_t>(k)];
                    col[static_cast<std::size_t>(op_pos[static_cast<std::size_t>(k)])] = cd[static_cast<std::size_t>(k)];
                }
                for (int k = 0; k < m_env; ++k) {
                    row[static_cast<std::size_t>(env_pos[static_cast<std::size_t>(k)])] = ed[static_cast<std::size_t>(k)];
                    col[static_cast<std::size_t>(env_pos[static_cast<std::size_t>(k)])] = ed[static_cast<std::size_t>(k)];
                }
                out(pack_digits(row, d), pack_digits(col, d)) = op.matrix()(r, c);
            }
        }
    }
    return ManyBodyOperator(target, d, std::move(out));
}

ManyBodyOperator partial_trace(const ManyBodyOperator& op, const LabelSet& traced) {
    if (!traced.is_subset_of(op.labels()))
        throw std::domain_error("partial_trace: traced labels not present in operator");
    if (traced.empty()) return op;

    const int d = op.site_dim();
    const LabelSet kept = op.labels().minus(traced);
    const int m = op.particle_count();
    const int m_kept = static_cast<int>(kept.size());
    const int m_tr = m - m_kept;

    std::vector<int> kept_pos, tr_pos;
    for (int k = 0; k < m; ++k) {
        if (traced.contains(op.labels()[static_cast<std::size_t>(k)]))
            tr_pos.push_back(k);
        else
            kept_pos.push_back(k);
    }

    const Eigen::Index dim_kept = pow_dim(d, m_kept);
    const Eigen::Index dim_tr = pow_dim(d, m_tr);
    Matrix out = Matrix::Zero(dim_kept, dim_kept);

    std::vector<int> row(static_cast<std::size_t>(m)), col(static_cast<std::size_t>(m));
    std::vector<int> rd, cd, td;
    for (Eigen::Index r = 0; r < dim_kept; ++r) {
        unpack_digits(r, m_kept, d, rd);
        for (Eigen::Index c = 0; c < dim_kept; ++c) {
            unpack_digits(c, m_kept, d, cd);
            Complex sum = 0.0;
            for (Eigen::Index t = 0; t < dim_tr; ++t) {
                unpack_digits(t, m_tr, d, td);
                for (int k = 0; k < m_kept; ++k) {
                    row[static_cast<std::size_t>(kept_pos[static_cast<std::size_t>(k)])] = rd[static_cast<std::size_t>(k)];
                    col[static_cast<std::size_t>(kept_pos[static_cast<std::size_t>(k)])] = cd[static_cast<std::size_t>(k)];
                }
                for (int k = 0; k < m_tr; ++k) {
                    row[static_cast<std::size_t>(tr_pos[static_cast<std::size_t>(k)])] = td[static_cast<std::size_t>(k)];
                    col[static_cast<std::size_t>(tr_pos[static_cast<std::size_t>(k)])] = td[static_cast<std::size_t>(k)];
                }
                sum += op.matrix()(pack_digits(row, d), pack_digits(col, d));
            }
            out(r, c) = sum;
        }
    }
    return ManyBodyOperator(kept, d, std::move(out));
}

ManyBodyOperator unitary_of(const ManyBodyOperator& hermitian, double t, double hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("unitary_of: hbar must be positive");
    const double scale = std::max(1.0, norm(hermitian, NormKind::Operator));
    if (hermiticity_residual(hermitian) > 1e-10 * scale)
        throw ValidationError("unitary_of: input is not Hermitian within tolerance");
    if (hermitian.is_scalar())
        return ManyBodyOperator::scalar(std::exp(Complex(0.0, t / hbar) * hermitian.scalar_value()),
                                        hermitian.site_dim());

    const Matrix sym = 0.5 * (hermitian.matrix() + hermitian.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw std::runtime_error("unitary_of: eigendecomposition failed");
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();
    Eigen::VectorXcd phases(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        phases(i) = std::exp(Complex(0.0, t * evals(i) / hbar));
    Matrix u = evecs * phases.asDiagonal() * evecs.adjoint();
    return ManyBodyOperator(hermitian.labels(), hermitian.site_dim(), std::move(u));
}

ManyBodyOperator conjugate(const ManyBodyOperator& u, const ManyBodyOperator& g) {
    if (u.labels() != g.labels() || u.site_dim() != g.site_dim())
        throw std::domain_error("conjugate: label or dimension mismatch");
    return ManyBodyOperator(g.labels(), g.site_dim(), u.matrix() * g.matrix() * u.matrix().adjoint());
}

double norm(const ManyBodyOperator& op, NormKind kind) {
    if (op.dim() == 1) return std::abs(op.matrix()(0, 0));
    Eigen::JacobiSVD<Matrix> svd(op.matrix());
    const auto& sv = svd.singularValues();
    return kind == NormKind::Operator ? sv(0) : sv.sum();
}

double hermiticity_residual(const ManyBodyOperator& op) {
    return operator_norm(op.matrix() - op.matrix().adjoint());
}

ManyBodyOperator permute_factors(const ManyBodyOperator& op, const std::vector<int>& perm) {
    const int m = op.particle_count();
    if (static_cast<int>(perm.size()) != m) throw ValidationError("permute_factors: permutation size mismatch");
    if (m < 2) return op;
    const int d = op.site_dim();
    const Eigen::Index dim = op.dim();
    Matrix out(dim, dim);
    std::vector<int> rd, cd, pr(static_cast<std::size_t>(m)), pc(static_cast<std::size_t>(m));
    for (Eigen::Index r = 0; r < dim; ++r) {
        unpack_digits(r, m, d, rd);
        for (Eigen::Index c = 0; c < dim; ++c) {
            unpack_digits(c, m, d, cd);
            for (int k = 0; k < m; ++k) {
                pr[static_cast<std::size_t>(k)] = rd[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
                pc[static_cast<std::size_t>(k)] = cd[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
            }
            out(pack_digits(pr, d), pack_digits(pc, d)) = op.matrix()(r, c);
        }
    }
    return ManyBodyOperator(op.labels(), d, std::move(out));
}

double check_symmetry(const ManyBodyOperator& op) {
    const int m = op.particle_count();
    if (m < 2) return 0.0;
    if (m > 6) throw CapacityError("check_symmetry: more than 6 factors");
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    double worst = 0.0;
    while (std::next_permutation(perm.begin(), perm.end())) {
        const ManyBodyOperator permuted = permute_factors(op, perm);
        worst = std::max(worst, operator_norm(permuted.matrix() - op.matrix()));
    }
    return worst;
}

ManyBodyOperator symmetrize(const ManyBodyOperator& op) {
    const int m = op.particle_count();
    if (m < 2) return op;
    if (m > 6) throw CapacityError("symmetrize: more than 6 factors");
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    Matrix acc = Matrix::Zero(op.dim(), op.dim());
    std::uint64_t count = 0;
    do {
        acc += permute_factors(op, perm).matrix();
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc /= static_cast<double>(count);
    return ManyBodyOperator(op.labels(), op.site_dim(), std::move(acc));
}

ManyBodyOperator commutator(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    return a * b - b * a;
}

}  // namespace dualbbgky
