#pragma once

#include <vector>

namespace dualbbgky {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n);

/// The same rule mapped onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace dualbbgky
