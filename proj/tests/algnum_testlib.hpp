#pragma once

// Shared oracles and generators for exercising the number-field module from
// multiple test binaries.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <random>

#include "nsg/algnum.hpp"

namespace nsg_test {

using namespace nsg;


Rat random_small_rat(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    return rat(num(rng), den(rng));
}

NFElement random_element(const FieldPtr& field, std::mt19937_64& rng) {
    std::vector<Rat> c(static_cast<std::size_t>(field->degree()));
    for (Rat& v : c) v = random_small_rat(rng);
    return NFElement(field, std::move(c));
}

NFElement random_nonzero(const FieldPtr& field, std::mt19937_64& rng) {
    for (;;) {
        NFElement e = random_element(field, rng);
        if (!e.is_zero()) return e;
    }
}

NFMatrix random_matrix(const FieldPtr& field, std::size_t n, std::mt19937_64& rng) {
    NFMatrix m(field, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m.at(r, c) = random_element(field, rng);
    return m;
}

// p(M) by Horner over matrices; zero iff Cayley-Hamilton holds.
NFMatrix eval_poly_at_matrix(const std::vector<NFElement>& p, const NFMatrix& m) {
    const FieldPtr field = m.field();
    NFMatrix acc(field, m.dim());
    const NFMatrix eye = NFMatrix::identity(field, m.dim());
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * m;
        for (std::size_t j = 0; j < m.dim(); ++j) acc.at(j, j) = acc.at(j, j) + p[i];
    }
    return acc;
}

// Exact determinant by Gaussian elimination with row pivoting.
NFElement determinant_by_elimination(NFMatrix m) {
    const FieldPtr field = m.field();
    const std::size_t n = m.dim();
    NFElement det = NFElement::constant(field, Rat(1));
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == n) return NFElement::constant(field, Rat(0));
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            det = -det;
        }
        det = det * m.at(col, col);
        const NFElement inv = m.at(col, col).inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m.at(r, col).is_zero()) continue;
            const NFElement factor = m.at(r, col) * inv;
            for (std::size_t c = col; c < n; ++c)
                m.at(r, c) = m.at(r, c) - factor * m.at(col, c);
        }
    }
    return det;
}

// Independent oracle for char_poly: evaluate det(xI - M) at n+1 rational
// points and Lagrange-interpolate the coefficients.
std::vector<NFElement> char_poly_by_interpolation(const NFMatrix& m) {
    const FieldPtr field = m.field();
    const std::size_t n = m.dim();
    std::vector<NFElement> coeffs(n + 1, NFElement::constant(field, Rat(0)));
    for (std::size_t j = 0; j <= n; ++j) {
        const Rat xj(static_cast<long>(j));
        NFMatrix shifted = m;
        for (std::size_t i = 0; i < n; ++i)
            shifted.at(i, i) = shifted.at(i, i) - NFElement::constant(field, xj);
        // det(x_j I - M) = (-1)^n det(M - x_j I)
        NFElement value = determinant_by_elimination(shifted);
        if (n % 2 == 1) value = -value;
        // Rational Lagrange basis polynomial for node x_j.
        std::vector<Rat> basis = {Rat(1)};
        Rat denom(1);
        for (std::size_t l = 0; l <= n; ++l) {
            if (l == j) continue;
            const Rat xl(static_cast<long>(l));
            std::vector<Rat> next(basis.size() + 1, Rat(0));
            for (std::size_t i = 0; i < basis.size(); ++i) {
                next[i + 1] += basis[i];
                next[i] -= xl * basis[i];
            }
            basis = std::move(next);
            denom *= xj - xl;
        }
        for (std::size_t i = 0; i <= n; ++i)
            coeffs[i] = coeffs[i] + value * (basis[i] / denom);
    }
    return coeffs;
}

double min_abs_eigenvalue(const NFMatrix& m) {
    const std::size_t n = m.dim();
    Eigen::MatrixXcd numeric(n, n);
    const auto embedded = m.embed();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) numeric(static_cast<Eigen::Index>(r),
                                                    static_cast<Eigen::Index>(c)) = embedded[r][c];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(numeric, false);
    return es.eigenvalues().cwiseAbs().minCoeff();
}

// Hadamard gate over Q(sqrt2): 1/sqrt2 = t/2 since t = sqrt2.
NFMatrix hadamard_sqrt2() {
    const FieldPtr field = NumberField::sqrt2();
    const NFElement h = NFElement::generator(field) * Rat(1, 2);
    NFMatrix m(field, 2);
    m.at(0, 0) = h;
    m.at(0, 1) = h;
    m.at(1, 0) = h;
    m.at(1, 1) = -h;
    return m;
}

std::vector<FieldPtr> shipped_fields() {
    return {NumberField::rationals(), NumberField::sqrt2(), NumberField::gaussian(),
            NumberField::eighth_root()};
}


}  // namespace nsg_test
