#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nsg/rational.hpp"

namespace nsg {

// Polynomial over the rationals, coefficient list indexed by power
// (poly[i] multiplies t^i).
using Poly = std::vector<Rat>;

// Degree of p with zero leading coefficients stripped; deg(0) = -1.
int poly_degree(const Poly& p);

// True iff the monic polynomial f is irreducible over the rationals.
// Supported up to degree 4 (rational-root test plus, for quartics,
// exhaustive integer quadratic-factor search); throws std::invalid_argument
// for higher degrees or non-monic input.
bool is_irreducible(const Poly& f);

// The number field Q[t]/(f(t)) for a monic irreducible f of degree d.
// Elements are polynomials of degree < d in the class of t. The field
// carries a distinguished automorphism (complex conjugation under the
// chosen embedding) and a numeric embedding of t used only for
// cross-checks against floating-point linear algebra.
class NumberField {
  public:
    // f must be monic of degree 1..4 and irreducible (checked).
    // conj_t: image of t under the conjugation automorphism, as a
    // polynomial of degree < d. embed_t: numeric root of f matching that
    // conjugation (real root => conj_t = t).
    NumberField(Poly f, Poly conj_t, std::complex<double> embed_t, std::string name);

    // Shipped presets.
    static std::shared_ptr<const NumberField> rationals();        // f = t - 0? d = 1
    static std::shared_ptr<const NumberField> sqrt2();            // t^2 - 2
    static std::shared_ptr<const NumberField> gaussian();         // t^2 + 1
    static std::shared_ptr<const NumberField> eighth_root();      // t^4 + 1

    const Poly& minimal_poly() const { return f_; }
    int degree() const { return d_; }
    const Poly& conj_t() const { return conj_t_; }
    std::complex<double> embed_t() const { return embed_t_; }
    const std::string& name() const { return name_; }

    bool same_field(const NumberField& other) const;

  private:
    Poly f_;
    int d_;
    Poly conj_t_;
    std::complex<double> embed_t_;
    std::string name_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Element of a number field: a rational coefficient vector of length
// exactly d, coeffs[i] multiplying t^i.
class NFElement {
  public:
    NFElement() = default;
    NFElement(FieldPtr field, std::vector<Rat> coeffs);

    // The rational constant q embedded in the field.
    static NFElement constant(FieldPtr field, const Rat& q);
    // The class of t itself.
    static NFElement generator(FieldPtr field);

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    bool is_zero() const;
    bool is_rational() const;  // all coefficients above t^0 vanish

    NFElement operator+(const NFElement& o) const;
    NFElement operator-(const NFElement& o) const;
    NFElement operator-() const;
    NFElement operator*(const NFElement& o) const;
    NFElement operator*(const Rat& q) const;
    // Multiplicative inverse via the extended Euclidean algorithm on
    // (poly, f); throws std::domain_error on zero.
    NFElement inverse() const;
    NFElement operator/(const NFElement& o) const;
    bool operator==(const NFElement& o) const;
    bool operator!=(const NFElement& o) const { return !(*this == o); }

    // Image under the field's conjugation automorphism.
    NFElement conj() const;
    // Numeric value under the field's embedding.
    std::complex<double> embed() const;

  private:
    FieldPtr field_;
    std::vector<Rat> coeffs_;
};

// Real algebraic number encoded as (minimal polynomial f, rational
// bounds a < b isolating exactly one real root of f).
struct AlgebraicRealEncoding {
    Poly f;
    Rat lower;
    Rat upper;
};

// Square matrix over a number field, row major.
class NFMatrix {
  public:
    NFMatrix() = default;
    NFMatrix(FieldPtr field, std::size_t n);  // zero matrix

    static NFMatrix identity(FieldPtr field, std::size_t n);

    std::size_t dim() const { return n_; }
    const FieldPtr& field() const { return field_; }
    NFElement& at(std::size_t r, std::size_t c);
    const NFElement& at(std::size_t r, std::size_t c) const;

    NFMatrix operator+(const NFMatrix& o) const;
    NFMatrix operator-(const NFMatrix& o) const;
    NFMatrix operator*(const NFMatrix& o) const;
    bool operator==(const NFMatrix& o) const;
    bool operator!=(const NFMatrix& o) const { return !(*this == o); }

    // Conjugate transpose under the field's conjugation automorphism.
    NFMatrix adjoint() const;
    NFElement trace() const;
    bool is_zero() const;
    // Numeric image under the field embedding.
    std::vector<std::vector<std::complex<double>>> embed() const;

  private:
    FieldPtr field_;
    std::size_t n_ = 0;
    std::vector<NFElement> entries_;
};

// Exact characteristic polynomial det(tI - M) by the Faddeev-LeVerrier
// recurrence; returns d+1 coefficients indexed by power (monic, leading 1).
// Dimension capped at 64.
std::vector<NFElement> char_poly(const NFMatrix& m);

// Exact singularity decision: the determinant is the constant coefficient
// of char_poly up to sign.
bool is_singular(const NFMatrix& m);

// A = P_init U^dag P_acc U P_init for a one-round verifier. Both
// projectors must be exactly idempotent (throws std::invalid_argument
// otherwise). The witness-existence question "does A have eigenvalue 1"
// is then is_singular(I - A).
NFMatrix qma_acceptance_operator(const NFMatrix& verifier_unitary,
                                 const NFMatrix& init_projector,
                                 const NFMatrix& acc_projector);

// Semidefinite feasibility instance with algebraic coefficients:
// does a symmetric d x d matrix X >= 0 exist with Tr(A_i X) = b_i?
// Each matrix entry is either a rational or a reference (index) into the
// list of algebraic coefficient encodings.
struct SdfInstance {
    using Entry = std::variant<Rat, std::size_t>;  // rational | alg coeff index
    std::size_t dim = 0;
    std::vector<AlgebraicRealEncoding> alg_coeffs;
    std::vector<std::vector<std::vector<Entry>>> a;  // a[i][r][c]
    std::vector<Entry> b;                            // right-hand sides
};

// Emits the instance as an existential first-order formula over the reals,
// in a deterministic s-expression text format:
//   (exists (<vars>) (and <clauses>))
// Variables, in order: one a_<j> per algebraic coefficient, then x_<r>_<c>
// for the d^2 entries of X, then m_<r>_<c> for the d^2 entries of the
// Cholesky-style witness M. Clauses, in order: for each algebraic
// coefficient, f(a_j) = 0, a_j - lower > 0, upper - a_j > 0; for each
// constraint i, the expanded Tr(A_i X) = b_i; and X = M^T M entrywise
// (which also forces X symmetric). Rationals print as an integer or
// (/ num den). Output is byte-identical across runs.
std::string encode_sdf_as_etr(const SdfInstance& inst);

}  // namespace nsg
