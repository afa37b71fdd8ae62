#include "nsg/algnum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nsg {

namespace {

Poly poly_trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

// Remainder of p modulo the monic polynomial f.
Poly poly_mod(Poly p, const Poly& f) {
    const int df = poly_degree(f);
    p = poly_trim(std::move(p));
    while (poly_degree(p) >= df) {
        const int dp = poly_degree(p);
        const Rat lead = p[static_cast<std::size_t>(dp)];
        for (int i = 0; i <= df; ++i)
            p[static_cast<std::size_t>(dp - df + i)] -= lead * f[static_cast<std::size_t>(i)];
        p = poly_trim(std::move(p));
    }
    return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return poly_trim(std::move(out));
}

Poly poly_sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return poly_trim(std::move(a));
}

// Quotient of p by the nonzero polynomial g (not necessarily monic).
Poly poly_div(Poly p, const Poly& g) {
    const int dg = poly_degree(g);
    if (dg < 0) throw std::domain_error("polynomial division by zero");
    const Rat lead = g[static_cast<std::size_t>(dg)];
    p = poly_trim(std::move(p));
    Poly q(p.size(), Rat(0));
    while (poly_degree(p) >= dg) {
        const int dp = poly_degree(p);
        const Rat c = p[static_cast<std::size_t>(dp)] / lead;
        q[static_cast<std::size_t>(dp - dg)] = c;
        for (int i = 0; i <= dg; ++i)
            p[static_cast<std::size_t>(dp - dg + i)] -= c * g[static_cast<std::size_t>(i)];
        p = poly_trim(std::move(p));
    }
    return poly_trim(std::move(q));
}

// Monic integer polynomial with the same irreducibility status as the
// monic rational f: g(y) = L^n f(y/L) with L the lcm of the coefficient
// denominators.
std::vector<mpz_class> monic_integer_form(const Poly& f) {
    const int n = poly_degree(f);
    mpz_class lcm = 1;
    for (const Rat& c : f) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> g(static_cast<std::size_t>(n) + 1);
    mpz_class scale = 1;  // L^(n-i) for coefficient of y^i, walking down from i = n
    for (int i = n; i >= 0; --i) {
        Rat c = f[static_cast<std::size_t>(i)] * Rat(scale);
        if (c.get_den() != 1) throw std::logic_error("monic integer form scaling failed");
        g[static_cast<std::size_t>(i)] = c.get_num();
        scale *= lcm;
    }
    return g;
}

mpz_class eval_int_poly(const std::vector<mpz_class>& g, const mpz_class& x) {
    mpz_class v = 0;
    for (std::size_t i = g.size(); i-- > 0;) v = v * x + g[i];
    return v;
}

std::vector<mpz_class> divisors_with_signs(const mpz_class& n) {
    std::vector<mpz_class> out;
    mpz_class a = abs(n);
    for (mpz_class i = 1; i * i <= a; ++i) {
        if (a % i == 0) {
            out.push_back(i);
            out.push_back(-i);
            mpz_class j = a / i;
            if (j != i) {
                out.push_back(j);
                out.push_back(-j);
            }
        }
    }
    return out;
}

bool has_rational_root(const std::vector<mpz_class>& g) {
    if (g[0] == 0) return true;
    for (const mpz_class& r : divisors_with_signs(g[0]))
        if (eval_int_poly(g, r) == 0) return true;
    return false;
}

// Monic integer quartic: reducible over Q iff it has a rational root or
// splits as (y^2 + b y + c)(y^2 + e y + g0) with integers (Gauss's lemma).
bool quartic_splits_into_quadratics(const std::vector<mpz_class>& f) {
    const mpz_class &p = f[3], &q = f[2], &r = f[1], &s = f[0];
    for (const mpz_class& c : divisors_with_signs(s)) {
        const mpz_class g0 = s / c;
        // b + e = p, b e = q - c - g0: roots of z^2 - p z + (q - c - g0).
        const mpz_class disc = p * p - 4 * (q - c - g0);
        if (disc < 0 || mpz_perfect_square_p(disc.get_mpz_t()) == 0) continue;
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
        for (int sign = -1; sign <= 1; sign += 2) {
            const mpz_class twice_b = p + sign * root;
            if (twice_b % 2 != 0) continue;
            const mpz_class b = twice_b / 2, e = p - b;
            if (b * g0 + c * e == r) return true;
        }
    }
    return false;
}

std::vector<Rat> reduced_coeffs(const Poly& p, int d) {
    std::vector<Rat> out(static_cast<std::size_t>(d), Rat(0));
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i];
    return out;
}

}  // namespace

int poly_degree(const Poly& p) {
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] != 0) return static_cast<int>(i);
    return -1;
}

bool is_irreducible(const Poly& f) {
    const int d = poly_degree(f);
    if (d < 1) throw std::invalid_argument("irreducibility: polynomial must be non-constant");
    if (f[static_cast<std::size_t>(d)] != 1)
        throw std::invalid_argument("irreducibility: polynomial must be monic");
    if (d > 4) throw std::invalid_argument("irreducibility test limited to degree <= 4");
    if (d == 1) return true;
    const std::vector<mpz_class> g = monic_integer_form(f);
    if (has_rational_root(g)) return false;
    if (d == 4 && quartic_splits_into_quadratics(g)) return false;
    return true;
}

NumberField::NumberField(Poly f, Poly conj_t, std::complex<double> embed_t, std::string name)
    : f_(poly_trim(std::move(f))),
      d_(poly_degree(f_)),
      conj_t_(std::move(conj_t)),
      embed_t_(embed_t),
      name_(std::move(name)) {
    if (!is_irreducible(f_)) throw std::invalid_argument("number field: reducible polynomial");
    if (poly_degree(conj_t_) >= d_)
        throw std::invalid_argument("number field: conjugation image degree too high");
    conj_t_.resize(static_cast<std::size_t>(d_), Rat(0));
    // The conjugation must send a root of f to a root of f: f(conj_t) = 0 mod f.
    Poly value = {};
    for (int i = d_; i >= 0; --i) {
        value = poly_mod(poly_mul(value, conj_t_), f_);
        if (value.empty()) value.resize(1, Rat(0));
        value[0] += f_[static_cast<std::size_t>(i)];
        value = poly_trim(std::move(value));
    }
    if (poly_degree(value) >= 0)
        throw std::invalid_argument("number field: conjugation image is not a root of f");
    // Numeric embedding must also be a root.
    std::complex<double> fv = 0.0;
    for (int i = d_; i >= 0; --i) fv = fv * embed_t_ + f_[static_cast<std::size_t>(i)].get_d();
    if (std::abs(fv) > 1e-9)
        throw std::invalid_argument("number field: embedding is not a numeric root of f");
}

FieldPtr NumberField::rationals() {
    static const FieldPtr field = std::make_shared<const NumberField>(
        Poly{Rat(0), Rat(1)}, Poly{Rat(0)}, std::complex<double>(0.0, 0.0), "Q");
    return field;
}

FieldPtr NumberField::sqrt2() {
    static const FieldPtr field = std::make_shared<const NumberField>(
        Poly{Rat(-2), Rat(0), Rat(1)}, Poly{Rat(0), Rat(1)},
        std::complex<double>(std::sqrt(2.0), 0.0), "Q(sqrt2)");
    return field;
}

FieldPtr NumberField::gaussian() {
    static const FieldPtr field = std::make_shared<const NumberField>(
        Poly{Rat(1), Rat(0), Rat(1)}, Poly{Rat(0), Rat(-1)}, std::complex<double>(0.0, 1.0),
        "Q(i)");
    return field;
}

FieldPtr NumberField::eighth_root() {
    static const FieldPtr field = std::make_shared<const NumberField>(
        Poly{Rat(1), Rat(0), Rat(0), Rat(0), Rat(1)},
        Poly{Rat(0), Rat(0), Rat(0), Rat(-1)},
        std::complex<double>(std::sqrt(0.5), std::sqrt(0.5)), "Q(zeta8)");
    return field;
}

bool NumberField::same_field(const NumberField& other) const {
    return this == &other || (f_ == other.f_ && conj_t_ == other.conj_t_);
}

namespace {

void require_same_field(const NFElement& a, const NFElement& b) {
    if (!a.field() || !b.field() || !a.field()->same_field(*b.field()))
        throw std::invalid_argument("number field elements from different fields");
}

}  // namespace

NFElement::NFElement(FieldPtr field, std::vector<Rat> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (!field_) throw std::invalid_argument("element without a field");
    if (coeffs_.size() != static_cast<std::size_t>(field_->degree()))
        throw std::invalid_argument("element coefficient count != field degree");
}

NFElement NFElement::constant(FieldPtr field, const Rat& q) {
    std::vector<Rat> c(static_cast<std::size_t>(field->degree()), Rat(0));
    c[0] = q;
    return NFElement(std::move(field), std::move(c));
}

NFElement NFElement::generator(FieldPtr field) {
    const int d = field->degree();
    Poly t = poly_mod(Poly{Rat(0), Rat(1)}, field->minimal_poly());
    return NFElement(field, reduced_coeffs(t, d));
}

bool NFElement::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rat& c) { return c == 0; });
}

bool NFElement::is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return false;
    return true;
}

NFElement NFElement::operator+(const NFElement& o) const {
    require_same_field(*this, o);
    std::vector<Rat> c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
    return NFElement(field_, std::move(c));
}

NFElement NFElement::operator-(const NFElement& o) const {
    require_same_field(*this, o);
    std::vector<Rat> c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
    return NFElement(field_, std::move(c));
}

NFElement NFElement::operator-() const {
    std::vector<Rat> c = coeffs_;
    for (Rat& v : c) v = -v;
    return NFElement(field_, std::move(c));
}

NFElement NFElement::operator*(const NFElement& o) const {
    require_same_field(*this, o);
    Poly prod = poly_mod(poly_mul(coeffs_, o.coeffs_), field_->minimal_poly());
    return NFElement(field_, reduced_coeffs(prod, field_->degree()));
}

NFElement NFElement::operator*(const Rat& q) const {
    std::vector<Rat> c = coeffs_;
    for (Rat& v : c) v *= q;
    return NFElement(field_, std::move(c));
}

NFElement NFElement::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero field element");
    // Extended Euclid on (a, f): maintain u with u*a = r mod f; the final
    // nonzero remainder is a nonzero rational since f is irreducible.
    Poly r0 = field_->minimal_poly(), r1 = poly_trim(coeffs_);
    Poly u0 = {}, u1 = {Rat(1)};
    while (poly_degree(r1) > 0) {
        const Poly q = poly_div(r0, r1);
        Poly r2 = poly_sub(r0, poly_mul(q, r1));
        Poly u2 = poly_sub(u0, poly_mul(q, u1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    if (poly_degree(r1) != 0) throw std::logic_error("gcd with irreducible modulus not constant");
    const Rat scale = Rat(1) / r1[0];
    Poly inv = poly_mod(poly_mul(u1, Poly{scale}), field_->minimal_poly());
    return NFElement(field_, reduced_coeffs(inv, field_->degree()));
}

NFElement NFElement::operator/(const NFElement& o) const { return *this * o.inverse(); }

bool NFElement::operator==(const NFElement& o) const {
    require_same_field(*this, o);
    return coeffs_ == o.coeffs_;
}

NFElement NFElement::conj() const {
    // Evaluate the element polynomial at conj_t via Horner over the field.
    const NFElement image(field_, reduced_coeffs(field_->conj_t(), field_->degree()));
    NFElement acc = NFElement::constant(field_, Rat(0));
    for (std::size_t i = coeffs_.size(); i-- > 0;)
        acc = acc * image + NFElement::constant(field_, coeffs_[i]);
    return acc;
}

std::complex<double> NFElement::embed() const {
    std::complex<double> acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;)
        acc = acc * field_->embed_t() + coeffs_[i].get_d();
    return acc;
}

NFMatrix::NFMatrix(FieldPtr field, std::size_t n)
    : field_(std::move(field)),
      n_(n),
      entries_(n * n, NFElement::constant(field_, Rat(0))) {}

NFMatrix NFMatrix::identity(FieldPtr field, std::size_t n) {
    NFMatrix m(field, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = NFElement::constant(field, Rat(1));
    return m;
}

NFElement& NFMatrix::at(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
const NFElement& NFMatrix::at(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }

namespace {

void require_compatible(const NFMatrix& a, const NFMatrix& b) {
    if (a.dim() != b.dim() || !a.field()->same_field(*b.field()))
        throw std::invalid_argument("matrix dimension or field mismatch");
}

}  // namespace

NFMatrix NFMatrix::operator+(const NFMatrix& o) const {
    require_compatible(*this, o);
    NFMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] + o.entries_[i];
    return out;
}

NFMatrix NFMatrix::operator-(const NFMatrix& o) const {
    require_compatible(*this, o);
    NFMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] - o.entries_[i];
    return out;
}

NFMatrix NFMatrix::operator*(const NFMatrix& o) const {
    require_compatible(*this, o);
    NFMatrix out(field_, n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t k = 0; k < n_; ++k) {
            const NFElement& lhs = at(r, k);
            if (lhs.is_zero()) continue;
            for (std::size_t c = 0; c < n_; ++c)
                out.at(r, c) = out.at(r, c) + lhs * o.at(k, c);
        }
    return out;
}

bool NFMatrix::operator==(const NFMatrix& o) const {
    require_compatible(*this, o);
    return entries_ == o.entries_;
}

NFMatrix NFMatrix::adjoint() const {
    NFMatrix out(field_, n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) out.at(c, r) = at(r, c).conj();
    return out;
}

NFElement NFMatrix::trace() const {
    NFElement t = NFElement::constant(field_, Rat(0));
    for (std::size_t i = 0; i < n_; ++i) t = t + at(i, i);
    return t;
}

bool NFMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const NFElement& e) { return e.is_zero(); });
}

std::vector<std::vector<std::complex<double>>> NFMatrix::embed() const {
    std::vector<std::vector<std::complex<double>>> out(n_,
                                                       std::vector<std::complex<double>>(n_));
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) out[r][c] = at(r, c).embed();
    return out;
}

std::vector<NFElement> char_poly(const NFMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 0 || n > 64) throw std::invalid_argument("char_poly: dimension must be 1..64");
    const FieldPtr field = m.field();
    std::vector<NFElement> c(n + 1, NFElement::constant(field, Rat(0)));
    c[n] = NFElement::constant(field, Rat(1));
    NFMatrix mk = m;  // Faddeev-LeVerrier: M_k = A (M_{k-1} + c_{n-k+1} I)
    for (std::size_t k = 1; k <= n; ++k) {
        c[n - k] = -(mk.trace() * Rat(1, static_cast<long>(k)));
        if (k == n) break;
        NFMatrix shifted = mk;
        for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) = shifted.at(i, i) + c[n - k];
        mk = m * shifted;
    }
    return c;
}

bool is_singular(const NFMatrix& m) { return char_poly(m)[0].is_zero(); }

NFMatrix qma_acceptance_operator(const NFMatrix& verifier_unitary,
                                 const NFMatrix& init_projector,
                                 const NFMatrix& acc_projector) {
    require_compatible(verifier_unitary, init_projector);
    require_compatible(verifier_unitary, acc_projector);
    if (init_projector * init_projector != init_projector)
        throw std::invalid_argument("init projector is not idempotent");
    if (acc_projector * acc_projector != acc_projector)
        throw std::invalid_argument("acceptance projector is not idempotent");
    return init_projector *
           (verifier_unitary.adjoint() * (acc_projector * (verifier_unitary * init_projector)));
}

namespace {

std::string rat_sexpr(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "(/ " + q.get_num().get_str() + " " + q.get_den().get_str() + ")";
}

std::string entry_sexpr(const SdfInstance::Entry& e) {
    if (std::holds_alternative<Rat>(e)) return rat_sexpr(std::get<Rat>(e));
    return "a_" + std::to_string(std::get<std::size_t>(e));
}

// f(v) as a sum of power terms, highest power first, zero terms skipped.
std::string poly_sexpr(const Poly& f, const std::string& v) {
    std::string out = "(+";
    bool any = false;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        any = true;
        if (i == 0)
            out += " " + rat_sexpr(f[i]);
        else if (i == 1)
            out += " (* " + rat_sexpr(f[i]) + " " + v + ")";
        else
            out += " (* " + rat_sexpr(f[i]) + " (^ " + v + " " + std::to_string(i) + "))";
    }
    if (!any) out += " 0";
    return out + ")";
}

}  // namespace

std::string encode_sdf_as_etr(const SdfInstance& inst) {
    const std::size_t d = inst.dim;
    if (d == 0) throw std::invalid_argument("etr encoder: dimension must be positive");
    if (inst.a.size() != inst.b.size())
        throw std::invalid_argument("etr encoder: constraint matrix/rhs count mismatch");
    auto check_entry = [&](const SdfInstance::Entry& e) {
        if (std::holds_alternative<std::size_t>(e) &&
            std::get<std::size_t>(e) >= inst.alg_coeffs.size())
            throw std::invalid_argument("etr encoder: algebraic coefficient index out of range");
    };
    for (const auto& mat : inst.a) {
        if (mat.size() != d) throw std::invalid_argument("etr encoder: matrix dimension mismatch");
        for (const auto& row : mat) {
            if (row.size() != d)
                throw std::invalid_argument("etr encoder: matrix dimension mismatch");
            for (const auto& e : row) check_entry(e);
        }
    }
    for (const auto& e : inst.b) check_entry(e);

    std::ostringstream out;
    out << "(exists (";
    bool first = true;
    auto var = [&](const std::string& name) {
        if (!first) out << " ";
        first = false;
        out << name;
    };
    for (std::size_t j = 0; j < inst.alg_coeffs.size(); ++j) var("a_" + std::to_string(j));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            var("x_" + std::to_string(r) + "_" + std::to_string(c));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            var("m_" + std::to_string(r) + "_" + std::to_string(c));
    out << ")\n  (and\n";
    for (std::size_t j = 0; j < inst.alg_coeffs.size(); ++j) {
        const AlgebraicRealEncoding& enc = inst.alg_coeffs[j];
        const std::string v = "a_" + std::to_string(j);
        out << "    (= " << poly_sexpr(enc.f, v) << " 0)\n";
        out << "    (> (- " << v << " " << rat_sexpr(enc.lower) << ") 0)\n";
        out << "    (> (- " << rat_sexpr(enc.upper) << " " << v << ") 0)\n";
    }
    for (std::size_t i = 0; i < inst.a.size(); ++i) {
        out << "    (= (+";
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                out << " (* " << entry_sexpr(inst.a[i][r][c]) << " x_" << c << "_" << r << ")";
        out << ") " << entry_sexpr(inst.b[i]) << ")\n";
    }
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            out << "    (= x_" << r << "_" << c << " (+";
            for (std::size_t k = 0; k < d; ++k)
                out << " (* m_" << k << "_" << r << " m_" << k << "_" << c << ")";
            out << "))\n";
        }
    out << "  ))\n";
    return out.str();
}

}  // namespace nsg
