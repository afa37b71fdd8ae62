#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <fstream>
#include <random>
#include <sstream>

#include "nsg/algnum.hpp"

#include "algnum_testlib.hpp"

using namespace nsg;
using namespace nsg_test;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("irreducibility decisions up to degree 4") {
    CHECK(is_irreducible({Rat(-2), Rat(0), Rat(1)}));             // t^2 - 2
    CHECK(is_irreducible({Rat(1), Rat(0), Rat(1)}));              // t^2 + 1
    CHECK(is_irreducible({Rat(1), Rat(0), Rat(0), Rat(0), Rat(1)}));  // t^4 + 1
    CHECK(is_irreducible({Rat(-2), Rat(0), Rat(0), Rat(1)}));     // t^3 - 2
    CHECK_FALSE(is_irreducible({Rat(-1), Rat(0), Rat(1)}));       // t^2 - 1
    CHECK(is_irreducible({Rat(-2), Rat(1)}));                     // linear always irreducible
    CHECK_FALSE(is_irreducible({Rat(-4), Rat(0), Rat(0), Rat(0), Rat(1)}));  // (t^2-2)(t^2+2)
    CHECK_FALSE(is_irreducible({Rat(4), Rat(0), Rat(0), Rat(0), Rat(1)}));   // Sophie Germain
    CHECK_FALSE(is_irreducible({Rat(0), Rat(0), Rat(1)}));        // t^2, root 0
    // t^2 - 1/4 has the rational root 1/2.
    CHECK_FALSE(is_irreducible({rat(-1, 4), Rat(0), Rat(1)}));
    CHECK_THROWS_AS(is_irreducible({Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(is_irreducible({Rat(1), Rat(2)}), std::invalid_argument);  // non-monic
}

TEST_CASE("shipped field presets and generator identities") {
    const FieldPtr f2 = NumberField::sqrt2();
    const NFElement t = NFElement::generator(f2);
    CHECK(t * t == NFElement::constant(f2, Rat(2)));
    const NFElement one = NFElement::constant(f2, Rat(1));
    CHECK((one + t) * (-one + t) == one);  // (1+sqrt2)(-1+sqrt2) = 1

    const FieldPtr fi = NumberField::gaussian();
    const NFElement i = NFElement::generator(fi);
    CHECK(i * i == NFElement::constant(fi, Rat(-1)));
    CHECK(i.conj() == -i);
    CHECK((i * i.conj()) == NFElement::constant(fi, Rat(1)));

    const FieldPtr fz = NumberField::eighth_root();
    const NFElement z = NFElement::generator(fz);
    CHECK(z * z * z * z == NFElement::constant(fz, Rat(-1)));
    CHECK(z * z.conj() == NFElement::constant(fz, Rat(1)));  // |zeta8| = 1
    // zeta8 + conj(zeta8) = sqrt2 numerically.
    CHECK(std::abs((z + z.conj()).embed() - std::complex<double>(std::sqrt(2.0), 0.0)) < 1e-12);
}

TEST_CASE("field axioms and inverses on random elements") {
    for (const FieldPtr& field : shipped_fields()) {
        std::mt19937_64 rng(42);
        for (int trial = 0; trial < 500; ++trial) {
            const NFElement a = random_element(field, rng);
            const NFElement b = random_element(field, rng);
            const NFElement c = random_element(field, rng);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
        }
        for (int trial = 0; trial < 500; ++trial) {
            const NFElement x = random_nonzero(field, rng);
            CHECK(x * x.inverse() == NFElement::constant(field, Rat(1)));
        }
        CHECK_THROWS_AS(NFElement::constant(field, Rat(0)).inverse(), std::domain_error);
    }
}

TEST_CASE("conjugation is a field automorphism") {
    for (const FieldPtr& field : shipped_fields()) {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 100; ++trial) {
            const NFElement a = random_element(field, rng);
            const NFElement b = random_element(field, rng);
            CHECK((a + b).conj() == a.conj() + b.conj());
            CHECK((a * b).conj() == a.conj() * b.conj());
            CHECK(a.conj().conj() == a);
            // Conjugation matches complex conjugation under the embedding.
            CHECK(std::abs(a.conj().embed() - std::conj(a.embed())) < 1e-12);
        }
    }
}

TEST_CASE("char_poly closed forms") {
    const FieldPtr q = NumberField::rationals();
    NFMatrix swap2(q, 2);
    swap2.at(0, 1) = NFElement::constant(q, Rat(1));
    swap2.at(1, 0) = NFElement::constant(q, Rat(1));
    const auto p = char_poly(swap2);  // t^2 - 1
    CHECK(p[0] == NFElement::constant(q, Rat(-1)));
    CHECK(p[1] == NFElement::constant(q, Rat(0)));
    CHECK(p[2] == NFElement::constant(q, Rat(1)));

    const NFMatrix h = hadamard_sqrt2();
    const FieldPtr f2 = h.field();
    const auto ph = char_poly(h);  // trace 0, determinant -1
    CHECK(ph[0] == NFElement::constant(f2, Rat(-1)));
    CHECK(ph[1] == NFElement::constant(f2, Rat(0)));
    CHECK(ph[2] == NFElement::constant(f2, Rat(1)));
}

TEST_CASE("Cayley-Hamilton holds exactly up to dimension 6") {
    for (const FieldPtr& field : shipped_fields()) {
        std::mt19937_64 rng(11);
        for (std::size_t n = 1; n <= 6; ++n) {
            const NFMatrix m = random_matrix(field, n, rng);
            CHECK(eval_poly_at_matrix(char_poly(m), m).is_zero());
        }
    }
}

TEST_CASE("char_poly agrees with the interpolation oracle on 50 random 4x4") {
    const FieldPtr field = NumberField::sqrt2();
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const NFMatrix m = random_matrix(field, 4, rng);
        const auto fast = char_poly(m);
        const auto oracle = char_poly_by_interpolation(m);
        REQUIRE(fast.size() == oracle.size());
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == oracle[i]);
    }
}

TEST_CASE("singularity decisions") {
    const NFMatrix h = hadamard_sqrt2();
    const FieldPtr f2 = h.field();
    const NFMatrix eye = NFMatrix::identity(f2, 2);
    CHECK(is_singular(eye - h));  // Hadamard has eigenvalue 1
    NFMatrix half(f2, 2);
    half.at(0, 0) = NFElement::constant(f2, rat(1, 2));
    half.at(1, 1) = NFElement::constant(f2, rat(1, 2));
    CHECK_FALSE(is_singular(eye - half));
}

TEST_CASE("is_singular agrees with a floating eigensolver on 100 random matrices") {
    const FieldPtr field = NumberField::sqrt2();
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        NFMatrix m = random_matrix(field, 4, rng);
        if (trial % 2 == 0) {
            // Force singularity: last row = sum of the others.
            for (std::size_t c = 0; c < 4; ++c)
                m.at(3, c) = m.at(0, c) + m.at(1, c) + m.at(2, c);
        }
        const double numeric = min_abs_eigenvalue(m);
        if (std::abs(numeric - 1e-8) <= 1e-8) continue;  // near threshold: exact is authoritative
        CHECK(is_singular(m) == (numeric < 1e-8));
    }
}

TEST_CASE("qma acceptance operator") {
    const FieldPtr q = NumberField::rationals();
    const NFMatrix eye2 = NFMatrix::identity(q, 2);
    NFMatrix proj0(q, 2);
    proj0.at(0, 0) = NFElement::constant(q, Rat(1));

    // U = I, both projectors |0><0|: A = |0><0| has eigenvalue 1.
    const NFMatrix a1 = qma_acceptance_operator(eye2, proj0, proj0);
    CHECK(a1 == proj0);
    CHECK(is_singular(eye2 - a1));

    // Zero acceptance projector: A = 0, no eigenvalue 1.
    const NFMatrix a2 = qma_acceptance_operator(eye2, proj0, NFMatrix(q, 2));
    CHECK(a2.is_zero());
    CHECK_FALSE(is_singular(eye2 - a2));

    NFMatrix bad = proj0;
    bad.at(0, 0) = NFElement::constant(q, Rat(2));
    CHECK_THROWS_AS(qma_acceptance_operator(eye2, bad, proj0), std::invalid_argument);
    CHECK_THROWS_AS(qma_acceptance_operator(eye2, proj0, bad), std::invalid_argument);
}

TEST_CASE("two-qubit verifier with acceptance capped at 1/2") {
    // U = H (x) I; the first qubit starts in |0>, the second carries the
    // witness; acceptance measures the first qubit as |1>. Best witness
    // accepts with probability exactly 1/2, so I - A is nonsingular.
    const FieldPtr f2 = NumberField::sqrt2();
    const NFMatrix h = hadamard_sqrt2();
    NFMatrix u(f2, 4);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t w = 0; w < 2; ++w) u.at(2 * r + w, 2 * c + w) = h.at(r, c);
    NFMatrix p_init(f2, 4), p_acc(f2, 4);
    p_init.at(0, 0) = NFElement::constant(f2, Rat(1));
    p_init.at(1, 1) = NFElement::constant(f2, Rat(1));
    p_acc.at(2, 2) = NFElement::constant(f2, Rat(1));
    p_acc.at(3, 3) = NFElement::constant(f2, Rat(1));

    const NFMatrix a = qma_acceptance_operator(u, p_init, p_acc);
    // A = (1/2) P_init exactly.
    NFMatrix expected = p_init;
    for (std::size_t i = 0; i < 4; ++i)
        expected.at(i, i) = expected.at(i, i) * rat(1, 2);
    CHECK(a == expected);
    CHECK_FALSE(is_singular(NFMatrix::identity(f2, 4) - a));

    // Floating cross-check: the largest eigenvalue of A is 1/2.
    Eigen::MatrixXcd numeric(4, 4);
    const auto embedded = a.embed();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            numeric(r, c) = embedded[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(numeric, false);
    CHECK(std::abs(es.eigenvalues().cwiseAbs().maxCoeff() - 0.5) < 1e-12);
}

TEST_CASE("etr encoder: smallest rational instance matches golden file") {
    SdfInstance inst;
    inst.dim = 1;
    inst.a = {{{SdfInstance::Entry(Rat(1))}}};
    inst.b = {SdfInstance::Entry(rat(3, 7))};
    const std::string text = encode_sdf_as_etr(inst);
    CHECK(text == read_file(std::string(NSG_TEST_DATA_DIR) + "/etr_1x1_rational.txt"));
    CHECK(text == encode_sdf_as_etr(inst));  // determinism
}

TEST_CASE("etr encoder: sqrt2 coefficient instance matches golden file") {
    SdfInstance inst;
    inst.dim = 2;
    inst.alg_coeffs = {{{Rat(-2), Rat(0), Rat(1)}, Rat(1), Rat(2)}};  // (t^2-2, 1, 2)
    inst.a = {{{SdfInstance::Entry(std::size_t{0}), SdfInstance::Entry(Rat(0))},
               {SdfInstance::Entry(Rat(0)), SdfInstance::Entry(Rat(1))}}};
    inst.b = {SdfInstance::Entry(Rat(1))};
    const std::string text = encode_sdf_as_etr(inst);
    CHECK(text == read_file(std::string(NSG_TEST_DATA_DIR) + "/etr_sqrt2.txt"));
    // The root encoding (t^2-2, 1, 2) appears as its defining constraints.
    CHECK(text.find("(= (+ (* 1 (^ a_0 2)) -2) 0)") != std::string::npos);
    CHECK(text.find("(> (- a_0 1) 0)") != std::string::npos);
    CHECK(text.find("(> (- 2 a_0) 0)") != std::string::npos);
}

TEST_CASE("etr encoder: variable count is #alg + 2 d^2") {
    SdfInstance inst;
    inst.dim = 3;
    inst.alg_coeffs = {{{Rat(-2), Rat(0), Rat(1)}, Rat(1), Rat(2)},
                       {{Rat(-3), Rat(0), Rat(1)}, Rat(1), Rat(2)}};
    std::vector<std::vector<SdfInstance::Entry>> zero(
        3, std::vector<SdfInstance::Entry>(3, SdfInstance::Entry(Rat(0))));
    inst.a = {zero};
    inst.b = {SdfInstance::Entry(Rat(0))};
    const std::string text = encode_sdf_as_etr(inst);
    const std::size_t open = text.find("(exists (") + 9;
    const std::size_t close = text.find(')', open);
    std::istringstream vars(text.substr(open, close - open));
    std::size_t count = 0;
    for (std::string tok; vars >> tok;) ++count;
    CHECK(count == 2 + 9 + 9);
}

TEST_CASE("etr encoder rejects malformed instances") {
    SdfInstance inst;
    inst.dim = 2;
    inst.a = {{{SdfInstance::Entry(Rat(1))}}};  // 1x1 matrix in a 2-dim instance
    inst.b = {SdfInstance::Entry(Rat(0))};
    CHECK_THROWS_AS(encode_sdf_as_etr(inst), std::invalid_argument);
    inst.a.clear();
    CHECK_THROWS_AS(encode_sdf_as_etr(inst), std::invalid_argument);  // |a| != |b|
}
