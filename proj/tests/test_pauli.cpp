#include <doctest.h>

#include <complex>

#include "qvmc/dense.hpp"
#include "qvmc/pauli.hpp"

using namespace qvmc;

namespace {
const cplx kI(0.0, 1.0);
}

TEST_CASE("pauli word round-trip and accessors") {
    const PauliString p = PauliString::from_word("XIZY");
    CHECK(p.n() == 4);
    CHECK(p.letter(0) == Pauli::X);
    CHECK(p.letter(1) == Pauli::I);
    CHECK(p.letter(2) == Pauli::Z);
    CHECK(p.letter(3) == Pauli::Y);
    CHECK(p.word() == "XIZY");
    CHECK_FALSE(p.is_identity());
    CHECK(PauliString::identity(3).is_identity());
    CHECK(PauliString::single(3, 1, Pauli::Y).word() == "IYI");
    CHECK(PauliString::two(4, 0, 2, Pauli::Z).word() == "ZIZI");
    CHECK_THROWS(PauliString::from_word("XQ"));
}

TEST_CASE("single-qubit products carry the cyclic phases") {
    const PauliString x = PauliString::from_word("X");
    const PauliString y = PauliString::from_word("Y");
    const PauliString z = PauliString::from_word("Z");

    auto xy = multiply(x, y);
    CHECK(xy.word.word() == "Z");
    CHECK(xy.phase == kI);

    auto yx = multiply(y, x);
    CHECK(yx.word.word() == "Z");
    CHECK(yx.phase == -kI);

    auto zz = multiply(z, z);
    CHECK(zz.word.is_identity());
    CHECK(zz.phase == cplx(1.0));

    auto zx = multiply(z, x);
    CHECK(zx.word.word() == "Y");
    CHECK(zx.phase == kI);
}

TEST_CASE("multi-qubit product matches the dense matrix product") {
    const PauliString a = PauliString::from_word("XYZ");
    const PauliString b = PauliString::from_word("YYX");
    const PauliProduct ab = multiply(a, b);

    const DenseMatrix lhs = dense_matrix(a) * dense_matrix(b);
    const DenseMatrix rhs = ab.phase * dense_matrix(ab.word);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("masks reproduce the dense action") {
    const PauliString p = PauliString::from_word("YZX");
    const auto m = p.masks();
    // qubit 0 = Y (flip+sign), qubit 1 = Z (sign), qubit 2 = X (flip)
    CHECK(m.flip == 0b101);
    CHECK(m.sign == 0b011);
    CHECK(m.y_phase == kI);
}

TEST_CASE("pauli sum bookkeeping") {
    PauliSum s(2);
    s.add(0.5, PauliString::from_word("XX"));
    s.add(-1.5, PauliString::from_word("ZI"));
    CHECK(s.size() == 2);
    CHECK(s.coeff_one_norm() == doctest::Approx(2.0));

    const PauliSum t = s.scaled(2.0);
    CHECK(t.term(0).coeff == doctest::Approx(1.0));
    CHECK(t.term(1).coeff == doctest::Approx(-3.0));

    // Shift appends (or merges) an identity term: H - shift * I.
    const PauliSum shifted = s.shifted(0.25);
    CHECK(shifted.coeff_one_norm() == doctest::Approx(2.25));
    const DenseMatrix diff =
        dense_matrix(shifted) - (dense_matrix(s) - 0.25 * DenseMatrix::Identity(4, 4));
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("identity helper") {
    const PauliSum one = PauliSum::identity(2, 3.0);
    CHECK(one.size() == 1);
    CHECK(one.term(0).word.is_identity());
    const DenseMatrix m = dense_matrix(one);
    CHECK((m - 3.0 * DenseMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}
