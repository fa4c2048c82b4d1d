#include <doctest.h>

#include <qvmc/dense.hpp>
#include <qvmc/series.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace qvmc;

namespace {

PauliSum single_qubit_xz(double hx, double hz) {
    PauliSum h(1);
    h.add(hx, PauliString::from_word("X"));
    h.add(hz, PauliString::from_word("Z"));
    return h;
}

}  // namespace

TEST_CASE("sorted product of a single index is the term itself") {
    const PauliSum h = single_qubit_xz(0.5, 0.5);
    const auto d = sorted_product_decomposition({1}, h);
    CHECK(d.m == std::vector<int>{1, 0});
    CHECK(d.sign == 1);
    CHECK(d.word == h.term(0).word);
    CHECK(d.word_phase == cplx(1.0, 0.0));
}

TEST_CASE("commuting terms reorder with positive sign") {
    PauliSum h(2);
    h.add(0.3, PauliString::from_word("XI"));
    h.add(0.7, PauliString::from_word("IX"));
    for (const std::vector<int>& l :
         {std::vector<int>{1, 2}, std::vector<int>{2, 1}, std::vector<int>{2, 1, 2}}) {
        const auto d = sorted_product_decomposition(l, h);
        CHECK(d.sign == 1);
    }
}

TEST_CASE("anticommuting pair picks up the reordering sign") {
    const PauliSum h = single_qubit_xz(0.5, 0.5);
    // l = (2,1): sigma_1 sigma_2 = XZ = -iY, sorted product ZX = +iY.
    const auto d = sorted_product_decomposition({2, 1}, h);
    CHECK(d.sign == -1);
    CHECK(d.m == std::vector<int>{1, 1});
    CHECK(d.word == PauliString::from_word("Y"));
    CHECK(std::abs(d.word_phase - cplx(0.0, 1.0)) < 1e-15);
    // The forward order (1,2) gives the sorted product directly.
    const auto fwd = sorted_product_decomposition({1, 2}, h);
    CHECK(fwd.sign == 1);
}

TEST_CASE("decomposition reconstructs the tuple-ordered product") {
    // S(l) = sigma_{l_k} ... sigma_{l_1} must equal sign * word_phase * word.
    PauliSum h(2);
    h.add(1.0, PauliString::from_word("XZ"));
    h.add(1.0, PauliString::from_word("YI"));
    h.add(1.0, PauliString::from_word("ZY"));
    const std::vector<int> l = {3, 1, 2, 1};
    const auto d = sorted_product_decomposition(l, h);
    DenseMatrix s = DenseMatrix::Identity(4, 4);
    for (int li : l) s = dense_matrix(h.term(static_cast<std::size_t>(li - 1)).word) * s;
    const DenseMatrix t =
        static_cast<double>(d.sign) * d.word_phase * dense_matrix(d.word);
    CHECK((s - t).norm() < 1e-12);
    CHECK(d.m == std::vector<int>{2, 1, 1});
}

TEST_CASE("index range and size validation") {
    const PauliSum h = single_qubit_xz(0.5, 0.5);
    CHECK_THROWS_AS(sorted_product_decomposition({0}, h), std::invalid_argument);
    CHECK_THROWS_AS(sorted_product_decomposition({3}, h), std::invalid_argument);
    CHECK_THROWS_AS(evolution_series_residual(h, 0.1, 1), std::invalid_argument);
}

TEST_CASE("series residual vanishes at t = 0") {
    const PauliSum h = single_qubit_xz(0.5, 0.5);
    CHECK(evolution_series_residual(h, 0.0, 3) < 1e-14);
}

TEST_CASE("commuting Hamiltonian reconstructs exactly at any truncation") {
    PauliSum h(2);
    h.add(0.3, PauliString::from_word("XI"));
    h.add(0.7, PauliString::from_word("IX"));
    CHECK(evolution_series_residual(h, 0.4, 2) < 1e-12);
    CHECK(evolution_series_residual(h, 1.3, 4) < 1e-12);
}

TEST_CASE("non-commuting residual scales like t^6 at k_max = 5") {
    const PauliSum h = single_qubit_xz(0.5, 0.5);
    const double r1 = evolution_series_residual(h, 0.1, 5);
    const double r2 = evolution_series_residual(h, 0.05, 5);
    CHECK(r1 > 0.0);
    CHECK(r2 > 0.0);
    // Truncating after k_max = 5 leaves an O(t^6) tail: halving t must cut
    // the residual by at least 2^5.
    CHECK(r1 / r2 >= 32.0);
    // And the magnitude is consistent with a modest constant in C t^6.
    CHECK(r1 < 1e-4);
}

TEST_CASE("deeper truncation never increases the residual") {
    const PauliSum h = single_qubit_xz(0.7, 0.3);
    const double shallow = evolution_series_residual(h, 0.2, 2);
    const double deep = evolution_series_residual(h, 0.2, 5);
    CHECK(deep <= shallow + 1e-12);
}
