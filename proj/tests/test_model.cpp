#include <doctest.h>

#include <cstdio>
#include <string>

#include "qvmc/circuits.hpp"
#include "qvmc/dense.hpp"
#include "qvmc/model.hpp"
#include "qvmc/rng.hpp"
#include "qvmc/state.hpp"

using namespace qvmc;

namespace {

StateVec random_state(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> amps(std::size_t{1} << n);
    double s = 0.0;
    for (auto& a : amps) {
        a = cplx(rng.normal(), rng.normal());
        s += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(s);
    return {n, std::move(amps)};
}

std::string temp_path(const char* name) {
    return std::string("/tmp/qvmc-test-") + name;
}

}  // namespace

TEST_CASE("graph validation") {
    CHECK_THROWS(make_graph(3, {{0, 0}}));          // self-loop
    CHECK_THROWS(make_graph(3, {{0, 1}, {1, 0}}));  // duplicate after normalization
    CHECK_THROWS(make_graph(2, {{0, 2}}));          // out of range
    const InteractionGraph g = make_graph(3, {{2, 1}, {1, 0}});
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(g.connected());
    CHECK_FALSE(make_graph(4, {{0, 1}, {2, 3}}).connected());
}

TEST_CASE("graph file round-trip") {
    const InteractionGraph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    const std::string path = temp_path("graph.txt");
    save_graph(g, path);
    const InteractionGraph r = load_graph(path);
    CHECK(r.n_vertices == 4);
    CHECK(r.edges == g.edges);
    std::remove(path.c_str());
    CHECK_THROWS(load_graph("/nonexistent/graph.txt"));
}

TEST_CASE("heisenberg term construction") {
    const InteractionGraph pair = make_graph(2, {{0, 1}});
    const PauliSum h2 = heisenberg(pair, 1.0);
    CHECK(h2.size() == 3);
    CHECK(h2.coeff_one_norm() == doctest::Approx(3.0));

    const InteractionGraph path3 = make_graph(3, {{0, 1}, {1, 2}});
    CHECK(heisenberg(path3, 1.0).size() == 6);

    CHECK_THROWS(heisenberg(make_graph(2, {}), 1.0));
}

TEST_CASE("two-spin spectrum: singlet at -3, triplet at +1") {
    const PauliSum h = heisenberg(make_graph(2, {{0, 1}}), 1.0);
    const SpectrumReport rep = exact_spectrum(h);
    REQUIRE(rep.eigenvalues.size() == 4);
    CHECK(rep.eigenvalues[0] == doctest::Approx(-3.0));
    CHECK(rep.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(rep.eigenvalues[3] == doctest::Approx(1.0));
    CHECK(rep.ground_energy == doctest::Approx(-3.0));
    CHECK(rep.gap == doctest::Approx(4.0));
    CHECK(rep.spectral_norm == doctest::Approx(3.0));
}

TEST_CASE("normalize_spectral") {
    const PauliSum h = heisenberg(make_graph(2, {{0, 1}}), 1.0);
    const auto [hn, scale] = normalize_spectral(h);
    CHECK(scale == doctest::Approx(3.0));
    const SpectrumReport rep = exact_spectrum(hn);
    CHECK(rep.ground_energy == doctest::Approx(-1.0));
    CHECK(rep.gap == doctest::Approx(4.0 / 3.0));
    CHECK(rep.spectral_norm == doctest::Approx(1.0).epsilon(1e-8));

    // Idempotence: a second normalization is a no-op.
    const auto [hnn, scale2] = normalize_spectral(hn);
    CHECK(scale2 == doctest::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS(normalize_spectral(PauliSum(2)));
}

TEST_CASE("single-qubit Z spectrum") {
    PauliSum h(1);
    h.add(1.0, PauliString::from_word("Z"));
    const SpectrumReport rep = exact_spectrum(h);
    CHECK(rep.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(rep.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(rep.gap == doctest::Approx(2.0));
}

TEST_CASE("exact_spectrum input guards") {
    CHECK_THROWS(exact_spectrum(PauliSum(2)));  // empty sum
}

TEST_CASE("ground-space overlap") {
    const PauliSum h = heisenberg(make_graph(2, {{0, 1}}), 1.0);
    const SpectrumReport rep = exact_spectrum(h);

    // The pairwise singlet is the two-spin ground state.
    CHECK(overlap_pg(singlet_init(2), rep) == doctest::Approx(1.0));
    CHECK(overlap_pg(rep.ground_state(), rep) == doctest::Approx(1.0));
    // |00> sits in the triplet space.
    CHECK(overlap_pg(StateVec::zero_state(2), rep) == doctest::Approx(0.0));

    // Random states stay inside [0, 1].
    for (std::uint64_t s = 0; s < 5; ++s) {
        const double p = overlap_pg(random_state(2, 100 + s), rep);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("heisenberg commutes with the global spin flip") {
    const InteractionGraph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const PauliSum h = heisenberg(g, 0.7);
    const PauliString flip = PauliString::from_word("XXXX");
    const StateVec s = random_state(4, 42);

    // [H, X^n] |s> = H X |s> - X H |s|, term by term through the kernels.
    const StateVec xs = apply_pauli(flip, s);
    const Eigen::VectorXcd lhs = dense_matrix(h) * to_eigen(xs);
    const Eigen::VectorXcd rhs = dense_matrix(flip) * (dense_matrix(h) * to_eigen(s));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("hamiltonian CSV round-trip") {
    const PauliSum h = heisenberg(make_graph(3, {{0, 1}, {1, 2}}), 1.0 / 3.0);
    const std::string path = temp_path("hamiltonian.csv");
    save_hamiltonian_csv(h, path);
    const PauliSum r = load_hamiltonian_csv(path);
    REQUIRE(r.size() == h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        CHECK(r.term(j).coeff == doctest::Approx(h.term(j).coeff).epsilon(1e-12));
        CHECK(r.term(j).word == h.term(j).word);
    }
    std::remove(path.c_str());
}

TEST_CASE("shipped 8-vertex model: file and config default agree, ground energy -1") {
    // data/graph8.txt is the default experiment model; the grid-search and
    // sweep behavior on it is covered by the acceptance binary.
    const InteractionGraph g = load_graph("data/graph8.txt");
    CHECK(g.n_vertices == 8);
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {1, 3}, {2, 3},
                                                      {3, 4}, {4, 5}, {6, 7}});
    const auto [h, scale] = normalize_spectral(heisenberg(g, 1.0));
    const SpectrumReport rep = exact_spectrum(h);
    CHECK(rep.ground_energy == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(rep.gap > 0.0);
}
