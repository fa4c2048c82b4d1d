#include <doctest.h>

#include <cmath>
#include <vector>

#include "qvmc/circuits.hpp"
#include "qvmc/dense.hpp"
#include "qvmc/model.hpp"
#include "qvmc/state.hpp"

using namespace qvmc;

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

AnsatzSpec simplified_spec(const InteractionGraph& g, int n_trotter = 2) {
    AnsatzSpec spec;
    spec.kind = AnsatzKind::simplified_ha;
    spec.graph = g;
    spec.n_trotter = n_trotter;
    spec.init = InitState::pairwise_singlet;
    return spec;
}

AnsatzSpec full_spec(const PauliSum& terms, int n_trotter) {
    AnsatzSpec spec;
    spec.kind = AnsatzKind::full_ha;
    spec.terms = terms;
    spec.n_trotter = n_trotter;
    spec.init = InitState::pairwise_singlet;
    return spec;
}

}  // namespace

TEST_CASE("singlet amplitudes") {
    const StateVec s2 = singlet_init(2);
    REQUIRE(s2.dim() == 4);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s2.amps[0]) < 1e-15);
    CHECK(std::abs(s2.amps[1] - cplx(r)) < 1e-15);   // qubit-0 excitation: +
    CHECK(std::abs(s2.amps[2] - cplx(-r)) < 1e-15);  // qubit-1 excitation: -
    CHECK(std::abs(s2.amps[3]) < 1e-15);

    const StateVec s4 = singlet_init(4);
    CHECK(norm(s4) == doctest::Approx(1.0).epsilon(1e-14));
    PauliSum zz(4);
    zz.add(1.0, PauliString::two(4, 0, 1, Pauli::Z));
    CHECK(std::real(matrix_element(s4, zz, s4)) == doctest::Approx(-1.0));

    CHECK_THROWS(singlet_init(3));
}

TEST_CASE("simplified ansatz: zero angles reproduce the initial state") {
    const InteractionGraph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    const AnsatzSpec spec = simplified_spec(g);
    const StateVec at_zero = prepare_simplified(spec, 0.0, 0.0);
    const StateVec init = singlet_init(4);
    for (std::size_t i = 0; i < init.dim(); ++i)
        CHECK(std::abs(at_zero.amps[i] - init.amps[i]) < 1e-14);
}

TEST_CASE("simplified ansatz: unit norm and 2pi periodicity up to phase") {
    const InteractionGraph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    const AnsatzSpec spec = simplified_spec(g);
    const double txy = 1.137, tz = 4.642;

    const StateVec base = prepare_simplified(spec, txy, tz);
    CHECK(norm(base) == doctest::Approx(1.0).epsilon(1e-12));

    // Each angle shifted by 2pi only multiplies the state by a global sign.
    CHECK(phase_aligned_close(prepare_simplified(spec, txy + kTwoPi, tz), base, 1e-10));
    CHECK(phase_aligned_close(prepare_simplified(spec, txy, tz + kTwoPi), base, 1e-10));
}

TEST_CASE("simplified ansatz matches a dense gate-by-gate product") {
    const InteractionGraph g = make_graph(2, {{0, 1}});
    const AnsatzSpec spec = simplified_spec(g, 1);
    const double txy = 0.83, tz = 2.19;

    PauliSum xx(2), yy(2), zz(2);
    xx.add(1.0, PauliString::two(2, 0, 1, Pauli::X));
    yy.add(1.0, PauliString::two(2, 0, 1, Pauli::Y));
    zz.add(1.0, PauliString::two(2, 0, 1, Pauli::Z));
    const DenseMatrix r = dense_expm_hermitian(zz, cplx(0.0, -tz / 2.0)) *
                          dense_expm_hermitian(yy, cplx(0.0, -txy / 2.0)) *
                          dense_expm_hermitian(xx, cplx(0.0, -txy / 2.0));
    const Eigen::VectorXcd want = r * to_eigen(singlet_init(2));

    const StateVec got = prepare_simplified(spec, txy, tz);
    for (std::size_t i = 0; i < got.dim(); ++i)
        CHECK(std::abs(got.amps[i] - want(static_cast<long>(i))) < 1e-13);
}

TEST_CASE("full ansatz: redundant t never enters the circuit") {
    const PauliSum h = heisenberg(make_graph(2, {{0, 1}}), 1.0 / 3.0);
    const AnsatzSpec spec = full_spec(h, 2);
    REQUIRE(spec.n_params() == 1 + 2 * 3);

    CircuitParams theta(spec.n_params(), 0.0);
    theta[1] = 0.4;
    theta[3] = -0.9;
    theta[6] = 1.2;

    CircuitParams theta_t = theta;
    theta_t[0] = 7.3;
    const StateVec a = prepare_full_ha(spec, theta);
    const StateVec b = prepare_full_ha(spec, theta_t);
    CHECK(a.amps == b.amps);  // bit-identical: t is ignored, not cancelled

    // All-zero rotations return the initial state.
    const StateVec at_zero = prepare_full_ha(spec, CircuitParams(spec.n_params(), 0.0));
    const StateVec init = singlet_init(2);
    for (std::size_t i = 0; i < init.dim(); ++i)
        CHECK(std::abs(at_zero.amps[i] - init.amps[i]) < 1e-14);

    CHECK_THROWS(prepare_full_ha(spec, CircuitParams(3, 0.0)));
}

TEST_CASE("full ansatz approximates the exact evolution at small steps") {
    // Needs overlapping edges: on a single edge the three Heisenberg terms
    // commute and the product formula would be exact at any step size.
    const PauliSum h = heisenberg(make_graph(4, {{0, 1}, {1, 2}, {2, 3}}), 1.0 / 3.0);
    const StateVec init = singlet_init(4);

    const double t_total = 0.5;
    double prev_err = 1.0;
    for (const int n_t : {4, 8, 16}) {
        const AnsatzSpec spec = full_spec(h, n_t);
        const double dt = t_total / n_t;
        CircuitParams theta(spec.n_params(), 0.0);
        for (int i = 0; i < n_t; ++i)
            for (std::size_t j = 0; j < h.size(); ++j)
                theta[1 + i * h.size() + j] = h.term(j).coeff * dt;

        const StateVec got = prepare_full_ha(spec, theta);
        const Eigen::VectorXcd want =
            dense_expm_hermitian(h, cplx(0.0, -t_total)) * to_eigen(init);
        double err = 0.0;
        for (std::size_t i = 0; i < got.dim(); ++i)
            err = std::max(err, std::abs(got.amps[i] - want(static_cast<long>(i))));

        // First-order Trotter: error shrinks roughly linearly in dt.
        CHECK(err < prev_err);
        CHECK(err < 3.0 * t_total * t_total / n_t);
        prev_err = err;
    }
}

TEST_CASE("statevector gradient norms") {
    const PauliSum h = heisenberg(make_graph(2, {{0, 1}}), 1.0 / 3.0);
    const AnsatzSpec spec = full_spec(h, 1);
    const std::size_t K = spec.n_params();

    CircuitParams theta(K, 0.0);
    theta[1] = 0.3;
    theta[2] = -0.2;
    theta[3] = 0.9;

    // Along the redundant t the state does not move at all.
    std::vector<double> dir(K, 0.0);
    dir[0] = 1.0;
    CHECK(gradient_norm_check(spec, theta, dir) == doctest::Approx(0.0).epsilon(1e-9));

    // A single full-angle rotation parameter moves the state at unit speed.
    dir[0] = 0.0;
    dir[2] = 1.0;
    CHECK(gradient_norm_check(spec, theta, dir) == doctest::Approx(1.0).epsilon(1e-6));

    // A generic unit direction is bounded by sqrt(#active parameters).
    std::vector<double> diag(K, 1.0 / std::sqrt(static_cast<double>(K)));
    CHECK(gradient_norm_check(spec, theta, diag) <= std::sqrt(static_cast<double>(K)) + 1e-6);
}

TEST_CASE("ansatz spec validation and dispatch") {
    AnsatzSpec bad = simplified_spec(make_graph(2, {{0, 1}}));
    bad.n_trotter = 0;
    CHECK_THROWS(bad.validate());

    const InteractionGraph g = make_graph(2, {{0, 1}});
    const AnsatzSpec spec = simplified_spec(g);
    CHECK(spec.n_qubits() == 2);
    CHECK(spec.n_params() == 2);

    const StateVec via_dispatch = prepare(spec, {0.9, 1.7});
    const StateVec direct = prepare_simplified(spec, 0.9, 1.7);
    CHECK(via_dispatch.amps == direct.amps);
}

TEST_CASE("all-zero initial state variant") {
    AnsatzSpec spec = simplified_spec(make_graph(2, {{0, 1}}));
    spec.init = InitState::all_zero;
    const StateVec s = initial_state(spec);
    CHECK(s.amps[0] == cplx(1.0));
}
