#pragma once

#include <vector>

#include "qvmc/model.hpp"
#include "qvmc/pauli.hpp"
#include "qvmc/state.hpp"

namespace qvmc {

// Flat parameter vector theta. For the simplified ansatz this is
// (theta_XY, theta_Z); for the full Hamiltonian ansatz it is
// (t, omega_{1,1} .. omega_{N_T,N_H}) with the leading t never entering the
// circuit (a deliberately redundant coordinate).
using CircuitParams = std::vector<double>;

enum class AnsatzKind { simplified_ha, full_ha };
enum class InitState { pairwise_singlet, all_zero };

struct AnsatzSpec {
    AnsatzKind kind = AnsatzKind::simplified_ha;
    InteractionGraph graph;  // simplified ansatz: one layer of edge rotations
    PauliSum terms;          // full ansatz: per-term rotations, term order fixed
    int n_trotter = 1;
    InitState init = InitState::pairwise_singlet;

    std::size_t n_qubits() const;
    std::size_t n_params() const;  // simplified: 2; full: 1 + N_T * N_H
    void validate() const;
};

// Pairwise singlet |Phi>_{0,1} (x) |Phi>_{2,3} (x) ...; each pair carries
// amplitude +1/sqrt(2) on the qubit-(2k) excitation and -1/sqrt(2) on the
// qubit-(2k+1) excitation.
StateVec singlet_init(std::size_t n);

StateVec initial_state(const AnsatzSpec& spec);

// [R(theta)]^{N_T} applied to the singlet state;
// R = prod_edges exp(-i ZZ theta_Z / 2) exp(-i YY theta_XY / 2) exp(-i XX theta_XY / 2),
// edges ascending lexicographic, XX applied first within an edge.
StateVec prepare_simplified(const AnsatzSpec& spec, double theta_xy, double theta_z);

// R(omega_{N_T}) ... R(omega_1) |Psi0> with full-angle rotations
// R(omega_i) = exp(-i sigma_{N_H} omega_{i,N_H}) ... exp(-i sigma_1 omega_{i,1});
// sigma_1 is applied first. theta[0] (the redundant t) is ignored.
StateVec prepare_full_ha(const AnsatzSpec& spec, const CircuitParams& theta);

// Dispatch on spec.kind.
StateVec prepare(const AnsatzSpec& spec, const CircuitParams& theta);

// l2 norm of the central finite-difference directional derivative of the
// statevector (step 1e-5) along a unit direction in parameter space.
double gradient_norm_check(const AnsatzSpec& spec, const CircuitParams& theta,
                           const std::vector<double>& direction);

}  // namespace qvmc
