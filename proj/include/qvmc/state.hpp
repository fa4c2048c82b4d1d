#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qvmc/pauli.hpp"

namespace qvmc {

// Dense statevector over n qubits (qubit 0 = least-significant index bit).
// States produced by circuit preparation are unit-norm; anything that leaves
// a state unnormalised must say so via the flag.
struct StateVec {
    std::size_t n = 0;
    std::vector<cplx> amps;
    bool normalized = true;

    StateVec() = default;
    StateVec(std::size_t n_qubits, std::vector<cplx> amplitudes, bool is_normalized = true)
        : n(n_qubits), amps(std::move(amplitudes)), normalized(is_normalized) {}

    std::size_t dim() const { return amps.size(); }

    static StateVec zero_state(std::size_t n);              // |0...0>
    static StateVec basis(std::size_t n, std::uint64_t idx); // |idx>
};

double norm(const StateVec& s);

// p |s> ; input untouched.
StateVec apply_pauli(const PauliString& p, const StateVec& s);

enum class RotationConvention { half_angle, full_angle };

// exp(-i P angle) |s> (full-angle) or exp(-i P angle / 2) |s> (half-angle),
// computed in one pass via P^2 = I as cos * s - i sin * (P s).
StateVec apply_exp_pauli(const PauliString& p, double angle, RotationConvention convention,
                         const StateVec& s);

// <a|b>, conjugating a.
cplx inner(const StateVec& a, const StateVec& b);

// <a| O |b> = sum_j h_j <a| sigma_j |b>.
cplx matrix_element(const StateVec& a, const PauliSum& O, const StateVec& b);

// Equality up to global phase: aligns b's phase against a, then compares
// amplitudes. Returns the max per-amplitude deviation after alignment.
double phase_aligned_distance(const StateVec& a, const StateVec& b);
bool phase_aligned_close(const StateVec& a, const StateVec& b, double tol);

}  // namespace qvmc
