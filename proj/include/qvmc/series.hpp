#pragma once

#include <vector>

#include "qvmc/pauli.hpp"

namespace qvmc {

// Support for the series-form prior guiding function: writing the time
// evolution exp(-iHt) of H = sum_j h_j sigma_j as a weighted combination of
// product-rotation circuits R(omega) supported on delta points.

// For an index tuple l = (l_1..l_k) over 1..N_H (l_1 applied first):
//   m[j-1]   counts occurrences of j in l,
//   sign     = +-1 relating the tuple-ordered product S = sigma_{l_k}..sigma_{l_1}
//              to the index-sorted product T = sigma_{N_H}^{m_N}..sigma_1^{m_1},
//              S = sign * T (they share the same Pauli multiset, so the
//              relative phase is real),
//   word / word_phase  give T explicitly: T = word_phase * word.
struct SortedProductDecomposition {
    std::vector<int> m;
    int sign = 1;
    PauliString word;
    cplx word_phase = 1.0;
};

SortedProductDecomposition sorted_product_decomposition(const std::vector<int>& l,
                                                        const PauliSum& H);

// Operator-norm distance between exp(-iHt) and the series reconstruction
// truncated at order k_max. The k = 0 "backbone" term is the product circuit
// at omega_j = h_j t; correction terms live on omega_j = m_j pi/2 and carry
// the factor (sign - 1), so they vanish identically when all sigma_j commute.
// Dense-matrix evaluation; intended for n <= 3, N_H <= 3, k_max <= 6.
double evolution_series_residual(const PauliSum& H, double t, int k_max);

}  // namespace qvmc
