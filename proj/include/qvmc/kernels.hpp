#pragma once

#include <complex>
#include <cstddef>

#include "qvmc/pauli.hpp"

namespace qvmc::kern {

// Low-level statevector kernels. `serial` holds the naive reference
// implementations (plain loops, straight accumulation) kept for testing and
// benchmarking; the unqualified entry points are the dispatched versions:
// OpenMP-parallel element loops plus fixed-block reductions, which produce
// bit-identical results for any worker count.

using Masks = PauliString::Masks;

namespace serial {
void apply_pauli(const Masks& m, const cplx* in, cplx* out, std::size_t dim);
void apply_exp_pauli(const Masks& m, double angle, const cplx* in, cplx* out, std::size_t dim);
cplx inner(const cplx* a, const cplx* b, std::size_t dim);
// <a| P |b>
cplx pauli_bilinear(const cplx* a, const Masks& m, const cplx* b, std::size_t dim);
}  // namespace serial

void apply_pauli(const Masks& m, const cplx* in, cplx* out, std::size_t dim);
void apply_exp_pauli(const Masks& m, double angle, const cplx* in, cplx* out, std::size_t dim);
cplx inner(const cplx* a, const cplx* b, std::size_t dim);
cplx pauli_bilinear(const cplx* a, const Masks& m, const cplx* b, std::size_t dim);

}  // namespace qvmc::kern
