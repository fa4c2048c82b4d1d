#include "qvmc/state.hpp"

#include <cmath>
#include <stdexcept>

#include "qvmc/kernels.hpp"

namespace qvmc {

namespace {

void require_same_n(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

StateVec StateVec::zero_state(std::size_t n) { return basis(n, 0); }

StateVec StateVec::basis(std::size_t n, std::uint64_t idx) {
    std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0});
    amps.at(idx) = 1.0;
    return StateVec(n, std::move(amps));
}

double norm(const StateVec& s) {
    const cplx n2 = kern::inner(s.amps.data(), s.amps.data(), s.dim());
    return std::sqrt(n2.real());
}

StateVec apply_pauli(const PauliString& p, const StateVec& s) {
    require_same_n(p.n(), s.n, "apply_pauli");
    StateVec out(s.n, std::vector<cplx>(s.dim()), s.normalized);
    kern::apply_pauli(p.masks(), s.amps.data(), out.amps.data(), s.dim());
    return out;
}

StateVec apply_exp_pauli(const PauliString& p, double angle, RotationConvention convention,
                         const StateVec& s) {
    require_same_n(p.n(), s.n, "apply_exp_pauli");
    const double a = convention == RotationConvention::half_angle ? angle / 2.0 : angle;
    StateVec out(s.n, std::vector<cplx>(s.dim()), s.normalized);
    kern::apply_exp_pauli(p.masks(), a, s.amps.data(), out.amps.data(), s.dim());
    return out;
}

cplx inner(const StateVec& a, const StateVec& b) {
    require_same_n(a.n, b.n, "inner");
    return kern::inner(a.amps.data(), b.amps.data(), a.dim());
}

cplx matrix_element(const StateVec& a, const PauliSum& O, const StateVec& b) {
    require_same_n(a.n, O.n(), "matrix_element");
    require_same_n(O.n(), b.n, "matrix_element");
    cplx acc = 0.0;
    for (const auto& term : O.terms())
        acc += term.coeff * kern::pauli_bilinear(a.amps.data(), term.word.masks(), b.amps.data(),
                                                 a.dim());
    return acc;
}

double phase_aligned_distance(const StateVec& a, const StateVec& b) {
    require_same_n(a.n, b.n, "phase_aligned_distance");
    const cplx ov = inner(a, b);
    // Align b by the phase of <a|b>; with zero overlap there is no alignment,
    // fall back to the raw difference.
    const double mag = std::abs(ov);
    const cplx rot = mag > 0.0 ? std::conj(ov) / mag : cplx{1.0};
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        worst = std::max(worst, std::abs(a.amps[i] - rot * b.amps[i]));
    return worst;
}

bool phase_aligned_close(const StateVec& a, const StateVec& b, double tol) {
    return phase_aligned_distance(a, b) <= tol;
}

}  // namespace qvmc
