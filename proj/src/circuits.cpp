#include "qvmc/circuits.hpp"

#include <cmath>
#include <stdexcept>

namespace qvmc {

std::size_t AnsatzSpec::n_qubits() const {
    return kind == AnsatzKind::simplified_ha ? static_cast<std::size_t>(graph.n_vertices)
                                             : terms.n();
}

std::size_t AnsatzSpec::n_params() const {
    return kind == AnsatzKind::simplified_ha
               ? 2
               : 1 + static_cast<std::size_t>(n_trotter) * terms.size();
}

void AnsatzSpec::validate() const {
    if (n_trotter < 1) throw std::invalid_argument("ansatz: n_trotter must be >= 1");
    if (kind == AnsatzKind::simplified_ha) {
        graph.validate();
        if (graph.edges.empty()) throw std::invalid_argument("ansatz: graph has no edges");
    } else {
        if (terms.empty()) throw std::invalid_argument("ansatz: empty term list");
    }
    if (init == InitState::pairwise_singlet && n_qubits() % 2 != 0)
        throw std::invalid_argument("ansatz: singlet initial state needs an even qubit count");
}

StateVec singlet_init(std::size_t n) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("singlet_init: qubit count must be even and positive");
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> amps(dim, cplx{0.0});
    const double w = 1.0 / std::sqrt(2.0);
    // Amplitude over basis index x factorizes per qubit pair (2k, 2k+1):
    // pattern 01 (qubit 2k set) -> +w, pattern 10 -> -w, else 0.
    for (std::uint64_t x = 0; x < dim; ++x) {
        double a = 1.0;
        for (std::size_t k = 0; k < n / 2; ++k) {
            const unsigned pair = (x >> (2 * k)) & 3u;
            if (pair == 1)
                a *= w;
            else if (pair == 2)
                a *= -w;
            else {
                a = 0.0;
                break;
            }
        }
        if (a != 0.0) amps[x] = a;
    }
    return StateVec(n, std::move(amps));
}

StateVec initial_state(const AnsatzSpec& spec) {
    return spec.init == InitState::pairwise_singlet ? singlet_init(spec.n_qubits())
                                                    : StateVec::zero_state(spec.n_qubits());
}

StateVec prepare_simplified(const AnsatzSpec& spec, double theta_xy, double theta_z) {
    if (spec.kind != AnsatzKind::simplified_ha)
        throw std::invalid_argument("prepare_simplified: wrong ansatz kind");
    spec.validate();
    const std::size_t n = spec.n_qubits();
    StateVec s = initial_state(spec);
    for (int rep = 0; rep < spec.n_trotter; ++rep) {
        for (const auto& [i, j] : spec.graph.edges) {
            s = apply_exp_pauli(PauliString::two(n, i, j, Pauli::X), theta_xy,
                                RotationConvention::half_angle, s);
            s = apply_exp_pauli(PauliString::two(n, i, j, Pauli::Y), theta_xy,
                                RotationConvention::half_angle, s);
            s = apply_exp_pauli(PauliString::two(n, i, j, Pauli::Z), theta_z,
                                RotationConvention::half_angle, s);
        }
    }
    return s;
}

StateVec prepare_full_ha(const AnsatzSpec& spec, const CircuitParams& theta) {
    if (spec.kind != AnsatzKind::full_ha)
        throw std::invalid_argument("prepare_full_ha: wrong ansatz kind");
    spec.validate();
    if (theta.size() != spec.n_params())
        throw std::invalid_argument("prepare_full_ha: parameter length mismatch");
    StateVec s = initial_state(spec);
    const std::size_t n_h = spec.terms.size();
    // theta[0] is the redundant scalar t; rotation angles start at index 1.
    for (int step = 0; step < spec.n_trotter; ++step)
        for (std::size_t j = 0; j < n_h; ++j)
            s = apply_exp_pauli(spec.terms.term(j).word, theta[1 + step * n_h + j],
                                RotationConvention::full_angle, s);
    return s;
}

StateVec prepare(const AnsatzSpec& spec, const CircuitParams& theta) {
    if (spec.kind == AnsatzKind::simplified_ha) {
        if (theta.size() != 2)
            throw std::invalid_argument("prepare: simplified ansatz takes 2 parameters");
        return prepare_simplified(spec, theta[0], theta[1]);
    }
    return prepare_full_ha(spec, theta);
}

double gradient_norm_check(const AnsatzSpec& spec, const CircuitParams& theta,
                           const std::vector<double>& direction) {
    if (direction.size() != theta.size())
        throw std::invalid_argument("gradient_norm_check: direction length mismatch");
    constexpr double h = 1e-5;
    CircuitParams plus = theta, minus = theta;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        plus[k] += h * direction[k];
        minus[k] -= h * direction[k];
    }
    const StateVec sp = prepare(spec, plus);
    const StateVec sm = prepare(spec, minus);
    double acc = 0.0;
    for (std::size_t i = 0; i < sp.dim(); ++i) {
        const cplx d = (sp.amps[i] - sm.amps[i]) / (2.0 * h);
        acc += std::norm(d);
    }
    return std::sqrt(acc);
}

}  // namespace qvmc
