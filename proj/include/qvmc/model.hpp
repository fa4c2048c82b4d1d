#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qvmc/pauli.hpp"
#include "qvmc/state.hpp"

namespace qvmc {

// Undirected interaction graph. Edges are stored normalized (i < j) and
// sorted ascending lexicographically; this is also the order in which the
// circuit layer applies its per-edge rotations.
struct InteractionGraph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    void validate() const;  // throws on self-loops, duplicates, bad indices
    bool connected() const;
};

InteractionGraph make_graph(int n_vertices, std::vector<std::pair<int, int>> edges);

// Plain-text graph file: first line n, then one "i j" line per edge.
InteractionGraph load_graph(const std::string& path);
void save_graph(const InteractionGraph& g, const std::string& path);

// Exact-diagonalization summary. Degenerate ground levels (grouped at
// tolerance 1e-9) are kept together so overlaps sum over the full ground
// space; the gap is measured to the first distinct level above.
struct SpectrumReport {
    std::vector<double> eigenvalues;     // ascending
    std::vector<StateVec> ground_space;  // orthonormal basis of the E_g level
    double ground_energy = 0.0;
    double gap = 0.0;
    double spectral_norm = 0.0;

    const StateVec& ground_state() const { return ground_space.front(); }
};

// J * sum_edges (XX + YY + ZZ); term order follows the sorted edge list with
// XX, YY, ZZ per edge.
PauliSum heisenberg(const InteractionGraph& g, double J);

// H / ||H||; returns the scaled operator and the scale ||H||. Spectral norm
// by dense diagonalization for n <= 12, power iteration above.
std::pair<PauliSum, double> normalize_spectral(const PauliSum& H);

double spectral_norm(const PauliSum& H);

// Dense Hermitian eigendecomposition (n <= 12).
SpectrumReport exact_spectrum(const PauliSum& H);

// |<Psi_g|Psi0>|^2, summed over the degenerate ground space.
double overlap_pg(const StateVec& psi0, const SpectrumReport& report);

// CSV export/import, one "coefficient,pauli-word" row per term
// (word is little-endian: leftmost letter = qubit 0).
void save_hamiltonian_csv(const PauliSum& H, const std::string& path);
PauliSum load_hamiltonian_csv(const std::string& path);

}  // namespace qvmc
