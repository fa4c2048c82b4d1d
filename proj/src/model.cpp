#include "qvmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qvmc/dense.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {
constexpr double kDegeneracyTol = 1e-9;
constexpr std::size_t kDenseLimit = 12;
}  // namespace

void InteractionGraph::validate() const {
    if (n_vertices <= 0) throw std::invalid_argument("graph: vertex count must be positive");
    std::set<std::pair<int, int>> seen;
    for (const auto& [i, j] : edges) {
        if (i == j) throw std::invalid_argument("graph: self-loop");
        if (i < 0 || j < 0 || i >= n_vertices || j >= n_vertices)
            throw std::invalid_argument("graph: vertex index out of range");
        if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
            throw std::invalid_argument("graph: duplicate edge");
    }
}

bool InteractionGraph::connected() const {
    if (n_vertices == 0) return false;
    std::vector<std::vector<int>> adj(n_vertices);
    for (const auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<bool> seen(n_vertices, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n_vertices;
}

InteractionGraph make_graph(int n_vertices, std::vector<std::pair<int, int>> edges) {
    InteractionGraph g;
    g.n_vertices = n_vertices;
    for (auto& [i, j] : edges)
        if (i > j) std::swap(i, j);
    std::sort(edges.begin(), edges.end());
    g.edges = std::move(edges);
    g.validate();
    return g;
}

InteractionGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    int n = 0;
    if (!(in >> n)) throw std::runtime_error("graph file: missing vertex count: " + path);
    std::vector<std::pair<int, int>> edges;
    int i, j;
    while (in >> i >> j) edges.emplace_back(i, j);
    return make_graph(n, std::move(edges));
}

void save_graph(const InteractionGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << g.n_vertices << "\n";
    for (const auto& [i, j] : g.edges) out << i << " " << j << "\n";
}

PauliSum heisenberg(const InteractionGraph& g, double J) {
    g.validate();
    if (g.edges.empty()) throw std::invalid_argument("heisenberg: empty edge list");
    const auto n = static_cast<std::size_t>(g.n_vertices);
    PauliSum H(n);
    for (const auto& [i, j] : g.edges) {
        H.add(J, PauliString::two(n, i, j, Pauli::X));
        H.add(J, PauliString::two(n, i, j, Pauli::Y));
        H.add(J, PauliString::two(n, i, j, Pauli::Z));
    }
    return H;
}

namespace {

double power_iteration_norm(const PauliSum& H) {
    const std::size_t dim = std::size_t{1} << H.n();
    Rng rng(0x9d5ab7f30c2e11ULL);
    StateVec v(H.n(), std::vector<cplx>(dim));
    for (auto& a : v.amps) a = cplx(rng.normal(), rng.normal());
    double scale = 1.0 / norm(v);
    for (auto& a : v.amps) a *= scale;

    double lambda = 0.0;
    constexpr std::size_t kMaxIters = 100000;
    constexpr double kTol = 1e-10;
    for (std::size_t it = 0; it < kMaxIters; ++it) {
        StateVec w(H.n(), std::vector<cplx>(dim, cplx{0.0}));
        for (const auto& term : H.terms()) {
            StateVec t = apply_pauli(term.word, v);
            for (std::size_t k = 0; k < dim; ++k) w.amps[k] += term.coeff * t.amps[k];
        }
        const double next = norm(w);
        if (next == 0.0) return 0.0;
        scale = 1.0 / next;
        for (auto& a : w.amps) a *= scale;
        v = std::move(w);
        if (std::abs(next - lambda) <= kTol * std::max(1.0, next)) return next;
        lambda = next;
    }
    return lambda;
}

}  // namespace

double spectral_norm(const PauliSum& H) {
    if (H.empty()) return 0.0;
    if (H.n() <= kDenseLimit) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(dense_matrix(H),
                                                          Eigen::EigenvaluesOnly);
        const auto& ev = solver.eigenvalues();
        return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    return power_iteration_norm(H);
}

std::pair<PauliSum, double> normalize_spectral(const PauliSum& H) {
    const double scale = spectral_norm(H);
    if (scale <= 0.0) throw std::invalid_argument("normalize_spectral: zero Hamiltonian");
    return {H.scaled(1.0 / scale), scale};
}

SpectrumReport exact_spectrum(const PauliSum& H) {
    if (H.empty()) throw std::invalid_argument("exact_spectrum: empty Hamiltonian");
    if (H.n() > kDenseLimit)
        throw std::invalid_argument("exact_spectrum: qubit count exceeds dense limit (12)");

    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(dense_matrix(H));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("exact_spectrum: eigendecomposition failed");

    SpectrumReport report;
    const auto& vals = solver.eigenvalues();
    report.eigenvalues.assign(vals.data(), vals.data() + vals.size());
    report.ground_energy = report.eigenvalues.front();
    report.spectral_norm =
        std::max(std::abs(report.eigenvalues.front()), std::abs(report.eigenvalues.back()));

    // Collect the (possibly degenerate) ground level and locate the first
    // distinct level above it.
    std::size_t g_count = 1;
    while (g_count < report.eigenvalues.size() &&
           report.eigenvalues[g_count] - report.ground_energy <= kDegeneracyTol)
        ++g_count;
    report.gap = g_count < report.eigenvalues.size()
                     ? report.eigenvalues[g_count] - report.ground_energy
                     : 0.0;
    for (std::size_t k = 0; k < g_count; ++k)
        report.ground_space.push_back(from_eigen(solver.eigenvectors().col(k), H.n(), true));
    return report;
}

double overlap_pg(const StateVec& psi0, const SpectrumReport& report) {
    double pg = 0.0;
    for (const auto& g : report.ground_space) {
        const double ov = std::abs(inner(g, psi0));
        pg += ov * ov;
    }
    return std::min(pg, 1.0);
}

void save_hamiltonian_csv(const PauliSum& H, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write hamiltonian file: " + path);
    out << "coefficient,pauli-word\n";
    out.precision(17);
    for (const auto& t : H.terms()) out << t.coeff << "," << t.word.word() << "\n";
}

PauliSum load_hamiltonian_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hamiltonian file: " + path);
    std::string line;
    std::getline(in, line);  // header
    PauliSum H;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("hamiltonian file: malformed row: " + line);
        const double coeff = std::stod(line.substr(0, comma));
        PauliString word = PauliString::from_word(line.substr(comma + 1));
        if (first) {
            H = PauliSum(word.n());
            first = false;
        }
        H.add(coeff, std::move(word));
    }
    if (first) throw std::runtime_error("hamiltonian file: no terms: " + path);
    return H;
}

}  // namespace qvmc
