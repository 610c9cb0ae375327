#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "opdyn/matrix_ops.hpp"

namespace opdyn {

// Undirected simple graph stored as a full symmetric 0/1 matrix. set_edge
// writes both triangles and refuses self-loops, so symmetry and a zero
// diagonal hold by construction.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}

    std::size_t size() const { return n_; }

    bool edge(std::size_t i, std::size_t j) const { return a_[i * n_ + j] != 0; }
    void set_edge(std::size_t i, std::size_t j, bool present);

    std::size_t degree(std::size_t i) const;
    std::size_t edge_count() const;

    // All edges as (i, j) with i < j, in row-major order.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    bool operator==(const AdjacencyMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> a_;
};

// Parameters of the edge process: the Hadamard sharpening exponent applied to
// similarities and the floor probability that keeps any pair discoverable.
struct EdgeParams {
    int theta = 7;            // >= 1
    double eps_edge = 0.001;  // in [0, 1)
};

void validate_edge_params(const EdgeParams& params);

// Seeded uniform stream. All randomness in a simulation flows through one of
// these; the draw counter makes consumption auditable and replays exact.
// Doubles are built from the top 53 bits of each engine word, so the stream
// is identical on every platform for a given seed.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    double next_uniform(); // in [0, 1)

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

// Interaction weights from opinions and the current graph: neighbor weight is
// the similarity where an edge exists, and each agent keeps the leftover mass
// as self-weight. Rows sum to 1; an isolated agent keeps weight 1 on itself.
DenseMatrix weight_matrix(const DenseMatrix& opinions, const AdjacencyMatrix& a, NormEps eps);

// Same, reusing an already computed similarity matrix.
DenseMatrix weight_matrix_from_similarity(const DenseMatrix& similarity, const AdjacencyMatrix& a);

// One synchronous opinion update: returns w * opinions. Validates that every
// row of w sums to 1 within 1e-6 before multiplying.
DenseMatrix opinion_step(const DenseMatrix& opinions, const DenseMatrix& w);

// Edge probabilities: similarities sharpened by an elementwise power theta and
// renormalized, so each agent's probability mass concentrates on its most
// similar peers as theta grows.
DenseMatrix edge_probabilities(const DenseMatrix& opinions, const EdgeParams& params, NormEps eps);
DenseMatrix edge_probabilities_from_similarity(const DenseMatrix& similarity, const EdgeParams& params,
                                               NormEps eps);

// Draws a fresh graph. Exactly one uniform is consumed per unordered pair, in
// row-major upper-triangle order, even for pairs the controller mask forces
// off; replay audits rely on that fixed count. A pair (i, j) gets an edge when
// its draw falls below max(probabilities(i, j), eps_edge), except that two
// controllers are never connected to each other.
AdjacencyMatrix resample_edges(const DenseMatrix& probabilities, const EdgeParams& params,
                               const std::vector<std::uint8_t>& controller_mask, RngStream& rng);

} // namespace opdyn
