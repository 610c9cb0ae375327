#pragma once

#include <cstddef>
#include <vector>

#include "opdyn/matrix_ops.hpp"
#include "opdyn/network.hpp"

namespace opdyn {

enum class ControllerType {
    Stubborn, // never updates; anchors the network at a fixed opinion
    Popular,  // re-posts a blend of its neighbors chosen by crowd appeal
    Strategic // blends neighbors with a goal opinion it steers toward
};

// One controller agent. rho shapes the popular/strategic blend: large
// negative values chase the most agreeable opinion, large positive values
// chase the fringe. goal is the strategic target; fixed_opinion is what a
// stubborn agent posts forever.
struct ControllerSpec {
    ControllerType type = ControllerType::Stubborn;
    double rho = 0.0;
    std::vector<double> goal;
    std::vector<double> fixed_opinion;

    static ControllerSpec stubborn(std::vector<double> opinion);
    static ControllerSpec popular(double rho);
    static ControllerSpec strategic(std::vector<double> goal, double rho);
};

using NeighborSet = std::vector<std::size_t>;

// Indices adjacent to agent i, ascending.
NeighborSet neighbor_set(const AdjacencyMatrix& a, std::size_t i);

// Pins row i of the weight matrix to the standard basis vector e_i, so the
// opinion update leaves agent i untouched bit for bit.
DenseMatrix apply_stubborn(DenseMatrix w, std::size_t i);

// Blend weights over nbrs for a popular agent: each neighbor is scored by its
// total distance to the other neighbors, scores are normalized and sharpened
// by rho. rho -> -inf selects the most mutually agreeable neighbors,
// rho = 0 weighs all neighbors equally, rho -> +inf selects the fringe.
// When every score is zero (all neighbors agree, or a single neighbor) the
// weights fall back to uniform. Requires a non-empty neighbor set.
std::vector<double> popular_weights(const DenseMatrix& opinions, const NeighborSet& nbrs, double rho,
                                    NormEps eps);

// Popular agent's next opinion: the popular_weights blend of its neighbors'
// rows. With no neighbors the agent holds its current opinion.
std::vector<double> apply_popular(const DenseMatrix& opinions, const AdjacencyMatrix& a, std::size_t i,
                                  double rho, NormEps eps);

// Blend weights for a strategic agent: neighbors are scored by distance to
// the goal and the goal itself joins as a final pseudo-neighbor scored like
// the closest real one, so rho trades off pandering against preaching.
// Returns nbrs.size() + 1 weights, goal entry last. Same uniform fallback and
// non-empty requirement as popular_weights.
std::vector<double> strategic_weights(const DenseMatrix& opinions, const NeighborSet& nbrs,
                                      const std::vector<double>& goal, double rho, NormEps eps);

// Strategic agent's next opinion: the strategic_weights blend of neighbor
// rows and the goal. With no neighbors the agent holds its current opinion.
std::vector<double> apply_strategic(const DenseMatrix& opinions, const AdjacencyMatrix& a, std::size_t i,
                                    const std::vector<double>& goal, double rho, NormEps eps);

} // namespace opdyn
