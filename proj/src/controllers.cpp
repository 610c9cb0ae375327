#include "opdyn/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn {

ControllerSpec ControllerSpec::stubborn(std::vector<double> opinion) {
    ControllerSpec s;
    s.type = ControllerType::Stubborn;
    s.fixed_opinion = std::move(opinion);
    return s;
}

ControllerSpec ControllerSpec::popular(double rho) {
    if (!std::isfinite(rho)) {
        throw std::invalid_argument("controller rho must be finite");
    }
    ControllerSpec s;
    s.type = ControllerType::Popular;
    s.rho = rho;
    return s;
}

ControllerSpec ControllerSpec::strategic(std::vector<double> goal, double rho) {
    if (!std::isfinite(rho)) {
        throw std::invalid_argument("controller rho must be finite");
    }
    ControllerSpec s;
    s.type = ControllerType::Strategic;
    s.goal = std::move(goal);
    s.rho = rho;
    return s;
}

NeighborSet neighbor_set(const AdjacencyMatrix& a, std::size_t i) {
    NeighborSet nbrs;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (j != i && a.edge(i, j)) nbrs.push_back(j);
    }
    return nbrs;
}

DenseMatrix apply_stubborn(DenseMatrix w, std::size_t i) {
    if (i >= w.rows() || w.rows() != w.cols()) {
        throw std::invalid_argument("apply_stubborn: bad row index or non-square matrix");
    }
    for (std::size_t j = 0; j < w.cols(); ++j) {
        w(i, j) = (i == j) ? 1.0 : 0.0;
    }
    return w;
}

namespace {

void require_finite_rho(double rho) {
    if (!std::isfinite(rho)) {
        throw std::invalid_argument("controller rho must be finite");
    }
}

double row_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) d += std::fabs(a[t] - b[t]);
    return d;
}

// Normalize scores and sharpen by rho. A score vector of exact zeros (every
// candidate equally good) degrades to uniform weights, which also covers the
// single-neighbor case.
std::vector<double> sharpen_scores(std::vector<double> scores, double rho, NormEps eps) {
    scores = renorm_hadamard_power(row_normalize(std::move(scores), eps), rho, eps);
    double sum = 0.0;
    for (double v : scores) sum += v;
    if (sum == 0.0) {
        std::fill(scores.begin(), scores.end(), 1.0 / static_cast<double>(scores.size()));
    }
    return scores;
}

} // namespace

std::vector<double> popular_weights(const DenseMatrix& opinions, const NeighborSet& nbrs, double rho,
                                    NormEps eps) {
    require_finite_rho(rho);
    if (nbrs.empty()) {
        throw std::invalid_argument("popular_weights: neighbor set must be non-empty");
    }
    std::vector<double> scores(nbrs.size(), 0.0);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
        for (std::size_t l = 0; l < nbrs.size(); ++l) {
            if (l == j) continue;
            scores[j] += row_distance(opinions.row(nbrs[l]), opinions.row(nbrs[j]));
        }
    }
    return sharpen_scores(std::move(scores), rho, eps);
}

std::vector<double> apply_popular(const DenseMatrix& opinions, const AdjacencyMatrix& a, std::size_t i,
                                  double rho, NormEps eps) {
    NeighborSet nbrs = neighbor_set(a, i);
    if (nbrs.empty()) {
        return {opinions.row(i).begin(), opinions.row(i).end()};
    }
    std::vector<double> w = popular_weights(opinions, nbrs, rho, eps);
    std::vector<double> next(opinions.cols(), 0.0);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
        for (std::size_t t = 0; t < opinions.cols(); ++t) {
            next[t] += w[j] * opinions(nbrs[j], t);
        }
    }
    return next;
}

std::vector<double> strategic_weights(const DenseMatrix& opinions, const NeighborSet& nbrs,
                                      const std::vector<double>& goal, double rho, NormEps eps) {
    require_finite_rho(rho);
    if (nbrs.empty()) {
        throw std::invalid_argument("strategic_weights: neighbor set must be non-empty");
    }
    if (goal.size() != opinions.cols()) {
        throw std::invalid_argument("strategic_weights: goal length must match topic count");
    }
    std::vector<double> scores(nbrs.size() + 1, 0.0);
    double closest = 0.0;
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
        scores[j] = row_distance(opinions.row(nbrs[j]), goal);
        closest = (j == 0) ? scores[j] : std::min(closest, scores[j]);
    }
    // The goal scores like the nearest real neighbor: it competes for weight
    // on equal terms instead of dominating or vanishing.
    scores.back() = closest;
    return sharpen_scores(std::move(scores), rho, eps);
}

std::vector<double> apply_strategic(const DenseMatrix& opinions, const AdjacencyMatrix& a, std::size_t i,
                                    const std::vector<double>& goal, double rho, NormEps eps) {
    NeighborSet nbrs = neighbor_set(a, i);
    if (nbrs.empty()) {
        return {opinions.row(i).begin(), opinions.row(i).end()};
    }
    std::vector<double> w = strategic_weights(opinions, nbrs, goal, rho, eps);
    std::vector<double> next(opinions.cols(), 0.0);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
        for (std::size_t t = 0; t < opinions.cols(); ++t) {
            next[t] += w[j] * opinions(nbrs[j], t);
        }
    }
    for (std::size_t t = 0; t < opinions.cols(); ++t) {
        next[t] += w.back() * goal[t];
    }
    return next;
}

} // namespace opdyn
