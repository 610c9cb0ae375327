#include "opdyn/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn {

void AdjacencyMatrix::set_edge(std::size_t i, std::size_t j, bool present) {
    if (i == j) {
        throw std::invalid_argument("AdjacencyMatrix: self-loops are not allowed");
    }
    a_[i * n_ + j] = present ? 1 : 0;
    a_[j * n_ + i] = present ? 1 : 0;
}

std::size_t AdjacencyMatrix::degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n_; ++j) d += a_[i * n_ + j];
    return d;
}

std::size_t AdjacencyMatrix::edge_count() const {
    std::size_t total = 0;
    for (std::uint8_t v : a_) total += v;
    return total / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyMatrix::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (edge(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

void validate_edge_params(const EdgeParams& params) {
    if (params.theta < 1) {
        throw std::invalid_argument("edge params: theta must be >= 1");
    }
    if (!(params.eps_edge >= 0.0) || params.eps_edge >= 1.0 || !std::isfinite(params.eps_edge)) {
        throw std::invalid_argument("edge params: eps_edge must lie in [0, 1)");
    }
}

double RngStream::next_uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

DenseMatrix weight_matrix(const DenseMatrix& opinions, const AdjacencyMatrix& a, NormEps eps) {
    if (opinions.rows() != a.size()) {
        throw std::invalid_argument("weight_matrix: opinion rows and graph size differ");
    }
    return weight_matrix_from_similarity(row_similarity_matrix(opinions, eps), a);
}

DenseMatrix weight_matrix_from_similarity(const DenseMatrix& similarity, const AdjacencyMatrix& a) {
    const std::size_t n = a.size();
    if (similarity.rows() != n || similarity.cols() != n) {
        throw std::invalid_argument("weight_matrix: similarity shape and graph size differ");
    }
    DenseMatrix w(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double neighbor_mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && a.edge(i, j)) {
                w(i, j) = similarity(i, j);
                neighbor_mass += similarity(i, j);
            }
        }
        // Similarity rows sum to at most 1, so the self-weight is the
        // non-negative remainder; the clamp only absorbs rounding dust.
        w(i, i) = std::max(0.0, 1.0 - neighbor_mass);
    }
    return w;
}

DenseMatrix opinion_step(const DenseMatrix& opinions, const DenseMatrix& w) {
    const std::size_t n = opinions.rows();
    const std::size_t m = opinions.cols();
    if (w.rows() != n || w.cols() != n) {
        throw std::invalid_argument("opinion_step: weight matrix shape mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += w(i, j);
        if (std::fabs(sum - 1.0) > 1e-6) {
            throw std::invalid_argument("opinion_step: weight row does not sum to 1");
        }
    }
    DenseMatrix out(n, m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double wij = w(i, j);
            if (wij == 0.0) continue;
            for (std::size_t t = 0; t < m; ++t) {
                out(i, t) += wij * opinions(j, t);
            }
        }
    }
    return out;
}

DenseMatrix edge_probabilities(const DenseMatrix& opinions, const EdgeParams& params, NormEps eps) {
    validate_edge_params(params);
    return edge_probabilities_from_similarity(row_similarity_matrix(opinions, eps), params, eps);
}

DenseMatrix edge_probabilities_from_similarity(const DenseMatrix& similarity, const EdgeParams& params,
                                               NormEps eps) {
    validate_edge_params(params);
    return renorm_hadamard_power(similarity, static_cast<double>(params.theta), eps);
}

AdjacencyMatrix resample_edges(const DenseMatrix& probabilities, const EdgeParams& params,
                               const std::vector<std::uint8_t>& controller_mask, RngStream& rng) {
    validate_edge_params(params);
    const std::size_t n = probabilities.rows();
    if (probabilities.cols() != n) {
        throw std::invalid_argument("resample_edges: probability matrix must be square");
    }
    if (controller_mask.size() != n) {
        throw std::invalid_argument("resample_edges: controller mask size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (probabilities(i, i) != 0.0) {
            throw std::invalid_argument("resample_edges: probability matrix must be hollow");
        }
        for (std::size_t j = 0; j < n; ++j) {
            double p = probabilities(i, j);
            if (!(p >= 0.0) || p > 1.0) {
                throw std::invalid_argument("resample_edges: probabilities must lie in [0, 1]");
            }
        }
    }
    AdjacencyMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // The draw happens unconditionally so one step always consumes
            // exactly n(n-1)/2 uniforms, whatever the mask says.
            double gamma = rng.next_uniform();
            bool present = gamma < std::max(probabilities(i, j), params.eps_edge);
            if (controller_mask[i] && controller_mask[j]) present = false;
            a.set_edge(i, j, present);
        }
    }
    return a;
}

} // namespace opdyn
