#pragma once

#include <array>
#include <utility>

#include "nordenkit/tensor.hpp"

namespace nk {

struct Signature {
    int p = 0;  // positive eigenvalues
    int q = 0;  // negative eigenvalues
    bool operator==(const Signature&) const = default;
};

/// Nondegenerate symmetric bilinear form with its inverse and signature.
class MetricPair {
public:
    MetricPair() = default;

    /// Validates symmetry and nondegeneracy. Throws Axiom / Signature errors.
    static MetricPair from_matrix(const Matrix& g, const Tolerance& tol = {});

    const Matrix& g() const { return g_; }
    const Matrix& g_inv() const { return g_inv_; }
    Signature signature() const { return sig_; }
    int dim() const { return int(g_.rows()); }

private:
    Matrix g_;
    Matrix g_inv_;
    Signature sig_;
};

Signature signature_of(const Matrix& sym, const Tolerance& tol = {});

/// g^{ij}-contraction of t over two distinct slots (0-based).
template <int K>
Tensor<K - 2> contract_metric(const Tensor<K>& t, const Matrix& g_inv, std::pair<int, int> slots) {
    static_assert(K >= 2);
    auto [a, b] = slots;
    if (a == b || a < 0 || b < 0 || a >= K || b >= K)
        throw Error(ErrorKind::Dimension, "contract_metric: invalid slot pair");
    const int d = t.dim();
    if (g_inv.rows() != d || g_inv.cols() != d)
        throw Error(ErrorKind::Dimension, "contract_metric: metric dimension mismatch");

    Tensor<K - 2> out(d);
    std::array<int, K> idx{};
    const std::size_t total = out.size();
    for (std::size_t r = 0; r < total; ++r) {
        // decode the result multi-index into the free slots of idx
        std::size_t rem = r;
        for (int s = K - 1; s >= 0; --s) {
            if (s == a || s == b) continue;
            idx[s] = int(rem % d);
            rem /= d;
        }
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            idx[a] = i;
            for (int j = 0; j < d; ++j) {
                idx[b] = j;
                std::size_t off = 0;
                for (int s = 0; s < K; ++s) off = off * d + idx[s];
                acc += g_inv(i, j) * t.data()[off];
            }
        }
        out.data()[r] = acc;
    }
    return out;
}

template <int K>
Tensor<K - 2> contract_metric(const Tensor<K>& t, const MetricPair& m, std::pair<int, int> slots) {
    return contract_metric<K>(t, m.g_inv(), slots);
}

}  // namespace nk
