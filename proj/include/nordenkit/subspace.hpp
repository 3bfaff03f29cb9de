#pragma once

#include <functional>
#include <vector>

#include <Eigen/QR>

#include "nordenkit/tensor.hpp"

namespace nk {

/// Linear map on flattened tensor coordinates.
using LinearMap = std::function<Vector(const Vector&)>;

/// A linear constraint C on R^N, stored as an m x N matrix. The constrained
/// subspace is ker C.
class ConstraintOperator {
public:
    ConstraintOperator() = default;
    explicit ConstraintOperator(Matrix m) : m_(std::move(m)) {}

    static ConstraintOperator from_map(Eigen::Index ambient, const LinearMap& f);

    const Matrix& matrix() const { return m_; }
    Eigen::Index rows() const { return m_.rows(); }
    Eigen::Index cols() const { return m_.cols(); }

private:
    Matrix m_;
};

/// Subspace of R^N given by a basis with orthonormal columns.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}

    static Subspace full(Eigen::Index n);

    const Matrix& basis() const { return basis_; }
    Eigen::Index ambient() const { return basis_.rows(); }
    Eigen::Index dim() const { return basis_.cols(); }

    /// Orthogonal (coordinate) projection onto the subspace.
    Vector project(const Vector& v) const { return basis_ * (basis_.transpose() * v); }

private:
    Matrix basis_;
};

/// Null space of m by column-pivoted QR of its transpose, with pivots below
/// rel_threshold * |largest pivot| treated as zero. Orthonormal columns.
Matrix null_space(const Matrix& m, double rel_threshold = 1e-9);

/// Subspace of `within` on which every map vanishes. Maps are evaluated on the
/// basis of `within` only, so the cost scales with its dimension.
Subspace kernel(const Subspace& within, const std::vector<LinearMap>& maps,
                double rel_threshold = 1e-9);

Subspace kernel(const std::vector<ConstraintOperator>& constraints, double rel_threshold = 1e-9);

/// Complement of `sub` inside `within` with respect to the inner product
/// <a,b> = a . G(b), where G is symmetric and nondegenerate on `within`.
Subspace complement(const Subspace& sub, const Subspace& within, const LinearMap& gram,
                    double rel_threshold = 1e-9);

/// Splits vectors of an ambient space along a direct sum of subspaces.
class DirectSum {
public:
    DirectSum() = default;

    /// Throws DirectSumFailure when dimensions do not add up to ambient_dim,
    /// RankDeficiency when the parts are not independent.
    DirectSum(std::vector<Subspace> parts, Eigen::Index ambient_dim, const Tolerance& tol = {});

    /// Components along each part; they sum to v. Throws DirectSumFailure when
    /// v has a component outside the ambient space.
    std::vector<Vector> split(const Vector& v) const;

    const std::vector<Subspace>& parts() const { return parts_; }
    std::size_t size() const { return parts_.size(); }

private:
    std::vector<Subspace> parts_;
    Matrix stacked_;
    Eigen::ColPivHouseholderQR<Matrix> qr_;
    Tolerance tol_;
};

/// Component of t in the intersection of the kernels of `constraints`, taken
/// along the intersection of the kernels of `complement`. The ambient space is
/// the kernel of `ambient` (the whole space when empty).
Vector project_subspace(const Vector& t, const std::vector<ConstraintOperator>& constraints,
                        const std::vector<ConstraintOperator>& complement,
                        const std::vector<ConstraintOperator>& ambient = {},
                        const Tolerance& tol = {});

template <int K>
Tensor<K> project_subspace(const Tensor<K>& t, const std::vector<ConstraintOperator>& constraints,
                           const std::vector<ConstraintOperator>& complement,
                           const std::vector<ConstraintOperator>& ambient = {},
                           const Tolerance& tol = {}) {
    return Tensor<K>::from_vec(t.dim(),
                               project_subspace(Vector(t.vec()), constraints, complement, ambient, tol));
}

// --- adapters between typed tensor maps and LinearMap ---------------------

inline Vector flat(const Tensor3& t) { return t.vec(); }
inline Vector flat(const Matrix& m) { return m.reshaped<Eigen::RowMajor>(); }
inline Vector flat(const Vector& v) { return v; }
inline Vector flat(double x) { return Vector::Constant(1, x); }

/// Wraps f : Tensor3 -> {Tensor3, Matrix, Vector} as a LinearMap.
template <class Fn>
LinearMap tensor3_map(int dim, Fn f) {
    return [dim, f](const Vector& v) { return flat(f(Tensor3::from_vec(dim, v))); };
}

/// Orthonormal basis of rank-3 tensors symmetric in the last two slots.
Subspace sym23_space(int dim);
/// Orthonormal basis of rank-3 tensors antisymmetric in the first two slots.
Subspace anti12_space(int dim);

}  // namespace nk
