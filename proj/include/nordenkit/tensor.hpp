#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "nordenkit/errors.hpp"

namespace nk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Dense rank-K tensor over R^d, row-major multi-index order.
/// Component t(i,j,k) is t(e_i, e_j, e_k).
template <int Rank>
class Tensor {
    static_assert(Rank >= 0 && Rank <= 4, "ranks 0..4 are supported");

public:
    static constexpr int rank = Rank;

    Tensor() = default;
    explicit Tensor(int dim) : dim_(dim), data_(ipow(dim, Rank), 0.0) {}

    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    template <class... I>
        requires(sizeof...(I) == Rank)
    double& operator()(I... idx) {
        return data_[offset(static_cast<std::size_t>(idx)...)];
    }

    template <class... I>
        requires(sizeof...(I) == Rank)
    double operator()(I... idx) const {
        return data_[offset(static_cast<std::size_t>(idx)...)];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Eigen::Map<Vector> vec() { return {data_.data(), Eigen::Index(data_.size())}; }
    Eigen::Map<const Vector> vec() const {
        return {data_.data(), Eigen::Index(data_.size())};
    }

    static Tensor from_vec(int dim, const Eigen::Ref<const Vector>& v) {
        Tensor t(dim);
        if (std::size_t(v.size()) != t.size())
            throw Error(ErrorKind::Dimension, "flat vector has wrong length for tensor");
        t.vec() = v;
        return t;
    }

    double norm() const { return vec().norm(); }
    bool all_finite() const { return vec().allFinite(); }

    Tensor& operator+=(const Tensor& o) { check(o); vec() += o.vec(); return *this; }
    Tensor& operator-=(const Tensor& o) { check(o); vec() -= o.vec(); return *this; }
    Tensor& operator*=(double s) { vec() *= s; return *this; }

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator-(Tensor a) { return a *= -1.0; }

private:
    template <class... I>
    std::size_t offset(I... idx) const {
        std::size_t off = 0;
        ((off = off * std::size_t(dim_) + idx), ...);
        return off;
    }

    void check(const Tensor& o) const {
        if (o.dim_ != dim_) throw Error(ErrorKind::Dimension, "tensor dimension mismatch");
    }

    int dim_ = 0;
    std::vector<double> data_ = std::vector<double>(Rank == 0 ? 1 : 0, 0.0);
};

using Tensor1 = Tensor<1>;
using Tensor2 = Tensor<2>;
using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

Tensor2 to_tensor(const Matrix& m);
Matrix to_matrix(const Tensor2& t);

// --- rank-3 slot algebra -------------------------------------------------

using Perm3 = std::array<int, 3>;

/// result(x0,x1,x2) = t(x_{p0}, x_{p1}, x_{p2}).
Tensor3 permute(const Tensor3& t, Perm3 p);

/// Feeds A e_b into the given slot: result(..b..) = sum_a A(a,b) t(..a..).
Tensor3 apply(const Tensor3& t, int slot, const Matrix& a);

/// Applies a (possibly different) endomorphism on every slot; null = identity.
Tensor3 apply(const Tensor3& t, const Matrix* a0, const Matrix* a1, const Matrix* a2);

/// Contracts one slot with a vector; the remaining slots keep their order.
Matrix contract_vector(const Tensor3& t, const Vector& v, int slot);

/// (sigma t)(x,y,z) = t(x,y,z) + t(y,z,x) + t(z,x,y).
Tensor3 cyclic_sum(const Tensor3& t);

enum class BracketMode { Antisym, Sym };

/// t minus (or plus) t with the two named slots swapped.
Tensor3 bracket(const Tensor3& t, BracketMode mode, std::pair<int, int> slots);

inline Tensor3 anti12(const Tensor3& t) { return bracket(t, BracketMode::Antisym, {0, 1}); }
inline Tensor3 sym12(const Tensor3& t) { return bracket(t, BracketMode::Sym, {0, 1}); }
inline Tensor3 sym23(const Tensor3& t) { return bracket(t, BracketMode::Sym, {1, 2}); }

/// m(x,y) v(z)
Tensor3 outer(const Matrix& m, const Vector& v);
/// v(x) m(y,z)
Tensor3 outer(const Vector& v, const Matrix& m);
/// a(x) b(y) c(z)
Tensor3 outer(const Vector& a, const Vector& b, const Vector& c);

/// Contraction of slots (i,j) of t with a symmetric bilinear form on the dual,
/// e.g. g^{ij} t(e_i,e_j,z).
Vector trace(const Tensor3& t, const Matrix& inv_form, std::pair<int, int> slots);

/// Lowers the last (vector) slot of a (1,2) tensor stored as t(x,y,k).
Tensor3 lower_last(const Tensor3& t, const Matrix& g);
/// Raises the last slot: result(x,y,k) = t(x,y,l) ginv(l,k).
Tensor3 raise_last(const Tensor3& t, const Matrix& g_inv);

/// Torsion of the metric connection with potential Q: T = Q - Q(y,x,z).
Tensor3 torsion_of_potential(const Tensor3& q);
/// Inverse of torsion_of_potential on potentials skew in the last two slots.
Tensor3 potential_of_torsion(const Tensor3& t);

/// Relative residual |r| / |ref|, falling back to |r| when |ref| is below the floor.
double relative(double residual, double ref, const Tolerance& tol = {});

}  // namespace nk
