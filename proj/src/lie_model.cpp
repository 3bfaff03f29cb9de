#include "nordenkit/lie_model.hpp"

#include <cmath>
#include <sstream>

namespace nk {

namespace {

constexpr double kJacobiTol = 1e-10;

// [M1 e_a, M2 e_b] as t(a,b,k)
Tensor3 bracket_of(const Tensor3& c, const Matrix& m1, const Matrix& m2) { return apply(c, &m1, &m2, nullptr); }

// {M1 e_a, M2 e_b} = nabla_{M1 e_a} M2 e_b + nabla_{M2 e_b} M1 e_a
Tensor3 brace_of(const Tensor3& gamma, const Matrix& m1, const Matrix& m2) {
    return apply(gamma, &m1, &m2, nullptr) + permute(apply(gamma, &m2, &m1, nullptr), {1, 0, 2});
}

// A applied to the vector value of a (1,2) tensor t(a,b,k).
Tensor3 on_value(const Matrix& a, const Tensor3& t) { return apply(t, 2, a.transpose()); }

double scaled(double r, double ref) { return ref > 0.0 ? r / ref : r; }

void check_constants(const Tensor3& c, int d, const Tolerance& tol) {
    if (c.dim() != d) throw Error(ErrorKind::Dimension, "structure constants do not match structure dimension");
    if (!c.all_finite()) throw Error(ErrorKind::Axiom, "non-finite structure constants");
    const double skew = relative((c + permute(c, {1, 0, 2})).norm(), c.norm(), tol);
    if (skew > tol.rel) throw Error(ErrorKind::Axiom, "structure constants are not antisymmetric in i,j");
    const double jac = jacobi_residual(c);
    if (jac > kJacobiTol) {
        std::ostringstream os;
        os << "Jacobi identity fails (residual " << jac << ")";
        throw Error(ErrorKind::Jacobi, os.str());
    }
}

Tensor4 lower_last4(const Tensor4& t, const Matrix& g) {
    const int d = t.dim();
    Tensor4 out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l)
                for (int w = 0; w < d; ++w) {
                    double s = 0.0;
                    for (int k = 0; k < d; ++k) s += t(i, j, l, k) * g(k, w);
                    out(i, j, l, w) = s;
                }
    return out;
}

}  // namespace

const MetricPair& LieAlgebraModel::metric() const {
    return odd() ? odd_structure().metric() : even_structure().metric();
}

const Matrix& LieAlgebraModel::endomorphism() const { return odd() ? odd_structure().phi() : even_structure().J(); }

double jacobi_residual(const Tensor3& c) {
    const double nc = c.norm();
    if (nc == 0.0) return 0.0;
    const int d = c.dim();
    // [[e_i,e_j],e_k] + cyclic, component l
    double s = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < d; ++m)
                        v += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
                    s += v * v;
                }
    return std::sqrt(s) / (nc * nc);
}

LieAlgebraModel make_lie_model(const Tensor3& c, NordenStructure s, const Tolerance& tol) {
    check_constants(c, s.dim(), tol);
    return {s.dim(), c, std::move(s)};
}

LieAlgebraModel make_lie_model(const Tensor3& c, ContactBStructure s, const Tolerance& tol) {
    check_constants(c, s.dim(), tol);
    return {s.dim(), c, std::move(s)};
}

Tensor3 change_basis(const Tensor3& c, const Matrix& P) {
    const Matrix PiT = P.inverse().transpose();
    // [f_a, f_b] = P_ia P_jb c^k_ij Pi_mk f_m
    return apply(c, &P, &P, &PiT);
}

Tensor3 abelian_algebra(int d) { return Tensor3(d); }

Tensor3 heisenberg_algebra(int m) {
    const int d = 2 * m + 1;
    Tensor3 c(d);
    for (int i = 0; i < m; ++i) {
        c(i, m + i, d - 1) = 1.0;
        c(m + i, i, d - 1) = -1.0;
    }
    return c;
}

LeviCivita koszul_lc(const LieAlgebraModel& m) {
    const Matrix& g = m.metric().g();
    const Tensor3 cl = lower_last(m.c, g);  // g([e_i,e_j], e_l)
    LeviCivita lc;
    lc.gamma_low = 0.5 * (cl - permute(cl, {1, 2, 0}) + permute(cl, {2, 0, 1}));
    lc.gamma = raise_last(lc.gamma_low, m.metric().g_inv());
    return lc;
}

double lc_torsion_residual(const LieAlgebraModel& m, const LeviCivita& lc) {
    return scaled((lc.gamma - permute(lc.gamma, {1, 0, 2}) - m.c).norm(), m.c.norm());
}

double lc_metric_residual(const LieAlgebraModel& m, const LeviCivita& lc) {
    return scaled((lc.gamma_low + permute(lc.gamma_low, {0, 2, 1})).norm(),
                  m.c.norm() * m.metric().g().norm());
}

Tensor3 covariant_derivative(const LeviCivita& lc, const Matrix& A) {
    // nabla_i(A e_j) - A nabla_i e_j
    return apply(lc.gamma, 1, A) - on_value(A, lc.gamma);
}

Tensor3 fundamental_tensor(const LieAlgebraModel& m) {
    const LeviCivita lc = koszul_lc(m);
    return lower_last(covariant_derivative(lc, m.endomorphism()), m.metric().g());
}

std::variant<FundamentalEven, FundamentalOdd> fundamental_from_model(const LieAlgebraModel& m,
                                                                     const Tolerance& tol) {
    const Tensor3 F = fundamental_tensor(m);
    const double scale = std::max(1.0, m.c.norm());
    if (m.odd()) {
        const auto& s = m.odd_structure();
        const double r = admissibility_residual_odd(F, s);
        if (r > tol.rel * scale) throw Error(ErrorKind::Admissibility, "model F is not admissible");
        return fundamental_odd(F, s);
    }
    const auto& s = m.even_structure();
    const double r = admissibility_residual_even(F, s);
    if (r > tol.rel * scale) throw Error(ErrorKind::Admissibility, "model F is not admissible");
    return fundamental_even(F, s);
}

Matrix lie_derivative_metric(const LieAlgebraModel& m) {
    if (!m.odd()) throw Error(ErrorKind::Dimension, "Lie derivative along xi needs an odd model");
    const Matrix ad = contract_vector(m.c, m.odd_structure().xi(), 0);  // [xi, e_j] = ad(j,k) e_k
    const Matrix a = ad * m.metric().g();
    return -a - a.transpose();
}

Matrix d_eta_from_brackets(const LieAlgebraModel& m) {
    if (!m.odd()) throw Error(ErrorKind::Dimension, "d eta needs an odd model");
    return -contract_vector(m.c, m.odd_structure().eta(), 2);
}

NijenhuisBrackets nijenhuis_from_brackets(const LieAlgebraModel& m) {
    const int d = m.dim;
    const Matrix I = Matrix::Identity(d, d);
    const Matrix& A = m.endomorphism();
    const Tensor3 gamma = koszul_lc(m).gamma;
    auto build = [&](auto&& op) {
        if (!m.odd()) return op(A, A) - op(I, I) - on_value(A, op(A, I)) - on_value(A, op(I, A));
        const Matrix pp = A * A;
        return op(A, A) + on_value(pp, op(I, I)) - on_value(A, op(A, I)) - on_value(A, op(I, A));
    };
    Tensor3 N = build([&](const Matrix& a, const Matrix& b) { return bracket_of(m.c, a, b); });
    Tensor3 Nh = build([&](const Matrix& a, const Matrix& b) { return brace_of(gamma, a, b); });
    if (m.odd()) {
        const Vector& xi = m.odd_structure().xi();
        N += outer(d_eta_from_brackets(m), xi);
        Nh += outer(lie_derivative_metric(m), xi);
    }
    const Matrix& g = m.metric().g();
    return {lower_last(N, g), lower_last(Nh, g)};
}

CurvatureData curvature(const LieAlgebraModel& m, const Tensor3* Q) {
    const int d = m.dim;
    Tensor3 gamma = koszul_lc(m).gamma;
    if (Q) gamma += raise_last(*Q, m.metric().g_inv());
    // R(e_i,e_j)e_l = Rt(i,j,l,k) e_k
    Tensor4 Rt(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l)
                for (int k = 0; k < d; ++k) {
                    double s = 0.0;
                    for (int a = 0; a < d; ++a)
                        s += gamma(j, l, a) * gamma(i, a, k) - gamma(i, l, a) * gamma(j, a, k) -
                             m.c(i, j, a) * gamma(a, l, k);
                    Rt(i, j, l, k) = s;
                }
    CurvatureData out;
    out.R = lower_last4(Rt, m.metric().g());
    const Matrix& gi = m.metric().g_inv();
    out.ricci = Matrix::Zero(d, d);
    for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) {
            double s = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s += gi(i, j) * out.R(i, y, z, j);
            out.ricci(y, z) = s;
        }
    out.scalar = (gi.cwiseProduct(out.ricci)).sum();
    return out;
}

double bianchi_residual(const Tensor4& R) {
    const int d = R.dim();
    double s = 0.0;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int w = 0; w < d; ++w) {
                    const double v = R(x, y, z, w) + R(y, z, x, w) + R(z, x, y, w);
                    s += v * v;
                }
    return scaled(std::sqrt(s), R.norm());
}

double curvature_like_residual(const Tensor4& R) {
    const int d = R.dim();
    double s1 = 0.0, s2 = 0.0;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int w = 0; w < d; ++w) {
                    const double a = R(x, y, z, w) + R(y, x, z, w);
                    const double b = R(x, y, z, w) + R(x, y, w, z);
                    s1 += a * a;
                    s2 += b * b;
                }
    return std::max({scaled(std::sqrt(s1), R.norm()), scaled(std::sqrt(s2), R.norm()), bianchi_residual(R)});
}

double kaehler_tensor_residual(const Tensor4& L, const Matrix& J) {
    const int d = L.dim();
    double s = 0.0;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int w = 0; w < d; ++w) {
                    double v = L(x, y, z, w);
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) v += J(a, z) * J(b, w) * L(x, y, a, b);
                    s += v * v;
                }
    return scaled(std::sqrt(s), L.norm());
}

LieAlgebraModel conformal_transform(const LieAlgebraModel& m, double u, double v, double w, const Tolerance& tol) {
    if (m.odd()) return make_lie_model(m.c, contact_conformal_transform(m.odd_structure(), u, v, w, tol), tol);
    return make_lie_model(m.c, conformal_transform_even(m.even_structure(), u, v, tol), tol);
}

}  // namespace nk
