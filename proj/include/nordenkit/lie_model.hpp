#pragma once

#include <variant>

#include "nordenkit/acm_odd.hpp"
#include "nordenkit/norden_even.hpp"

namespace nk {

/// Left-invariant structure on a Lie group, given at the identity:
/// structure constants c(i,j,k) = c^k_{ij}, [e_i,e_j] = c^k_{ij} e_k.
struct LieAlgebraModel {
    int dim = 0;
    Tensor3 c;
    std::variant<NordenStructure, ContactBStructure> structure;

    bool odd() const { return std::holds_alternative<ContactBStructure>(structure); }
    const NordenStructure& even_structure() const { return std::get<NordenStructure>(structure); }
    const ContactBStructure& odd_structure() const { return std::get<ContactBStructure>(structure); }
    const MetricPair& metric() const;
    /// J or phi.
    const Matrix& endomorphism() const;
};

/// Jacobi residual of c / |c|, absolute.
double jacobi_residual(const Tensor3& c);

/// Checks antisymmetry (Axiom) and the Jacobi identity at 1e-10 (Jacobi).
LieAlgebraModel make_lie_model(const Tensor3& c, NordenStructure s, const Tolerance& tol = {});
LieAlgebraModel make_lie_model(const Tensor3& c, ContactBStructure s, const Tolerance& tol = {});

/// Structure constants in the basis f_a = P(i,a) e_i.
Tensor3 change_basis(const Tensor3& c, const Matrix& P);

/// Abelian algebra R^d.
Tensor3 abelian_algebra(int d);
/// Heisenberg algebra of dimension 2m+1: [e_i, e_{m+i}] = e_{2m+1}.
Tensor3 heisenberg_algebra(int m);

struct LeviCivita {
    Tensor3 gamma;      // nabla_{e_i} e_j = gamma(i,j,k) e_k
    Tensor3 gamma_low;  // g(nabla_{e_i} e_j, e_k)
};

/// 2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y) on basis triples.
LeviCivita koszul_lc(const LieAlgebraModel& m);
/// |gamma(i,j,.) - gamma(j,i,.) - c(i,j,.)|, relative to |c| (or absolute when c = 0).
double lc_torsion_residual(const LieAlgebraModel& m, const LeviCivita& lc);
/// |g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)|, same scaling.
double lc_metric_residual(const LieAlgebraModel& m, const LeviCivita& lc);

/// (nabla_{e_i} A) e_j = D(i,j,k) e_k.
Tensor3 covariant_derivative(const LeviCivita& lc, const Matrix& A);

/// F(x,y,z) = g((nabla_x Phi) y, z) for Phi = J or phi. Throws Admissibility when
/// the result fails the admissibility conditions.
std::variant<FundamentalEven, FundamentalOdd> fundamental_from_model(const LieAlgebraModel& m,
                                                                     const Tolerance& tol = {});
Tensor3 fundamental_tensor(const LieAlgebraModel& m);

/// (L_xi g)(x,y) = -g([xi,x],y) - g(x,[xi,y]). Odd models only.
Matrix lie_derivative_metric(const LieAlgebraModel& m);
/// d eta(x,y) = -eta([x,y]). Odd models only.
Matrix d_eta_from_brackets(const LieAlgebraModel& m);

/// Nijenhuis pair built from brackets and the symmetric braces
/// {x,y} = nabla_x y + nabla_y x, lowered with g. Odd models add dEta (x) xi
/// and (L_xi g) (x) xi.
struct NijenhuisBrackets {
    Tensor3 N;
    Tensor3 N_hat;
};
NijenhuisBrackets nijenhuis_from_brackets(const LieAlgebraModel& m);

struct CurvatureData {
    Tensor4 R;  // R(x,y,z,w) = g(R(x,y)z, w), R = [nabla,nabla] - nabla_[,]
    Matrix ricci;
    double scalar = 0.0;
};

/// Curvature of the connection nabla + Q, Q(x,y,z) = g(Q(x,y),z); Q = 0 gives Levi-Civita.
CurvatureData curvature(const LieAlgebraModel& m, const Tensor3* Q = nullptr);
/// Largest relative residual of the curvature-like identities: both skew pairs and first Bianchi.
double curvature_like_residual(const Tensor4& R);
double bianchi_residual(const Tensor4& R);
/// L(x,y,Jz,Jw) + L(x,y,z,w), relative. A zero residual marks a Kaehler tensor.
double kaehler_tensor_residual(const Tensor4& L, const Matrix& J);

/// Same algebra, structure replaced by its constant-parameter conformal image.
LieAlgebraModel conformal_transform(const LieAlgebraModel& m, double u, double v, double w = 0.0,
                                    const Tolerance& tol = {});

}  // namespace nk
