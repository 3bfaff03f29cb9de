#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>

#include "nordenkit/metric.hpp"
#include "nordenkit/subspace.hpp"

namespace nk {

namespace detail {
struct EvenCache;
struct EvenFSpaces;
struct EvenTSpaces;
}  // namespace detail

/// Almost complex structure J with a Norden metric g on R^{2n}:
/// J^2 = -Id, g(Jx,Jy) = -g(x,y). The associated metric is g~(x,y) = g(x,Jy).
class NordenStructure {
public:
    NordenStructure() = default;

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    const Matrix& J() const { return J_; }
    const MetricPair& metric() const { return metric_; }
    const MetricPair& assoc_metric() const { return assoc_; }

    const detail::EvenFSpaces& f_spaces() const;
    const detail::EvenTSpaces& t_spaces() const;

private:
    friend NordenStructure validate_norden(const Matrix&, const Matrix&, const Tolerance&);

    int n_ = 0;
    Matrix J_;
    MetricPair metric_;
    MetricPair assoc_;
    std::shared_ptr<detail::EvenCache> cache_;
};

/// Basic classes as bits; an empty mask means F = 0 (the Kaehler class W0).
enum EvenClass : unsigned { W1 = 1u, W2 = 2u, W3 = 4u };
constexpr unsigned kAllEven = W1 | W2 | W3;

/// "W0", "W1", "W1+W3", ...
std::string even_class_name(unsigned mask);
/// Inverse of even_class_name; also accepts the U+2295 direct-sum sign.
unsigned parse_even_class(const std::string& text);

struct FundamentalEven {
    Tensor3 F;
    Vector theta;        // g^{ij} F(e_i,e_j,.)
    Vector theta_tilde;  // same trace with the associated metric
};

struct NijenhuisEven {
    Tensor3 N;
    Tensor3 N_hat;
    Vector nu_hat;
    Vector nu_hat_tilde;
};

struct TorsionEven {
    Tensor3 T;
    std::array<Tensor3, 4> components;  // T1..T4
    Vector t_form;                      // g^{ij} T(x,e_i,e_j)
};

struct ConnectionEven {
    Tensor3 Q;  // potential, skew in the last two slots
    TorsionEven torsion;
};

struct ClassLabelEven {
    unsigned members = 0;
    bool zero = false;  // |F| below the absolute floor
    unsigned by_conditions = 0;
    unsigned by_nijenhuis = 0;
    unsigned by_torsion = 0;
    unsigned by_projection = 0;
    std::map<std::string, double> residuals;

    std::string name() const { return even_class_name(members); }
};

struct NaturalityResult {
    bool natural = false;
    double f_residual = 0.0;     // F - (Q(x,y,Jz) - Q(x,Jy,z)), relative
    double skew_residual = 0.0;  // Q + Q(x,z,y), relative
};

NordenStructure validate_norden(const Matrix& J, const Matrix& g, const Tolerance& tol = {});
/// J0 = [[0,-I],[I,0]], g = diag(I,-I).
NordenStructure canonical_norden(int n);

FundamentalEven fundamental_even(const Tensor3& F, const NordenStructure& s);
double admissibility_residual_even(const Tensor3& F, const NordenStructure& s);
/// P = 1/4 (Id + S)(Id + K), S = swap of slots 2,3 and K(F) = F(., J., J.).
FundamentalEven admissible_F_even(const Tensor3& raw, const NordenStructure& s);

NijenhuisEven nijenhuis_from_F_even(const Tensor3& F, const NordenStructure& s);
/// Largest relative residual over the symmetry and J-property list of the pair.
double nijenhuis_property_residual_even(const Tensor3& N, const Tensor3& N_hat,
                                        const NordenStructure& s);
FundamentalEven F_from_nijenhuis_even(const Tensor3& N, const Tensor3& N_hat,
                                      const NordenStructure& s, const Tolerance& tol = {});

/// Closed-form W1 tensor built from a Lee form.
Tensor3 w1_form(const Vector& theta, const NordenStructure& s);
/// Components along W1, W2, W3 by kernel projection.
std::array<Tensor3, 3> class_components_even(const Tensor3& F, const NordenStructure& s,
                                             const Tolerance& tol = {});
ClassLabelEven classify_even(const Tensor3& F, const NordenStructure& s, const Tolerance& tol = {});

TorsionEven decompose_torsion_even(const Tensor3& T, const NordenStructure& s,
                                   const Tolerance& tol = {});
NaturalityResult naturality_check_even(const Tensor3& Q, const Tensor3& F,
                                       const NordenStructure& s, const Tolerance& tol = {});

Tensor3 canonical_torsion_even(const Tensor3& N, const Tensor3& N_hat);
/// T + T(y,z,x) - T(Jx,y,Jz) - T(y,Jz,Jx); vanishes for the canonical torsion.
Tensor3 canonical_identity_even(const Tensor3& T, const NordenStructure& s);

ConnectionEven b_connection_even(const Tensor3& F, const NordenStructure& s,
                                 const Tolerance& tol = {});
ConnectionEven canonical_connection_even(const Tensor3& F, const NordenStructure& s,
                                         const Tolerance& tol = {});
/// Throws ClassPrecondition unless N_hat = 0 (F in W3).
ConnectionEven kt_connection_even(const Tensor3& F, const NordenStructure& s,
                                  const Tolerance& tol = {});

// Defining linear conditions on flattened rank-3 coordinates; a tensor lies in
// the named space iff every map vanishes on it.
std::vector<LinearMap> admissibility_conditions_even(const NordenStructure& s);
/// Class rows for a mask among W1, W2, W3, W1+W2, W1+W3, W2+W3 (admissibility not included).
std::vector<LinearMap> class_conditions_even(unsigned mask, const NordenStructure& s);
/// T1..T4 (antisymmetry included).
std::vector<LinearMap> torsion_conditions_even(int cls, const NordenStructure& s);

NordenStructure conformal_transform_even(const NordenStructure& s, double u, double v,
                                         const Tolerance& tol = {});

}  // namespace nk
