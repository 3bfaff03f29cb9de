#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>

#include "nordenkit/metric.hpp"
#include "nordenkit/subspace.hpp"

namespace nk {

namespace detail {
struct OddCache;
struct OddFSpaces;
struct OddTSpaces;
}  // namespace detail

/// Almost contact structure (phi, xi, eta) with a B-metric g on R^{2n+1}.
/// Traces over the contact distribution use g^{ij} - xi^i xi^j (trace_form()).
class ContactBStructure {
public:
    ContactBStructure() = default;

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    const Matrix& phi() const { return phi_; }
    const Vector& xi() const { return xi_; }
    const Vector& eta() const { return eta_; }
    const MetricPair& metric() const { return metric_; }
    const MetricPair& assoc_metric() const { return assoc_; }
    /// hx = -phi^2 x
    const Matrix& h_proj() const { return h_; }
    /// vx = eta(x) xi
    const Matrix& v_proj() const { return v_; }
    /// g^{-1} - xi xi^T
    const Matrix& trace_form() const { return trace_form_; }

    const detail::OddFSpaces& f_spaces() const;
    const detail::OddTSpaces& t_spaces() const;

private:
    friend ContactBStructure validate_contact_b(const Matrix&, const Vector&, const Vector&,
                                                const Matrix&, const Tolerance&);

    int n_ = 0;
    Matrix phi_;
    Vector xi_, eta_;
    MetricPair metric_, assoc_;
    Matrix h_, v_, trace_form_;
    std::shared_ptr<detail::OddCache> cache_;
};

/// Bit i-1 stands for F_i; an empty mask means F = 0 (F0).
using OddMask = unsigned;
constexpr OddMask odd_bit(int i) { return 1u << (i - 1); }
constexpr OddMask kNormalClasses = odd_bit(1) | odd_bit(2) | odd_bit(4) | odd_bit(5) | odd_bit(6);
constexpr OddMask kKTClasses = odd_bit(3) | odd_bit(7);

std::string odd_class_name(OddMask mask);
OddMask parse_odd_class(const std::string& text);

struct FundamentalOdd {
    Tensor3 F;
    Vector theta;       // trace_form^{ij} F(e_i,e_j,.)
    Vector theta_star;  // trace_form^{ij} F(e_i,phi e_j,.)
    Vector omega;       // F(xi,xi,.)
};

struct NijenhuisOdd {
    Tensor3 N;
    Tensor3 N_hat;
};

struct TorsionOdd {
    Tensor3 T;
    std::array<Tensor3, 15> components;  // T1..T15
    Vector t_form, t_star_form, t_hat_form;
};

struct ConnectionOdd {
    Tensor3 Q;
    TorsionOdd torsion;
};

struct ClassLabelOdd {
    OddMask members = 0;
    bool zero = false;
    OddMask by_conditions = 0;  // projection onto the class subspaces
    OddMask by_nijenhuis = 0;   // decomposition of (N, N_hat)
    OddMask by_torsion = 0;     // phi-canonical torsion classes
    unsigned torsion_classes = 0;  // bit j-1 for T_j present in the canonical torsion
    std::map<std::string, double> residuals;

    std::string name() const { return odd_class_name(members); }
};

struct NaturalityResultOdd {
    bool natural = false;
    double f_residual = 0.0;
    double skew_residual = 0.0;
};

ContactBStructure validate_contact_b(const Matrix& phi, const Vector& xi, const Vector& eta,
                                     const Matrix& g, const Tolerance& tol = {});
/// phi = J0 on the first 2n coordinates, xi = e_d, g = diag(I_n, -I_n, 1).
ContactBStructure canonical_contact_b(int n);

FundamentalOdd fundamental_odd(const Tensor3& F, const ContactBStructure& s);
double admissibility_residual_odd(const Tensor3& F, const ContactBStructure& s);
FundamentalOdd admissible_F_odd(const Tensor3& raw, const ContactBStructure& s);

NijenhuisOdd nijenhuis_odd_from_F(const Tensor3& F, const ContactBStructure& s);
double nijenhuis_property_residual_odd(const Tensor3& N, const Tensor3& N_hat,
                                       const ContactBStructure& s);
FundamentalOdd F_from_nijenhuis_odd(const Tensor3& N, const Tensor3& N_hat,
                                    const ContactBStructure& s, const Tolerance& tol = {});
/// Expected (N, N_hat) of a tensor in the single basic class F_cls.
NijenhuisOdd class_nijenhuis_form(int cls, const Tensor3& F, const ContactBStructure& s);

std::array<Tensor3, 11> class_components_odd(const Tensor3& F, const ContactBStructure& s);
ClassLabelOdd classify_odd(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol = {});

TorsionOdd decompose_torsion_odd(const Tensor3& T, const ContactBStructure& s,
                                 const Tolerance& tol = {});
/// t, t*, t^ of a torsion tensor.
std::array<Vector, 3> torsion_forms_odd(const Tensor3& T, const ContactBStructure& s);

NaturalityResultOdd naturality_check_odd(const Tensor3& Q, const Tensor3& F,
                                         const ContactBStructure& s, const Tolerance& tol = {});

/// dEta(x,y) = F(x,phi y,xi) - F(y,phi x,xi).
Matrix d_eta_from_F(const Tensor3& F, const ContactBStructure& s);
/// (eta ^ w)(x,y,z) = cyclic sum of eta(x) w(y,z).
Tensor3 eta_wedge(const Matrix& w, const ContactBStructure& s);

/// Torsion of the phi-B connection written directly in F.
Tensor3 phi_b_torsion_from_F(const Tensor3& F, const ContactBStructure& s);
/// The same torsion written in the Nijenhuis pair.
Tensor3 phi_b_torsion_from_nijenhuis(const Tensor3& N, const Tensor3& N_hat,
                                     const ContactBStructure& s);
/// phi-canonical torsion written in N and the phi-B torsion.
Tensor3 phi_canonical_torsion_from_nijenhuis(const Tensor3& T_b, const Tensor3& N,
                                             const ContactBStructure& s);
/// Defining identity of the phi-canonical connection; vanishes on its torsion.
Tensor3 phi_canonical_identity(const Tensor3& T, const ContactBStructure& s);
/// Residual of the per-class description of the phi-canonical torsion.
double phi_canonical_class_residual(int cls, const Tensor3& T, const ContactBStructure& s);

ConnectionOdd phi_b_connection(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol = {});
ConnectionOdd phi_canonical_connection(const Tensor3& F, const ContactBStructure& s,
                                       const Tolerance& tol = {});
/// Throws ClassPrecondition unless N_hat = 0 (F in F3 + F7).
ConnectionOdd phi_kt_connection(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol = {});

std::vector<LinearMap> admissibility_conditions_odd(const ContactBStructure& s);
/// Defining conditions of F_cls (admissibility not included).
std::vector<LinearMap> class_conditions_odd(int cls, const ContactBStructure& s);

ContactBStructure contact_conformal_transform(const ContactBStructure& s, double u, double v, double w,
                                              const Tolerance& tol = {});

}  // namespace nk
