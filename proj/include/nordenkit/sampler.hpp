#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "nordenkit/acm_odd.hpp"
#include "nordenkit/lie_model.hpp"
#include "nordenkit/norden_even.hpp"

namespace nk {

/// Name recorded in report metadata.
inline constexpr const char* kPrngName = "mt19937_64/box-muller";

/// mt19937_64 with uniforms from the top 53 bits and Box-Muller normals, so
/// streams are reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    Vector normal_vector(Eigen::Index n);
    Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// splitmix64 of (base, index): independent per-sample seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

enum class Parity { Even, Odd };

struct ClassTarget {
    Parity parity = Parity::Even;
    unsigned mask = 0;  // EvenClass bits or odd_bit(i)
};

/// "W3", "W1+W3", "F3+F7", "U0", "W0", "F0"; the direct-sum sign is accepted for '+'.
ClassTarget parse_class_target(const std::string& text);
std::string class_target_name(const ClassTarget& t);

struct SampleSpec {
    Parity parity = Parity::Even;
    int n = 2;
    std::string class_target = "W0";
    std::uint64_t seed = 0;
    int count = 1;
};

/// Well-conditioned random matrix Q1 diag(U[0.5,2]) Q2 with orthogonal Q1, Q2.
Matrix random_conjugator(int d, Rng& rng);
Tensor3 random_tensor3(int d, Rng& rng);

/// Conjugated canonical J with g = (h - J^T h J)/2 for a random symmetric h.
/// Throws ResampleExhausted if no acceptable metric appears within the retry bound.
NordenStructure sample_norden(int n, Rng& rng, const Tolerance& tol = {});
ContactBStructure sample_contact_b(int n, Rng& rng, const Tolerance& tol = {});
std::variant<NordenStructure, ContactBStructure> sample_structure(const SampleSpec& spec);

/// Random admissible F (projection of a Gaussian tensor).
FundamentalEven sample_admissible_even(const NordenStructure& s, Rng& rng);
FundamentalOdd sample_admissible_odd(const ContactBStructure& s, Rng& rng);

/// Random F in the sum of the targeted basic classes, each component at least
/// 1e-3 |F|. Throws DegenerateSample when a targeted class is zero-dimensional
/// or the bound of 64 retries is exceeded.
FundamentalEven sample_F_even(unsigned mask, const NordenStructure& s, Rng& rng);
FundamentalOdd sample_F_odd(OddMask mask, const ContactBStructure& s, Rng& rng);
std::variant<FundamentalEven, FundamentalOdd> sample_F_in_class(
    const SampleSpec& spec, const std::variant<NordenStructure, ContactBStructure>& s);

inline constexpr double kGenericity = 1e-3;
inline constexpr int kMaxRetries = 64;

enum class AlgebraFamily { Semidirect, TwoStepNilpotent, HeisenbergPlusAbelian, Su2PlusAbelian };

/// Random Jacobi-consistent constants of the family in a random basis, |c| = 1.
Tensor3 sample_algebra(int d, AlgebraFamily family, Rng& rng);
/// Random family, random algebra, random structure of the requested parity.
LieAlgebraModel sample_lie_model(Parity parity, int n, Rng& rng, const Tolerance& tol = {});

/// Independent projection route: explicit kernel bases by full-pivot LU and a
/// dense SVD least-squares split. Same contract as project_subspace.
Vector oracle_project(const Vector& t, const std::vector<ConstraintOperator>& constraints,
                      const std::vector<ConstraintOperator>& complement,
                      const std::vector<ConstraintOperator>& ambient = {}, const Tolerance& tol = {});

template <int K>
Tensor<K> oracle_project(const Tensor<K>& t, const std::vector<ConstraintOperator>& constraints,
                         const std::vector<ConstraintOperator>& complement,
                         const std::vector<ConstraintOperator>& ambient = {}, const Tolerance& tol = {}) {
    return Tensor<K>::from_vec(t.dim(), oracle_project(Vector(t.vec()), constraints, complement, ambient, tol));
}

}  // namespace nk
