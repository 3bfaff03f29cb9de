#include "nordenkit/sampler.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "nordenkit/detail/spaces.hpp"

namespace nk {

double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Vector Rng::normal_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

ClassTarget parse_class_target(const std::string& text) {
    if (text.empty()) throw Error(ErrorKind::Parse, "empty class expression");
    if (text[0] == 'W') return {Parity::Even, parse_even_class(text)};
    if (text[0] == 'F' || text[0] == 'U') return {Parity::Odd, parse_odd_class(text)};
    throw Error(ErrorKind::Parse, "unknown class expression '" + text + "'");
}

std::string class_target_name(const ClassTarget& t) {
    return t.parity == Parity::Even ? even_class_name(t.mask) : odd_class_name(t.mask);
}

// --- structures ----------------------------------------------------------

namespace {

Matrix random_orthogonal(int d, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(d, d));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i)
        if (r(i, i) < 0) q.col(i) *= -1.0;
    return q;
}

Matrix random_symmetric(int d, Rng& rng) {
    const Matrix h = rng.normal_matrix(d, d);
    return h + h.transpose();
}

Matrix canonical_complex(int n) {
    Matrix J = Matrix::Zero(2 * n, 2 * n);
    J.block(0, n, n, n) = -Matrix::Identity(n, n);
    J.block(n, 0, n, n) = Matrix::Identity(n, n);
    return J;
}

// Smallest over largest absolute eigenvalue.
double conditioning(const Matrix& g) {
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (g + g.transpose())).eigenvalues().cwiseAbs();
    return ev.minCoeff() / ev.maxCoeff();
}

constexpr double kMinConditioning = 1e-3;

}  // namespace

Matrix random_conjugator(int d, Rng& rng) {
    Vector sv(d);
    for (int i = 0; i < d; ++i) sv(i) = rng.uniform(0.5, 2.0);
    return random_orthogonal(d, rng) * sv.asDiagonal() * random_orthogonal(d, rng);
}

Tensor3 random_tensor3(int d, Rng& rng) {
    return Tensor3::from_vec(d, rng.normal_vector(Eigen::Index(d) * d * d));
}

NordenStructure sample_norden(int n, Rng& rng, const Tolerance& tol) {
    if (n < 1) throw Error(ErrorKind::Dimension, "n must be at least 1");
    const int d = 2 * n;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const Matrix P = random_conjugator(d, rng);
        const Matrix J = P * canonical_complex(n) * P.inverse();
        const Matrix h = random_symmetric(d, rng);
        Matrix g = 0.5 * (h - J.transpose() * h * J);
        g = 0.5 * (g + g.transpose());
        if (conditioning(g) < kMinConditioning) continue;
        try {
            return validate_norden(J, g, tol);
        } catch (const Error&) {
            continue;
        }
    }
    throw Error(ErrorKind::ResampleExhausted, "no acceptable Norden metric within the retry bound");
}

ContactBStructure sample_contact_b(int n, Rng& rng, const Tolerance& tol) {
    if (n < 1) throw Error(ErrorKind::Dimension, "n must be at least 1");
    const int d = 2 * n + 1;
    Matrix phi0 = Matrix::Zero(d, d);
    phi0.topLeftCorner(2 * n, 2 * n) = canonical_complex(n);
    Vector e = Vector::Zero(d);
    e(d - 1) = 1.0;
    const Matrix I = Matrix::Identity(d, d);
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const Matrix P = random_conjugator(d, rng);
        const Matrix Pi = P.inverse();
        const Matrix phi = P * phi0 * Pi;
        const Vector xi = P * e;
        const Vector eta = Pi.transpose() * e;
        const Matrix h = random_symmetric(d, rng);
        const Matrix k = 0.5 * (h - phi.transpose() * h * phi);
        const Matrix H = I - xi * eta.transpose();
        Matrix g = H.transpose() * k * H + eta * eta.transpose();
        g = 0.5 * (g + g.transpose());
        if (conditioning(g) < kMinConditioning) continue;
        try {
            return validate_contact_b(phi, xi, eta, g, tol);
        } catch (const Error&) {
            continue;
        }
    }
    throw Error(ErrorKind::ResampleExhausted, "no acceptable B-metric within the retry bound");
}

std::variant<NordenStructure, ContactBStructure> sample_structure(const SampleSpec& spec) {
    Rng rng(spec.seed);
    if (spec.parity == Parity::Even) return sample_norden(spec.n, rng);
    return sample_contact_b(spec.n, rng);
}

// --- fundamental tensors -------------------------------------------------

FundamentalEven sample_admissible_even(const NordenStructure& s, Rng& rng) {
    return admissible_F_even(random_tensor3(s.dim(), rng), s);
}

FundamentalOdd sample_admissible_odd(const ContactBStructure& s, Rng& rng) {
    return admissible_F_odd(random_tensor3(s.dim(), rng), s);
}

namespace {

template <std::size_t K>
Vector sample_in_classes(const std::array<Subspace, K>& spaces, unsigned mask, Rng& rng, const std::string& name) {
    const Eigen::Index amb = spaces[0].ambient();
    if (mask == 0) return Vector::Zero(amb);
    for (std::size_t i = 0; i < K; ++i)
        if ((mask & (1u << i)) && spaces[i].dim() == 0)
            throw Error(ErrorKind::DegenerateSample, "target " + name + " contains a zero-dimensional class");
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<Vector> parts;
        Vector total = Vector::Zero(amb);
        for (std::size_t i = 0; i < K; ++i) {
            if (!(mask & (1u << i))) continue;
            parts.push_back(spaces[i].basis() * rng.normal_vector(spaces[i].dim()));
            total += parts.back();
        }
        const double nt = total.norm();
        bool generic = nt > 0.0;
        for (const auto& p : parts) generic = generic && p.norm() >= kGenericity * nt;
        if (generic) return total / nt;
    }
    throw Error(ErrorKind::DegenerateSample, "no generic sample of " + name + " within the retry bound");
}

}  // namespace

FundamentalEven sample_F_even(unsigned mask, const NordenStructure& s, Rng& rng) {
    const Vector v = sample_in_classes(s.f_spaces().w, mask, rng, even_class_name(mask));
    return fundamental_even(Tensor3::from_vec(s.dim(), v), s);
}

FundamentalOdd sample_F_odd(OddMask mask, const ContactBStructure& s, Rng& rng) {
    const Vector v = sample_in_classes(s.f_spaces().f, mask, rng, odd_class_name(mask));
    return fundamental_odd(Tensor3::from_vec(s.dim(), v), s);
}

std::variant<FundamentalEven, FundamentalOdd> sample_F_in_class(
    const SampleSpec& spec, const std::variant<NordenStructure, ContactBStructure>& s) {
    const ClassTarget target = parse_class_target(spec.class_target);
    Rng rng(derive_seed(spec.seed, 0));
    if (target.parity == Parity::Even) {
        const auto* e = std::get_if<NordenStructure>(&s);
        if (!e) throw Error(ErrorKind::Dimension, "even class target needs a Norden structure");
        return sample_F_even(target.mask, *e, rng);
    }
    const auto* o = std::get_if<ContactBStructure>(&s);
    if (!o) throw Error(ErrorKind::Dimension, "odd class target needs an almost contact B-structure");
    return sample_F_odd(target.mask, *o, rng);
}

// --- Lie algebras --------------------------------------------------------

Tensor3 sample_algebra(int d, AlgebraFamily family, Rng& rng) {
    Tensor3 c(d);
    auto set = [&c](int i, int j, int k, double v) {
        c(i, j, k) += v;
        c(j, i, k) -= v;
    };
    switch (family) {
        case AlgebraFamily::Semidirect: {
            const Matrix A = rng.normal_matrix(d - 1, d - 1);
            for (int i = 0; i < d - 1; ++i)
                for (int k = 0; k < d - 1; ++k) set(d - 1, i, k, A(k, i));
            break;
        }
        case AlgebraFamily::TwoStepNilpotent: {
            const int center = d >= 5 ? 2 : 1;
            const int base = d - center;
            for (int a = 0; a < center; ++a)
                for (int i = 0; i < base; ++i)
                    for (int j = i + 1; j < base; ++j) set(i, j, base + a, rng.normal());
            break;
        }
        case AlgebraFamily::HeisenbergPlusAbelian: {
            const int m = (d - 1) / 2;
            const double scale = rng.uniform(0.5, 2.0);
            for (int i = 0; i < m; ++i) set(i, m + i, 2 * m, scale);
            break;
        }
        case AlgebraFamily::Su2PlusAbelian: {
            if (d < 3) throw Error(ErrorKind::Dimension, "su(2) needs dimension at least 3");
            const double scale = rng.uniform(0.5, 2.0);
            set(0, 1, 2, scale);
            set(1, 2, 0, scale);
            set(2, 0, 1, scale);
            break;
        }
    }
    c = change_basis(c, random_conjugator(d, rng));
    const double nc = c.norm();
    return nc > 0.0 ? (1.0 / nc) * c : c;
}

LieAlgebraModel sample_lie_model(Parity parity, int n, Rng& rng, const Tolerance& tol) {
    const int d = parity == Parity::Even ? 2 * n : 2 * n + 1;
    const auto family = static_cast<AlgebraFamily>(rng.next() % 4);
    const Tensor3 c = sample_algebra(d, d < 3 ? AlgebraFamily::Semidirect : family, rng);
    if (parity == Parity::Even) return make_lie_model(c, sample_norden(n, rng, tol), tol);
    return make_lie_model(c, sample_contact_b(n, rng, tol), tol);
}

// --- oracle --------------------------------------------------------------

namespace {

Matrix stacked(const std::vector<ConstraintOperator>& a, const std::vector<ConstraintOperator>& b, Eigen::Index n) {
    Eigen::Index rows = 0;
    for (const auto* list : {&a, &b})
        for (const auto& c : *list) {
            if (c.cols() != n) throw Error(ErrorKind::Dimension, "constraint width does not match tensor size");
            rows += c.rows();
        }
    Matrix m(rows, n);
    Eigen::Index r = 0;
    for (const auto* list : {&a, &b})
        for (const auto& c : *list) {
            m.middleRows(r, c.rows()) = c.matrix();
            r += c.rows();
        }
    return m;
}

Matrix lu_kernel(const Matrix& m, Eigen::Index n) {
    if (m.rows() == 0) return Matrix::Identity(n, n);
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-9);
    if (lu.rank() == n) return Matrix(n, 0);
    return lu.kernel();
}

}  // namespace

Vector oracle_project(const Vector& t, const std::vector<ConstraintOperator>& constraints,
                      const std::vector<ConstraintOperator>& complement,
                      const std::vector<ConstraintOperator>& ambient, const Tolerance& tol) {
    const Eigen::Index n = t.size();
    const Matrix amb = lu_kernel(stacked(ambient, {}, n), n);
    const Matrix u = lu_kernel(stacked(constraints, ambient, n), n);
    const Matrix w = lu_kernel(stacked(complement, ambient, n), n);
    if (u.cols() + w.cols() != amb.cols())
        throw Error(ErrorKind::DirectSum, "subspace dimensions do not add up to the ambient dimension");
    Matrix b(n, u.cols() + w.cols());
    b << u, w;
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    if (svd.rank() != b.cols()) throw Error(ErrorKind::RankDeficiency, "subspaces are not independent");
    const Vector x = svd.solve(t);
    const double res = (b * x - t).norm();
    if (res > std::max(tol.rel * t.norm(), tol.abs))
        throw Error(ErrorKind::DirectSum, "vector lies outside the ambient subspace");
    return u * x.head(u.cols());
}

}  // namespace nk
