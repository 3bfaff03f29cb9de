#include "nordenkit/tensor.hpp"

#include "nordenkit/metric.hpp"

#include <Eigen/Eigenvalues>

namespace nk {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Axiom: return "AxiomViolation";
        case ErrorKind::Signature: return "SignatureError";
        case ErrorKind::Property: return "PropertyViolation";
        case ErrorKind::Admissibility: return "AdmissibilityViolation";
        case ErrorKind::InconsistentClassification: return "InconsistentClassification";
        case ErrorKind::DirectSum: return "DirectSumFailure";
        case ErrorKind::RankDeficiency: return "RankDeficiency";
        case ErrorKind::ClassPrecondition: return "ClassPrecondition";
        case ErrorKind::Jacobi: return "JacobiViolation";
        case ErrorKind::Parse: return "ParseError";
        case ErrorKind::ResampleExhausted: return "ResampleExhausted";
        case ErrorKind::DegenerateSample: return "DegenerateSample";
        case ErrorKind::Dimension: return "DimensionMismatch";
    }
    return "Error";
}

Tensor2 to_tensor(const Matrix& m) {
    const int d = int(m.rows());
    if (m.cols() != d) throw Error(ErrorKind::Dimension, "to_tensor: matrix not square");
    Tensor2 t(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t(i, j) = m(i, j);
    return t;
}

Matrix to_matrix(const Tensor2& t) {
    const int d = t.dim();
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = t(i, j);
    return m;
}

Tensor3 permute(const Tensor3& t, Perm3 p) {
    const int d = t.dim();
    Tensor3 out(d);
    std::array<int, 3> x{};
    for (x[0] = 0; x[0] < d; ++x[0])
        for (x[1] = 0; x[1] < d; ++x[1])
            for (x[2] = 0; x[2] < d; ++x[2]) out(x[0], x[1], x[2]) = t(x[p[0]], x[p[1]], x[p[2]]);
    return out;
}

Tensor3 apply(const Tensor3& t, int slot, const Matrix& a) {
    const int d = t.dim();
    if (a.rows() != d || a.cols() != d) throw Error(ErrorKind::Dimension, "apply: matrix size");
    Tensor3 out(d);
    // Views the tensor as a d x d x d block and multiplies along one axis.
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double acc = 0.0;
                for (int m = 0; m < d; ++m) {
                    switch (slot) {
                        case 0: acc += a(m, i) * t(m, j, k); break;
                        case 1: acc += a(m, j) * t(i, m, k); break;
                        default: acc += a(m, k) * t(i, j, m); break;
                    }
                }
                out(i, j, k) = acc;
            }
    return out;
}

Tensor3 apply(const Tensor3& t, const Matrix* a0, const Matrix* a1, const Matrix* a2) {
    Tensor3 out = t;
    if (a0) out = apply(out, 0, *a0);
    if (a1) out = apply(out, 1, *a1);
    if (a2) out = apply(out, 2, *a2);
    return out;
}

Matrix contract_vector(const Tensor3& t, const Vector& v, int slot) {
    const int d = t.dim();
    if (v.size() != d) throw Error(ErrorKind::Dimension, "contract_vector: vector size");
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double x = t(i, j, k);
                switch (slot) {
                    case 0: out(j, k) += v(i) * x; break;
                    case 1: out(i, k) += v(j) * x; break;
                    default: out(i, j) += v(k) * x; break;
                }
            }
    return out;
}

Tensor3 cyclic_sum(const Tensor3& t) {
    return t + permute(t, {1, 2, 0}) + permute(t, {2, 0, 1});
}

Tensor3 bracket(const Tensor3& t, BracketMode mode, std::pair<int, int> slots) {
    auto [a, b] = slots;
    if (a == b || a < 0 || b < 0 || a > 2 || b > 2)
        throw Error(ErrorKind::Dimension, "bracket: invalid slot pair");
    Perm3 p{0, 1, 2};
    std::swap(p[a], p[b]);
    Tensor3 swapped = permute(t, p);
    return mode == BracketMode::Antisym ? t - swapped : t + swapped;
}

Tensor3 outer(const Matrix& m, const Vector& v) {
    const int d = int(v.size());
    Tensor3 out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out(i, j, k) = m(i, j) * v(k);
    return out;
}

Tensor3 outer(const Vector& v, const Matrix& m) {
    const int d = int(v.size());
    Tensor3 out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out(i, j, k) = v(i) * m(j, k);
    return out;
}

Tensor3 outer(const Vector& a, const Vector& b, const Vector& c) {
    const int d = int(a.size());
    Tensor3 out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) out(i, j, k) = a(i) * b(j) * c(k);
    return out;
}

Vector trace(const Tensor3& t, const Matrix& inv_form, std::pair<int, int> slots) {
    Tensor1 r = contract_metric<3>(t, inv_form, slots);
    return r.vec();
}

Tensor3 lower_last(const Tensor3& t, const Matrix& g) { return apply(t, 2, g); }

Tensor3 raise_last(const Tensor3& t, const Matrix& g_inv) { return apply(t, 2, g_inv); }

Tensor3 torsion_of_potential(const Tensor3& q) { return q - permute(q, {1, 0, 2}); }

Tensor3 potential_of_torsion(const Tensor3& t) {
    return 0.5 * (t - permute(t, {1, 2, 0}) + permute(t, {2, 0, 1}));
}

double relative(double residual, double ref, const Tolerance& tol) {
    return ref > tol.abs ? residual / ref : residual;
}

Signature signature_of(const Matrix& sym, const Tolerance& tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    Signature s;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) <= tol.rel * scale || scale == 0.0)
            throw Error(ErrorKind::Signature, "bilinear form is degenerate");
        (ev(i) > 0 ? s.p : s.q)++;
    }
    return s;
}

MetricPair MetricPair::from_matrix(const Matrix& g, const Tolerance& tol) {
    if (g.rows() != g.cols() || g.rows() == 0)
        throw Error(ErrorKind::Dimension, "metric must be a non-empty square matrix");
    if (!g.allFinite()) throw Error(ErrorKind::Axiom, "metric has non-finite entries");
    const double scale = g.norm();
    if (relative((g - g.transpose()).norm(), scale, tol) > tol.rel)
        throw Error(ErrorKind::Axiom, "metric is not symmetric");
    MetricPair m;
    m.g_ = 0.5 * (g + g.transpose());
    m.sig_ = signature_of(m.g_, tol);
    m.g_inv_ = m.g_.inverse();
    m.g_inv_ = 0.5 * (m.g_inv_ + m.g_inv_.transpose()).eval();
    const Matrix id = Matrix::Identity(g.rows(), g.cols());
    if ((m.g_ * m.g_inv_ - id).norm() > std::sqrt(tol.rel))
        throw Error(ErrorKind::Signature, "metric is numerically singular");
    return m;
}

}  // namespace nk
