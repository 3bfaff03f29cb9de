#include "nordenkit/subspace.hpp"

#include <cmath>

namespace nk {

ConstraintOperator ConstraintOperator::from_map(Eigen::Index ambient, const LinearMap& f) {
    Matrix cols;
    Vector e = Vector::Zero(ambient);
    for (Eigen::Index k = 0; k < ambient; ++k) {
        e(k) = 1.0;
        Vector img = f(e);
        e(k) = 0.0;
        if (k == 0) cols.resize(img.size(), ambient);
        cols.col(k) = img;
    }
    return ConstraintOperator(std::move(cols));
}

Subspace Subspace::full(Eigen::Index n) { return Subspace(Matrix::Identity(n, n)); }

Matrix null_space(const Matrix& m, double rel_threshold) {
    const Eigen::Index n = m.cols();
    if (m.rows() == 0 || n == 0) return Matrix::Identity(n, n);
    Eigen::ColPivHouseholderQR<Matrix> qr(m.transpose());
    const double top = qr.maxPivot();
    if (top == 0.0) return Matrix::Identity(n, n);
    // Eigen's threshold is relative to the largest pivot.
    qr.setThreshold(rel_threshold);
    const Eigen::Index r = qr.rank();
    Matrix q = qr.householderQ();
    return q.rightCols(n - r);
}

Subspace kernel(const Subspace& within, const std::vector<LinearMap>& maps, double rel_threshold) {
    const Eigen::Index k = within.dim();
    if (k == 0 || maps.empty()) return within;
    std::vector<Matrix> blocks;
    Eigen::Index rows = 0;
    for (const auto& f : maps) {
        Matrix b;
        for (Eigen::Index c = 0; c < k; ++c) {
            Vector img = f(within.basis().col(c));
            if (c == 0) b.resize(img.size(), k);
            b.col(c) = img;
        }
        rows += b.rows();
        blocks.push_back(std::move(b));
    }
    Matrix stacked(rows, k);
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        stacked.middleRows(off, b.rows()) = b;
        off += b.rows();
    }
    return Subspace(within.basis() * null_space(stacked, rel_threshold));
}

Subspace kernel(const std::vector<ConstraintOperator>& constraints, double rel_threshold) {
    if (constraints.empty()) throw Error(ErrorKind::Dimension, "kernel: no constraints given");
    const Eigen::Index n = constraints.front().cols();
    Eigen::Index rows = 0;
    for (const auto& c : constraints) {
        if (c.cols() != n) throw Error(ErrorKind::Dimension, "kernel: constraint width mismatch");
        rows += c.rows();
    }
    Matrix stacked(rows, n);
    Eigen::Index off = 0;
    for (const auto& c : constraints) {
        stacked.middleRows(off, c.rows()) = c.matrix();
        off += c.rows();
    }
    return Subspace(null_space(stacked, rel_threshold));
}

Subspace complement(const Subspace& sub, const Subspace& within, const LinearMap& gram,
                    double rel_threshold) {
    Matrix g_within(within.ambient(), within.dim());
    for (Eigen::Index c = 0; c < within.dim(); ++c) g_within.col(c) = gram(within.basis().col(c));
    const Matrix pairing = sub.basis().transpose() * g_within;
    return Subspace(within.basis() * null_space(pairing, rel_threshold));
}

DirectSum::DirectSum(std::vector<Subspace> parts, Eigen::Index ambient_dim, const Tolerance& tol)
    : parts_(std::move(parts)), tol_(tol) {
    if (parts_.empty()) throw Error(ErrorKind::DirectSum, "direct sum of no subspaces");
    const Eigen::Index n = parts_.front().ambient();
    Eigen::Index total = 0;
    for (const auto& p : parts_) {
        if (p.ambient() != n) throw Error(ErrorKind::Dimension, "direct sum: ambient mismatch");
        total += p.dim();
    }
    if (total != ambient_dim)
        throw Error(ErrorKind::DirectSum, "subspace dimensions sum to " + std::to_string(total) +
                                              ", ambient dimension is " + std::to_string(ambient_dim));
    stacked_.resize(n, total);
    Eigen::Index off = 0;
    for (const auto& p : parts_) {
        stacked_.middleCols(off, p.dim()) = p.basis();
        off += p.dim();
    }
    qr_.setThreshold(1e-9);
    qr_.compute(stacked_);
    if (qr_.rank() != total)
        throw Error(ErrorKind::RankDeficiency, "subspaces are not independent (rank " +
                                                   std::to_string(qr_.rank()) + " of " +
                                                   std::to_string(total) + ")");
}

std::vector<Vector> DirectSum::split(const Vector& v) const {
    const Vector coef = stacked_.cols() ? Vector(qr_.solve(v)) : Vector();
    const Vector back = stacked_ * coef;
    if ((back - v).norm() > std::max(tol_.rel * v.norm(), tol_.abs))
        throw Error(ErrorKind::DirectSum, "input has a component outside the ambient space");
    std::vector<Vector> out;
    Eigen::Index off = 0;
    for (const auto& p : parts_) {
        out.push_back(p.basis() * coef.segment(off, p.dim()));
        off += p.dim();
    }
    return out;
}

Vector project_subspace(const Vector& t, const std::vector<ConstraintOperator>& constraints,
                        const std::vector<ConstraintOperator>& complement,
                        const std::vector<ConstraintOperator>& ambient, const Tolerance& tol) {
    const Eigen::Index n = t.size();
    const Subspace amb = ambient.empty() ? Subspace::full(n) : kernel(ambient);
    auto restricted = [&](const std::vector<ConstraintOperator>& cs) {
        std::vector<ConstraintOperator> all = cs;
        all.insert(all.end(), ambient.begin(), ambient.end());
        return kernel(all);
    };
    const Subspace u = restricted(constraints);
    const Subspace w = restricted(complement);
    DirectSum ds({u, w}, amb.dim(), tol);
    return ds.split(t).front();
}

Subspace sym23_space(int d) {
    const Eigen::Index n = Eigen::Index(ipow(d, 3));
    const Eigen::Index k = Eigen::Index(d) * d * (d + 1) / 2;
    Matrix b = Matrix::Zero(n, k);
    Eigen::Index c = 0;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = j; l < d; ++l, ++c) {
                if (j == l) {
                    b((i * d + j) * d + l, c) = 1.0;
                } else {
                    b((i * d + j) * d + l, c) = s;
                    b((i * d + l) * d + j, c) = s;
                }
            }
    return Subspace(std::move(b));
}

Subspace anti12_space(int d) {
    const Eigen::Index n = Eigen::Index(ipow(d, 3));
    const Eigen::Index k = Eigen::Index(d) * (d - 1) / 2 * d;
    Matrix b = Matrix::Zero(n, k);
    Eigen::Index c = 0;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int l = 0; l < d; ++l, ++c) {
                b((i * d + j) * d + l, c) = s;
                b((j * d + i) * d + l, c) = -s;
            }
    return Subspace(std::move(b));
}

}  // namespace nk
