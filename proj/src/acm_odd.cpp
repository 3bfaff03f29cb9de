#include "nordenkit/acm_odd.hpp"

#include <cmath>
#include <sstream>

#include "nordenkit/detail/spaces.hpp"

namespace nk {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

void require(bool ok, const std::string& what, double residual) {
    if (!ok) throw Error(ErrorKind::Axiom, what + " fails (residual " + fmt(residual) + ")");
}

double hyp(std::initializer_list<double> xs) {
    double s = 0.0;
    for (double x : xs) s += x * x;
    return std::sqrt(s);
}

double stacked_norm(const std::vector<LinearMap>& maps, const Vector& v) {
    double s = 0.0;
    for (const auto& f : maps) s += f(v).squaredNorm();
    return std::sqrt(s);
}

// eta(y) m(x,z)
Tensor3 eta_middle(const Matrix& m, const Vector& eta) { return permute(outer(m, eta), {0, 2, 1}); }

// Pair vector [N; N_hat].
Vector pair_vec(const NijenhuisOdd& p) {
    Vector v(p.N.size() * 2);
    v << p.N.vec(), p.N_hat.vec();
    return v;
}

NijenhuisOdd pair_from_vec(int d, const Vector& v) {
    const Eigen::Index half = v.size() / 2;
    return {Tensor3::from_vec(d, v.head(half)), Tensor3::from_vec(d, v.tail(half))};
}

// F(x,phi y,xi) as a matrix in (x,y).
Matrix nabla_eta(const Tensor3& F, const ContactBStructure& s) {
    return contract_vector(apply(F, 1, s.phi()), s.xi(), 2);
}

Subspace orthonormal_image(const Matrix& cols) {
    if (cols.cols() == 0) return Subspace(Matrix(cols.rows(), 0));
    Eigen::ColPivHouseholderQR<Matrix> qr(cols);
    qr.setThreshold(1e-9);
    if (qr.rank() != cols.cols())
        throw Error(ErrorKind::RankDeficiency, "Nijenhuis map is not injective on a class subspace");
    Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
    return Subspace(std::move(q));
}

// Torsion class present in the canonical torsion -> basic class of F.
constexpr int kTorsionToClass[16] = {0, 0, 0, 3, 1, 2, 0, 7, 8, 5, 4, 6, 0, 9, 10, 11};

}  // namespace

// --- names ---------------------------------------------------------------

std::string odd_class_name(OddMask mask) {
    if (mask == 0) return "F0";
    std::string out;
    for (int i = 1; i <= 11; ++i)
        if (mask & odd_bit(i)) out += (out.empty() ? "F" : "+F") + std::to_string(i);
    return out;
}

OddMask parse_odd_class(const std::string& text) {
    std::string t = text;
    for (std::size_t p; (p = t.find("\xE2\x8A\x95")) != std::string::npos;) t.replace(p, 3, "+");
    if (t == "U0") {
        // N(hx,hy) = 0: every class except F3 and F7
        return ((1u << 11) - 1) & ~kKTClasses;
    }
    std::stringstream ss(t);
    std::string part;
    OddMask mask = 0;
    bool any = false;
    while (std::getline(ss, part, '+')) {
        any = true;
        if (part.size() < 2 || part[0] != 'F') throw Error(ErrorKind::Parse, "unknown odd class '" + part + "'");
        int i = -1;
        try {
            std::size_t used = 0;
            i = std::stoi(part.substr(1), &used);
            if (used != part.size() - 1) i = -1;
        } catch (const std::exception&) {
            i = -1;
        }
        if (i < 0 || i > 11) throw Error(ErrorKind::Parse, "unknown odd class '" + part + "'");
        if (i > 0) mask |= odd_bit(i);
    }
    if (!any) throw Error(ErrorKind::Parse, "empty class expression");
    return mask;
}

// --- structure -----------------------------------------------------------

ContactBStructure validate_contact_b(const Matrix& phi, const Vector& xi, const Vector& eta,
                                     const Matrix& g, const Tolerance& tol) {
    const Eigen::Index d = phi.rows();
    if (phi.cols() != d || xi.size() != d || eta.size() != d || g.rows() != d || g.cols() != d)
        throw Error(ErrorKind::Dimension, "phi, xi, eta, g have inconsistent sizes");
    if (d % 2 != 1) throw Error(ErrorKind::Dimension, "almost contact structure needs odd dimension");
    if (!phi.allFinite() || !xi.allFinite() || !eta.allFinite() || !g.allFinite())
        throw Error(ErrorKind::Axiom, "non-finite entries");

    const Matrix I = Matrix::Identity(d, d);
    const double pscale = std::max(1.0, phi.squaredNorm() / double(d));
    const double vscale = std::max(1.0, xi.norm() * eta.norm());
    const double gscale = std::max(g.norm(), tol.abs);

    const double r_eta_xi = std::abs(eta.dot(xi) - 1.0);
    require(r_eta_xi < tol.rel * vscale, "eta(xi) = 1", r_eta_xi);
    const double r_phixi = (phi * xi).norm() / (std::sqrt(pscale) * xi.norm());
    require(r_phixi < tol.rel, "phi xi = 0", r_phixi);
    const double r_etaphi = (phi.transpose() * eta).norm() / (std::sqrt(pscale) * eta.norm());
    require(r_etaphi < tol.rel, "eta o phi = 0", r_etaphi);
    const double r_phi2 = (phi * phi + I - xi * eta.transpose()).norm() / (std::sqrt(double(d)) * pscale * vscale);
    require(r_phi2 < tol.rel, "phi^2 = -Id + eta (x) xi", r_phi2);

    ContactBStructure s;
    s.metric_ = MetricPair::from_matrix(g, tol);
    const double r_str2 =
        (phi.transpose() * g * phi + g - eta * eta.transpose()).norm() / (gscale * pscale * vscale);
    require(r_str2 < tol.rel, "g(phi x, phi y) = -g(x,y) + eta(x) eta(y)", r_str2);

    const int n = int(d / 2);
    s.n_ = n;
    s.phi_ = phi;
    s.xi_ = xi;
    s.eta_ = eta;
    const Matrix gt = g * phi + eta * eta.transpose();
    s.assoc_ = MetricPair::from_matrix(0.5 * (gt + gt.transpose()), tol);
    const Signature want{n + 1, n};
    if (!(s.metric_.signature() == want))
        throw Error(ErrorKind::Signature, "metric signature is not (n+1,n)");
    if (!(s.assoc_.signature() == want))
        throw Error(ErrorKind::Signature, "associated metric signature is not (n+1,n)");
    s.h_ = -phi * phi;
    s.v_ = xi * eta.transpose();
    s.trace_form_ = s.metric_.g_inv() - xi * xi.transpose();
    s.cache_ = std::make_shared<detail::OddCache>();
    return s;
}

ContactBStructure canonical_contact_b(int n) {
    const int d = 2 * n + 1;
    Matrix phi = Matrix::Zero(d, d);
    phi.block(0, n, n, n) = -Matrix::Identity(n, n);
    phi.block(n, 0, n, n) = Matrix::Identity(n, n);
    Vector xi = Vector::Zero(d);
    xi(d - 1) = 1.0;
    Matrix g = Matrix::Identity(d, d);
    g.block(n, n, n, n) *= -1.0;
    return validate_contact_b(phi, xi, xi, g);
}

// --- conditions ----------------------------------------------------------

std::vector<LinearMap> admissibility_conditions_odd(const ContactBStructure& s) {
    const int d = s.dim();
    const Matrix phi = s.phi();
    const Vector xi = s.xi(), eta = s.eta();
    return {
        tensor3_map(d, [](const Tensor3& F) { return F - permute(F, {0, 2, 1}); }),
        tensor3_map(d, [phi, xi, eta](const Tensor3& F) {
            return F - apply(F, nullptr, &phi, &phi) - eta_middle(contract_vector(F, xi, 1), eta) -
                   outer(contract_vector(F, xi, 2), eta);
        }),
    };
}

std::vector<LinearMap> class_conditions_odd(int cls, const ContactBStructure& s) {
    const int d = s.dim();
    const int n = s.n();
    const Matrix phi = s.phi();
    const Matrix pp = phi * phi;
    const Vector xi = s.xi(), eta = s.eta();
    const Matrix g = s.metric().g();
    const Matrix gP = g * phi;                    // g(x, phi y)
    const Matrix gPP = phi.transpose() * g * phi;  // g(phi x, phi y)
    const Matrix tf = s.trace_form();

    auto theta = [tf](const Tensor3& F) -> Vector { return trace(F, tf, {0, 1}); };
    auto theta_star = [tf, phi](const Tensor3& F) -> Vector { return trace(apply(F, 1, phi), tf, {0, 1}); };
    auto omega = [xi](const Tensor3& F) -> Vector { return contract_vector(F, xi, 0).transpose() * xi; };
    auto fxy = [xi](const Tensor3& F) -> Matrix { return contract_vector(F, xi, 2); };
    auto vert = [fxy, eta](const Tensor3& F) { return F - sym23(outer(fxy(F), eta)); };
    auto m = [d](auto f) { return tensor3_map(d, f); };
    auto theta_map = m(theta);
    auto theta_star_map = m(theta_star);
    auto xi_first = m([xi](const Tensor3& F) -> Matrix { return contract_vector(F, xi, 0); });
    auto xi_second = m([xi](const Tensor3& F) -> Matrix { return contract_vector(F, xi, 1); });
    auto vertical = m(vert);
    auto fxy_sym = [fxy](double sign) {
        return [fxy, sign](const Tensor3& F) -> Matrix { Matrix a = fxy(F); return a + sign * a.transpose(); };
    };
    auto fxy_phi = [fxy, phi](double sign) {
        return [fxy, phi, sign](const Tensor3& F) -> Matrix {
            Matrix a = fxy(F);
            return a + sign * phi.transpose() * a * phi;
        };
    };

    switch (cls) {
        case 1:
            return {m([=](const Tensor3& F) {
                const Vector th = theta(F);
                const Tensor3 a = outer(gP, Vector(phi.transpose() * th)) + outer(gPP, Vector(pp.transpose() * th));
                return F - (1.0 / (2.0 * n)) * sym23(a);
            })};
        case 2:
            return {xi_first, xi_second, m([phi](const Tensor3& F) { return cyclic_sum(apply(F, 2, phi)); }),
                    theta_map};
        case 3: return {xi_first, xi_second, m([](const Tensor3& F) { return cyclic_sum(F); })};
        case 4:
            return {m([=](const Tensor3& F) {
                return F + (theta(F).dot(xi) / (2.0 * n)) * sym23(outer(gPP, eta));
            })};
        case 5:
            return {m([=](const Tensor3& F) {
                return F + (theta_star(F).dot(xi) / (2.0 * n)) * sym23(outer(gP, eta));
            })};
        case 6: return {vertical, m(fxy_sym(-1.0)), m(fxy_phi(1.0)), theta_map, theta_star_map};
        case 7: return {vertical, m(fxy_sym(1.0)), m(fxy_phi(1.0)), theta_map, theta_star_map};
        case 8: return {vertical, m(fxy_sym(-1.0)), m(fxy_phi(-1.0))};
        case 9: return {vertical, m(fxy_sym(1.0)), m(fxy_phi(-1.0))};
        case 10:
            return {m([=](const Tensor3& F) {
                return F - outer(eta, Matrix(phi.transpose() * contract_vector(F, xi, 0) * phi));
            })};
        case 11:
            return {m([=](const Tensor3& F) {
                const Vector w = omega(F);
                return F - outer(eta, eta, w) - outer(eta, w, eta);
            })};
        default: throw Error(ErrorKind::Parse, "odd class index out of range");
    }
}

namespace {

std::vector<LinearMap> torsion_class_conditions(const std::string& key, const ContactBStructure& s) {
    const int d = s.dim();
    const Matrix phi = s.phi();
    const Matrix pp = phi * phi;
    const Vector xi = s.xi(), eta = s.eta();
    const Matrix tf = s.trace_form();
    auto m = [d](auto f) { return tensor3_map(d, f); };

    auto t_form = m([tf](const Tensor3& T) -> Vector { return trace(T, tf, {1, 2}); });
    auto t_star = m([tf, phi](const Tensor3& T) -> Vector { return trace(apply(T, 2, phi), tf, {1, 2}); });
    auto tx = [xi](const Tensor3& T) -> Matrix { return contract_vector(T, xi, 0); };
    auto tz = [xi](const Tensor3& T) -> Matrix { return contract_vector(T, xi, 2); };
    std::vector<LinearMap> base_h{m(tx), m(tz)};
    auto phi12 = [phi](double sign) {
        return [phi, sign](const Tensor3& T) { return T + sign * apply(T, &phi, &phi, nullptr); };
    };
    auto phi23 = [phi](double sign) {
        return [phi, sign](const Tensor3& T) { return T + sign * apply(T, nullptr, &phi, &phi); };
    };
    auto vert78 = m([xi, eta, pp](const Tensor3& T) {
        return T - outer(contract_vector(apply(T, &pp, &pp, nullptr), xi, 2), eta);
    });
    auto mz_phi = [tz, phi](double sign) {
        return [tz, phi, sign](const Tensor3& T) -> Matrix {
            Matrix a = tz(T);
            return a + sign * phi.transpose() * a * phi;
        };
    };
    auto horiz = m([xi, eta, pp](const Tensor3& T) {
        const Matrix a = contract_vector(apply(T, nullptr, &pp, &pp), xi, 0);
        return T - outer(eta, a) + eta_middle(a, eta);
    });
    auto tx_sym = [tx](double sign) {
        return [tx, sign](const Tensor3& T) -> Matrix { Matrix a = tx(T); return a + sign * a.transpose(); };
    };
    auto tx_phi = [tx, phi](double sign) {
        return [tx, phi, sign](const Tensor3& T) -> Matrix {
            Matrix a = tx(T);
            return a + sign * phi.transpose() * a * phi;
        };
    };
    auto plus = [](std::vector<LinearMap> a, std::initializer_list<LinearMap> b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    if (key == "b12") return plus(base_h, {m(phi12(1.0)), m(phi23(1.0))});
    if (key == "2") return plus(base_h, {m(phi12(1.0)), m(phi23(1.0)), t_form});
    if (key == "3") return plus(base_h, {m(phi12(1.0)), m(phi23(-1.0))});
    if (key == "b45") return plus(base_h, {m(phi12(-1.0)), m([](const Tensor3& T) { return cyclic_sum(T); })});
    if (key == "5")
        return plus(base_h, {m(phi12(-1.0)), m([](const Tensor3& T) { return cyclic_sum(T); }), t_form});
    if (key == "6")
        return plus(base_h, {m(phi12(-1.0)), m([phi](const Tensor3& T) { return cyclic_sum(apply(T, 0, phi)); })});
    if (key == "7") return {vert78, m(mz_phi(1.0))};
    if (key == "8") return {vert78, m(mz_phi(-1.0))};
    if (key == "b91011") return {horiz, m(tx_sym(-1.0)), m(tx_phi(1.0))};
    if (key == "b9") return {horiz, m(tx_sym(-1.0)), m(tx_phi(1.0)), t_star};
    if (key == "b10") return {horiz, m(tx_sym(-1.0)), m(tx_phi(1.0)), t_form};
    if (key == "11") return {horiz, m(tx_sym(-1.0)), m(tx_phi(1.0)), t_form, t_star};
    if (key == "12") return {horiz, m(tx_sym(1.0)), m(tx_phi(1.0))};
    if (key == "13") return {horiz, m(tx_sym(-1.0)), m(tx_phi(-1.0))};
    if (key == "14") return {horiz, m(tx_sym(1.0)), m(tx_phi(-1.0))};
    if (key == "15")
        return {m([xi, eta](const Tensor3& T) {
            const Vector th = contract_vector(T, xi, 1) * xi;  // T(x, xi, xi)
            return T - outer(th, eta, eta) + outer(eta, th, eta);
        })};
    throw Error(ErrorKind::Parse, "unknown torsion key " + key);
}

}  // namespace

// --- cached spaces -------------------------------------------------------

const detail::OddFSpaces& ContactBStructure::f_spaces() const {
    std::call_once(cache_->f_once, [this] {
        auto sp = std::make_unique<detail::OddFSpaces>();
        const int d = dim();
        auto adm_maps = admissibility_conditions_odd(*this);
        sp->adm = kernel(sym23_space(d), {adm_maps[1]});
        std::vector<Subspace> parts, pairs;
        for (int i = 1; i <= 11; ++i) {
            Subspace k = kernel(sp->adm, class_conditions_odd(i, *this));
            Matrix img(2 * Eigen::Index(d) * d * d, k.dim());
            for (Eigen::Index c = 0; c < k.dim(); ++c)
                img.col(c) = pair_vec(nijenhuis_odd_from_F(Tensor3::from_vec(d, k.basis().col(c)), *this));
            sp->f[i - 1] = k;
            sp->pair[i - 1] = orthonormal_image(img);
            parts.push_back(k);
            pairs.push_back(sp->pair[i - 1]);
        }
        sp->split = DirectSum(parts, sp->adm.dim());
        sp->pair_split = DirectSum(pairs, sp->adm.dim());
        cache_->f = std::move(sp);
    });
    return *cache_->f;
}

const detail::OddTSpaces& ContactBStructure::t_spaces() const {
    std::call_once(cache_->t_once, [this] {
        auto sp = std::make_unique<detail::OddTSpaces>();
        const int d = dim();
        sp->anti = anti12_space(d);
        auto k = [&](const std::string& key) { return kernel(sp->anti, torsion_class_conditions(key, *this)); };
        const Matrix gi = metric().g_inv();
        const LinearMap gram = [d, gi](const Vector& v) {
            return Vector(apply(Tensor3::from_vec(d, v), &gi, &gi, &gi).vec());
        };
        const Subspace t2 = k("2"), t5 = k("5"), t11 = k("11");
        sp->t[0] = complement(t2, k("b12"), gram);
        sp->t[1] = t2;
        sp->t[2] = k("3");
        sp->t[3] = complement(t5, k("b45"), gram);
        sp->t[4] = t5;
        sp->t[5] = k("6");
        sp->t[6] = k("7");
        sp->t[7] = k("8");
        sp->t[8] = complement(t11, k("b9"), gram);
        sp->t[9] = complement(t11, k("b10"), gram);
        sp->t[10] = t11;
        sp->t[11] = k("12");
        sp->t[12] = k("13");
        sp->t[13] = k("14");
        sp->t[14] = k("15");
        sp->split = DirectSum(std::vector<Subspace>(sp->t.begin(), sp->t.end()), sp->anti.dim());
        cache_->t = std::move(sp);
    });
    return *cache_->t;
}

// --- fundamental tensor --------------------------------------------------

FundamentalOdd fundamental_odd(const Tensor3& F, const ContactBStructure& s) {
    if (F.dim() != s.dim()) throw Error(ErrorKind::Dimension, "F dimension does not match structure");
    FundamentalOdd out;
    out.F = F;
    out.theta = trace(F, s.trace_form(), {0, 1});
    out.theta_star = trace(apply(F, 1, s.phi()), s.trace_form(), {0, 1});
    out.omega = contract_vector(F, s.xi(), 0).transpose() * s.xi();
    return out;
}

double admissibility_residual_odd(const Tensor3& F, const ContactBStructure& s) {
    return relative(stacked_norm(admissibility_conditions_odd(s), F.vec()), F.norm());
}

FundamentalOdd admissible_F_odd(const Tensor3& raw, const ContactBStructure& s) {
    if (raw.dim() != s.dim()) throw Error(ErrorKind::Dimension, "raw tensor dimension mismatch");
    const Vector p = s.f_spaces().adm.project(raw.vec());
    return fundamental_odd(Tensor3::from_vec(s.dim(), p), s);
}

// --- Nijenhuis pair ------------------------------------------------------

NijenhuisOdd nijenhuis_odd_from_F(const Tensor3& F, const ContactBStructure& s) {
    const Matrix& phi = s.phi();
    const Tensor3 a = apply(F, 0, phi) - apply(F, 2, phi) + outer(nabla_eta(F, s), s.eta());
    return {anti12(a), sym12(a)};
}

double nijenhuis_property_residual_odd(const Tensor3& N, const Tensor3& N_hat, const ContactBStructure& s) {
    const Matrix& phi = s.phi();
    const Matrix pp = phi * phi;
    const double ref = std::sqrt(N.vec().squaredNorm() + N_hat.vec().squaredNorm());
    double worst = 0.0;
    auto track = [&](double r) { worst = std::max(worst, relative(r, ref)); };
    track((N + permute(N, {1, 0, 2})).norm());
    track((N_hat - permute(N_hat, {1, 0, 2})).norm());
    for (const Tensor3* X : {&N, &N_hat}) {
        track((apply(*X, nullptr, &phi, &phi) - apply(*X, nullptr, &pp, &pp)).norm());
        track((apply(*X, &phi, nullptr, &phi) - apply(*X, &pp, nullptr, &pp)).norm());
        track((apply(*X, &phi, &phi, nullptr) + apply(*X, &pp, &pp, nullptr)).norm());
    }
    const Matrix mixed = contract_vector(apply(N + N_hat, nullptr, &phi, &phi), s.xi(), 0);
    track((mixed + mixed.transpose()).norm());
    return worst;
}

FundamentalOdd F_from_nijenhuis_odd(const Tensor3& N, const Tensor3& N_hat, const ContactBStructure& s,
                                    const Tolerance& tol) {
    if (N.dim() != s.dim() || N_hat.dim() != s.dim())
        throw Error(ErrorKind::Dimension, "Nijenhuis tensors do not match structure dimension");
    const double r = nijenhuis_property_residual_odd(N, N_hat, s);
    if (r > tol.rel)
        throw Error(ErrorKind::Property, "Nijenhuis pair violates its property block (residual " + fmt(r) + ")");
    const Matrix& phi = s.phi();
    const Vector& xi = s.xi();
    const Vector& eta = s.eta();
    const Tensor3 sum = N + N_hat;
    const Tensor3 a = apply(sum, 0, phi);
    const Matrix nx = contract_vector(apply(sum, 2, phi), xi, 0);                       // (N+N^)(xi,y,phi z)
    const Vector nhxx = contract_vector(apply(N_hat, 2, phi), xi, 0).transpose() * xi;  // N^(xi,xi,phi .)
    const Tensor3 F = -0.25 * (a + permute(a, {0, 2, 1})) + 0.5 * (outer(eta, nx) + outer(eta, nhxx, eta));
    return fundamental_odd(F, s);
}

NijenhuisOdd class_nijenhuis_form(int cls, const Tensor3& F, const ContactBStructure& s) {
    const int d = s.dim();
    const int n = s.n();
    const Matrix& phi = s.phi();
    const Vector& xi = s.xi();
    const Vector& eta = s.eta();
    const Matrix g = s.metric().g();
    const Matrix gP = g * phi;
    const Matrix gPP = phi.transpose() * g * phi;
    const FundamentalOdd f = fundamental_odd(F, s);
    const Matrix m = nabla_eta(F, s);
    const Tensor3 zero(d);
    switch (cls) {
        case 1:
            return {zero, (2.0 / n) * (outer(gPP, Vector(phi.transpose() * f.theta)) + outer(gP, f.theta))};
        case 2: return {zero, 2.0 * (apply(F, 0, phi) - apply(F, 2, phi))};
        case 3: return {2.0 * (apply(F, 0, phi) - apply(F, 2, phi)), zero};
        case 4: return {zero, (2.0 / n) * f.theta.dot(xi) * outer(gP, eta)};
        case 5: return {zero, -(2.0 / n) * f.theta_star.dot(xi) * outer(gPP, eta)};
        case 6: return {zero, 4.0 * outer(m, eta)};
        case 7: return {4.0 * outer(m, eta), zero};
        case 8:
        case 9: {
            const Tensor3 a = outer(eta, m);
            return {2.0 * anti12(a), -2.0 * sym12(a)};
        }
        case 10: {
            const Tensor3 b = outer(eta, contract_vector(apply(F, 2, phi), xi, 0));
            return {-anti12(b), -sym12(b)};
        }
        case 11: {
            const Vector wphi = phi.transpose() * f.omega;
            const Tensor3 a = outer(eta, wphi, eta);
            return {anti12(a), sym12(a) - 2.0 * outer(eta, eta, wphi)};
        }
        default: throw Error(ErrorKind::Parse, "odd class index out of range");
    }
}

// --- classification ------------------------------------------------------

std::array<Tensor3, 11> class_components_odd(const Tensor3& F, const ContactBStructure& s) {
    const auto parts = s.f_spaces().split.split(F.vec());
    std::array<Tensor3, 11> out;
    for (int i = 0; i < 11; ++i) out[i] = Tensor3::from_vec(s.dim(), parts[i]);
    return out;
}

ClassLabelOdd classify_odd(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol) {
    if (F.dim() != s.dim()) throw Error(ErrorKind::Dimension, "F dimension does not match structure");
    ClassLabelOdd label;
    const int d = s.dim();
    const double nf = F.norm();
    const double adm = admissibility_residual_odd(F, s);
    label.residuals["admissibility"] = adm;
    if (adm > tol.rel) throw Error(ErrorKind::Admissibility, "F is not admissible (residual " + fmt(adm) + ")");
    if (nf <= tol.abs) {
        label.zero = true;
        return label;
    }

    // defining conditions and projection
    const auto comps = class_components_odd(F, s);
    for (int i = 1; i <= 11; ++i) {
        const std::string c = "F" + std::to_string(i);
        label.residuals["condition:" + c] = relative(stacked_norm(class_conditions_odd(i, s), F.vec()), nf);
        const double share = comps[i - 1].norm() / nf;
        label.residuals["component:" + c] = share;
        if (share > tol.rel) label.by_conditions |= odd_bit(i);
    }

    // Nijenhuis pair, split over the images of the class subspaces
    const NijenhuisOdd nj = nijenhuis_odd_from_F(F, s);
    const Vector pv = pair_vec(nj);
    const double np = pv.norm();
    label.residuals["N"] = relative(nj.N.norm(), nf);
    label.residuals["N_hat"] = relative(nj.N_hat.norm(), nf);
    const auto pparts = s.f_spaces().pair_split.split(pv);
    for (int i = 1; i <= 11; ++i) {
        const double share = pparts[i - 1].norm() / np;
        if (share <= tol.rel) continue;
        label.by_nijenhuis |= odd_bit(i);
        const NijenhuisOdd pi = pair_from_vec(d, pparts[i - 1]);
        const FundamentalOdd fi = F_from_nijenhuis_odd(pi.N, pi.N_hat, s, tol);
        const NijenhuisOdd table = class_nijenhuis_form(i, fi.F, s);
        const double r = relative(hyp({(pi.N - table.N).norm(), (pi.N_hat - table.N_hat).norm()}),
                                  pparts[i - 1].norm());
        label.residuals["table:F" + std::to_string(i)] = r;
        if (r > tol.rel)
            throw Error(ErrorKind::InconsistentClassification,
                        "Nijenhuis component of F" + std::to_string(i) + " does not have its class form (residual " +
                            fmt(r) + ")");
    }

    // phi-canonical torsion classes
    const Tensor3 T = phi_canonical_torsion_from_nijenhuis(phi_b_torsion_from_F(F, s), nj.N, s);
    const double nt = T.norm();
    const auto tparts = s.t_spaces().split.split(T.vec());
    std::array<double, 15> share{};
    for (int j = 1; j <= 15; ++j) {
        share[j - 1] = tparts[j - 1].norm() / nt;
        label.residuals["torsion:T" + std::to_string(j)] = share[j - 1];
        if (share[j - 1] > tol.rel) label.torsion_classes |= 1u << (j - 1);
    }
    for (int j = 1; j <= 15; ++j) {
        if (!(label.torsion_classes & (1u << (j - 1))) || j == 14) continue;
        if (kTorsionToClass[j] == 0)
            throw Error(ErrorKind::InconsistentClassification,
                        "canonical torsion has a T" + std::to_string(j) + " component, which no class produces");
        label.by_torsion |= odd_bit(kTorsionToClass[j]);
    }
    if (label.torsion_classes & (1u << 13)) {
        // F8 also feeds T14 through T(xi,y,z) = 1/2 T(y,z,xi); the rest is F10.
        const Tensor3 t8 = Tensor3::from_vec(d, tparts[7]);
        const Matrix x = 0.5 * s.h_proj().transpose() * contract_vector(t8, s.xi(), 2) * s.h_proj();
        const Tensor3 pred = outer(s.eta(), x) - eta_middle(x, s.eta());
        const double rest = (Tensor3::from_vec(d, tparts[13]) - pred).norm() / nt;
        label.residuals["torsion:T14-F10"] = rest;
        if (rest > tol.rel) label.by_torsion |= odd_bit(10);
    }

    label.members = label.by_conditions;
    if (label.by_nijenhuis != label.members || label.by_torsion != label.members)
        throw Error(ErrorKind::InconsistentClassification,
                    "classification routes disagree: conditions " + odd_class_name(label.by_conditions) +
                        ", Nijenhuis " + odd_class_name(label.by_nijenhuis) + ", torsion " +
                        odd_class_name(label.by_torsion));
    return label;
}

// --- torsion -------------------------------------------------------------

std::array<Vector, 3> torsion_forms_odd(const Tensor3& T, const ContactBStructure& s) {
    return {trace(T, s.trace_form(), {1, 2}), trace(apply(T, 2, s.phi()), s.trace_form(), {1, 2}),
            Vector(contract_vector(T, s.xi(), 1) * s.xi())};
}

TorsionOdd decompose_torsion_odd(const Tensor3& T, const ContactBStructure& s, const Tolerance& tol) {
    if (T.dim() != s.dim()) throw Error(ErrorKind::Dimension, "torsion dimension mismatch");
    const double skew = relative((T + permute(T, {1, 0, 2})).norm(), T.norm(), tol);
    if (skew > tol.rel) throw Error(ErrorKind::Property, "torsion is not antisymmetric in its first two slots");
    TorsionOdd out;
    out.T = T;
    const auto parts = s.t_spaces().split.split(T.vec());
    for (int j = 0; j < 15; ++j) out.components[j] = Tensor3::from_vec(s.dim(), parts[j]);
    auto f = torsion_forms_odd(T, s);
    out.t_form = f[0];
    out.t_star_form = f[1];
    out.t_hat_form = f[2];
    return out;
}

NaturalityResultOdd naturality_check_odd(const Tensor3& Q, const Tensor3& F, const ContactBStructure& s,
                                         const Tolerance& tol) {
    const Matrix& phi = s.phi();
    NaturalityResultOdd r;
    const double ref = std::max(F.norm(), Q.norm());
    r.f_residual = relative((F - (apply(Q, 2, phi) - apply(Q, 1, phi))).norm(), ref, tol);
    r.skew_residual = relative((Q + permute(Q, {0, 2, 1})).norm(), ref, tol);
    r.natural = r.f_residual < tol.rel && r.skew_residual < tol.rel;
    return r;
}

Matrix d_eta_from_F(const Tensor3& F, const ContactBStructure& s) {
    const Matrix m = nabla_eta(F, s);
    return m - m.transpose();
}

Tensor3 eta_wedge(const Matrix& w, const ContactBStructure& s) { return cyclic_sum(outer(s.eta(), w)); }

Tensor3 phi_b_torsion_from_F(const Tensor3& F, const ContactBStructure& s) {
    const Tensor3 fp = apply(F, 1, s.phi());
    const Matrix m = nabla_eta(F, s);
    return 0.5 * anti12(fp + outer(m, s.eta()) + 2.0 * outer(s.eta(), m));
}

Tensor3 phi_b_torsion_from_nijenhuis(const Tensor3& N, const Tensor3& N_hat, const ContactBStructure& s) {
    const Matrix& H = s.h_proj();
    const Matrix& V = s.v_proj();
    const Tensor3 hN = apply(N, &H, &H, &H);
    const Tensor3 hNh = apply(N_hat, &H, &H, &H);
    const Tensor3 t1 = 0.125 * (hN + cyclic_sum(hN) + permute(hNh, {2, 1, 0}) - permute(hNh, {2, 0, 1}));
    const Tensor3 inner = 2.0 * apply(N, &V, &H, &H) + permute(apply(N, &H, &H, &V), {1, 2, 0}) +
                          permute(apply(N_hat, &H, &H, &V), {1, 2, 0}) + apply(N, &H, &H, &V) +
                          permute(apply(N, &V, &H, &H), {2, 0, 1}) - permute(apply(N_hat, &V, &H, &H), {2, 0, 1}) -
                          2.0 * permute(apply(N_hat, &V, &V, &H), {2, 0, 1});
    return t1 + 0.25 * anti12(inner);
}

Tensor3 phi_canonical_torsion_from_nijenhuis(const Tensor3& T_b, const Tensor3& N, const ContactBStructure& s) {
    const Matrix& H = s.h_proj();
    const Matrix& V = s.v_proj();
    const Tensor3 hN = apply(N, &H, &H, &H);
    const Tensor3 hhv = apply(N, &H, &H, &V);
    return T_b + 0.125 * (hN - cyclic_sum(hN)) + 0.25 * (hhv - cyclic_sum(hhv));
}

Tensor3 phi_canonical_identity(const Tensor3& T, const ContactBStructure& s) {
    const Matrix& phi = s.phi();
    const Vector& xi = s.xi();
    const Vector& eta = s.eta();
    const Matrix t0 = contract_vector(T, xi, 0);  // T(xi,y,z)
    const Matrix t1 = contract_vector(T, xi, 1);  // T(x,xi,z)
    const Matrix t2 = contract_vector(T, xi, 2);  // T(x,z,xi) read as (x,z)
    const Vector that = t1 * xi;                   // T(z,xi,xi)
    const Matrix b = t1 - t2 - eta * that.transpose();
    const Tensor3 a = T - apply(T, nullptr, &phi, &phi) - outer(eta, Matrix(t0 - phi.transpose() * t0 * phi)) -
                      eta_middle(b, eta);
    return a - permute(a, {0, 2, 1});
}

double phi_canonical_class_residual(int cls, const Tensor3& T, const ContactBStructure& s) {
    const int n = s.n();
    const Matrix& phi = s.phi();
    const Matrix pp = phi * phi;
    const Vector& xi = s.xi();
    const Vector& eta = s.eta();
    const Matrix& g = s.metric().g();
    const auto forms = torsion_forms_odd(T, s);
    const Vector& t = forms[0];
    const Vector& ts = forms[1];
    const Vector& th = forms[2];
    const Matrix tx = contract_vector(T, xi, 0);
    const Matrix tz = contract_vector(T, xi, 2);
    const Tensor3 hor = T - outer(eta, tx) + eta_middle(tx, eta);
    auto swap12 = [](const Tensor3& a) { return permute(a, {1, 0, 2}); };
    double r = 0.0;
    switch (cls) {
        case 1: {
            const Tensor3 a = outer(Vector(pp.transpose() * t), Matrix(pp.transpose() * g)) +
                              outer(Vector(phi.transpose() * t), Matrix(phi.transpose() * g));
            r = (T - (1.0 / (2.0 * n)) * (a - swap12(a))).norm();
            break;
        }
        case 2: r = hyp({tx.norm(), tz.norm(), (T - apply(T, &phi, &phi, nullptr)).norm(), t.norm()}); break;
        case 3: r = hyp({tx.norm(), tz.norm(), (T - apply(T, nullptr, &phi, &phi)).norm()}); break;
        case 4: {
            const Tensor3 a = outer(eta, Matrix(phi.transpose() * g));
            r = (T - (ts.dot(xi) / (2.0 * n)) * (swap12(a) - a)).norm();
            break;
        }
        case 5: {
            const Tensor3 a = outer(eta, Matrix(pp.transpose() * g));
            r = (T - (t.dot(xi) / (2.0 * n)) * (swap12(a) - a)).norm();
            break;
        }
        case 6: r = hyp({hor.norm(), (tx - tx.transpose()).norm(), (tx + phi.transpose() * tx * phi).norm()}); break;
        case 7:
            // T = dEta (x) eta with dEta(phi x, phi y) = -dEta(x,y); T(xi,.,.) = 0
            r = hyp({(T - outer(tz, eta)).norm(), tx.norm(), (tz + phi.transpose() * tz * phi).norm()});
            break;
        case 8: {
            const Tensor3 full = hor - outer(tz, eta);
            r = hyp({full.norm(), (tx + tx.transpose()).norm(), (tx - phi.transpose() * tx * phi).norm(),
                     (tx - 0.5 * tz).norm(), (tx - 0.5 * phi.transpose() * tz * phi).norm()});
            break;
        }
        case 9:
        case 10: {
            const double sign = cls == 9 ? 1.0 : -1.0;
            r = hyp({hor.norm(), (tx - sign * tx.transpose()).norm(), (tx - phi.transpose() * tx * phi).norm()});
            break;
        }
        case 11: r = (T - outer(th, eta, eta) + outer(eta, th, eta)).norm(); break;
        default: throw Error(ErrorKind::Parse, "odd class index out of range");
    }
    return relative(r, T.norm());
}

// --- connections ---------------------------------------------------------

namespace {

Tensor3 phi_b_potential(const Tensor3& F, const ContactBStructure& s) {
    const Tensor3 fp = apply(F, 1, s.phi());
    const Matrix m = nabla_eta(F, s);
    return 0.5 * (fp + outer(m, s.eta())) - eta_middle(m, s.eta());
}

}  // namespace

ConnectionOdd phi_b_connection(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol) {
    ConnectionOdd c;
    c.Q = phi_b_potential(F, s);
    c.torsion = decompose_torsion_odd(torsion_of_potential(c.Q), s, tol);
    return c;
}

ConnectionOdd phi_canonical_connection(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol) {
    const Matrix& phi = s.phi();
    const Matrix pp = phi * phi;
    const NijenhuisOdd nj = nijenhuis_odd_from_F(F, s);
    const Tensor3 x1 = permute(apply(nj.N, &pp, &pp, &pp), {2, 1, 0});
    const Matrix w = contract_vector(apply(nj.N, &phi, &phi, nullptr), s.xi(), 2);  // N(phi a, phi b, xi)
    const Tensor3 x2 = outer(s.eta(), Matrix(w.transpose()));
    ConnectionOdd c;
    c.Q = phi_b_potential(F, s) - 0.125 * (x1 + 2.0 * x2);
    c.torsion = decompose_torsion_odd(torsion_of_potential(c.Q), s, tol);
    return c;
}

ConnectionOdd phi_kt_connection(const Tensor3& F, const ContactBStructure& s, const Tolerance& tol) {
    const NijenhuisOdd nj = nijenhuis_odd_from_F(F, s);
    const double r = relative(nj.N_hat.norm(), F.norm(), tol);
    if (r > tol.rel)
        throw Error(ErrorKind::ClassPrecondition,
                    "a phiKT-connection exists if and only if N_hat vanishes, i.e. the manifold belongs to "
                    "F3+F7; relative |N_hat| = " + fmt(r));
    const Matrix m = nabla_eta(F, s);
    const Tensor3 T = -0.5 * cyclic_sum(apply(F, 2, s.phi()) - 3.0 * outer(s.eta(), m));
    ConnectionOdd c;
    c.Q = potential_of_torsion(T);
    c.torsion = decompose_torsion_odd(T, s, tol);
    return c;
}

ContactBStructure contact_conformal_transform(const ContactBStructure& s, double u, double v, double w,
                                              const Tolerance& tol) {
    const Matrix& g = s.metric().g();
    const Matrix gphi = 0.5 * (g * s.phi() + (g * s.phi()).transpose());
    const double e2u = std::exp(2.0 * u);
    const Matrix eta_eta = s.eta() * s.eta().transpose();
    const Matrix gbar = e2u * std::cos(2.0 * v) * g + e2u * std::sin(2.0 * v) * gphi +
                        (std::exp(2.0 * w) - e2u * std::cos(2.0 * v)) * eta_eta;
    return validate_contact_b(s.phi(), std::exp(-w) * s.xi(), std::exp(w) * s.eta(), gbar, tol);
}

}  // namespace nk
