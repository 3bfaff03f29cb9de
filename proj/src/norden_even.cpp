#include "nordenkit/norden_even.hpp"

#include <cmath>
#include <sstream>

#include "nordenkit/detail/spaces.hpp"

namespace nk {

namespace {

constexpr std::array<unsigned, 6> kRowMasks = {W1, W2, W3, W1 | W2, W1 | W3, W2 | W3};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

void require(bool ok, const std::string& what, double residual) {
    if (!ok) throw Error(ErrorKind::Axiom, what + " fails (residual " + fmt(residual) + ")");
}

double stacked_norm(const std::vector<LinearMap>& maps, const Vector& v) {
    double s = 0.0;
    for (const auto& f : maps) s += f(v).squaredNorm();
    return std::sqrt(s);
}

Tensor3 K_op(const Tensor3& F, const Matrix& J) { return apply(F, nullptr, &J, &J); }

Vector lee(const Tensor3& F, const Matrix& inv) { return trace(F, inv, {0, 1}); }

// W1 form of the Nijenhuis pair: (1/2n){g nu + g~ nu~}.
Tensor3 w1_nijenhuis(const Vector& nu, const Vector& nu_t, const NordenStructure& s) {
    return (1.0 / (2.0 * s.n())) *
           (outer(s.metric().g(), nu) + outer(s.assoc_metric().g(), nu_t));
}

unsigned members_from_rows(const std::array<double, 6>& rows, double tol) {
    unsigned m = kAllEven;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r] < tol) m &= kRowMasks[r];
    return m;
}

// Torsion-side rows on the (1,2) form T(x,y)^k.
std::array<double, 6> torsion_rows(const Tensor3& T, const NordenStructure& s) {
    const Matrix& J = s.J();
    const int n = s.n();
    const int d = s.dim();
    const Tensor3 T12 = raise_last(T, s.metric().g_inv());
    const Vector t = trace(T, s.metric().g_inv(), {1, 2});
    const Vector tJ = J.transpose() * t;  // t(J.)
    const Matrix I = Matrix::Identity(d, d);
    const double ref = T.norm();

    // (x,y,k): t(x) d^k_y - t(y) d^k_x + t(Jx) J^k_y - t(Jy) J^k_x
    Tensor3 w1(d), w13(d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int k = 0; k < d; ++k) {
                w1(x, y, k) = t(x) * I(k, y) - t(y) * I(k, x) + tJ(x) * J(k, y) - tJ(y) * J(k, x);
                w13(x, y, k) = tJ(y) * I(k, x) - t(y) * J(k, x);
            }
    w1 *= 1.0 / (2.0 * n);
    w13 *= 1.0 / n;

    const Tensor3 TJJ = apply(T12, &J, &J, nullptr);
    const Tensor3 TJx = apply(T12, 0, J);
    // J applied to the vector value: (J T)^k = J^k_l T^l
    const Tensor3 JT = apply(T12, 2, J.transpose());
    const Tensor3 sig = cyclic_sum(T);

    auto r = [&](double v) { return relative(v, ref); };
    auto hyp = [](double a, double b) { return std::sqrt(a * a + b * b); };
    return {
        r((T12 - w1).norm()),
        r(hyp((T12 - TJJ).norm(), t.norm())),
        r((TJx + JT).norm()),
        r(hyp((T12 - TJJ).norm(), sig.norm())),
        r((TJx + JT - w13).norm()),
        r(t.norm()),
    };
}

std::array<double, 6> nijenhuis_rows(const NijenhuisEven& nj, const NordenStructure& s) {
    const Tensor3 w1 = w1_nijenhuis(nj.nu_hat, nj.nu_hat_tilde, s);
    const double nN = nj.N.norm();
    const double nH = nj.N_hat.norm();
    const double nW = (nj.N_hat - w1).norm();
    const double nu = nj.nu_hat.norm();
    const double ref = std::sqrt(nN * nN + nH * nH);
    auto r = [&](double v) { return relative(v, ref); };
    auto hyp = [](double a, double b) { return std::sqrt(a * a + b * b); };
    return {r(hyp(nN, nW)), r(hyp(nN, nu)), r(nH), r(nN), r(nW), r(nu)};
}

}  // namespace

// --- names ---------------------------------------------------------------

std::string even_class_name(unsigned mask) {
    if (mask == 0) return "W0";
    std::string out;
    for (int i = 0; i < 3; ++i)
        if (mask & (1u << i)) out += (out.empty() ? "W" : "+W") + std::to_string(i + 1);
    return out;
}

unsigned parse_even_class(const std::string& text) {
    unsigned mask = 0;
    std::string t = text;
    // normalize the direct-sum sign (UTF-8 E2 8A 95) to '+'
    for (std::size_t p; (p = t.find("\xE2\x8A\x95")) != std::string::npos;) t.replace(p, 3, "+");
    std::stringstream ss(t);
    std::string part;
    bool any = false;
    while (std::getline(ss, part, '+')) {
        any = true;
        if (part == "W0") continue;
        if (part == "W1") mask |= W1;
        else if (part == "W2") mask |= W2;
        else if (part == "W3") mask |= W3;
        else throw Error(ErrorKind::Parse, "unknown even class '" + part + "'");
    }
    if (!any) throw Error(ErrorKind::Parse, "empty class expression");
    return mask;
}

// --- structure -----------------------------------------------------------

NordenStructure validate_norden(const Matrix& J, const Matrix& g, const Tolerance& tol) {
    if (J.rows() != J.cols() || g.rows() != g.cols() || J.rows() != g.rows())
        throw Error(ErrorKind::Dimension, "J and g must be square matrices of equal size");
    const Eigen::Index d = J.rows();
    if (d == 0 || d % 2 != 0) throw Error(ErrorKind::Dimension, "Norden structure needs even dimension");
    if (!J.allFinite() || !g.allFinite()) throw Error(ErrorKind::Axiom, "non-finite entries");

    const Matrix I = Matrix::Identity(d, d);
    const double jscale = std::max(1.0, J.squaredNorm() / double(d));
    const double gscale = std::max(g.norm(), tol.abs);

    const double r_jj = (J * J + I).norm() / (std::sqrt(double(d)) * jscale);
    require(r_jj < tol.rel, "J^2 = -Id", r_jj);

    NordenStructure s;
    s.metric_ = MetricPair::from_matrix(g, tol);
    const double r_norden = (J.transpose() * g * J + g).norm() / (gscale * jscale);
    require(r_norden < tol.rel, "g(Jx,Jy) = -g(x,y)", r_norden);
    const Matrix gJ = g * J;
    const double r_sym = (gJ - gJ.transpose()).norm() / (gscale * std::sqrt(jscale));
    require(r_sym < tol.rel, "g(Jx,y) = g(x,Jy)", r_sym);

    const int n = int(d / 2);
    s.n_ = n;
    s.J_ = J;
    s.assoc_ = MetricPair::from_matrix(0.5 * (gJ + gJ.transpose()), tol);
    const Signature want{n, n};
    if (!(s.metric_.signature() == want))
        throw Error(ErrorKind::Signature, "metric signature is not (n,n)");
    if (!(s.assoc_.signature() == want))
        throw Error(ErrorKind::Signature, "associated metric signature is not (n,n)");
    s.cache_ = std::make_shared<detail::EvenCache>();
    return s;
}

NordenStructure canonical_norden(int n) {
    const int d = 2 * n;
    Matrix J = Matrix::Zero(d, d);
    J.topRightCorner(n, n) = -Matrix::Identity(n, n);
    J.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    Matrix g = Matrix::Identity(d, d);
    g.bottomRightCorner(n, n) *= -1.0;
    return validate_norden(J, g);
}

// --- conditions ----------------------------------------------------------

std::vector<LinearMap> admissibility_conditions_even(const NordenStructure& s) {
    const int d = s.dim();
    const Matrix J = s.J();
    return {
        tensor3_map(d, [](const Tensor3& F) { return F - permute(F, {0, 2, 1}); }),
        tensor3_map(d, [J](const Tensor3& F) { return F - K_op(F, J); }),
    };
}

std::vector<LinearMap> class_conditions_even(unsigned mask, const NordenStructure& s) {
    const int d = s.dim();
    const Matrix J = s.J();
    const Matrix gi = s.metric().g_inv();
    const NordenStructure sc = s;
    auto w1_row = tensor3_map(d, [sc, gi](const Tensor3& F) { return F - w1_form(lee(F, gi), sc); });
    auto sigmaJ = tensor3_map(d, [J](const Tensor3& F) { return cyclic_sum(apply(F, 2, J)); });
    auto theta = tensor3_map(d, [gi](const Tensor3& F) { return lee(F, gi); });
    auto sigma = tensor3_map(d, [](const Tensor3& F) { return cyclic_sum(F); });
    auto w13 = tensor3_map(d, [sc, gi, J](const Tensor3& F) {
        const Vector th = lee(F, gi);
        const Tensor3 a = outer(sc.metric().g(), th) + outer(sc.assoc_metric().g(), Vector(J.transpose() * th));
        return cyclic_sum(F) - (1.0 / sc.n()) * cyclic_sum(a);
    });
    switch (mask) {
        case W1: return {w1_row};
        case W2: return {sigmaJ, theta};
        case W3: return {sigma};
        case W1 | W2: return {sigmaJ};
        case W1 | W3: return {w13};
        case W2 | W3: return {theta};
        default: throw Error(ErrorKind::Parse, "no defining rows for class " + even_class_name(mask));
    }
}

std::vector<LinearMap> torsion_conditions_even(int cls, const NordenStructure& s) {
    const int d = s.dim();
    const Matrix J = s.J();
    auto A = [J](const Tensor3& T) { return apply(T, &J, &J, nullptr); };
    auto B = [J](const Tensor3& T) { return apply(T, &J, nullptr, &J); };
    std::vector<LinearMap> out{tensor3_map(d, [](const Tensor3& T) { return T + permute(T, {1, 0, 2}); })};
    switch (cls) {
        case 1:
            out.push_back(tensor3_map(d, [A](const Tensor3& T) { return T + A(T); }));
            out.push_back(tensor3_map(d, [B](const Tensor3& T) { return T + B(T); }));
            break;
        case 2:
            out.push_back(tensor3_map(d, [A](const Tensor3& T) { return T + A(T); }));
            out.push_back(tensor3_map(d, [B](const Tensor3& T) { return T - B(T); }));
            break;
        case 3:
            out.push_back(tensor3_map(d, [A](const Tensor3& T) { return T - A(T); }));
            out.push_back(tensor3_map(d, [](const Tensor3& T) { return cyclic_sum(T); }));
            break;
        case 4:
            out.push_back(tensor3_map(d, [A](const Tensor3& T) { return T - A(T); }));
            out.push_back(tensor3_map(d, [J](const Tensor3& T) { return cyclic_sum(apply(T, 0, J)); }));
            break;
        default: throw Error(ErrorKind::Parse, "torsion class index out of range");
    }
    return out;
}

// --- cached spaces -------------------------------------------------------

const detail::EvenFSpaces& NordenStructure::f_spaces() const {
    std::call_once(cache_->f_once, [this] {
        auto sp = std::make_unique<detail::EvenFSpaces>();
        const int d = dim();
        const Matrix J = J_;
        sp->adm = kernel(sym23_space(d),
                         {tensor3_map(d, [J](const Tensor3& F) { return F - K_op(F, J); })});
        const unsigned masks[3] = {W1, W2, W3};
        for (int i = 0; i < 3; ++i) sp->w[i] = kernel(sp->adm, class_conditions_even(masks[i], *this));
        sp->split = DirectSum({sp->w[0], sp->w[1], sp->w[2]}, sp->adm.dim());
        cache_->f = std::move(sp);
    });
    return *cache_->f;
}

const detail::EvenTSpaces& NordenStructure::t_spaces() const {
    std::call_once(cache_->t_once, [this] {
        auto sp = std::make_unique<detail::EvenTSpaces>();
        const int d = dim();
        const Matrix J = J_;
        sp->anti = anti12_space(d);
        sp->a_plus = kernel(sp->anti, {tensor3_map(d, [J](const Tensor3& T) {
                                return T - apply(T, &J, &J, nullptr);
                            })});
        sp->t3 = kernel(sp->a_plus, {tensor3_map(d, [](const Tensor3& T) { return cyclic_sum(T); })});
        sp->t4 = kernel(sp->a_plus, {tensor3_map(d, [J](const Tensor3& T) {
                            return cyclic_sum(apply(T, 0, J));
                        })});
        sp->split34 = DirectSum({sp->t3, sp->t4}, sp->a_plus.dim());
        cache_->t = std::move(sp);
    });
    return *cache_->t;
}

// --- fundamental tensor --------------------------------------------------

FundamentalEven fundamental_even(const Tensor3& F, const NordenStructure& s) {
    if (F.dim() != s.dim()) throw Error(ErrorKind::Dimension, "F dimension does not match structure");
    return {F, lee(F, s.metric().g_inv()), lee(F, s.assoc_metric().g_inv())};
}

double admissibility_residual_even(const Tensor3& F, const NordenStructure& s) {
    return relative(stacked_norm(admissibility_conditions_even(s), F.vec()), F.norm());
}

FundamentalEven admissible_F_even(const Tensor3& raw, const NordenStructure& s) {
    if (raw.dim() != s.dim()) throw Error(ErrorKind::Dimension, "raw tensor dimension mismatch");
    Tensor3 F = 0.5 * (raw + permute(raw, {0, 2, 1}));
    F = 0.5 * (F + K_op(F, s.J()));
    return fundamental_even(F, s);
}

// --- Nijenhuis pair ------------------------------------------------------

NijenhuisEven nijenhuis_from_F_even(const Tensor3& F, const NordenStructure& s) {
    const Tensor3 a = apply(F, 1, s.J()) + apply(F, 0, s.J());
    NijenhuisEven nj;
    nj.N = anti12(a);
    nj.N_hat = sym12(a);
    nj.nu_hat = lee(nj.N_hat, s.metric().g_inv());
    nj.nu_hat_tilde = lee(nj.N_hat, s.assoc_metric().g_inv());
    return nj;
}

double nijenhuis_property_residual_even(const Tensor3& N, const Tensor3& N_hat,
                                        const NordenStructure& s) {
    const Matrix& J = s.J();
    const double ref = std::sqrt(N.vec().squaredNorm() + N_hat.vec().squaredNorm());
    double worst = 0.0;
    auto track = [&](const Tensor3& r) { worst = std::max(worst, relative(r.norm(), ref)); };
    track(N + permute(N, {1, 0, 2}));
    track(N_hat - permute(N_hat, {1, 0, 2}));
    for (const Tensor3* X : {&N, &N_hat}) {
        track(*X - apply(*X, nullptr, &J, &J));
        track(*X - apply(*X, &J, nullptr, &J));
        track(*X + apply(*X, &J, &J, nullptr));
        track(apply(*X, 0, J) - apply(*X, 1, J));
        track(apply(*X, 0, J) + apply(*X, 2, J));
    }
    return worst;
}

FundamentalEven F_from_nijenhuis_even(const Tensor3& N, const Tensor3& N_hat,
                                      const NordenStructure& s, const Tolerance& tol) {
    if (N.dim() != s.dim() || N_hat.dim() != s.dim())
        throw Error(ErrorKind::Dimension, "Nijenhuis tensors do not match structure dimension");
    const double r = nijenhuis_property_residual_even(N, N_hat, s);
    if (r > tol.rel)
        throw Error(ErrorKind::Property, "Nijenhuis pair violates its symmetry properties (residual " +
                                             fmt(r) + ")");
    const Tensor3 a = apply(N + N_hat, 0, s.J());
    return fundamental_even(-0.25 * (a + permute(a, {0, 2, 1})), s);
}

// --- classes -------------------------------------------------------------

Tensor3 w1_form(const Vector& theta, const NordenStructure& s) {
    const Vector thJ = s.J().transpose() * theta;
    const Tensor3 a = outer(s.metric().g(), theta) + outer(s.assoc_metric().g(), thJ);
    return (1.0 / (2.0 * s.n())) * sym23(a);
}

std::array<Tensor3, 3> class_components_even(const Tensor3& F, const NordenStructure& s,
                                             const Tolerance& tol) {
    const auto& sp = s.f_spaces();
    (void)tol;
    const auto parts = sp.split.split(F.vec());
    return {Tensor3::from_vec(s.dim(), parts[0]), Tensor3::from_vec(s.dim(), parts[1]),
            Tensor3::from_vec(s.dim(), parts[2])};
}

ClassLabelEven classify_even(const Tensor3& F, const NordenStructure& s, const Tolerance& tol) {
    if (F.dim() != s.dim()) throw Error(ErrorKind::Dimension, "F dimension does not match structure");
    ClassLabelEven label;
    const double nf = F.norm();
    const double adm = admissibility_residual_even(F, s);
    label.residuals["admissibility"] = adm;
    if (adm > tol.rel)
        throw Error(ErrorKind::Admissibility, "F is not admissible (residual " + fmt(adm) + ")");
    if (nf <= tol.abs) {
        label.zero = true;
        return label;
    }

    const char* row_names[6] = {"W1", "W2", "W3", "W1+W2", "W1+W3", "W2+W3"};

    std::array<double, 6> f_rows{};
    for (std::size_t r = 0; r < 6; ++r)
        f_rows[r] = relative(stacked_norm(class_conditions_even(kRowMasks[r], s), F.vec()), nf);
    const NijenhuisEven nj = nijenhuis_from_F_even(F, s);
    const auto n_rows = nijenhuis_rows(nj, s);
    const Tensor3 Tc = canonical_torsion_even(nj.N, nj.N_hat);
    const auto t_rows = torsion_rows(Tc, s);
    for (std::size_t r = 0; r < 6; ++r) {
        label.residuals[std::string("F:") + row_names[r]] = f_rows[r];
        label.residuals[std::string("N:") + row_names[r]] = n_rows[r];
        label.residuals[std::string("T:") + row_names[r]] = t_rows[r];
    }
    label.by_conditions = members_from_rows(f_rows, tol.rel);
    label.by_nijenhuis = members_from_rows(n_rows, tol.rel);
    label.by_torsion = members_from_rows(t_rows, tol.rel);

    const auto comps = class_components_even(F, s, tol);
    for (int i = 0; i < 3; ++i) {
        const double c = comps[i].norm() / nf;
        label.residuals["component:W" + std::to_string(i + 1)] = c;
        if (c > tol.rel) label.by_projection |= (1u << i);
    }
    label.members = label.by_conditions;
    if (label.by_nijenhuis != label.members || label.by_torsion != label.members ||
        label.by_projection != label.members)
        throw Error(ErrorKind::InconsistentClassification,
                    "classification routes disagree: conditions " + even_class_name(label.by_conditions) +
                        ", Nijenhuis " + even_class_name(label.by_nijenhuis) + ", torsion " +
                        even_class_name(label.by_torsion) + ", projection " +
                        even_class_name(label.by_projection));
    return label;
}

// --- torsion -------------------------------------------------------------

TorsionEven decompose_torsion_even(const Tensor3& T, const NordenStructure& s, const Tolerance& tol) {
    if (T.dim() != s.dim()) throw Error(ErrorKind::Dimension, "torsion dimension mismatch");
    const double skew = relative((T + permute(T, {1, 0, 2})).norm(), T.norm(), tol);
    if (skew > tol.rel)
        throw Error(ErrorKind::Property, "torsion is not antisymmetric in its first two slots");
    const Matrix& J = s.J();
    TorsionEven out;
    out.T = T;
    const Tensor3 minus = 0.5 * (T - apply(T, &J, &J, nullptr));
    const Tensor3 plus = T - minus;
    const Tensor3 bm = apply(minus, &J, nullptr, &J);
    out.components[0] = 0.5 * (minus - bm);
    out.components[1] = 0.5 * (minus + bm);
    const auto parts = s.t_spaces().split34.split(plus.vec());
    out.components[2] = Tensor3::from_vec(s.dim(), parts[0]);
    out.components[3] = Tensor3::from_vec(s.dim(), parts[1]);
    out.t_form = trace(T, s.metric().g_inv(), {1, 2});
    return out;
}

NaturalityResult naturality_check_even(const Tensor3& Q, const Tensor3& F, const NordenStructure& s,
                                       const Tolerance& tol) {
    const Matrix& J = s.J();
    NaturalityResult r;
    const double ref = std::max(F.norm(), Q.norm());
    r.f_residual = relative((F - (apply(Q, 2, J) - apply(Q, 1, J))).norm(), ref, tol);
    r.skew_residual = relative((Q + permute(Q, {0, 2, 1})).norm(), ref, tol);
    r.natural = r.f_residual < tol.rel && r.skew_residual < tol.rel;
    return r;
}

Tensor3 canonical_torsion_even(const Tensor3& N, const Tensor3& N_hat) {
    return 0.25 * N + 0.125 * (permute(N_hat, {2, 1, 0}) - permute(N_hat, {2, 0, 1}));
}

Tensor3 canonical_identity_even(const Tensor3& T, const NordenStructure& s) {
    const Matrix& J = s.J();
    const Tensor3 yzx = permute(T, {1, 2, 0});
    return T + yzx - apply(T, &J, nullptr, &J) - apply(yzx, &J, nullptr, &J);
}

ConnectionEven b_connection_even(const Tensor3& F, const NordenStructure& s, const Tolerance& tol) {
    ConnectionEven c;
    c.Q = -0.5 * apply(F, 2, s.J());
    c.torsion = decompose_torsion_even(torsion_of_potential(c.Q), s, tol);
    return c;
}

ConnectionEven canonical_connection_even(const Tensor3& F, const NordenStructure& s,
                                         const Tolerance& tol) {
    const NijenhuisEven nj = nijenhuis_from_F_even(F, s);
    const Tensor3 T = canonical_torsion_even(nj.N, nj.N_hat);
    ConnectionEven c;
    c.Q = potential_of_torsion(T);
    c.torsion = decompose_torsion_even(T, s, tol);
    return c;
}

ConnectionEven kt_connection_even(const Tensor3& F, const NordenStructure& s, const Tolerance& tol) {
    const NijenhuisEven nj = nijenhuis_from_F_even(F, s);
    const double r = relative(nj.N_hat.norm(), F.norm(), tol);
    if (r > tol.rel)
        throw Error(ErrorKind::ClassPrecondition,
                    "a KT-connection exists if and only if the manifold belongs to W3 "
                    "(N_hat = 0); relative |N_hat| = " + fmt(r));
    ConnectionEven c;
    c.Q = -0.25 * cyclic_sum(apply(F, 2, s.J()));
    c.torsion = decompose_torsion_even(torsion_of_potential(c.Q), s, tol);
    return c;
}

NordenStructure conformal_transform_even(const NordenStructure& s, double u, double v,
                                         const Tolerance& tol) {
    const Matrix g = std::exp(2.0 * u) *
                     (std::cos(2.0 * v) * s.metric().g() + std::sin(2.0 * v) * s.assoc_metric().g());
    return validate_norden(s.J(), g, tol);
}

}  // namespace nk
