#include "nordenkit/selftest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "nordenkit/detail/spaces.hpp"

namespace nk {

std::string case_name(const SelftestCase& c) {
    return std::string(c.parity == Parity::Even ? "even" : "odd") + " n=" + std::to_string(c.n);
}

void CheckStat::record(double residual) {
    ++count;
    if (!std::isfinite(residual) || residual >= tolerance) ++failures;
    if (!std::isfinite(residual) || residual > max_residual) max_residual = residual;
}

void CheckStat::record(bool ok) {
    ++count;
    if (!ok) ++failures;
}

bool SelftestReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckStat& c) { return c.passed(); });
}

const CheckStat* SelftestReport::find(const std::string& group, const std::string& name) const {
    for (const auto& c : checks)
        if (c.group == group && c.name == name) return &c;
    return nullptr;
}

namespace {

// Keeps checks in first-use order so reports are stable.
class Ledger {
public:
    Ledger(std::string group, std::vector<CheckStat>& out) : group_(std::move(group)), out_(out) {}

    CheckStat& operator()(const std::string& name, double tol) {
        auto it = index_.find(name);
        if (it != index_.end()) return out_[it->second];
        index_[name] = out_.size();
        out_.push_back({group_, name, tol});
        return out_.back();
    }

private:
    std::string group_;
    std::vector<CheckStat>& out_;
    std::map<std::string, std::size_t> index_;
};

double rel(const Tensor3& a, const Tensor3& b) { return relative((a - b).norm(), std::max(a.norm(), b.norm())); }

template <class Fn>
bool throws_kind(ErrorKind kind, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

// A(T) = T(J.,J.,.), B(T) = T(J.,.,J.) on torsion tensors.
std::vector<LinearMap> involution_rows(const NordenStructure& s, double sa, double sb, bool product) {
    const int d = s.dim();
    const Matrix J = s.J();
    auto A = [J](const Tensor3& T) { return apply(T, &J, &J, nullptr); };
    auto B = [J](const Tensor3& T) { return apply(T, &J, nullptr, &J); };
    if (product) {
        // (1 + sb B)(1 + sa A) T
        return {tensor3_map(d, [=](const Tensor3& T) {
            const Tensor3 u = T + sa * A(T);
            return u + sb * B(u);
        })};
    }
    return {tensor3_map(d, [=](const Tensor3& T) { return T + sa * A(T); }),
            tensor3_map(d, [=](const Tensor3& T) { return T + sb * B(T); })};
}

LinearMap anti12_row(int d) {
    return tensor3_map(d, [](const Tensor3& T) { return T + permute(T, {1, 0, 2}); });
}

constexpr std::array<unsigned, 6> kEvenTargets = {W1, W2, W3, W1 | W2, W1 | W3, W2 | W3};

std::vector<OddMask> odd_targets() {
    std::vector<OddMask> t;
    for (int i = 1; i <= 11; ++i) t.push_back(odd_bit(i));
    t.push_back(kKTClasses);
    t.push_back(parse_odd_class("U0"));
    return t;
}

void lie_checks(const LieAlgebraModel& m, Ledger& L, double tol, Rng& rng) {
    const LeviCivita lc = koszul_lc(m);
    L("koszul torsion-free", 1e-12).record(lc_torsion_residual(m, lc));
    L("koszul metric-compatible", 1e-12).record(lc_metric_residual(m, lc));
    const Tensor3 F = fundamental_tensor(m);
    const NijenhuisBrackets nb = nijenhuis_from_brackets(m);
    const CurvatureData cd = curvature(m);
    L("curvature-like identities", 1e-10).record(curvature_like_residual(cd.R));
    const Matrix& gi = m.metric().g_inv();
    L("ricci symmetric", 1e-10).record(relative((cd.ricci - cd.ricci.transpose()).norm(), cd.ricci.norm()));
    L("scalar curvature trace", 1e-10).record(
        relative(std::abs(cd.scalar - gi.cwiseProduct(cd.ricci).sum()), std::abs(cd.scalar)));
    const double u = rng.uniform(-0.5, 0.5), v = rng.uniform(-0.5, 0.5), w = rng.uniform(-0.5, 0.5);
    const LieAlgebraModel m2 = conformal_transform(m, u, v, w);
    const Tensor3 F2 = fundamental_tensor(m2);
    const Matrix& gi2 = m2.metric().g_inv();
    if (m.odd()) {
        const auto& s = m.odd_structure();
        const auto& s2 = m2.odd_structure();
        L("model F admissible", 1e-10).record(admissibility_residual_odd(F, s));
        const NijenhuisOdd nj = nijenhuis_odd_from_F(F, s);
        L("nijenhuis bracket vs F route", 1e-10).record(std::max(rel(nb.N, nj.N), rel(nb.N_hat, nj.N_hat)));
        L("d eta bracket vs F route", 1e-10).record(
            relative((d_eta_from_brackets(m) - d_eta_from_F(F, s)).norm(), d_eta_from_F(F, s).norm()));
        const Tensor3 T1 = raise_last(phi_canonical_connection(F, s).torsion.T, gi);
        const Tensor3 T2 = raise_last(phi_canonical_connection(F2, s2).torsion.T, gi2);
        L("conformal torsion invariance", tol).record(rel(T1, T2));
        L("conformal class preserved", 0.0)
            .record(classify_odd(F, s, {tol}).members == classify_odd(F2, s2, {tol}).members);
    } else {
        const auto& s = m.even_structure();
        const auto& s2 = m2.even_structure();
        L("model F admissible", 1e-10).record(admissibility_residual_even(F, s));
        const NijenhuisEven nj = nijenhuis_from_F_even(F, s);
        L("nijenhuis bracket vs F route", 1e-10).record(std::max(rel(nb.N, nj.N), rel(nb.N_hat, nj.N_hat)));
        L("kaehler-tensor predicate finite", 0.0)
            .record(std::isfinite(kaehler_tensor_residual(cd.R, s.J())));
        const Tensor3 T1 = raise_last(canonical_connection_even(F, s).torsion.T, gi);
        const Tensor3 T2 = raise_last(canonical_connection_even(F2, s2).torsion.T, gi2);
        L("conformal torsion invariance", tol).record(rel(T1, T2));
        L("conformal class preserved", 0.0)
            .record(classify_even(F, s, {tol}).members == classify_even(F2, s2, {tol}).members);
    }
}

void even_case(const SelftestCase& c, const SelftestOptions& opt, std::uint64_t seed, Ledger& L) {
    const double tol = opt.tolerance;
    const Tolerance t{tol};
    std::vector<NordenStructure> structs;
    for (int k = 0; k < opt.structures; ++k) {
        Rng rng(derive_seed(seed, 1000 + k));
        structs.push_back(sample_norden(c.n, rng));
        L("structure axioms", 0.0).record(true);
    }
    for (int i = 0; i < opt.samples; ++i) {
        Rng rng(derive_seed(seed, i));
        const NordenStructure& s = structs[i % structs.size()];
        const Matrix& J = s.J();

        const FundamentalEven f = sample_admissible_even(s, rng);
        const NijenhuisEven nj = nijenhuis_from_F_even(f.F, s);
        L("nijenhuis properties", tol).record(nijenhuis_property_residual_even(nj.N, nj.N_hat, s));
        L("F from nijenhuis round-trip", tol).record(rel(F_from_nijenhuis_even(nj.N, nj.N_hat, s).F, f.F));
        L("lee form vs nijenhuis trace", 1e-10)
            .record(relative((f.theta - 0.25 * J.transpose() * nj.nu_hat).norm(), f.theta.norm()));

        const Tensor3 Tc = opt.even_canonical_torsion(nj.N, nj.N_hat);
        L("canonical identity", tol).record(relative(canonical_identity_even(Tc, s).norm(), Tc.norm()));
        const NaturalityResult nat = naturality_check_even(potential_of_torsion(Tc), f.F, s, t);
        L("canonical torsion to potential round-trip", tol).record(std::max(nat.f_residual, nat.skew_residual));
        try {
            const TorsionEven dec = decompose_torsion_even(Tc, s, t);
            L("canonical T1 = T4 = 0", tol)
                .record(relative(std::hypot(dec.components[0].norm(), dec.components[3].norm()), Tc.norm()));
        } catch (const Error&) {
            L("canonical T1 = T4 = 0", tol).record(false);
        }
        const ConnectionEven b = b_connection_even(f.F, s, t);
        const NaturalityResult nb = naturality_check_even(b.Q, f.F, s, t);
        L("b-connection natural", tol).record(std::max(nb.f_residual, nb.skew_residual));

        const unsigned target = kEvenTargets[i % kEvenTargets.size()];
        const FundamentalEven ft = sample_F_even(target, s, rng);
        bool agree = false;
        try {
            agree = classify_even(ft.F, s, t).members == target;
        } catch (const Error&) {
        }
        L("classification routes agree on target", 0.0).record(agree);
        if (target == W3) {
            const NijenhuisEven n3 = nijenhuis_from_F_even(ft.F, s);
            const ConnectionEven kt = kt_connection_even(ft.F, s, t);
            const Tensor3& Tk = kt.torsion.T;
            L("kt torsion totally skew", 1e-10).record(relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm()));
            const NaturalityResult nk = naturality_check_even(kt.Q, ft.F, s, t);
            L("kt-connection natural", tol).record(std::max(nk.f_residual, nk.skew_residual));
            const Tensor3 Tb = b_connection_even(ft.F, s, t).torsion.T;
            const Tensor3 Tcan = opt.even_canonical_torsion(n3.N, n3.N_hat);
            L("b is the average of canonical and kt", 1e-10).record(rel(Tb, 0.5 * (Tcan + Tk)));
        } else {
            L("kt precondition enforced", 0.0)
                .record(throws_kind(ErrorKind::ClassPrecondition, [&] { kt_connection_even(ft.F, s, t); }));
        }
        if ((target & ~(W1 | W2)) == 0) {
            const NijenhuisEven n12 = nijenhuis_from_F_even(ft.F, s);
            L("canonical equals b on W1+W2", tol)
                .record(rel(opt.even_canonical_torsion(n12.N, n12.N_hat), b_connection_even(ft.F, s, t).torsion.T));
        }
    }

    // closed-form projections against the brute-force oracle
    for (int i = 0; i < opt.oracle_inputs; ++i) {
        Rng rng(derive_seed(seed, 5000 + i));
        const NordenStructure& s = structs[i % structs.size()];
        const int d = s.dim();
        const Tensor3 raw = random_tensor3(d, rng);
        const Tensor3 F = admissible_F_even(raw, s).F;
        const auto adm = admissibility_conditions_even(s);
        std::vector<ConstraintOperator> amb;
        for (const auto& m : adm) amb.push_back(ConstraintOperator::from_map(Eigen::Index(d) * d * d, m));
        auto ops = [&](const std::vector<LinearMap>& maps) {
            std::vector<ConstraintOperator> out;
            for (const auto& m : maps) out.push_back(ConstraintOperator::from_map(Eigen::Index(d) * d * d, m));
            return out;
        };
        const Tensor3 formula = w1_form(fundamental_even(F, s).theta, s);
        const Tensor3 oracle =
            oracle_project(F, ops(class_conditions_even(W1, s)), ops(class_conditions_even(W2 | W3, s)), amb);
        L("W1 closed form vs oracle", tol).record(rel(formula, oracle));

        const Tensor3 T = anti12(raw);
        const TorsionEven dec = decompose_torsion_even(T, s, t);
        const auto anti = ops({anti12_row(d)});
        const Tensor3 o1 =
            oracle_project(T, ops(involution_rows(s, 1.0, 1.0, false)), ops(involution_rows(s, -1.0, -1.0, true)), anti);
        const Tensor3 o2 =
            oracle_project(T, ops(involution_rows(s, 1.0, -1.0, false)), ops(involution_rows(s, -1.0, 1.0, true)), anti);
        L("torsion involution split vs oracle", tol)
            .record(std::max(rel(dec.components[0], o1), rel(dec.components[1], o2)));
    }
}

void odd_case(const SelftestCase& c, const SelftestOptions& opt, std::uint64_t seed, Ledger& L) {
    const double tol = opt.tolerance;
    const Tolerance t{tol};
    std::vector<ContactBStructure> structs;
    for (int k = 0; k < opt.structures; ++k) {
        Rng rng(derive_seed(seed, 1000 + k));
        structs.push_back(sample_contact_b(c.n, rng));
        L("structure axioms", 0.0).record(true);
    }
    const auto targets = odd_targets();
    const OddMask u0 = parse_odd_class("U0");
    for (int i = 0; i < opt.samples; ++i) {
        Rng rng(derive_seed(seed, i));
        const ContactBStructure& s = structs[i % structs.size()];
        const Matrix& phi = s.phi();

        const FundamentalOdd f = sample_admissible_odd(s, rng);
        const NijenhuisOdd nj = nijenhuis_odd_from_F(f.F, s);
        L("nijenhuis properties", tol).record(nijenhuis_property_residual_odd(nj.N, nj.N_hat, s));
        L("F from nijenhuis round-trip", tol).record(rel(F_from_nijenhuis_odd(nj.N, nj.N_hat, s).F, f.F));
        const Vector lhs = phi.transpose() * f.theta_star;
        const Vector rhs = -(phi * phi).transpose() * f.theta;
        L("lee forms theta* o phi = -theta o phi^2", 1e-10)
            .record(relative((lhs - rhs).norm(), f.theta.norm() + f.theta_star.norm()));
        L("lee form omega(xi) = 0", 1e-10).record(relative(std::abs(f.omega.dot(s.xi())), f.F.norm()));

        const ConnectionOdd can = phi_canonical_connection(f.F, s, t);
        const Tensor3& Tc = can.torsion.T;
        L("phi-canonical identity", tol).record(relative(phi_canonical_identity(Tc, s).norm(), Tc.norm()));
        const Tensor3 Tb = phi_b_torsion_from_F(f.F, s);
        L("phi-b torsion: F route vs nijenhuis route", tol)
            .record(rel(Tb, phi_b_torsion_from_nijenhuis(nj.N, nj.N_hat, s)));
        L("phi-canonical torsion: potential vs nijenhuis route", tol)
            .record(rel(Tc, phi_canonical_torsion_from_nijenhuis(Tb, nj.N, s)));
        const NaturalityResultOdd nat = naturality_check_odd(can.Q, f.F, s, t);
        L("phi-canonical natural", tol).record(std::max(nat.f_residual, nat.skew_residual));
        const NaturalityResultOdd natr = naturality_check_odd(potential_of_torsion(Tc), f.F, s, t);
        L("phi-canonical torsion to potential round-trip", tol).record(std::max(natr.f_residual, natr.skew_residual));
        const ConnectionOdd b = phi_b_connection(f.F, s, t);
        const NaturalityResultOdd nb = naturality_check_odd(b.Q, f.F, s, t);
        L("phi-b connection natural", tol).record(std::max(nb.f_residual, nb.skew_residual));

        const OddMask target = targets[i % targets.size()];
        const FundamentalOdd ft = sample_F_odd(target, s, rng);
        ClassLabelOdd label;
        bool agree = false;
        try {
            label = classify_odd(ft.F, s, t);
            agree = label.members == target;
        } catch (const Error&) {
        }
        L("classification routes agree on target", 0.0).record(agree);
        const NijenhuisOdd nt = nijenhuis_odd_from_F(ft.F, s);
        const Tensor3 Tct = phi_canonical_connection(ft.F, s, t).torsion.T;
        if (std::has_single_bit(target)) {
            const int cls = std::countr_zero(target) + 1;
            L("phi-canonical torsion class form", tol).record(phi_canonical_class_residual(cls, Tct, s));
            const NijenhuisOdd table = class_nijenhuis_form(cls, ft.F, s);
            L("nijenhuis class form", tol)
                .record(relative(std::hypot((table.N - nt.N).norm(), (table.N_hat - nt.N_hat).norm()),
                                 std::hypot(nt.N.norm(), nt.N_hat.norm())));
        }
        if ((target & ~kKTClasses) == 0) {
            const ConnectionOdd kt = phi_kt_connection(ft.F, s, t);
            const Tensor3& Tk = kt.torsion.T;
            L("phi-kt torsion totally skew", 1e-10).record(relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm()));
            const NaturalityResultOdd nk = naturality_check_odd(kt.Q, ft.F, s, t);
            L("phi-kt connection natural", tol).record(std::max(nk.f_residual, nk.skew_residual));
            const Tensor3 alt = 0.25 * cyclic_sum(nt.N) + 0.5 * eta_wedge(d_eta_from_F(ft.F, s), s);
            L("phi-kt torsion nijenhuis form", tol).record(rel(Tk, alt));
            L("phi-b is the average of phi-canonical and phi-kt", 1e-10)
                .record(rel(phi_b_torsion_from_F(ft.F, s), 0.5 * (Tct + Tk)));
        } else {
            L("phi-kt precondition enforced", 0.0)
                .record(throws_kind(ErrorKind::ClassPrecondition, [&] { phi_kt_connection(ft.F, s, t); }));
        }
        if ((target & ~u0) == 0)
            L("phi-canonical equals phi-b on U0", tol).record(rel(Tct, phi_b_torsion_from_F(ft.F, s)));
    }
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& opt) {
    SelftestReport rep;
    for (std::size_t ci = 0; ci < opt.cases.size(); ++ci) {
        const SelftestCase& c = opt.cases[ci];
        const std::uint64_t seed = derive_seed(opt.seed, 7919 * (ci + 1));
        Ledger L(case_name(c), rep.checks);
        if (c.parity == Parity::Even)
            even_case(c, opt, seed, L);
        else
            odd_case(c, opt, seed, L);
        for (int j = 0; j < opt.lie_models; ++j) {
            Rng rng(derive_seed(seed, 9000 + j));
            const LieAlgebraModel m = sample_lie_model(c.parity, c.n, rng);
            lie_checks(m, L, opt.tolerance, rng);
        }
    }
    return rep;
}

}  // namespace nk
