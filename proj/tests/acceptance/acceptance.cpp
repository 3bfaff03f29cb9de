// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nordenkit/cli.hpp"
#include "nordenkit/sampler.hpp"

using namespace nk;

namespace {

constexpr double kRoundTripTol = 1e-9;
constexpr double kRoundTripSeconds = 10.0;
constexpr double kTraceTol = 1e-10;
constexpr double kClassTol = 1e-9;
constexpr double kCanonicalTol = 1e-9;
constexpr double kKtTol = 1e-10;
constexpr double kKoszulTol = 1e-12;
constexpr double kNijenhuisRouteTol = 1e-10;
constexpr double kBianchiTol = 1e-10;
constexpr double kConformalTol = 1e-9;
constexpr double kOracleTol = 1e-9;
constexpr double kSelftestSeconds = 60.0;

constexpr int kRoundTripSamples = 100;
constexpr int kClassSamples = 20;
constexpr int kKtSamples = 50;
constexpr int kLieModels = 50;
constexpr int kConformalModels = 20;
constexpr int kOracleInputs = 100;
constexpr std::uint64_t kSeed = 20240917;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(const Tensor3& a, const Tensor3& b) { return relative((a - b).norm(), std::max(a.norm(), b.norm())); }

// Largest residual against a tolerance, plus a count of boolean failures.
struct Tally {
    double tol;
    double worst = 0.0;
    int failures = 0;
    int count = 0;

    void residual(double r) {
        ++count;
        if (!std::isfinite(r) || r >= tol) ++failures;
        if (!std::isfinite(r) || r > worst) worst = r;
    }
    void ok(bool b) {
        ++count;
        if (!b) ++failures;
    }
    bool passed() const { return failures == 0 && count > 0; }
    std::string summary() const {
        char buf[128];
        std::snprintf(buf, sizeof buf, "n=%d failures=%d max=%.2e tol=%.0e", count, failures, worst, tol);
        return buf;
    }
};

bool report(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("criterion %d: %-4s %s [%s]\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str());
    std::fflush(stdout);
    return pass;
}

template <class Fn>
bool throws_precondition(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == ErrorKind::ClassPrecondition;
    }
    return false;
}

// Shared random admissible samples for criteria 1, 2 and 4.
struct EvenSample {
    NordenStructure s;
    FundamentalEven f;
};
struct OddSample {
    ContactBStructure s;
    FundamentalOdd f;
};

std::vector<EvenSample> even_samples(int n, std::uint64_t seed) {
    std::vector<NordenStructure> structs;
    for (int k = 0; k < 4; ++k) {
        Rng rng(derive_seed(seed, 1000 + k));
        structs.push_back(sample_norden(n, rng));
    }
    std::vector<EvenSample> out;
    for (int i = 0; i < kRoundTripSamples; ++i) {
        Rng rng(derive_seed(seed, i));
        const NordenStructure& s = structs[i % structs.size()];
        out.push_back({s, sample_admissible_even(s, rng)});
    }
    return out;
}

std::vector<OddSample> odd_samples(int n, std::uint64_t seed) {
    std::vector<ContactBStructure> structs;
    for (int k = 0; k < 4; ++k) {
        Rng rng(derive_seed(seed, 1000 + k));
        structs.push_back(sample_contact_b(n, rng));
    }
    std::vector<OddSample> out;
    for (int i = 0; i < kRoundTripSamples; ++i) {
        Rng rng(derive_seed(seed, i));
        const ContactBStructure& s = structs[i % structs.size()];
        out.push_back({s, sample_admissible_odd(s, rng)});
    }
    return out;
}

struct Corpus {
    std::vector<std::vector<EvenSample>> even;  // n = 2, 3
    std::vector<std::vector<OddSample>> odd;
};

bool criterion1(Corpus& corpus) {
    Tally t{kRoundTripTol};
    const auto t0 = Clock::now();
    for (int n : {2, 3}) {
        corpus.even.push_back(even_samples(n, derive_seed(kSeed, 10 + n)));
        for (const auto& e : corpus.even.back()) {
            const NijenhuisEven nj = nijenhuis_from_F_even(e.f.F, e.s);
            t.residual(rel(F_from_nijenhuis_even(nj.N, nj.N_hat, e.s).F, e.f.F));
        }
        corpus.odd.push_back(odd_samples(n, derive_seed(kSeed, 20 + n)));
        for (const auto& o : corpus.odd.back()) {
            const NijenhuisOdd nj = nijenhuis_odd_from_F(o.f.F, o.s);
            t.residual(rel(F_from_nijenhuis_odd(nj.N, nj.N_hat, o.s).F, o.f.F));
        }
    }
    const double secs = seconds_since(t0);
    char buf[64];
    std::snprintf(buf, sizeof buf, " time=%.2fs limit=%.0fs", secs, kRoundTripSeconds);
    return report(1, "F -> (N, N_hat) -> F round-trip, dims 4, 6, 5, 7", t.passed() && secs < kRoundTripSeconds,
                  t.summary() + buf);
}

bool criterion2(const Corpus& corpus) {
    Tally t{kTraceTol};
    for (const auto& set : corpus.even)
        for (const auto& e : set) {
            const NijenhuisEven nj = nijenhuis_from_F_even(e.f.F, e.s);
            t.residual(relative((e.f.theta - 0.25 * e.s.J().transpose() * nj.nu_hat).norm(), e.f.theta.norm()));
        }
    for (const auto& set : corpus.odd)
        for (const auto& o : set) {
            const Matrix& phi = o.s.phi();
            const Vector lhs = phi.transpose() * o.f.theta_star;
            const Vector rhs = -(phi * phi).transpose() * o.f.theta;
            t.residual(relative((lhs - rhs).norm(), o.f.theta.norm() + o.f.theta_star.norm()));
            t.residual(relative(std::abs(o.f.omega.dot(o.s.xi())), o.f.F.norm()));
        }
    return report(2, "Lee form trace identities (even and odd)", t.passed(), t.summary());
}

// Targeted samples for criteria 3, 4 and 5.
struct Targeted {
    Parity parity;
    unsigned target;
    std::variant<NordenStructure, ContactBStructure> s;
    Tensor3 F;
};

std::vector<Targeted> targeted_samples() {
    std::vector<Targeted> out;
    const std::vector<unsigned> even = {W1, W2, W3, W1 | W2, W1 | W3, W2 | W3};
    for (std::size_t c = 0; c < even.size(); ++c)
        for (int i = 0; i < kClassSamples; ++i) {
            Rng rng(derive_seed(kSeed, 30000 + 100 * c + i));
            const NordenStructure s = sample_norden(2 + i % 2, rng);
            out.push_back({Parity::Even, even[c], s, sample_F_even(even[c], s, rng).F});
        }
    for (int cls = 1; cls <= 11; ++cls)
        for (int i = 0; i < kClassSamples; ++i) {
            Rng rng(derive_seed(kSeed, 40000 + 100 * cls + i));
            const ContactBStructure s = sample_contact_b(2 + i % 2, rng);
            out.push_back({Parity::Odd, odd_bit(cls), s, sample_F_odd(odd_bit(cls), s, rng).F});
        }
    return out;
}

bool criterion3(const std::vector<Targeted>& samples) {
    Tally t{kClassTol};
    for (const auto& x : samples) {
        try {
            if (x.parity == Parity::Even) {
                const ClassLabelEven l = classify_even(x.F, std::get<NordenStructure>(x.s), {kClassTol});
                t.ok(l.by_conditions == x.target && l.by_nijenhuis == x.target && l.by_torsion == x.target);
                for (const auto& [k, v] : l.residuals)
                    if (k == "F:" + even_class_name(x.target) || k == "N:" + even_class_name(x.target) ||
                        k == "T:" + even_class_name(x.target))
                        t.residual(v);
            } else {
                const ClassLabelOdd l = classify_odd(x.F, std::get<ContactBStructure>(x.s), {kClassTol});
                t.ok(l.by_conditions == x.target && l.by_nijenhuis == x.target && l.by_torsion == x.target);
                const std::string name = odd_class_name(x.target);
                for (const char* k : {"condition:", "table:"}) {
                    auto it = l.residuals.find(k + name);
                    if (it != l.residuals.end()) t.residual(it->second);
                }
            }
        } catch (const Error&) {
            t.ok(false);
        }
    }
    return report(3, "classification agrees across conditions, Nijenhuis and torsion routes", t.passed(), t.summary());
}

bool criterion4(const Corpus& corpus, const std::vector<Targeted>& samples) {
    // canonical torsion class of each basic odd class
    const std::array<unsigned, 11> table = {1u << 3, 1u << 4, 1u << 2,  1u << 9,  1u << 8,  1u << 10,
                                            1u << 6, (1u << 7) | (1u << 13), 1u << 12, 1u << 13, 1u << 14};
    Tally t{kCanonicalTol};
    for (const auto& set : corpus.even)
        for (const auto& e : set) {
            const ConnectionEven c = canonical_connection_even(e.f.F, e.s);
            const Tensor3& T = c.torsion.T;
            t.residual(relative(canonical_identity_even(T, e.s).norm(), T.norm()));
            t.residual(relative(std::hypot(c.torsion.components[0].norm(), c.torsion.components[3].norm()), T.norm()));
        }
    for (const auto& set : corpus.odd)
        for (const auto& o : set) {
            const Tensor3 T = phi_canonical_connection(o.f.F, o.s).torsion.T;
            t.residual(relative(phi_canonical_identity(T, o.s).norm(), T.norm()));
        }
    for (const auto& x : samples) {
        if (x.parity != Parity::Odd) continue;
        const auto& s = std::get<ContactBStructure>(x.s);
        const int cls = std::countr_zero(x.target) + 1;
        const Tensor3 T = phi_canonical_connection(x.F, s).torsion.T;
        t.residual(relative(phi_canonical_identity(T, s).norm(), T.norm()));
        t.residual(phi_canonical_class_residual(cls, T, s));
        t.ok(classify_odd(x.F, s, {kCanonicalTol}).torsion_classes == table[cls - 1]);
    }
    return report(4, "canonical connections: defining identity, T1 = T4 = 0, F_i to T_j table", t.passed(),
                  t.summary());
}

bool criterion5(const std::vector<Targeted>& samples) {
    Tally t{kKtTol};
    for (int i = 0; i < kKtSamples; ++i) {
        Rng rng(derive_seed(kSeed, 50000 + i));
        const NordenStructure s = sample_norden(2 + i % 2, rng);
        const Tensor3 F = sample_F_even(W3, s, rng).F;
        const Tensor3 Tk = kt_connection_even(F, s).torsion.T;
        t.residual(relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm()));
        t.residual(rel(b_connection_even(F, s).torsion.T, 0.5 * (canonical_connection_even(F, s).torsion.T + Tk)));
    }
    for (int i = 0; i < kKtSamples; ++i) {
        Rng rng(derive_seed(kSeed, 60000 + i));
        const ContactBStructure s = sample_contact_b(2 + i % 2, rng);
        const Tensor3 F = sample_F_odd(kKTClasses, s, rng).F;
        const Tensor3 Tk = phi_kt_connection(F, s).torsion.T;
        t.residual(relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm()));
        t.residual(rel(phi_b_connection(F, s).torsion.T, 0.5 * (phi_canonical_connection(F, s).torsion.T + Tk)));
    }
    for (const auto& x : samples) {
        if (x.parity == Parity::Even) {
            const auto& s = std::get<NordenStructure>(x.s);
            if (x.target == W3)
                t.ok(!throws_precondition([&] { kt_connection_even(x.F, s); }));
            else
                t.ok(throws_precondition([&] { kt_connection_even(x.F, s); }));
        } else {
            const auto& s = std::get<ContactBStructure>(x.s);
            if ((x.target & ~kKTClasses) == 0)
                t.ok(!throws_precondition([&] { phi_kt_connection(x.F, s); }));
            else
                t.ok(throws_precondition([&] { phi_kt_connection(x.F, s); }));
        }
    }
    return report(5, "KT connections: existence, total skewness, average relation", t.passed(), t.summary());
}

LieAlgebraModel lie_model_for(int j, std::uint64_t base) {
    // dims 4, 5, 6 in turn
    Rng rng(derive_seed(kSeed, base + j));
    switch (j % 3) {
        case 0: return sample_lie_model(Parity::Even, 2, rng);
        case 1: return sample_lie_model(Parity::Odd, 2, rng);
        default: return sample_lie_model(Parity::Even, 3, rng);
    }
}

bool criterion6() {
    Tally koszul{kKoszulTol}, nij{kNijenhuisRouteTol}, bianchi{kBianchiTol};
    for (int j = 0; j < kLieModels; ++j) {
        const LieAlgebraModel m = lie_model_for(j, 70000);
        const LeviCivita lc = koszul_lc(m);
        koszul.residual(lc_torsion_residual(m, lc));
        koszul.residual(lc_metric_residual(m, lc));
        bianchi.residual(bianchi_residual(curvature(m).R));
        const Tensor3 F = fundamental_tensor(m);
        const NijenhuisBrackets nb = nijenhuis_from_brackets(m);
        if (m.odd()) {
            const NijenhuisOdd nj = nijenhuis_odd_from_F(F, m.odd_structure());
            nij.residual(std::max(rel(nb.N, nj.N), rel(nb.N_hat, nj.N_hat)));
        } else {
            const NijenhuisEven nj = nijenhuis_from_F_even(F, m.even_structure());
            nij.residual(std::max(rel(nb.N, nj.N), rel(nb.N_hat, nj.N_hat)));
        }
    }
    return report(6, "Lie models: Koszul connection, Nijenhuis routes, first Bianchi",
                  koszul.passed() && nij.passed() && bianchi.passed(),
                  "koszul " + koszul.summary() + "; nijenhuis " + nij.summary() + "; bianchi " + bianchi.summary());
}

bool criterion7() {
    Tally t{kConformalTol};
    for (Parity p : {Parity::Even, Parity::Odd}) {
        for (int j = 0; j < kConformalModels; ++j) {
            Rng rng(derive_seed(kSeed, (p == Parity::Even ? 80000 : 90000) + j));
            const LieAlgebraModel m = sample_lie_model(p, 2 + j % 2, rng);
            const double u = rng.uniform(-1, 1), v = rng.uniform(-1, 1), w = rng.uniform(-1, 1);
            const LieAlgebraModel m2 = conformal_transform(m, u, v, p == Parity::Odd ? w : 0.0);
            const Tensor3 F1 = fundamental_tensor(m), F2 = fundamental_tensor(m2);
            Tensor3 T1, T2;
            if (p == Parity::Odd) {
                T1 = phi_canonical_connection(F1, m.odd_structure()).torsion.T;
                T2 = phi_canonical_connection(F2, m2.odd_structure()).torsion.T;
                t.ok(classify_odd(F1, m.odd_structure()).members == classify_odd(F2, m2.odd_structure()).members);
            } else {
                T1 = canonical_connection_even(F1, m.even_structure()).torsion.T;
                T2 = canonical_connection_even(F2, m2.even_structure()).torsion.T;
                t.ok(classify_even(F1, m.even_structure()).members == classify_even(F2, m2.even_structure()).members);
            }
            t.residual(rel(raise_last(T1, m.metric().g_inv()), raise_last(T2, m2.metric().g_inv())));
        }
    }
    return report(7, "conformal invariance of the (1,2) canonical torsion and class labels", t.passed(), t.summary());
}

// T + sa A(T), T + sb B(T) with A = T(J.,J.,.), B = T(J.,.,J.); product form (1 + sb B)(1 + sa A).
std::vector<ConstraintOperator> involution_ops(const Matrix& J, double sa, double sb, bool product) {
    const int d = int(J.rows());
    const Eigen::Index N = Eigen::Index(d) * d * d;
    auto A = [J](const Tensor3& T) { return apply(T, &J, &J, nullptr); };
    auto B = [J](const Tensor3& T) { return apply(T, &J, nullptr, &J); };
    if (product)
        return {ConstraintOperator::from_map(N, tensor3_map(d, [=](const Tensor3& T) {
                    const Tensor3 u = T + sa * A(T);
                    return u + sb * B(u);
                }))};
    return {ConstraintOperator::from_map(N, tensor3_map(d, [=](const Tensor3& T) { return T + sa * A(T); })),
            ConstraintOperator::from_map(N, tensor3_map(d, [=](const Tensor3& T) { return T + sb * B(T); }))};
}

bool criterion8() {
    Tally t{kOracleTol};
    for (int i = 0; i < kOracleInputs; ++i) {
        Rng rng(derive_seed(kSeed, 100000 + i));
        const NordenStructure s = sample_norden(2 + i % 2, rng);
        const int d = s.dim();
        const Eigen::Index N = Eigen::Index(d) * d * d;
        auto ops = [N](const std::vector<LinearMap>& maps) {
            std::vector<ConstraintOperator> out;
            for (const auto& m : maps) out.push_back(ConstraintOperator::from_map(N, m));
            return out;
        };
        const Tensor3 raw = random_tensor3(d, rng);
        const FundamentalEven f = admissible_F_even(raw, s);
        const Tensor3 oracle = oracle_project(f.F, ops(class_conditions_even(W1, s)),
                                              ops(class_conditions_even(W2 | W3, s)), ops(admissibility_conditions_even(s)));
        t.residual(rel(w1_form(f.theta, s), oracle));

        const Tensor3 T = anti12(raw);
        const TorsionEven dec = decompose_torsion_even(T, s);
        const auto anti = ops({tensor3_map(d, [](const Tensor3& x) { return x + permute(x, {1, 0, 2}); })});
        const Matrix& J = s.J();
        t.residual(rel(dec.components[0],
                       oracle_project(T, involution_ops(J, 1, 1, false), involution_ops(J, -1, -1, true), anti)));
        t.residual(rel(dec.components[1],
                       oracle_project(T, involution_ops(J, 1, -1, false), involution_ops(J, -1, 1, true), anti)));
    }
    return report(8, "W1 closed form and involution torsion split match the kernel oracle", t.passed(), t.summary());
}

bool criterion9() {
    const std::vector<std::string> args = {"selftest", "--format", "json", "--seed", "17"};
    std::ostringstream out1, out2, err;
    const auto t0 = Clock::now();
    const int code1 = run_cli(args, out1, err);
    const double secs = seconds_since(t0);
    const int code2 = run_cli(args, out2, err);
    const bool identical = out1.str() == out2.str();
    char buf[160];
    std::snprintf(buf, sizeof buf, "exit=%d,%d time=%.2fs limit=%.0fs identical=%s bytes=%zu", code1, code2, secs,
                  kSelftestSeconds, identical ? "yes" : "no", out1.str().size());
    return report(9, "default selftest passes in time and reruns are byte-identical",
                  code1 == 0 && code2 == 0 && secs < kSelftestSeconds && identical, buf);
}

}  // namespace

int main() {
    int failed = 0;
    auto guard = [&](int id, const std::function<bool()>& fn) {
        try {
            if (!fn()) ++failed;
        } catch (const std::exception& e) {
            report(id, "aborted", false, e.what());
            ++failed;
        }
    };
    Corpus corpus;
    std::vector<Targeted> targeted;
    guard(1, [&] { return criterion1(corpus); });
    guard(2, [&] { return criterion2(corpus); });
    guard(3, [&] {
        targeted = targeted_samples();
        return criterion3(targeted);
    });
    guard(4, [&] { return criterion4(corpus, targeted); });
    guard(5, [&] { return criterion5(targeted); });
    guard(6, [&] { return criterion6(); });
    guard(7, [&] { return criterion7(); });
    guard(8, [&] { return criterion8(); });
    guard(9, [&] { return criterion9(); });
    std::printf("%s: %d of 9 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed ? 1 : 0;
}
