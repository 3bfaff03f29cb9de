#include <doctest.h>

#include <bit>

#include "helpers.hpp"
#include "nordenkit/detail/spaces.hpp"

using namespace nk;

TEST_CASE("canonical almost contact B-metric structure") {
    const ContactBStructure s = canonical_contact_b(2);
    CHECK(s.dim() == 5);
    CHECK(s.eta().dot(s.xi()) == doctest::Approx(1.0));
    CHECK((s.phi() * s.xi()).norm() == 0.0);
    CHECK(s.metric().signature() == Signature{3, 2});
}

TEST_CASE("corrupted eta(xi) is an axiom violation") {
    const ContactBStructure s = canonical_contact_b(2);
    const Vector eta = Vector::Zero(5);
    CHECK(test::error_kind_of([&] { validate_contact_b(s.phi(), s.xi(), eta, s.metric().g()); }) ==
          ErrorKind::Axiom);
    CHECK(test::error_kind_of([&] {
              validate_contact_b(Matrix::Identity(4, 4), Vector::Zero(4), Vector::Zero(4), Matrix::Identity(4, 4));
          }) == ErrorKind::Dimension);
}

TEST_CASE("class and torsion subspace dimensions") {
    const std::array<int, 11> f2 = {4, 8, 4, 1, 1, 4, 2, 4, 4, 4, 4};
    const std::array<int, 11> f3 = {6, 30, 18, 1, 1, 10, 6, 9, 9, 9, 6};
    for (int n : {2, 3}) {
        const ContactBStructure s = canonical_contact_b(n);
        const auto& f = s.f_spaces();
        int total = 0;
        for (int i = 0; i < 11; ++i) {
            CHECK(f.f[i].dim() == (n == 2 ? f2 : f3)[i]);
            total += int(f.f[i].dim());
        }
        CHECK(total == f.adm.dim());
        int ttotal = 0;
        for (const auto& t : s.t_spaces().t) ttotal += int(t.dim());
        const int d = s.dim();
        CHECK(ttotal == d * d * (d - 1) / 2);
    }
}

TEST_CASE("class names and U0") {
    CHECK(odd_class_name(0) == "F0");
    CHECK(odd_class_name(odd_bit(3) | odd_bit(7)) == "F3+F7");
    CHECK(parse_odd_class("F3+F7") == kKTClasses);
    const OddMask u0 = parse_odd_class("U0");
    CHECK(std::popcount(u0) == 9);
    CHECK((u0 & kKTClasses) == 0);
}

TEST_CASE("lee forms and round-trip on random admissible F") {
    Rng rng(21);
    for (int n : {2, 3}) {
        const ContactBStructure s = sample_contact_b(n, rng);
        const Matrix& phi = s.phi();
        for (int i = 0; i < 10; ++i) {
            const FundamentalOdd f = sample_admissible_odd(s, rng);
            CHECK(admissibility_residual_odd(f.F, s) < 1e-12);
            const Vector lhs = phi.transpose() * f.theta_star;
            const Vector rhs = -(phi * phi).transpose() * f.theta;
            CHECK((lhs - rhs).norm() < 1e-10 * (f.theta.norm() + f.theta_star.norm()));
            CHECK(std::abs(f.omega.dot(s.xi())) < 1e-10);
            const NijenhuisOdd nj = nijenhuis_odd_from_F(f.F, s);
            CHECK(nijenhuis_property_residual_odd(nj.N, nj.N_hat, s) < 1e-9);
            CHECK(test::rel(F_from_nijenhuis_odd(nj.N, nj.N_hat, s).F, f.F) < 1e-9);
        }
    }
}

TEST_CASE("every basic class: routes, nijenhuis table, torsion correspondence") {
    Rng rng(22);
    const ContactBStructure s = sample_contact_b(2, rng);
    const std::array<unsigned, 11> torsion = {1u << 3,  1u << 4,  1u << 2,  1u << 9,  1u << 8,           1u << 10,
                                              1u << 6,  (1u << 7) | (1u << 13), 1u << 12, 1u << 13, 1u << 14};
    for (int cls = 1; cls <= 11; ++cls) {
        CAPTURE(cls);
        const FundamentalOdd f = sample_F_odd(odd_bit(cls), s, rng);
        const ClassLabelOdd label = classify_odd(f.F, s);
        CHECK(label.members == odd_bit(cls));
        CHECK(label.by_nijenhuis == odd_bit(cls));
        CHECK(label.by_torsion == odd_bit(cls));
        CHECK(label.torsion_classes == torsion[cls - 1]);

        const NijenhuisOdd nj = nijenhuis_odd_from_F(f.F, s);
        const NijenhuisOdd table = class_nijenhuis_form(cls, f.F, s);
        CHECK(test::rel(table.N, nj.N) < 1e-9);
        CHECK(test::rel(table.N_hat, nj.N_hat) < 1e-9);

        const Tensor3 T = phi_canonical_connection(f.F, s).torsion.T;
        CHECK(phi_canonical_class_residual(cls, T, s) < 1e-9);
    }
}

TEST_CASE("phi-b and phi-canonical torsions by two routes") {
    Rng rng(23);
    const ContactBStructure s = sample_contact_b(3, rng);
    for (int i = 0; i < 5; ++i) {
        const FundamentalOdd f = sample_admissible_odd(s, rng);
        const NijenhuisOdd nj = nijenhuis_odd_from_F(f.F, s);
        const ConnectionOdd b = phi_b_connection(f.F, s);
        CHECK(test::rel(b.torsion.T, phi_b_torsion_from_F(f.F, s)) < 1e-9);
        CHECK(test::rel(b.torsion.T, phi_b_torsion_from_nijenhuis(nj.N, nj.N_hat, s)) < 1e-9);
        const ConnectionOdd c = phi_canonical_connection(f.F, s);
        CHECK(test::rel(c.torsion.T, phi_canonical_torsion_from_nijenhuis(b.torsion.T, nj.N, s)) < 1e-9);
        CHECK(relative(phi_canonical_identity(c.torsion.T, s).norm(), c.torsion.T.norm()) < 1e-9);
        CHECK(naturality_check_odd(c.Q, f.F, s).natural);
        CHECK(naturality_check_odd(b.Q, f.F, s).natural);
    }
}

TEST_CASE("phi-kt connection exists exactly on F3+F7") {
    Rng rng(24);
    const ContactBStructure s = sample_contact_b(2, rng);
    const FundamentalOdd f = sample_F_odd(kKTClasses, s, rng);
    const ConnectionOdd kt = phi_kt_connection(f.F, s);
    const Tensor3& Tk = kt.torsion.T;
    CHECK(relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm()) < 1e-10);
    const Tensor3 avg = 0.5 * (phi_canonical_connection(f.F, s).torsion.T + Tk);
    CHECK(test::rel(phi_b_connection(f.F, s).torsion.T, avg) < 1e-10);
    for (int cls : {1, 2, 4, 5, 6, 8, 9, 10, 11}) {
        const FundamentalOdd g = sample_F_odd(odd_bit(cls), s, rng);
        CHECK(test::error_kind_of([&] { phi_kt_connection(g.F, s); }) == ErrorKind::ClassPrecondition);
    }
}

TEST_CASE("phi-canonical equals phi-b on U0") {
    Rng rng(25);
    const ContactBStructure s = sample_contact_b(2, rng);
    const FundamentalOdd f = sample_F_odd(parse_odd_class("U0"), s, rng);
    CHECK(test::rel(phi_canonical_connection(f.F, s).torsion.T, phi_b_connection(f.F, s).torsion.T) < 1e-9);
}

TEST_CASE("d eta from F is skew") {
    Rng rng(26);
    const ContactBStructure s = sample_contact_b(2, rng);
    const Matrix w = d_eta_from_F(sample_admissible_odd(s, rng).F, s);
    CHECK((w + w.transpose()).norm() < 1e-12);
}
