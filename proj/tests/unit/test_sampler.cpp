#include <doctest.h>

#include <bit>

#include "helpers.hpp"

using namespace nk;

TEST_CASE("rng streams are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
    Rng c(42);
    CHECK(c.next() == Rng(42).next());
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("uniform in [0,1) and normal moments") {
    Rng rng(7);
    double s = 0.0, s2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 0.05);
    CHECK(std::abs(s2 / n - 1.0) < 0.05);
}

TEST_CASE("class target parsing") {
    const ClassTarget a = parse_class_target("W1+W3");
    CHECK(a.parity == Parity::Even);
    CHECK(a.mask == (W1 | W3));
    const ClassTarget b = parse_class_target("F5");
    CHECK(b.parity == Parity::Odd);
    CHECK(b.mask == odd_bit(5));
    CHECK(class_target_name(b) == "F5");
    CHECK(test::error_kind_of([] { parse_class_target("X2"); }) == ErrorKind::Parse);
}

TEST_CASE("sampled structures satisfy the axioms") {
    Rng rng(8);
    for (int n : {2, 3}) {
        const NordenStructure s = sample_norden(n, rng);
        CHECK(s.metric().signature() == Signature{n, n});
        const ContactBStructure o = sample_contact_b(n, rng);
        CHECK(o.metric().signature() == Signature{n + 1, n});
    }
}

TEST_CASE("targeted F carries every targeted component") {
    Rng rng(9);
    const ContactBStructure s = sample_contact_b(2, rng);
    const OddMask mask = odd_bit(1) | odd_bit(5) | odd_bit(11);
    const FundamentalOdd f = sample_F_odd(mask, s, rng);
    CHECK(f.F.norm() == doctest::Approx(1.0));
    const auto comps = class_components_odd(f.F, s);
    for (int i = 0; i < 11; ++i) {
        if (mask & odd_bit(i + 1))
            CHECK(comps[i].norm() >= 1e-3);
        else
            CHECK(comps[i].norm() < 1e-9);
    }
}

TEST_CASE("sampling from a SampleSpec is deterministic") {
    SampleSpec spec;
    spec.parity = Parity::Odd;
    spec.class_target = "F3+F7";
    spec.seed = 99;
    const auto s1 = sample_structure(spec);
    const auto s2 = sample_structure(spec);
    const Tensor3 F1 = std::get<FundamentalOdd>(sample_F_in_class(spec, s1)).F;
    const Tensor3 F2 = std::get<FundamentalOdd>(sample_F_in_class(spec, s2)).F;
    CHECK((F1 - F2).norm() == 0.0);
    CHECK(classify_odd(F1, std::get<ContactBStructure>(s1)).members == kKTClasses);
}

TEST_CASE("sampled algebras are Jacobi-consistent and normalized") {
    Rng rng(10);
    for (auto fam : {AlgebraFamily::Semidirect, AlgebraFamily::TwoStepNilpotent, AlgebraFamily::HeisenbergPlusAbelian,
                     AlgebraFamily::Su2PlusAbelian}) {
        for (int d : {4, 5, 6}) {
            const Tensor3 c = sample_algebra(d, fam, rng);
            CHECK(c.norm() == doctest::Approx(1.0));
            CHECK(jacobi_residual(c) < 1e-12);
        }
    }
}
