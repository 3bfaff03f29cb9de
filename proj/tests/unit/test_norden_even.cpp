#include <doctest.h>

#include "helpers.hpp"
#include "nordenkit/detail/spaces.hpp"

using namespace nk;

TEST_CASE("canonical Norden structure") {
    const NordenStructure s = canonical_norden(2);
    CHECK(s.dim() == 4);
    CHECK((s.J() * s.J() + Matrix::Identity(4, 4)).norm() < 1e-15);
    CHECK(s.metric().signature() == Signature{2, 2});
    CHECK(s.assoc_metric().signature() == Signature{2, 2});
}

TEST_CASE("structure validation rejects broken axioms") {
    const NordenStructure s = canonical_norden(2);
    Matrix J = s.J();
    J(0, 0) += 0.1;
    CHECK(test::error_kind_of([&] { validate_norden(J, s.metric().g()); }) == ErrorKind::Axiom);
    CHECK(test::error_kind_of([&] { validate_norden(Matrix::Identity(3, 3), Matrix::Identity(3, 3)); }) ==
          ErrorKind::Dimension);
    // J = 0 block-compatible Hermitian metric is not Norden
    CHECK(test::error_kind_of([&] { validate_norden(s.J(), Matrix::Identity(4, 4)); }) == ErrorKind::Axiom);
}

TEST_CASE("class subspace dimensions") {
    for (int n : {2, 3}) {
        const auto& f = canonical_norden(n).f_spaces();
        CHECK(f.adm.dim() == 2 * n * n * n);
        CHECK(f.w[0].dim() == 2 * n);
        CHECK(f.w[1].dim() == n * (n - 1) * (n + 2));
        CHECK(f.w[2].dim() == n * n * (n - 1));
    }
}

TEST_CASE("class names round-trip") {
    for (unsigned m = 0; m < 8; ++m) CHECK(parse_even_class(even_class_name(m)) == m);
    CHECK(even_class_name(0) == "W0");
    CHECK(parse_even_class("W1+W3") == (W1 | W3));
}

TEST_CASE("F = 0 is the Kaehler class with zero torsions") {
    const NordenStructure s = canonical_norden(2);
    const Tensor3 F(4);
    const ClassLabelEven label = classify_even(F, s);
    CHECK(label.zero);
    CHECK(label.name() == "W0");
    CHECK(canonical_connection_even(F, s).torsion.T.norm() == 0.0);
    CHECK(kt_connection_even(F, s).torsion.T.norm() == 0.0);
}

TEST_CASE("random admissible F: nijenhuis round-trip and trace identity") {
    Rng rng(11);
    for (int n : {2, 3}) {
        const NordenStructure s = sample_norden(n, rng);
        for (int i = 0; i < 10; ++i) {
            const FundamentalEven f = sample_admissible_even(s, rng);
            CHECK(admissibility_residual_even(f.F, s) < 1e-12);
            const NijenhuisEven nj = nijenhuis_from_F_even(f.F, s);
            CHECK(nijenhuis_property_residual_even(nj.N, nj.N_hat, s) < 1e-9);
            CHECK(test::rel(F_from_nijenhuis_even(nj.N, nj.N_hat, s).F, f.F) < 1e-9);
            CHECK(relative((f.theta - 0.25 * s.J().transpose() * nj.nu_hat).norm(), f.theta.norm()) < 1e-10);
        }
    }
}

TEST_CASE("non-admissible nijenhuis pair is rejected") {
    Rng rng(12);
    const NordenStructure s = sample_norden(2, rng);
    const Tensor3 junk = random_tensor3(4, rng);
    CHECK(test::error_kind_of([&] { F_from_nijenhuis_even(junk, junk, s); }) == ErrorKind::Property);
}

TEST_CASE("targeted samples classify to their target") {
    Rng rng(13);
    const NordenStructure s = sample_norden(2, rng);
    for (unsigned target : std::initializer_list<unsigned>{W1, W2, W3, W1 | W2, W1 | W3, W2 | W3, W1 | W2 | W3}) {
        const FundamentalEven f = sample_F_even(target, s, rng);
        const ClassLabelEven label = classify_even(f.F, s);
        CHECK(label.members == target);
        CHECK(label.by_nijenhuis == target);
        CHECK(label.by_torsion == target);
    }
}

TEST_CASE("W1 closed form reproduces W1 tensors") {
    Rng rng(14);
    const NordenStructure s = sample_norden(3, rng);
    const FundamentalEven f = sample_F_even(W1, s, rng);
    CHECK(test::rel(w1_form(f.theta, s), f.F) < 1e-10);
}

TEST_CASE("canonical connection: identity, natural, no T1 and T4") {
    Rng rng(15);
    const NordenStructure s = sample_norden(2, rng);
    for (int i = 0; i < 5; ++i) {
        const FundamentalEven f = sample_admissible_even(s, rng);
        const ConnectionEven c = canonical_connection_even(f.F, s);
        const Tensor3& T = c.torsion.T;
        CHECK(relative(canonical_identity_even(T, s).norm(), T.norm()) < 1e-9);
        CHECK(relative(c.torsion.components[0].norm() + c.torsion.components[3].norm(), T.norm()) < 1e-9);
        const NijenhuisEven nj = nijenhuis_from_F_even(f.F, s);
        CHECK(test::rel(canonical_torsion_even(nj.N, nj.N_hat), T) < 1e-9);
        const NaturalityResult nat = naturality_check_even(c.Q, f.F, s);
        CHECK(nat.natural);
    }
}

TEST_CASE("kt connection only on W3, b is the average there") {
    Rng rng(16);
    const NordenStructure s = sample_norden(2, rng);
    const FundamentalEven f3 = sample_F_even(W3, s, rng);
    const ConnectionEven kt = kt_connection_even(f3.F, s);
    const Tensor3& Tk = kt.torsion.T;
    CHECK(relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm()) < 1e-10);
    const Tensor3 avg = 0.5 * (canonical_connection_even(f3.F, s).torsion.T + Tk);
    CHECK(test::rel(b_connection_even(f3.F, s).torsion.T, avg) < 1e-10);

    const FundamentalEven f1 = sample_F_even(W1, s, rng);
    CHECK(test::error_kind_of([&] { kt_connection_even(f1.F, s); }) == ErrorKind::ClassPrecondition);
}

TEST_CASE("canonical and b coincide on W1+W2") {
    Rng rng(17);
    const NordenStructure s = sample_norden(3, rng);
    const FundamentalEven f = sample_F_even(W1 | W2, s, rng);
    CHECK(test::rel(canonical_connection_even(f.F, s).torsion.T, b_connection_even(f.F, s).torsion.T) < 1e-9);
}

TEST_CASE("torsion decomposition sums back") {
    Rng rng(18);
    const NordenStructure s = sample_norden(2, rng);
    const Tensor3 T = anti12(random_tensor3(4, rng));
    const TorsionEven dec = decompose_torsion_even(T, s);
    Tensor3 sum(4);
    for (const auto& c : dec.components) sum += c;
    CHECK(test::rel(sum, T) < 1e-12);
    CHECK(test::error_kind_of([&] { decompose_torsion_even(random_tensor3(4, rng), s); }) == ErrorKind::Property);
}
