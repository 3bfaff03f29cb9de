#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "nordenkit/cli.hpp"
#include "nordenkit/document.hpp"

using namespace nk;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_doc(const std::string& name, const Json& j) {
    const fs::path dir = fs::temp_directory_path() / "nordenkit_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump();
    return p.string();
}

std::string sample_doc(const std::string& cls, std::uint64_t seed) {
    const Run r = run({"sample", "--class", cls, "--seed", std::to_string(seed)});
    REQUIRE(r.code == 0);
    return write_doc(cls + "_" + std::to_string(seed) + ".json", r.json());
}

const Json* ledger_entry(const Json& report, const std::string& name) {
    for (const auto& e : report["ledger"])
        if (e["name"] == name) return &e;
    return nullptr;
}

}  // namespace

TEST_CASE("help and bad flags") {
    CHECK(run({"--help"}).code == kExitPass);
    CHECK(run({"validate", "--bogus"}).code == kExitInputError);
    CHECK(run({}).code == kExitInputError);
    CHECK(run({"--version"}).out == std::string(kVersion) + "\n");
}

TEST_CASE("validate canonical even model") {
    const std::string p = write_doc("canonical_even.json", to_json(document_from(canonical_norden(2))));
    const Run r = run({"validate", "--input", p, "--format", "json"});
    CHECK(r.code == kExitPass);
    const Json j = r.json();
    CHECK(j["status"] == "pass");
    CHECK(j["metadata"]["version"] == kVersion);
    for (const auto& e : j["ledger"]) CHECK(e["pass"] == true);
}

TEST_CASE("corrupted eta(xi) = 0 is an axiom violation") {
    InputDocument doc = document_from(canonical_contact_b(2));
    doc.eta = Vector::Zero(5);
    const Run r = run({"validate", "--input", write_doc("bad_eta.json", to_json(doc)), "--format", "json"});
    CHECK(r.code == kExitInputError);
    CHECK(r.json()["error"]["kind"] == "AxiomViolation");
}

TEST_CASE("broken Jacobi identity") {
    Rng rng(51);
    InputDocument doc = document_from(sample_lie_model(Parity::Even, 2, rng));
    Tensor3& c = *doc.structure_constants;
    c(0, 1, 2) += 0.3;
    c(1, 0, 2) -= 0.3;
    const Run r = run({"validate", "--input", write_doc("bad_jacobi.json", to_json(doc)), "--format", "json"});
    CHECK(r.code == kExitInputError);
    CHECK(r.json()["error"]["kind"] == "JacobiViolation");
}

TEST_CASE("non-admissible F") {
    Rng rng(52);
    const NordenStructure s = sample_norden(2, rng);
    const Run r = run({"validate", "--input", write_doc("bad_F.json", to_json(document_from(s, random_tensor3(4, rng))))});
    CHECK(r.code == kExitInputError);
    CHECK(r.err.find("AdmissibilityViolation") != std::string::npos);
}

TEST_CASE("classify") {
    const std::string zero = write_doc("zero_F.json", to_json(document_from(canonical_contact_b(2), Tensor3(5))));
    CHECK(run({"classify", "--input", zero, "--format", "json"}).json()["classification"]["members"] == "F0");
    const Run f5 = run({"classify", "--input", sample_doc("F5", 1), "--format", "json"});
    CHECK(f5.code == kExitPass);
    CHECK(f5.json()["classification"]["members"] == "F5");
    const Json mixed = run({"classify", "--input", sample_doc("W1+W3", 2), "--format", "json"}).json();
    CHECK(mixed["classification"]["members"] == "W1+W3");
    CHECK(mixed["classification"]["routes"]["nijenhuis"] == "W1+W3");
}

TEST_CASE("connections") {
    SUBCASE("F = 0 gives zero torsions") {
        const std::string p = write_doc("zero_even.json", to_json(document_from(canonical_norden(2), Tensor3(4))));
        const Json j = run({"connections", "--input", p, "--format", "json"}).json();
        for (const char* c : {"b", "canonical", "kt"}) CHECK(j["connections"][c]["norm"] == 0.0);
    }
    SUBCASE("W3 with all records the average relation") {
        const Run r = run({"connections", "--input", sample_doc("W3", 3), "--format", "json"});
        CHECK(r.code == kExitPass);
        const Json j = r.json();
        const Json* e = ledger_entry(j, "b is the average of canonical and kt");
        REQUIRE(e != nullptr);
        CHECK((*e)["pass"] == true);
    }
    SUBCASE("F1 with kt is a class precondition") {
        const Run r = run({"connections", "--input", sample_doc("F1", 4), "--which", "kt"});
        CHECK(r.code == kExitClassPrecondition);
        CHECK(r.err.find("exists if and only if") != std::string::npos);
    }
    SUBCASE("kt is reported unavailable under all") {
        const Json j = run({"connections", "--input", sample_doc("F1", 4), "--format", "json"}).json();
        CHECK(j["connections"]["phi-kt"]["available"] == false);
        CHECK(ledger_entry(j, "phi-canonical coincides with phi-b on U0") != nullptr);
    }
    SUBCASE("unknown connection name") {
        CHECK(run({"connections", "--input", sample_doc("W1", 5), "--which", "levi"}).code == kExitInputError);
    }
}

TEST_CASE("transform") {
    Rng rng(53);
    const std::string p = write_doc("lie_odd.json", to_json(document_from(sample_lie_model(Parity::Odd, 2, rng))));
    const Run r = run({"transform", "--input", p, "--u", "0.3", "--v", "-0.2", "--w", "0.5", "--format", "json"});
    CHECK(r.code == kExitPass);
    const Json j = r.json();
    CHECK(j["class_before"] == j["class_after"]);
    CHECK(parse_document(j["document"]).kind == "lie");
    CHECK(run({"transform", "--input", sample_doc("W2", 6), "--u", "1"}).code == kExitInputError);
}

TEST_CASE("sample emits parseable documents") {
    const Run r = run({"sample", "--class", "F3+F7", "--n", "3", "--seed", "8", "--samples", "2"});
    const Json arr = Json::parse(r.out);
    REQUIRE(arr.size() == 2);
    const InputDocument d = parse_document(arr[1]);
    CHECK(d.dim == 7);
    CHECK(d.metadata.at("class_target") == "F3+F7");
    CHECK(run({"sample", "--class", "W4"}).code == kExitInputError);
    const Run lie = run({"sample", "--lie", "--parity", "odd", "--seed", "3"});
    CHECK(parse_document(lie.json()).kind == "lie");
}

TEST_CASE("selftest is deterministic") {
    const std::vector<std::string> args = {"selftest", "--samples", "6", "--n", "2", "--seed", "5", "--format", "json"};
    const Run a = run(args), b = run(args);
    CHECK(a.code == kExitPass);
    CHECK(a.out == b.out);
    CHECK(a.json()["summary"]["failed"] == 0);
}

TEST_CASE("tolerance override from the environment") {
    const std::string p = write_doc("canonical_env.json", to_json(document_from(canonical_norden(2))));
    setenv("NORDENKIT_TOLERANCE", "1e-7", 1);
    CHECK(run({"validate", "--input", p, "--format", "json"}).json()["metadata"]["tolerance"] == 1e-7);
    CHECK(run({"validate", "--input", p, "--format", "json", "--tolerance", "1e-8"}).json()["metadata"]["tolerance"] ==
          1e-8);
    setenv("NORDENKIT_TOLERANCE", "abc", 1);
    CHECK(run({"validate", "--input", p}).code == kExitInputError);
    unsetenv("NORDENKIT_TOLERANCE");
}
