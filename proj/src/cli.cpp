#include "nordenkit/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "nordenkit/document.hpp"
#include "nordenkit/sampler.hpp"
#include "nordenkit/selftest.hpp"

namespace nk {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InconsistentClassification:
        case ErrorKind::DirectSum:
        case ErrorKind::RankDeficiency: return kExitInconsistency;
        case ErrorKind::ClassPrecondition: return kExitClassPrecondition;
        default: return kExitInputError;
    }
}

namespace {

struct Options {
    std::string input;
    std::string format = "text";
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    int samples = -1;
    std::string which = "all";
    // sample
    std::string target;
    int n = 0;
    std::string parity = "all";
    bool lie = false;
    // transform
    double u = 0.0, v = 0.0, w = 0.0;
};

class Report {
public:
    Report(std::string command, const Options& o) : command_(std::move(command)), opt_(o) {}

    Json body = Json::object();

    void check(const std::string& name, double residual, double tol) {
        const bool pass = std::isfinite(residual) && residual < tol;
        ledger_.push_back({{"name", name}, {"residual", residual}, {"tolerance", tol}, {"pass", pass}});
        all_pass_ = all_pass_ && pass;
    }
    void check(const std::string& name, bool pass) {
        ledger_.push_back({{"name", name}, {"pass", pass}});
        all_pass_ = all_pass_ && pass;
    }
    bool passed() const { return all_pass_; }

    Json to_json(const std::map<std::string, std::string>& input_meta = {}) const {
        Json j;
        j["command"] = command_;
        j["status"] = all_pass_ ? "pass" : "fail";
        for (const auto& [k, v] : body.items()) j[k] = v;
        j["ledger"] = ledger_;
        Json meta;
        meta["version"] = kVersion;
        meta["seed"] = opt_.seed;
        meta["tolerance"] = opt_.tolerance;
        meta["prng"] = kPrngName;
        if (!input_meta.empty()) {
            Json im = Json::object();
            for (const auto& [k, v] : input_meta) im[k] = v;
            meta["input"] = im;
        }
        j["metadata"] = meta;
        return j;
    }

private:
    std::string command_;
    const Options& opt_;
    Json ledger_ = Json::array();
    bool all_pass_ = true;
};

// --- text rendering ------------------------------------------------------

bool is_array_doc(const Json& j) { return j.is_object() && j.contains("shape") && j.contains("data") && j.size() == 2; }

std::string scalar_text(const Json& j) {
    if (j.is_number_float()) {
        std::ostringstream os;
        os << std::setprecision(6) << j.get<double>();
        return os.str();
    }
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

void render(const Json& j, std::ostream& out, int indent) {
    const std::string pad(std::size_t(indent), ' ');
    for (const auto& [k, v] : j.items()) {
        if (is_array_doc(v)) {
            double s = 0.0;
            for (const auto& x : v["data"]) s += x.get<double>() * x.get<double>();
            std::string shape;
            for (const auto& e : v["shape"]) shape += (shape.empty() ? "" : "x") + e.dump();
            out << pad << k << ": [" << shape << " array, norm " << std::setprecision(6) << std::sqrt(s) << "]\n";
        } else if (v.is_object()) {
            out << pad << k << ":\n";
            render(v, out, indent + 2);
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            out << pad << k << ":\n";
            for (const auto& e : v) {
                std::string line;
                for (const auto& [ek, ev] : e.items()) line += (line.empty() ? "" : "  ") + ek + "=" + scalar_text(ev);
                out << pad << "  - " << line << "\n";
            }
        } else if (v.is_array()) {
            std::string line;
            for (const auto& e : v) line += (line.empty() ? "" : ", ") + scalar_text(e);
            out << pad << k << ": [" << line << "]\n";
        } else {
            out << pad << k << ": " << scalar_text(v) << "\n";
        }
    }
}

void emit(const Json& j, const Options& o, std::ostream& out) {
    if (o.format == "json")
        out << j.dump(2) << "\n";
    else
        render(j, out, 0);
}

// --- shared pieces -------------------------------------------------------

InputDocument read_input(const Options& o) {
    if (o.input.empty()) throw Error(ErrorKind::Parse, "--input is required");
    std::ifstream f(o.input);
    if (!f) throw Error(ErrorKind::Parse, "cannot open input file '" + o.input + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_document_text(ss.str());
}

const Tensor3& need_F(const LoadedInput& in) {
    if (!in.F) throw Error(ErrorKind::Parse, "field 'F': required for this command (or use kind 'lie')");
    return *in.F;
}

Json torsion_json(const Tensor3& T, const std::vector<Tensor3>& comps, const std::vector<std::pair<std::string, Vector>>& forms) {
    Json j;
    j["norm"] = T.norm();
    Json c = Json::object();
    for (std::size_t i = 0; i < comps.size(); ++i) c["T" + std::to_string(i + 1)] = comps[i].norm();
    j["components"] = c;
    Json f = Json::object();
    for (const auto& [name, v] : forms) f[name] = array_json(v);
    j["forms"] = f;
    j["torsion"] = array_json(T);
    return j;
}

Json connection_json(const ConnectionEven& c) {
    Json j = torsion_json(c.torsion.T, {c.torsion.components.begin(), c.torsion.components.end()},
                          {{"t", c.torsion.t_form}});
    j["potential"] = array_json(c.Q);
    return j;
}

Json connection_json(const ConnectionOdd& c) {
    Json j = torsion_json(c.torsion.T, {c.torsion.components.begin(), c.torsion.components.end()},
                          {{"t", c.torsion.t_form}, {"t*", c.torsion.t_star_form}, {"t^", c.torsion.t_hat_form}});
    j["potential"] = array_json(c.Q);
    return j;
}

double rel(const Tensor3& a, const Tensor3& b, const Tolerance& t) {
    return relative((a - b).norm(), std::max(a.norm(), b.norm()), t);
}

std::string torsion_class_name(unsigned mask) {
    if (mask == 0) return "T0";
    std::string s;
    for (int j = 1; j <= 15; ++j)
        if (mask & (1u << (j - 1))) s += (s.empty() ? "T" : "+T") + std::to_string(j);
    return s;
}

// --- commands ------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
    const Tolerance t{o.tolerance};
    const InputDocument doc = read_input(o);
    const LoadedInput in = load_input(doc, t);
    Report rep("validate", o);
    rep.body["kind"] = doc.kind;
    rep.body["dim"] = doc.dim;
    const Matrix& g = doc.g;
    const int d = doc.dim;
    const Matrix I = Matrix::Identity(d, d);
    auto sig = [](const MetricPair& m) { return Json::array({m.signature().p, m.signature().q}); };
    if (in.even) {
        const Matrix& J = in.even->J();
        rep.check("J^2 = -Id", relative((J * J + I).norm(), std::sqrt(double(d))), o.tolerance);
        rep.check("g(Jx,Jy) = -g(x,y)", relative((J.transpose() * g * J + g).norm(), g.norm()), o.tolerance);
        rep.body["signature"] = {{"g", sig(in.even->metric())}, {"associated", sig(in.even->assoc_metric())}};
    } else {
        const auto& s = *in.odd;
        const Matrix& phi = s.phi();
        const Vector& xi = s.xi();
        const Vector& eta = s.eta();
        rep.check("phi^2 = -Id + eta (x) xi",
                  relative((phi * phi + I - xi * eta.transpose()).norm(), std::sqrt(double(d))), o.tolerance);
        rep.check("phi xi = 0", relative((phi * xi).norm(), xi.norm()), o.tolerance);
        rep.check("eta o phi = 0", relative((phi.transpose() * eta).norm(), eta.norm()), o.tolerance);
        rep.check("eta(xi) = 1", std::abs(eta.dot(xi) - 1.0), o.tolerance);
        rep.check("g(phi x, phi y) = -g(x,y) + eta(x) eta(y)",
                  relative((phi.transpose() * g * phi + g - eta * eta.transpose()).norm(), g.norm()), o.tolerance);
        rep.body["signature"] = {{"g", sig(s.metric())}, {"associated", sig(s.assoc_metric())}};
    }
    if (in.model) {
        const LeviCivita lc = koszul_lc(*in.model);
        rep.check("jacobi identity", jacobi_residual(in.model->c), 1e-10);
        rep.check("koszul torsion-free", lc_torsion_residual(*in.model, lc), 1e-12);
        rep.check("koszul metric-compatible", lc_metric_residual(*in.model, lc), 1e-12);
    }
    if (in.F) {
        const double r = in.even ? admissibility_residual_even(*in.F, *in.even) : admissibility_residual_odd(*in.F, *in.odd);
        rep.check("F admissibility", r, o.tolerance);
        rep.body["F_norm"] = in.F->norm();
        if (r >= o.tolerance) {
            emit(rep.to_json(doc.metadata), o, out);
            throw Error(ErrorKind::Admissibility, "F is not admissible (residual " + std::to_string(r) + ")");
        }
    }
    emit(rep.to_json(doc.metadata), o, out);
    return rep.passed() ? kExitPass : kExitInputError;
}

Json residual_json(const std::map<std::string, double>& r) {
    Json j = Json::object();
    for (const auto& [k, v] : r) j[k] = v;
    return j;
}

int cmd_classify(const Options& o, std::ostream& out) {
    const Tolerance t{o.tolerance};
    const InputDocument doc = read_input(o);
    const LoadedInput in = load_input(doc, t);
    const Tensor3& F = need_F(in);
    Report rep("classify", o);
    Json c;
    if (in.even) {
        const ClassLabelEven label = classify_even(F, *in.even, t);
        c["members"] = label.name();
        c["zero"] = label.zero;
        c["routes"] = {{"conditions", even_class_name(label.by_conditions)},
                       {"nijenhuis", even_class_name(label.by_nijenhuis)},
                       {"torsion", even_class_name(label.by_torsion)},
                       {"projection", even_class_name(label.by_projection)}};
        c["residuals"] = residual_json(label.residuals);
    } else {
        const ClassLabelOdd label = classify_odd(F, *in.odd, t);
        c["members"] = label.name();
        c["zero"] = label.zero;
        c["routes"] = {{"conditions", odd_class_name(label.by_conditions)},
                       {"nijenhuis", odd_class_name(label.by_nijenhuis)},
                       {"torsion", odd_class_name(label.by_torsion)}};
        c["canonical_torsion_classes"] = torsion_class_name(label.torsion_classes);
        c["residuals"] = residual_json(label.residuals);
    }
    rep.body["classification"] = c;
    rep.check("classification routes agree", true);
    emit(rep.to_json(doc.metadata), o, out);
    return kExitPass;
}

int connections_even(const Options& o, const LoadedInput& in, Report& rep) {
    const Tolerance t{o.tolerance};
    const NordenStructure& s = *in.even;
    const Tensor3& F = need_F(in);
    const ClassLabelEven label = classify_even(F, s, t);
    rep.body["class"] = label.name();
    const bool want_b = o.which == "b" || o.which == "all";
    const bool want_c = o.which == "canonical" || o.which == "all";
    const bool want_k = o.which == "kt" || o.which == "all";
    Json conns = Json::object();
    const ConnectionEven b = b_connection_even(F, s, t);
    const ConnectionEven can = canonical_connection_even(F, s, t);
    if (want_b) {
        conns["b"] = connection_json(b);
        const auto nat = naturality_check_even(b.Q, F, s, t);
        rep.check("b-connection natural", std::max(nat.f_residual, nat.skew_residual), o.tolerance);
    }
    if (want_c) {
        conns["canonical"] = connection_json(can);
        const Tensor3& T = can.torsion.T;
        const auto nat = naturality_check_even(can.Q, F, s, t);
        rep.check("canonical connection natural", std::max(nat.f_residual, nat.skew_residual), o.tolerance);
        rep.check("canonical torsion identity", relative(canonical_identity_even(T, s).norm(), T.norm(), t),
                  o.tolerance);
        rep.check("canonical torsion has no T1, T4 part",
                  relative(std::hypot(can.torsion.components[0].norm(), can.torsion.components[3].norm()), T.norm(), t),
                  o.tolerance);
        if ((label.members & ~(W1 | W2)) == 0)
            rep.check("canonical coincides with b on W1+W2", rel(T, b.torsion.T, t), o.tolerance);
    }
    if (want_k) {
        try {
            const ConnectionEven kt = kt_connection_even(F, s, t);
            conns["kt"] = connection_json(kt);
            const Tensor3& Tk = kt.torsion.T;
            const auto nat = naturality_check_even(kt.Q, F, s, t);
            rep.check("kt-connection natural", std::max(nat.f_residual, nat.skew_residual), o.tolerance);
            rep.check("kt torsion totally skew", relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm(), t), 1e-10);
            rep.check("b is the average of canonical and kt", rel(b.torsion.T, 0.5 * (can.torsion.T + Tk), t), 1e-10);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ClassPrecondition || o.which == "kt") throw;
            conns["kt"] = {{"available", false}, {"reason", e.what()}};
        }
    }
    rep.body["connections"] = conns;
    return kExitPass;
}

int connections_odd(const Options& o, const LoadedInput& in, Report& rep) {
    const Tolerance t{o.tolerance};
    const ContactBStructure& s = *in.odd;
    const Tensor3& F = need_F(in);
    const ClassLabelOdd label = classify_odd(F, s, t);
    rep.body["class"] = label.name();
    const bool want_b = o.which == "b" || o.which == "all";
    const bool want_c = o.which == "canonical" || o.which == "all";
    const bool want_k = o.which == "kt" || o.which == "all";
    Json conns = Json::object();
    const ConnectionOdd b = phi_b_connection(F, s, t);
    const ConnectionOdd can = phi_canonical_connection(F, s, t);
    const NijenhuisOdd nj = nijenhuis_odd_from_F(F, s);
    if (want_b) {
        conns["phi-b"] = connection_json(b);
        const auto nat = naturality_check_odd(b.Q, F, s, t);
        rep.check("phi-b connection natural", std::max(nat.f_residual, nat.skew_residual), o.tolerance);
        rep.check("phi-b torsion from nijenhuis pair",
                  rel(b.torsion.T, phi_b_torsion_from_nijenhuis(nj.N, nj.N_hat, s), t), o.tolerance);
    }
    if (want_c) {
        conns["phi-canonical"] = connection_json(can);
        const Tensor3& T = can.torsion.T;
        const auto nat = naturality_check_odd(can.Q, F, s, t);
        rep.check("phi-canonical connection natural", std::max(nat.f_residual, nat.skew_residual), o.tolerance);
        rep.check("phi-canonical torsion identity", relative(phi_canonical_identity(T, s).norm(), T.norm(), t),
                  o.tolerance);
        rep.check("phi-canonical torsion from nijenhuis pair",
                  rel(T, phi_canonical_torsion_from_nijenhuis(b.torsion.T, nj.N, s), t), o.tolerance);
        if (std::has_single_bit(label.members)) {
            const int cls = std::countr_zero(label.members) + 1;
            rep.check("phi-canonical torsion form of F" + std::to_string(cls),
                      phi_canonical_class_residual(cls, T, s), o.tolerance);
        }
        rep.body["canonical_torsion_classes"] = torsion_class_name(label.torsion_classes);
        if ((label.members & ~parse_odd_class("U0")) == 0)
            rep.check("phi-canonical coincides with phi-b on U0", rel(T, b.torsion.T, t), o.tolerance);
    }
    if (want_k) {
        try {
            const ConnectionOdd kt = phi_kt_connection(F, s, t);
            conns["phi-kt"] = connection_json(kt);
            const Tensor3& Tk = kt.torsion.T;
            const auto nat = naturality_check_odd(kt.Q, F, s, t);
            rep.check("phi-kt connection natural", std::max(nat.f_residual, nat.skew_residual), o.tolerance);
            rep.check("phi-kt torsion totally skew", relative((Tk + permute(Tk, {0, 2, 1})).norm(), Tk.norm(), t),
                      1e-10);
            rep.check("phi-b is the average of phi-canonical and phi-kt",
                      rel(b.torsion.T, 0.5 * (can.torsion.T + Tk), t), 1e-10);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ClassPrecondition || o.which == "kt") throw;
            conns["phi-kt"] = {{"available", false}, {"reason", e.what()}};
        }
    }
    rep.body["connections"] = conns;
    return kExitPass;
}

int cmd_connections(const Options& o, std::ostream& out) {
    if (o.which != "b" && o.which != "canonical" && o.which != "kt" && o.which != "all")
        throw Error(ErrorKind::Parse, "--which must be b, canonical, kt or all");
    const InputDocument doc = read_input(o);
    const LoadedInput in = load_input(doc, {o.tolerance});
    Report rep("connections", o);
    rep.body["which"] = o.which;
    if (in.even)
        connections_even(o, in, rep);
    else
        connections_odd(o, in, rep);
    emit(rep.to_json(doc.metadata), o, out);
    return rep.passed() ? kExitPass : kExitInvariantFailure;
}

int cmd_selftest(const Options& o, std::ostream& out) {
    SelftestOptions so;
    so.seed = o.seed;
    so.tolerance = o.tolerance;
    if (o.samples >= 0) so.samples = o.samples;
    if (o.parity != "all" || o.n > 0) {
        if (o.parity != "all" && o.parity != "even" && o.parity != "odd")
            throw Error(ErrorKind::Parse, "--parity must be even, odd or all");
        so.cases.clear();
        const std::vector<int> ns = o.n > 0 ? std::vector<int>{o.n} : std::vector<int>{2, 3};
        for (const char* p : {"even", "odd"}) {
            if (o.parity != "all" && o.parity != p) continue;
            for (int n : ns) so.cases.push_back({std::string(p) == "even" ? Parity::Even : Parity::Odd, n});
        }
    }
    const SelftestReport r = run_selftest(so);
    Report rep("selftest", o);
    Json checks = Json::array();
    int failed = 0;
    for (const auto& c : r.checks) {
        checks.push_back({{"case", c.group},
                          {"check", c.name},
                          {"count", c.count},
                          {"failures", c.failures},
                          {"max_residual", c.max_residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.passed()}});
        if (!c.passed()) ++failed;
    }
    rep.body["samples"] = so.samples;
    rep.body["checks"] = checks;
    rep.body["summary"] = {{"checks", r.checks.size()}, {"failed", failed}};
    rep.check("all selftest checks pass", r.passed());
    emit(rep.to_json(), o, out);
    return r.passed() ? kExitPass : kExitInvariantFailure;
}

int cmd_sample(const Options& o, std::ostream& out) {
    const int count = o.samples < 0 ? 1 : o.samples;
    Json docs = Json::array();
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(o.seed, std::uint64_t(i)));
        InputDocument doc;
        if (o.lie) {
            if (o.parity != "even" && o.parity != "odd")
                throw Error(ErrorKind::Parse, "--lie needs --parity even or odd");
            const Parity p = o.parity == "even" ? Parity::Even : Parity::Odd;
            doc = document_from(sample_lie_model(p, o.n > 0 ? o.n : 2, rng, {o.tolerance}));
        } else {
            if (o.target.empty()) throw Error(ErrorKind::Parse, "--class is required (or use --lie)");
            const ClassTarget target = parse_class_target(o.target);
            const int n = o.n > 0 ? o.n : 2;
            if (target.parity == Parity::Even) {
                const NordenStructure s = sample_norden(n, rng, {o.tolerance});
                doc = document_from(s, sample_F_even(target.mask, s, rng).F);
            } else {
                const ContactBStructure s = sample_contact_b(n, rng, {o.tolerance});
                doc = document_from(s, sample_F_odd(target.mask, s, rng).F);
            }
            doc.metadata["class_target"] = class_target_name(target);
        }
        doc.metadata["seed"] = std::to_string(o.seed);
        doc.metadata["index"] = std::to_string(i);
        doc.metadata["prng"] = kPrngName;
        doc.metadata["version"] = kVersion;
        docs.push_back(to_json(doc));
    }
    out << (count == 1 ? docs.front() : docs).dump(2) << "\n";
    return kExitPass;
}

int cmd_transform(const Options& o, std::ostream& out) {
    const Tolerance t{o.tolerance};
    const InputDocument doc = read_input(o);
    const LoadedInput in = load_input(doc, t);
    Report rep("transform", o);
    rep.body["parameters"] = {{"u", o.u}, {"v", o.v}, {"w", o.w}};
    InputDocument result;
    if (in.model) {
        const LieAlgebraModel m2 = conformal_transform(*in.model, o.u, o.v, o.w, t);
        const Tensor3 F1 = fundamental_tensor(*in.model);
        const Tensor3 F2 = fundamental_tensor(m2);
        const Matrix& gi1 = in.model->metric().g_inv();
        const Matrix& gi2 = m2.metric().g_inv();
        Tensor3 T1, T2;
        std::string c1, c2;
        if (m2.odd()) {
            T1 = phi_canonical_connection(F1, in.model->odd_structure(), t).torsion.T;
            T2 = phi_canonical_connection(F2, m2.odd_structure(), t).torsion.T;
            c1 = classify_odd(F1, in.model->odd_structure(), t).name();
            c2 = classify_odd(F2, m2.odd_structure(), t).name();
        } else {
            T1 = canonical_connection_even(F1, in.model->even_structure(), t).torsion.T;
            T2 = canonical_connection_even(F2, m2.even_structure(), t).torsion.T;
            c1 = classify_even(F1, in.model->even_structure(), t).name();
            c2 = classify_even(F2, m2.even_structure(), t).name();
        }
        rep.body["class_before"] = c1;
        rep.body["class_after"] = c2;
        rep.check("canonical (1,2) torsion invariant", rel(raise_last(T1, gi1), raise_last(T2, gi2), t), o.tolerance);
        rep.check("class preserved", c1 == c2);
        result = document_from(m2);
    } else {
        if (in.F) throw Error(ErrorKind::Parse, "field 'F': transforming F needs a Lie model document");
        result = in.even ? document_from(conformal_transform_even(*in.even, o.u, o.v, t))
                         : document_from(contact_conformal_transform(*in.odd, o.u, o.v, o.w, t));
    }
    result.metadata = doc.metadata;
    rep.body["document"] = to_json(result);
    emit(rep.to_json(doc.metadata), o, out);
    return rep.passed() ? kExitPass : kExitInvariantFailure;
}

void error_report(const Options& o, const std::string& kind, const std::string& msg, int code, std::ostream& out,
                  std::ostream& err) {
    err << "error: " << kind << ": " << msg << "\n";
    if (o.format == "json") {
        Json j;
        j["status"] = "error";
        j["error"] = {{"kind", kind}, {"message", msg}, {"exit_code", code}};
        out << j.dump(2) << "\n";
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    if (const char* env = std::getenv("NORDENKIT_TOLERANCE")) {
        try {
            o.tolerance = std::stod(env);
        } catch (const std::exception&) {
            err << "error: NORDENKIT_TOLERANCE is not a number\n";
            return kExitInputError;
        }
    }
    CLI::App app{"Classification and canonical connections of Norden and almost contact B-metric structures",
                 "nordenkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--input", o.input, "input document (JSON)");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--tolerance", o.tolerance, "relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "64-bit seed");
    app.add_option("--samples", o.samples, "sample count")->check(CLI::NonNegativeNumber);
    app.add_option("--which", o.which, "connection: b, canonical, kt or all");
    app.set_version_flag("--version", std::string(kVersion));

    auto* validate = app.add_subcommand("validate", "check structure axioms and F admissibility");
    auto* classify = app.add_subcommand("classify", "classify F by all routes");
    auto* connections = app.add_subcommand("connections", "natural connections, torsion and identity ledger");
    auto* selftest = app.add_subcommand("selftest", "run the invariant suite on random samples");
    selftest->add_option("--parity", o.parity, "even, odd or all");
    selftest->add_option("--n", o.n, "half dimension (default 2 and 3)");
    auto* sample = app.add_subcommand("sample", "write random input documents");
    sample->add_option("--class", o.target, "class target, e.g. W1+W3, F3+F7, U0");
    sample->add_option("--n", o.n, "half dimension (default 2)");
    sample->add_flag("--lie", o.lie, "sample a Lie model instead");
    sample->add_option("--parity", o.parity, "parity of the Lie model");
    auto* transform = app.add_subcommand("transform", "constant-parameter conformal transformation");
    transform->add_option("--u", o.u);
    transform->add_option("--v", o.v);
    transform->add_option("--w", o.w, "odd dimension only");

    std::vector<std::string> argv_store{"nordenkit"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        error_report(o, "ParseError", e.what(), kExitInputError, out, err);
        return kExitInputError;
    }

    try {
        if (validate->parsed()) return cmd_validate(o, out);
        if (classify->parsed()) return cmd_classify(o, out);
        if (connections->parsed()) return cmd_connections(o, out);
        if (selftest->parsed()) return cmd_selftest(o, out);
        if (sample->parsed()) return cmd_sample(o, out);
        if (transform->parsed()) return cmd_transform(o, out);
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        error_report(o, to_string(e.kind()), e.what(), code, out, err);
        return code;
    } catch (const std::exception& e) {
        error_report(o, "InternalError", e.what(), kExitInconsistency, out, err);
        return kExitInconsistency;
    }
    return kExitInputError;
}

}  // namespace nk
