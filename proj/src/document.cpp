#include "nordenkit/document.hpp"

#include <sstream>

namespace nk {

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Parse, "field '" + field + "': " + what);
}

std::vector<double> read_array(const Json& j, const std::string& field, const std::vector<int>& shape) {
    if (!j.is_object() || !j.contains("shape") || !j.contains("data"))
        parse_error(field, "expected an object with 'shape' and 'data'");
    const Json& sh = j["shape"];
    if (!sh.is_array() || sh.size() != shape.size())
        parse_error(field, "expected a shape of rank " + std::to_string(shape.size()));
    std::size_t total = 1;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (!sh[i].is_number_integer() || sh[i].get<int>() != shape[i]) {
            std::ostringstream os;
            os << "shape entry " << i << " should be " << shape[i] << ", got " << sh[i].dump();
            parse_error(field, os.str());
        }
        total *= std::size_t(shape[i]);
    }
    const Json& data = j["data"];
    if (!data.is_array()) parse_error(field, "'data' must be an array");
    if (data.size() != total)
        parse_error(field, "expected " + std::to_string(total) + " values, got " + std::to_string(data.size()));
    std::vector<double> out;
    out.reserve(total);
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!data[i].is_number()) parse_error(field, "data[" + std::to_string(i) + "] is not a number");
        out.push_back(data[i].get<double>());
    }
    return out;
}

Matrix read_matrix(const Json& j, const std::string& field, int d) {
    const auto v = read_array(j, field, {d, d});
    Matrix m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = v[std::size_t(r) * d + c];
    return m;
}

Vector read_vector(const Json& j, const std::string& field, int d) {
    const auto v = read_array(j, field, {d});
    return Eigen::Map<const Vector>(v.data(), d);
}

Tensor3 read_tensor(const Json& j, const std::string& field, int d) {
    const auto v = read_array(j, field, {d, d, d});
    return Tensor3::from_vec(d, Eigen::Map<const Vector>(v.data(), Eigen::Index(v.size())));
}

const Json& need(const Json& j, const std::string& field) {
    if (!j.contains(field)) parse_error(field, "missing");
    return j[field];
}

}  // namespace

Json array_json(const Matrix& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    return {{"shape", {m.rows(), m.cols()}}, {"data", data}};
}

Json array_json(const Vector& v) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
    return {{"shape", {v.size()}}, {"data", data}};
}

Json array_json(const Tensor3& t) {
    Json data = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) data.push_back(t.data()[i]);
    return {{"shape", {t.dim(), t.dim(), t.dim()}}, {"data", data}};
}

InputDocument parse_document(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "document must be a JSON object");
    InputDocument doc;
    const Json& kind = need(j, "kind");
    if (!kind.is_string()) parse_error("kind", "must be a string");
    doc.kind = kind.get<std::string>();
    if (doc.kind != "even-point" && doc.kind != "odd-point" && doc.kind != "lie")
        parse_error("kind", "expected even-point, odd-point or lie, got '" + doc.kind + "'");

    const bool has_phi = j.contains("phi");
    const bool odd = doc.kind == "odd-point" || (doc.kind == "lie" && has_phi);
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer()) parse_error("dim", "must be an integer");
        doc.dim = j["dim"].get<int>();
    } else if (j.contains("n")) {
        if (!j["n"].is_number_integer()) parse_error("n", "must be an integer");
        const int n = j["n"].get<int>();
        doc.dim = odd ? 2 * n + 1 : 2 * n;
    } else {
        parse_error("n", "either 'n' or 'dim' is required");
    }
    if (doc.dim < 1) parse_error("dim", "must be positive");
    if (j.contains("n") && j.contains("dim") && j["n"].is_number_integer()) {
        const int n = j["n"].get<int>();
        if ((odd ? 2 * n + 1 : 2 * n) != doc.dim) parse_error("n", "inconsistent with 'dim'");
    }
    const int d = doc.dim;
    doc.g = read_matrix(need(j, "g"), "g", d);
    if (odd) {
        doc.phi = read_matrix(need(j, "phi"), "phi", d);
        doc.xi = read_vector(need(j, "xi"), "xi", d);
        doc.eta = read_vector(need(j, "eta"), "eta", d);
    } else {
        doc.J = read_matrix(need(j, "J"), "J", d);
    }
    if (j.contains("F") && !j["F"].is_null()) doc.F = read_tensor(j["F"], "F", d);
    if (doc.kind == "lie")
        doc.structure_constants = read_tensor(need(j, "structure_constants"), "structure_constants", d);
    else if (j.contains("structure_constants"))
        parse_error("structure_constants", "only allowed for kind 'lie'");
    if (j.contains("metadata")) {
        const Json& md = j["metadata"];
        if (!md.is_object()) parse_error("metadata", "must be an object");
        for (const auto& [k, v] : md.items()) doc.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return doc;
}

InputDocument parse_document_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
    return parse_document(j);
}

Json to_json(const InputDocument& doc) {
    Json j;
    j["kind"] = doc.kind;
    j["dim"] = doc.dim;
    j["g"] = array_json(doc.g);
    if (doc.J) j["J"] = array_json(*doc.J);
    if (doc.phi) j["phi"] = array_json(*doc.phi);
    if (doc.xi) j["xi"] = array_json(*doc.xi);
    if (doc.eta) j["eta"] = array_json(*doc.eta);
    if (doc.F) j["F"] = array_json(*doc.F);
    if (doc.structure_constants) j["structure_constants"] = array_json(*doc.structure_constants);
    if (!doc.metadata.empty()) {
        Json md = Json::object();
        for (const auto& [k, v] : doc.metadata) md[k] = v;
        j["metadata"] = md;
    }
    return j;
}

LoadedInput load_input(const InputDocument& doc, const Tolerance& tol) {
    LoadedInput in;
    in.doc = doc;
    if (doc.odd())
        in.odd = validate_contact_b(*doc.phi, *doc.xi, *doc.eta, doc.g, tol);
    else
        in.even = validate_norden(*doc.J, doc.g, tol);
    if (doc.kind == "lie") {
        in.model = in.odd ? make_lie_model(*doc.structure_constants, *in.odd, tol)
                          : make_lie_model(*doc.structure_constants, *in.even, tol);
        in.F = fundamental_tensor(*in.model);
    }
    if (doc.F) {
        if (in.F && relative((*doc.F - *in.F).norm(), in.F->norm(), tol) > std::sqrt(tol.rel))
            throw Error(ErrorKind::Parse, "field 'F': does not match the F of the Lie model");
        in.F = *doc.F;
    }
    return in;
}

InputDocument document_from(const NordenStructure& s, const std::optional<Tensor3>& F) {
    InputDocument doc;
    doc.kind = "even-point";
    doc.dim = s.dim();
    doc.g = s.metric().g();
    doc.J = s.J();
    doc.F = F;
    return doc;
}

InputDocument document_from(const ContactBStructure& s, const std::optional<Tensor3>& F) {
    InputDocument doc;
    doc.kind = "odd-point";
    doc.dim = s.dim();
    doc.g = s.metric().g();
    doc.phi = s.phi();
    doc.xi = s.xi();
    doc.eta = s.eta();
    doc.F = F;
    return doc;
}

InputDocument document_from(const LieAlgebraModel& m) {
    InputDocument doc = m.odd() ? document_from(m.odd_structure()) : document_from(m.even_structure());
    doc.kind = "lie";
    doc.structure_constants = m.c;
    return doc;
}

}  // namespace nk
