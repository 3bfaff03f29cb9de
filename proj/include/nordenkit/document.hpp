#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "nordenkit/lie_model.hpp"

namespace nk {

using Json = nlohmann::ordered_json;

/// Self-describing input: kind "even-point", "odd-point" or "lie". Arrays are
/// {"shape": [...], "data": [...]} with row-major data.
struct InputDocument {
    std::string kind;
    int dim = 0;
    Matrix g;
    std::optional<Matrix> J;
    std::optional<Matrix> phi;
    std::optional<Vector> xi, eta;
    std::optional<Tensor3> F;
    std::optional<Tensor3> structure_constants;
    std::map<std::string, std::string> metadata;

    bool odd() const { return kind == "odd-point" || (kind == "lie" && phi.has_value()); }
};

/// Throws Parse errors naming the offending field.
InputDocument parse_document(const Json& j);
InputDocument parse_document_text(const std::string& text);
Json to_json(const InputDocument& doc);

Json array_json(const Matrix& m);
Json array_json(const Vector& v);
Json array_json(const Tensor3& t);

/// Structure, optional Lie model and the F to work with (given or from the model).
struct LoadedInput {
    InputDocument doc;
    std::optional<NordenStructure> even;
    std::optional<ContactBStructure> odd;
    std::optional<LieAlgebraModel> model;
    std::optional<Tensor3> F;
};

LoadedInput load_input(const InputDocument& doc, const Tolerance& tol = {});

InputDocument document_from(const NordenStructure& s, const std::optional<Tensor3>& F = {});
InputDocument document_from(const ContactBStructure& s, const std::optional<Tensor3>& F = {});
InputDocument document_from(const LieAlgebraModel& m);

}  // namespace nk
