#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nordenkit/cli.hpp"
#include "nordenkit/sampler.hpp"

namespace py = pybind11;
using namespace nk;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor3 to_tensor3(const Array& a) {
    if (a.ndim() != 3 || a.shape(0) != a.shape(1) || a.shape(1) != a.shape(2))
        throw Error(ErrorKind::Dimension, "expected a cubic rank-3 array");
    const int d = int(a.shape(0));
    return Tensor3::from_vec(d, Eigen::Map<const Vector>(a.data(), Eigen::Index(a.size())));
}

Array to_array(const Tensor3& t) {
    const auto d = py::ssize_t(t.dim());
    Array out({d, d, d});
    std::copy(t.data(), t.data() + t.size(), out.mutable_data());
    return out;
}

py::dict connection_dict(const Tensor3& Q, const Tensor3& T) {
    py::dict d;
    d["potential"] = to_array(Q);
    d["torsion"] = to_array(T);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Norden and almost contact B-metric structures: classification and natural connections";
    m.attr("__version__") = kVersion;

    static py::exception<Error> exc(m, "NordenkitError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object kind = py::str(to_string(e.kind()));
            PyErr_SetObject(exc.ptr(), py::make_tuple(kind, e.what()).ptr());
        }
    });

    py::class_<NordenStructure>(m, "NordenStructure")
        .def(py::init([](const Matrix& J, const Matrix& g, double tol) { return validate_norden(J, g, {tol}); }),
             py::arg("J"), py::arg("g"), py::arg("tolerance") = 1e-9)
        .def_static("canonical", &canonical_norden, py::arg("n"))
        .def_property_readonly("dim", &NordenStructure::dim)
        .def_property_readonly("J", &NordenStructure::J)
        .def_property_readonly("g", [](const NordenStructure& s) { return s.metric().g(); });

    py::class_<ContactBStructure>(m, "ContactBStructure")
        .def(py::init([](const Matrix& phi, const Vector& xi, const Vector& eta, const Matrix& g, double tol) {
                 return validate_contact_b(phi, xi, eta, g, {tol});
             }),
             py::arg("phi"), py::arg("xi"), py::arg("eta"), py::arg("g"), py::arg("tolerance") = 1e-9)
        .def_static("canonical", &canonical_contact_b, py::arg("n"))
        .def_property_readonly("dim", &ContactBStructure::dim)
        .def_property_readonly("phi", &ContactBStructure::phi)
        .def_property_readonly("xi", &ContactBStructure::xi)
        .def_property_readonly("eta", &ContactBStructure::eta)
        .def_property_readonly("g", [](const ContactBStructure& s) { return s.metric().g(); });

    m.def("sample_norden", [](int n, std::uint64_t seed) {
        Rng rng(seed);
        return sample_norden(n, rng);
    }, py::arg("n"), py::arg("seed") = 0);
    m.def("sample_contact_b", [](int n, std::uint64_t seed) {
        Rng rng(seed);
        return sample_contact_b(n, rng);
    }, py::arg("n"), py::arg("seed") = 0);
    m.def("sample_F", [](const NordenStructure& s, const std::string& cls, std::uint64_t seed) {
        Rng rng(seed);
        return to_array(sample_F_even(parse_even_class(cls), s, rng).F);
    }, py::arg("structure"), py::arg("cls"), py::arg("seed") = 0);
    m.def("sample_F", [](const ContactBStructure& s, const std::string& cls, std::uint64_t seed) {
        Rng rng(seed);
        return to_array(sample_F_odd(parse_odd_class(cls), s, rng).F);
    }, py::arg("structure"), py::arg("cls"), py::arg("seed") = 0);

    m.def("nijenhuis", [](const Array& F, const NordenStructure& s) {
        const NijenhuisEven nj = nijenhuis_from_F_even(to_tensor3(F), s);
        return py::make_tuple(to_array(nj.N), to_array(nj.N_hat));
    }, py::arg("F"), py::arg("structure"));
    m.def("nijenhuis", [](const Array& F, const ContactBStructure& s) {
        const NijenhuisOdd nj = nijenhuis_odd_from_F(to_tensor3(F), s);
        return py::make_tuple(to_array(nj.N), to_array(nj.N_hat));
    }, py::arg("F"), py::arg("structure"));
    m.def("F_from_nijenhuis", [](const Array& N, const Array& N_hat, const NordenStructure& s) {
        return to_array(F_from_nijenhuis_even(to_tensor3(N), to_tensor3(N_hat), s).F);
    }, py::arg("N"), py::arg("N_hat"), py::arg("structure"));
    m.def("F_from_nijenhuis", [](const Array& N, const Array& N_hat, const ContactBStructure& s) {
        return to_array(F_from_nijenhuis_odd(to_tensor3(N), to_tensor3(N_hat), s).F);
    }, py::arg("N"), py::arg("N_hat"), py::arg("structure"));

    m.def("classify", [](const Array& F, const NordenStructure& s, double tol) {
        return classify_even(to_tensor3(F), s, {tol}).name();
    }, py::arg("F"), py::arg("structure"), py::arg("tolerance") = 1e-9);
    m.def("classify", [](const Array& F, const ContactBStructure& s, double tol) {
        return classify_odd(to_tensor3(F), s, {tol}).name();
    }, py::arg("F"), py::arg("structure"), py::arg("tolerance") = 1e-9);

    m.def("connection", [](const Array& F, const NordenStructure& s, const std::string& which) {
        const Tensor3 f = to_tensor3(F);
        ConnectionEven c;
        if (which == "b") c = b_connection_even(f, s);
        else if (which == "canonical") c = canonical_connection_even(f, s);
        else if (which == "kt") c = kt_connection_even(f, s);
        else throw Error(ErrorKind::Parse, "which must be b, canonical or kt");
        return connection_dict(c.Q, c.torsion.T);
    }, py::arg("F"), py::arg("structure"), py::arg("which") = "canonical");
    m.def("connection", [](const Array& F, const ContactBStructure& s, const std::string& which) {
        const Tensor3 f = to_tensor3(F);
        ConnectionOdd c;
        if (which == "b") c = phi_b_connection(f, s);
        else if (which == "canonical") c = phi_canonical_connection(f, s);
        else if (which == "kt") c = phi_kt_connection(f, s);
        else throw Error(ErrorKind::Parse, "which must be b, canonical or kt");
        return connection_dict(c.Q, c.torsion.T);
    }, py::arg("F"), py::arg("structure"), py::arg("which") = "canonical");

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs one command; returns (exit_code, stdout, stderr).");
}
