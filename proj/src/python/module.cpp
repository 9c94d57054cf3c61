#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biasforge/cli.hpp"
#include "biasforge/errors.hpp"
#include "biasforge/io.hpp"

#include <sstream>

namespace py = pybind11;
using namespace biasforge;

namespace {

SignChangeSpec make_spec(const Distribution& X, const std::string& bias, const std::vector<double>& nodes) {
    return {parse_bias(bias, &X), NodeSet(nodes)};
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Generalized biased transforms of real distributions";

    // Messages start with the error code, e.g. "DegenerateAlpha: ...".
    static py::exception<Error> exc(m, "BiasforgeError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<Distribution>(m, "Distribution")
        .def_static("from_json", &parse_distribution, py::arg("text"))
        .def("describe", &Distribution::describe)
        .def("density", &Distribution::density)
        .def("cdf", &Distribution::cdf)
        .def("has_density", &Distribution::has_density)
        .def("is_discrete", &Distribution::is_discrete)
        .def("moment", [](const Distribution& d, int n) { return moment(d, n); })
        .def("sample",
             [](const Distribution& d, std::size_t n, std::uint64_t seed) {
                 RandomSource rng(seed);
                 return sample(d, rng, n);
             },
             py::arg("n"), py::arg("seed"))
        .def("__repr__", [](const Distribution& d) { return "<Distribution " + d.describe() + ">"; });

    py::class_<BiasedDistribution>(m, "BiasedDistribution")
        .def_readonly("law", &BiasedDistribution::law)
        .def_readonly("alpha", &BiasedDistribution::alpha)
        .def_readonly("beta", &BiasedDistribution::beta)
        .def_property_readonly("steps", [](const BiasedDistribution& b) { return b.recipe.steps; })
        .def_property_readonly("step_normalizers", [](const BiasedDistribution& b) { return b.recipe.step_normalizers; })
        .def("density", [](const BiasedDistribution& b, double t) { return b.density(t); });

    m.def("uniform", &uniform, py::arg("lo"), py::arg("hi"));
    m.def("normal", &normal, py::arg("mean"), py::arg("sd"));
    m.def("exponential", &exponential, py::arg("rate"));
    m.def("half_normal", &half_normal, py::arg("sigma"));
    m.def("discrete", [](const std::vector<std::pair<double, double>>& atoms) {
        std::vector<Atom> a;
        for (const auto& [x, p] : atoms) a.push_back({x, p});
        return discrete(std::move(a));
    }, py::arg("atoms"));

    m.def("bias",
          [](const Distribution& X, const std::string& bias, const std::vector<double>& nodes, std::optional<int> order) {
              const auto spec = make_spec(X, bias, nodes);
              return bias_km(X, spec, order.value_or(spec.k()));
          },
          py::arg("X"), py::arg("bias"), py::arg("nodes"), py::arg("m") = py::none(),
          "X-(B,m) biased law; m defaults to the number of nodes.");
    m.def("hat_transform", [](const Distribution& X, double a) { return hat_transform(X, a); }, py::arg("X"),
          py::arg("a"));
    m.def("higher_order_transform",
          [](const Distribution& X, const std::string& op) { return higher_order_transform(X, parse_operator(op, &X)); },
          py::arg("X"), py::arg("operator_json"));

    m.def("complete_homogeneous", [](const std::vector<double>& v, int d) { return complete_homogeneous(v, d); },
          py::arg("vars"), py::arg("degree"));
    m.def("falling_factorial", &falling_factorial, py::arg("n"), py::arg("j"));

    m.def("first_order_bound",
          [](double gap, double alpha, double b_mean, double c0, double c1, double c2) {
              return first_order_bound({gap, alpha, b_mean, std::nullopt}, {c0, c1, c2, 0.0}).bound;
          },
          py::arg("coupling_gap"), py::arg("alpha"), py::arg("b_mean"), py::arg("c0") = 1.0, py::arg("c1") = 1.0,
          py::arg("c2") = 1.0);

    m.def("check_identity_exact",
          [](const Distribution& X, const std::string& bias, const std::vector<double>& nodes, int order, int degree) {
              const auto r = check_identity_exact(X, make_spec(X, bias, nodes), order, TestFunctionBank::monomial(degree));
              return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("pass") = r.pass,
                              py::arg("method") = r.method);
          },
          py::arg("X"), py::arg("bias"), py::arg("nodes"), py::arg("m"), py::arg("degree"),
          "Both sides of the identity for F = x^degree on a discrete X.");

    m.def("run_suite", [](const std::string& name, std::uint64_t seed, std::size_t n) {
        return json_loads(suite_json(run_suite(name, seed, n)));
    }, py::arg("name"), py::arg("seed") = 1, py::arg("n") = 100000);
    m.def("catalog", [] { return json_loads(catalog_json()); });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
