#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlfi/certify.hpp"
#include "nlfi/document.hpp"
#include "nlfi/ifs.hpp"
#include "nlfi/perturb.hpp"
#include "nlfi/rb.hpp"
#include "nlfi/report.hpp"

namespace py = pybind11;
using namespace nlfi;

namespace {

py::object to_python(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::array_t<double> values_array(const SampledFunction& f) {
  const std::size_t n = f.grid().size(), c = f.components();
  py::array_t<double> out({n, c});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t j = 0; j < n; ++j) {
    const auto row = f.at(j);
    for (std::size_t k = 0; k < c; ++k) v(j, k) = row[k];
  }
  return out;
}

py::array_t<double> points_array(const PointSet& s) {
  const std::size_t w = s.dim() + 1;
  py::array_t<double> out({s.size(), w});
  std::copy(s.flat().begin(), s.flat().end(), out.mutable_data());
  return out;
}

class Problem {
 public:
  explicit Problem(ProblemDocument doc) : doc_(std::move(doc)) { rebind(doc_.eps); }

  static Problem from_json(const std::string& text) { return Problem(parse_document_text(text)); }
  static Problem from_file(const std::string& path) { return Problem(load_document(path)); }
  static Problem builtin(const std::string& name) { return Problem(parse_document(builtin_example(name).document)); }

  std::string name() const { return pr_->name(); }
  std::size_t maps() const { return pr_->size(); }
  std::string codomain() const { return pr_->codomain().to_string(); }
  double eps() const { return pr_->eps(); }
  py::object document() const { return to_python(doc_.source); }
  py::object partition() const { return to_python(to_json(pr_->partition())); }

  Problem with_eps(double eps) const {
    Problem p(doc_);
    p.rebind(eps);
    return p;
  }

  py::object certify(const std::string& space, double p, int alpha) const {
    Certificate c;
    if (space == "default") c = default_certificate(*pr_);
    else if (space == "sup") c = certify_sup(*pr_);
    else if (space == "lp") c = certify_lp(*pr_, p);
    else if (space == "calpha") c = certify_calpha(*pr_, alpha);
    else if (space == "algebra") c = certify_banach_algebra(*pr_);
    else throw py::value_error("space must be one of default, sup, lp, calpha, algebra");
    return to_python(to_json(c));
  }

  py::dict solve(std::optional<std::size_t> grid, std::optional<double> tol, std::size_t max_iter,
                 std::optional<double> override_factor) const {
    SolveOptions opt;
    opt.tol = tol.value_or(doc_.tol.value_or(1e-9));
    opt.max_iter = max_iter;
    opt.override_factor = override_factor;
    const UniformGrid g(pr_->domain(), grid.value_or(doc_.grid.value_or(4096)));
    std::optional<Certificate> cert;
    if (!override_factor) cert = default_certificate(*pr_);
    std::optional<SolveResult> r;
    {
      py::gil_scoped_release release;
      r.emplace(solve_fixed_point(*pr_, SampledFunction::zero(g, pr_->codomain()), cert ? &*cert : nullptr, opt));
    }
    py::dict out = to_python(to_json(*r));
    out["x"] = py::array(py::cast(g.points()));
    out["psi"] = values_array(r->psi);
    return out;
  }

  py::array_t<double> apply(py::array_t<double, py::array::c_style | py::array::forcecast> values) const {
    const std::size_t c = pr_->codomain().components();
    if (values.ndim() == 1 && c == 1) values = values.reshape({values.shape(0), py::ssize_t(1)});
    if (values.ndim() != 2 || std::size_t(values.shape(1)) != c || values.shape(0) < 2) {
      throw py::value_error("expected an array of shape (n + 1, " + std::to_string(c) + ") with n >= 1");
    }
    const UniformGrid g(pr_->domain(), values.shape(0) - 1);
    const std::vector<double> flat(values.data(), values.data() + values.size());
    return values_array(apply_rb(*pr_, SampledFunction(g, pr_->codomain(), flat)));
  }

  py::array_t<double> chaos(std::size_t points, std::size_t burn_in, std::uint64_t seed) const {
    const GraphIfs g(*pr_);
    const std::vector<double> start(pr_->codomain().components() + 1, 0.0);
    PointSet s;
    {
      py::gil_scoped_release release;
      s = chaos_game(g, start, points + burn_in, burn_in, seed);
    }
    return points_array(s);
  }

  py::dict sweep(const std::vector<double>& eps, std::size_t grid, double tol) const {
    SolveOptions opt;
    opt.tol = tol;
    std::vector<SweepEntry> entries;
    {
      py::gil_scoped_release release;
      entries = nlfi::sweep(doc_.family(), eps, grid, opt);
    }
    const double L = uniform_contraction(entries);
    const auto base = std::find(eps.begin(), eps.end(), doc_.eps);
    py::list rows;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      py::dict row;
      row["eps"] = entries[k].eps;
      row["certificate"] = to_python(to_json(entries[k].certificate));
      row["iterations"] = entries[k].result.iterations;
      row["residual"] = entries[k].result.residual;
      row["psi"] = values_array(entries[k].result.psi);
      if (base != eps.end()) {
        const auto& psi0 = entries[base - eps.begin()].result.psi;
        const auto cb = continuity_bound(doc_.family().instantiate(entries[k].eps), entries[k].result.psi, psi0, L);
        row["bound"] = cb.bound;
        row["actual"] = cb.actual;
      }
      rows.append(row);
    }
    py::dict out;
    out["x"] = py::array(py::cast(UniformGrid(pr_->domain(), grid).points()));
    out["uniform_L"] = L;
    out["entries"] = rows;
    return out;
  }

 private:
  void rebind(double eps) {
    if (doc_.eps_domain) pr_ = std::make_shared<FractalProblem>(doc_.family().instantiate(eps));
    else if (eps == 0.0 || eps == doc_.eps) pr_ = std::make_shared<FractalProblem>(doc_.spec, eps);
    else throw py::value_error("problem has no eps parameter");
  }

  ProblemDocument doc_;
  std::shared_ptr<const FractalProblem> pr_;
};

}  // namespace

PYBIND11_MODULE(_nlfi, m) {
  m.doc() = "Read-Bajraktarevic fixed points, certificates and graph IFS attractors";

  py::register_exception<DocumentError>(m, "DocumentError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);
  py::register_exception<CertificateRequiredError>(m, "CertificateRequiredError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("builtin_names", [] {
    std::vector<std::string> names;
    for (const auto& e : builtin_examples()) names.push_back(e.name);
    return names;
  });

  m.def("sigma_table", [](int q) {
    const SigmaTable t = sigma_table(q);
    py::dict out;
    for (const auto& [tuple, count] : t.entries) out[py::tuple(py::cast(tuple))] = count;
    return out;
  }, py::arg("q"), "Chain-rule coefficients of (f o g)^(q) keyed by ordered tuples.");

  py::class_<Problem>(m, "Problem")
      .def_static("from_json", &Problem::from_json, py::arg("text"))
      .def_static("from_file", &Problem::from_file, py::arg("path"))
      .def_static("builtin", &Problem::builtin, py::arg("name"))
      .def_property_readonly("name", &Problem::name)
      .def_property_readonly("maps", &Problem::maps)
      .def_property_readonly("codomain", &Problem::codomain)
      .def_property_readonly("eps", &Problem::eps)
      .def("document", &Problem::document)
      .def("partition", &Problem::partition)
      .def("with_eps", &Problem::with_eps, py::arg("eps"))
      .def("certify", &Problem::certify, py::arg("space") = "default", py::arg("p") = 1.0, py::arg("alpha") = 0)
      .def("solve", &Problem::solve, py::arg("grid") = py::none(), py::arg("tol") = py::none(),
           py::arg("max_iter") = 10000, py::arg("override_factor") = py::none())
      .def("apply", &Problem::apply, py::arg("values"), "One application of the RB operator to grid samples.")
      .def("chaos", &Problem::chaos, py::arg("points"), py::arg("burn_in") = 100, py::arg("seed") = 7)
      .def("sweep", &Problem::sweep, py::arg("eps"), py::arg("grid") = 4096, py::arg("tol") = 1e-9);
}
