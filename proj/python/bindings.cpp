#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "blockcoh/blockframe.hpp"
#include "blockcoh/bounds.hpp"
#include "blockcoh/constructions.hpp"
#include "blockcoh/errors.hpp"
#include "blockcoh/flipping.hpp"
#include "blockcoh/io.hpp"
#include "blockcoh/randomgrass.hpp"

namespace py = pybind11;
using namespace blockcoh;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CMatrix to_cmatrix(const CArray& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return CMatrix(rows, cols, std::vector<cplx>(a.data(), a.data() + rows * cols));
}

py::array_t<cplx> to_numpy(const CMatrix& m) {
  py::array_t<cplx> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

// Reports travel as JSON so Python sees the same keys as the CLI.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::optional<Field> field_arg(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  return field_from_string(*s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block coherence toolkit";
  m.attr("__version__") = BLOCKCOH_VERSION;

  auto& base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<BlockFrame>(m, "BlockFrame")
      .def(py::init([](const CArray& data, std::size_t r, std::optional<std::string> field) {
             return BlockFrame::make(to_cmatrix(data), r, field_arg(field));
           }),
           py::arg("data"), py::arg("r"), py::arg("field") = py::none())
      .def_property_readonly("n", &BlockFrame::n)
      .def_property_readonly("r", &BlockFrame::r)
      .def_property_readonly("m", &BlockFrame::m)
      .def_property_readonly("field", [](const BlockFrame& a) { return std::string(to_string(a.field())); })
      .def_property_readonly("data", [](const BlockFrame& a) { return to_numpy(a.data()); })
      .def("block", [](const BlockFrame& a, std::size_t i) {
        if (i >= a.m()) throw py::index_error("block index out of range");
        return to_numpy(a.block(i));
      })
      .def("__repr__", [](const BlockFrame& a) {
        std::ostringstream s;
        s << "BlockFrame(n=" << a.n() << ", r=" << a.r() << ", m=" << a.m() << ", field=" << to_string(a.field()) << ")";
        return s.str();
      });

  m.def("mu", &mu, py::arg("frame"), py::arg("threads") = 1);
  m.def("nu", &nu, py::arg("frame"));
  m.def("nu1", [](const CArray& p) { return nu1(to_cmatrix(p)); }, py::arg("p"));
  m.def("gram_map", [](const BlockFrame& a, unsigned threads) {
        const GramMap g = gram_map(a, threads);
        py::array_t<double> out({g.m, g.m});
        std::copy(g.values.begin(), g.values.end(), out.mutable_data());
        return out;
      }, py::arg("frame"), py::arg("threads") = 1);
  m.def("analyze", [](const BlockFrame& a, unsigned threads) { return to_python(to_json(analyze(a, threads))); },
        py::arg("frame"), py::arg("threads") = 1);
  m.def("chordal_distance", [](const CArray& a, const CArray& b) { return chordal_distance(to_cmatrix(a), to_cmatrix(b)); });
  m.def("spectral_distance", [](const CArray& a, const CArray& b) { return spectral_distance(to_cmatrix(a), to_cmatrix(b)); });

  m.def("steiner_pairs_etf", [](std::size_t v) { return to_numpy(steiner_pairs_etf(v)); }, py::arg("v"));
  m.def("harmonic_qr_etf", [](std::size_t p) { return to_numpy(harmonic_qr_etf(p)); }, py::arg("p"));
  m.def("alltop_gabor", [](std::size_t p) { return to_numpy(alltop_gabor(p)); }, py::arg("p"));
  m.def("discrete_chirp", [](std::size_t p) { return to_numpy(discrete_chirp(p)); }, py::arg("p"));
  m.def("id_hadamard_union", [](unsigned k) { return to_numpy(id_hadamard_union(k)); }, py::arg("k"));
  m.def("kerdock_real", [](unsigned k) { return to_numpy(kerdock_real(k)); }, py::arg("k"));
  m.def("verify_etf", [](const CArray& p) { return verify_etf(to_cmatrix(p)); });
  m.def("verify_flat_union", [](const CArray& p) { return verify_flat_union(to_cmatrix(p)); });
  m.def("kron_construct1", [](const CArray& p, const CArray& q) { return kron_construct1(to_cmatrix(p), to_cmatrix(q)); });
  m.def("kron_construct2", [](const CArray& p, const CArray& q) { return kron_construct2(to_cmatrix(p), to_cmatrix(q)); });

  m.def("welch_block_lower", [](std::size_t mm, std::size_t n, std::size_t r) {
        return welch_block_lower({mm, n, r, Field::complex});
      }, py::arg("m"), py::arg("n"), py::arg("r"));
  m.def("orthobases_lower", &orthobases_lower, py::arg("n"), py::arg("r"));
  m.def("tail_bound_G", &tail_bound_G, py::arg("lambda1"), py::arg("n"), py::arg("r"));
  m.def("exponent_psi", &exponent_psi, py::arg("a"), py::arg("beta"));
  m.def("solve_a_hat", [](double beta) { return to_python(to_json(solve_a_hat(beta))); }, py::arg("beta"));

  m.def("sample_block_frame", [](std::size_t n, std::size_t r, std::size_t mm, std::uint64_t seed, std::uint64_t trial) {
        return sample_block_frame({n, r, mm, seed, trial});
      }, py::arg("n"), py::arg("r"), py::arg("m"), py::arg("seed"), py::arg("trial") = 0);
  m.def("empirical_mu_curve", [](std::size_t n, const std::vector<std::size_t>& grid, std::size_t m_cap,
                                 std::size_t trials, std::uint64_t seed, unsigned threads) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : empirical_mu_curve(n, grid, m_cap, trials, seed, threads)) rows.push_back(to_json(row));
        return to_python(rows);
      }, py::arg("n"), py::arg("r_grid"), py::arg("m_cap"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);

  m.def("flip", [](const BlockFrame& a, const std::string& variant) {
        FlipConfig cfg;
        cfg.norm_variant = norm_variant_from_string(variant);
        const FlipResult res = flip(a, cfg);
        return py::make_tuple(to_python(to_json(res)), res.flipped);
      }, py::arg("frame"), py::arg("variant") = "spectral");
  m.def("lemma2_bound", &lemma2_bound, py::arg("m"));
  m.def("thm14_min_c", &thm14_min_c, py::arg("m"), py::arg("n"), py::arg("r"));

  m.def("to_bfm", [](const BlockFrame& a) {
    std::ostringstream s;
    write_bfm(s, a);
    return s.str();
  });
  m.def("from_bfm", [](const std::string& text) {
    std::istringstream s(text);
    const BfmFile f = read_bfm(s);
    return BlockFrame::make(f.data, f.r, f.field);
  });
}
