#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "emmemory/bns.hpp"
#include "emmemory/detector.hpp"
#include "emmemory/memory.hpp"
#include "emmemory/sphere.hpp"
#include "emmemory/validate.hpp"
#include "emmemory/waveform.hpp"

namespace py = pybind11;
using namespace emm;

namespace {

using PyGrid = std::shared_ptr<SphereGrid>;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Fields cross the boundary as (n_theta, n_phi) for scalars and
// (2, n_theta, n_phi) for vectors and STF tensors.
template <FieldKind K>
Array to_numpy(const Field<K>& f) {
  const SphereGrid& g = f.g();
  std::vector<py::ssize_t> shape;
  if (Field<K>::kComponents == 2) shape.push_back(2);
  shape.push_back(g.n_theta());
  shape.push_back(g.n_phi());
  Array out(shape);
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

template <FieldKind K>
Field<K> from_numpy(const GridPtr& grid, const Array& a) {
  const std::size_t expect = Field<K>::kComponents * grid->size();
  if (static_cast<std::size_t>(a.size()) != expect)
    throw std::invalid_argument("array has " + std::to_string(a.size()) + " values, grid needs " +
                                std::to_string(expect));
  return Field<K>(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

// Trains are (n_u, ...field shape).
template <FieldKind K>
Array train_to_numpy(const Train<K>& t) {
  const SphereGrid& g = *t.grid;
  std::vector<py::ssize_t> shape{t.size()};
  if (Field<K>::kComponents == 2) shape.push_back(2);
  shape.push_back(g.n_theta());
  shape.push_back(g.n_phi());
  Array out(shape);
  double* dst = out.mutable_data();
  for (const auto& s : t.samples) dst = std::copy(s.data().begin(), s.data().end(), dst);
  return out;
}

template <FieldKind K>
Train<K> train_from_numpy(TrainKind kind, const GridPtr& grid, const UGrid& u, const Array& a) {
  u.validate();
  const std::size_t per = Field<K>::kComponents * grid->size();
  if (static_cast<std::size_t>(a.size()) != per * u.n)
    throw std::invalid_argument("train array does not match the grid and u samples");
  Train<K> t{kind, u, grid, {}};
  t.samples.reserve(u.n);
  for (int k = 0; k < u.n; ++k)
    t.samples.emplace_back(grid, std::vector<double>(a.data() + k * per, a.data() + (k + 1) * per));
  return t;
}

py::tuple parity_arrays(const ParityCoeffs& c) {
  auto e = c.electric_values();
  auto b = c.magnetic_values();
  return py::make_tuple(Array(e.size(), e.data()), Array(b.size(), b.data()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral tools for gravitational and electromagnetic memory on the sphere.";

  py::enum_<Parity>(m, "Parity").value("ELECTRIC", Parity::kElectric).value("MAGNETIC", Parity::kMagnetic);

  py::class_<SphereGrid, std::shared_ptr<SphereGrid>>(m, "Grid")
      .def(py::init([](int l_max) { return std::const_pointer_cast<SphereGrid>(make_grid(l_max)); }),
           py::arg("l_max"))
      .def_property_readonly("l_max", &SphereGrid::l_max)
      .def_property_readonly("n_theta", &SphereGrid::n_theta)
      .def_property_readonly("n_phi", &SphereGrid::n_phi)
      .def_property_readonly("theta", [](const SphereGrid& g) { return Array(g.theta().size(), g.theta().data()); })
      .def_property_readonly("phi", [](const SphereGrid& g) { return Array(g.phi().size(), g.phi().data()); })
      .def_property_readonly("weights",
                             [](const SphereGrid& g) { return Array(g.weights().size(), g.weights().data()); })
      .def("integrate", [](const SphereGrid& g, const Array& a) {
        if (static_cast<std::size_t>(a.size()) != g.size())
          throw std::invalid_argument("array does not match the grid");
        return g.integrate({a.data(), g.size()});
      });

  py::class_<PulseSpec>(m, "Pulse")
      .def(py::init([](double amplitude, double center, double width, int l, int mm, Parity parity) {
             return PulseSpec{amplitude, center, width, l, mm, parity};
           }),
           py::arg("amplitude"), py::arg("center"), py::arg("width"), py::arg("l"), py::arg("m"),
           py::arg("parity") = Parity::kElectric)
      .def_readwrite("amplitude", &PulseSpec::amplitude)
      .def_readwrite("center", &PulseSpec::center)
      .def_readwrite("width", &PulseSpec::width)
      .def_readwrite("l", &PulseSpec::l)
      .def_readwrite("m", &PulseSpec::m)
      .def_readwrite("parity", &PulseSpec::parity);

  // Harmonics and transforms.
  m.def("scalar_harmonic", [](int l, int mm, const PyGrid& g) { return to_numpy(scalar_harmonic(l, mm, g)); },
        py::arg("l"), py::arg("m"), py::arg("grid"));
  m.def("tensor_basis",
        [](int l, int mm, Parity p, const PyGrid& g) { return to_numpy(tensor_basis(l, mm, p, g)); },
        py::arg("l"), py::arg("m"), py::arg("parity"), py::arg("grid"));
  m.def("vector_basis",
        [](int l, int mm, Parity p, const PyGrid& g) { return to_numpy(vector_basis(l, mm, p, g)); },
        py::arg("l"), py::arg("m"), py::arg("parity"), py::arg("grid"));
  m.def(
      "sht_analyze",
      [](const PyGrid& g, const Array& f) {
        const ScalarCoeffs c = sht_analyze(from_numpy<FieldKind::kScalar>(g, f));
        return Array(c.values().size(), c.values().data());
      },
      py::arg("grid"), py::arg("field"), "Coefficients ordered by l*l + l + m.");
  m.def(
      "sht_synthesize",
      [](const PyGrid& g, const Array& a) {
        ScalarCoeffs c(g->l_max());
        if (static_cast<std::size_t>(a.size()) != c.values().size())
          throw std::invalid_argument("coefficient count does not match l_max");
        std::copy(a.data(), a.data() + a.size(), c.values().begin());
        return to_numpy(sht_synthesize(c, g));
      },
      py::arg("grid"), py::arg("coeffs"));
  m.def(
      "tensor_analyze",
      [](const PyGrid& g, const Array& t) { return parity_arrays(tensor_analyze(from_numpy<FieldKind::kStf>(g, t))); },
      py::arg("grid"), py::arg("field"), "Electric and magnetic coefficients from l = 2, ordered by l*l + l + m - 4.");
  m.def(
      "divergence",
      [](const PyGrid& g, const Array& t) { return to_numpy(divergence(from_numpy<FieldKind::kStf>(g, t))); },
      py::arg("grid"), py::arg("field"));
  m.def(
      "gradient",
      [](const PyGrid& g, const Array& f) { return to_numpy(gradient(from_numpy<FieldKind::kScalar>(g, f))); },
      py::arg("grid"), py::arg("field"));
  m.def("tensor_divergence_factor", &tensor_divergence_factor, py::arg("l"));

  // Waveforms.
  m.def(
      "xi_train",
      [](const std::vector<PulseSpec>& pulses, const PyGrid& g, double u0, double du, int n) {
        return train_to_numpy(gen_xi_train(pulses, g, UGrid{u0, du, n}));
      },
      py::arg("pulses"), py::arg("grid"), py::arg("u0"), py::arg("du"), py::arg("n"));
  m.def(
      "af_train",
      [](const std::vector<PulseSpec>& pulses, const PyGrid& g, double u0, double du, int n) {
        return train_to_numpy(gen_af_train(pulses, g, UGrid{u0, du, n}));
      },
      py::arg("pulses"), py::arg("grid"), py::arg("u0"), py::arg("du"), py::arg("n"));
  m.def(
      "aw_from_xi",
      [](const Array& xi, const PyGrid& g, double u0, double du) {
        const UGrid u{u0, du, static_cast<int>(xi.shape(0))};
        return train_to_numpy(aw_from_xi(train_from_numpy<FieldKind::kStf>(TrainKind::kXi, g, u, xi)));
      },
      py::arg("xi"), py::arg("grid"), py::arg("u0"), py::arg("du"));

  // Memory.
  m.def(
      "compute_kernel",
      [](const Array& xi, const PyGrid& g, double u0, double du, std::optional<Array> af) {
        const UGrid u{u0, du, static_cast<int>(xi.shape(0))};
        const TensorTrain x = train_from_numpy<FieldKind::kStf>(TrainKind::kXi, g, u, xi);
        if (!af) return to_numpy(compute_kernel(x));
        const VectorTrain a = train_from_numpy<FieldKind::kVector>(TrainKind::kAf, g, u, *af);
        return to_numpy(compute_kernel(x, &a));
      },
      py::arg("xi"), py::arg("grid"), py::arg("u0"), py::arg("du"), py::arg("af") = py::none());
  m.def(
      "solve_memory",
      [](const PyGrid& g, const Array& F) {
        const MemoryResult r = solve_memory(from_numpy<FieldKind::kScalar>(g, F));
        py::dict d;
        d["F_bar"] = r.F_bar;
        d["Phi"] = to_numpy(r.Phi);
        d["delta_sigma"] = to_numpy(r.delta_sigma);
        d["dropped_l1"] = r.dropped_l1;
        d["energy_radiated"] = r.energy_radiated;
        d["residual"] = r.residual;
        return d;
      },
      py::arg("grid"), py::arg("F"));
  m.def(
      "total_mass_change",
      [](const Array& xi, const PyGrid& g, double u0, double du, std::optional<Array> af) {
        const UGrid u{u0, du, static_cast<int>(xi.shape(0))};
        const TensorTrain x = train_from_numpy<FieldKind::kStf>(TrainKind::kXi, g, u, xi);
        if (!af) return total_mass_change(x);
        const VectorTrain a = train_from_numpy<FieldKind::kVector>(TrainKind::kAf, g, u, *af);
        return total_mass_change(x, &a);
      },
      py::arg("xi"), py::arg("grid"), py::arg("u0"), py::arg("du"), py::arg("af") = py::none());

  // Detector.
  m.def(
      "integrate_jacobi",
      [](const Array& aw, double t0, double dt, double d0, double r) {
        if (aw.ndim() != 2 || aw.shape(1) != 2) throw std::invalid_argument("aw must have shape (n, 2)");
        std::vector<Stf2> series(aw.shape(0));
        for (std::size_t k = 0; k < series.size(); ++k) series[k] = {aw.at(k, 0), aw.at(k, 1)};
        DetectorConfig cfg;
        cfg.d0 = d0;
        cfg.r = r;
        const Trajectory tr = integrate_jacobi(series, UGrid{t0, dt, static_cast<int>(series.size())}, cfg);
        Array disp({static_cast<py::ssize_t>(tr.t.size()), py::ssize_t{2}, py::ssize_t{2}});
        double* dst = disp.mutable_data();
        for (const ArmMatrix& a : tr.displacement) dst = std::copy(a.begin(), a.end(), dst);
        py::dict d;
        d["t"] = tr.t;
        d["displacement"] = disp;
        d["rest_residual"] = return_to_rest_residual(tr);
        return d;
      },
      py::arg("aw"), py::arg("t0"), py::arg("dt"), py::arg("d0"), py::arg("r"));

  // Binary neutron star energy budget.
  m.def(
      "bns_energy",
      [](double total_mass, double radiated_fraction, double b0, double dbdt, double merge_time_ms,
         double ns_radius_km, double decay_exponent, const std::string& kappa) {
        bns::Scenario s;
        s.total_mass = total_mass;
        s.radiated_fraction = radiated_fraction;
        s.b0 = b0;
        s.dbdt = dbdt;
        s.merge_time_ms = merge_time_ms;
        s.ns_radius_km = ns_radius_km;
        s.decay_exponent = decay_exponent;
        s.kappa = bns::parse_kappa(kappa);
        const bns::EnergyReport r = bns::compare(s);
        py::dict d;
        d["grav_erg"] = r.grav_erg;
        d["mag_erg"] = r.mag_erg;
        d["ratio_mag_over_grav"] = r.ratio_mag_over_grav;
        d["b_final"] = r.b_final;
        d["bh_reference_fraction"] = r.bh_reference_fraction;
        return d;
      },
      py::arg("total_mass") = 2.0, py::arg("radiated_fraction") = 0.01, py::arg("b0") = 0.0,
      py::arg("dbdt") = 0.0, py::arg("merge_time_ms") = 1000.0, py::arg("ns_radius_km") = 10.0,
      py::arg("decay_exponent") = 2.5, py::arg("kappa") = "quarter");

  m.def(
      "validate",
      [](int l_max, std::uint64_t seed) {
        py::list out;
        for (const CheckResult& c : run_invariant_suite(l_max, seed)) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["tolerance"] = c.tolerance;
          d["passed"] = c.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("l_max") = 8, py::arg("seed") = 0);
}
