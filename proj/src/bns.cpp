#include "emmemory/bns.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "emmemory/sphere.hpp"

namespace emm::bns {

Kappa parse_kappa(const std::string& text) {
  if (text == "quarter") return KappaAnalytic{};
  if (text == "paper") return KappaCalibrated{};
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !(v > 0.0)) {
    throw std::invalid_argument("kappa must be 'quarter', 'paper' or a positive number, got '" + text + "'");
  }
  return v;
}

std::string kappa_name(const Kappa& k) {
  if (std::holds_alternative<KappaAnalytic>(k)) return "quarter";
  if (std::holds_alternative<KappaCalibrated>(k)) return "paper";
  return std::to_string(std::get<double>(k));
}

void Scenario::validate() const {
  if (!(total_mass > 0.0)) throw std::invalid_argument("total mass must be positive");
  if (!(radiated_fraction >= 0.0 && radiated_fraction < 1.0))
    throw std::invalid_argument("radiated fraction must lie in [0, 1)");
  if (!(ns_radius_km > 0.0)) throw std::invalid_argument("neutron star radius must be positive");
  if (!(b0 >= 0.0) || !(dbdt >= 0.0)) throw std::invalid_argument("field strength and growth rate must be non-negative");
  if (!(merge_time_ms >= 0.0)) throw std::invalid_argument("merger time must be non-negative");
  if (!(decay_exponent > 1.5)) throw std::invalid_argument("decay exponent must exceed 3/2 for finite exterior energy");
  if (const double* k = std::get_if<double>(&kappa); k && !(*k > 0.0))
    throw std::invalid_argument("kappa must be positive");
}

double Scenario::kappa_value() const {
  if (std::holds_alternative<KappaAnalytic>(kappa)) return 1.0 / (2.0 * (2.0 * decay_exponent - 3.0));
  if (std::holds_alternative<KappaCalibrated>(kappa)) return kKappaCalibrated;
  return std::get<double>(kappa);
}

double grav_energy(const Scenario& s) {
  s.validate();
  return s.radiated_fraction * s.total_mass * kErgPerSolarMass;
}

double final_surface_field(const Scenario& s) {
  s.validate();
  return s.b0 + s.dbdt * s.merge_time_ms;
}

double mag_energy(const Scenario& s) {
  s.validate();
  const double b = final_surface_field(s);
  const double r = s.radius_cm();
  return s.kappa_value() * b * b * r * r * r;
}

EnergyReport compare(const Scenario& s) {
  EnergyReport out;
  out.grav_erg = grav_energy(s);
  out.mag_erg = mag_energy(s);
  out.b_final = final_surface_field(s);
  out.ratio_mag_over_grav = out.grav_erg > 0.0 ? out.mag_erg / out.grav_erg : 0.0;
  return out;
}

double exterior_energy_closed_form(double b, double radius, double p) {
  if (!(p > 1.5)) throw std::invalid_argument("decay exponent must exceed 3/2");
  return b * b * radius * radius * radius / (2.0 * (2.0 * p - 3.0));
}

double exterior_energy_quadrature(double b, double radius, double p) {
  if (!(p > 1.5)) throw std::invalid_argument("decay exponent must exceed 3/2");
  // r = R / x maps [R, inf) to (0, 1]:
  //   E = B^2 R^3 / 2 * int_0^1 x^(2p - 4) dx
  std::vector<double> nodes, weights;
  gauss_legendre(64, nodes, weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = 0.5 * (nodes[i] + 1.0);
    sum += 0.5 * weights[i] * std::pow(x, 2.0 * p - 4.0);
  }
  return 0.5 * b * b * radius * radius * radius * sum;
}

}  // namespace emm::bns
