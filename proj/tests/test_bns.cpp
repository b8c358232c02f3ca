#include <doctest.h>

#include "emmemory/bns.hpp"
#include "oracles.hpp"

using namespace emm::bns;

namespace {

Scenario field_scenario(double b, Kappa kappa) {
  Scenario s;
  s.b0 = b;
  s.dbdt = b;
  s.merge_time_ms = 1000.0;
  s.ns_radius_km = 10.0;
  s.kappa = kappa;
  return s;
}

}  // namespace

TEST_CASE("gravitational energy") {
  Scenario s;
  s.total_mass = 2.0;
  s.radiated_fraction = 0.01;
  CHECK(grav_energy(s) == doctest::Approx(3.56e52).epsilon(5e-3));
  s.radiated_fraction = 0.0;
  CHECK(grav_energy(s) == 0.0);
  s.total_mass = 1.0;
  s.radiated_fraction = kBlackHoleReferenceFraction;
  CHECK(grav_energy(s) == doctest::Approx(7.12e52).epsilon(1e-12));
  Scenario t;
  t.total_mass = 3.0;
  CHECK(grav_energy(t) == doctest::Approx(1.5 * grav_energy(Scenario{})).epsilon(1e-15));
}

TEST_CASE("final surface field") {
  Scenario s = field_scenario(1e13, KappaAnalytic{});
  CHECK(final_surface_field(s) == doctest::Approx(1.001e16).epsilon(1e-15));
  s.dbdt = 0.0;
  CHECK(final_surface_field(s) == 1e13);
  s.dbdt = 5.0;
  s.merge_time_ms = 0.0;
  CHECK(final_surface_field(s) == 1e13);
}

TEST_CASE("magnetic energy") {
  const Scenario lo = field_scenario(1e13, KappaCalibrated{});
  const Scenario hi = field_scenario(1e15, KappaCalibrated{});
  CHECK(mag_energy(lo) == doctest::Approx(4.78e49).epsilon(5e-3));
  CHECK(mag_energy(hi) == doctest::Approx(4.78e53).epsilon(5e-3));
  for (const Kappa& k : {Kappa{KappaAnalytic{}}, Kappa{KappaCalibrated{}}, Kappa{0.123}}) {
    CHECK(mag_energy(field_scenario(1e15, k)) / mag_energy(field_scenario(1e13, k)) ==
          doctest::Approx(1e4).epsilon(1e-9));
  }

  const Scenario quarter = field_scenario(1e13, KappaAnalytic{});
  CHECK(quarter.kappa_value() == 0.25);
  const double oracle_e = oracle::exterior_energy_radial(1.001e16, 1e6, 2.5);
  CHECK(mag_energy(quarter) == doctest::Approx(oracle_e).epsilon(1e-3));
  CHECK(mag_energy(quarter) == doctest::Approx(0.25 * 1.001e16 * 1.001e16 * 1e18).epsilon(1e-12));

  // Scaling laws.
  Scenario r2 = quarter;
  r2.ns_radius_km = 20.0;
  CHECK(mag_energy(r2) / mag_energy(quarter) == doctest::Approx(8.0).epsilon(1e-12));
  Scenario b3 = quarter;
  b3.b0 *= 3.0;
  b3.dbdt *= 3.0;
  CHECK(mag_energy(b3) / mag_energy(quarter) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("exterior energy closed form against radial quadrature") {
  for (double p : {2.0, 2.5, 3.0}) {
    const double closed = exterior_energy_closed_form(2.0, 3.0, p);
    CHECK(exterior_energy_quadrature(2.0, 3.0, p) == doctest::Approx(closed).epsilon(1e-8));
    CHECK(oracle::exterior_energy_radial(2.0, 3.0, p) == doctest::Approx(closed).epsilon(1e-8));
  }
  CHECK_THROWS_AS(exterior_energy_closed_form(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("energy comparison") {
  Scenario lo = field_scenario(1e13, KappaCalibrated{});
  const EnergyReport a = compare(lo);
  CHECK(a.ratio_mag_over_grav == doctest::Approx(1.34e-3).epsilon(1e-2));
  CHECK(a.bh_reference_fraction == 0.04);
  const EnergyReport b = compare(field_scenario(1e15, KappaCalibrated{}));
  CHECK(b.ratio_mag_over_grav == doctest::Approx(13.4).epsilon(1e-2));
  const EnergyReport z = compare(Scenario{});
  CHECK(z.mag_erg == 0.0);
  CHECK(z.ratio_mag_over_grav == 0.0);
}

TEST_CASE("kappa parsing and scenario validation") {
  CHECK(std::holds_alternative<KappaAnalytic>(parse_kappa("quarter")));
  CHECK(std::holds_alternative<KappaCalibrated>(parse_kappa("paper")));
  CHECK(std::get<double>(parse_kappa("0.3")) == 0.3);
  CHECK_THROWS_AS(parse_kappa("-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kappa("half"), std::invalid_argument);
  CHECK(kKappaCalibrated == doctest::Approx(0.47704).epsilon(1e-4));

  Scenario s;
  s.radiated_fraction = 1.0;
  CHECK_THROWS_AS(grav_energy(s), std::invalid_argument);
  s = Scenario{};
  s.decay_exponent = 1.5;
  CHECK_THROWS_AS(mag_energy(s), std::invalid_argument);
  s = Scenario{};
  s.ns_radius_km = 0.0;
  CHECK_THROWS_AS(mag_energy(s), std::invalid_argument);
}
