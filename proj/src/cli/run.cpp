#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <boost/crc.hpp>

#include "emmemory/cli.hpp"
#include "emmemory/errors.hpp"
#include "emmemory/field_io.hpp"
#include "emmemory/memory.hpp"
#include "emmemory/validate.hpp"

namespace emm::cli {

using nlohmann::json;

namespace {

std::uint32_t crc32(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

json matrix_json(const ArmMatrix& m) { return json::array({json::array({m[0], m[1]}), json::array({m[2], m[3]})}); }

// Collects every artifact of one run and writes the manifest last.
class Artifacts {
 public:
  Artifacts(const RunConfig& cfg) : cfg_(cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.output_dir))
      throw IoError("cannot create output directory " + cfg.output_dir.string());
  }

  std::string read_input(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open input " + path.string());
    std::stringstream buf;
    buf << is.rdbuf();
    if (is.bad()) throw IoError("cannot read input " + path.string());
    std::string bytes = buf.str();
    inputs_.push_back({{"path", path.generic_string()}, {"bytes", bytes.size()}, {"crc32", hex32(crc32(bytes))}});
    return bytes;
  }

  void write(const std::string& name, const std::string& bytes) {
    const std::filesystem::path path = cfg_.output_dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.close();
    if (!os) throw IoError("failed writing " + path.string());
    outputs_.push_back({{"path", name}, {"bytes", bytes.size()}, {"crc32", hex32(crc32(bytes))}});
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish() {
    json manifest = {
        {"tool", "emm"},
        {"version", EMM_VERSION},
        {"formats", {{"field", "EMM1"}, {"train", "EMT1"}}},
        {"command", to_string(cfg_.command)},
        {"config", {{"file", cfg_.file_values}, {"flags", cfg_.flag_values}, {"resolved", cfg_.resolved}}},
        {"inputs", inputs_},
        {"outputs", outputs_},
    };
    const std::string name = std::string(to_string(cfg_.command)) + ".manifest.json";
    const std::filesystem::path path = cfg_.output_dir / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << manifest.dump(2) << "\n";
    if (!os) throw IoError("failed writing " + path.string());
  }

 private:
  const RunConfig& cfg_;
  json inputs_ = json::array();
  json outputs_ = json::array();
};

template <FieldKind K>
std::string field_bytes(const Field<K>& f) {
  std::ostringstream os(std::ios::binary);
  write_field(os, f);
  return os.str();
}

template <FieldKind K>
std::string train_bytes(const Train<K>& t) {
  std::ostringstream os(std::ios::binary);
  write_train(os, t);
  return os.str();
}

struct Inputs {
  TensorTrain xi;
  std::optional<VectorTrain> af;
  const VectorTrain* af_ptr() const { return af ? &*af : nullptr; }
};

Inputs load_inputs(const RunConfig& cfg, Artifacts& art) {
  std::istringstream xs(art.read_input(*cfg.xi_path), std::ios::binary);
  Inputs in{read_train<FieldKind::kStf>(xs), std::nullopt};
  if (in.xi.kind != TrainKind::kXi)
    throw ConfigError(cfg.xi_path->string() + " holds a " + to_string(in.xi.kind) + " train, expected Xi");
  if (cfg.af_path) {
    std::istringstream as(art.read_input(*cfg.af_path), std::ios::binary);
    in.af = read_train<FieldKind::kVector>(as);
  }
  check_consistent(in.xi, in.af_ptr());
  return in;
}

void run_generate(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  const GridPtr grid = make_grid(cfg.l_max);
  const TensorTrain xi = gen_xi_train(cfg.xi_pulses, grid, cfg.u);
  art.write("xi.emt", train_bytes(xi));
  art.write("aw.emt", train_bytes(aw_from_xi(xi)));
  if (!cfg.af_pulses.empty()) art.write("af.emt", train_bytes(gen_af_train(cfg.af_pulses, grid, cfg.u)));
  out << "generated " << cfg.u.n << " samples on l_max=" << cfg.l_max << " (" << grid->n_theta() << "x"
      << grid->n_phi() << ")\n";
}

void run_memory(const RunConfig& cfg, Artifacts& art, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(cfg, art);
  check_compact_support(in.xi);
  const MemoryResult mr = solve_memory(compute_kernel(in.xi, in.af_ptr()));
  const StfTensorField disp = displacement_map(mr.delta_sigma, cfg.detector.d0, cfg.detector.r);
  if (displacement_ratio_large(cfg.detector.d0, cfg.detector.r))
    err << "warning: d0/r = " << num(cfg.detector.d0 / cfg.detector.r) << " is not small; leading order is suspect\n";

  art.write("F.emf", field_bytes(mr.F));
  art.write("Phi.emf", field_bytes(mr.Phi));
  art.write("delta_sigma.emf", field_bytes(mr.delta_sigma));
  art.write("displacement.emf", field_bytes(disp));

  const SphereGrid& g = *mr.F.grid();
  std::string csv = "theta,phi,delta_sigma_11,delta_sigma_12,dx_11,dx_12\n";
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j)
      csv += num(g.theta()[i]) + "," + num(g.phi()[j]) + "," + num(mr.delta_sigma(0, i, j)) + "," +
             num(mr.delta_sigma(1, i, j)) + "," + num(disp(0, i, j)) + "," + num(disp(1, i, j)) + "\n";
  art.write("displacement.csv", csv);

  const json summary = {
      {"l_max", g.l_max()},
      {"F_bar", mr.F_bar},
      {"energy_radiated", mr.energy_radiated},
      {"energy_radiated_erg", mr.energy_radiated * kErgPerCm},
      {"dropped_l1", {mr.dropped_l1[0], mr.dropped_l1[1], mr.dropped_l1[2]}},
      {"residual", mr.residual},
      {"residual_tolerance", kReconstructionTolerance},
  };
  art.write_json("memory_summary.json", summary);
  art.finish();
  out << summary.dump(2) << "\n";
  if (!(mr.residual < kReconstructionTolerance))
    throw ResidualError("reconstruction residual " + num(mr.residual) + " exceeds " + num(kReconstructionTolerance));
}

void run_detector(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  const Inputs in = load_inputs(cfg, art);
  check_compact_support(in.xi);
  const DetectorConfig& dc = cfg.detector;
  const auto series = sample_direction(aw_from_xi(in.xi), dc.theta, dc.phi);
  const Trajectory traj = integrate_jacobi(series, in.xi.u, dc);
  const double rest = return_to_rest_residual(traj);

  std::string csv = "t,x1_1,x1_2,x2_1,x2_2,v1_1,v1_2,v2_1,v2_2\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    csv += num(traj.t[k]);
    for (double v : traj.position[k]) csv += "," + num(v);
    for (double v : traj.velocity[k]) csv += "," + num(v);
    csv += "\n";
  }
  art.write("trajectory.csv", csv);

  json summary = {
      {"theta", dc.theta},
      {"phi", dc.phi},
      {"d0", dc.d0},
      {"r", dc.r},
      {"return_to_rest_residual", rest},
      {"return_to_rest_tolerance", kReturnToRestTolerance},
  };
  const bool at_rest = rest < kReturnToRestTolerance;
  summary["permanent_displacement"] = at_rest ? matrix_json(permanent_displacement(traj, dc)) : json(nullptr);
  art.write_json("detector_summary.json", summary);
  art.finish();
  out << summary.dump(2) << "\n";
  if (!at_rest)
    throw InvariantError("masses did not return to rest (residual " + num(rest) + " >= " +
                         num(kReturnToRestTolerance) + ")");
}

void run_order_check(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  const OrderReport rep = em_subleading_report(cfg.amplitudes, cfg.radii);
  std::string csv = "r,weyl_norm,em,ratio\n";
  json rows = json::array();
  for (const OrderRow& row : rep.rows) {
    csv += num(row.r) + "," + num(row.weyl_norm) + "," + num(row.em) + "," + num(row.ratio) + "\n";
    rows.push_back({{"r", row.r}, {"weyl_norm", row.weyl_norm}, {"em", row.em}, {"ratio", row.ratio}});
  }
  art.write("order_check.csv", csv);
  const json summary = {{"rows", rows}, {"slope", std::isfinite(rep.slope) ? json(rep.slope) : json(nullptr)}};
  art.write_json("order_check.json", summary);
  art.finish();
  out << csv << "slope " << num(rep.slope) << "\n";
}

void run_massloss(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  constexpr double kIdentityTolerance = 1e-8;
  const Inputs in = load_inputs(cfg, art);
  const std::vector<double> rate = mass_loss_history(in.xi, in.af_ptr());
  const double total = total_mass_change(in.xi, in.af_ptr());
  const double half_mean = 0.5 * mean(compute_kernel(in.xi, in.af_ptr()));
  const double scale = std::max(std::abs(total), std::abs(half_mean));
  const double identity = scale > 0.0 ? std::abs(total - half_mean) / scale : 0.0;

  std::string csv = "u,dM_du\n";
  for (int k = 0; k < in.xi.u.n; ++k) csv += num(in.xi.u.at(k)) + "," + num(rate[k]) + "\n";
  art.write("massloss.csv", csv);
  const json summary = {
      {"total_mass_change", total},
      {"total_mass_change_erg", total * kErgPerCm},
      {"half_mean_kernel", half_mean},
      {"identity_residual", identity},
      {"identity_tolerance", kIdentityTolerance},
  };
  art.write_json("massloss.json", summary);
  art.finish();
  out << summary.dump(2) << "\n";
  if (!(identity < kIdentityTolerance))
    throw ResidualError("mass-loss identity residual " + num(identity) + " exceeds " + num(kIdentityTolerance));
}

json report_json(const bns::Scenario& s, const bns::EnergyReport& r) {
  return {
      {"grav_erg", r.grav_erg},
      {"mag_erg", r.mag_erg},
      {"ratio_mag_over_grav", r.ratio_mag_over_grav},
      {"b_final", r.b_final},
      {"kappa", bns::kappa_name(s.kappa)},
      {"kappa_value", s.kappa_value()},
      {"bh_reference_fraction", r.bh_reference_fraction},
  };
}

void run_bns(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  const bns::EnergyReport rep = bns::compare(cfg.scenario);
  const json j = report_json(cfg.scenario, rep);
  art.write_json("bns_energy.json", j);
  if (cfg.b0_sweep) {
    const B0Sweep& sw = *cfg.b0_sweep;
    std::string csv = "b0,b_final,mag_erg,ratio_mag_over_grav\n";
    for (int k = 0; k < sw.count; ++k) {
      bns::Scenario s = cfg.scenario;
      const double t = sw.count > 1 ? static_cast<double>(k) / (sw.count - 1) : 0.0;
      s.b0 = sw.min * std::pow(sw.max / sw.min, t);
      const bns::EnergyReport r = bns::compare(s);
      csv += num(s.b0) + "," + num(r.b_final) + "," + num(r.mag_erg) + "," + num(r.ratio_mag_over_grav) + "\n";
    }
    art.write("bns_sweep.csv", csv);
  }
  art.finish();
  out << j.dump(2) << "\n";
}

void run_validate(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  const std::vector<CheckResult> results = run_invariant_suite(cfg.l_max, cfg.seed);
  json checks = json::array();
  int failed_invariant = 0, failed_residual = 0;
  for (const CheckResult& c : results) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << num(c.value) << " < " << num(c.tolerance) << "\n";
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"kind", c.residual ? "residual" : "invariant"}});
    if (!c.passed) ++(c.residual ? failed_residual : failed_invariant);
  }
  art.write_json("validate.json", {{"l_max", cfg.l_max}, {"seed", cfg.seed}, {"checks", checks}});
  art.finish();
  if (failed_invariant > 0) throw InvariantError(std::to_string(failed_invariant) + " invariant check(s) failed");
  if (failed_residual > 0) throw ResidualError(std::to_string(failed_residual) + " residual check(s) failed");
}

}  // namespace

void run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Artifacts art(config);
  switch (config.command) {
    case Command::kGenerate: run_generate(config, art, out); art.finish(); break;
    case Command::kMemory: run_memory(config, art, out, err); break;
    case Command::kDetector: run_detector(config, art, out); break;
    case Command::kOrderCheck: run_order_check(config, art, out); break;
    case Command::kMassloss: run_massloss(config, art, out); break;
    case Command::kBnsEnergy: run_bns(config, art, out); break;
    case Command::kValidate: run_validate(config, art, out); break;
  }
}

int exit_code_for(std::exception_ptr error, std::ostream& out, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const HelpRequested& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ResidualError& e) {
    err << "residual breach: " << e.what() << "\n";
    return kExitResidual;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    run(parse_config(args), out, err);
    return kExitOk;
  } catch (...) {
    return exit_code_for(std::current_exception(), out, err);
  }
}

}  // namespace emm::cli
