#pragma once

// Command implementations behind the spinstar tool: fidelity sweeps,
// protocol verification, ground-state preparation checks and spectrum
// export. Every file-producing command writes a JSON run manifest next to
// its outputs. All randomness is drawn from seeded generators so reruns
// with the same parameters are byte-identical.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 verification failure,
// 4 preparation failure.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "spinstar/cloning.hpp"
#include "spinstar/errors.hpp"
#include "spinstar/evolution.hpp"
#include "spinstar/hilbert.hpp"
#include "spinstar/preparation.hpp"
#include "spinstar/version.hpp"

namespace spinstar::cli {

/// Fixed CSV float format: up to 17 significant digits, '.' decimal
/// separator, locale-independent.
inline std::string fmt17(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Haar-uniform qubit state (alpha, beta), Box-Muller over the raw engine
/// so draws do not depend on the standard library's distribution details.
inline std::pair<Complex, Complex> haar_qubit(std::mt19937_64& rng) {
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  auto gaussian = [&]() -> std::pair<double, double> {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  };
  for (;;) {
    const auto [g0, g1] = gaussian();
    const auto [g2, g3] = gaussian();
    const Complex a(g0, g1), b(g2, g3);
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n > 1e-6) return {a / n, b / n};
  }
}

namespace detail {

inline std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

inline void write_manifest(const std::string& command, const nlohmann::json& parameters,
                           const std::vector<std::string>& outputs) {
  const nlohmann::json manifest{{"command", command},
                                {"parameters", parameters},
                                {"tool_version", kVersion},
                                {"timestamp", iso8601_now()},
                                {"outputs", outputs}};
  write_file(outputs.front() + ".manifest.json", manifest.dump(2) + "\n");
}

/// Haar-random register state: independent complex gaussian amplitudes,
/// normalized.
inline StateVector random_state(const QubitRegister& reg, std::mt19937_64& rng) {
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  Eigen::VectorXcd v(static_cast<Eigen::Index>(reg.dim()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    v[i] = std::polar(radius, angle);
  }
  v.normalize();
  return StateVector(reg, std::move(v));
}

inline EvolutionSpec endpoint_spec(const QubitRegister& reg, double t) {
  EvolutionSpec spec = default_evolution(reg, t);
  if (spec.method == EvolveMethod::Krylov)
    spec.max_krylov_dim = static_cast<int>(std::min<std::uint64_t>(reg.dim(), 200));
  return spec;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// fidelity-sweep
// ---------------------------------------------------------------------------

struct SweepParams {
  int copies = 2;
  double phi_min = 0.0;
  double phi_max = 2.0 * std::numbers::pi;
  int steps = 100;
  int inputs = 20;
  std::uint64_t seed = 0;
  std::string out;
};

struct SweepRow {
  double phi = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  double analytic = 0.0;
  double bound = 0.0;
};

/// Pooled single-copy fidelity statistics across seeded Haar-random inputs
/// and across all M target qubits, per grid point.
inline std::vector<SweepRow> fidelity_sweep_rows(const SweepParams& p) {
  const CloneConfig cfg(p.copies);
  std::vector<double> grid(static_cast<std::size_t>(p.steps));
  for (int g = 0; g < p.steps; ++g)
    grid[static_cast<std::size_t>(g)] =
        p.phi_min + (p.phi_max - p.phi_min) * g / (p.steps - 1);

  std::mt19937_64 rng(p.seed);
  std::vector<std::vector<double>> samples(grid.size());
  for (int i = 0; i < p.inputs; ++i) {
    const auto [alpha, beta] = haar_qubit(rng);
    const std::vector<FidelityPoint> traj = fidelity_trajectory(cfg, alpha, beta, grid);
    for (std::size_t g = 0; g < grid.size(); ++g)
      for (double f : traj[g].per_target) samples[g].push_back(f);
  }

  const double bound = (2.0 * p.copies + 1.0) / (3.0 * p.copies);
  std::vector<SweepRow> rows(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepRow& row = rows[g];
    row.phi = grid[g];
    const std::vector<double>& s = samples[g];
    double mean = 0.0;
    for (double f : s) mean += f;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double f : s) var += (f - mean) * (f - mean);
    row.mean = mean;
    row.stddev = s.size() > 1 ? std::sqrt(var / static_cast<double>(s.size() - 1)) : 0.0;
    row.analytic = analytic_fidelity(p.copies, row.phi);
    row.bound = bound;
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string csv = "phi,fidelity_mean,fidelity_std,analytic,bound\n";
  for (const SweepRow& r : rows) {
    csv += fmt17(r.phi) + ',' + fmt17(r.mean) + ',' + fmt17(r.stddev) + ',' +
           fmt17(r.analytic) + ',' + fmt17(r.bound) + '\n';
  }
  return csv;
}

inline int run_fidelity_sweep(const SweepParams& p, std::ostream& diag = std::cerr) {
  if (p.copies < 2 || p.steps < 2 || p.inputs < 1 || p.out.empty() ||
      !std::isfinite(p.phi_min) || !std::isfinite(p.phi_max)) {
    diag << "fidelity-sweep: invalid parameters (need M >= 2, steps >= 2, inputs >= 1, "
            "finite phi range, output path)\n";
    return 1;
  }
  try {
    const std::vector<SweepRow> rows = fidelity_sweep_rows(p);
    detail::write_file(p.out, sweep_csv(rows));
    detail::write_manifest("fidelity-sweep",
                           {{"M", p.copies},
                            {"phi-min", p.phi_min},
                            {"phi-max", p.phi_max},
                            {"steps", p.steps},
                            {"inputs", p.inputs},
                            {"seed", p.seed},
                            {"out", p.out}},
                           {p.out});
  } catch (const IoError& e) {
    diag << "fidelity-sweep: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    diag << "fidelity-sweep: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyParams {
  int copies = 3;
  double j1 = 1.0;
  double j2 = -1.0;
  double lambda1 = 2.0;
  double lambda2 = -2.0;
  std::string out;  // optional; report always goes to the stream
};

struct VerifyReport {
  bool condition_satisfied = false;
  double closure_residual = 0.0;
  double php_symmetry_residual = 0.0;
  std::optional<double> endpoint_overlap;

  bool passed() const {
    return condition_satisfied && closure_residual < 1e-12 &&
           php_symmetry_residual < 1e-12 && endpoint_overlap &&
           *endpoint_overlap > 1.0 - 1e-9;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"condition_satisfied", condition_satisfied},
                     {"closure_residual", closure_residual},
                     {"php_symmetry_residual", php_symmetry_residual}};
    if (endpoint_overlap)
      j["endpoint_overlap"] = *endpoint_overlap;
    else
      j["endpoint_overlap"] = nullptr;
    return j;
  }
};

inline VerifyReport verify_protocol(const CloneConfig& cfg) {
  VerifyReport report;
  report.condition_satisfied = cfg.optimal_condition();
  report.closure_residual = subspace_closure_residual(cfg);

  const PauliTermSum h = build_clone_hamiltonian(cfg);
  std::mt19937_64 rng(0x7e57u);
  double worst = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const StateVector psi = detail::random_state(cfg.reg(), rng);
    const StateVector direct = apply_pauli_sum(h, psi);
    const StateVector conjugated =
        spin_flip_apply(apply_pauli_sum(h, spin_flip_apply(psi)));
    worst = std::max(worst, (conjugated.amplitudes() - direct.amplitudes()).norm());
  }
  report.php_symmetry_residual = worst;

  if (report.condition_satisfied) {
    const StateVector a = build_ab_basis(cfg.copies).a;
    const StateVector evolved =
        evolve(h, a, detail::endpoint_spec(cfg.reg(), cfg.t0()));
    report.endpoint_overlap =
        std::abs(overlap(evolved, target_output_state(cfg.copies, true)));
  }
  return report;
}

inline int run_verify(const VerifyParams& p, std::ostream& report_stream = std::cout,
                      std::ostream& diag = std::cerr) {
  VerifyReport report;
  try {
    const CloneConfig cfg(p.copies, p.j1, p.j2, p.lambda1, p.lambda2);
    report = verify_protocol(cfg);
    const std::string text = report.to_json().dump(2) + "\n";
    report_stream << text;
    if (!p.out.empty()) {
      detail::write_file(p.out, text);
      detail::write_manifest("verify",
                             {{"M", p.copies},
                              {"j1", p.j1},
                              {"j2", p.j2},
                              {"lambda1", p.lambda1},
                              {"lambda2", p.lambda2},
                              {"out", p.out}},
                             {p.out});
    }
  } catch (const IoError& e) {
    diag << "verify: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    diag << "verify: " << e.what() << '\n';
    return 1;
  }
  return report.passed() ? 0 : 3;
}

// ---------------------------------------------------------------------------
// ground-state
// ---------------------------------------------------------------------------

struct GroundParams {
  int copies = 3;
  double jprime = -1.0;
  double delta = 1.0;
  std::string out;
  std::string state_out;  // optional amplitude dump
};

inline int run_ground_state(const GroundParams& p, std::ostream& report_stream = std::cout,
                            std::ostream& diag = std::cerr) {
  nlohmann::json report;
  bool ok = false;
  try {
    const PrepConfig cfg(p.copies, p.jprime, p.delta);
    const double predicted = predicted_ground_energy(cfg);
    report["predicted_energy"] = predicted;
    if (!cfg.sign_condition())
      report["warning"] = "sign condition violated: ground-state claim needs J' < 0, Delta > 0";

    const GroundState ground = solve_ground_state(cfg);
    const StateVector r = build_r_state(cfg.copies);
    const double overlap_with_r = std::abs(overlap(r, ground.state));
    report["energy"] = ground.energy;
    report["overlap_with_R"] = overlap_with_r;
    report["gap"] = ground.gap;
    ok = std::abs(ground.energy - predicted) < 1e-9 && overlap_with_r > 1.0 - 1e-10;

    const std::string text = report.dump(2) + "\n";
    report_stream << text;
    std::vector<std::string> outputs;
    if (!p.out.empty()) {
      detail::write_file(p.out, text);
      outputs.push_back(p.out);
    }
    if (!p.state_out.empty()) {
      detail::write_file(p.state_out, ground.state.to_json().dump() + "\n");
      outputs.push_back(p.state_out);
    }
    if (!outputs.empty())
      detail::write_manifest("ground-state",
                             {{"M", p.copies},
                              {"jprime", p.jprime},
                              {"delta", p.delta},
                              {"out", p.out},
                              {"state-out", p.state_out}},
                             outputs);
  } catch (const DegeneracyError& e) {
    report["error"] = e.what();
    report["gap"] = e.gap();
    report_stream << report.dump(2) << "\n";
    return 4;
  } catch (const IoError& e) {
    diag << "ground-state: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    diag << "ground-state: " << e.what() << '\n';
    return 1;
  }
  return ok ? 0 : 4;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumParams {
  int copies = 3;
  double jprime = -1.0;
  double delta = 1.0;
  std::string out;
};

inline std::string spectrum_csv(const PrepConfig& cfg) {
  std::vector<SpectrumLevel> levels = enumerate_spectrum(cfg);
  std::sort(levels.begin(), levels.end(), [](const SpectrumLevel& a, const SpectrumLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.jt != b.jt) return a.jt < b.jt;
    if (a.ja != b.ja) return a.ja < b.ja;
    if (a.j != b.j) return a.j < b.j;
    return a.jz < b.jz;
  });
  std::uint64_t total = 0;
  std::string csv = "jt,ja,j,jz,energy,degeneracy\n";
  for (const SpectrumLevel& lv : levels) {
    total += lv.degeneracy;
    csv += fmt17(lv.jt) + ',' + fmt17(lv.ja) + ',' + fmt17(lv.j) + ',' + fmt17(lv.jz) +
           ',' + fmt17(lv.energy) + ',' + std::to_string(lv.degeneracy) + '\n';
  }
  const std::uint64_t expected = std::uint64_t{1} << (2 * (cfg.copies - 1));
  csv += "# total_dimension," + std::to_string(total) + ",expected," +
         std::to_string(expected) + '\n';
  return csv;
}

inline int run_spectrum(const SpectrumParams& p, std::ostream& diag = std::cerr) {
  if (p.out.empty()) {
    diag << "spectrum: output path required\n";
    return 1;
  }
  try {
    const PrepConfig cfg(p.copies, p.jprime, p.delta);
    detail::write_file(p.out, spectrum_csv(cfg));
    detail::write_manifest("spectrum",
                           {{"M", p.copies},
                            {"jprime", p.jprime},
                            {"delta", p.delta},
                            {"out", p.out}},
                           {p.out});
  } catch (const IoError& e) {
    diag << "spectrum: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    diag << "spectrum: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace spinstar::cli
