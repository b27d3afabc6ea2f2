// noonsim: command-line front end for the two-photon cavity simulator.
//
// Exit codes: 0 success, 1 usage or parse error, 2 runtime abort,
// 3 oracle validation failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noonsim/dsl.hpp"
#include "noonsim/dynamics.hpp"
#include "noonsim/experiments.hpp"
#include "noonsim/observables.hpp"
#include "noonsim/protocol.hpp"

namespace {

using namespace noonsim;
using dsl::format_number;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitValidation = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Key/value report that renders either as aligned text or as key=value lines.
class Report {
 public:
  void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), format_number(value)); }

  void print(std::ostream& out, bool structured) const {
    std::size_t width = 0;
    for (const auto& [k, v] : entries_) width = std::max(width, k.size());
    for (const auto& [k, v] : entries_) {
      if (structured) {
        out << k << '=' << v << '\n';
      } else {
        out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
      }
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

bool structured_output(const std::string& report) {
  if (report == "kv") return true;
  if (report == "text") return false;
  throw UsageError("--report must be 'text' or 'kv'");
}

template <class Writer>
void write_csv(const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  writer(file);
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::string distribution_string(const std::vector<double>& dist) {
  std::string out;
  for (std::size_t n = 0; n < dist.size(); ++n) {
    if (dist[n] < 1e-12) continue;
    if (!out.empty()) out += ' ';
    out += std::to_string(n) + ':' + format_number(dist[n]);
  }
  return out.empty() ? "-" : out;
}

// N such that the field lives on {|N,0>, |0,N>} only, if any.
std::optional<int> noon_support(const JointState& s) {
  const auto pa = photon_distribution(s, Cavity::A);
  std::optional<int> n;
  for (auto level : {AtomLevel::Excited, AtomLevel::Ground}) {
    for (int na = 0; na <= s.cutoff(); ++na) {
      for (int nb = 0; nb <= s.cutoff(); ++nb) {
        if (std::norm(s.amplitude(level, na, nb)) < 1e-12) continue;
        if (na != 0 && nb != 0) return std::nullopt;
        const int total = na + nb;
        if (total == 0) return std::nullopt;
        if (n && *n != total) return std::nullopt;
        n = total;
      }
    }
  }
  return n;
}

int cmd_inversion(int n0, double chi, double delta, double tau_max, int steps, int cutoff,
                  const std::string& atom, const std::string& cavity, const std::string& out) {
  if (steps < 2) throw UsageError("--steps must be at least 2");
  if (!(tau_max > 0.0)) throw UsageError("--tau-max must be positive");
  const AtomLevel level = atom == "g" ? AtomLevel::Ground : AtomLevel::Excited;
  const Cavity cav = cavity == "B" ? Cavity::B : Cavity::A;
  const auto series = inversion_trace(level, n0, cav, Params{chi, delta, cutoff}, tau_max, steps);
  write_csv(out, [&](std::ostream& os) { write_inversion_csv(os, series); });
  return kExitOk;
}

int cmd_noon(double tau, double chi, double delta, int cutoff, const std::string& report_kind) {
  const bool structured = structured_output(report_kind);
  if (!(tau >= 0.0)) throw UsageError("--tau must be non-negative");
  const auto r = noon_report(tau, Params{chi, delta, cutoff});
  Report report;
  report.add("tau", tau);
  report.add("chi", chi);
  report.add("delta", delta);
  report.add("p_ground", r.p_ground);
  report.add("p_excited", r.p_excited);
  report.add("fidelity_ground", r.fidelity_ground);
  report.add("fidelity_excited", r.fidelity_excited ? format_number(*r.fidelity_excited) : "n/a");
  report.print(std::cout, structured);
  return kExitOk;
}

int cmd_sweep_chi(double tau, double chi_max, int steps, std::vector<double> deltas, int cutoff,
                  bool tune, double delta_min, double delta_max, int delta_steps,
                  const std::string& out) {
  if (steps < 2) throw UsageError("--steps must be at least 2");
  if (!(chi_max >= 0.0)) throw UsageError("--chi-max must be non-negative");
  std::vector<SweepRow> rows;
  if (tune) {
    if (delta_steps < 2) throw UsageError("--delta-steps must be at least 2");
    if (!(delta_min < delta_max)) throw UsageError("--delta-min must be below --delta-max");
    std::vector<double> chis(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) chis[static_cast<std::size_t>(k)] = k == steps - 1 ? chi_max : chi_max * k / (steps - 1);
    rows = compensate_detuning(tau, chis, delta_min, delta_max, delta_steps, cutoff);
  } else {
    if (deltas.empty()) deltas = {0.0};
    rows = sweep_chi(tau, chi_max, steps, deltas, cutoff);
  }
  write_csv(out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  return kExitOk;
}

int cmd_find_tau(double lo, double hi, double tol, double chi, double delta, int cutoff,
                 const std::string& report_kind) {
  const bool structured = structured_output(report_kind);
  if (!(lo > 0.0) || !(lo < hi)) throw UsageError("find-tau needs 0 < --lo < --hi");
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");
  const auto result = find_tau(lo, hi, tol, Params{chi, delta, cutoff});
  Report report;
  report.add("tau_star", result.tau_star);
  report.add("fidelity", result.fidelity);
  report.print(std::cout, structured);
  return kExitOk;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed,
            const std::string& report_kind) {
  const bool structured = structured_output(report_kind);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();

  Program prog;
  try {
    prog = dsl::parse(buffer.str());
  } catch (const dsl::ParseError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column() << ": error: " << e.message();
    if (!e.token().empty()) std::cerr << " ('" << e.token() << "')";
    std::cerr << '\n';
    return kExitUsage;
  }
  if (seed) {
    std::uint64_t k = 0;
    for (auto& s : prog.steps) {
      if (auto* m = std::get_if<step::MeasureAtom>(&s)) m->seed = *seed + k++;
    }
  }

  RunResult result = [&] {
    try {
      return run(prog);
    } catch (const RunAborted& e) {
      std::cerr << path << ": aborted at step " << e.step_index() << ": " << e.what() << '\n';
      throw;
    }
  }();

  Report report;
  for (const auto& ev : result.events) {
    std::string line = ev.description;
    if (ev.probability) {
      line += " -> " + std::string(to_string(*ev.outcome)) + " p=" + format_number(*ev.probability);
    }
    report.add("step." + std::to_string(ev.step_index), line);
  }
  report.add("joint_probability", result.joint_postselect_probability);
  report.add("inversion", atomic_inversion(result.final_state));
  report.add("photons_a", distribution_string(photon_distribution(result.final_state, Cavity::A)));
  report.add("photons_b", distribution_string(photon_distribution(result.final_state, Cavity::B)));

  const double pe = atom_probability(result.final_state, AtomLevel::Excited);
  const double pg = atom_probability(result.final_state, AtomLevel::Ground);
  const bool atom_definite = pe < kNormTolerance || pg < kNormTolerance;
  if (const auto n = noon_support(result.final_state); n && atom_definite) {
    report.add("noon_n", std::to_string(*n));
    report.add("fidelity_plus", noon_fidelity(result.final_state, NoonTarget{*n, +1}));
    report.add("fidelity_minus", noon_fidelity(result.final_state, NoonTarget{*n, -1}));
  } else if (atom_definite) {
    // Fidelities against the N = 4 pair the built-in protocol targets.
    if (result.final_state.cutoff() >= 4) {
      report.add("fidelity_plus", noon_fidelity(result.final_state, NoonTarget{4, +1}));
      report.add("fidelity_minus", noon_fidelity(result.final_state, NoonTarget{4, -1}));
    }
  }
  report.print(std::cout, structured);
  return kExitOk;
}

int cmd_validate(int cutoff, int trials, std::uint64_t seed, std::optional<int> support,
                 bool boundary, const std::string& report_kind) {
  const bool structured = structured_output(report_kind);
  if (trials < 1) throw UsageError("--trials must be at least 1");
  if (cutoff < 2) throw UsageError("--cutoff must be at least 2");
  const auto r = validate_oracle(cutoff, trials, seed, support, boundary);
  Report report;
  report.add("trials", std::to_string(r.trials));
  report.add("compared", std::to_string(r.compared));
  report.add("precondition_rejections", std::to_string(r.rejected));
  report.add("max_deviation", r.max_deviation);
  report.add("tolerance", kOracleTolerance);
  report.add("result", r.passed ? "pass" : "fail");
  report.print(std::cout, structured);
  return r.passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon cavity QED simulator: NOON-state protocols, sweeps and oracle checks"};
  app.require_subcommand(1);

  int cutoff = kDefaultCutoff;
  std::string report_kind = "text";

  // inversion
  auto* inv = app.add_subcommand("inversion", "Atomic inversion W(tau) as CSV (tau,w)");
  int n0 = 2;
  double inv_chi = 0.0, inv_delta = 0.0, tau_max = 4.0;
  int inv_steps = 801;
  std::string inv_atom = "e", inv_cavity = "A", inv_out = "-";
  inv->add_option("--n0", n0, "Initial Fock number")->capture_default_str();
  inv->add_option("--chi", inv_chi, "Stark shift chi/lambda")->capture_default_str();
  inv->add_option("--delta", inv_delta, "Detuning Delta/lambda")->capture_default_str();
  inv->add_option("--tau-max", tau_max, "Final scaled time")->capture_default_str();
  inv->add_option("--steps", inv_steps, "Grid points (>= 2)")->capture_default_str();
  inv->add_option("--atom", inv_atom, "Initial atomic level")->check(CLI::IsMember({"e", "g"}))->capture_default_str();
  inv->add_option("--cavity", inv_cavity, "Cavity")->check(CLI::IsMember({"A", "B"}))->capture_default_str();
  inv->add_option("--cutoff", cutoff, "Fock cutoff")->capture_default_str();
  inv->add_option("--out", inv_out, "Output CSV path ('-' for stdout)")->capture_default_str();

  // noon
  auto* noon = app.add_subcommand("noon", "NOON protocol fidelities and detection probabilities");
  double noon_tau = 3.16, noon_chi = 0.0, noon_delta = 0.0;
  noon->add_option("--tau", noon_tau, "Interaction time per cavity")->capture_default_str();
  noon->add_option("--chi", noon_chi)->capture_default_str();
  noon->add_option("--delta", noon_delta)->capture_default_str();
  noon->add_option("--cutoff", cutoff)->capture_default_str();
  noon->add_option("--report", report_kind, "text or kv")->capture_default_str();

  // sweep-chi
  auto* sweep = app.add_subcommand("sweep-chi", "Fidelity versus Stark shift as CSV (chi,delta,fidelity,p_ground)");
  double sweep_tau = 3.16, chi_max = 1.0;
  int sweep_steps = 101;
  std::vector<double> sweep_deltas;
  bool tune = false;
  double delta_min = -2.0, delta_max = 2.0;
  int delta_steps = 81;
  std::string sweep_out = "-";
  sweep->add_option("--tau", sweep_tau)->capture_default_str();
  sweep->add_option("--chi-max", chi_max)->capture_default_str();
  sweep->add_option("--steps", sweep_steps)->capture_default_str();
  sweep->add_option("--delta", sweep_deltas, "Detuning(s); repeat for several curves")->expected(1, -1);
  sweep->add_flag("--tune-delta", tune, "Emit, per chi, the detuning that maximizes fidelity");
  sweep->add_option("--delta-min", delta_min)->capture_default_str();
  sweep->add_option("--delta-max", delta_max)->capture_default_str();
  sweep->add_option("--delta-steps", delta_steps)->capture_default_str();
  sweep->add_option("--cutoff", cutoff)->capture_default_str();
  sweep->add_option("--out", sweep_out)->capture_default_str();

  // find-tau
  auto* find = app.add_subcommand("find-tau", "Interaction time maximizing ground-branch NOON fidelity");
  double lo = 2.5, hi = 3.5, tol = 1e-4, find_chi = 0.0, find_delta = 0.0;
  find->add_option("--lo", lo)->capture_default_str();
  find->add_option("--hi", hi)->capture_default_str();
  find->add_option("--tol", tol)->capture_default_str();
  find->add_option("--chi", find_chi)->capture_default_str();
  find->add_option("--delta", find_delta)->capture_default_str();
  find->add_option("--cutoff", cutoff)->capture_default_str();
  find->add_option("--report", report_kind)->capture_default_str();

  // run
  auto* runc = app.add_subcommand("run", "Execute a .qproto protocol file");
  std::string file;
  std::optional<std::uint64_t> seed;
  runc->add_option("file,--file", file, "Protocol file")->required();
  runc->add_option("--seed", seed, "Sample every measurement from the Born rule with this seed");
  runc->add_option("--report", report_kind)->capture_default_str();

  // validate
  auto* val = app.add_subcommand("validate", "Compare the analytic propagator with the dense oracle");
  int val_cutoff = 24, trials = 200;
  std::uint64_t val_seed = 12345;
  std::optional<int> support;
  bool boundary = false;
  val->add_option("--cutoff", val_cutoff)->capture_default_str();
  val->add_option("--trials", trials)->capture_default_str();
  val->add_option("--seed", val_seed)->capture_default_str();
  val->add_option("--max-support", support, "Largest occupied Fock number (default cutoff-4)");
  val->add_flag("--boundary", boundary, "Place population at n = cutoff-1 to exercise the leakage guard");
  val->add_option("--report", report_kind)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*inv) return cmd_inversion(n0, inv_chi, inv_delta, tau_max, inv_steps, cutoff, inv_atom, inv_cavity, inv_out);
    if (*noon) return cmd_noon(noon_tau, noon_chi, noon_delta, cutoff, report_kind);
    if (*sweep) {
      return cmd_sweep_chi(sweep_tau, chi_max, sweep_steps, sweep_deltas, cutoff, tune, delta_min,
                           delta_max, delta_steps, sweep_out);
    }
    if (*find) return cmd_find_tau(lo, hi, tol, find_chi, find_delta, cutoff, report_kind);
    if (*runc) return cmd_run(file, seed, report_kind);
    if (*val) return cmd_validate(val_cutoff, trials, val_seed, support, boundary, report_kind);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RunAborted&) {
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
