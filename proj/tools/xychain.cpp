// Command-line driver: single-point evaluation, (t, gamma) sweeps, peak
// extraction from sweep files, and cross-validation against the dense
// Fock-space oracle.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xychain/sweep.hpp"
#include "xychain/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;      // tolerance breach, I/O or runtime error
constexpr int kExitBadArguments = 2;

struct ModelOptions {
  std::string preset;
  std::optional<int> n_sites;
  std::optional<double> j;
  std::optional<double> jx, jy;
  std::optional<double> field;
  std::optional<int> receiver;
  std::optional<double> alpha;
  bool vacuum = false;

  // resolved values
  int n = 5;
  double coupling = 1.0;
  double h = 0.1;
  int r = 3;
  xychain::InputState input = xychain::InputState::vacuum();
};

void add_model_flags(CLI::App* cmd, ModelOptions& opt) {
  cmd->add_option("--preset", opt.preset, "regime preset: strong, weak or intermediate")
      ->check(CLI::IsMember({"strong", "weak", "intermediate"}));
  cmd->add_option("--n", opt.n_sites, "number of sites (>= 3)");
  cmd->add_option("--j", opt.j, "exchange coupling J");
  cmd->add_option("--jx", opt.jx, "in-plane coupling Jx (with --jy)");
  cmd->add_option("--jy", opt.jy, "in-plane coupling Jy (with --jx)");
  cmd->add_option("--field", opt.field, "transverse field h");
  cmd->add_option("--r", opt.receiver, "receiver site (1-based)");
  auto* alpha = cmd->add_option(
      "--alpha", opt.alpha,
      "input amplitude alpha in [0,1]; beta = sqrt(1 - alpha^2)");
  cmd->add_flag("--vacuum", opt.vacuum, "use the vacuum (all spins down) input")
      ->excludes(alpha);
}

// Preset first, explicit flags override. Returns the anisotropy fixed by
// --jx/--jy, if that pair was used.
std::optional<double> resolve_model(ModelOptions& opt) {
  double alpha = std::sqrt(3.0) / 2.0;
  if (opt.preset == "strong") {
    opt.coupling = 0.1;
    opt.h = 1.0;
  } else if (opt.preset == "weak" || opt.preset.empty()) {
    opt.coupling = 1.0;
    opt.h = 0.1;
  } else if (opt.preset == "intermediate") {
    opt.coupling = 0.5;
    opt.h = 0.5;
  }
  opt.n = 5;
  opt.r = 3;

  std::optional<double> gamma_from_xy;
  if (opt.jx.has_value() != opt.jy.has_value())
    throw CLI::ValidationError("--jx and --jy must be given together");
  if (opt.jx) {
    if (opt.j) throw CLI::ValidationError("--j conflicts with --jx/--jy");
    const double sum = *opt.jx + *opt.jy;
    if (sum == 0.0) throw CLI::ValidationError("--jx + --jy must be nonzero");
    opt.coupling = 0.5 * sum;
    gamma_from_xy = (*opt.jx - *opt.jy) / sum;
  }
  if (opt.j) opt.coupling = *opt.j;
  if (opt.field) opt.h = *opt.field;
  if (opt.n_sites) opt.n = *opt.n_sites;
  if (opt.receiver) opt.r = *opt.receiver;
  if (opt.alpha) alpha = *opt.alpha;
  opt.input = opt.vacuum ? xychain::InputState::vacuum()
                         : xychain::InputState::from_alpha(alpha);
  return gamma_from_xy;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

void print_point_text(const xychain::SweepRow& row, std::ostream& out) {
  const auto fmt = xychain::detail::format_double;
  out << "t        " << fmt(row.t) << "\n"
      << "gamma    " << fmt(row.gamma) << "\n"
      << "sx       " << fmt(row.sx) << "\n"
      << "sy       " << fmt(row.sy) << "\n"
      << "sz       " << fmt(row.sz) << "\n"
      << "fidelity " << fmt(row.fidelity) << "\n"
      << "tangle   " << fmt(row.tangle) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum state transfer and one-site entanglement in the "
               "transverse-field XY ring (free-fermion solution + dense oracle)"};
  app.set_version_flag("--version", std::string("xychain ") + xychain::kVersion);
  app.require_subcommand(1);

  // point
  auto* point = app.add_subcommand("point", "evaluate a single (t, gamma) point");
  ModelOptions point_model;
  add_model_flags(point, point_model);
  double point_t = 0.0, point_gamma = 0.0;
  std::string point_format = "text", point_out;
  point->add_option("--t", point_t, "evolution time")->required();
  point->add_option("--gamma", point_gamma, "anisotropy gamma");
  point->add_option("--format", point_format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  point->add_option("--out", point_out, "output path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evaluate a (t, gamma) grid");
  ModelOptions sweep_model;
  add_model_flags(sweep, sweep_model);
  xychain::GridRange t_range{0.0, 50.0, 201};
  xychain::GridRange gamma_range{0.0, 1.0, 101};
  std::optional<double> sweep_gamma;
  std::string sweep_format = "csv", sweep_out;
  sweep->add_option("--t-min", t_range.min, "time grid start");
  sweep->add_option("--t-max", t_range.max, "time grid end");
  sweep->add_option("--t-steps", t_range.steps, "time grid points");
  sweep->add_option("--gamma-min", gamma_range.min, "gamma grid start");
  sweep->add_option("--gamma-max", gamma_range.max, "gamma grid end");
  sweep->add_option("--gamma-steps", gamma_range.steps, "gamma grid points");
  sweep->add_option("--gamma", sweep_gamma, "fix gamma to a single value");
  sweep->add_option("--format", sweep_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "output path (default stdout)");

  // peaks
  auto* peaks = app.add_subcommand("peaks", "strict local maxima of a sweep file");
  std::string peaks_file, peaks_quantity = "fidelity", peaks_out;
  int top_k = 10;
  peaks->add_option("file", peaks_file, "sweep file (csv or json)")->required();
  peaks->add_option("--quantity", peaks_quantity, "quantity to scan")
      ->check(CLI::IsMember({"fidelity", "tangle"}));
  peaks->add_option("--top-k", top_k, "number of peaks to report (-1 = all)");
  peaks->add_option("--out", peaks_out, "output path (default stdout)");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "compare the free-fermion pipeline against the dense oracle");
  ModelOptions verify_model;
  add_model_flags(verify, verify_model);
  int points = 50;
  std::uint64_t seed = 0;
  std::optional<double> verify_gamma;
  double vt_min = 0.0, vt_max = 50.0, vg_min = 0.0, vg_max = 1.0;
  verify->add_option("--points", points, "number of random sample points");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--gamma", verify_gamma, "fix gamma instead of sampling");
  verify->add_option("--t-min", vt_min, "sampling window start");
  verify->add_option("--t-max", vt_max, "sampling window end");
  verify->add_option("--gamma-min", vg_min, "gamma sampling window start");
  verify->add_option("--gamma-max", vg_max, "gamma sampling window end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    if (*point) {
      const auto gamma_from_xy = resolve_model(point_model);
      if (gamma_from_xy) {
        if (point->count("--gamma"))
          throw CLI::ValidationError("--gamma conflicts with --jx/--jy");
        point_gamma = *gamma_from_xy;
      }
      const auto spec = xychain::build_chain(point_model.coupling, point_gamma,
                                             point_model.h, point_model.n);
      const auto row = xychain::evaluate_point(spec, point_t, point_model.r,
                                               point_model.input);
      std::ofstream file;
      auto& out = open_output(point_out, file);
      if (point_format == "text") {
        print_point_text(row, out);
      } else {
        xychain::SweepResult single;
        single.config.n_sites = point_model.n;
        single.config.coupling = point_model.coupling;
        single.config.field = point_model.h;
        single.config.receiver = point_model.r;
        single.config.input = point_model.input;
        single.config.vacuum = point_model.vacuum;
        single.config.t_range = {point_t, point_t, 1};
        single.config.gamma_range = {point_gamma, point_gamma, 1};
        single.rows.push_back(row);
        xychain::write_sweep(single, out,
                             point_format == "csv" ? xychain::OutputFormat::csv
                                                   : xychain::OutputFormat::json);
      }
      return kExitOk;
    }

    if (*sweep) {
      const auto gamma_from_xy = resolve_model(sweep_model);
      if (gamma_from_xy) {
        if (sweep->count("--gamma"))
          throw CLI::ValidationError("--gamma conflicts with --jx/--jy");
        sweep_gamma = gamma_from_xy;
      }
      if (sweep_gamma) gamma_range = {*sweep_gamma, *sweep_gamma, 1};

      xychain::SweepConfig cfg;
      cfg.n_sites = sweep_model.n;
      cfg.coupling = sweep_model.coupling;
      cfg.field = sweep_model.h;
      cfg.receiver = sweep_model.r;
      cfg.input = sweep_model.input;
      cfg.vacuum = sweep_model.vacuum;
      cfg.t_range = t_range;
      cfg.gamma_range = gamma_range;
      const auto result = xychain::run_sweep(cfg);

      std::ofstream file;
      auto& out = open_output(sweep_out, file);
      xychain::write_sweep(result, out,
                           sweep_format == "csv" ? xychain::OutputFormat::csv
                                                 : xychain::OutputFormat::json);
      out.flush();
      if (!out) throw std::runtime_error("write failed: " + sweep_out);
      return kExitOk;
    }

    if (*peaks) {
      std::ifstream in(peaks_file, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open sweep file: " + peaks_file);
      const auto table = xychain::read_sweep(in);
      const auto quantity = peaks_quantity == "fidelity"
                                ? xychain::PeakQuantity::fidelity
                                : xychain::PeakQuantity::tangle;
      const auto found = xychain::find_peaks(table, quantity, top_k);
      std::ofstream file;
      auto& out = open_output(peaks_out, file);
      out << xychain::to_json(found).dump(2) << "\n";
      return kExitOk;
    }

    if (*verify) {
      const auto gamma_from_xy = resolve_model(verify_model);
      if (gamma_from_xy) verify_gamma = gamma_from_xy;
      xychain::VerifyConfig cfg;
      cfg.n_sites = verify_model.n;
      cfg.coupling = verify_model.coupling;
      cfg.field = verify_model.h;
      cfg.receiver = verify_model.r;
      cfg.input = verify_model.input;
      cfg.n_points = points;
      cfg.seed = seed;
      cfg.t_min = vt_min;
      cfg.t_max = vt_max;
      cfg.gamma_min = vg_min;
      cfg.gamma_max = vg_max;
      cfg.fixed_gamma = verify_gamma;
      const auto report = xychain::verify_against_oracle(cfg);

      const auto fmt = xychain::detail::format_double;
      std::cout << "points              " << report.points << "\n"
                << "max |pipeline - fermion ED|  " << fmt(report.max_fermion_dev)
                << "\n"
                << "max |pipeline - spin ED|     " << fmt(report.max_spin_dev)
                << "  (informational: boundary term differs)\n"
                << "worst point         t=" << fmt(report.worst.t)
                << " gamma=" << fmt(report.worst.gamma) << "\n"
                << "tolerance           " << fmt(report.tolerance) << "\n"
                << "result              " << (report.pass ? "PASS" : "FAIL")
                << "\n";
      return report.pass ? kExitOk : kExitFailure;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
