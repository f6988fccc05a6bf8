#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "xychain/ed.hpp"
#include "xychain/version.hpp"
#include "xychain/wick.hpp"

namespace xychain {

struct GridRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;  // number of grid points, >= 1

  double value(int i) const {
    if (steps <= 1) return min;
    return min + i * ((max - min) / (steps - 1));
  }
};

enum class OutputFormat { csv, json };

struct SweepConfig {
  int n_sites = 5;
  double coupling = 1.0;
  double field = 0.1;
  int receiver = 3;
  InputState input = InputState::vacuum();
  bool vacuum = false;  // echoed in metadata
  GridRange t_range{0.0, 50.0, 201};
  GridRange gamma_range{0.0, 1.0, 101};
};

inline void validate(const SweepConfig& cfg) {
  if (cfg.n_sites < 3)
    throw std::invalid_argument("sweep: need n_sites >= 3");
  if (cfg.receiver < 1 || cfg.receiver > cfg.n_sites)
    throw std::invalid_argument("sweep: receiver site out of range");
  if (cfg.t_range.steps < 1 || cfg.gamma_range.steps < 1)
    throw std::invalid_argument("sweep: grid steps must be >= 1");
  if (cfg.t_range.min > cfg.t_range.max)
    throw std::invalid_argument("sweep: t_min must not exceed t_max");
  if (cfg.gamma_range.min > cfg.gamma_range.max)
    throw std::invalid_argument("sweep: gamma_min must not exceed gamma_max");
  if (!std::isfinite(cfg.coupling) || !std::isfinite(cfg.field))
    throw std::invalid_argument("sweep: parameters must be finite");
}

struct SweepRow {
  double t, gamma, sx, sy, sz, fidelity, tangle;
};

// Rows in gamma-major order: gamma varies slowest, t fastest.
struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

inline SweepRow evaluate_point(const ChainSpec& spec, double t, int r,
                               const InputState& input) {
  const auto table = contraction_table(spec, t);
  const auto prop = propagator(spec, t);
  const BlochVector b = bloch_vector(table, prop, r, input);
  return {t,     spec.anisotropy, b.sx, b.sy, b.sz,
          fidelity(input, b), one_tangle(b)};
}

// Cells are independent; workers pull indices from a shared counter and
// write into preassigned slots, so the row order never depends on timing.
inline SweepResult run_sweep(const SweepConfig& cfg, unsigned n_threads = 0) {
  validate(cfg);
  const int nt = cfg.t_range.steps;
  const int ng = cfg.gamma_range.steps;
  const std::size_t total = static_cast<std::size_t>(nt) * ng;

  SweepResult result;
  result.config = cfg;
  result.rows.resize(total);

  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(total));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total || failed.load()) break;
      const int gi = static_cast<int>(i) / nt;
      const int ti = static_cast<int>(i) % nt;
      try {
        const ChainSpec spec = build_chain(cfg.coupling, cfg.gamma_range.value(gi),
                                           cfg.field, cfg.n_sites);
        result.rows[i] = evaluate_point(spec, cfg.t_range.value(ti),
                                        cfg.receiver, cfg.input);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        error = e.what();
        failed.store(true);
        break;
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("run_sweep: " + error);
  return result;
}

namespace detail {

// 12 significant digits, locale-independent.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

inline void write_csv(const SweepResult& result, std::ostream& out) {
  const auto& cfg = result.config;
  const auto fmt = detail::format_double;
  out << "# xychain-sweep v1 generator=xychain/" << kVersion << "\n";
  out << "# model n=" << cfg.n_sites << " J=" << fmt(cfg.coupling)
      << " h=" << fmt(cfg.field) << " r=" << cfg.receiver << "\n";
  out << "# input alpha=" << fmt(cfg.input.alpha)
      << " beta=" << fmt(cfg.input.beta) << " vacuum=" << (cfg.vacuum ? 1 : 0)
      << "\n";
  out << "# t min=" << fmt(cfg.t_range.min) << " max=" << fmt(cfg.t_range.max)
      << " steps=" << cfg.t_range.steps << "\n";
  out << "# gamma min=" << fmt(cfg.gamma_range.min)
      << " max=" << fmt(cfg.gamma_range.max)
      << " steps=" << cfg.gamma_range.steps << "\n";
  out << "t,gamma,sx,sy,sz,fidelity,tangle\n";
  for (const auto& row : result.rows) {
    out << fmt(row.t) << ',' << fmt(row.gamma) << ',' << fmt(row.sx) << ','
        << fmt(row.sy) << ',' << fmt(row.sz) << ',' << fmt(row.fidelity) << ','
        << fmt(row.tangle) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const SweepResult& result) {
  const auto& cfg = result.config;
  nlohmann::ordered_json meta{
      {"format", "xychain-sweep"},
      {"format_version", 1},
      {"generator", std::string("xychain/") + kVersion},
      {"n_sites", cfg.n_sites},
      {"coupling", cfg.coupling},
      {"field", cfg.field},
      {"receiver", cfg.receiver},
      {"alpha", cfg.input.alpha},
      {"beta", cfg.input.beta},
      {"vacuum", cfg.vacuum},
      {"t_min", cfg.t_range.min},
      {"t_max", cfg.t_range.max},
      {"t_steps", cfg.t_range.steps},
      {"gamma_min", cfg.gamma_range.min},
      {"gamma_max", cfg.gamma_range.max},
      {"gamma_steps", cfg.gamma_range.steps},
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"t", row.t},
                    {"gamma", row.gamma},
                    {"sx", row.sx},
                    {"sy", row.sy},
                    {"sz", row.sz},
                    {"fidelity", row.fidelity},
                    {"tangle", row.tangle}});
  }
  return nlohmann::ordered_json{{"metadata", meta}, {"rows", rows}};
}

inline void write_json(const SweepResult& result, std::ostream& out) {
  out << to_json(result).dump(2) << "\n";
}

inline void write_sweep(const SweepResult& result, std::ostream& out,
                        OutputFormat format) {
  if (format == OutputFormat::csv)
    write_csv(result, out);
  else
    write_json(result, out);
}

// Grid view of a stored sweep; t_steps rows per gamma block, as written.
struct SweepTable {
  std::vector<SweepRow> rows;
  int t_steps = 0;
  int gamma_steps = 0;
};

namespace detail {

inline SweepTable table_from_rows(std::vector<SweepRow> rows) {
  if (rows.empty()) throw std::runtime_error("sweep file: no data rows");
  std::size_t t_steps = rows.size();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].gamma != rows[0].gamma) {
      t_steps = i;
      break;
    }
  }
  if (rows.size() % t_steps != 0)
    throw std::runtime_error("sweep file: ragged grid");
  SweepTable table;
  table.t_steps = static_cast<int>(t_steps);
  table.gamma_steps = static_cast<int>(rows.size() / t_steps);
  table.rows = std::move(rows);
  return table;
}

}  // namespace detail

inline SweepTable as_table(const SweepResult& result) {
  SweepTable table;
  table.rows = result.rows;
  table.t_steps = result.config.t_range.steps;
  table.gamma_steps = result.config.gamma_range.steps;
  return table;
}

inline SweepTable read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("t,gamma,", 0) != 0)
        throw std::runtime_error("sweep file: missing csv header");
      header_seen = true;
      continue;
    }
    SweepRow row{};
    double* fields[7] = {&row.t,  &row.gamma,    &row.sx,    &row.sy,
                         &row.sz, &row.fidelity, &row.tangle};
    std::stringstream ss(line);
    std::string cell;
    for (auto* field : fields) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("sweep file: short row");
      try {
        *field = std::stod(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("sweep file: bad number '" + cell + "'");
      }
    }
    rows.push_back(row);
  }
  return detail::table_from_rows(std::move(rows));
}

inline SweepTable read_sweep_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("sweep file: ") + e.what());
  }
  if (!doc.contains("rows") || !doc["rows"].is_array())
    throw std::runtime_error("sweep file: missing rows array");
  std::vector<SweepRow> rows;
  for (const auto& r : doc["rows"]) {
    rows.push_back({r.at("t").get<double>(), r.at("gamma").get<double>(),
                    r.at("sx").get<double>(), r.at("sy").get<double>(),
                    r.at("sz").get<double>(), r.at("fidelity").get<double>(),
                    r.at("tangle").get<double>()});
  }
  return detail::table_from_rows(std::move(rows));
}

// Sniffs the format from the first non-whitespace byte.
inline SweepTable read_sweep(std::istream& in) {
  int c = in.peek();
  while (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
    in.get();
    c = in.peek();
  }
  if (c == '{') return read_sweep_json(in);
  return read_sweep_csv(in);
}

enum class PeakQuantity { fidelity, tangle };

struct GridPeak {
  double t, gamma, value;
};

// Strict local maxima under the 4-neighborhood of the (t, gamma) grid,
// sorted by value descending, ties by (t, gamma) ascending.
inline std::vector<GridPeak> find_peaks(const SweepTable& table,
                                        PeakQuantity quantity, int top_k = -1) {
  const int nt = table.t_steps;
  const int ng = table.gamma_steps;
  auto value = [&](int gi, int ti) {
    const auto& row = table.rows[static_cast<std::size_t>(gi) * nt + ti];
    return quantity == PeakQuantity::fidelity ? row.fidelity : row.tangle;
  };

  std::vector<GridPeak> peaks;
  for (int gi = 0; gi < ng; ++gi) {
    for (int ti = 0; ti < nt; ++ti) {
      const double v = value(gi, ti);
      bool is_peak = true;
      if (ti > 0 && value(gi, ti - 1) >= v) is_peak = false;
      if (is_peak && ti + 1 < nt && value(gi, ti + 1) >= v) is_peak = false;
      if (is_peak && gi > 0 && value(gi - 1, ti) >= v) is_peak = false;
      if (is_peak && gi + 1 < ng && value(gi + 1, ti) >= v) is_peak = false;
      if (is_peak) {
        const auto& row = table.rows[static_cast<std::size_t>(gi) * nt + ti];
        peaks.push_back({row.t, row.gamma, v});
      }
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const GridPeak& a, const GridPeak& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.t != b.t) return a.t < b.t;
    return a.gamma < b.gamma;
  });
  if (top_k >= 0 && static_cast<std::size_t>(top_k) < peaks.size())
    peaks.resize(static_cast<std::size_t>(top_k));
  return peaks;
}

inline nlohmann::ordered_json to_json(const std::vector<GridPeak>& peaks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : peaks)
    arr.push_back({{"t", p.t}, {"gamma", p.gamma}, {"value", p.value}});
  return arr;
}

// Cross-validation harness: random (t, gamma) points, free-fermion pipeline
// against the fermionic ring oracle (gating) and the periodic spin chain
// (informational; its Jordan-Wigner boundary term is not dropped there).
struct VerifyConfig {
  int n_sites = 5;
  double coupling = 1.0;
  double field = 0.1;
  int receiver = 3;
  InputState input = InputState::vacuum();
  int n_points = 50;
  std::uint64_t seed = 0;
  double t_min = 0.0;
  double t_max = 50.0;
  double gamma_min = 0.0;
  double gamma_max = 1.0;
  std::optional<double> fixed_gamma;
  double tolerance = 1e-9;
};

struct VerifySample {
  double t = 0.0, gamma = 0.0, fermion_dev = 0.0, spin_dev = 0.0;
};

struct VerifyReport {
  int points = 0;
  double max_fermion_dev = 0.0;
  double max_spin_dev = 0.0;
  VerifySample worst;
  double tolerance = 1e-9;
  bool pass = false;
};

inline VerifyReport verify_against_oracle(const VerifyConfig& cfg) {
  if (cfg.n_sites < 3 || cfg.n_sites > 10)
    throw std::invalid_argument("verify: dense comparison limited to 3..10 sites");
  if (cfg.receiver < 1 || cfg.receiver > cfg.n_sites)
    throw std::invalid_argument("verify: receiver site out of range");
  if (cfg.n_points < 1)
    throw std::invalid_argument("verify: need at least one sample");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> draw_t(cfg.t_min, cfg.t_max);
  std::uniform_real_distribution<double> draw_gamma(cfg.gamma_min, cfg.gamma_max);

  VerifyReport report;
  report.points = cfg.n_points;
  report.tolerance = cfg.tolerance;
  for (int i = 0; i < cfg.n_points; ++i) {
    const double t = draw_t(rng);
    const double gamma = cfg.fixed_gamma ? *cfg.fixed_gamma : draw_gamma(rng);
    const ChainSpec spec =
        build_chain(cfg.coupling, gamma, cfg.field, cfg.n_sites);

    const BlochVector ours = bloch_vector(spec, t, cfg.receiver, cfg.input);
    const BlochVector fermion =
        oracle_pipeline(spec, t, cfg.receiver, cfg.input).bloch;
    const auto psi_spin =
        diagonalize(build_spin_hamiltonian(spec))
            .evolve(encoded_state(cfg.n_sites, cfg.input), t);
    const BlochVector spin = site_bloch(psi_spin, cfg.receiver);

    auto dev = [](const BlochVector& a, const BlochVector& b) {
      return std::max({std::abs(a.sx - b.sx), std::abs(a.sy - b.sy),
                       std::abs(a.sz - b.sz)});
    };
    const double fermion_dev = dev(ours, fermion);
    const double spin_dev = dev(ours, spin);
    if (fermion_dev > report.max_fermion_dev) {
      report.max_fermion_dev = fermion_dev;
      report.worst = {t, gamma, fermion_dev, spin_dev};
    }
    report.max_spin_dev = std::max(report.max_spin_dev, spin_dev);
  }
  report.pass = report.max_fermion_dev < cfg.tolerance;
  return report;
}

}  // namespace xychain
