#include "accelcoh/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <utility>

#include "accelcoh/channel.hpp"
#include "accelcoh/errors.hpp"
#include "accelcoh/gaussian.hpp"
#include "accelcoh/mismatch.hpp"
#include "accelcoh/modes.hpp"
#include "accelcoh/overlaps.hpp"
#include "accelcoh/report.hpp"
#include "accelcoh/special_functions.hpp"
#include "accelcoh/sweeps.hpp"

namespace accelcoh::cli {

namespace {

using report::format_double;

struct Globals {
  std::string output = "-";
  std::string format = "csv";
  std::string convention = "physical";
  std::uint64_t seed = 42;
  int workers = 1;
  std::string cache_dir;
  bool no_cache = false;
};

struct Report {
  report::Table table;
  report::PlotSpec plot;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> notes;
};

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  std::vector<double> values() const { return linspace(lo, hi, n); }
  std::string str() const {
    return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(n);
  }
};

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": cannot parse number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t p = s.find(':'); p != std::string::npos; p = s.find(':', start)) {
    parts.push_back(s.substr(start, p - start));
    start = p + 1;
  }
  parts.push_back(s.substr(start));
  return parts;
}

// "lo:hi:n" or a single value.
Grid parse_grid(const std::string& s, const std::string& what) {
  const auto parts = split_colon(s);
  Grid g;
  if (parts.size() == 1) {
    g.lo = g.hi = parse_number(parts[0], what);
    return g;
  }
  if (parts.size() != 3) throw ConfigError(what + ": expected lo:hi:n, got '" + s + "'");
  g.lo = parse_number(parts[0], what);
  g.hi = parse_number(parts[1], what);
  const double n = parse_number(parts[2], what);
  if (n < 1 || n != std::floor(n) || n > 1e6) {
    throw ConfigError(what + ": point count must be a positive integer");
  }
  g.n = static_cast<std::size_t>(n);
  if (g.n == 1 && g.lo != g.hi) throw ConfigError(what + ": a single point needs lo == hi");
  if (g.n > 1 && !(g.hi > g.lo)) throw ConfigError(what + ": need lo < hi");
  return g;
}

Range parse_range(const std::string& s, const std::string& what) {
  const auto parts = split_colon(s);
  if (parts.size() != 2) throw ConfigError(what + ": expected lo:hi, got '" + s + "'");
  Range r{parse_number(parts[0], what), parse_number(parts[1], what)};
  if (r.hi < r.lo) throw ConfigError(what + ": need lo <= hi");
  return r;
}

std::string range_str(const Range& r) { return format_double(r.lo) + ":" + format_double(r.hi); }

std::string shell_quote(const std::string& s) {
  if (!s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                        "0123456789_-+.,:=/@%") == std::string::npos) {
    return s;
  }
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SpecArgs {
  double accel = 0.1;
  double width = 2.0;
  double omega0 = 5.0;
  double mass = 0.1;
  std::string region = "I";

  void add_to(CLI::App* sub, bool with_accel, bool with_region) {
    if (with_accel) sub->add_option("--accel", accel, "Proper acceleration")->capture_default_str();
    sub->add_option("--width", width, "Wave-packet width L")->capture_default_str();
    sub->add_option("--omega0", omega0, "Central frequency")->capture_default_str();
    sub->add_option("--mass", mass, "Field mass")->capture_default_str();
    if (with_region) {
      sub->add_option("--region", region, "Rindler wedge (I or II)")
          ->check(CLI::IsMember({"I", "II"}))
          ->capture_default_str();
    }
  }
  ModeSpec spec() const { return ModeSpec{region_from_string(region), accel, width, omega0, mass}; }
  void record(Report& rep, bool with_accel, bool with_region) const {
    if (with_accel) rep.params.emplace_back("accel", format_double(accel));
    rep.params.emplace_back("width", format_double(width));
    rep.params.emplace_back("omega0", format_double(omega0));
    rep.params.emplace_back("mass", format_double(mass));
    if (with_region) rep.params.emplace_back("region", region);
  }
};

std::optional<std::filesystem::path> resolve_cache(const Globals& g) {
  if (g.no_cache) return std::nullopt;
  if (!g.cache_dir.empty()) return std::filesystem::path(g.cache_dir);
  return default_cache_dir();
}

void record_globals(Report& rep, const Globals& g) {
  rep.params.emplace_back("format", g.format);
  rep.params.emplace_back("convention", g.convention);
  rep.params.emplace_back("seed", std::to_string(g.seed));
  rep.params.emplace_back("workers", std::to_string(g.workers));
}

std::vector<std::string> provenance(const std::string& subcommand, const Report& rep,
                                    const Globals& g) {
  std::string command = "accelcoh " + subcommand;
  for (const auto& [k, v] : rep.params) command += " --" + k + " " + shell_quote(v);
  std::vector<std::string> lines;
  lines.push_back("tool: accelcoh");
  lines.push_back("subcommand: " + subcommand);
  lines.push_back("command: " + command);
  lines.push_back("engine_version: " + std::to_string(kEngineVersion));
  lines.push_back("seed: " + std::to_string(g.seed));
  for (const auto& [k, v] : rep.params) lines.push_back("param " + k + ": " + v);
  for (const auto& n : rep.notes) lines.push_back("note: " + n);
  lines.push_back("timestamp: " + utc_timestamp());
  return lines;
}

std::string render(const Report& rep, const std::string& format) {
  if (format == "json") return report::to_json(rep.table);
  if (format == "svg") return report::render_svg(rep.table, rep.plot);
  std::ostringstream os;
  report::write_csv(os, rep.table);
  return os.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-" || path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw ConfigError("failed writing output file '" + path + "'");
}

void emit(const std::string& subcommand, Report rep, const Globals& g, std::ostream& out) {
  rep.table.comments = provenance(subcommand, rep, g);
  write_text(g.output, render(rep, g.format), out);
}

// ---- subcommands -------------------------------------------------------

struct ModesArgs {
  SpecArgs spec;
  int refinement = 1;
};

Report do_modes(const ModesArgs& a, const Globals& g) {
  const ModeSpec spec = a.spec.spec();
  const SampleOptions opt{a.refinement, true};
  const SampledMode in = sample_input(spec, opt);
  const SampledMode out = sample_output(spec, opt);
  Report rep;
  rep.table.columns = {"x", "input", "output"};
  const auto xs = in.coordinates();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rep.table.rows.push_back({xs[i], in.values()[i], out.values()[i]});
  }
  rep.plot = {report::PlotKind::lines, "Input and output modes", 0, {1, 2}, 2, false};
  record_globals(rep, g);
  a.spec.record(rep, true, true);
  rep.params.emplace_back("refinement", std::to_string(a.refinement));
  rep.notes.push_back("normalization input=" + format_double(in.norm_constant()) +
                      " output=" + format_double(out.norm_constant()));
  return rep;
}

struct OverlapsArgs {
  SpecArgs spec;
  std::string accels = "0.02:0.2:10";
};

Report do_overlaps(const OverlapsArgs& a, const Globals& g) {
  const Grid grid = parse_grid(a.accels, "--accels");
  const auto cache = resolve_cache(g);
  const ModeSpec base = a.spec.spec();
  const auto accels = grid.values();
  Report rep;
  rep.table.columns = {"accel", "alpha_re", "alpha_im", "beta_re", "beta_im"};
  for (double acc : accels) {
    ModeSpec s = base;
    s.accel = acc;
    if (auto why = guard_violation(s)) {
      const double nan = std::nan("");
      rep.table.rows.push_back({acc, nan, nan, nan, nan});
      rep.notes.push_back("skipped accel=" + format_double(acc) + ": " + *why);
      continue;
    }
    const auto c = obtain_overlaps(s, cache);
    rep.table.rows.push_back(
        {acc, c.alpha.real(), c.alpha.imag(), c.beta.real(), c.beta.imag()});
  }
  rep.plot = {report::PlotKind::lines, "Bogolyubov coefficients (log scale)", 0, {1, 3}, 2, true};
  record_globals(rep, g);
  a.spec.record(rep, false, true);
  rep.params.emplace_back("accels", grid.str());
  return rep;
}

struct SurfaceArgs {
  SpecArgs spec;
  std::string accel_I = "0.001:0.2:8";
  std::string accel_II = "0.001:0.2:8";
  double r = 1.0;
};

Report do_surface(const SurfaceArgs& a, const Globals& g) {
  const Grid gi = parse_grid(a.accel_I, "--accel-I");
  const Grid gii = parse_grid(a.accel_II, "--accel-II");
  if (!(a.r >= 0.0) || !std::isfinite(a.r)) throw ConfigError("--r must be finite and >= 0");
  const auto vi = gi.values();
  const auto vii = gii.values();
  const auto rows = coherence_surface(vi, vii, a.r, a.spec.spec(),
                                      convention_from_string(g.convention), resolve_cache(g),
                                      g.workers);
  Report rep;
  rep.table.columns = {"accel_I", "accel_II", "coherence"};
  for (const auto& row : rows) {
    rep.table.rows.push_back({row.accel_I, row.accel_II, row.coherence.value_or(std::nan(""))});
    if (!row.coherence) {
      rep.notes.push_back("skipped accel_I=" + format_double(row.accel_I) +
                          " accel_II=" + format_double(row.accel_II) + ": " + row.skipped);
    }
  }
  rep.plot = {report::PlotKind::heatmap, "Coherence of the accelerated TMSV", 0, {1}, 2, false};
  record_globals(rep, g);
  a.spec.record(rep, false, false);
  rep.params.emplace_back("accel-I", gi.str());
  rep.params.emplace_back("accel-II", gii.str());
  rep.params.emplace_back("r", format_double(a.r));
  return rep;
}

struct MismatchArgs {
  SpecArgs spec;
  std::vector<std::string> vary;
  std::string fixture;
};

SweepAxis parse_vary(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("--vary: expected name=lo:hi:n, got '" + s + "'");
  SweepAxis axis;
  try {
    axis.param = sweep_param_from_string(s.substr(0, eq));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--vary: ") + e.what());
  }
  axis.values = parse_grid(s.substr(eq + 1), "--vary").values();
  return axis;
}

void write_fixture(const MismatchArgs& a, const Globals& g, std::ostream& out) {
  const ModeSpec fid = fiducial_spec();
  const MismatchResult m = mode_mismatch(fid);
  Report rep;
  rep.table.columns = {"accel", "width", "omega0", "mass", "grid_points", "mismatch"};
  rep.table.rows.push_back({fid.accel, fid.width, fid.omega0, fid.mass,
                            static_cast<double>(m.grid_points), m.value});
  record_globals(rep, g);
  a.spec.record(rep, true, false);
  for (const auto& v : a.vary) rep.params.emplace_back("vary", v);
  rep.params.emplace_back("fixture", a.fixture);
  rep.notes.push_back("fixture: fiducial mode mismatch");
  rep.table.comments = provenance("mismatch", rep, g);
  std::ostringstream os;
  report::write_csv(os, rep.table);
  write_text(a.fixture, os.str(), out);
}

Report do_mismatch(const MismatchArgs& a, const Globals& g, std::ostream& out) {
  if (a.vary.size() > 2) throw ConfigError("--vary may be given at most twice");
  if (a.vary.empty() && a.fixture.empty()) {
    throw ConfigError("mismatch needs --vary and/or --fixture");
  }
  if (!a.fixture.empty()) write_fixture(a, g, out);
  Report rep;
  if (a.vary.empty()) return rep;

  const SweepAxis first = parse_vary(a.vary[0]);
  std::optional<SweepAxis> second;
  if (a.vary.size() == 2) second = parse_vary(a.vary[1]);
  const auto rows = mismatch_sweep(a.spec.spec(), first, second, g.workers);
  rep.table.columns = {"param1", "param2", "mismatch"};
  for (const auto& row : rows) {
    rep.table.rows.push_back(
        {row.param1, row.param2.value_or(std::nan("")), row.mismatch.value_or(std::nan(""))});
    if (!row.mismatch) {
      rep.notes.push_back("skipped index " + std::to_string(row.index) + ": " + row.skipped);
    }
  }
  rep.notes.push_back(std::string("param1 = ") + to_string(first.param) +
                      (second ? std::string(", param2 = ") + to_string(second->param) : ""));
  if (second) {
    rep.plot = {report::PlotKind::heatmap, "Mode mismatch", 0, {1}, 2, false};
  } else {
    rep.plot = {report::PlotKind::lines, "Mode mismatch", 0, {2}, 2, false};
  }
  record_globals(rep, g);
  a.spec.record(rep, true, false);
  for (const auto& v : a.vary) rep.params.emplace_back("vary", v);
  if (!a.fixture.empty()) rep.params.emplace_back("fixture", a.fixture);
  return rep;
}

struct ScanArgs {
  std::size_t count = 2000;
  std::string r_range = "1:3";
  std::string accel_range = "0.01:0.2";
  std::string width_range = "1:3";
  std::string omega0_range = "4:6";
  double mass = 0.1;
};

Report do_scan(const ScanArgs& a, const Globals& g) {
  ScanConfig cfg;
  cfg.seed = g.seed;
  cfg.count = a.count;
  cfg.r_range = parse_range(a.r_range, "--r-range");
  cfg.accel_range = parse_range(a.accel_range, "--accel-range");
  cfg.width_range = parse_range(a.width_range, "--width-range");
  cfg.omega0_range = parse_range(a.omega0_range, "--omega0-range");
  cfg.mass = a.mass;
  cfg.convention = convention_from_string(g.convention);
  cfg.workers = g.workers;
  cfg.cache_dir = resolve_cache(g);
  const auto records = random_scan(cfg);

  Report rep;
  rep.table.columns = {"index",  "r",        "accel_I",  "accel_II",  "width",
                       "omega0", "alpha_I",  "alpha_II", "mismatch", "coherence"};
  for (const auto& r : records) {
    rep.table.rows.push_back({static_cast<double>(r.index), r.r, r.accel_I, r.accel_II, r.width,
                              r.omega0, r.alpha_I, r.alpha_II, r.mismatch, r.coherence});
  }
  rep.plot = {report::PlotKind::scatter, "Random scan: coherence over (mismatch, r)", 8, {1}, 9,
              false};
  record_globals(rep, g);
  rep.params.emplace_back("count", std::to_string(a.count));
  rep.params.emplace_back("r-range", range_str(cfg.r_range));
  rep.params.emplace_back("accel-range", range_str(cfg.accel_range));
  rep.params.emplace_back("width-range", range_str(cfg.width_range));
  rep.params.emplace_back("omega0-range", range_str(cfg.omega0_range));
  rep.params.emplace_back("mass", format_double(cfg.mass));
  return rep;
}

struct ContourArgs {
  std::string input;
  std::size_t r_bins = 10;
  std::size_t m_bins = 10;
  std::size_t min_occupancy = 10;
};

std::vector<ScanRecord> load_scan(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read scan file '" + path + "'");
  const report::Table t = report::read_csv(f);
  const std::size_t ci = t.column("index"), cr = t.column("r"), cm = t.column("mismatch"),
                    cc = t.column("coherence"), cai = t.column("accel_I"),
                    caii = t.column("accel_II"), cw = t.column("width"), co = t.column("omega0"),
                    cal = t.column("alpha_I"), cal2 = t.column("alpha_II");
  std::vector<ScanRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    ScanRecord r;
    r.index = static_cast<std::size_t>(row[ci]);
    r.r = row[cr];
    r.accel_I = row[cai];
    r.accel_II = row[caii];
    r.width = row[cw];
    r.omega0 = row[co];
    r.alpha_I = row[cal];
    r.alpha_II = row[cal2];
    r.mismatch = row[cm];
    r.coherence = row[cc];
    out.push_back(r);
  }
  return out;
}

Report do_contour(const ContourArgs& a, const Globals& g) {
  if (a.r_bins < 2 || a.m_bins < 2) throw ConfigError("contour needs at least 2 bins per axis");
  const auto records = load_scan(a.input);
  const Contour c = median_contour(records, a.r_bins, a.m_bins, a.min_occupancy);
  Report rep;
  rep.table.columns = {"r", "mismatch", "polyline"};
  for (std::size_t p = 0; p < c.polylines.size(); ++p) {
    for (const auto& pt : c.polylines[p]) {
      rep.table.rows.push_back({pt.r, pt.mismatch, static_cast<double>(p)});
    }
  }
  rep.notes.push_back("level (median coherence) = " + format_double(c.level));
  rep.notes.push_back("records = " + std::to_string(records.size()));
  for (const auto& [i, j] : c.sparse_bins) {
    rep.notes.push_back("sparse bin r=" + std::to_string(i) + " m=" + std::to_string(j));
  }
  if (!c.diagnostic.empty()) rep.notes.push_back("diagnostic: " + c.diagnostic);
  rep.plot = {report::PlotKind::scatter, "Median-coherence contour", 1, {0}, 2, false};
  record_globals(rep, g);
  rep.params.emplace_back("input", a.input);
  rep.params.emplace_back("r-bins", std::to_string(a.r_bins));
  rep.params.emplace_back("m-bins", std::to_string(a.m_bins));
  rep.params.emplace_back("min-occupancy", std::to_string(a.min_occupancy));
  return rep;
}

int report_error(std::ostream& err, const char* kind, const std::exception& e, int code) {
  err << "accelcoh: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

bool selftest(std::ostream& out) {
  int failed = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!ok) ++failed;
  };
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      check(name, false, std::string("threw: ") + e.what());
    }
  };

  guarded("log_gamma", [&] {
    const Complex v = log_gamma(Complex(1.0, 1.0));
    const double err = std::abs(v - Complex(-0.65092319930185633889, -0.30164032046753319789));
    check("log_gamma", err < 1e-13, "|error| at 1+i = " + format_double(err));
  });
  guarded("scaled_bessel", [&] {
    const double err = std::abs(scaled_bessel(BesselOrder(0.0), 1.0).value.real() -
                                1.2660658777520083356);
    check("scaled_bessel", err < 1e-14, "|I_0(1) error| = " + format_double(err));
  });
  guarded("tmsv_purity", [&] {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      const auto s = symplectic_eigenvalues(two_mode_squeezed_vacuum(r));
      worst = std::max({worst, std::abs(s.nu_minus - 1.0), std::abs(s.nu_plus - 1.0)});
    }
    check("tmsv_purity", worst < 1e-9, "max |nu - 1| = " + format_double(worst));
  });
  guarded("vacuum_coherence", [&] {
    const double c = coherence(CovarianceMatrix4::vacuum());
    check("vacuum_coherence", c == 0.0, "C(vacuum) = " + format_double(c));
  });
  guarded("channel_closed_form", [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.5, 1.0), ur(0.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double a1 = ua(rng), a2 = ua(rng), r = ur(rng);
      const auto x = apply(build_simplified(a1, a2), two_mode_squeezed_vacuum(r)).entries();
      const auto y = output_tmsv_closed_form(a1, a2, r).entries();
      worst = std::max(worst, (x - y).cwiseAbs().maxCoeff());
    }
    check("channel_closed_form", worst <= 1e-12, "max entry diff = " + format_double(worst));
  });
  guarded("kg_norm", [&] {
    const ModeSpec fid = fiducial_spec();
    const double ni = kg_norm(sample_input(fid));
    const double no = kg_norm(sample_output(fid));
    const double dev = std::max(std::abs(ni - 1.0), std::abs(no - 1.0));
    check("kg_norm", dev <= 1e-6, "max |norm - 1| = " + format_double(dev));
  });
  guarded("bogolyubov_ratio", [&] {
    const auto c = compute_overlaps(fiducial_spec());
    const double ratio = std::abs(c.beta) / std::abs(c.alpha);
    check("bogolyubov_ratio", ratio <= 1e-2, "|beta|/|alpha| = " + format_double(ratio));
  });
  guarded("mismatch_grid", [&] {
    const ModeSpec fid = fiducial_spec();
    const std::size_t expect = static_cast<std::size_t>(
        std::floor((fid.center() + 3 * fid.width - kMismatchGridStart) / kMismatchGridStep)) + 1;
    const std::size_t got = mismatch_grid_size(fid);
    check("mismatch_grid", got == expect, std::to_string(got) + " points");
  });
  guarded("csv_round_trip", [&] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    report::Table t;
    t.columns = {"a", "b"};
    for (int k = 0; k < 200; ++k) t.rows.push_back({u(rng) * 1e-7, std::exp(u(rng) / 10)});
    std::stringstream ss;
    report::write_csv(ss, t);
    const auto back = report::read_csv(ss);
    check("csv_round_trip", back.rows == t.rows, std::to_string(t.rows.size()) + " rows");
  });
  guarded("scan_determinism", [&] {
    ScanConfig cfg;
    cfg.count = 2;
    const auto a = evaluate_record(cfg, 1);
    const auto b = evaluate_record(cfg, 1);
    check("scan_determinism", a.coherence == b.coherence && a.mismatch == b.mismatch,
          "record 1 coherence = " + format_double(a.coherence));
  });

  out << (failed == 0 ? "selftest passed" : "selftest FAILED (" + std::to_string(failed) + ")")
      << "\n";
  return failed == 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence of a localized two-mode Gaussian state seen by accelerated observers",
               "accelcoh"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "Read options from a key = value file ([subcommand] sections)");
  app.require_subcommand(1);

  Globals g;
  auto* fmt = app.add_option("--format", g.format, "Output format")
                  ->check(CLI::IsMember({"csv", "json", "svg"}))
                  ->capture_default_str();
  app.add_option("-o,--output", g.output, "Output file, '-' for stdout")->capture_default_str();
  app.add_option("--convention", g.convention, "Mean-occupation convention")
      ->check(CLI::IsMember({"physical", "paper"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir,
                 "Overlap cache directory (default $ACCELCOH_CACHE_DIR or .accelcoh-cache)");
  app.add_flag("--no-cache", g.no_cache, "Compute overlaps without the on-disk cache");

  ModesArgs modes;
  auto* c_modes = app.add_subcommand("modes", "Sample the normalized input and output modes");
  modes.spec.add_to(c_modes, true, true);
  c_modes->add_option("--refinement", modes.refinement, "Grid refinement factor")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();

  OverlapsArgs overlaps;
  auto* c_overlaps = app.add_subcommand("overlaps", "Bogolyubov coefficients versus acceleration");
  overlaps.spec.add_to(c_overlaps, false, true);
  c_overlaps->add_option("--accels", overlaps.accels, "Acceleration grid lo:hi:n")
      ->capture_default_str();

  SurfaceArgs surface;
  auto* c_surface = app.add_subcommand("surface", "Coherence over two accelerations");
  surface.spec.add_to(c_surface, false, false);
  c_surface->add_option("--accel-I", surface.accel_I, "Region I grid lo:hi:n")
      ->capture_default_str();
  c_surface->add_option("--accel-II", surface.accel_II, "Region II grid lo:hi:n")
      ->capture_default_str();
  c_surface->add_option("--r", surface.r, "Squeezing parameter")->capture_default_str();

  MismatchArgs mismatch;
  auto* c_mismatch = app.add_subcommand("mismatch", "Mode mismatch sweeps");
  mismatch.spec.add_to(c_mismatch, true, false);
  c_mismatch->add_option("--vary", mismatch.vary,
                         "Swept parameter name=lo:hi:n (accel, width, omega0, mass); up to twice");
  c_mismatch->add_option("--fixture", mismatch.fixture,
                         "Also write the fiducial mismatch fixture to this path");

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Random scan of squeezed states and channels");
  c_scan->add_option("--count", scan.count, "Number of records")
      ->check(CLI::Range(std::size_t{1}, std::size_t{10000000}))
      ->capture_default_str();
  c_scan->add_option("--r-range", scan.r_range, "Squeezing range lo:hi")->capture_default_str();
  c_scan->add_option("--accel-range", scan.accel_range, "Acceleration range lo:hi")
      ->capture_default_str();
  c_scan->add_option("--width-range", scan.width_range, "Width range lo:hi")
      ->capture_default_str();
  c_scan->add_option("--omega0-range", scan.omega0_range, "Frequency range lo:hi")
      ->capture_default_str();
  c_scan->add_option("--mass", scan.mass, "Field mass")->capture_default_str();

  ContourArgs contour;
  auto* c_contour = app.add_subcommand("contour", "Median-coherence contour of a scan CSV");
  c_contour->add_option("--input", contour.input, "Scan CSV written by `scan`")->required();
  c_contour->add_option("--r-bins", contour.r_bins, "Bins along r")->capture_default_str();
  c_contour->add_option("--m-bins", contour.m_bins, "Bins along mismatch")->capture_default_str();
  c_contour->add_option("--min-occupancy", contour.min_occupancy, "Records per usable bin")
      ->capture_default_str();

  auto* c_selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (fmt->count() == 0) {
    const auto ext = std::filesystem::path(g.output).extension().string();
    if (ext == ".svg") g.format = "svg";
    if (ext == ".json") g.format = "json";
  }

  try {
    if (c_modes->parsed()) emit("modes", do_modes(modes, g), g, out);
    if (c_overlaps->parsed()) emit("overlaps", do_overlaps(overlaps, g), g, out);
    if (c_surface->parsed()) emit("surface", do_surface(surface, g), g, out);
    if (c_mismatch->parsed()) {
      Report rep = do_mismatch(mismatch, g, out);
      if (!mismatch.vary.empty()) emit("mismatch", std::move(rep), g, out);
    }
    if (c_scan->parsed()) emit("scan", do_scan(scan, g), g, out);
    if (c_contour->parsed()) emit("contour", do_contour(contour, g), g, out);
    if (c_selftest->parsed()) return selftest(out) ? kExitOk : kExitNumeric;
  } catch (const ConfigError& e) {
    return report_error(err, "usage error", e, kExitUsage);
  } catch (const InvalidSpec& e) {
    return report_error(err, "invalid parameters", e, kExitUsage);
  } catch (const DomainError& e) {
    return report_error(err, "invalid parameters", e, kExitUsage);
  } catch (const NumericError& e) {
    return report_error(err, "numeric failure", e, kExitNumeric);
  } catch (const std::exception& e) {
    return report_error(err, "error", e, kExitNumeric);
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace accelcoh::cli
