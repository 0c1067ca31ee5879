#include "accelcoh/overlaps.hpp"

#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <system_error>
#include <thread>

#include "accelcoh/errors.hpp"

namespace accelcoh {

namespace {

constexpr const char* kGridPolicy = "envelope-1e-12;floor-0.02;gl16-panel-period/10";

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::optional<OverlapCoefficients> read_entry(const std::filesystem::path& path,
                                              const std::string& key, const ModeSpec& spec,
                                              const OverlapOptions& opt, std::string& problem) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) {
      problem = "malformed line";
      return std::nullopt;
    }
    fields[line.substr(0, eq)] = line.substr(eq + 3);
  }
  auto number = [&](const char* name) -> std::optional<double> {
    auto it = fields.find(name);
    if (it == fields.end()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0') return std::nullopt;
    return v;
  };
  if (fields["engine_version"] != std::to_string(kEngineVersion)) {
    problem = "engine version mismatch";
    return std::nullopt;
  }
  if (fields["key"] != key) {
    problem = "key mismatch";
    return std::nullopt;
  }
  const auto are = number("alpha_re");
  const auto aim = number("alpha_im");
  const auto bre = number("beta_re");
  const auto bim = number("beta_im");
  const auto cin = number("norm_input");
  const auto cout = number("norm_output");
  if (!are || !aim || !bre || !bim || !cin || !cout) {
    problem = "missing or unparsable value";
    return std::nullopt;
  }
  OverlapCoefficients c;
  c.alpha = {*are, *aim};
  c.beta = {*bre, *bim};
  c.spec = spec;
  c.quadrature_tol = opt.rel_tol;
  c.norms.input = *cin;
  c.norms.output = *cout;
  return c;
}

void write_entry_atomically(const std::filesystem::path& path, const std::string& key,
                            const OverlapCoefficients& c) {
  std::ostringstream body;
  body << "# accelcoh overlap cache entry\n"
       << "engine_version = " << kEngineVersion << "\n"
       << "key = " << key << "\n"
       << "region = " << to_string(c.spec.region) << "\n"
       << "accel = " << fmt17(c.spec.accel) << "\n"
       << "width = " << fmt17(c.spec.width) << "\n"
       << "omega0 = " << fmt17(c.spec.omega0) << "\n"
       << "mass = " << fmt17(c.spec.mass) << "\n"
       << "grid_policy = " << kGridPolicy << "\n"
       << "tolerance = " << fmt17(c.quadrature_tol) << "\n"
       << "alpha_re = " << fmt17(c.alpha.real()) << "\n"
       << "alpha_im = " << fmt17(c.alpha.imag()) << "\n"
       << "beta_re = " << fmt17(c.beta.real()) << "\n"
       << "beta_im = " << fmt17(c.beta.imag()) << "\n"
       << "norm_input = " << fmt17(c.norms.input) << "\n"
       << "norm_output = " << fmt17(c.norms.output) << "\n";

  thread_local std::mt19937_64 salt{std::random_device{}() ^
                                    std::hash<std::thread::id>{}(std::this_thread::get_id())};
  std::ostringstream tmp_name;
  tmp_name << "." << path.filename().string() << ".tmp-" << std::hex << salt();
  const auto tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << body.str();
    out.flush();
    if (!out) throw NumericError("overlap cache: cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw NumericError("overlap cache: cannot rename into " + path.string());
  }
}

}  // namespace

OverlapCoefficients compute_overlaps(const ModeSpec& spec, const OverlapOptions& opt) {
  validate(spec);
  const OutputProfile psi(spec);
  const Support s = envelope_support(spec);
  const double x0 = spec.center();

  // Region II flips the sign of both profiles; every product below is unchanged.
  auto integrand = [&](double x) -> std::array<double, 4> {
    const double f = input_profile(spec, x);
    const double g = psi(x);
    const double fg = f * g;
    return {f * f, g * g / x, fg * (1.0 + x0 / x), fg * (1.0 - x0 / x)};
  };
  quad::Options qopt;
  qopt.rel_tol = opt.rel_tol;
  qopt.max_bisections = opt.max_bisections;
  const auto res = quad::integrate<4>(integrand, s.lo, s.hi, spec.period() / 10.0, qopt);

  const double in_norm = 2.0 * spec.omega0 * res.value[0];
  const double out_norm = 2.0 * spec.omega0 * x0 * res.value[1];
  if (!(in_norm > 0.0) || !(out_norm > 0.0)) {
    throw NumericError("compute_overlaps: non-positive Klein-Gordon norm");
  }
  OverlapCoefficients c;
  c.spec = spec;
  c.quadrature_tol = opt.rel_tol;
  c.norms.input = 1.0 / std::sqrt(in_norm);
  c.norms.output = 1.0 / std::sqrt(out_norm);
  c.norms.diag = res.diag;
  const double scale = spec.omega0 * c.norms.input * c.norms.output;
  c.alpha = {scale * res.value[2], 0.0};
  c.beta = {scale * res.value[3], 0.0};
  return c;
}

std::vector<OverlapCurvePoint> overlap_curve(const ModeSpec& base, std::span<const double> accels,
                                             const OverlapOptions& opt) {
  std::vector<OverlapCurvePoint> out;
  out.reserve(accels.size());
  for (double a : accels) {
    OverlapCurvePoint p;
    p.accel = a;
    ModeSpec spec = base;
    spec.accel = a;
    try {
      p.coeffs = compute_overlaps(spec, opt);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

OverlapCache::OverlapCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("overlap cache: cannot create " + dir_.string());
}

std::string OverlapCache::canonical_key(const ModeSpec& spec, const OverlapOptions& opt) {
  std::ostringstream os;
  os << "region=" << to_string(spec.region) << ";accel=" << fmt17(spec.accel)
     << ";width=" << fmt17(spec.width) << ";omega0=" << fmt17(spec.omega0)
     << ";mass=" << fmt17(spec.mass) << ";grid=" << kGridPolicy
     << ";tol=" << fmt17(opt.rel_tol) << ";bisections=" << opt.max_bisections;
  return os.str();
}

std::filesystem::path OverlapCache::entry_path(const ModeSpec& spec,
                                               const OverlapOptions& opt) const {
  std::ostringstream name;
  name << "overlap-" << std::hex;
  name.width(16);
  name.fill('0');
  name << fnv1a64(canonical_key(spec, opt)) << ".txt";
  return dir_ / name.str();
}

OverlapCache::Lookup OverlapCache::get(const ModeSpec& spec, const OverlapOptions& opt) const {
  validate(spec);
  const std::string key = canonical_key(spec, opt);
  const auto path = entry_path(spec, opt);
  if (std::filesystem::exists(path)) {
    std::string problem;
    if (auto c = read_entry(path, key, spec, opt, problem)) return {*c, true, 0};
    std::cerr << "accelcoh: warning: discarding overlap cache entry " << path.string() << " ("
              << problem << "); recomputing\n";
  }
  Lookup out;
  out.coeffs = compute_overlaps(spec, opt);
  out.evaluations = out.coeffs.norms.diag.evaluations;
  write_entry_atomically(path, key, out.coeffs);
  return out;
}

OverlapCoefficients cached_overlaps(const ModeSpec& spec, const std::filesystem::path& cache_dir,
                                    const OverlapOptions& opt) {
  return OverlapCache(cache_dir).get(spec, opt).coeffs;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("ACCELCOH_CACHE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".accelcoh-cache";
}

}  // namespace accelcoh
