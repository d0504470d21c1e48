#include "blowup/harness.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "blowup/analysis.hpp"
#include "blowup/criteria.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace blowup {

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), enough for content hashing of output files.

namespace {

struct Sha256 {
  uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                   0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  uint64_t length = 0;
  unsigned char buf[64];
  size_t fill = 0;

  static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

  void block(const unsigned char* p) {
    static const uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
        0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
        0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
        0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
             (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
             hh = h[7];
    for (int i = 0; i < 64; ++i) {
      uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      uint32_t ch = (e & f) ^ (~e & g);
      uint32_t t1 = hh + s1 + ch + k[i] + w[i];
      uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      uint32_t t2 = s0 + maj;
      hh = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    h[0] += a; h[1] += b; h[2] += c; h[3] += d;
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
  }

  void update(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    length += uint64_t(len) * 8;
    while (len > 0) {
      size_t take = std::min(len, size_t(64) - fill);
      std::copy(p, p + take, buf + fill);
      fill += take;
      p += take;
      len -= take;
      if (fill == 64) {
        block(buf);
        fill = 0;
      }
    }
  }

  std::string hex() {
    unsigned char pad[72] = {0x80};
    size_t padlen = (fill < 56) ? 56 - fill : 120 - fill;
    uint64_t bits = length;  // message length before padding
    unsigned char lenb[8];
    for (int i = 7; i >= 0; --i) {
      lenb[i] = bits & 0xff;
      bits >>= 8;
    }
    update(pad, padlen);
    update(lenb, 8);
    std::ostringstream os;
    for (uint32_t v : h) {
      for (int sh = 28; sh >= 0; sh -= 4) os << "0123456789abcdef"[(v >> sh) & 0xf];
    }
    return os.str();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  Sha256 s;
  s.update(data.data(), data.size());
  return s.hex();
}

// ---------------------------------------------------------------------------
// Config

ExperimentConfig::ExperimentConfig() : params(3.0, 1) {
  stepper.upwind_radius = 2.0 * shrink.K * std::sqrt(horizon);
}

std::string ExperimentConfig::validate() const {
  if (!(params.p > 1.0)) return "params.p must be > 1";
  if (params.N < 1) return "params.N must be >= 1";
  if (!(shrink.K >= 1.0)) return "shrink.K must be >= 1";
  if (!(shrink.A >= 1.0)) return "shrink.A must be >= 1";
  if (!(s0 > 1.0)) return "s0 must be > 1";
  if (!(horizon > s0)) return "horizon must be > s0";
  if (grid.n_points < 3 || grid.n_points % 2 == 0)
    return "grid.n_points must be odd and >= 3";
  if (!(grid.y_max >= 2.5 * shrink.K * std::sqrt(horizon)))
    return "grid.y_max must be >= 2.5 K sqrt(horizon)";
  if (!(stepper.ds > 0.0)) return "stepper.ds must be > 0";
  if (stepper.ds > 0.5 * grid.spacing() * grid.spacing())
    return "stepper.ds exceeds the stability bound h^2/2";
  if (!(shoot_tol > 0.0)) return "shoot_tol must be > 0";
  if (!(s0_phys > 1.0)) return "s0_phys must be > 1";
  if (!(x_max > 0.0)) return "x_max must be > 0";
  if (nx < 3 || nx % 2 == 0) return "nx must be odd and >= 3";
  if (output_dir.empty()) return "output_dir must be set";
  return "";
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["params"] = {{"p", params.p}, {"N", params.N}};
  j["grid"] = {{"y_max", grid.y_max}, {"n_points", grid.n_points}};
  j["stepper"] = {{"ds", stepper.ds},
                  {"scheme", stepper.scheme == Scheme::imex_bdf2 ? "imex-bdf2" : "imex-euler"},
                  {"boundary", stepper.boundary == Boundary::extrapolation ? "extrapolation"
                                                                           : "dirichlet-profile"},
                  {"upwind_radius", stepper.upwind_radius},
                  {"snapshot_interval", stepper.snapshot_interval}};
  j["shrink"] = {{"K", shrink.K}, {"A", shrink.A}};
  j["s0"] = s0;
  j["horizon"] = horizon;
  j["shoot_tol"] = shoot_tol;
  j["physical_stage"] = {{"s0_phys", s0_phys},
                         {"x_max", x_max},
                         {"nx", nx},
                         {"dt_factor", physical.dt_factor},
                         {"stop_ratio", physical.stop_ratio},
                         {"snapshot_ratio", physical.snapshot_ratio},
                         {"t_est_window", physical.t_est_window}};
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  if (j.contains("params")) {
    double p = j["params"].value("p", 3.0);
    int N = j["params"].value("N", 1);
    if (!(p > 1.0) || N < 1) {
      // keep the invalid values visible to validate() without throwing here
      c.params.p = p;
      c.params.N = N;
    } else {
      c.params = Params(p, N);
    }
  }
  if (j.contains("grid")) {
    c.grid.y_max = j["grid"].value("y_max", c.grid.y_max);
    c.grid.n_points = j["grid"].value("n_points", c.grid.n_points);
  }
  if (j.contains("stepper")) {
    const json& st = j["stepper"];
    c.stepper.ds = st.value("ds", c.stepper.ds);
    if (st.value("scheme", "imex-euler") == std::string("imex-bdf2"))
      c.stepper.scheme = Scheme::imex_bdf2;
    if (st.value("boundary", "dirichlet-profile") == std::string("extrapolation"))
      c.stepper.boundary = Boundary::extrapolation;
    c.stepper.upwind_radius = st.value("upwind_radius", c.stepper.upwind_radius);
    c.stepper.snapshot_interval = st.value("snapshot_interval", c.stepper.snapshot_interval);
  }
  if (j.contains("shrink")) {
    c.shrink.K = j["shrink"].value("K", c.shrink.K);
    c.shrink.A = j["shrink"].value("A", c.shrink.A);
  }
  c.s0 = j.value("s0", c.s0);
  c.horizon = j.value("horizon", c.horizon);
  c.shoot_tol = j.value("shoot_tol", c.shoot_tol);
  if (j.contains("physical_stage")) {
    const json& ph = j["physical_stage"];
    c.s0_phys = ph.value("s0_phys", c.s0_phys);
    c.x_max = ph.value("x_max", c.x_max);
    c.nx = ph.value("nx", c.nx);
    c.physical.dt_factor = ph.value("dt_factor", c.physical.dt_factor);
    c.physical.stop_ratio = ph.value("stop_ratio", c.physical.stop_ratio);
    c.physical.snapshot_ratio = ph.value("snapshot_ratio", c.physical.snapshot_ratio);
    c.physical.t_est_window = ph.value("t_est_window", c.physical.t_est_window);
  }
  c.seed = j.value("seed", c.seed);
  c.output_dir = j.value("output_dir", c.output_dir);
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_json_text(read_file(path));
}

std::string resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_absolute()) return dir;
  const char* root = std::getenv("BLOWUPLAB_OUTPUT_ROOT");
  if (root && *root) return (fs::path(root) / p).string();
  return dir;
}

// ---------------------------------------------------------------------------
// Snapshot store

namespace {
constexpr uint64_t kSnapshotMagic = 0x424c555053484f54ull;  // "BLUPSHOT"
}

void write_snapshots(const std::string& path, const std::vector<double>& times,
                     const std::vector<Field>& fields) {
  if (times.size() != fields.size())
    throw std::invalid_argument("write_snapshots: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto put = [&](const void* p, size_t n) { out.write(static_cast<const char*>(p), n); };
  uint64_t count = times.size();
  put(&kSnapshotMagic, 8);
  put(&count, 8);
  double y_max = fields.empty() ? 0.0 : fields[0].grid.y_max;
  uint64_t n_points = fields.empty() ? 0 : uint64_t(fields[0].grid.n_points);
  put(&y_max, 8);
  put(&n_points, 8);
  for (size_t i = 0; i < times.size(); ++i) {
    put(&times[i], 8);
    put(fields[i].values.data(), 8 * fields[i].values.size());
  }
}

bool read_snapshots(const std::string& path, std::vector<double>& times,
                    std::vector<Field>& fields) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  auto get = [&](void* p, size_t n) { return bool(in.read(static_cast<char*>(p), n)); };
  uint64_t magic = 0, count = 0, n_points = 0;
  double y_max = 0.0;
  if (!get(&magic, 8) || magic != kSnapshotMagic) return false;
  if (!get(&count, 8) || !get(&y_max, 8) || !get(&n_points, 8)) return false;
  if (count > 0 && (n_points < 3 || n_points % 2 == 0 || !(y_max > 0.0))) return false;
  times.clear();
  fields.clear();
  for (uint64_t i = 0; i < count; ++i) {
    double t;
    if (!get(&t, 8)) return false;
    Field f(Grid(y_max, int(n_points)), Frame::similarity, t);
    if (!get(f.values.data(), 8 * n_points)) return false;
    times.push_back(t);
    fields.push_back(std::move(f));
  }
  return true;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

std::string membership_csv(const RunRecord& rec) {
  std::ostringstream os;
  os << MembershipReport::csv_header() << '\n';
  for (const auto& r : rec.reports) os << r.csv_row() << '\n';
  return os.str();
}

json suites_to_json(const std::vector<SuiteResult>& suites) {
  json arr = json::array();
  for (const auto& s : suites)
    arr.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
  return arr;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& files) {
  json man;
  man["files"] = json::array();
  std::string all_hashes;
  for (const auto& f : files) {
    std::string data = read_file((fs::path(dir) / f).string());
    std::string hash = sha256_hex(data);
    all_hashes += hash;
    man["files"].push_back({{"name", f}, {"sha256", hash}, {"bytes", data.size()}});
  }
  man["run_id"] = sha256_hex(all_hashes).substr(0, 16);
  write_file((fs::path(dir) / "manifest.json").string(), man.dump(2) + "\n");
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg) {
  std::string err = cfg.validate();
  if (!err.empty()) {
    std::cerr << "config error: " << err << "\n";
    return kExitConfig;
  }
  const std::string dir = resolve_output_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "config error: cannot create output dir " << dir << "\n";
    return kExitConfig;
  }
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
  std::vector<std::string> files;
  auto emit = [&](const char* name, const std::string& data) {
    write_file(path(name), data);
    files.push_back(name);
  };

  emit("config.json", cfg.to_json());

  // Stage 1: shooting in similarity variables.
  ShootConfig sc;
  sc.s0 = cfg.s0;
  sc.K = cfg.shrink.K;
  sc.A = cfg.shrink.A;
  sc.horizon = cfg.horizon;
  sc.tol = cfg.shoot_tol;
  sc.grid = cfg.grid;
  sc.stepper = cfg.stepper;
  sc.params = cfg.params;
  ShootResult shot = shoot(sc);

  {
    std::ostringstream os;
    os << ShootResult::progress_header() << '\n';
    for (const auto& row : shot.progress_rows) os << row << '\n';
    emit("shoot_progress.csv", os.str());
  }

  if (!shot.success) {
    emit("membership.csv", membership_csv(shot.record));
    write_manifest(dir, files);
    std::cerr << "shooting failed: " << shot.failure << "\n";
    return shot.record.diverged ? kExitDivergence : kExitShooting;
  }

  const RunRecord& rec = shot.record;
  emit("membership.csv", membership_csv(rec));
  write_snapshots(path("similarity_snapshots.bin"), rec.snapshot_s, rec.snapshots);
  files.push_back("similarity_snapshots.bin");

  auto [fit_u, fit_g] = intermediate_fit(rec, cfg.params);
  emit("intermediate_u.csv", fit_u.to_csv());
  emit("intermediate_grad.csv", fit_g.to_csv());
  ModeResiduals mr = mode_residuals(rec, cfg.shrink.A);

  // Stage 2: physical-frame run to the blow-up time.
  const double T = std::exp(-cfg.s0_phys);
  Field u0 = Field::sample(Grid(cfg.x_max, cfg.nx), Frame::physical, 0.0, [&](double x) {
    return std::pow(T, -1.0 / (cfg.params.p - 1.0)) *
           profile_phi(x / std::sqrt(T), cfg.s0_phys, cfg.params);
  });
  PhysicalRun prun = run_physical(u0, cfg.physical, cfg.params);
  write_snapshots(path("physical_snapshots.bin"), prun.t, prun.snapshots);
  files.push_back("physical_snapshots.bin");
  if (!prun.blew_up) {
    write_manifest(dir, files);
    std::cerr << "physical run did not blow up\n";
    return kExitDivergence;
  }

  TrajectoryStore store = TrajectoryStore::from_run(prun, cfg.params);
  std::vector<double> probes = final_probe_points(store, cfg.shrink.K);
  auto [fin_u, fin_g] = final_profile_fit(store, cfg.params, probes);
  emit("final_u.csv", fin_u.to_csv());
  emit("final_grad.csv", fin_g.to_csv());

  std::vector<SuiteResult> suites = evaluate_run_suites(rec, fit_u, fit_g, fin_u, fin_g);
  bool all_pass = true;
  for (const auto& s : suites) all_pass = all_pass && s.pass;

  json summary;
  summary["trapped"] = shot.trapped;
  summary["d0"] = shot.d0;
  summary["d1"] = shot.d1;
  summary["exit_time"] = shot.achieved_exit_time;
  summary["T_est"] = store.T;
  summary["mode_residuals"] = {{"c0", mr.c0}, {"c1", mr.c1}, {"c2", mr.c2}};
  summary["fitted_C_u"] = fit_u.fitted_C;
  summary["fitted_C_grad"] = fit_g.fitted_C;
  summary["suites"] = suites_to_json(suites);
  summary["exit_code"] = all_pass ? kExitOk : kExitAcceptance;
  emit("summary.json", summary.dump(2) + "\n");

  write_manifest(dir, files);
  if (!all_pass) {
    std::cerr << "verification failed:";
    for (const auto& s : suites)
      if (!s.pass) std::cerr << ' ' << s.name;
    std::cerr << "\n";
    return kExitAcceptance;
  }
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& base, const std::string& axis,
              const std::vector<double>& values) {
  if (values.empty()) {
    std::cerr << "config error: empty sweep values\n";
    return kExitConfig;
  }
  static const std::vector<std::string> axes = {"p", "s0", "K", "A", "h", "ds"};
  if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
    std::cerr << "config error: unknown sweep axis " << axis << "\n";
    return kExitConfig;
  }

  std::vector<ExperimentConfig> cfgs;
  for (double v : values) {
    ExperimentConfig c = base;
    if (axis == "p") {
      c.params.p = v;
    } else if (axis == "s0") {
      c.horizon = v + (base.horizon - base.s0);
      c.s0 = v;
    } else if (axis == "K") {
      c.shrink.K = v;
      c.stepper.upwind_radius = 2.0 * v * std::sqrt(c.horizon);
    } else if (axis == "A") {
      c.shrink.A = v;
    } else if (axis == "h") {
      int n = int(std::lround(2.0 * c.grid.y_max / v)) + 1;
      if (n % 2 == 0) ++n;
      c.grid.n_points = n;
    } else if (axis == "ds") {
      c.stepper.ds = v;
    }
    std::ostringstream os;
    os << axis << '=' << v;
    c.output_dir = (fs::path(base.output_dir) / os.str()).string();
    cfgs.push_back(std::move(c));
  }

  std::vector<std::future<int>> futs;
  for (const auto& c : cfgs)
    futs.push_back(std::async(std::launch::async, [c]() { return cmd_run(c); }));

  std::ostringstream sum;
  sum << "value,exit_code,trapped,exit_time,c0,c1,c2,fitted_C_u,fitted_C_grad\n";
  int worst = kExitOk;
  for (size_t i = 0; i < cfgs.size(); ++i) {
    int code = futs[i].get();
    worst = std::max(worst, code);
    sum.precision(17);
    sum << values[i] << ',' << code;
    fs::path sp = fs::path(resolve_output_dir(cfgs[i].output_dir)) / "summary.json";
    if (fs::exists(sp)) {
      json s = json::parse(read_file(sp.string()));
      sum << ',' << (s.value("trapped", false) ? 1 : 0) << ',' << s.value("exit_time", 0.0)
          << ',' << s["mode_residuals"].value("c0", 0.0) << ','
          << s["mode_residuals"].value("c1", 0.0) << ','
          << s["mode_residuals"].value("c2", 0.0) << ',' << s.value("fitted_C_u", 0.0) << ','
          << s.value("fitted_C_grad", 0.0);
    } else {
      sum << ",0,0,0,0,0,0,0";
    }
    sum << '\n';
  }
  const std::string dir = resolve_output_dir(base.output_dir);
  fs::create_directories(dir);
  write_file((fs::path(dir) / "summary.csv").string(), sum.str());
  return worst;
}

int cmd_check(const std::string& dir_in) {
  const std::string dir = resolve_output_dir(dir_in);
  const fs::path root(dir);
  if (!fs::exists(root / "manifest.json")) {
    std::cerr << "integrity error: no manifest.json in " << dir << "\n";
    return kExitConfig;
  }
  json man;
  try {
    man = json::parse(read_file((root / "manifest.json").string()));
  } catch (const std::exception& e) {
    std::cerr << "integrity error: unreadable manifest: " << e.what() << "\n";
    return kExitConfig;
  }
  for (const auto& f : man["files"]) {
    const std::string name = f["name"];
    const fs::path p = root / name;
    if (!fs::exists(p)) {
      std::cerr << "integrity error: missing file " << name << "\n";
      return kExitConfig;
    }
    std::string data = read_file(p.string());
    if (sha256_hex(data) != f["sha256"].get<std::string>() ||
        data.size() != f["bytes"].get<size_t>()) {
      std::cerr << "integrity error: hash mismatch for " << name << "\n";
      return kExitConfig;
    }
  }

  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_file((root / "config.json").string());
  } catch (const std::exception& e) {
    std::cerr << "integrity error: bad config.json: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<std::string> failures;

  // Re-evaluate the membership series from the stored CSV.
  {
    std::istringstream in(read_file((root / "membership.csv").string()));
    std::string line;
    std::getline(in, line);  // header
    bool any = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      any = true;
      auto cols = split_csv(line);
      if (cols.size() != 12) {
        std::cerr << "integrity error: malformed membership.csv row\n";
        return kExitConfig;
      }
      const double s = std::stod(cols[0]);
      const double q2 = std::stod(cols[3]);
      const int in_set = std::stoi(cols[11]);
      if (!in_set) failures.push_back("membership: exit recorded at s=" + cols[0]);
      if (std::abs(q2) > cfg.shrink.bound_q2(s))
        failures.push_back("q2-envelope: |q2| exceeds A^2 ln s/s^2 at s=" + cols[0]);
      for (int m = 0; m < 5; ++m)
        if (std::stod(cols[6 + m]) < 0.0 && in_set)
          failures.push_back("membership: negative margin with in_set at s=" + cols[0]);
    }
    if (!any) failures.push_back("membership: empty series");
  }

  auto load_fit = [&](const char* name) {
    ProfileFitReport rep;
    std::istringstream in(read_file((root / name).string()));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cols = split_csv(line);
      rep.grid.push_back(std::stod(cols[0]));
      rep.measured.push_back(std::stod(cols[1]));
      rep.envelope.push_back(std::stod(cols[2]));
    }
    rep.finalize();
    return rep;
  };

  try {
    ProfileFitReport fu = load_fit("intermediate_u.csv");
    ProfileFitReport fg = load_fit("intermediate_grad.csv");
    ProfileFitReport nu = load_fit("final_u.csv");
    ProfileFitReport ng = load_fit("final_grad.csv");
    for (const auto& s : evaluate_profile_suites(fu, fg, nu, ng))
      if (!s.pass) failures.push_back(s.name + ": " + s.detail);
  } catch (const std::exception& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (!failures.empty()) {
    std::cerr << "check failed:\n";
    for (const auto& f : failures) std::cerr << "  " << f << "\n";
    return kExitAcceptance;
  }
  return kExitOk;
}

}  // namespace blowup
