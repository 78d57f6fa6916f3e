// Acceptance gate for the toolkit: twelve numbered end-to-end checks, one
// pass/fail line each, with every tolerance pinned in this file.  Exit
// status 0 iff every criterion (including its runtime budget) passes.
//
// Usage: acceptance [path-to-hypwave-cli]
// The CLI path is needed only by criterion 12 (byte-determinism of the
// command-line tool); the ctest registration passes it automatically.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypwave/fuchsian.hpp"
#include "hypwave/hyperbolic.hpp"
#include "hypwave/kernel.hpp"
#include "hypwave/prng.hpp"
#include "hypwave/spectra.hpp"
#include "hypwave/wavelet.hpp"

namespace {

using namespace hypwave;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

// Shared parameter grid: band indices 0..6 crossed with these weights.
const std::vector<double> kAlphas = {0.5, 1.0, 2.3, 4.0};
constexpr int kMaxIndex = 6;

// Base seed for every randomized criterion; per-criterion streams are
// derived with Prng::shard_seed so the draws are independent and pinned.
constexpr std::uint64_t kSeed = 20260818;

int g_failures = 0;

void report(int id, bool pass, double seconds, double budget_s,
            const std::string& what) {
  if (!pass) ++g_failures;
  std::printf("criterion %2d: %s  %s  (%.2f s, budget %.0f s)\n", id,
              pass ? "PASS" : "FAIL", what.c_str(), seconds, budget_s);
  std::fflush(stdout);
}

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

HPoint random_point(Prng& rng) {
  const double x = rng.uniform(-2.0, 2.0);
  const double s = std::exp(rng.uniform(-0.8, 1.0));
  return {x, s};
}

// Random product of up to max_len generator letters (or their inverses).
GroupElement random_word(const GroupPresentation& group, Prng& rng,
                         int max_len) {
  GroupElement g = GroupElement::identity();
  const int len = static_cast<int>(rng.next_u64() % (max_len + 1));
  for (int i = 0; i < len; ++i) {
    const auto pick = rng.next_u64() % (2 * group.generators.size());
    const auto& gen = group.generators[pick / 2];
    g = g * ((pick % 2) ? gen.inverse() : gen);
  }
  return g;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- criterion 1: normalization chain --------------------------------------
void criterion_1() {
  constexpr double kTol = 1e-10;
  constexpr double kBudget = 5.0;
  Timer t;
  double worst_ratio = 0.0;
  double worst_quad = 0.0;
  for (int n = 0; n <= kMaxIndex; ++n) {
    for (const double alpha : kAlphas) {
      const auto c = check_normalization({n, alpha});
      worst_ratio =
          std::max(worst_ratio, std::abs(c.ratio_closed - 2.0 / alpha));
      worst_quad = std::max(
          worst_quad, std::abs(c.admissibility_closed - c.admissibility_quad));
      worst_quad = std::max(worst_quad, std::abs(c.norm_closed - c.norm_quad));
    }
  }
  const double sec = t.seconds();
  const bool pass = worst_ratio <= kTol && worst_quad <= kTol && sec < kBudget;
  report(1, pass, sec, kBudget,
         "normalization: admissibility/norm = 2/alpha and closed vs "
         "quadrature, n<=6 x 4 weights (worst ratio " +
             fmt_sci(worst_ratio) + ", worst quad " + fmt_sci(worst_quad) +
             ", tol 1e-10)");
}

// --- criterion 2: kernel diagonals ------------------------------------------
void criterion_2() {
  constexpr double kTol = 1e-12;
  constexpr double kBudget = 5.0;
  Timer t;
  Prng rng(Prng::shard_seed(kSeed, 2));
  std::vector<HPoint> zs;
  for (int i = 0; i < 100; ++i) zs.push_back(random_point(rng));

  double worst = 0.0;
  for (int n = 0; n <= kMaxIndex; ++n) {
    for (const double alpha : kAlphas) {
      const WaveletParams p{n, alpha};
      for (const auto& z : zs) {
        worst = std::max(
            worst, std::abs(kernel_eval(p, z, z) - 0.5 * alpha));
      }
    }
  }
  double worst_super = 0.0;
  const std::vector<SuperParams> stacks = {
      {1.6, 1}, {2.6, 1}, {2.6, 2}, {3.2, 3}};
  for (const auto& sp : stacks) {
    const double expected = sp.N * (2.0 * sp.B - sp.N) / 2.0;
    for (const auto& z : zs) {
      worst_super = std::max(worst_super,
                             std::abs(super_kernel(sp, z, z) - expected));
    }
  }
  const double sec = t.seconds();
  const bool pass = worst <= kTol && worst_super <= kTol && sec < kBudget;
  report(2, pass, sec, kBudget,
         "kernel diagonal alpha/2 and stacked diagonal N(2B-N)/2, 100 random "
         "z (worst " +
             fmt_sci(worst) + " / " + fmt_sci(worst_super) + ", tol 1e-12)");
}

// --- criterion 3: covariance identity ---------------------------------------
void criterion_3() {
  constexpr double kTol = 1e-10;
  constexpr double kBudget = 10.0;
  Timer t;
  Prng rng(Prng::shard_seed(kSeed, 3));
  const auto group = GroupPresentation::psl2z();
  double worst = 0.0;
  for (int n = 0; n <= kMaxIndex; ++n) {
    for (const double alpha : kAlphas) {
      const WaveletParams p{n, alpha};
      for (int trial = 0; trial < 100; ++trial) {
        const GroupElement g = random_word(group, rng, 6);
        const HPoint z = random_point(rng);
        const HPoint w = random_point(rng);
        worst = std::max(worst, covariance_residual(p, g, z, w));
      }
    }
  }
  const double sec = t.seconds();
  const bool pass = worst <= kTol && sec < kBudget;
  report(3, pass, sec, kBudget,
         "phase-twisted covariance residual, 100 random (g,z,w) per (n,alpha),"
         " words <= 6 (worst " +
             fmt_sci(worst) + ", tol 1e-10)");
}

// --- criterion 4: kernel vs transform quadrature ----------------------------
void criterion_4() {
  constexpr double kTol = 1e-8;
  constexpr double kBudget = 30.0;
  Timer t;
  Prng rng(Prng::shard_seed(kSeed, 4));
  // 30 random pairs; the parameter choice rotates through the full grid so
  // every (n, alpha) combination is exercised at least once.
  std::vector<WaveletParams> grid;
  for (int n = 0; n <= kMaxIndex; ++n)
    for (const double alpha : kAlphas) grid.push_back({n, alpha});
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const auto& p = grid[i % grid.size()];
    const HPoint z = random_point(rng);
    const HPoint w = random_point(rng);
    worst = std::max(worst, kernel_transform_consistency(p, z, w));
  }
  const double sec = t.seconds();
  const bool pass = worst <= kTol && sec < kBudget;
  report(4, pass, sec, kBudget,
         "closed-form kernel vs direct frequency quadrature, 30 random pairs "
         "(worst " +
             fmt_sci(worst) + ", tol 1e-8)");
}

// --- criteria 5 and 6 share the two reference discretizations ---------------
struct OperatorPair {
  NystromOperator rect;
  NystromOperator modular;
};

OperatorPair assemble_reference_operators() {
  const WaveletParams p{0, 2.0};
  OperatorPair ops;
  ops.rect = nystrom_assemble(p, DomainSpec::rectangle(0.0, 1.0, 1.0, 2.0), 32);
  ops.modular =
      nystrom_assemble(p, DomainSpec::modular_standard().truncated(10.0), 32);
  return ops;
}

void criterion_5(const OperatorPair& ops) {
  constexpr double kBudget = 60.0;
  Timer t;
  const WaveletParams p{0, 2.0};

  // Rectangle [0,1] x [1,2]: mu-area 1/2, so the trace target is
  // area * alpha/2 = 0.5.
  const double rect_area = 0.5;
  const double tr_rect = nystrom_trace_moments(ops.rect).trace;
  const double rect_rel = std::abs(tr_rect - rect_area * 1.0) / (rect_area);

  // Modular domain truncated at height 10: mu-area pi/3 - 1/10.
  const double mod_area = kPi / 3.0 - 0.1;
  const double tr_mod = nystrom_trace_moments(ops.modular).trace;
  const double mod_rel = std::abs(tr_mod - mod_area * 1.0) / (mod_area);

  // Monte Carlo integral of the kernel diagonal over the modular domain
  // (the stochastic case; rectangle sampling is exact with zero variance,
  // so a sigma test there is degenerate).
  const auto dom = DomainSpec::modular_standard().truncated(10.0);
  const auto mc = mu_integral_mc(
      [&](const HPoint& z) { return kernel_eval(p, z, z).real(); }, dom,
      {100000, Prng::shard_seed(kSeed, 5)});
  const double mc_dev = std::abs(mc.value - mod_area * 1.0);
  const bool mc_ok = mc_dev <= 3.0 * mc.stderr_est;

  const double sec = t.seconds();
  const bool pass =
      rect_rel <= 0.005 && mod_rel <= 0.01 && mc_ok && sec < kBudget;
  std::ostringstream os;
  os << "trace = area*alpha/2 at resolution 32 (rect rel " << fmt_sci(rect_rel)
     << " tol 5e-3, modular rel " << fmt_sci(mod_rel)
     << " tol 1e-2, mc dev " << fmt_sci(mc_dev) << " <= 3*stderr "
     << fmt_sci(3.0 * mc.stderr_est) << " at 1e5 samples)";
  report(5, pass, sec, kBudget, os.str());
}

void criterion_6(const OperatorPair& ops) {
  constexpr double kBudget = 60.0;
  constexpr double kLo = -1e-6;
  constexpr double kHi = 1.0 + 1e-6;
  Timer t;
  double lam_lo = 0.0, lam_hi = 0.0;
  bool moments_ok = true;
  for (const auto* op : {&ops.rect, &ops.modular}) {
    const auto sp = hermitian_eig(op->matrix);
    lam_lo = std::min(lam_lo, sp.eigenvalues.back());
    lam_hi = std::max(lam_hi, sp.eigenvalues.front());
    const auto tm = nystrom_trace_moments(*op);
    moments_ok = moments_ok && tm.second <= tm.trace;
  }
  const double sec = t.seconds();
  const bool pass =
      lam_lo >= kLo && lam_hi <= kHi && moments_ok && sec < kBudget;
  std::ostringstream os;
  os << "discretized projection spectrum in [-1e-6, 1+1e-6] and tr(M^2) <= "
        "tr(M) at resolution 32 (lambda in ["
     << fmt_sci(lam_lo) << ", " << lam_hi << "])";
  report(6, pass, sec, kBudget, os.str());
}

// --- criterion 7: magnetic-Laplacian eigenvalue ------------------------------
void criterion_7() {
  constexpr double kTol = 1e-5;
  constexpr double kBudget = 10.0;
  constexpr double kStep = 1e-3;
  Timer t;
  Prng rng(Prng::shard_seed(kSeed, 7));
  const HPoint z0{0.0, 1.0};
  const std::vector<std::pair<double, int>> levels = {
      {1.6, 0}, {2.6, 0}, {2.6, 1}, {3.2, 2}};
  double worst = 0.0;
  for (const auto& [B, n] : levels) {
    for (int i = 0; i < 5; ++i) {
      const HPoint probe{rng.uniform(-1.5, 1.5), rng.uniform(0.8, 2.2)};
      worst = std::max(worst, maass_eigen_residual(B, n, z0, probe, kStep));
    }
  }
  const double sec = t.seconds();
  const bool pass = worst <= kTol && sec < kBudget;
  report(7, pass, sec, kBudget,
         "magnetic-Laplacian eigen-relation, 4 levels x 5 probes, h=1e-3 + "
         "Richardson (worst rel residual " +
             fmt_sci(worst) + ", tol 1e-5)");
}

// --- criterion 8: rotation covariance ----------------------------------------
void criterion_8() {
  constexpr double kTol = 1e-8;
  constexpr double kControlFloor = 5e-4;  // frozen regression floor
  constexpr double kBudget = 30.0;
  Timer t;
  Prng rng(Prng::shard_seed(kSeed, 8));
  const std::vector<WaveletParams> picks = {
      {0, 0.5}, {0, 1.0}, {1, 2.3}, {3, 4.0}};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
    const double theta = sign * rng.uniform(0.15, 2.95);
    const HPoint z{rng.uniform(-2.0, 2.0), rng.uniform(0.4, 2.5)};
    for (const auto& p : picks) {
      worst = std::max(worst, rotation_covariance_residual(p, theta, z));
    }
  }
  // Off-family control profile must NOT satisfy the covariance: its
  // residual stays above a frozen floor at a pinned configuration.
  const double control = rotation_covariance_residual_general(
      control_freq(), 3.0, kPi / 5.0, HPoint{0.4, 1.3});
  const double sec = t.seconds();
  const bool pass = worst <= kTol && control >= kControlFloor && sec < kBudget;
  std::ostringstream os;
  os << "rotation covariance, 20 random (theta,z) x 4 profiles (worst "
     << fmt_sci(worst) << ", tol 1e-8; control residual " << fmt_sci(control)
     << " >= floor 5e-4)";
  report(8, pass, sec, kBudget, os.str());
}

// --- criterion 9: lower-frame decay on a dense orbit -------------------------
void criterion_9() {
  constexpr double kBudget = 120.0;
  constexpr std::size_t kMaxPoints = 1500;
  Timer t;
  bool interlacing_ok = true;
  bool decreasing = true;
  double first = 0.0, last = 0.0;
  std::size_t points = 0;
  std::string note;
  try {
    const auto rows = riesz_diagnostic({0, 4.0}, GroupPresentation::psl2z(),
                                       HPoint{0.0, 2.0}, {2.0, 3.0, 4.0, 5.0});
    first = rows.front().lambda_min;
    last = rows.back().lambda_min;
    points = rows.back().count;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      decreasing = decreasing && rows[i].lambda_min < rows[i - 1].lambda_min;
    }
  } catch (const std::exception& e) {
    interlacing_ok = false;
    note = std::string(" [scan threw: ") + e.what() + "]";
  }
  const double sec = t.seconds();
  const bool pass = interlacing_ok && decreasing && last < 0.5 * first &&
                    points <= kMaxPoints && sec < kBudget;
  std::ostringstream os;
  os << "minimal Gram eigenvalue decays on the dense orbit (alpha 4, z=2i, "
        "radii 2..5): strict decrease, final/initial "
     << fmt_sci(first != 0.0 ? last / first : 0.0) << " < 0.5, " << points
     << " points <= 1500, interlacing clean" << note;
  report(9, pass, sec, kBudget, os.str());
}

// --- criterion 10: critical-area arithmetic ----------------------------------
void criterion_10() {
  constexpr double kTol = 1e-14;
  constexpr double kBudget = 5.0;
  Timer t;
  double worst = 0.0;
  for (const double alpha : kAlphas) {
    worst = std::max(worst,
                     std::abs(frame_area_threshold(alpha) - 2.0 / alpha));
  }
  const std::vector<std::pair<double, int>> levels = {
      {1.6, 0}, {2.6, 0}, {2.6, 1}, {3.2, 2}};
  for (const auto& [B, n] : levels) {
    worst = std::max(
        worst, std::abs(band_area_threshold(B, n) - 1.0 / (B - n - 0.5)));
  }
  const std::vector<std::pair<double, int>> stacks = {
      {1.6, 1}, {2.6, 1}, {2.6, 2}, {3.2, 3}};
  for (const auto& [B, N] : stacks) {
    worst = std::max(worst, std::abs(super_area_threshold(B, N) -
                                     2.0 / (N * (2.0 * B - N))));
  }
  // The same numbers must surface through the report path.
  const auto dom = DomainSpec::modular_standard();
  const auto rep = nyquist_report(WaveletParams{0, 2.3}, dom);
  worst = std::max(worst, std::abs(rep.threshold - 2.0 / 2.3));
  const auto rep2 = nyquist_report(SuperParams{2.6, 2}, dom);
  worst = std::max(worst, std::abs(rep2.threshold - 2.0 / (2 * (5.2 - 2))));
  worst = std::max(worst, std::abs(rep2.band_thresholds[0] - 1.0 / 2.1));
  worst = std::max(worst, std::abs(rep2.band_thresholds[1] - 1.0 / 1.1));
  const double sec = t.seconds();
  const bool pass = worst <= kTol && sec < kBudget;
  report(10, pass, sec, kBudget,
         "critical areas 2/alpha, 1/(B-n-1/2), 2/(N(2B-N)) reproduced "
         "(worst " +
             fmt_sci(worst) + ", tol 1e-14)");
}

// --- criterion 11: orbit-counting slope --------------------------------------
void criterion_11() {
  constexpr double kBudget = 120.0;
  Timer t;
  const auto group = GroupPresentation::psl2z();
  const HPoint z{0.0, 2.0};
  const double area = domain_area(DomainSpec::modular_standard(),
                                  AreaMethod::GaussBonnet)
                          .value;
  std::vector<double> radii = {4.0, 5.0, 6.0};
  std::vector<double> devs;
  std::string note;
  bool ok = true;
  try {
    for (const double r : radii) {
      devs.push_back(std::abs(counting_ratio(group, z, z, r) * area - 1.0));
    }
  } catch (const std::exception& e) {
    ok = false;
    note = std::string(" [enumeration: ") + e.what() + "]";
  }
  double slope = 0.0;
  if (ok) slope = lsq_slope(radii, devs);
  const double sec = t.seconds();
  const bool pass = ok && slope < 0.0 && sec < kBudget;
  std::ostringstream os;
  os << "orbit-counting deviation |ratio*area - 1| trends down over radii "
        "4,5,6 (lsq slope "
     << fmt_sci(slope) << " < 0, no fixed tolerance)" << note;
  report(11, pass, sec, kBudget, os.str());
}

// --- criterion 12: byte-determinism of the CLI --------------------------------
std::optional<std::string> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool same_bytes(const fs::path& a, const fs::path& b, std::string& why) {
  const auto ca = slurp(a);
  const auto cb = slurp(b);
  if (!ca || !cb) {
    why = "missing output file " + (ca ? b : a).string();
    return false;
  }
  if (*ca != *cb) {
    why = "byte mismatch between " + a.string() + " and " + b.string();
    return false;
  }
  return true;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void criterion_12(const char* cli_path) {
  constexpr double kBudget = 60.0;
  Timer t;
  if (cli_path == nullptr) {
    report(12, false, t.seconds(), kBudget,
           "determinism: CLI binary path not supplied (pass it as argv[1])");
    return;
  }
  const fs::path scratch = fs::temp_directory_path() / "hypwave_acceptance";
  std::error_code ec;
  fs::remove_all(scratch, ec);
  fs::create_directories(scratch);

  bool ok = true;
  std::string why;
  const std::string cli(cli_path);

  // Two identically seeded selftest runs.
  for (const char* dir : {"self_a", "self_b"}) {
    if (run_cli(cli, std::string("selftest --seed 3 --out-dir ") +
                         (scratch / dir).string()) != 0) {
      ok = false;
      why = "selftest run failed";
    }
  }
  if (ok) {
    ok = same_bytes(scratch / "self_a" / "selftest.json",
                    scratch / "self_b" / "selftest.json", why) &&
         same_bytes(scratch / "self_a" / "selftest.csv",
                    scratch / "self_b" / "selftest.csv", why);
  }

  // Two identically seeded runs of the trace check in its reference
  // configuration (modular domain truncated at 10, alpha 2, resolution 32,
  // 1e5 Monte Carlo samples).
  const std::string trace_args =
      "trace-check --domain modular-standard --alpha 2 --truncate 10 "
      "--resolution 32 --mc-samples 100000 --seed 3 --out-dir ";
  for (const char* dir : {"trace_a", "trace_b"}) {
    if (ok && run_cli(cli, trace_args + (scratch / dir).string()) != 0) {
      ok = false;
      why = "trace-check run failed";
    }
  }
  if (ok) {
    ok = same_bytes(scratch / "trace_a" / "trace_check.json",
                    scratch / "trace_b" / "trace_check.json", why) &&
         same_bytes(scratch / "trace_a" / "trace_check.csv",
                    scratch / "trace_b" / "trace_check.csv", why);
  }

  const double sec = t.seconds();
  const bool pass = ok && sec < kBudget;
  std::string what =
      "determinism: selftest and reference trace-check byte-identical across "
      "two equally seeded runs";
  if (!ok) what += " [" + why + "]";
  report(12, pass, sec, kBudget, what);
}

}  // namespace

int main(int argc, char** argv) {
  std::printf("acceptance gate: 12 criteria, tolerances pinned in code\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  const auto ops = assemble_reference_operators();
  criterion_5(ops);
  criterion_6(ops);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12(argc > 1 ? argv[1] : nullptr);
  if (g_failures == 0) {
    std::printf("acceptance gate: all 12 criteria passed\n");
    return 0;
  }
  std::printf("acceptance gate: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
