#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <cctype>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_util.hpp"
#include "hypwave/fuchsian.hpp"
#include "hypwave/hyperbolic.hpp"
#include "hypwave/kernel.hpp"
#include "hypwave/prng.hpp"
#include "hypwave/specfun.hpp"
#include "hypwave/spectra.hpp"
#include "hypwave/wavelet.hpp"

namespace hypwave::cli {
namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Option plumbing
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", c.config_path,
                  "JSON config file; explicit flags override its values");
  cmd->add_option("--out-dir", c.out_dir, "directory for output artifacts")
      ->envname("HYPWAVE_OUT_DIR");
  cmd->add_option("--seed", c.seed, "base seed for all pseudo-random draws");
  cmd->add_flag("--plot", c.plot,
                "emit a gnuplot script next to each CSV artifact");
}

struct DomainFlags {
  DomainConfig cfg;
  double declared_area = 0.0;
  CLI::Option* declared_opt = nullptr;

  DomainConfig resolve() {
    DomainConfig out = cfg;
    if (declared_opt != nullptr && declared_opt->count() > 0)
      out.declared_area = declared_area;
    return out;
  }
};

void add_domain(CLI::App* cmd, DomainFlags& d, bool with_q = true) {
  cmd->add_option("--domain", d.cfg.kind,
                  "rectangle | modular-standard | hecke");
  cmd->add_option("--x-lo", d.cfg.x_lo, "rectangle: lower x bound");
  cmd->add_option("--x-hi", d.cfg.x_hi, "rectangle: upper x bound");
  cmd->add_option("--s-lo", d.cfg.s_lo, "rectangle: lower s bound");
  cmd->add_option("--s-hi", d.cfg.s_hi, "rectangle: upper s bound");
  if (with_q) cmd->add_option("--q", d.cfg.q, "hecke domain index (q >= 3)");
  cmd->add_option("--truncate", d.cfg.truncate,
                  "cusp truncation height (0 = untruncated)");
  d.declared_opt =
      cmd->add_option("--declared-area", d.declared_area,
                      "externally known domain area, overrides the computed "
                      "value");
}

void add_group(CLI::App* cmd, GroupConfig& g) {
  cmd->add_option("--group", g.name, "psl2z | hecke");
  cmd->add_option("--q", g.q, "hecke group index (q >= 3)");
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double r = std::stod(item, &pos);
    if (pos != item.size())
      throw std::invalid_argument("bad radius list entry: " + item);
    out.push_back(r);
  }
  if (out.empty()) throw std::invalid_argument("empty radius list");
  return out;
}

Json radii_json(const std::vector<double>& radii) {
  Json j = Json::array();
  for (double r : radii) j.push_back(r);
  return j;
}

/// Runs `body` with the failure-marker contract: domain/parameter
/// validation errors become exit 2, computation aborts become exit 1, and
/// both flush an error record before returning.
int guarded(RunContext& ctx, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    return ctx.abort_with(e.what(), 2);
  } catch (const std::exception& e) {
    return ctx.abort_with(e.what(), 1);
  }
}

// Random draws shared by several subcommands.
HPoint random_point(Prng& rng) {
  return {rng.uniform(-2.0, 2.0), std::exp(rng.uniform(-0.8, 1.0))};
}

/// Random group element given as a product of at most `max_len` generator
/// factors (each a generator or its inverse).
GroupElement random_word(const GroupPresentation& group, Prng& rng,
                         int max_len) {
  const int len = static_cast<int>(rng.uniform01() * (max_len + 1));
  GroupElement g;
  for (int i = 0; i < len; ++i) {
    const auto& gens = group.generators;
    const auto k = static_cast<std::size_t>(rng.uniform01() *
                                            static_cast<double>(gens.size()));
    GroupElement f = gens[std::min(k, gens.size() - 1)];
    if (rng.uniform01() < 0.5) f = f.inverse();
    g = g * f;
  }
  return g;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

int run_selftest(const CommonOpts& common) {
  RunContext ctx("selftest", common.out_dir, common.plot);
  ctx.anchor("admissibility / norm_sq = 2/alpha");
  ctx.anchor("k(z,z) = alpha/2");
  ctx.anchor("trace = area * alpha/2");
  ctx.anchor("d(i, 2i) = log 2");
  ctx.anchor("count(r) / ball_area(r) -> 1/area");
  ctx.config("seed", common.seed);

  Prng rng(common.seed);

  // specfun ----------------------------------------------------------------
  {
    const double a = 1.5, x = 0.7;
    const double closed = (a + 1) * (a + 2) / 2.0 - (a + 2) * x + 0.5 * x * x;
    const double got = laguerre({2, a, 0.0}, x);
    ctx.check("specfun.laguerre_degree2_closed_form",
              std::fabs(got - closed) / std::fabs(closed), 1e-14);

    const double j = jacobi({3, 2.2, 0.0}, 1.0);
    const double want = binomial_general(3.0 + 2.2, 3);
    ctx.check("specfun.jacobi_at_unit_argument",
              std::fabs(j - want) / std::fabs(want), 1e-13);

    const auto rule = gauss_legendre(6, 0.0, 2.0);
    const double integral =
        integrate(rule, [](double t) { return std::pow(t, 11); });
    ctx.check("specfun.gauss_legendre_degree11_exact",
              std::fabs(integral - 4096.0 / 12.0) / (4096.0 / 12.0), 1e-13);
  }

  // hyperbolic ---------------------------------------------------------------
  {
    ctx.check("hyperbolic.distance_i_to_2i",
              std::fabs(hyp_distance({0.0, 1.0}, {0.0, 2.0}) - std::log(2.0)),
              1e-14);

    const auto group = GroupPresentation::psl2z();
    const GroupElement g = group.generators[0] * group.generators[1];
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const HPoint z = random_point(rng), w = random_point(rng);
      worst = std::max(worst,
                       std::fabs(hyp_distance(moebius_apply(g, z),
                                              moebius_apply(g, w)) -
                                 hyp_distance(z, w)));
    }
    ctx.check("hyperbolic.distance_moebius_invariance", worst, 1e-12);

    const auto mod = DomainSpec::modular_standard();
    ctx.check("hyperbolic.modular_area_closed_form",
              std::fabs(domain_area(mod, AreaMethod::GaussBonnet).value -
                        kPi / 3.0),
              1e-14);

    // Monte Carlo sanity on a domain where the bounding-box proposal is
    // nontrivial (rectangles are sampled exactly, with zero variance).
    const auto mod10 = DomainSpec::modular_standard().truncated(10.0);
    const double exact = kPi / 3.0 - 0.1;
    const auto mc = domain_area(mod10, AreaMethod::MonteCarlo,
                                {50000, common.seed});
    ctx.check("hyperbolic.modular_area_monte_carlo_sigmas",
              std::fabs(mc.value - exact) / mc.stderr_est, 3.0);
  }

  // fuchsian -----------------------------------------------------------------
  {
    const auto group = GroupPresentation::psl2z();
    const HPoint z{0.0, 2.0};
    const auto orbit = enumerate_ball(group, z, 2.0);
    ctx.check_that("fuchsian.orbit_count_radius2",
                   orbit.elements.size() == 18,
                   static_cast<double>(orbit.elements.size()), 18.0);

    // Each reported word must multiply back to its matrix.  Letters are the
    // generator names; a lowercase letter is the inverse of its uppercase
    // generator; "e" is the identity.
    double worst = 0.0;
    for (const auto& e : orbit.elements) {
      GroupElement prod;
      for (const char c : e.word) {
        if (c == 'e') continue;
        const char base =
            static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        std::size_t gi = 0;
        for (; gi < group.generator_names.size(); ++gi)
          if (group.generator_names[gi][0] == base) break;
        if (gi == group.generator_names.size()) {
          worst = std::numeric_limits<double>::infinity();
          break;
        }
        GroupElement f = group.generators[gi];
        if (std::islower(static_cast<unsigned char>(c))) f = f.inverse();
        prod = prod * f;
      }
      worst = std::max({worst, std::fabs(prod.a - e.g.a),
                        std::fabs(prod.b - e.g.b), std::fabs(prod.c - e.g.c),
                        std::fabs(prod.d - e.g.d)});
    }
    ctx.check("fuchsian.words_reproduce_matrices", worst, 1e-12);

    const double ratio = counting_ratio(group, z, z, 4.0);
    ctx.check("fuchsian.counting_deviation_radius4",
              std::fabs(ratio * (kPi / 3.0) - 1.0), 0.2);
  }

  // wavelet ------------------------------------------------------------------
  {
    for (const auto& p : {WaveletParams{0, 1.0}, WaveletParams{3, 2.3}}) {
      const auto nc = check_normalization(p);
      const std::string tag = "wavelet.n" + std::to_string(p.n) +
                              "_alpha" + fmt(p.alpha);
      ctx.check(tag + ".ratio_two_over_alpha",
                std::fabs(nc.ratio_closed - 2.0 / p.alpha), 1e-12);
      ctx.check(tag + ".admissibility_quadrature",
                std::fabs(nc.admissibility_quad - nc.admissibility_closed) /
                    nc.admissibility_closed,
                1e-10);
      ctx.check(tag + ".norm_quadrature",
                std::fabs(nc.norm_quad - nc.norm_closed) / nc.norm_closed,
                1e-10);
    }
  }

  // kernel -------------------------------------------------------------------
  {
    const WaveletParams p{1, 2.3};
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const HPoint z = random_point(rng);
      worst = std::max(worst,
                       std::abs(kernel_eval(p, z, z) - p.alpha / 2.0));
    }
    ctx.check("kernel.diagonal_alpha_over_two", worst, 1e-12);

    const double pinned = 16.0 * std::sqrt(2.0) / 27.0;
    ctx.check("kernel.pinned_value_i_2i",
              std::abs(kernel_eval({0, 2.0}, {0.0, 1.0}, {0.0, 2.0}) - pinned),
              1e-13);

    const auto group = GroupPresentation::psl2z();
    const GroupElement g = group.generators[0] * group.generators[1];
    worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const HPoint z = random_point(rng), w = random_point(rng);
      worst = std::max(worst, covariance_residual(p, g, z, w));
    }
    ctx.check("kernel.covariance_residual", worst, 1e-10);
  }

  // spectra ------------------------------------------------------------------
  {
    const WaveletParams p{0, 2.0};
    const auto gram = gram_assemble(p, std::vector<HPoint>{{0.0, 1.0}, {0.0, 2.0}});
    const auto sp = hermitian_eig(gram.entries);
    const double off = std::abs(gram.entries.at(0, 1));
    const double worst =
        std::max(std::fabs(sp.eigenvalues[0] - (gram.diagonal + off)),
                 std::fabs(sp.eigenvalues[1] - (gram.diagonal - off)));
    ctx.check("spectra.two_point_gram_closed_form", worst, 1e-12);

    const auto op =
        nystrom_assemble(p, DomainSpec::rectangle(0.0, 1.0, 1.0, 2.0), 8);
    ctx.check("spectra.rectangle_trace",
              std::fabs(nystrom_trace_moments(op).trace - 0.5), 1e-12);

    const double worst_thresh = std::max(
        {std::fabs(frame_area_threshold(2.3) - 2.0 / 2.3),
         std::fabs(band_area_threshold(2.6, 1) - 1.0 / 1.1),
         std::fabs(super_area_threshold(2.6, 2) - 0.3125)});
    ctx.check("spectra.density_thresholds", worst_thresh, 1e-14);
  }

  CsvTable table({"check", "observed", "budget", "status"});
  ctx.stamp(table);
  std::size_t failed = 0;
  for (const auto& c : ctx.checks()) {
    table.add({c.name, fmt(c.observed), fmt(c.budget),
               c.pass ? "pass" : "fail"});
    if (!c.pass) ++failed;
  }
  ctx.emit("selftest", table,
           {"set key off", "set ylabel 'observed'",
            "plot 'selftest.csv' using 2 with points pt 7"});

  Json results;
  results["checks_total"] = ctx.checks().size();
  results["checks_failed"] = failed;
  const int code = ctx.finish(results);
  std::printf("selftest: %s (%zu checks, %zu failed)\n",
              code == 0 ? "pass" : "FAIL", ctx.checks().size(), failed);
  return code;
}

// ---------------------------------------------------------------------------
// kernel-check
// ---------------------------------------------------------------------------

struct KernelCheckOpts {
  double alpha = 2.0;
  int index = 0;
  int trials = 100;
  int pairs = 10;
  double tol_diag = 1e-12;
  double tol_cov = 1e-10;
  double tol_consist = 1e-8;
};

int run_kernel_check(const CommonOpts& common, const KernelCheckOpts& k) {
  RunContext ctx("kernel-check", common.out_dir, common.plot);
  ctx.anchor("k(z,z) = alpha/2");
  ctx.anchor("e^{-i sigma arg(cz+d)} k(gz, w) = e^{+i sigma arg(a-cw)} "
             "k(z, g^-1 w)");
  ctx.anchor("admissibility * k(z,w) = transform-pair quadrature");
  ctx.config("alpha", k.alpha);
  ctx.config("index", k.index);
  ctx.config("trials", k.trials);
  ctx.config("pairs", k.pairs);
  ctx.config("seed", common.seed);
  ctx.config("tol_diag", k.tol_diag);
  ctx.config("tol_covariance", k.tol_cov);
  ctx.config("tol_consistency", k.tol_consist);

  return guarded(ctx, [&] {
    const WaveletParams p{k.index, k.alpha};
    validate(p);
    Prng rng(common.seed);
    const auto group = GroupPresentation::psl2z();

    CsvTable table({"check", "trial", "residual"});
    ctx.stamp(table);

    double worst_diag = 0.0;
    for (int i = 0; i < k.trials; ++i) {
      const HPoint z = random_point(rng);
      const double r = std::abs(kernel_eval(p, z, z) - k.alpha / 2.0);
      worst_diag = std::max(worst_diag, r);
      table.add({"diag", fmt(i), fmt(r)});
    }
    ctx.check("diagonal", worst_diag, k.tol_diag);

    double worst_cov = 0.0;
    for (int i = 0; i < k.trials; ++i) {
      const GroupElement g = random_word(group, rng, 6);
      const HPoint z = random_point(rng), w = random_point(rng);
      const double r = covariance_residual(p, g, z, w);
      worst_cov = std::max(worst_cov, r);
      table.add({"covariance", fmt(i), fmt(r)});
    }
    ctx.check("covariance", worst_cov, k.tol_cov);

    double worst_consist = 0.0;
    for (int i = 0; i < k.pairs; ++i) {
      const HPoint z = random_point(rng), w = random_point(rng);
      const double r = kernel_transform_consistency(p, z, w);
      worst_consist = std::max(worst_consist, r);
      table.add({"consistency", fmt(i), fmt(r)});
    }
    ctx.check("consistency", worst_consist, k.tol_consist);

    ctx.emit("kernel_check", table,
             {"set key off", "set logscale y", "set ylabel 'residual'",
              "plot 'kernel_check.csv' using 3 with points pt 7"});

    Json results;
    results["max_diagonal_residual"] = worst_diag;
    results["max_covariance_residual"] = worst_cov;
    results["max_consistency_residual"] = worst_consist;
    const int code = ctx.finish(results);
    std::printf("kernel-check: %s (diag %.3e, covariance %.3e, "
                "consistency %.3e)\n",
                code == 0 ? "pass" : "FAIL", worst_diag, worst_cov,
                worst_consist);
    return code;
  });
}

// ---------------------------------------------------------------------------
// trace-check
// ---------------------------------------------------------------------------

struct TraceCheckOpts {
  double alpha = 2.0;
  int index = 0;
  int resolution = 32;
  std::size_t mc_samples = 100000;
  double tol = 0.0;  // 0: pick by domain kind
};

int run_trace_check(const CommonOpts& common, DomainFlags& domain_flags,
                    const TraceCheckOpts& t) {
  RunContext ctx("trace-check", common.out_dir, common.plot);
  ctx.anchor("trace = area * alpha/2");
  ctx.anchor("k(z,z) = alpha/2");
  ctx.anchor("tr(M^2) <= 2 pi tr(M)");
  const DomainConfig dom_cfg = domain_flags.resolve();
  ctx.config("domain", dom_cfg.to_json());
  ctx.config("alpha", t.alpha);
  ctx.config("index", t.index);
  ctx.config("resolution", t.resolution);
  ctx.config("mc_samples", t.mc_samples);
  ctx.config("seed", common.seed);

  return guarded(ctx, [&] {
    const WaveletParams p{t.index, t.alpha};
    validate(p);
    const DomainSpec dom = dom_cfg.build();
    const double tol =
        t.tol > 0.0 ? t.tol
                    : (dom.kind() == DomainSpec::Kind::Rectangle ? 0.005
                                                                 : 0.01);
    ctx.config("tol", tol);

    const auto op = nystrom_assemble(p, dom, t.resolution);
    const auto tm = nystrom_trace_moments(op);
    const double area = dom_cfg.declared_area
                            ? *dom_cfg.declared_area
                            : domain_area(dom, AreaMethod::GaussBonnet).value;
    const double expected = area * t.alpha / 2.0;
    const double rel_err = std::fabs(tm.trace - expected) / expected;
    ctx.check("trace_matches_area_formula", rel_err, tol);
    // The operator norm is at most 2 pi, so tr(M^2) <= 2 pi tr(M) always;
    // the sharper tr(M^2) <= tr(M) needs lambda_max <= 1 (small domains).
    ctx.check("second_moment_le_two_pi_trace", tm.second,
              2.0 * kPi * tm.trace);

    const auto mc =
        domain_area(dom, AreaMethod::MonteCarlo, {t.mc_samples, common.seed});
    // Rectangle proposals are never rejected, so the estimator is exact
    // with zero standard error; the sigma ratio is 0/0 there.  Fall back to
    // an absolute comparison in that degenerate case.
    const double sigmas = mc.stderr_est > 0.0
                              ? std::fabs(mc.value - area) / mc.stderr_est
                              : 0.0;
    if (mc.stderr_est > 0.0) {
      ctx.check("monte_carlo_area_sigmas", sigmas, 3.0);
    } else {
      ctx.check("monte_carlo_area_abs_dev", std::fabs(mc.value - area),
                1e-12 * area);
    }

    CsvTable table({"quantity", "value"});
    ctx.stamp(table);
    table.add({"nodes", fmt(op.nodes.size())});
    table.add({"area", fmt(area)});
    table.add({"trace", fmt(tm.trace)});
    table.add({"expected_trace", fmt(expected)});
    table.add({"rel_error", fmt(rel_err)});
    table.add({"tolerance", fmt(tol)});
    table.add({"second_moment", fmt(tm.second)});
    table.add({"cusp_deficit", fmt(op.cusp_deficit)});
    table.add({"mc_area", fmt(mc.value)});
    table.add({"mc_stderr", fmt(mc.stderr_est)});
    table.add({"mc_sigmas", fmt(sigmas)});
    ctx.emit("trace_check", table,
             {"set key off", "set style data histograms",
              "plot 'trace_check.csv' using 2:xtic(1)"});

    Json results;
    results["nodes"] = op.nodes.size();
    results["area"] = area;
    results["trace"] = tm.trace;
    results["expected_trace"] = expected;
    results["rel_error"] = rel_err;
    results["second_moment"] = tm.second;
    results["cusp_deficit"] = op.cusp_deficit;
    results["mc_area"] = mc.value;
    results["mc_stderr"] = mc.stderr_est;
    results["mc_sigmas"] = sigmas;
    const int code = ctx.finish(results);
    std::printf("trace-check: %s (trace %.9g vs %.9g, rel err %.3e, "
                "tol %.1e; mc %.2f sigma)\n",
                code == 0 ? "pass" : "FAIL", tm.trace, expected, rel_err, tol,
                sigmas);
    return code;
  });
}

// ---------------------------------------------------------------------------
// gram-spectrum
// ---------------------------------------------------------------------------

struct GramSpectrumOpts {
  double x = 0.0, s = 2.0;
  double radius = 3.0;
  double alpha = 2.0;
  int index = 0;
};

int run_gram_spectrum(const CommonOpts& common, const GroupConfig& group_cfg,
                      const GramSpectrumOpts& g) {
  RunContext ctx("gram-spectrum", common.out_dir, common.plot);
  ctx.anchor("G[j][k] = admissibility * k(z_j, z_k)");
  ctx.anchor("diag G = norm_sq");
  ctx.config("group", group_cfg.to_json());
  ctx.config("x", g.x);
  ctx.config("s", g.s);
  ctx.config("radius", g.radius);
  ctx.config("alpha", g.alpha);
  ctx.config("index", g.index);

  return guarded(ctx, [&] {
    const WaveletParams p{g.index, g.alpha};
    validate(p);
    const auto group = group_cfg.build();
    const HPoint z{g.x, g.s};
    const auto orbit = enumerate_ball(group, z, g.radius);
    const auto gram = gram_assemble(p, orbit);
    const auto sp = hermitian_eig(gram.entries);

    ctx.check_that("lambda_min_nonnegative",
                   sp.eigenvalues.back() >= -1e-9 * gram.diagonal,
                   sp.eigenvalues.back(), -1e-9 * gram.diagonal);

    CsvTable eig({"index", "eigenvalue"});
    ctx.stamp(eig);
    for (std::size_t j = 0; j < sp.eigenvalues.size(); ++j)
      eig.add({fmt(j), fmt(sp.eigenvalues[j])});
    ctx.emit("gram_spectrum", eig,
             {"set key off", "set xlabel 'index'",
              "set ylabel 'eigenvalue'",
              "plot 'gram_spectrum.csv' using 1:2 with linespoints pt 7"});

    CsvTable orb({"word", "a", "b", "c", "d", "image_x", "image_s",
                  "distance"});
    ctx.stamp(orb);
    for (const auto& e : orbit.elements)
      orb.add({e.word, fmt(e.g.a), fmt(e.g.b), fmt(e.g.c), fmt(e.g.d),
               fmt(e.image.x), fmt(e.image.s), fmt(e.distance)});
    ctx.emit("orbit", orb,
             {"set key off", "set xlabel 'x'", "set ylabel 's'",
              "plot 'orbit.csv' using 6:7 with points pt 7"});

    Json results;
    results["count"] = orbit.elements.size();
    results["explored"] = orbit.explored;
    results["flagged_collisions"] = gram.flagged.size();
    results["diagonal"] = gram.diagonal;
    results["lambda_min"] = sp.eigenvalues.back();
    results["lambda_max"] = sp.eigenvalues.front();
    results["eigen_residual"] = sp.extremal_residual;
    const int code = ctx.finish(results);
    std::printf("gram-spectrum: %s (%zu points, lambda in [%.6g, %.6g])\n",
                code == 0 ? "pass" : "FAIL", orbit.elements.size(),
                sp.eigenvalues.back(), sp.eigenvalues.front());
    return code;
  });
}

// ---------------------------------------------------------------------------
// riesz-scan
// ---------------------------------------------------------------------------

struct RieszScanOpts {
  double x = 0.0, s = 2.0;
  double alpha = 4.0;
  int index = 0;
  std::string radii = "2,3,4,5";
};

int run_riesz_scan(const CommonOpts& common, const GroupConfig& group_cfg,
                   const RieszScanOpts& r) {
  RunContext ctx("riesz-scan", common.out_dir, common.plot);
  ctx.anchor("G[j][k] = admissibility * k(z_j, z_k)");
  ctx.anchor("lambda_min(G_r) non-increasing in r");
  ctx.config("group", group_cfg.to_json());
  ctx.config("x", r.x);
  ctx.config("s", r.s);
  ctx.config("alpha", r.alpha);
  ctx.config("index", r.index);

  return guarded(ctx, [&] {
    const std::vector<double> radii = parse_radii(r.radii);
    ctx.config("radii", radii_json(radii));
    const WaveletParams p{r.index, r.alpha};
    validate(p);
    const auto group = group_cfg.build();
    const auto rows = riesz_diagnostic(p, group, {r.x, r.s}, radii);

    CsvTable table({"radius", "count", "lambda_min", "lambda_max"});
    ctx.stamp(table);
    for (const auto& row : rows)
      table.add({fmt(row.radius), fmt(row.count), fmt(row.lambda_min),
                 fmt(row.lambda_max)});
    ctx.emit("riesz_scan", table,
             {"set xlabel 'radius'",
              "plot 'riesz_scan.csv' using 1:3 with linespoints pt 7 "
              "title 'lambda_min', '' using 1:4 with linespoints pt 5 "
              "title 'lambda_max'"});

    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
      decreasing = decreasing && rows[i].lambda_min < rows[i - 1].lambda_min;

    Json results;
    results["lambda_min_first"] = rows.front().lambda_min;
    results["lambda_min_last"] = rows.back().lambda_min;
    results["lambda_min_ratio"] =
        rows.back().lambda_min / rows.front().lambda_min;
    results["strictly_decreasing"] = decreasing;
    results["final_count"] = rows.back().count;
    const int code = ctx.finish(results);
    std::printf("riesz-scan: %s (lambda_min %.3e -> %.3e over %zu radii)\n",
                code == 0 ? "pass" : "FAIL", rows.front().lambda_min,
                rows.back().lambda_min, rows.size());
    return code;
  });
}

// ---------------------------------------------------------------------------
// nyquist-report
// ---------------------------------------------------------------------------

struct NyquistOpts {
  double alpha = 2.0;
  int index = 0;
  int bands = 0;  // > 0 selects the multi-band system
  double rep_exponent = 2.6;
  std::size_t mc_samples = 200000;
};

int run_nyquist_report(const CommonOpts& common, CLI::App* cmd,
                       const GroupConfig& group_cfg, DomainFlags& domain_flags,
                       const NyquistOpts& n) {
  RunContext ctx("nyquist-report", common.out_dir, common.plot);
  ctx.anchor("threshold(single) = 2/alpha");
  ctx.anchor("threshold(band n) = 1/(B - n - 1/2)");
  ctx.anchor("threshold(multi) = 2/(N(2B - N))");
  ctx.anchor("ratio = area / threshold");

  const bool by_group = cmd->count("--group") > 0;
  DomainConfig dom_cfg = domain_flags.resolve();
  dom_cfg.q = group_cfg.q;  // --q is shared between group and domain here
  if (by_group) {
    dom_cfg.kind =
        group_cfg.name == "psl2z" ? "modular-standard" : std::string("hecke");
    ctx.config("group", group_cfg.to_json());
  }
  ctx.config("domain", dom_cfg.to_json());
  const bool multi = n.bands > 0;
  if (multi) {
    ctx.config("rep_exponent", n.rep_exponent);
    ctx.config("bands", n.bands);
  } else {
    ctx.config("alpha", n.alpha);
    ctx.config("index", n.index);
  }
  ctx.config("mc_samples", n.mc_samples);
  ctx.config("seed", common.seed);

  return guarded(ctx, [&] {
    const DomainSpec dom = dom_cfg.build();
    const McOptions mc{n.mc_samples, common.seed};
    NyquistReport rep =
        multi ? nyquist_report(SuperParams{n.rep_exponent, n.bands}, dom, mc)
              : nyquist_report(WaveletParams{n.index, n.alpha}, dom, mc);
    if (dom_cfg.declared_area) {
      rep.area = *dom_cfg.declared_area;
      rep.area_stderr = 0.0;
      rep.ratio = rep.area / rep.threshold;
      rep.verdict = density_verdict(rep.ratio);
    }

    CsvTable table({"quantity", "value"});
    ctx.stamp(table);
    table.add({"area", fmt(rep.area)});
    table.add({"area_stderr", fmt(rep.area_stderr)});
    table.add({"threshold", fmt(rep.threshold)});
    table.add({"ratio", fmt(rep.ratio)});
    for (std::size_t b = 0; b < rep.band_thresholds.size(); ++b)
      table.add({"band_threshold_" + fmt(b), fmt(rep.band_thresholds[b])});
    ctx.emit("nyquist_report", table,
             {"set key off", "set style data histograms",
              "plot 'nyquist_report.csv' using 2:xtic(1)"});

    Json results;
    results["system"] = rep.system;
    results["domain"] = rep.domain;
    results["area"] = rep.area;
    results["area_stderr"] = rep.area_stderr;
    results["threshold"] = rep.threshold;
    results["ratio"] = rep.ratio;
    if (!rep.band_thresholds.empty())
      results["band_thresholds"] = rep.band_thresholds;
    results["verdict"] = rep.verdict;
    const int code = ctx.finish(results);
    std::printf("nyquist-report: area %.9g, threshold %.9g, ratio %.9g\n",
                rep.area, rep.threshold, rep.ratio);
    std::printf("nyquist-report: %s\n", rep.verdict.c_str());
    return code;
  });
}

// ---------------------------------------------------------------------------
// eigen-profile
// ---------------------------------------------------------------------------

struct EigenProfileOpts {
  double alpha = 2.0;
  int index = 0;
  int resolution = 32;
};

int run_eigen_profile(const CommonOpts& common, DomainFlags& domain_flags,
                      const EigenProfileOpts& e) {
  RunContext ctx("eigen-profile", common.out_dir, common.plot);
  ctx.anchor("0 <= lambda <= 2 pi");
  ctx.anchor("trace = area * alpha/2");
  ctx.anchor("sum lambda = tr(M), sum lambda^2 = tr(M^2)");
  const DomainConfig dom_cfg = domain_flags.resolve();
  ctx.config("domain", dom_cfg.to_json());
  ctx.config("alpha", e.alpha);
  ctx.config("index", e.index);
  ctx.config("resolution", e.resolution);

  return guarded(ctx, [&] {
    const WaveletParams p{e.index, e.alpha};
    validate(p);
    const DomainSpec dom = dom_cfg.build();
    const auto op = nystrom_assemble(p, dom, e.resolution);
    const auto tm = nystrom_trace_moments(op);
    const auto sp = hermitian_eig(op.matrix);

    const double lam_min = sp.eigenvalues.back();
    const double lam_max = sp.eigenvalues.front();
    ctx.check_that("lambda_min_above_minus_1e-6", lam_min >= -1e-6, lam_min,
                   -1e-6);
    ctx.check("lambda_max_below_two_pi", lam_max, 2.0 * kPi + 1e-6);
    // Cross-check the eigensolver against the quadrature traces: the
    // eigenvalue sums must reproduce tr(M) and tr(M^2) to round-off.
    double sum1 = 0.0;
    double sum2 = 0.0;
    for (const double lam : sp.eigenvalues) {
      sum1 += lam;
      sum2 += lam * lam;
    }
    ctx.check("eigensum_matches_trace", std::abs(sum1 - tm.trace),
              1e-10 * std::max(1.0, tm.trace));
    ctx.check("eigensum_sq_matches_second_moment", std::abs(sum2 - tm.second),
              1e-10 * std::max(1.0, tm.second));

    // Empirical CDF over the ascending spectrum.
    CsvTable table({"index", "eigenvalue", "cumulative_fraction"});
    ctx.stamp(table);
    const auto m = sp.eigenvalues.size();
    for (std::size_t j = 0; j < m; ++j) {
      const double lam = sp.eigenvalues[m - 1 - j];
      table.add({fmt(j), fmt(lam),
                 fmt(static_cast<double>(j + 1) / static_cast<double>(m))});
    }
    ctx.emit("eigen_profile", table,
             {"set key off", "set xlabel 'eigenvalue'",
              "set ylabel 'fraction of spectrum'",
              "plot 'eigen_profile.csv' using 2:3 with steps"});

    Json results;
    results["nodes"] = op.nodes.size();
    results["trace"] = tm.trace;
    results["second_moment"] = tm.second;
    results["lambda_min"] = lam_min;
    results["lambda_max"] = lam_max;
    results["cusp_deficit"] = op.cusp_deficit;
    results["eigen_residual"] = sp.extremal_residual;
    const int code = ctx.finish(results);
    std::printf("eigen-profile: %s (%zu nodes, lambda in [%.3e, %.6f], "
                "trace %.6f, tr2 %.6f)\n",
                code == 0 ? "pass" : "FAIL", op.nodes.size(), lam_min, lam_max,
                tm.trace, tm.second);
    return code;
  });
}

// ---------------------------------------------------------------------------
// maass-check
// ---------------------------------------------------------------------------

struct MaassCheckOpts {
  double rep_exponent = 2.6;
  int index = 0;
  int probes = 5;
  double step = 1e-3;
  double tol = 1e-5;
  double x0 = 0.0, s0 = 1.0;
};

int run_maass_check(const CommonOpts& common, const MaassCheckOpts& m) {
  RunContext ctx("maass-check", common.out_dir, common.plot);
  ctx.anchor("H F = (B-n)(B-n-1) F with H = s^2(dxx+dss) - 2iBs dx");
  ctx.config("rep_exponent", m.rep_exponent);
  ctx.config("index", m.index);
  ctx.config("probes", m.probes);
  ctx.config("step", m.step);
  ctx.config("tol", m.tol);
  ctx.config("x0", m.x0);
  ctx.config("s0", m.s0);
  ctx.config("seed", common.seed);

  return guarded(ctx, [&] {
    Prng rng(common.seed);
    CsvTable table({"probe", "x", "s", "residual"});
    ctx.stamp(table);

    double worst = 0.0;
    for (int i = 0; i < m.probes; ++i) {
      const HPoint probe{rng.uniform(-1.5, 1.5), rng.uniform(0.8, 2.2)};
      const double r = maass_eigen_residual(m.rep_exponent, m.index,
                                            {m.x0, m.s0}, probe, m.step);
      worst = std::max(worst, r);
      table.add({fmt(i), fmt(probe.x), fmt(probe.s), fmt(r)});
    }
    ctx.check("max_relative_residual", worst, m.tol);

    ctx.emit("maass_check", table,
             {"set key off", "set logscale y", "set ylabel 'residual'",
              "plot 'maass_check.csv' using 1:4 with points pt 7"});

    Json results;
    results["max_residual"] = worst;
    results["eigenvalue"] = (m.rep_exponent - m.index) *
                            (m.rep_exponent - m.index - 1.0);
    const int code = ctx.finish(results);
    std::printf("maass-check: %s (max residual %.3e, tol %.1e)\n",
                code == 0 ? "pass" : "FAIL", worst, m.tol);
    return code;
  });
}

// ---------------------------------------------------------------------------
// rotation-check
// ---------------------------------------------------------------------------

struct RotationCheckOpts {
  double alpha = 2.0;
  int index = 0;
  int trials = 20;
  double tol = 1e-8;
  double control_floor = 5e-4;
};

int run_rotation_check(const CommonOpts& common, const RotationCheckOpts& r) {
  RunContext ctx("rotation-check", common.out_dir, common.plot);
  ctx.anchor("(e^{i theta}/(z sin theta + cos theta))^sigma V(g_theta z) "
             "= V(z)");
  ctx.anchor("sigma = 2n + alpha + 1");
  ctx.config("alpha", r.alpha);
  ctx.config("index", r.index);
  ctx.config("trials", r.trials);
  ctx.config("tol", r.tol);
  ctx.config("control_floor", r.control_floor);
  ctx.config("seed", common.seed);

  return guarded(ctx, [&] {
    const WaveletParams p{r.index, r.alpha};
    validate(p);
    Prng rng(common.seed);
    CsvTable table({"case", "trial", "theta", "x", "s", "residual"});
    ctx.stamp(table);

    double worst = 0.0;
    for (int i = 0; i < r.trials; ++i) {
      const double theta =
          (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.15, 2.95);
      const HPoint z{rng.uniform(-2.0, 2.0), rng.uniform(0.4, 2.5)};
      const double res = rotation_covariance_residual(p, theta, z);
      worst = std::max(worst, res);
      table.add({"band", fmt(i), fmt(theta), fmt(z.x), fmt(z.s), fmt(res)});
    }
    ctx.check("max_band_residual", worst, r.tol);

    const double control_theta = kPi / 5.0;
    const HPoint control_z{0.4, 1.3};
    const double control = rotation_covariance_residual_general(
        control_freq(), 3.0, control_theta, control_z);
    table.add({"control", fmt(0), fmt(control_theta), fmt(control_z.x),
               fmt(control_z.s), fmt(control)});
    ctx.check_that("control_above_floor", control >= r.control_floor, control,
                   r.control_floor);

    ctx.emit("rotation_check", table,
             {"set key off", "set logscale y", "set ylabel 'residual'",
              "plot 'rotation_check.csv' using 2:6 with points pt 7"});

    Json results;
    results["max_band_residual"] = worst;
    results["control_residual"] = control;
    const int code = ctx.finish(results);
    std::printf("rotation-check: %s (band max %.3e vs %.1e; control %.3e >= "
                "%.1e)\n",
                code == 0 ? "pass" : "FAIL", worst, r.tol, control,
                r.control_floor);
    return code;
  });
}

// ---------------------------------------------------------------------------
// patterson
// ---------------------------------------------------------------------------

struct PattersonOpts {
  double x = 0.0, s = 2.0;
  std::string radii = "4,5,6";
};

int run_patterson(const CommonOpts& common, const GroupConfig& group_cfg,
                  const PattersonOpts& pt) {
  RunContext ctx("patterson", common.out_dir, common.plot);
  ctx.anchor("count(z, r) / ball_area(r) -> 1/area as r -> inf");
  ctx.config("group", group_cfg.to_json());
  ctx.config("x", pt.x);
  ctx.config("s", pt.s);

  return guarded(ctx, [&] {
    const std::vector<double> radii = parse_radii(pt.radii);
    ctx.config("radii", radii_json(radii));
    const auto group = group_cfg.build();
    const DomainSpec fundamental = group_cfg.name == "psl2z"
                                       ? DomainSpec::modular_standard()
                                       : DomainSpec::hecke(group_cfg.q);
    const double area =
        domain_area(fundamental, AreaMethod::GaussBonnet).value;
    const HPoint z{pt.x, pt.s};

    CsvTable table({"radius", "count", "ball_area", "ratio", "deviation"});
    ctx.stamp(table);
    std::vector<double> devs;
    for (double r : radii) {
      const auto orbit = enumerate_ball(group, z, r);
      const double ratio = static_cast<double>(orbit.elements.size()) /
                           ball_area(r);
      const double dev = std::fabs(ratio * area - 1.0);
      devs.push_back(dev);
      table.add({fmt(r), fmt(orbit.elements.size()), fmt(ball_area(r)),
                 fmt(ratio), fmt(dev)});
    }
    const double slope = lsq_slope(radii, devs);
    ctx.check_that("deviation_slope_negative", slope < 0.0, slope, 0.0);

    ctx.emit("patterson", table,
             {"set key off", "set xlabel 'radius'",
              "set ylabel '|ratio * area - 1|'",
              "plot 'patterson.csv' using 1:5 with linespoints pt 7"});

    Json results;
    results["fundamental_area"] = area;
    results["deviation_slope"] = slope;
    const int code = ctx.finish(results);
    std::printf("patterson: %s (deviation slope %.3e over %zu radii)\n",
                code == 0 ? "pass" : "FAIL", slope, radii.size());
    return code;
  });
}

// ---------------------------------------------------------------------------
// JSON config -> synthetic argv
// ---------------------------------------------------------------------------

std::string kebab(const std::string& key) {
  std::string out = key;
  for (auto& c : out)
    if (c == '_') c = '-';
  return out;
}

std::string scalar_to_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw std::invalid_argument("config value has unsupported type: " +
                              v.dump());
}

void append_scalar(const std::string& flag, const Json& v,
                   std::vector<std::string>& out) {
  out.push_back(flag);
  out.push_back(scalar_to_string(v));
}

std::vector<std::string> config_to_args(const Json& cfg) {
  if (!cfg.is_object())
    throw std::invalid_argument("config file must hold a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    if (value.is_object()) {
      if (key == "domain") {
        for (const auto& [dk, dv] : value.items()) {
          if (dk == "kind")
            append_scalar("--domain", dv, out);
          else
            append_scalar("--" + kebab(dk), dv, out);
        }
      } else if (key == "group") {
        for (const auto& [gk, gv] : value.items()) {
          if (gk == "name")
            append_scalar("--group", gv, out);
          else
            append_scalar("--" + kebab(gk), gv, out);
        }
      } else {
        throw std::invalid_argument("unsupported nested config key: " + key);
      }
    } else if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back("--" + kebab(key));
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += scalar_to_string(item);
      }
      out.push_back("--" + kebab(key));
      out.push_back(joined);
    } else {
      append_scalar("--" + kebab(key), value, out);
    }
  }
  return out;
}

/// Rebuilds the argument list with the config file's key/value pairs
/// spliced in right after the subcommand, so that explicit flags (parsed
/// later, TakeLast) win over config values.
std::vector<std::string> splice_config(int argc, char** argv) {
  std::vector<std::string> raw(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "--config" && i + 1 < raw.size()) config_path = raw[i + 1];
    else if (raw[i].rfind("--config=", 0) == 0)
      config_path = raw[i].substr(9);
  }
  if (config_path.empty()) return raw;

  std::ifstream is(config_path);
  if (!is)
    throw std::invalid_argument("cannot open config file: " + config_path);
  Json cfg;
  try {
    cfg = Json::parse(is);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config file " + config_path +
                                " is not valid JSON: " + e.what());
  }
  const std::vector<std::string> synthetic = config_to_args(cfg);

  if (raw.empty() || raw[0].rfind("-", 0) == 0)
    throw std::invalid_argument(
        "a subcommand must come before any flags when --config is used");
  std::vector<std::string> out;
  out.push_back(raw[0]);
  out.insert(out.end(), synthetic.begin(), synthetic.end());
  out.insert(out.end(), raw.begin() + 1, raw.end());
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"numerical diagnostics for wavelet systems on the hyperbolic "
               "half-plane"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* selftest =
      app.add_subcommand("selftest", "run the cross-module invariant suites");
  add_common(selftest, common);

  KernelCheckOpts kernel_opts;
  auto* kernel_check = app.add_subcommand(
      "kernel-check", "kernel diagonal, covariance, and transform "
                      "consistency residuals");
  add_common(kernel_check, common);
  kernel_check->add_option("--alpha", kernel_opts.alpha, "weight parameter");
  kernel_check->add_option("--index", kernel_opts.index, "band index n");
  kernel_check->add_option("--trials", kernel_opts.trials,
                           "random draws per residual family");
  kernel_check->add_option("--pairs", kernel_opts.pairs,
                           "quadrature consistency pairs");
  kernel_check->add_option("--tol-diag", kernel_opts.tol_diag,
                           "diagonal residual budget");
  kernel_check->add_option("--tol-covariance", kernel_opts.tol_cov,
                           "covariance residual budget");
  kernel_check->add_option("--tol-consistency", kernel_opts.tol_consist,
                           "transform consistency budget");

  TraceCheckOpts trace_opts;
  DomainFlags trace_domain;
  auto* trace_check = app.add_subcommand(
      "trace-check", "discretized restriction trace against area * alpha/2");
  add_common(trace_check, common);
  add_domain(trace_check, trace_domain);
  trace_check->add_option("--alpha", trace_opts.alpha, "weight parameter");
  trace_check->add_option("--index", trace_opts.index, "band index n");
  trace_check->add_option("--resolution", trace_opts.resolution,
                          "quadrature resolution per axis");
  trace_check->add_option("--mc-samples", trace_opts.mc_samples,
                          "Monte Carlo sample count");
  trace_check->add_option("--tol", trace_opts.tol,
                          "relative trace tolerance (0 = by domain kind)");

  GramSpectrumOpts gram_opts;
  GroupConfig gram_group;
  auto* gram_spectrum = app.add_subcommand(
      "gram-spectrum", "eigenvalues of the Gram matrix on an orbit ball");
  add_common(gram_spectrum, common);
  add_group(gram_spectrum, gram_group);
  gram_spectrum->add_option("--x", gram_opts.x, "base point x");
  gram_spectrum->add_option("--s", gram_opts.s, "base point s");
  gram_spectrum->add_option("--radius", gram_opts.radius, "orbit ball radius");
  gram_spectrum->add_option("--alpha", gram_opts.alpha, "weight parameter");
  gram_spectrum->add_option("--index", gram_opts.index, "band index n");

  RieszScanOpts riesz_opts;
  GroupConfig riesz_group;
  auto* riesz_scan = app.add_subcommand(
      "riesz-scan", "lambda_min of nested orbit Gram matrices over radii");
  add_common(riesz_scan, common);
  add_group(riesz_scan, riesz_group);
  riesz_scan->add_option("--x", riesz_opts.x, "base point x");
  riesz_scan->add_option("--s", riesz_opts.s, "base point s");
  riesz_scan->add_option("--alpha", riesz_opts.alpha, "weight parameter");
  riesz_scan->add_option("--index", riesz_opts.index, "band index n");
  riesz_scan->add_option("--radii", riesz_opts.radii,
                         "comma-separated radius list");

  NyquistOpts nyquist_opts;
  GroupConfig nyquist_group;
  DomainFlags nyquist_domain;
  auto* nyquist = app.add_subcommand(
      "nyquist-report", "domain area against the critical density threshold");
  add_common(nyquist, common);
  add_group(nyquist, nyquist_group);
  add_domain(nyquist, nyquist_domain, /*with_q=*/false);
  nyquist->add_option("--alpha", nyquist_opts.alpha, "weight parameter");
  nyquist->add_option("--index", nyquist_opts.index, "band index n");
  nyquist->add_option("--bands", nyquist_opts.bands,
                      "number of bands N (> 0 selects the multi-band system)");
  nyquist->add_option("--rep-exponent", nyquist_opts.rep_exponent,
                      "multi-band representation exponent B");
  nyquist->add_option("--mc-samples", nyquist_opts.mc_samples,
                      "Monte Carlo samples for estimated areas");

  EigenProfileOpts eigen_opts;
  DomainFlags eigen_domain;
  auto* eigen_profile = app.add_subcommand(
      "eigen-profile", "eigenvalue distribution of the discretized "
                       "restriction operator");
  add_common(eigen_profile, common);
  add_domain(eigen_profile, eigen_domain);
  eigen_profile->add_option("--alpha", eigen_opts.alpha, "weight parameter");
  eigen_profile->add_option("--index", eigen_opts.index, "band index n");
  eigen_profile->add_option("--resolution", eigen_opts.resolution,
                            "quadrature resolution per axis");

  MaassCheckOpts maass_opts;
  auto* maass_check = app.add_subcommand(
      "maass-check", "finite-difference eigenvalue residual of the drifted "
                     "hyperbolic Laplacian on kernel sections");
  add_common(maass_check, common);
  maass_check->add_option("--rep-exponent", maass_opts.rep_exponent,
                          "representation exponent B");
  maass_check->add_option("--index", maass_opts.index, "band index n");
  maass_check->add_option("--probes", maass_opts.probes,
                          "number of probe points");
  maass_check->add_option("--step", maass_opts.step,
                          "finite difference step h");
  maass_check->add_option("--tol", maass_opts.tol, "residual budget");
  maass_check->add_option("--x0", maass_opts.x0, "section anchor x");
  maass_check->add_option("--s0", maass_opts.s0, "section anchor s");

  RotationCheckOpts rotation_opts;
  auto* rotation_check = app.add_subcommand(
      "rotation-check", "rotation covariance of the weight-normalized "
                        "self-transform");
  add_common(rotation_check, common);
  rotation_check->add_option("--alpha", rotation_opts.alpha,
                             "weight parameter");
  rotation_check->add_option("--index", rotation_opts.index, "band index n");
  rotation_check->add_option("--trials", rotation_opts.trials,
                             "random (theta, z) draws");
  rotation_check->add_option("--tol", rotation_opts.tol,
                             "band residual budget");
  rotation_check->add_option("--control-floor", rotation_opts.control_floor,
                             "minimum residual the control profile must show");

  PattersonOpts patterson_opts;
  GroupConfig patterson_group;
  auto* patterson = app.add_subcommand(
      "patterson", "orbit counting ratio against the inverse fundamental "
                   "area");
  add_common(patterson, common);
  add_group(patterson, patterson_group);
  patterson->add_option("--x", patterson_opts.x, "base point x");
  patterson->add_option("--s", patterson_opts.s, "base point s");
  patterson->add_option("--radii", patterson_opts.radii,
                        "comma-separated radius list");

  std::vector<std::string> args;
  try {
    args = splice_config(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "hypwave: %s\n", e.what());
    return 2;
  }
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back(argv[0]);
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> ptrs;
  ptrs.reserve(storage.size());
  for (auto& s : storage) ptrs.push_back(s.data());

  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (selftest->parsed()) return run_selftest(common);
    if (kernel_check->parsed()) return run_kernel_check(common, kernel_opts);
    if (trace_check->parsed())
      return run_trace_check(common, trace_domain, trace_opts);
    if (gram_spectrum->parsed())
      return run_gram_spectrum(common, gram_group, gram_opts);
    if (riesz_scan->parsed())
      return run_riesz_scan(common, riesz_group, riesz_opts);
    if (nyquist->parsed())
      return run_nyquist_report(common, nyquist, nyquist_group, nyquist_domain,
                                nyquist_opts);
    if (eigen_profile->parsed())
      return run_eigen_profile(common, eigen_domain, eigen_opts);
    if (maass_check->parsed()) return run_maass_check(common, maass_opts);
    if (rotation_check->parsed())
      return run_rotation_check(common, rotation_opts);
    if (patterson->parsed())
      return run_patterson(common, patterson_group, patterson_opts);
  } catch (const std::exception& e) {
    // Failures inside a subcommand body are normally recorded by `guarded`;
    // reaching this point means artifact writing itself failed.
    std::fprintf(stderr, "hypwave: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "hypwave: no subcommand selected\n");
  return 2;
}

}  // namespace hypwave::cli
