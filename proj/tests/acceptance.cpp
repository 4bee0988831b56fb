// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hessfree/baillon_haddad.hpp"
#include "hessfree/estimate.hpp"
#include "hessfree/slices.hpp"

using namespace hessfree;

namespace {

const std::vector<std::string> kKnownL{"affine", "quadratic", "cubic1d", "separable_cubic", "poly_map_2d"};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SearchBudget budget(std::size_t pairs, std::size_t configs, std::size_t ascent) {
  SearchBudget b;
  b.two_point_pairs = pairs;
  b.random_configs = configs;
  b.ascent_steps = ascent;
  b.seed = 42;
  return b;
}

// 64 best-t pairs (53 evaluations each) + 5000 configurations + 1000 ascent
// steps: at most 9392 probe evaluations.
SearchBudget budget_1e4() { return budget(64, 5000, 1000); }

// Soundness at the known constant over 1e5 random probes.
Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const std::string& name : kKnownL) {
    const VectorOracle F = probe_map(builtin(name));
    const double L = *F.known_L;
    SearchBudget b = budget(0, 100000, 0);
    b.max_n = 10;
    SearchTrace trace;
    const FalsifyOutcome f = falsify(F, L, b, {}, &trace);
    std::size_t literal = 0;
    for (const ProbeRecord& r : trace.records) {
      if (r.gap > 0.5 * L * r.spread * (1.0 + 1e-8) + 1e-12) ++literal;
    }
    o.require(!f.certificate, name + ": violation certificate at known L");
    o.require(literal == 0, name + ": " + std::to_string(literal) + " probes exceed the tolerance");
    o.require(trace.records.size() == 100000, name + ": probe count " + std::to_string(trace.records.size()));
  }
  const double t = seconds_since(t0);
  o.require(t <= 60.0, "runtime " + fmt("%.1f s", t));
  if (o.pass) o.detail = "5 oracles x 1e5 probes, 0 violations, " + fmt("%.1f s", t);
  return o;
}

// Converse recovery of the constant.
Outcome criterion_2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const VectorOracle cubic = probe_map(builtin("cubic1d"));
  for (const SearchBudget& b : {budget(1, 0, 0), budget(1, 100, 10), budget_1e4(), SearchBudget{}}) {
    const double L = estimate_L(cubic, b).L_lower;
    o.require(std::abs(L - 1.0) <= 1e-9, "cubic1d L_lower " + fmt("%.17g", L));
  }
  const LowerBoundCertificate sep = estimate_L(probe_map(builtin("separable_cubic")), budget_1e4());
  o.require(sep.probes_used <= 10000, "separable_cubic used " + std::to_string(sep.probes_used));
  o.require(sep.L_lower >= 2.85 && sep.L_lower <= 3.0 * (1.0 + 1e-9),
            "separable_cubic L_lower " + fmt("%.17g", sep.L_lower));
  const double aff = estimate_L(probe_map(builtin("affine")), budget_1e4()).L_lower;
  o.require(aff <= 1e-9, "affine L_lower " + fmt("%.3g", aff));
  const double t = seconds_since(t0);
  o.require(t <= 30.0, "runtime " + fmt("%.1f s", t));
  if (o.pass) {
    o.detail = "cubic1d 1 +- 1e-9, separable_cubic " + fmt("%.10f", sep.L_lower) + ", affine " +
               fmt("%.2g", aff) + ", " + fmt("%.1f s", t);
  }
  return o;
}

// Falsification of a halved constant, none at the true one.
Outcome criterion_3() {
  Outcome o;
  const VectorOracle F = probe_map(builtin("cubic1d"));
  const FalsifyOutcome half = falsify(F, 0.5, SearchBudget{});
  o.require(half.certificate.has_value(), "no certificate at claimed_L = 0.5");
  o.require(half.probes_used <= 1000, "certificate after " + std::to_string(half.probes_used) + " probes");
  if (half.certificate) {
    o.require(replays(F, half.certificate->witness), "witness does not replay");
    o.require(half.certificate->margin > half.certificate->tolerance, "margin within tolerance");
  }
  // 1024 x 53 + 45000 + 728 = 1e5 probe evaluations
  const FalsifyOutcome full = falsify(F, 1.0, budget(1024, 45000, 728));
  o.require(!full.certificate, "violation at claimed_L = 1");
  o.require(full.probes_used >= 99000, "only " + std::to_string(full.probes_used) + " probes at claimed_L = 1");
  if (o.pass) {
    o.detail = "violation after " + std::to_string(half.probes_used) + " probe(s); none in " +
               std::to_string(full.probes_used) + " probes at L = 1";
  }
  return o;
}

// Probe estimate against the finite-difference estimate.
Outcome criterion_4() {
  Outcome o;
  std::string summary;
  for (const std::string& name : kKnownL) {
    const Oracle oracle = builtin(name);
    const double L = *oracle_known_L(oracle);
    const CrossValidation cv = cross_validate(oracle, budget_1e4(), 10000);
    o.require(std::abs(cv.L_probe - cv.L_fd) <= 0.05 * std::max(L, 1.0),
              name + ": L_probe " + fmt("%.6g", cv.L_probe) + " vs L_fd " + fmt("%.6g", cv.L_fd));
    if (name == "cubic1d" || name == "separable_cubic") {
      for (double v : {cv.L_probe, cv.L_fd}) {
        o.require(v >= 0.9 * L && v <= 1.0001 * L, name + ": estimate " + fmt("%.8g", v) + " outside [0.9, 1.0001] L");
      }
    }
    summary += name + " " + fmt("%.5g", cv.L_probe) + "/" + fmt("%.5g", cv.L_fd) + " ";
  }
  if (o.pass) o.detail = "L_probe/L_fd: " + summary;
  return o;
}

// Gradient of the slice y* . grad f for the known-L builtins, in closed form.
VectorMap analytic_slice_gradient(const std::string& name, const Point& y) {
  if (name == "cubic1d") return [y](const Point& x) { return Point{y[0] * x[0]}; };
  if (name == "separable_cubic") {
    return [y](const Point& x) { return Point{3.0 * y[0] * x[0], y[1] * x[1]}; };
  }
  // poly_map_2d: y1 x1^2 + y2 x1 x2
  return [y](const Point& x) { return Point{2.0 * y[0] * x[0] + y[1] * x[1], y[1] * x[0]}; };
}

// Convexity split and cocoercivity for cubic1d, expansion bound on 1e4 pairs.
Outcome criterion_5() {
  Outcome o;
  const VectorOracle F = probe_map(builtin("cubic1d"));
  DomainSampler box;
  for (double sign : {1.0, -1.0}) {
    const Functional ystar(Point{sign});
    const ScalarMap phi = slice(F, ystar);
    const VectorMap grad_phi = analytic_slice_gradient("cubic1d", ystar.coeffs());
    for (double L : {1.0, 0.5}) {
      const bool expect_pass = L == 1.0;
      const ConvexitySplitReport split = convexity_split_check(phi, 1, L, box, 2000);
      const VectorMap G = [L, grad_phi](const Point& x) { return L * x + grad_phi(x); };
      const CocoercivityReport coco = check_cocoercive(G, 1, 2.0 * L, box, 2000);
      const std::string tag = "y*=" + fmt("%+g", sign) + " L=" + fmt("%g", L);
      o.require(split.passed == expect_pass, tag + ": convexity split " + (split.passed ? "passed" : "failed"));
      o.require(coco.passed == expect_pass, tag + ": cocoercivity " + (coco.passed ? "passed" : "failed"));
      if (!expect_pass) {
        const ConvexityWitness& w = split.plus.max_violation > split.minus.max_violation ? split.plus : split.minus;
        const double s = w.max_violation == split.plus.max_violation ? 1.0 : -1.0;
        const ScalarMap g = [L, s, phi](const Point& x) { return 0.5 * L * inner(x, x) + s * phi(x); };
        o.require(w.pair.has_value(), tag + ": no convexity witness");
        if (w.pair) {
          const double v = midpoint_convexity_violation(g, w.pair->first, w.pair->second);
          o.require(v == w.max_violation && v > split.tolerance, tag + ": convexity witness does not replay");
        }
        o.require(coco.witness_pair.has_value(), tag + ": no cocoercivity witness");
        if (coco.witness_pair) {
          const double r = cocoercivity_residual(G, 2.0 * L, coco.witness_pair->first, coco.witness_pair->second);
          o.require(r == coco.min_residual && r < -coco.tolerance, tag + ": cocoercivity witness does not replay");
        }
      }
    }
  }
  std::size_t pairs = 0;
  for (const std::string& name : {std::string("cubic1d"), std::string("separable_cubic"), std::string("poly_map_2d")}) {
    const VectorOracle G = probe_map(builtin(name));
    const auto functionals = sample_unit_functionals(G.dim_out, 16, 42);
    for (std::uint64_t i = 0; i < 10000; ++i) {
      const Functional& ystar = functionals[i % functionals.size()];
      const auto [x, y] = box.sample_pair(Stream::CocoercivityPairs, i, G.dim_in);
      const ExpansionCheck e = lipschitz_from_cocoercivity(analytic_slice_gradient(name, ystar.coeffs()), *G.known_L, x, y);
      ++pairs;
      if (!(e.lhs <= e.rhs * (1.0 + 1e-8))) {
        o.require(false, name + ": lhs " + fmt("%.17g", e.lhs) + " > rhs " + fmt("%.17g", e.rhs));
        break;
      }
    }
  }
  if (o.pass) o.detail = "pass at L=1, replayable failures at L=0.5; expansion bound on " + std::to_string(pairs) + " pairs";
  return o;
}

// Reconstruction, derivative norm, Lipschitz transfer.
Outcome criterion_6() {
  Outcome o;
  DomainSampler box;
  double worst = 0.0;
  for (const std::string& name : builtin_names()) {
    const ReconstructionReport r = reconstruction_check(probe_map(builtin(name)), box, 200, 16);
    worst = std::max(worst, r.max_jvp_rel_error);
    o.require(r.max_jvp_rel_error <= 1e-5, name + ": jvp rel error " + fmt("%.3g", r.max_jvp_rel_error));
    o.require(r.passed, name + ": reconstruction check failed");
  }
  const DerivativeNormEstimate d = derivative_norm_via_functionals(
      probe_map(builtin("poly_map_2d")), Point{1, 0}, Point{0, 0}, 1000, 8);
  o.require(std::abs(d.value - 2.0) <= 1e-3, "derivative norm " + fmt("%.10g", d.value));
  for (const std::string& name : kKnownL) {
    const VectorOracle F = probe_map(builtin(name));
    const LipschitzTransferReport t = lipschitz_transfer_check(F, *F.known_L, box, 1000, 1000);
    o.require(t.passed && t.pairs_tested == 1000, name + ": transfer max ratio " + fmt("%.10g", t.max_ratio));
  }
  if (o.pass) {
    o.detail = "max jvp rel error " + fmt("%.2g", worst) + ", |D| = " + fmt("%.8f", d.value) +
               ", transfer holds on 1e3 pairs";
  }
  return o;
}

bool rel_close(double a, double b, double tol, double floor = 0.0) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor});
}

// Spread identity and invariances on 1e4 randomized cases each.
Outcome criterion_7() {
  Outcome o;
  const VectorOracle F = probe_map(builtin("separable_cubic"));
  std::size_t cases = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    Rng rng = make_rng(7, Stream::RandomConfigs, i);
    const std::size_t d = 2;
    const std::size_t n = 2 + i % 7;
    std::vector<Point> pts;
    for (std::size_t k = 0; k < n; ++k) pts.push_back(uniform_ball_point(rng, d, 5.0));
    const SimplexWeights w = dirichlet_uniform(rng, n);
    std::vector<double> wv(w.values().begin(), w.values().end());
    const Configuration c(pts, w);
    const double s = pair_spread(c);
    const ProbeResult base = jensen_probe(F, c);
    const double gap_floor = 1e-12 * (1.0 + base.output_scale);

    // two-point identity
    const double t = uniform01(rng);
    const Point& x = pts[0];
    const Point& y = pts[1];
    const double lhs = pair_spread(Configuration({x, y}, {1.0 - t, t}));
    const double xt = norm2(x + t * (y - x));
    const double rhs = (1.0 - t) * inner(x, x) + t * inner(y, y) - xt * xt;
    o.require(rel_close(lhs, rhs, 1e-10), "identity case " + std::to_string(i));

    // permutation: rotate by i
    std::vector<Point> pp(n, pts[0]);
    std::vector<double> pw(n);
    for (std::size_t k = 0; k < n; ++k) {
      pp[k] = pts[(k + i) % n];
      pw[k] = wv[(k + i) % n];
    }
    const Configuration perm(pp, SimplexWeights(pw));
    const ProbeResult pr = jensen_probe(F, perm);
    o.require(rel_close(pair_spread(perm), s, 1e-10) && rel_close(pr.gap, base.gap, 1e-10, gap_floor),
              "permutation case " + std::to_string(i));

    // weight splitting on point i % n
    const std::size_t j = i % n;
    const double a = 0.1 + 0.8 * uniform01(rng);
    auto sp = pts;
    auto sw = wv;
    sp.push_back(pts[j]);
    sw.push_back((1.0 - a) * wv[j]);
    sw[j] = a * wv[j];
    const Configuration split(sp, SimplexWeights(sw));
    const ProbeResult sr = jensen_probe(F, split);
    o.require(rel_close(pair_spread(split), s, 1e-10) && rel_close(sr.gap, base.gap, 1e-10, gap_floor),
              "splitting case " + std::to_string(i));

    // zero-weight point
    auto zp = pts;
    auto zw = wv;
    zp.push_back(uniform_ball_point(rng, d, 5.0));
    zw.push_back(0.0);
    const Configuration zero(zp, SimplexWeights(zw));
    const ProbeResult zr = jensen_probe(F, zero);
    o.require(rel_close(pair_spread(zero), s, 1e-10), "zero-weight spread, case " + std::to_string(i));
    o.require(rel_close(zr.gap, base.gap, 1e-10, gap_floor),
              "zero-weight gap " + fmt("%.17g", zr.gap) + " vs " + fmt("%.17g", base.gap) + ", case " + std::to_string(i));
    o.require(convex_combination(zero) == convex_combination(c), "zero-weight mean, case " + std::to_string(i));

    // alpha^2 scaling
    const double alpha = 0.05 + 4.0 * uniform01(rng);
    std::vector<Point> ap;
    for (const Point& p : pts) ap.push_back(alpha * p);
    o.require(rel_close(pair_spread(Configuration(ap, w)), alpha * alpha * s, 1e-10),
              "scaling case " + std::to_string(i));
    ++cases;
    if (!o.pass) break;
  }
  if (o.pass) o.detail = std::to_string(cases) + " cases x 5 properties within 1e-10 relative";
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string without_wall_time(const std::string& text) {
  // keys are sorted, so wall_time_s is the last member
  static const std::regex line(R"(,\n\s*"wall_time_s": [^\n]*)");
  return std::regex_replace(text, line, "");
}

// Byte-identical verify reports from two CLI runs.
Outcome criterion_8() {
  Outcome o;
  const std::string dir = HESSFREE_ACCEPT_DIR;
  const std::string out = dir + "/determinism.json";
  const std::string cmd = std::string("\"") + HESSFREE_CLI_PATH + "\"" +
                          " verify --oracle separable_cubic --params 3,1 --L 3 --seed 42 --pair-budget 500" +
                          " --out \"" + out + "\"";
  std::remove(out.c_str());
  const int ra = std::system(cmd.c_str());
  const std::string ta = read_file(out);
  std::remove(out.c_str());
  const int rb = std::system(("HESSFREE_THREADS=3 " + cmd).c_str());
  const std::string tb = read_file(out);
  o.require(ra == 0 && rb == 0, "cli exit status " + std::to_string(ra) + "/" + std::to_string(rb));
  o.require(!ta.empty() && !tb.empty(), "missing report");
  o.require(ta.find("\"wall_time_s\"") != std::string::npos, "report has no wall_time_s");
  const std::string sa = without_wall_time(ta);
  const std::string sb = without_wall_time(tb);
  o.require(sa == sb, "reports differ");
  try {
    auto ja = nlohmann::json::parse(sa);
    o.require(!ja.contains("wall_time_s") && ja["exit_code"] == 0, "unexpected report content");
  } catch (const std::exception& e) {
    o.require(false, std::string("report is not JSON after removing wall time: ") + e.what());
  }
  if (o.pass) o.detail = std::to_string(sa.size()) + " identical bytes (1 vs 3 workers)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"soundness at known L", criterion_1},
      {"converse recovery", criterion_2},
      {"falsification", criterion_3},
      {"cross-validation", criterion_4},
      {"convexity split and cocoercivity", criterion_5},
      {"slice reconstruction", criterion_6},
      {"spread identity and invariances", criterion_7},
      {"determinism", criterion_8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s [%zu] %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
