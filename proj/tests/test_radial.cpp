#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "radsing/errors.hpp"
#include "radsing/radial.hpp"

using namespace radsing;

namespace {
ProblemSpec power_spec(int N = 3, double p = 2, double q = 2) {
  ProblemSpec s;
  s.N = N;
  s.p = p;
  s.q = q;
  return s;
}

ProblemSpec weighted_spec() {
  ProblemSpec s = power_spec(4, 3, 2.5);
  s.theta = 0.5;
  s.sigma = -0.5;
  s.L_A = rv::log_pow(1.0, rv::Orientation::AtZero);
  s.L_b = rv::log_pow(-1.0, rv::Orientation::AtZero);
  return s;
}

std::vector<double> x_grid(double x0, double x1, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(x0 + (x1 - x0) * i / (n - 1));
  return xs;
}
}  // namespace

TEST_CASE("homogeneous equation reproduces lambda Phi + const") {
  for (const ProblemSpec& s : {power_spec(), weighted_spec()}) {
    const Problem pb = make_problem(s);
    RadialOptions opt;
    opt.zero_source = true;
    const double lam = 1.7, c = 0.3, r0 = 0.6;
    const double w0 = -std::pow(lam, s.p - 1) / surface_area(s.N);
    const RadialSolution sol = integrate_inward(pb, r0, lam * phi(pb.op, r0) + c, w0, 1e-6, opt);
    REQUIRE_FALSE(sol.truncated);
    for (size_t i = 0; i < sol.size(); i += 7) {
      const double ref = lam * phi(pb.op, sol.r(i)) + c;
      CHECK(std::abs(sol.v(i) / ref - 1) <= 1e-8);
      CHECK(sol.w(i) == doctest::Approx(w0).epsilon(1e-8));
    }
  }
}

TEST_CASE("flux is conserved against the source") {
  for (const ProblemSpec& s : {power_spec(), weighted_spec()}) {
    const Problem pb = make_problem(s);
    const RadialSolution sol = integrate_inward(pb, 1.0, 1.0, -0.5, 1e-4);
    REQUIRE_FALSE(sol.truncated);
    // accumulated source against the flux difference, node by node
    for (size_t i = 1; i < sol.size(); i += 5) {
      const double dw = sol.w(0) - sol.w(i), src = sol.I[i] - sol.I[0];
      CHECK(std::abs(dw - src) <= 1e-8 * std::max(std::abs(sol.w(i)), std::abs(sol.w(0))));
    }
    // independent quadrature of r^{N-1+sigma} L_b h(v) on the interpolated profile (limited by
    // the cubic interpolation between steps)
    const double x1 = 2.0, x2 = 5.0;
    auto f = [&](double x) {
      const double U = sol.ln_v_at(x);
      return std::exp(-(s.N + s.sigma) * x + pb.L_b.log_x(x) + pb.ln_h(U));
    };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, x1, x2, 12, 1e-12);
    CHECK(std::abs(sol.w_at(x1) - sol.w_at(x2) - integral) <= 1e-7 * std::abs(sol.w_at(x2)));
  }
}

TEST_CASE("larger initial value gives a pointwise larger solution") {
  const Problem pb = make_problem(weighted_spec());
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(0.2, 2.0), w(-1.0, 0.2);
  for (int trial = 0; trial < 8; ++trial) {
    const double v0 = u(rng), w0 = w(rng), bump = 1.0 + 0.5 * u(rng);
    const RadialSolution a = integrate_inward(pb, 1.0, v0, w0, 1e-4);
    const RadialSolution b = integrate_inward(pb, 1.0, v0 * bump, w0, 1e-4);
    const double xe = std::min(a.x_max(), b.x_max());
    for (double x : x_grid(0.0, xe, 60)) CHECK(b.ln_v_at(x) >= a.ln_v_at(x) - 1e-12);
  }
}

TEST_CASE("leaving positivity is flagged, not thrown") {
  const Problem pb = make_problem(power_spec());
  const RadialSolution sol = integrate_inward(pb, 1.0, 1.0, 5.0, 1e-6);
  CHECK(sol.truncated);
  CHECK(sol.truncation == "v reached 0");
  CHECK(sol.x_max() < std::log(1e6));
  CHECK_THROWS_AS(integrate_inward(pb, 1.0, 0.0, -1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(integrate_inward(pb, 0.5, 1.0, -1.0, 0.6), DomainError);
}

TEST_CASE("annulus problems") {
  const Problem pb = make_problem(power_spec());
  SUBCASE("lambda = 0 stays between 0 and the boundary value") {
    const RadialSolution sol = solve_annulus(pb, 64, 0.0, 1.0);
    CHECK(sol.meta.mismatch <= 1e-8);
    for (size_t i = 0; i < sol.size(); ++i) {
      CHECK(sol.v(i) > 0);
      CHECK(sol.v(i) <= 1.0 + 1e-12);
    }
  }
  SUBCASE("inner boundary value imposed") {
    for (double n : {4.0, 100.0, 1e5}) {
      const RadialSolution sol = solve_annulus(pb, n, 1.0, 2.0);
      CHECK(sol.meta.mismatch <= 1e-8);
      CHECK(sol.v(sol.size() - 1) == doctest::Approx(phi(pb.op, 1 / n) + 2.0).epsilon(1e-14));
      CHECK(sol.v(0) == doctest::Approx(2.0).epsilon(1e-14));
    }
  }
  SUBCASE("zero outer data") {
    const RadialSolution sol = solve_annulus(pb, 1e3, 1.0, 0.0);
    CHECK(sol.meta.mismatch <= 1e-8);
    CHECK(sol.v(sol.size() - 1) == doctest::Approx(phi(pb.op, 1e-3)).epsilon(1e-12));
  }
  SUBCASE("ordering in n") {
    for (const ProblemSpec& s : {power_spec(), weighted_spec()}) {
      const Problem p2 = make_problem(s);
      RadialSolution prev = solve_annulus(p2, 2, 1.0, 1.0);
      for (double n = 4; n <= 256; n *= 2) {
        const RadialSolution cur = solve_annulus(p2, n, 1.0, 1.0);
        CHECK(cur.meta.mismatch <= 1e-8);
        for (double x : x_grid(0.0, std::log(n / 2), 40)) CHECK(cur.ln_v_at(x) <= prev.ln_v_at(x) + 1e-9);
        prev = cur;
      }
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(solve_annulus(pb, 1.5, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(solve_annulus(pb, 8, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(solve_annulus(pb, 8, -1.0, 1.0), DomainError);
  }
}

TEST_CASE("weak singular solutions") {
  const Problem pb = make_problem(power_spec());
  const PhiTable tab(pb.op);
  for (double lam : {0.5, 1.0, 2.0}) {
    const SingularResult res = singular_solution(pb, lam, 1.0, 1e-6);
    const SingularityVerdict v = classify(res.sol, tab);
    CHECK(v.kind == VerdictKind::Weak);
    CHECK(v.lambda_hat == doctest::Approx(lam).epsilon(0.02));
    REQUIRE(v.flux_limit);
    CHECK(*v.flux_limit == doctest::Approx(std::pow(v.lambda_hat, pb.spec.p - 1)).epsilon(0.02));
    CHECK(flux(res.sol, 1e-4) == doctest::Approx(lam).epsilon(0.02));
    CHECK(std::isfinite(apriori_check(res.sol)));
    // y(s) ~ lambda s
    bool hit = false;
    const auto ys = to_s_space(res.sol, tab);
    for (size_t i = 1; i < ys.size(); ++i)
      if (ys[i - 1].s <= 1e3 && ys[i].s >= 1e3) {
        CHECK(ys[i].y / ys[i].s == doctest::Approx(lam).epsilon(0.02));
        hit = true;
      }
    CHECK(hit);
  }
  SUBCASE("weighted data") {
    const Problem pw = make_problem(weighted_spec());
    const SingularResult res = singular_solution(pw, 1.0, 1.0, 1e-6);
    const SingularityVerdict v = classify(res.sol, PhiTable(pw.op));
    CHECK(v.kind == VerdictKind::Weak);
    CHECK(v.lambda_hat == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("strong singular solution follows the profile") {
  const Problem pb = make_problem(power_spec());
  const PhiTable tab(pb.op);
  const ProfileEvaluator ev(pb);
  const SingularResult res = singular_solution(pb, INFINITY, 1.0, 1e-5);
  CHECK(std::isinf(res.sol.meta.lambda));
  for (double r : {1e-5, 1e-4, 1e-3}) {
    const double ratio = std::exp(res.sol.ln_v_at(-std::log(r)) - ev.ln_tilde_u(std::log(r)));
    CHECK(ratio >= 0.95);
    CHECK(ratio <= 1.05);
  }
  CHECK(classify(res.sol, tab).kind == VerdictKind::Strong);
  // flux grows without bound, the a priori quantity stays near m0^p / M
  CHECK(flux(res.sol, 1e-5) > 100 * flux(res.sol, 1e-3));
  CHECK(apriori_check(res.sol) == doctest::Approx(2.0).epsilon(0.01));
  const auto ys = to_s_space(res.sol, tab);
  double tail_min = INFINITY;
  for (const auto& y : ys)
    if (y.s > 1e3) tail_min = std::min(tail_min, y.s_dy_over_y);
  CHECK(tail_min >= 0.98);
}

TEST_CASE("singular solutions are refused without integrability") {
  const Problem pb = make_problem(power_spec(3, 2, 4));
  CHECK_THROWS_AS(singular_solution(pb, INFINITY, 1.0), DomainError);
  CHECK_THROWS_AS(singular_solution(pb, 1.0, 1.0), DomainError);
  const Problem ok = make_problem(power_spec());
  CHECK_THROWS_AS(singular_solution(ok, 0.0, 1.0), DomainError);
}

TEST_CASE("classification of synthetic profiles") {
  const Problem pb = make_problem(power_spec());
  const PhiTable tab(pb.op);
  const ProfileEvaluator ev(pb);
  const auto grid = x_grid(0.01, std::log(1e6), 400);
  const double lam = 1.3;
  // Phi = (e^x - 1) / (4 pi) for the Laplacian in three dimensions
  auto lam_phi = [&](double x) {
    const double e = std::expm1(x);
    return Jet{std::log(lam * e / (4 * M_PI)), (e + 1) / e, -(e + 1) / (e * e)};
  };
  const RadialSolution weak = synthetic_solution(pb, lam_phi, grid);
  const SingularityVerdict vw = classify(weak, tab);
  CHECK(vw.kind == VerdictKind::Weak);
  CHECK(vw.lambda_hat == doctest::Approx(lam).epsilon(1e-7));
  CHECK(vw.evidence.size() >= 10);
  for (double r : {1e-6, 1e-3, 0.5}) CHECK(flux(weak, r) == doctest::Approx(lam).epsilon(1e-8));

  const RadialSolution flat = synthetic_solution(pb, [](double) { return Jet{std::log(3.0), 0.0, 0.0}; }, grid);
  CHECK(classify(flat, tab).kind == VerdictKind::Removable);
  const auto q = apriori_profile(flat);
  CHECK(q.back() < 1e-10);
  CHECK(q.back() < q.front());

  const RadialSolution strong = synthetic_solution(pb, [&](double x) { return ev.jet(x); }, grid);
  CHECK(classify(strong, tab).kind == VerdictKind::Strong);
  CHECK(apriori_check(strong) == doctest::Approx(2.0).epsilon(1e-10));

  // too short to classify
  const RadialSolution short_sol = synthetic_solution(pb, lam_phi, x_grid(0.01, 3.0, 20));
  CHECK_THROWS_AS(classify(short_sol, tab), DomainError);
}

TEST_CASE("s-space round trip") {
  const Problem pb = make_problem(weighted_spec());
  const PhiTable tab(pb.op);
  const RadialSolution sol = solve_annulus(pb, 1e5, 1.0, 1.0);
  const auto ys = to_s_space(sol, tab);
  REQUIRE(ys.size() > 10);
  for (size_t i = 0; i < ys.size(); i += 3) {
    const double ln_r = tab.inverse_ln(std::log(ys[i].s));
    CHECK(sol.ln_v_at(-ln_r) == doctest::Approx(std::log(ys[i].y)).epsilon(1e-9));
  }
}

TEST_CASE("critical strong solution follows the profile") {
  ProblemSpec s = power_spec(3, 2, 3);
  s.L_h = rv::log_pow(-2.0, rv::Orientation::AtInfinity);
  const Problem pb = make_problem(s);
  const ProfileEvaluator ev(pb);
  REQUIRE(ev.branch() == ProfileKind::CriticalDoii);
  const SingularResult res = singular_solution(pb, INFINITY, 1.0, 1e-5);
  const double ratio = std::exp(res.sol.ln_v_at(std::log(1e4)) - ev.ln_tilde_u(std::log(1e-4)));
  CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));
  CHECK(classify(res.sol, PhiTable(pb.op)).kind == VerdictKind::Strong);
}

TEST_CASE("supercritical growth: annulus solutions decrease in n, v/Phi falls off") {
  const Problem pb = make_problem(power_spec(3, 2, 4));
  const PhiTable tab(pb.op);
  const double x_probe = std::log(100.0);
  double prev_v = INFINITY, prev_ratio = INFINITY;
  for (double n : {128.0, 256.0, 1024.0, 65536.0, 1e6}) {
    const RadialSolution sol = solve_annulus(pb, n, 1.0, 1.0);
    const double lv = sol.ln_v_at(x_probe);
    CHECK(lv < prev_v);
    const double ratio = std::exp(lv - tab.ln_phi(-x_probe));
    CHECK(ratio < prev_ratio);
    prev_v = lv;
    prev_ratio = ratio;
    CHECK(std::isfinite(apriori_check(sol)));
  }
  CHECK(prev_ratio < 0.25);
  const RadialSolution sol = solve_annulus(pb, 1e4, 1.0, 1.0);
  double prev = INFINITY;
  for (double r : {1e-1, 3e-2, 1e-2, 3e-3}) {
    const double ratio = std::exp(sol.ln_v_at(-std::log(r)) - tab.ln_phi(std::log(r)));
    CHECK(ratio < prev);
    prev = ratio;
  }
}
