#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "sigzero/errors.hpp"
#include "sigzero/zeros.hpp"

using namespace sigzero;

namespace {

const PeriodicFunction& triangle() {
  static const PeriodicFunction f =
      PeriodicFunction::pwl({0.0, kPi, kTwoPi}, {1.0, -1.0, 1.0});
  return f;
}

PeriodicFunction random_pwl(std::mt19937_64& rng, int interior_knots) {
  std::uniform_real_distribution<double> upos(0.05, kTwoPi - 0.05);
  std::uniform_real_distribution<double> uval(-1.0, 1.0);
  std::vector<double> knots{0.0};
  for (int i = 0; i < interior_knots; ++i) knots.push_back(upos(rng));
  std::sort(knots.begin() + 1, knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (knots[i] - knots[i - 1] < 1e-3) knots[i] = knots[i - 1] + 1e-3;
  knots.push_back(kTwoPi);
  std::vector<double> values;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) values.push_back(uval(rng));
  values.push_back(values.front());
  values[1] += 1.0;  // guarantee nonconstant
  return PeriodicFunction::pwl(std::move(knots), std::move(values));
}

// ---- dense-grid oracle ------------------------------------------------
// Sign changes of g on a uniform N-grid. Valid when no two roots share a
// grid cell; callers run it at two scales and require agreement.
long grid_count(const std::function<double(double)>& g, double a, double b, long N) {
  long cnt = 0;
  double yp = g(a);
  for (long i = 1; i <= N; ++i) {
    const double y = g(a + (b - a) * (static_cast<double>(i) / N));
    if ((yp < 0.0) != (y < 0.0)) ++cnt;
    yp = y;
  }
  return cnt;
}

SignalInstance random_instance(const PeriodicFunction& f, long n, std::uint64_t stream_id) {
  auto stream = make_stream(777, stream_id);
  const long pn = FrequencySequence::golden().pn(n);
  return SignalInstance(f, n, pn, CoefficientLaw::gaussian().sample_coefficients(n, stream));
}

}  // namespace

TEST_CASE("single-term zeros are the function's crossings, shifted") {
  // n = 1, p_1 = 3: X(t) = f(3 + t); crossings of the triangle at pi/2 and
  // 3pi/2 appear at t = 3pi/2 - 3 and 5pi/2 - 3.
  SignalInstance inst(triangle(), 1, 3, {1.0});
  const auto rep = count_zeros_pwl(inst, 0.0, kTwoPi);
  CHECK(rep.count == 2);
  CHECK(rep.method == "pwl-direct");
  CHECK_FALSE(rep.degenerate);
  REQUIRE(rep.locations.size() == 2);
  CHECK(std::abs(rep.locations[0] - (1.5 * kPi - 3.0)) < 1e-10);
  CHECK(std::abs(rep.locations[1] - (2.5 * kPi - 3.0)) < 1e-10);
}

TEST_CASE("endpoint zeros count once") {
  // f vanishes exactly at the knots pi/2 and 3pi/2; use them as the window.
  const auto f = PeriodicFunction::pwl({0.0, 0.5 * kPi, kPi, 1.5 * kPi, kTwoPi},
                                       {1.0, 0.0, -1.0, 0.0, 1.0});
  SignalInstance inst(f, 1, 0, {1.0});
  const auto rep = count_zeros_pwl(inst, 0.5 * kPi, 1.5 * kPi);
  CHECK(rep.count == 2);
  CHECK_FALSE(rep.degenerate);
  REQUIRE(rep.locations.size() == 2);
  CHECK(rep.locations[0] == 0.5 * kPi);
  CHECK(rep.locations[1] == 1.5 * kPi);
}

TEST_CASE("an identically-zero plateau flags degenerate") {
  const auto f = PeriodicFunction::pwl({0.0, 0.5 * kPi, kPi, 1.5 * kPi, kTwoPi},
                                       {1.0, 0.0, 0.0, -1.0, 1.0});
  SignalInstance inst(f, 1, 0, {1.0});
  const auto rep = count_zeros_pwl(inst, 0.1, kTwoPi - 0.1);
  CHECK(rep.degenerate);
  CHECK(rep.count == 3);  // plateau start, plateau end, interior crossing
  REQUIRE(rep.locations.size() == 3);
  CHECK(std::abs(rep.locations[0] - 0.5 * kPi) < 1e-12);
  CHECK(std::abs(rep.locations[1] - kPi) < 1e-12);
  CHECK(std::abs(rep.locations[2] - 1.75 * kPi) < 1e-10);
}

TEST_CASE("breakpoints bracket the window and cells are affine") {
  const auto inst = random_instance(triangle(), 20, 1);
  const double a = 0.2, b = 5.9;
  const auto ts = breakpoints(inst, a, b);
  REQUIRE(ts.size() >= 3);
  CHECK(ts.front() == a);
  CHECK(ts.back() == b);
  CHECK(std::is_sorted(ts.begin(), ts.end()));
  // affine inside every cell: the midpoint matches the endpoint chord.
  // A missed knot event would bend some cell and break this.
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double lo = ts[i], hi = ts[i + 1];
    if (hi - lo < 1e-9) continue;
    const double mid = 0.5 * (lo + hi);
    const double chord = 0.5 * (inst.eval(lo) + inst.eval(hi));
    CAPTURE(lo);
    CAPTURE(hi);
    CHECK(std::abs(inst.eval(mid) - chord) < 1e-9);
  }
}

TEST_CASE("pwl counts agree with a dense grid at two scales") {
  std::mt19937_64 rng(4242);
  const PeriodicFunction fns[] = {triangle(), random_pwl(rng, 4), random_pwl(rng, 7)};
  int checked = 0;
  for (const auto& f : fns) {
    for (long n : {3L, 7L, 20L, 50L}) {
      const auto inst = random_instance(f, n, static_cast<std::uint64_t>(10 * n + checked));
      const double a = 0.0, b = kTwoPi;
      REQUIRE(std::abs(inst.eval(a)) > 1e-9);  // keep endpoint semantics out of play
      REQUIRE(std::abs(inst.eval(b)) > 1e-9);
      const auto rep = count_zeros_pwl(inst, a, b);
      CHECK_FALSE(rep.degenerate);
      const auto g = [&](double t) { return inst.eval(t); };
      const long c1 = grid_count(g, a, b, 300000);
      const long c2 = grid_count(g, a, b, 600001);
      CAPTURE(n);
      CAPTURE(checked);
      REQUIRE(c1 == c2);  // oracle self-consistency
      CHECK(rep.count == c1);
      // every reported location is a true zero of the piecewise-linear path
      for (double z : rep.locations) {
        const double h = 1e-7;
        CHECK(inst.eval(z - h) * inst.eval(z + h) <= 0.0);
      }
      ++checked;
    }
  }
  CHECK(checked == 12);
}

TEST_CASE("bracketed counting cross-validates the exact pwl count") {
  std::mt19937_64 rng(99);
  const auto f = random_pwl(rng, 5);
  for (long n : {5L, 20L}) {
    const auto inst = random_instance(f, n, static_cast<std::uint64_t>(n));
    const auto exact = count_zeros_pwl(inst, 0.0, kTwoPi);
    const double max_freq = static_cast<double>(n) * 8.0;  // dense enough for every kink
    const auto brack = count_zeros_bracketed([&](double t) { return inst.eval(t); }, 0.0, kTwoPi,
                                             max_freq, 8.0, 1e-12);
    CAPTURE(n);
    CHECK(brack.method == "bracketed");
    CHECK(brack.count == exact.count);
    REQUIRE(brack.locations.size() == exact.locations.size());
    for (std::size_t i = 0; i < brack.locations.size(); ++i)
      CHECK(std::abs(brack.locations[i] - exact.locations[i]) < 1e-9);
  }
}

TEST_CASE("sweep and direct paths agree via window additivity") {
  // Full window forces the sweep; quarters stay on the direct path.
  const long n = 2000;
  const auto inst = random_instance(triangle(), n, 5);
  const auto whole = count_zeros_pwl(inst, 0.0, kTwoPi);
  CHECK(whole.method == "pwl-sweep");

  std::vector<double> cuts{0.0, 0.25 * kTwoPi, 0.5 * kTwoPi, 0.75 * kTwoPi, kTwoPi};
  std::vector<double> merged;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto part = count_zeros_pwl(inst, cuts[i], cuts[i + 1]);
    CHECK(part.method == "pwl-direct");
    merged.insert(merged.end(), part.locations.begin(), part.locations.end());
  }
  // no zero sits near a cut, so the partition cannot split or drop one
  for (double z : merged)
    for (double c : cuts) REQUIRE(std::abs(z - c) > 1e-6);

  REQUIRE(merged.size() == whole.locations.size());
  CHECK(whole.count == static_cast<long>(merged.size()));
  for (std::size_t i = 0; i < merged.size(); ++i)
    CHECK(std::abs(merged[i] - whole.locations[i]) < 1e-9);
}

TEST_CASE("bracketed counting on smooth paths") {
  SUBCASE("cosine on [0, 10]") {
    const auto rep = count_zeros_bracketed([](double t) { return std::cos(t); }, 0.0, 10.0, 1.0,
                                           8.0, 1e-12);
    CHECK(rep.count == 3);
    CHECK_FALSE(rep.degenerate);
    REQUIRE(rep.locations.size() == 3);
    CHECK(std::abs(rep.locations[0] - 0.5 * kPi) < 1e-10);
    CHECK(std::abs(rep.locations[1] - 1.5 * kPi) < 1e-10);
    CHECK(std::abs(rep.locations[2] - 2.5 * kPi) < 1e-10);
  }
  SUBCASE("near-zero samples are recorded, not re-bracketed") {
    // sample grid hits t = 1 where the path is exactly zero
    const auto rep = count_zeros_bracketed([](double t) { return t - 1.0; }, 0.0, 2.0, kTwoPi,
                                           4.0, 1e-12);
    CHECK(rep.count == 1);
    CHECK(rep.degenerate);  // an exactly-zero sample
    CHECK(std::abs(rep.locations[0] - 1.0) < 1e-12);
  }
  SUBCASE("sine endpoints at 0 and 2pi are near-zero samples") {
    const auto rep = count_zeros_bracketed([](double t) { return std::sin(t); }, 0.0, kTwoPi, 1.0,
                                           8.0, 1e-12);
    CHECK(rep.count == 3);  // 0, pi, 2pi
    CHECK(rep.degenerate);  // sin(0) == 0 exactly
  }
}

TEST_CASE("expected zero counts of the limit process") {
  // cos: <f,f> = <f',f'> = 1/2, so [0,pi] gives sqrt(1/3)
  CHECK(std::abs(kac_rice_expected(PeriodicFunction::cosine(), 0.0, kPi) -
                 1.0 / std::sqrt(3.0)) < 1e-13);
  // triangle: <f,f> = 1/3, <f',f'> = 4/pi^2, so [0,pi] gives 2/pi
  CHECK(std::abs(kac_rice_expected(triangle(), 0.0, kPi) - 2.0 / kPi) < 1e-13);
  CHECK(kac_rice_expected(triangle(), 0.0, kPi) == doctest::Approx(0.6366197723675814).epsilon(1e-15));
  // mixed harmonic f = cos(t) + 0.5 sin(3t): energies (1 + 1/4)/2 and (1 + 9/4)/2
  const auto mix = PeriodicFunction::harmonic({0.0, 1.0}, {0.0, 0.0, 0.0, 0.5});
  const double want = (kPi / kPi) * std::sqrt((1.625 / 3.0) / 0.625);
  CHECK(std::abs(kac_rice_expected(mix, 0.0, kPi) - want) < 1e-13);
  // window scaling is linear
  CHECK(kac_rice_expected(mix, 1.0, 4.0) ==
        doctest::Approx(3.0 / kPi * std::sqrt(1.625 / (3.0 * 0.625))).epsilon(1e-14));
  CHECK(kac_rice_expected(mix, 2.0, 2.0) == 0.0);
}

TEST_CASE("validation") {
  SignalInstance inst(triangle(), 1, 3, {1.0});
  CHECK_THROWS_AS(count_zeros_pwl(inst, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(breakpoints(inst, 2.0, 1.0), ConfigError);
  SignalInstance smooth(PeriodicFunction::cosine(), 1, 3, {1.0});
  CHECK_THROWS_AS(count_zeros_pwl(smooth, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(breakpoints(smooth, 0.0, 1.0), ConfigError);
  const auto id = [](double t) { return t; };
  CHECK_THROWS_AS(count_zeros_bracketed(id, 1.0, 0.0, 1.0, 8.0, 1e-12), ConfigError);
  CHECK_THROWS_AS(count_zeros_bracketed(id, 0.0, 1.0, 0.0, 8.0, 1e-12), ConfigError);
  CHECK_THROWS_AS(count_zeros_bracketed(id, 0.0, 1.0, 1.0, 0.5, 1e-12), ConfigError);
  CHECK_THROWS_AS(count_zeros_bracketed(id, 0.0, 1.0, 1.0, 8.0, 0.0), ConfigError);
  CHECK_THROWS_AS(kac_rice_expected(triangle(), 1.0, 0.0), ConfigError);
}

TEST_CASE("report serialization round trip") {
  ZeroReport rep;
  rep.count = 3;
  rep.locations = {0.25, 1.5, 6.125};
  rep.degenerate = true;
  rep.method = "pwl-direct";
  const auto back = ZeroReport::from_json(rep.to_json());
  CHECK(back.count == rep.count);
  CHECK(back.degenerate == rep.degenerate);
  CHECK(back.method == rep.method);
  CHECK(back.locations == rep.locations);
}
