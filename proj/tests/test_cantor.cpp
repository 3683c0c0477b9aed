#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "grafting/cantor.hpp"
#include "grafting/errors.hpp"
#include "grafting/rng.hpp"

using namespace grafting;

TEST_CASE("rational arithmetic is exact and guarded") {
  CHECK(Rat::of(1, 3) + Rat::of(1, 6) == Rat::of(1, 2));
  CHECK(Rat::of(2, 4) == Rat::of(1, 2));
  CHECK(Rat::of(1, 3) * Rat::of(3, 5) == Rat::of(1, 5));
  CHECK((Rat::of(1, 2) - Rat::of(2, 3)) < Rat::of(0));

  Rat huge = Rat::of(1, 1000000000000000000LL);
  Rat squared = huge * huge;
  CHECK_THROWS_AS(squared * Rat::of(1, 1000), Error);
}

TEST_CASE("the ternary measure evaluates exactly on gaps") {
  CantorMeasure m = CantorMeasure::ternary();
  m.validate();

  MeasureInterval half = cantor_f(m, Rat::of(1, 2), 12);
  CHECK(half.lo == Rat::of(1, 2));
  CHECK(half.hi == Rat::of(1, 2));

  MeasureInterval third = cantor_f(m, Rat::of(1, 3), 12);
  CHECK(third.lo == Rat::of(1, 2));
  CHECK(third.hi == Rat::of(1, 2));

  for (long long num : {340, 400, 660}) {
    MeasureInterval iv = cantor_f(m, Rat::of(num, 1000), 12);
    CHECK(iv.lo == Rat::of(1, 2));
    CHECK(iv.hi == Rat::of(1, 2));
  }
}

TEST_CASE("points of the Cantor set get one-cell brackets") {
  CantorMeasure m = CantorMeasure::ternary();
  MeasureInterval iv = cantor_f(m, Rat::of(1, 4), 12);
  CHECK(iv.hi - iv.lo == Rat::of(1, 4096));
  CHECK(iv.lo <= Rat::of(1, 3));
  CHECK(Rat::of(1, 3) <= iv.hi);
}

TEST_CASE("the measure function is monotone") {
  CantorMeasure m = CantorMeasure::ternary();
  Rng rng = Rng::stream(2, "cantor-mono");
  double prev_x = 0, prev_f = 0;
  std::vector<double> xs;
  for (int i = 0; i < 2000; ++i) xs.push_back(rng.uniform());
  std::sort(xs.begin(), xs.end());
  for (double x : xs) {
    double fx = cantor_f_mid(m, x, 12);
    CHECK(fx >= prev_f - 1e-15);
    prev_x = x;
    prev_f = fx;
  }
  (void)prev_x;
}

TEST_CASE("gap and cell lengths account for the whole interval exactly") {
  CantorMeasure m = CantorMeasure::ternary();
  for (int depth : {1, 4, 8, 12}) {
    Graft1D g = graft1d(m, depth);
    CHECK((int)g.cells.size() == 1 << depth);
    CHECK((int)g.gaps.size() == (1 << depth) - 1);
    CHECK(g.u_prime_total() == Rat::of(1));
    CHECK(g.graft_total() == Rat::of(2));
  }
}

TEST_CASE("translated gaps stay disjoint") {
  Graft1D g = graft1d(CantorMeasure::ternary(), 10);
  for (std::size_t i = 0; i + 1 < g.gaps.size(); ++i) {
    Rat end = g.gaps[i].b + g.gaps[i].f;
    Rat next = g.gaps[i + 1].a + g.gaps[i + 1].f;
    CHECK(end <= next);
  }
}

TEST_CASE("kappa restores gap points isometrically") {
  Graft1D g = graft1d(CantorMeasure::ternary(), 12);
  for (double s : {0.02, 0.11, 0.27}) {
    CHECK(std::fabs(kappa(g, 5.0 / 6 + s) - (1.0 / 3 + s)) < 1e-12);
  }
  for (int i : {0, 3, 500, 2000}) {
    const Gap1D& gap = g.gaps[(std::size_t)i % g.gaps.size()];
    double a = (gap.a + gap.f).value();
    double w = (gap.b - gap.a).value();
    double y1 = a + 0.25 * w, y2 = a + 0.75 * w;
    CHECK(std::fabs((kappa(g, y2) - kappa(g, y1)) - (y2 - y1)) < 1e-12);
  }
}

TEST_CASE("kappa inverts the grafting coordinate") {
  CantorMeasure m = CantorMeasure::ternary();
  Graft1D g = graft1d(m, 12);
  Rng rng = Rng::stream(4, "cantor-inv");
  for (int i = 0; i < 200; ++i) {
    double x = rng.uniform();
    MeasureInterval iv = cantor_f(m, Rat::of((long long)(x * 1e9), 1000000000LL), 12);
    if (iv.lo != iv.hi) continue;  // skip the measure-zero cells
    double y = x + iv.lo.value();
    CHECK(std::fabs(kappa(g, y) - x) < 1e-10);
  }
}

TEST_CASE("kappa is 1-Lipschitz") {
  Graft1D g = graft1d(CantorMeasure::ternary(), 12);
  Rng rng = Rng::stream(6, "cantor-lip");
  for (int i = 0; i < 2000; ++i) {
    double y1 = rng.uniform(0.0, 2.0);
    double y2 = rng.uniform(0.0, 2.0);
    if (y2 < y1) std::swap(y1, y2);
    CHECK(kappa(g, y2) - kappa(g, y1) <= y2 - y1 + 1e-12);
  }
}

TEST_CASE("deflation is constant on translated gaps and monotone") {
  Graft1D g = graft1d(CantorMeasure::ternary(), 12);
  for (double s : {0.01, 0.15, 0.32}) {
    CHECK(std::fabs(deflate1d(g, 5.0 / 6 + s) - 0.5) < 1e-12);
  }
  const Gap1D& gap = g.gaps.front();
  double a = (gap.a + gap.f).value();
  double w = (gap.b - gap.a).value();
  CHECK(std::fabs(deflate1d(g, a + 0.2 * w) - deflate1d(g, a + 0.9 * w)) < 1e-12);

  Rng rng = Rng::stream(8, "cantor-defl");
  std::vector<double> ys;
  for (int i = 0; i < 500; ++i) ys.push_back(rng.uniform(0.0, 2.0));
  std::sort(ys.begin(), ys.end());
  double prev = 0;
  for (double y : ys) {
    double v = deflate1d(g, y);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("the ternary pushforward is exact on dyadic intervals") {
  // Cell masses are dyadic, so every dyadic interval is tiled exactly.
  CantorMeasure m = CantorMeasure::ternary();
  CHECK(pushforward_error(graft1d(m, 8), 100) == 0.0);
  CHECK(pushforward_error(graft1d(m, 12), 100) == 0.0);
}

TEST_CASE("uneven weights show the depth-controlled defect") {
  CantorMeasure m;
  m.branches = {{Rat::of(0), Rat::of(1, 3), Rat::of(2, 5)},
                {Rat::of(2, 3), Rat::of(1, 3), Rat::of(3, 5)}};
  m.validate();
  double e8 = pushforward_error(graft1d(m, 8), 100);
  double e10 = pushforward_error(graft1d(m, 10), 100);
  double e12 = pushforward_error(graft1d(m, 12), 100);
  CHECK(e12 < e10);
  CHECK(e10 < e8);
  CHECK(e12 < std::pow(0.6, 12) * 2);
}

TEST_CASE("plateau values form a fine net at depth 12") {
  Graft1D g = graft1d(CantorMeasure::ternary(), 12);
  CHECK(net_error(g, 1e-3) < 1e-3);
}

TEST_CASE("bad branch data is rejected") {
  CantorMeasure wrong_sum = CantorMeasure::ternary();
  wrong_sum.branches[0].weight = Rat::of(1, 3);
  try {
    wrong_sum.validate();
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }

  CantorMeasure overlap = CantorMeasure::ternary();
  overlap.branches[1].offset = Rat::of(1, 4);
  try {
    overlap.validate();
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}
