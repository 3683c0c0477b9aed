#pragma once

#include <cstdint>
#include <vector>

namespace grafting {

// Exact rational on __int128 with overflow checks, enough headroom for IFS
// cell arithmetic down to depth ~30 at small branch denominators.
struct Rat {
  __int128 n = 0;
  __int128 d = 1;

  static Rat of(long long num, long long den = 1);
  double value() const { return (double)n / (double)d; }

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return !(o < *this); }
  bool operator==(const Rat& o) const { return n == o.n && d == o.d; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
};

// Self-similar measure on a Cantor set in (0,1): every retained interval
// splits into the same branch pattern, each child keeping a fixed fraction of
// the parent's mass.  The ternary uniform measure is branches
// {0,1/3,1/2} and {2/3,1/3,1/2}.
struct CantorMeasure {
  struct Branch {
    Rat offset;  // child left end as a fraction of the parent interval
    Rat scale;   // child length fraction, in (0,1)
    Rat weight;  // child mass fraction, in (0,1)
  };
  std::vector<Branch> branches;
  Rat total = Rat::of(1);  // |lambda|

  void validate() const;
  static CantorMeasure ternary();
};

// lambda((0,x)) bracketed by one depth-level cell: exact when x falls in a
// gap, an interval of width = the containing cell's mass otherwise.
struct MeasureInterval {
  Rat lo, hi;
};
MeasureInterval cantor_f(const CantorMeasure& m, const Rat& x, int depth);
double cantor_f_mid(const CantorMeasure& m, double x, int depth);

// One-dimensional grafting: each gap (a,b) of the complement slides right by
// the measure below it, each depth cell stretches by its mass.
struct Gap1D {
  Rat a, b, f;  // gap (a,b), f = lambda((0,a)) exactly
};
struct Cell1D {
  Rat lo, len, mass, f_lo;
};
struct Graft1D {
  CantorMeasure m;
  int depth = 0;
  std::vector<Gap1D> gaps;    // in increasing order
  std::vector<Cell1D> cells;  // in increasing order

  // Translated gap lengths plus cell lengths; equals 1 exactly.
  Rat u_prime_total() const;
  // Translated cell lengths include their masses; the three families tile
  // (0, 1+|lambda|), so this equals 1 + |lambda| exactly.
  Rat graft_total() const;
};
Graft1D graft1d(const CantorMeasure& m, int depth);

// Inverse of x -> x + f(x) by monotone bisection (59 halvings).
double kappa(const Graft1D& g, double y);

// D = f after kappa: constant on translated gaps, measure preserving in the
// limit.
double deflate1d(const Graft1D& g, double y);

// Bounds on the mass D^{-1}([i_lo, i_hi]) picks up from the Cantor part:
// lower sums the cells whose f-range sits inside the interval, upper the
// cells whose f-range touches it.
struct Pushforward {
  Rat lower, upper;
};
Pushforward pushforward_mass(const Graft1D& g, const Rat& i_lo, const Rat& i_hi);

// Worst measure-preservation defect over the first n dyadic subintervals of
// (0,|lambda|), breadth first by scale.
double pushforward_error(const Graft1D& g, int n_intervals);

// How far the achieved plateau values of D stray from covering (0,|lambda|):
// max over a net_step grid of the distance to the nearest gap value.
double net_error(const Graft1D& g, double net_step);

}  // namespace grafting
