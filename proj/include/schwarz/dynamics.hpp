#pragma once

// Interval maps of [0,1], orbits, first entries, jets along orbits, inverse
// branches and the return-time scan.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "schwarz/interval.hpp"
#include "schwarz/polynomial.hpp"
#include "schwarz/schwarzian.hpp"

namespace schwarz {

struct CriticalPoint {
  double approx = 0;
  std::optional<Rational> exact;  // when the root is rational
  int order = 1;                  // multiplicity as a root of f'
};

/// Either an exact polynomial, or psi o q_{alpha,a} o phi evaluated in floating point.
class IntervalMap {
 public:
  enum class Kind { kPolynomial, kComposite };

  static IntervalMap polynomial(Polynomial<Rational> p, std::string name = "poly");
  static IntervalMap composite(Polynomial<double> phi, double alpha, double a, Polynomial<double> psi,
                               std::string name = "composite");

  Kind kind() const { return kind_; }
  bool exact() const { return kind_ == Kind::kPolynomial; }
  const std::string& name() const { return name_; }
  /// Throws InvalidArgument for composite maps.
  const Polynomial<Rational>& poly() const;
  double alpha() const { return alpha_; }
  double shift() const { return a_; }

  Rational operator()(const Rational& x) const { return poly()(x); }
  double operator()(double x) const;
  Jet<Rational> jet(const Rational& x, int order) const;
  Jet<double> jet(double x, int order) const;

  const std::vector<CriticalPoint>& critical_points() const { return crit_; }

  /// f([0,1]) within [0,1] (exact at rational extrema, 1e-12 slack at
  /// irrational ones, dense grid for composites); throws InvalidArgument.
  void validate() const;

 private:
  IntervalMap() = default;
  void find_critical_points();

  Kind kind_ = Kind::kPolynomial;
  std::string name_;
  Polynomial<Rational> p_;
  Polynomial<double> phi_, psi_;
  double alpha_ = 2, a_ = 0;
  std::vector<CriticalPoint> crit_;
};

IntervalMap logistic(const Rational& a = Rational(4));
/// x -> ((x+a)^alpha - a^alpha) / ((1+a)^alpha - a^alpha). Exact polynomial
/// for integer alpha, float composite otherwise.
IntervalMap q_family(const Rational& alpha, const Rational& a);

/// (x, f(x), ..., f^n(x)). Throws EscapedInterval with the step index.
std::vector<Rational> iterate(const IntervalMap& f, const Rational& x, int n);
std::vector<double> iterate(const IntervalMap& f, double x, int n);

/// Minimal s <= max_steps with f^s(x) in the open interval (lo, hi).
std::optional<int> first_entry(const IntervalMap& f, const Rational& x, const Rational& lo, const Rational& hi,
                               int max_steps);
std::optional<int> first_entry(const IntervalMap& f, double x, double lo, double hi, int max_steps);

/// Jet of f^steps at x, by composing jets along the orbit.
Jet<Rational> forward_jet(const IntervalMap& f, const Rational& x, int steps, int order);
Jet<double> forward_jet(const IntervalMap& f, double x, int steps, int order);

/// S_0..S_d of the local inverse of f^(s+1) near x, based at f^(s+1)(x).
/// Throws CriticalOrbit if Df vanishes somewhere on x..f^s(x).
SchwarzianSequence<Rational> inverse_branch_schwarzians(const IntervalMap& f, const Rational& x, int s, int d);
SchwarzianSequence<double> inverse_branch_schwarzians(const IntervalMap& f, double x, int s, int d);

/// First n rationals of the Stern-Brocot tree inside (0,1), breadth first:
/// 1/2, 1/3, 2/3, 1/4, 2/5, 3/5, 3/4, ...
std::vector<Rational> stern_brocot(int n);

// ---------------------------------------------------------------------------
// Return-time scan

struct ScanOptions {
  int d = 3;
  std::vector<Rational> eps{Rational(1, 16)};
  std::vector<Rational> samples;  // empty: stern_brocot(sample_count)
  int sample_count = 200;
  int max_steps = 50;
  /// Events whose common denominator has at most this many bits get exact
  /// S_k values; larger ones get certified interval signs.
  std::size_t exact_bits = 1 << 20;
  /// The exact d = 1 identity is skipped above this size.
  std::size_t identity_bits = std::size_t(1) << 27;
  /// Also check later visits to X by composing first-entry branches.
  bool general = false;
  int threads = 0;  // 0: hardware concurrency
  mpfr_prec_t start_precision = 192;
  mpfr_prec_t max_precision = 8192;
};

enum class EventMethod { kExact, kInterval };
std::string to_string(EventMethod m);

struct ReturnEvent {
  std::size_t sample = 0;
  Rational x;
  Rational eps;
  int s = 0;
  Rational image;                 // f^(s+1)(x), exact when small, else a dyadic enclosure midpoint
  bool image_exact = true;
  std::size_t bits = 0;           // bit size of the common denominator of the jet of f^(s+1)
  EventMethod method = EventMethod::kExact;
  mpfr_prec_t precision = 0;      // interval precision used (0 for exact)
  int df_sign = 0;                // sign of Df^(s+1)(x)
  std::vector<int> signs;         // S_1..S_d of the inverse branch
  std::vector<double> approx;     // S_1..S_d, rounded
  std::vector<std::optional<Rational>> values;  // exact S_k when available
  std::optional<bool> d1_identity;  // nullopt when skipped
  bool all_positive = false;
};

/// A later visit s_2 > s_1 to X, checked by composing two first-entry branches.
struct ComposedEvent {
  std::size_t sample = 0;
  Rational eps;
  int s = 0;           // visit time
  int first = 0;       // previous visit time
  std::vector<int> direct_signs, composed_signs;
  bool all_positive = false;
  bool consistent = false;
};

struct EpsSummary {
  Rational eps;
  int samples = 0;
  int events = 0;
  int all_positive = 0;
  int not_entered = 0;
  int critical_discarded = 0;
  int identity_checked = 0;
  int identity_held = 0;
  std::vector<double> min_sk;       // per k, over events
  std::vector<std::size_t> witnesses;  // indices into events with a non-positive S_k
  std::size_t max_bits = 0;
  int exact_events = 0, interval_events = 0;
  int composed_events = 0, composed_positive = 0;
};

struct ScanReport {
  std::string map;
  Rational critical_point;
  int d = 0;
  int max_steps = 0;
  std::vector<Rational> samples;
  std::vector<EpsSummary> summaries;
  std::vector<ReturnEvent> events;      // by sample, then eps
  std::vector<ComposedEvent> composed;  // by sample, then eps, then s
  double seconds = 0;

  bool all_positive() const;
  bool identity_holds() const;
};

/// Requires a polynomial map and an exact critical point c of finite order.
ScanReport return_scan(const IntervalMap& f, const Rational& c, const ScanOptions& opt = {});

}  // namespace schwarz
