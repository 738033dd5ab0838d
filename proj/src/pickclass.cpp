#include "schwarz/pickclass.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace schwarz {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPick: return "Pick";
    case Verdict::kNotPick: return "NotPick";
    case Verdict::kInconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(CertMethod m) {
  return m == CertMethod::kSchwarzianSigns ? "schwarzian-signs" : "degree-reduction";
}

HalfplaneReport halfplane_sample_check(const RationalMap<double>& r, const GridSpec& g) {
  HalfplaneReport rep;
  bool first = true;
  for (int i = 0; i < g.re_count; ++i) {
    long double re = g.re_count == 1 ? g.re_lo
                                     : g.re_lo + (g.re_hi - g.re_lo) * static_cast<long double>(i) / (g.re_count - 1);
    for (int j = 0; j < g.im_count; ++j) {
      long double t = g.im_count == 1 ? 0 : static_cast<long double>(j) / (g.im_count - 1);
      long double im = std::exp(std::log(static_cast<long double>(g.im_lo)) * (1 - t) +
                                std::log(static_cast<long double>(g.im_hi)) * t);
      Complex z(re, im);
      ++rep.points;
      auto v = r.eval_complex(z);
      bool fail = !v || std::imag(*v) < -g.tau;
      if (v && (first || std::imag(*v) < rep.min_im)) {
        rep.min_im = std::imag(*v);
        rep.argmin = z;
        first = false;
      }
      if (fail) {
        ++rep.failures;
        if (rep.failing_points.size() < 10) rep.failing_points.push_back(z);
      }
    }
  }
  rep.pass = rep.failures == 0;
  return rep;
}

namespace {

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return ev;
}

CrossRatioMatrix finish(std::vector<double> points, std::vector<std::vector<double>> entries) {
  int n = static_cast<int>(points.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries[i][j];
  return {std::move(points), std::move(entries), sorted_eigenvalues(m)};
}

}  // namespace

CrossRatioMatrix crossratio_matrix(const std::vector<double>& pts, const std::vector<double>& vals,
                                   const std::vector<double>& ders) {
  int n = static_cast<int>(pts.size());
  if (static_cast<int>(vals.size()) != n || static_cast<int>(ders.size()) != n)
    throw Error(ErrorCode::kInvalidArgument, "cross-ratio inputs differ in length");
  std::vector<std::vector<double>> e(n, std::vector<double>(n, 1.0));
  for (int i = 0; i < n; ++i) {
    if (ders[i] == 0) throw Error(ErrorCode::kCriticalPoint, "vanishing derivative at a sample point");
    for (int j = 0; j < i; ++j) {
      if (pts[i] == pts[j]) throw Error(ErrorCode::kInvalidArgument, "coincident sample points");
      double dq = (vals[i] - vals[j]) / (pts[i] - pts[j]);
      double inner = dq * dq / (ders[i] * ders[j]);
      if (inner < 0) throw Error(ErrorCode::kInvalidArgument, "derivatives of opposite sign");
      e[i][j] = e[j][i] = std::sqrt(inner);
    }
  }
  return finish(pts, std::move(e));
}

CrossRatioMatrix crossratio_matrix(const RationalMap<Rational>& r, const std::vector<Rational>& pts) {
  int n = static_cast<int>(pts.size());
  std::vector<Rational> vals, ders;
  for (const Rational& x : pts) {
    RationalMap<Rational> rc = r.recentered(x);
    vals.push_back(rc.p()[0]);
    ders.push_back(rc.derivative_at_base());
    if (ders.back() == 0) throw Error(ErrorCode::kCriticalPoint, "vanishing derivative at a sample point");
  }
  std::vector<std::vector<double>> e(n, std::vector<double>(n, 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      if (pts[i] == pts[j]) throw Error(ErrorCode::kInvalidArgument, "coincident sample points");
      Rational dq = (vals[i] - vals[j]) / (pts[i] - pts[j]);
      Rational inner = dq * dq / (ders[i] * ders[j]);
      if (sgn(inner) < 0) throw Error(ErrorCode::kInvalidArgument, "derivatives of opposite sign");
      e[i][j] = e[j][i] = std::sqrt(inner.get_d());
    }
  std::vector<double> dp;
  for (const Rational& x : pts) dp.push_back(x.get_d());
  return finish(dp, std::move(e));
}

std::vector<double> real_poles(const RationalMap<double>& r) {
  const auto& q = r.q().coeffs();
  int n = r.q().degree();
  std::vector<double> out;
  if (n < 1) return out;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -q[i] / q[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  double base = r.base();
  for (int i = 0; i < n; ++i) {
    auto ev = es.eigenvalues()[i];
    if (std::fabs(ev.imag()) <= 1e-9 * std::max(1.0, std::abs(ev))) out.push_back(ev.real() + base);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

using Mat = Eigen::MatrixXd;

Mat apply_fn(const std::function<double(double)>& f, const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  Eigen::VectorXd fl = es.eigenvalues().unaryExpr([&](double v) { return f(v); });
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<std::vector<double>> to_rows(const Mat& m) {
  std::vector<std::vector<double>> r(m.rows(), std::vector<double>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

Mat from_rows(const std::vector<std::vector<double>>& r) {
  Mat m(r.size(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) m(i, j) = r[i].at(j);
  return m;
}

double spectral_norm(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

MonotoneReport matrix_monotone_test(const std::function<double(double)>& f, double lo, double hi, int n,
                                    int trials, std::uint64_t seed, int max_rejections) {
  if (n < 1 || !(lo < hi)) throw Error(ErrorCode::kInvalidArgument, "bad matrix order or interval");
  MonotoneReport rep;
  rep.n = n;
  rep.trials = trials;
  bool first = true;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Mat a, b;
    int attempts = 0;
    for (;; ++attempts) {
      if (attempts >= max_rejections)
        throw Error(ErrorCode::kSamplingFailure, "could not sample a pair with spectra inside U");
      // A = V diag(l) V^T with eigenvalues drawn from U
      Mat g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
      Eigen::HouseholderQR<Mat> qr(g);
      Mat v = qr.householderQ();
      Eigen::VectorXd l(n);
      for (int i = 0; i < n; ++i) l(i) = lo + (hi - lo) * unif(rng);
      a = v * l.asDiagonal() * v.transpose();
      a = 0.5 * (a + a.transpose());
      // B = A + s G G^T, s chosen so that lambda_max(B) < hi
      Mat h(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = gauss(rng);
      Mat p = h * h.transpose();
      double room = hi - l.maxCoeff();
      double s = unif(rng) * room / std::max(spectral_norm(p), 1e-300);
      b = a + s * p;
      b = 0.5 * (b + b.transpose());
      Eigen::SelfAdjointEigenSolver<Mat> ea(a, Eigen::EigenvaluesOnly), eb(b, Eigen::EigenvaluesOnly);
      if (ea.eigenvalues().minCoeff() > lo && eb.eigenvalues().maxCoeff() < hi &&
          eb.eigenvalues().minCoeff() > lo)
        break;
      ++rep.rejections;
    }
    Mat diff = apply_fn(f, b) - apply_fn(f, a);
    diff = 0.5 * (diff + diff.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> ed(diff, Eigen::EigenvaluesOnly);
    double me = ed.eigenvalues().minCoeff();
    double tau = 1e-9 * spectral_norm(b - a);
    double margin = me + tau;
    if (first || me < rep.min_eigenvalue) rep.min_eigenvalue = me;
    if (first || margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_trial = t;
      rep.witness_a = to_rows(a);
      rep.witness_b = to_rows(b);
    }
    first = false;
    if (margin < 0) rep.pass = false;
  }
  return rep;
}

double matrix_pair_check(const std::function<double(double)>& f, const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b) {
  Mat d = apply_fn(f, from_rows(b)) - apply_fn(f, from_rows(a));
  d = 0.5 * (d + d.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace schwarz
