#include "blowup/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blowup {

double WeightedQuadrature::integrate(const std::vector<double>& f) const {
  if (f.size() != nodes.size())
    throw std::invalid_argument("quadrature: sample size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < f.size(); ++i) acc += weights[i] * f[i];
  return acc;
}

namespace {
// Gauss-Hermite nodes/weights for weight e^{-t^2} (Newton iteration on the
// orthonormal recurrence).
void gauss_hermite(int n, std::vector<double>& t, std::vector<double>& w) {
  t.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * t[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * t[1];
    else
      z = 2.0 * z - t[i - 2];

    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    t[i] = z;
    t[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  // ascending node order
  std::reverse(t.begin(), t.end());
  std::reverse(w.begin(), w.end());
}
} // namespace

WeightedQuadrature make_weighted_quadrature(int n, double radius) {
  std::vector<double> t, w;
  gauss_hermite(n, t, w);
  WeightedQuadrature q;
  q.radius = radius;
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    const double y = 2.0 * t[i];
    if (std::abs(y) > radius) continue;
    q.nodes.push_back(y);
    q.weights.push_back(w[i] * inv_sqrt_pi);
  }
  return q;
}

double hermite_poly(int m, double y) {
  if (m < 0) throw std::invalid_argument("hermite_poly: negative degree");
  // closed-form sum over k: m!/(k!(m-2k)!) (-1)^k y^{m-2k}
  double coeff = 1.0;
  double acc = 0.0;
  for (int k = 0;; ++k) {
    const int pw = m - 2 * k;
    acc += coeff * std::pow(y, pw);
    if (pw < 2) break;
    coeff *= -static_cast<double>(pw) * (pw - 1) / (k + 1);
  }
  return acc;
}

HermiteBasis HermiteBasis::build(int max_degree, const WeightedQuadrature& q) {
  HermiteBasis b;
  b.max_degree = max_degree;
  b.norms.resize(max_degree + 1);
  std::vector<double> f(q.nodes.size());
  for (int m = 0; m <= max_degree; ++m) {
    for (size_t i = 0; i < q.nodes.size(); ++i) {
      const double hm = hermite_poly(m, q.nodes[i]);
      f[i] = hm * hm;
    }
    b.norms[m] = q.integrate(f);
  }
  return b;
}

double hermite_project(const std::vector<double>& v, int m,
                       const WeightedQuadrature& q, const HermiteBasis& basis) {
  if (m > basis.max_degree)
    throw std::invalid_argument("hermite_project: degree beyond the basis");
  std::vector<double> f(q.nodes.size());
  for (size_t i = 0; i < q.nodes.size(); ++i)
    f[i] = v[i] * hermite_poly(m, q.nodes[i]);
  return q.integrate(f) / basis.norms[m];
}

SimilarityFrame estimate_blowup_time(const std::vector<PhaseRecord>& records,
                                     const ModelParams& params, int window) {
  if (static_cast<int>(records.size()) < std::max(window, 5))
    throw std::invalid_argument(
        "estimate_blowup_time: need at least 5 completed phases");
  // Deep levels add tau* increments below the resolution of double, so
  // sigma is only required to be non-decreasing.
  for (size_t i = 1; i < records.size(); ++i)
    if (records[i].sigma < records[i - 1].sigma)
      throw std::invalid_argument("estimate_blowup_time: sigma decreasing");

  const double c =
      std::pow(kappa(params) / params.m, params.p - 1.0);
  const int n = static_cast<int>(records.size());
  double acc = 0.0;
  for (int i = n - window; i < n; ++i)
    acc += records[i].sigma + c * records[i].h * records[i].h;
  SimilarityFrame frame;
  frame.T = acc / window;
  double rss = 0.0;
  for (int i = n - window; i < n; ++i) {
    const double r = frame.T - records[i].sigma - c * records[i].h * records[i].h;
    rss += r * r;
  }
  frame.fit_residual = std::sqrt(rss / window);

  const PhaseRecord& last = records.back();
  int imax = 0;
  for (size_t i = 1; i < last.snapshot.size(); ++i)
    if (last.snapshot[i] > last.snapshot[imax]) imax = static_cast<int>(i);
  frame.b = last.y_min + imax * last.h;
  return frame;
}

std::vector<double> phase_gaps(const std::vector<PhaseRecord>& records,
                               const ModelParams& params) {
  // T - sigma_k by backward telescoping of the tau* increments, which stay
  // fully accurate long after sigma itself has saturated in double.  The
  // tail beyond the last phase is closed with the amplitude relation
  // T - sigma_K = (kappa/M)^{p-1} h_K^2.
  const int n = static_cast<int>(records.size());
  if (n == 0) return {};
  std::vector<double> gaps(n);
  const double c = std::pow(kappa(params) / params.m, params.p - 1.0);
  gaps[n - 1] = c * records[n - 1].h * records[n - 1].h;
  for (int i = n - 2; i >= 0; --i)
    gaps[i] = gaps[i + 1] + records[i + 1].tau_star;
  return gaps;
}

WSample sample_similarity(const CompositeSnapshot& snapshot, double b,
                          double gap, const std::vector<double>& y_points,
                          const ModelParams& params) {
  if (!(gap > 0.0))
    throw std::invalid_argument("sample_similarity: nonpositive gap to T");
  const double root = std::sqrt(gap);
  const double amp = std::pow(gap, 1.0 / (params.p - 1.0));

  WSample out;
  out.s = -std::log(gap);
  out.w.resize(y_points.size());
  out.truncated.assign(y_points.size(), false);
  const LevelState& coarsest = snapshot.slices.back();
  for (size_t i = 0; i < y_points.size(); ++i) {
    const double x = b + y_points[i] * root;
    if (x < coarsest.y_min || x > coarsest.y_max()) {
      out.w[i] = 0.0; // Dirichlet exterior
      out.truncated[i] = true;
    } else {
      out.w[i] = amp * snapshot.eval(x);
    }
  }
  return out;
}

WSample to_similarity(const CompositeSnapshot& snapshot,
                      const SimilarityFrame& frame,
                      const std::vector<double>& y_points,
                      const ModelParams& params) {
  if (snapshot.time >= frame.T)
    throw std::invalid_argument("to_similarity: snapshot at or past T");
  return sample_similarity(snapshot, frame.b, frame.T - snapshot.time,
                           y_points, params);
}

namespace {
// centered differences on the (non-uniform) quadrature grid
std::vector<double> gradient(const std::vector<double>& w,
                             const std::vector<double>& y) {
  const int n = static_cast<int>(w.size());
  std::vector<double> g(n);
  for (int i = 1; i < n - 1; ++i)
    g[i] = (w[i + 1] - w[i - 1]) / (y[i + 1] - y[i - 1]);
  g[0] = (w[1] - w[0]) / (y[1] - y[0]);
  g[n - 1] = (w[n - 1] - w[n - 2]) / (y[n - 1] - y[n - 2]);
  return g;
}
} // namespace

double functional_E0(const std::vector<double>& w,
                     const WeightedQuadrature& q, const ModelParams& params) {
  const std::vector<double> g = gradient(w, q.nodes);
  std::vector<double> f(w.size());
  for (size_t i = 0; i < w.size(); ++i)
    f[i] = 0.5 * g[i] * g[i] + w[i] * w[i] / (2.0 * (params.p - 1.0)) -
           std::pow(std::abs(w[i]), params.p + 1.0) / (params.p + 1.0);
  const double val = q.integrate(f);
  if (!std::isfinite(val))
    throw std::runtime_error("functional_E0: non-finite quadrature");
  return val;
}

double functional_I(const std::vector<double>& w, double s,
                    const WeightedQuadrature& q, const ModelParams& params) {
  if (params.mu == 0.0) return 0.0;
  const double ex = std::exp(s / (params.p - 1.0));
  std::vector<double> f(w.size());
  for (size_t i = 0; i < w.size(); ++i) f[i] = eval_H(ex * w[i], params);
  const double val =
      -std::exp(-(params.p + 1.0) / (params.p - 1.0) * s) * q.integrate(f);
  if (!std::isfinite(val))
    throw std::runtime_error("functional_I: non-finite quadrature");
  return val;
}

double functional_E(const std::vector<double>& w, double s,
                    const WeightedQuadrature& q, const ModelParams& params) {
  return functional_E0(w, q, params) + functional_I(w, s, q, params);
}

double functional_J(const std::vector<double>& w, double s,
                    const WeightedQuadrature& q, const ModelParams& params,
                    double gamma, double theta) {
  return functional_E(w, s, q, params) *
             std::exp(gamma / params.a * std::pow(s, -params.a)) +
         theta * std::pow(s, -params.a);
}

LyapunovReport lyapunov_check(const std::vector<WSample>& trajectory,
                              const WeightedQuadrature& q,
                              const ModelParams& params, double gamma,
                              double theta, double rel_tol) {
  LyapunovReport rep;
  for (size_t i = 0; i < trajectory.size(); ++i) {
    if (trajectory[i].w.size() != q.nodes.size())
      throw std::invalid_argument("lyapunov_check: grid mismatch");
    if (i > 0 && trajectory[i].s <= trajectory[i - 1].s)
      throw std::invalid_argument("lyapunov_check: s not increasing");
    rep.s.push_back(trajectory[i].s);
    rep.J.push_back(
        functional_J(trajectory[i].w, trajectory[i].s, q, params, gamma, theta));
  }
  std::vector<double> f(q.nodes.size());
  for (size_t i = 0; i + 1 < trajectory.size(); ++i) {
    const double ds = trajectory[i + 1].s - trajectory[i].s;
    for (size_t j = 0; j < f.size(); ++j) {
      const double dw = (trajectory[i + 1].w[j] - trajectory[i].w[j]) / ds;
      f[j] = dw * dw;
    }
    const double D = -0.5 * q.integrate(f) * ds;
    rep.dissipation.push_back(D);
    const double dJ = rep.J[i + 1] - rep.J[i];
    rep.defect.push_back(dJ - D);
    const double rel = dJ / std::max(std::abs(rep.J[i]), 1e-300);
    rep.worst_increase = std::max(rep.worst_increase, rel);
    if (rel > rel_tol) ++rep.violations;
  }
  return rep;
}

ClassificationReport classify_behavior(const std::vector<WSample>& trajectory,
                                       const PhiSolution& phi,
                                       const WeightedQuadrature& q,
                                       const ModelParams& params) {
  if (trajectory.size() < 10)
    throw std::invalid_argument("classify_behavior: trajectory too short");
  const HermiteBasis basis = HermiteBasis::build(6, q);

  ClassificationReport rep;
  rep.target = -kappa(params) / (4.0 * params.p);
  const int n = static_cast<int>(trajectory.size());
  std::vector<std::vector<double>> coeffs(7);
  std::vector<double> v(q.nodes.size());
  for (const WSample& samp : trajectory) {
    const double ph = phi.eval(samp.s);
    for (size_t i = 0; i < v.size(); ++i) v[i] = samp.w[i] - ph;
    rep.s.push_back(samp.s);
    for (int m = 0; m <= 6; ++m)
      coeffs[m].push_back(hermite_project(v, m, q, basis));
  }
  rep.c2 = coeffs[2];
  for (int i = 0; i < n; ++i) rep.scaled_c2.push_back(rep.s[i] * rep.c2[i]);

  const int tail_start = n - n / 3;
  double max_coeff = 0.0;
  for (int m = 0; m <= 6; ++m)
    for (int i = tail_start; i < n; ++i)
      max_coeff = std::max(max_coeff, std::abs(coeffs[m][i]));
  if (max_coeff < 1e-8) {
    rep.behavior = Behavior::Flat;
    rep.detail = "all Hermite coefficients negligible; w == phi(s)";
    return rep;
  }

  bool stable = true;
  for (int i = tail_start; i < n; ++i)
    if (std::abs(rep.scaled_c2[i] - rep.target) > 0.15 * std::abs(rep.target))
      stable = false;
  if (stable) {
    rep.behavior = Behavior::StableProfile;
    rep.detail = "s*c2(s) settled at -kappa/(4p)";
    return rep;
  }

  // candidate for an exponentially decaying c2 dominated by a higher mode
  double hi = 0.0;
  for (int m = 3; m <= 6; ++m)
    hi = std::max(hi, std::abs(coeffs[m][n - 1]));
  const bool c2_decayed =
      std::abs(rep.c2[n - 1]) < 0.1 * std::abs(rep.c2[tail_start]) ||
      std::abs(rep.c2[n - 1]) < 1e-10;
  if (c2_decayed && hi > 10.0 * std::abs(rep.c2[n - 1])) {
    rep.behavior = Behavior::HigherModeCandidate;
    rep.detail = "c2 decays while a higher coefficient dominates (heuristic)";
    return rep;
  }
  rep.detail = "no clear asymptotic pattern in the sampled window";
  return rep;
}

} // namespace blowup
