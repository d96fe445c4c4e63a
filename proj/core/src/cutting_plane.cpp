#include "clip_polytope.hpp"
#include "vh/errors.hpp"
#include "vh/reverse_gauss.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace vh {

namespace {

double coordinate_scale(const Polytope& p) {
  double s = 1.0;
  for (const auto& v : p.vertices()) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

/// Indices of the `count` constraints whose normals align best with u.
std::vector<int> best_aligned(const RoundedBody& rb, const Vec& u, std::size_t count) {
  const std::size_t m = rb.constraint_count();
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> a(m);
  for (std::size_t j = 0; j < m; ++j) a[j] = rb.base().facets()[j].normal.vec().dot(u);
  count = std::min(count, m);
  auto better = [&](int x, int y) {
    const double ax = a[static_cast<std::size_t>(x)];
    const double ay = a[static_cast<std::size_t>(y)];
    return ax > ay || (ax == ay && x < y);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(), better);
  idx.resize(count);
  return idx;
}

/// Smallest eigenvalue of sum_k lambda_k kappa_k P_k restricted to the
/// orthogonal complement of the active gradients.
double second_order_margin(const RoundedBody& rb, const Vec& x, const std::vector<int>& active,
                           const std::vector<double>& lambda) {
  const int n = rb.dim();
  Eigen::MatrixXd g(static_cast<Eigen::Index>(active.size()), n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const int j = active[k];
    g.row(static_cast<Eigen::Index>(k)) = rb.profile_gradient(j, x).transpose();
    const Vec& uj = rb.base().facet(j).normal.vec();
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - uj * uj.transpose();
    h += lambda[k] * rb.curvature(j) * proj;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  const Eigen::MatrixXd z = lu.kernel();
  if (lu.rank() == n || z.cols() == 0 || z.isZero()) return std::numeric_limits<double>::infinity();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, z.cols());
  const Eigen::MatrixXd reduced = q.transpose() * h * q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  return es.eigenvalues()(0);
}

struct KktResult {
  bool ok = false;
  Vec x;
  std::vector<double> lambda;
};

/// Newton iteration on the KKT system of max <u, x> s.t. g_k(x) = 0, k in S.
KktResult kkt_newton(const RoundedBody& rb, const Vec& u, const std::vector<int>& set, const Vec& start,
                     double scale) {
  const int n = rb.dim();
  const int s = static_cast<int>(set.size());
  KktResult out;
  Vec x = start;
  Eigen::MatrixXd g(s, n);
  auto gradients = [&](const Vec& at) {
    for (int k = 0; k < s; ++k) g.row(k) = rb.profile_gradient(set[static_cast<std::size_t>(k)], at).transpose();
  };
  gradients(x);
  Eigen::VectorXd lambda = g.transpose().colPivHouseholderQr().solve(Eigen::VectorXd(u));
  auto residual = [&](const Vec& at, const Eigen::VectorXd& lam, Eigen::VectorXd& f) {
    gradients(at);
    f.resize(n + s);
    f.head(n) = Eigen::VectorXd(u) - g.transpose() * lam;
    for (int k = 0; k < s; ++k) f[n + k] = rb.profile_value(set[static_cast<std::size_t>(k)], at);
  };
  Eigen::VectorXd f;
  residual(x, lambda, f);
  for (int it = 0; it < 40; ++it) {
    if (f.lpNorm<Eigen::Infinity>() < 1e-13 * scale) {
      out.ok = true;
      break;
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + s, n + s);
    for (int k = 0; k < s; ++k) {
      const int j = set[static_cast<std::size_t>(k)];
      const Vec& uj = rb.base().facet(j).normal.vec();
      const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - uj * uj.transpose();
      jac.topLeftCorner(n, n) -= lambda[k] * rb.curvature(j) * proj;
    }
    jac.topRightCorner(n, s) = -g.transpose();
    jac.bottomLeftCorner(s, n) = g;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.rank() < n + s) return out;
    const Eigen::VectorXd step = lu.solve(-f);
    if (!step.allFinite()) return out;
    double t = 1.0;
    const double f0 = f.norm();
    Vec trial_x;
    Eigen::VectorXd trial_l;
    Eigen::VectorXd trial_f;
    bool decreased = false;
    for (int ls = 0; ls < 12 && !decreased; ++ls, t *= 0.5) {
      trial_x = x + t * Vec(step.head(n));
      trial_l = lambda + t * step.tail(s);
      residual(trial_x, trial_l, trial_f);
      decreased = trial_f.norm() <= (1.0 - 1e-4 * t) * f0;
    }
    if (!decreased) return out;
    x = trial_x;
    lambda = trial_l;
    f = trial_f;
    if (it == 39 && f.lpNorm<Eigen::Infinity>() < 1e-12 * scale) out.ok = true;
  }
  if (!out.ok) return out;
  out.x = x;
  out.lambda.assign(lambda.data(), lambda.data() + s);
  for (double l : out.lambda) {
    if (l < -1e-12) out.ok = false;
  }
  return out;
}

/// Tries every subset (by size, then rank) of the near-active constraints.
/// Candidates come first from `hint` (constraints incident to the outer
/// maximizer), then by violation rank; a subset must pass the cheap check
/// over `screen` before the global feasibility check.
bool polish(const RoundedBody& rb, const Vec& u, const Vec& start, double scale, double feas_tol,
            const std::vector<int>& hint, const std::vector<int>& screen, bool exhaustive, SupportPoint& result,
            SolverReport& rep) {
  const std::size_t m = rb.constraint_count();
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(m);
  for (std::size_t j = 0; j < m; ++j) ranked.emplace_back(-rb.profile_value(static_cast<int>(j), start), static_cast<int>(j));
  const std::size_t keep = std::min<std::size_t>(8, m);
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end());
  std::vector<int> cand;
  for (int j : hint) {
    if (j >= 0 && std::find(cand.begin(), cand.end(), j) == cand.end()) cand.push_back(j);
  }
  for (std::size_t k = 0; k < keep; ++k) {
    if (std::find(cand.begin(), cand.end(), ranked[k].second) == cand.end()) cand.push_back(ranked[k].second);
  }
  auto screened = [&](const Vec& x) {
    for (int j : screen) {
      if (rb.profile_value(j, x) > feas_tol) return false;
    }
    return true;
  };

  const int n = rb.dim();
  std::vector<int> subset;
  bool found = false;
  auto visit = [&](auto&& self, std::size_t from, int size) -> void {
    if (found) return;
    if (static_cast<int>(subset.size()) == size) {
      KktResult r = kkt_newton(rb, u, subset, start, scale);
      if (!r.ok || !screened(r.x)) return;
      const double viol = rb.max_violation(r.x);
      if (viol > feas_tol) return;
      found = true;
      result.point = r.x;
      result.support = r.x.dot(u);
      rep.active = subset;
      rep.multipliers = r.lambda;
      rep.max_violation = viol;
      rep.second_order = second_order_margin(rb, r.x, subset, r.lambda);
      return;
    }
    for (std::size_t k = from; k < cand.size(); ++k) {
      subset.push_back(cand[k]);
      self(self, k + 1, size);
      subset.pop_back();
      if (found) return;
    }
  };
  std::vector<int> first;
  for (int j : hint) {
    if (j >= 0 && std::find(first.begin(), first.end(), j) == first.end()) first.push_back(j);
  }
  if (!first.empty() && static_cast<int>(first.size()) <= n) {
    // Every nonempty subset of the incident constraints, larger first.
    const unsigned full = (1u << first.size()) - 1u;
    for (int size = static_cast<int>(first.size()); size >= 1 && !found; --size) {
      for (unsigned mask = full; mask > 0 && !found; --mask) {
        if (std::popcount(mask) != size) continue;
        subset.clear();
        for (std::size_t b = 0; b < first.size(); ++b) {
          if (mask & (1u << b)) subset.push_back(first[b]);
        }
        visit(visit, cand.size(), size);
      }
    }
    subset.clear();
  }
  if (!exhaustive) return found;
  for (int size = 1; size <= n && !found; ++size) visit(visit, 0, size);
  return found;
}

}  // namespace

SupportPoint solve_rounded(const RoundedBody& rb, const Direction& dir, const SolverOptions& options,
                           SolverReport* report) {
  if (dir.dim() != rb.dim()) throw ValidationError("direction dimension does not match the body");
  SolverReport local;
  SolverReport& rep = report ? *report : local;
  rep = SolverReport{};
  const Vec& u = dir.vec();
  const double scale = coordinate_scale(rb.base());
  const double feas_tol = options.feasibility_tol * scale;
  const double eps = rb.epsilon();
  SupportPoint result{dir, Vec::Zero(rb.dim()), 0.0};

  std::vector<int> work = best_aligned(rb, u, static_cast<std::size_t>(std::max({1, options.working_set, 8})));
  if (options.warm_start) {
    for (std::size_t c = 0; c < std::min<std::size_t>(8, work.size()); ++c) {
      const int j = work[c];
      const Vec& uj = rb.base().facet(j).normal.vec();
      const double a = u.dot(uj);
      if (!(a > 0.0)) continue;
      const double rho = rb.rho()[static_cast<std::size_t>(j)];
      const Vec w = (rho * rho / (2.0 * eps * a)) * (u - a * uj);
      const Vec x = rb.touch_points()[static_cast<std::size_t>(j)] + w + (eps - eps * w.squaredNorm() / (rho * rho)) * uj;
      bool local = true;
      for (int i : work) local = local && rb.profile_value(i, x) <= feas_tol;
      if (!local) continue;
      const double viol = rb.max_violation(x);
      if (viol <= feas_tol) {
        rep.route = SolverReport::Route::kClosedForm;
        rep.active = {j};
        rep.multipliers = {a};
        rep.max_violation = viol;
        rep.second_order = second_order_margin(rb, x, rep.active, rep.multipliers);
        result.point = x;
        result.support = x.dot(u);
        return result;
      }
    }
  }

  // Kelley cutting planes over a working set, seeded by alignment.
  Vec lo = rb.base().vertices().front();
  Vec hi = lo;
  for (const auto& v : rb.base().vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double pad = eps + *std::max_element(rb.rho().begin(), rb.rho().end());
  lo.array() -= pad;
  hi.array() += pad;
  detail::ClipPolytope outer(lo, hi);
  work.resize(std::min(work.size(), static_cast<std::size_t>(std::max(1, options.working_set))));
  std::vector<char> in_work(rb.constraint_count(), 0);
  for (int j : work) in_work[static_cast<std::size_t>(j)] = 1;

  std::ostringstream trace;
  double prev_obj = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    rep.iterations = it + 1;
    const int vi = outer.argmax(u);
    const Vec x = outer.vertex(vi);
    const double obj = x.dot(u);
    int worst = -1;
    double viol = -std::numeric_limits<double>::infinity();
    for (int j : work) {
      const double g = rb.profile_value(j, x);
      if (g > viol) {
        viol = g;
        worst = j;
      }
    }
    if (it < 64 || it % 50 == 0) trace << "it " << it << " obj " << obj << " viol " << viol << '\n';

    const bool stalled = prev_obj - obj < options.decrement_tol && viol < 1e-8 * scale;
    if (viol < options.violation_tol * scale || stalled || viol < 1e-6 * scale) {
      int global_arg = -1;
      const double global = rb.max_violation(x, &global_arg);
      if (global > viol + 1e-15 && !in_work[static_cast<std::size_t>(global_arg)] &&
          global >= options.violation_tol * scale) {
        work.push_back(global_arg);
        in_work[static_cast<std::size_t>(global_arg)] = 1;
        worst = global_arg;
        viol = global;
      } else {
        SupportPoint polished = result;
        const bool final_try = global < options.violation_tol * scale || stalled;
        if (polish(rb, u, x, scale, feas_tol, outer.incident_labels(vi), work, final_try, polished, rep)) {
          rep.route = SolverReport::Route::kKkt;
          rep.gap = obj - polished.support;
          double diam = 0.0;
          std::vector<Vec> face;
          for (int v : outer.live_vertices()) {
            if (outer.vertex(v).dot(u) >= obj - 1e-9 * scale) face.push_back(outer.vertex(v));
          }
          for (std::size_t a = 0; a < face.size(); ++a) {
            for (std::size_t b = a + 1; b < face.size(); ++b) diam = std::max(diam, (face[a] - face[b]).norm());
          }
          rep.outer_face_diameter = diam;
          return polished;
        }
        if (final_try) {
          rep.route = SolverReport::Route::kKelley;
          rep.max_violation = global;
          rep.gap = 0.0;
          rep.second_order = 0.0;
          result.point = x;
          result.support = obj;
          return result;
        }
      }
    }
    prev_obj = obj;
    // Tangent cut of the most violated cap at x.
    const Vec grad = rb.profile_gradient(worst, x);
    const double gnorm = grad.norm();
    const double rhs = grad.dot(x) - rb.profile_value(worst, x);
    const auto cut = outer.cut(grad / gnorm, rhs / gnorm, worst, 1e-14 * scale);
    if (cut == detail::ClipPolytope::Cut::kEmpty) {
      throw SolverError("cutting-plane relaxation became empty", trace.str());
    }
  }
  throw SolverError("cutting-plane solver did not converge within " + std::to_string(options.max_iterations) +
                        " iterations",
                    trace.str());
}

}  // namespace vh
