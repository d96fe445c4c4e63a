#include "vh/tameness.hpp"

#include "vh/errors.hpp"
#include "vh/parallel.hpp"

#include <cmath>
#include <optional>
#include <iomanip>
#include <ostream>

namespace vh {

DirectionMap map_of(const Body& b, const SolverOptions& options) {
  return [b, options](const Direction& u) { return reverse_gauss_point(b, u, options).point; };
}

DirectionMap map_of(const VirtualBody& v, const SolverOptions& options) {
  return [v, options](const Direction& u) { return virtual_point(v, u, options); };
}

PairCheck check_pair(const DirectionMap& x, const Direction& u, const TangentVector& t, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ValidationError("check_pair: lambda and mu must be positive");
  const Vec x0 = x(u);
  const double sp = (x(boxplus(u, t, lambda)) - x0).dot(t.vec());
  const double sm = (x(boxplus(u, t, -mu)) - x0).dot(t.vec());
  return PairCheck{sp, sm, sp * sm};
}

TamenessVerdict detect_turn(const DirectionMap& x, const Direction& u, const TangentVector& t, double epsilon,
                            int grid) {
  if (!(epsilon > 0.0)) throw ValidationError("detect_turn: epsilon must be positive");
  if (grid < 2) throw ValidationError("detect_turn: grid size must be at least 2");
  TamenessVerdict v{u, t, epsilon, grid, TamenessVerdict::Kind::kSampledTame};
  const Vec x0 = x(u);
  std::vector<double> lam(static_cast<std::size_t>(grid));
  std::vector<double> plus(lam.size());
  std::vector<double> minus(lam.size());
  for (int i = 0; i < grid; ++i) {
    const double l = epsilon * std::ldexp(1.0, -(i + 1));
    lam[static_cast<std::size_t>(i)] = l;
    plus[static_cast<std::size_t>(i)] = (x(boxplus(u, t, l)) - x0).dot(t.vec());
    minus[static_cast<std::size_t>(i)] = (x(boxplus(u, t, -l)) - x0).dot(t.vec());
  }
  for (std::size_t i = 0; i < lam.size(); ++i) {
    for (std::size_t j = 0; j < lam.size(); ++j) {
      const double p = plus[i] * minus[j];
      if (p > kTurnThreshold) {
        v.kind = TamenessVerdict::Kind::kTurn;
        v.lambda = lam[i];
        v.mu = lam[j];
        v.s_plus = plus[i];
        v.s_minus = minus[j];
        v.product = p;
        return v;
      }
    }
  }
  return v;
}

SurveyResult survey(const DirectionMap& x, const EtaNet& net, double tangent_eta, double epsilon, int grid) {
  struct Job {
    Direction u;
    TangentVector t;
  };
  std::vector<Job> jobs;
  for (const auto& u : net.members) {
    for (const auto& t : tangent_eta_net(u, tangent_eta)) jobs.push_back({u, t});
  }
  std::vector<std::optional<TamenessVerdict>> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) rows[i] = detect_turn(x, jobs[i].u, jobs[i].t, epsilon, grid);
  });
  SurveyResult out;
  for (auto& r : rows) {
    if (r->is_turn()) {
      ++out.turns;
    } else {
      ++out.sampled_tame;
    }
    out.rows.push_back(std::move(*r));
  }
  return out;
}

namespace {

void write_vec(std::ostream& out, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ';';
    out << v[i];
  }
}

}  // namespace

void write_survey_csv(const SurveyResult& s, std::ostream& out) {
  out << std::setprecision(17);
  out << "u,t,verdict,lambda,mu,s_plus,s_minus\n";
  for (const auto& r : s.rows) {
    write_vec(out, r.u.vec());
    out << ',';
    write_vec(out, r.t.vec());
    out << ',' << (r.is_turn() ? "TURN" : "SAMPLED_TAME") << ',' << r.lambda << ',' << r.mu << ',' << r.s_plus << ','
        << r.s_minus << '\n';
  }
}

}  // namespace vh
