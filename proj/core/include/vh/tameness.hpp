#pragma once

#include "vh/body.hpp"
#include "vh/reverse_gauss.hpp"
#include "vh/sphere.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace vh {

/// Continuous direction-indexed map S^{n-1} -> R^n, e.g. u -> x_{K,L}(u).
using DirectionMap = std::function<Vec(const Direction&)>;

DirectionMap map_of(const Body& b, const SolverOptions& options = {});
DirectionMap map_of(const VirtualBody& v, const SolverOptions& options = {});

struct PairCheck {
  double s_plus;
  double s_minus;
  double product;
};

/// Directional increments <x(u [+] lambda t) - x(u), t> and
/// <x(u [+] -mu t) - x(u), t> together with their product.
PairCheck check_pair(const DirectionMap& x, const Direction& u, const TangentVector& t, double lambda, double mu);

/// Products above this count as a turn.
inline constexpr double kTurnThreshold = 1e-12;

struct TamenessVerdict {
  enum class Kind { kTurn, kSampledTame };
  Direction u;
  TangentVector t;
  double epsilon;
  int grid;
  Kind kind;
  /// Witness of a turn; zero for sampled-tame verdicts.
  double lambda = 0.0;
  double mu = 0.0;
  double s_plus = 0.0;
  double s_minus = 0.0;
  double product = 0.0;

  bool is_turn() const noexcept { return kind == Kind::kTurn; }
};

/// Scans lambda_i = mu_i = epsilon 2^-i, i = 1..grid, for a pair with
/// product above kTurnThreshold. A sampled-tame verdict never proves
/// tameness; it only reports that the grid found no witness.
TamenessVerdict detect_turn(const DirectionMap& x, const Direction& u, const TangentVector& t, double epsilon,
                            int grid);

struct SurveyResult {
  std::vector<TamenessVerdict> rows;
  std::size_t turns = 0;
  std::size_t sampled_tame = 0;
};

/// detect_turn over every u in the net and every tangent of
/// tangent_eta_net(u, tangent_eta).
SurveyResult survey(const DirectionMap& x, const EtaNet& net, double tangent_eta, double epsilon, int grid);

/// CSV with header u,t,verdict,lambda,mu,s_plus,s_minus; vector fields are
/// semicolon-separated coordinates.
void write_survey_csv(const SurveyResult& s, std::ostream& out);

}  // namespace vh
