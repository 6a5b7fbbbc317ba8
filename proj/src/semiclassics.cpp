#include "weylab/semiclassics.hpp"

#include <cmath>
#include <numbers>

namespace weylab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double unit_ball_volume(int d) {
  require(d >= 1, Errc::invalid_argument, "unit_ball_volume: d must be >= 1");
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double weyl_leading(int d, double volume, double lambda) {
  require(d >= 1, Errc::invalid_argument, "weyl_leading: d must be >= 1");
  require(std::isfinite(volume) && volume >= 0.0, Errc::invalid_argument,
          "weyl_leading: volume must be >= 0");
  require(std::isfinite(lambda) && lambda >= 0.0, Errc::invalid_argument,
          "weyl_leading: lambda must be >= 0");
  if (lambda == 0.0) return 0.0;
  return unit_ball_volume(d) / std::pow(2.0 * kPi, d) * volume * std::pow(lambda, 0.5 * d);
}

WeylPrediction ivrii_two_term(int d, double volume, double surface, double lambda,
                              BoundaryCondition bc) {
  require(d >= 2, Errc::invalid_argument, "ivrii_two_term: d must be >= 2");
  require(std::isfinite(surface) && surface > 0.0, Errc::invalid_argument,
          "ivrii_two_term: surface must be positive");
  WeylPrediction p;
  p.d = d;
  p.volume = volume;
  p.surface = surface;
  p.lambda = lambda;
  p.bc = bc;
  p.leading = weyl_leading(d, volume, lambda);
  const double sign = (bc == BoundaryCondition::Dirichlet) ? -1.0 : 1.0;
  const double mag = lambda <= 0.0
                         ? 0.0
                         : 0.25 * unit_ball_volume(d - 1) / std::pow(2.0 * kPi, d - 1) *
                               surface * std::pow(lambda, 0.5 * (d - 1));
  p.second_order = sign * mag;
  p.total = p.leading + p.second_order;
  return p;
}

double mask_integral_pow(const PotentialField& V, const GridMask& m, double p, int d) {
  require(V.values.size() == static_cast<std::size_t>(m.cell_count()), Errc::invalid_argument,
          "mask_integral_pow: field size does not match mask");
  require(p >= 0.0, Errc::invalid_argument, "mask_integral_pow: exponent must be >= 0");
  double sum = 0.0;
  for (double v : V.values) sum += std::pow(std::abs(v), p);
  return sum * ipow(m.h(), d);
}

double phase_space_count(const PotentialField& V, const GridMask& m, int d, double lambda) {
  require(d >= 1, Errc::invalid_argument, "phase_space_count: d must be >= 1");
  require(std::isfinite(lambda) && lambda >= 0.0, Errc::invalid_argument,
          "phase_space_count: lambda must be >= 0");
  const double quad = mask_integral_pow(V, m, 0.5 * d, d);
  return weyl_leading(d, quad, lambda);
}

double lp_norm(const PotentialField& V, const GridMask& m, double p) {
  require(p >= 1.0, Errc::invalid_argument, "lp_norm: p must be >= 1");
  return std::pow(mask_integral_pow(V, m, p, 2), 1.0 / p);
}

ParameterSet solve_parameters(int d, double gamma, double s, std::optional<double> beta) {
  require(d >= 2, Errc::invalid_argument, "solve_parameters: d must be >= 2");
  require(std::isfinite(gamma) && gamma > 0.0 && gamma < 1.0, Errc::invalid_argument,
          "solve_parameters: gamma must lie in (0, 1)");
  require(std::isfinite(s) && s > 1.0, Errc::invalid_argument,
          "solve_parameters: s must exceed 1");
  ParameterSet p;
  p.d = d;
  p.gamma = gamma;
  p.s = s;
  p.s_prime = s / (s - 1.0);
  p.p_tilde = s * (0.5 * d + 0.5 / p.s_prime);
  p.beta = beta.value_or(p.p_tilde * (1.0 / gamma - 1.0) * (d - 1) * 0.5);
  require(std::isfinite(p.beta) && p.beta > 0.0, Errc::invalid_argument,
          "solve_parameters: beta must be positive");
  require(p.p_tilde > 0.5 * d, Errc::invalid_argument,
          "solve_parameters: p_tilde must exceed d/2");
  return p;
}

std::vector<double> evaluate_weight(const WeightSpec& w, const GridMask& m) {
  if (w.kind == WeightSpec::Kind::Unit) {
    return std::vector<double>(static_cast<std::size_t>(m.cell_count()), 1.0);
  }
  require(std::isfinite(w.beta), Errc::invalid_argument,
          "evaluate_weight: beta must be finite");
  const std::vector<double> dist = distance_to_boundary(m);
  std::vector<double> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    out[i] = std::pow(dist[i], -w.beta);
    if (!std::isfinite(out[i])) {
      fail(Errc::singular_weight,
           "evaluate_weight: non-finite weight at ordinal " + std::to_string(i) +
               " (dist = " + std::to_string(dist[i]) + ", beta = " + std::to_string(w.beta) +
               ")");
    }
  }
  return out;
}

NormReport triple_norm(const PotentialField& V, const GridMask& m, const ParameterSet& p,
                       const WeightSpec& w) {
  require(V.values.size() == static_cast<std::size_t>(m.cell_count()), Errc::invalid_argument,
          "triple_norm: field size does not match mask");
  NormReport rep;
  rep.params = p;
  rep.lp_part = std::pow(mask_integral_pow(V, m, 0.5 * p.d, p.d), 2.0 / p.d);

  const std::vector<double> weight = evaluate_weight(w, m);
  double sum = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i)
    sum += weight[i] * std::pow(std::abs(V.values[i]), p.p_tilde);
  rep.weighted_part = std::pow(sum * ipow(m.h(), p.d), 1.0 / p.p_tilde);
  rep.total = rep.lp_part + rep.weighted_part;
  return rep;
}

HoelderBound hoelder_sum_bound(const std::vector<double>& a_values, double s) {
  require(s > 1.0, Errc::invalid_argument, "hoelder_sum_bound: s must exceed 1");
  require(!a_values.empty(), Errc::invalid_argument, "hoelder_sum_bound: empty input");
  const double s_prime = s / (s - 1.0);
  double neg = 0.0, pos = 0.0;
  for (double a : a_values) {
    require(std::isfinite(a) && a > 0.0, Errc::invalid_argument,
            "hoelder_sum_bound: A values must be positive");
    neg += std::pow(a, -s_prime);
    pos += std::pow(a, s);
  }
  HoelderBound hb;
  hb.bound = std::pow(neg, 1.0 / s_prime) * std::pow(pos, 1.0 / s);
  hb.count = static_cast<std::int64_t>(a_values.size());
  return hb;
}

}  // namespace weylab
