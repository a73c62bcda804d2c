#include "ordcl/links.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "ordcl/errors.hpp"

namespace ordcl {
namespace {

void require_finite(double eta) {
  if (!std::isfinite(eta)) {
    throw DomainError("link function evaluated at a non-finite predictor");
  }
}

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double raw_cdf(LinkKind kind, double eta) {
  switch (kind) {
    case LinkKind::logit:
      return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta))
                      : std::exp(eta) / (1.0 + std::exp(eta));
    case LinkKind::probit:
      return 0.5 * std::erfc(-eta * kInvSqrt2);
    case LinkKind::cloglog:
      return -std::expm1(-std::exp(eta));
  }
  return 0.0;
}

}  // namespace

double cdf(LinkFamily link, double eta) {
  require_finite(eta);
  return std::clamp(raw_cdf(link.kind, eta), kProbabilityFloor,
                    1.0 - kProbabilityFloor);
}

double density(LinkFamily link, double eta) {
  require_finite(eta);
  switch (link.kind) {
    case LinkKind::logit: {
      const double e = std::exp(-std::abs(eta));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case LinkKind::probit:
      return kInvSqrt2Pi * std::exp(-0.5 * eta * eta);
    case LinkKind::cloglog:
      return std::exp(eta - std::exp(eta));
  }
  return 0.0;
}

double density_deriv(LinkFamily link, double eta) {
  require_finite(eta);
  switch (link.kind) {
    case LinkKind::logit: {
      // g (1 - 2G), with 1 - 2G written as tanh(-eta/2) for accuracy in the tails
      return density(link, eta) * std::tanh(-0.5 * eta);
    }
    case LinkKind::probit:
      return -eta * density(link, eta);
    case LinkKind::cloglog:
      return density(link, eta) * (1.0 - std::exp(eta));
  }
  return 0.0;
}

double quantile(LinkFamily link, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("link quantile requires a probability in (0, 1)");
  }
  switch (link.kind) {
    case LinkKind::logit:
      return std::log(p) - std::log1p(-p);
    case LinkKind::probit:
      return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    case LinkKind::cloglog:
      return std::log(-std::log1p(-p));
  }
  return 0.0;
}

bool is_symmetric(LinkFamily link) {
  return link.kind == LinkKind::logit || link.kind == LinkKind::probit;
}

LinkFamily parse_link(std::string_view token) {
  if (token == "logit") return kLogit;
  if (token == "probit") return kProbit;
  if (token == "cloglog") return kCloglog;
  throw Error("unknown link '" + std::string(token) +
              "' (expected logit, probit or cloglog)");
}

std::string to_string(LinkFamily link) {
  switch (link.kind) {
    case LinkKind::logit:
      return "logit";
    case LinkKind::probit:
      return "probit";
    case LinkKind::cloglog:
      return "cloglog";
  }
  return "unknown";
}

}  // namespace ordcl
