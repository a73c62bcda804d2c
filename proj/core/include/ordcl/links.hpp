#pragma once

#include <string>
#include <string_view>

namespace ordcl {

enum class LinkKind { logit, probit, cloglog };

/// Latent distribution G of a cumulative link model.
struct LinkFamily {
  LinkKind kind = LinkKind::logit;

  friend bool operator==(const LinkFamily&, const LinkFamily&) = default;
};

inline constexpr LinkFamily kLogit{LinkKind::logit};
inline constexpr LinkFamily kProbit{LinkKind::probit};
inline constexpr LinkFamily kCloglog{LinkKind::cloglog};

/// Lower bound on cdf values; the upper bound is 1 - kProbabilityFloor.
inline constexpr double kProbabilityFloor = 1e-12;

/// G(eta), clamped to [kProbabilityFloor, 1 - kProbabilityFloor].
/// Throws DomainError for non-finite eta.
double cdf(LinkFamily link, double eta);

/// g(eta) = dG/deta.
double density(LinkFamily link, double eta);

/// g'(eta) = d^2G/deta^2.
double density_deriv(LinkFamily link, double eta);

/// G^{-1}(p) for p in (0, 1).
double quantile(LinkFamily link, double p);

/// True when g is symmetric about zero, i.e. G(eta) = 1 - G(-eta).
bool is_symmetric(LinkFamily link);

/// Parses "logit" | "probit" | "cloglog".
LinkFamily parse_link(std::string_view token);
std::string to_string(LinkFamily link);

}  // namespace ordcl
