#include <cmath>
#include <random>

#include "checks.hpp"
#include "doctest.h"
#include "ordcl/errors.hpp"
#include "ordcl/estimation.hpp"
#include "ordcl/inference.hpp"
#include "support.hpp"

using namespace ordcl;

namespace {

void check_close(const Vector& got, std::initializer_list<double> want, double tol) {
  REQUIRE(got.size() == static_cast<Eigen::Index>(want.size()));
  int t = 0;
  for (double w : want) {
    INFO("index " << t << ": got " << got[t] << ", want " << w);
    CHECK(std::abs(got[t] - w) <= tol);
    ++t;
  }
}

OrdinalData two_row(const Matrix& y) {
  Matrix x(2, 1);
  x << -0.5, 0.5;
  return OrdinalData(x, y);
}

}  // namespace

TEST_CASE("score vanishes at the saturated binomial estimate") {
  const OrdinalData data = checks::single_multinomial(Vector{{3.0, 7.0}});
  const Model model = make_model(ModelSpec{}, data);
  const ParamVector delta = Vector::Constant(1, std::log(0.3 / 0.7));
  CHECK(std::abs(score(model, data, delta)[0]) < 1e-12);
}

TEST_CASE("score matches finite differences of the log-likelihood") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const OrdinalData data = testdata::random_data(rng, 2, 3, 1, 2, 8);
    const Model model = make_model(testdata::proportional(1), data);
    const Vector delta = checks::random_increasing_delta(rng, model);
    const auto ll = [&](const Vector& d) { return log_likelihood(model, data, d); };
    CHECK((score(model, data, delta) - oracle::fd_gradient(ll, delta)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(log_likelihood(model, data, delta) ==
          doctest::Approx(oracle::loglik(LinkKind::logit, model.design.blocks, data.y(), delta))
              .epsilon(1e-13));
  }
}

TEST_CASE("oracle agreement for score, information and adjustment") {
  const checks::OracleErrors e = checks::oracles(50, 17);
  CHECK(e.adjustment < 1e-8);
  CHECK(e.score < 1e-6);
  CHECK(e.information < 1e-8);
}

TEST_CASE("adjustment agrees with the general third-moment form") {
  std::mt19937_64 rng(23);
  for (LinkFamily link : {kLogit, kProbit, kCloglog}) {
    const OrdinalData data = testdata::random_data(rng, 3, 4, 1, 2, 4);
    const Model model = make_model(testdata::proportional(1, link), data);
    const Vector delta = checks::random_increasing_delta(rng, model);
    const Vector ref =
        oracle::adjustment_by_moments(link.kind, model.design.blocks, checks::row_totals(data), delta);
    CHECK((score_adjustment(model, data, delta) - ref).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("information of the binomial model is the weighted cross-product") {
  std::mt19937_64 rng(29);
  const OrdinalData data = testdata::random_data(rng, 5, 2, 2, 3, 9);
  for (LinkFamily link : {kLogit, kProbit, kCloglog}) {
    const Model model = make_model(testdata::proportional(2, link), data);
    const Vector delta = Vector{{0.2, 0.5, -0.4}};
    Matrix expected = Matrix::Zero(3, 3);
    for (int r = 0; r < data.rows(); ++r) {
      const Vector z = model.design.blocks[r].row(0).transpose();
      const double eta = z.dot(delta);
      const double pi = oracle::G(link.kind, eta);
      const double w = data.totals()[r] * std::pow(oracle::g(link.kind, eta), 2) / (pi * (1 - pi));
      expected += w * z * z.transpose();
    }
    CHECK((fisher_info(model, data, delta) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("closed forms for a single multinomial under cumulative logits") {
  const checks::ClosedFormErrors e = checks::closed_form(100, 41);
  CHECK(e.rb_vs_empirical_logit < 1e-8);
  CHECK(e.information_diagonal < 1e-10);

  const Vector y{{3.0, 1.0, 4.0, 2.0}};
  const OrdinalData data = checks::single_multinomial(y);
  const Model model = make_model(ModelSpec{}, data);
  const Vector delta{{-1.0, 0.3, 1.2}};
  const AdjustmentTerms terms = adjustment_terms(model, data, delta);
  for (int s = 0; s < 3; ++s) {
    const double gam = 1 / (1 + std::exp(-delta[s]));
    CHECK(terms.c(0, s + 1) == doctest::Approx(0.5 - gam).epsilon(1e-12));
  }
  const Matrix counts = adjusted_counts(model, data, delta);
  check_close(counts.row(0).transpose(), {3.5, 1.0, 4.0, 2.5}, 1e-12);
}

TEST_CASE("binomial adjustment is the leverage-based adjusted count") {
  std::mt19937_64 rng(31);
  for (LinkFamily link : {kLogit, kProbit, kCloglog}) {
    const OrdinalData data = testdata::random_data(rng, 6, 2, 1, 1, 6);
    const Model model = make_model(testdata::proportional(1, link), data);
    const Vector delta{{0.3, -0.8}};
    const Matrix F = fisher_info(model, data, delta);
    const AdjustmentTerms terms = adjustment_terms(model, data, delta);
    for (int r = 0; r < data.rows(); ++r) {
      const Vector z = model.design.blocks[r].row(0).transpose();
      const double eta = z.dot(delta);
      const double pi = oracle::G(link.kind, eta);
      const double m = data.totals()[r];
      const double w = m * std::pow(oracle::g(link.kind, eta), 2) / (pi * (1 - pi));
      const double h = w * z.dot(F.ldlt().solve(z));
      // With working weights that carry m_r the adjusted count is m_r g' h / (2 w).
      CHECK(terms.a(r, 0) == doctest::Approx(m * oracle::gp(link.kind, eta) * h / (2 * w)));
    }
  }
  // For Bernoulli rows (m_r = 1) this is g' h / (2 w) as usually written.
  Matrix x(4, 1);
  x << -1, 0, 0.5, 2;
  Matrix y(4, 2);
  y << 1, 0, 0, 1, 1, 0, 0, 1;
  const OrdinalData bern(x, y);
  const Model model = make_model(testdata::proportional(1), bern);
  const Vector delta{{0.1, 0.7}};
  const Matrix F = fisher_info(model, bern, delta);
  const AdjustmentTerms terms = adjustment_terms(model, bern, delta);
  for (int r = 0; r < 4; ++r) {
    const Vector z = model.design.blocks[r].row(0).transpose();
    const double eta = z.dot(delta);
    const double pi = oracle::G(LinkKind::logit, eta);
    const double w = std::pow(oracle::g(LinkKind::logit, eta), 2) / (pi * (1 - pi));
    const double h = w * z.dot(F.ldlt().solve(z));
    CHECK(terms.a(r, 0) == doctest::Approx(oracle::gp(LinkKind::logit, eta) * h / (2 * w)));
  }
}

TEST_CASE("probit at zero predictors needs no adjustment") {
  Matrix x(2, 1);
  x << -1.0, 1.0;
  Matrix y(2, 2);
  y << 2, 3, 4, 1;
  const OrdinalData data(x, y);
  const Model model = make_model(testdata::proportional(1, kProbit), data);
  const Vector delta{{0.0, 0.0}};
  const AdjustmentTerms terms = adjustment_terms(model, data, delta);
  CHECK(terms.c.cwiseAbs().maxCoeff() == 0.0);
  CHECK(adjusted_counts(model, data, delta).isApprox(y));
}

TEST_CASE("adjusted counts are non-negative and carry the adjusted score") {
  std::mt19937_64 rng(37);
  for (LinkFamily link : {kLogit, kProbit, kCloglog}) {
    for (int rep = 0; rep < 5; ++rep) {
      const OrdinalData data = testdata::random_data(rng, 3, 4, 1, 1, 5);
      const Model model = make_model(testdata::proportional(1, link), data);
      const Vector delta = checks::random_increasing_delta(rng, model);
      const Matrix counts = adjusted_counts(model, data, delta);
      CHECK(counts.minCoeff() >= 0.0);
      const Vector via_counts = score(model, data.with_counts(counts), delta);
      CHECK((via_counts - adjusted_score(model, data, delta)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("wine data: maximum likelihood") {
  const FitResult ml = fit_ml(testdata::wine_spec(), testdata::wine());
  CHECK(ml.converged);
  const Vector se = ml.standard_errors();
  // alpha1..3, contact, temp[2], temp[3]
  const int finite[] = {0, 1, 2, 4, 6, 7};
  const double est[] = {-1.27, 1.10, 3.77, 1.47, 2.15, 2.87};
  const double ses[] = {0.51, 0.44, 0.80, 0.47, 0.59, 0.82};
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(ml.estimates[finite[i]] - est[i]) <= 0.01);
    CHECK(std::abs(se[finite[i]] - ses[i]) <= 0.01);
    CHECK(ml.flags[finite[i]] == BoundaryFlag::finite);
  }
  for (int t : {3, 5, 8}) {
    CHECK(ml.flags[t] == BoundaryFlag::diverging);
    CHECK(se[t] > 1e4);
  }
  CHECK(ml.on_boundary());
  CHECK_THROWS_AS(fit_bc(testdata::wine_spec(), testdata::wine()), UndefinedEstimatorError);
}

TEST_CASE("wine data: reduced bias") {
  const FitResult rb = fit_rb(testdata::wine_spec(), testdata::wine());
  CHECK(rb.converged);
  CHECK_FALSE(rb.on_boundary());
  CHECK(rb.max_abs_score < 1e-10);
  check_close(rb.estimates, {-1.19, 1.06, 3.50, 5.20, 1.40, 2.62, 2.05, 2.65, 2.96}, 0.01);
  check_close(rb.standard_errors(), {0.50, 0.44, 0.74, 1.47, 0.46, 1.52, 0.58, 0.75, 1.50}, 0.01);
}

TEST_CASE("artificial data: both representations") {
  for (const OrdinalData& data : {testdata::artificial_left(), testdata::artificial_right()}) {
    const ModelSpec spec = testdata::proportional(1);
    const FitResult ml = fit_ml(spec, data);
    CHECK(ml.converged);
    CHECK(ml.max_abs_score < 1e-10);
    CHECK(ml.estimates[3] == doctest::Approx(-1.944).epsilon(5e-4));
    CHECK(std::abs(ml.standard_errors()[3] - 0.895) < 5e-4);
    CHECK(ml.flags[2] == BoundaryFlag::plus_infinity);
    CHECK(std::isinf(ml.estimates[2]));
    CHECK(ml.flags[3] == BoundaryFlag::finite);

    const FitResult rb = fit_rb(spec, data);
    CHECK(rb.max_abs_score < 1e-10);
    check_close(rb.estimates, {1.084, 2.781, 4.457, -1.761}, 0.005);
    check_close(rb.standard_errors(), {0.428, 0.701, 1.440, 0.850}, 0.005);

    const FitResult ph_ml = fit_ml(testdata::proportional(1, kCloglog), data);
    check_close(ph_ml.estimates.head(2), {0.313, 1.097}, 0.005);
    CHECK(std::abs(ph_ml.estimates[3] + 0.689) < 0.005);
    const FitResult ph = fit_rb(testdata::proportional(1, kCloglog), data);
    check_close(ph.estimates, {0.297, 1.013, 1.518, -0.635}, 0.005);
    check_close(ph.standard_errors(), {0.219, 0.246, 0.357, 0.389}, 0.005);
  }
  const double left = fit_ml(testdata::proportional(1), testdata::artificial_left()).estimates[3];
  const double right = fit_ml(testdata::proportional(1), testdata::artificial_right()).estimates[3];
  CHECK(std::abs(left - right) < 1e-6);
}

TEST_CASE("constant adjustment depends on the representation") {
  const ModelSpec spec = testdata::proportional(1);
  const FitResult left = fit_constant_adjusted(spec, testdata::artificial_left(), 0.5);
  const FitResult right = fit_constant_adjusted(spec, testdata::artificial_right(), 0.5);
  CHECK(std::abs(left.estimates[3] + 1.097) < 0.001);
  CHECK(std::abs(left.standard_errors()[3] - 0.678) < 0.001);
  CHECK(std::abs(right.estimates[3] + 1.485) < 0.001);
  CHECK(std::abs(right.standard_errors()[3] - 0.741) < 0.001);
  CHECK(std::abs(wald_z(left)[3].p_value - 0.106) < 0.002);
  CHECK(std::abs(wald_z(right)[3].p_value - 0.045) < 0.002);
  CHECK_THROWS_AS(fit_constant_adjusted(spec, testdata::artificial_left(), -1.0), Error);
}

TEST_CASE("maximum likelihood matches a grid search on every 2 x 3 table with m = 2") {
  const auto comps = oracle::compositions(2, 3);
  int interior = 0;
  for (const auto& a : comps) {
    for (const auto& b : comps) {
      Matrix y(2, 3);
      for (int s = 0; s < 3; ++s) {
        y(0, s) = a[s];
        y(1, s) = b[s];
      }
      if ((y.colwise().sum().array() == 0).any()) continue;
      const OrdinalData data = two_row(y);
      const Model model = make_model(testdata::proportional(1), data);
      FitResult ml;
      try {
        ml = fit_ml(model, data);
      } catch (const Error&) {
        continue;
      }
      if (ml.on_boundary()) continue;
      ++interior;

      const auto ll = [&](const Vector& d) -> double {
        if (!(d[1] > d[0])) return -INFINITY;
        return oracle::loglik(LinkKind::logit, model.design.blocks, y, d);
      };
      // Coarse grid, then a shrinking pattern search down to 1e-3 and below.
      Vector best(3);
      double best_ll = -INFINITY;
      for (double a1 = -4; a1 <= 4; a1 += 0.1) {
        for (double a2 = a1 + 0.05; a2 <= 5; a2 += 0.1) {
          for (double be = -6; be <= 6; be += 0.1) {
            const Vector d{{a1, a2, be}};
            const double v = ll(d);
            if (v > best_ll) {
              best_ll = v;
              best = d;
            }
          }
        }
      }
      for (double step = 0.05; step > 1e-10; step *= 0.5) {
        bool moved = true;
        while (moved) {
          moved = false;
          for (int t = 0; t < 3; ++t) {
            for (double sign : {1.0, -1.0}) {
              Vector d = best;
              d[t] += sign * step;
              const double v = ll(d);
              if (v > best_ll) {
                best_ll = v;
                best = d;
                moved = true;
              }
            }
          }
        }
      }
      CHECK(ml.loglik >= best_ll - 1e-10);
      CHECK((ml.estimates - best).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
  CHECK(interior > 0);
}

TEST_CASE("binary responses: reduced bias is Firth logistic regression") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const OrdinalData data = testdata::random_data(rng, 6, 2, 2, 2, 10);
    const Model model = make_model(testdata::proportional(2), data);
    const FitResult rb = fit_rb(model, data);
    Matrix X(data.rows(), 3);
    for (int r = 0; r < data.rows(); ++r) X.row(r) = model.design.blocks[r].row(0);
    const Vector firth =
        oracle::firth_logistic(X, data.y().col(0), data.totals(), Vector::Zero(3));
    CHECK((rb.estimates - firth).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("first-order bias") {
  SUBCASE("zero for the slope at a symmetric null") {
    Matrix y(2, 4);
    y << 2, 3, 1, 4, 3, 2, 2, 3;
    const OrdinalData data = two_row(y);
    const Model model = make_model(testdata::proportional(1), data);
    const Vector b = first_order_bias(model, data, Vector{{-1.0, 0.0, 1.0, 0.0}});
    CHECK(std::abs(b[3]) < 1e-14);
  }

  SUBCASE("matches the simulated bias of sample cumulative logits at m = 200") {
    const int m = 200;
    const Vector gamma{{0.3, 0.65}};
    const Vector delta = (gamma.array() / (1 - gamma.array())).log();
    const OrdinalData data = checks::single_multinomial(Vector{{60.0, 70.0, 70.0}});
    const Vector b = first_order_bias(make_model(ModelSpec{}, data), data, delta);

    std::mt19937_64 rng(47);
    const int draws = 100000;
    Vector sum = Vector::Zero(2), sumsq = Vector::Zero(2);
    for (int i = 0; i < draws; ++i) {
      std::binomial_distribution<int> first(m, gamma[0]);
      const int r1 = first(rng);
      std::binomial_distribution<int> second(m - r1, (gamma[1] - gamma[0]) / (1 - gamma[0]));
      const int r2 = r1 + second(rng);
      for (int s = 0; s < 2; ++s) {
        const double rs = s == 0 ? r1 : r2;
        const double err = std::log(rs / (m - rs)) - delta[s];
        sum[s] += err;
        sumsq[s] += err * err;
      }
    }
    for (int s = 0; s < 2; ++s) {
      const double mean = sum[s] / draws;
      const double se = std::sqrt((sumsq[s] / draws - mean * mean) / draws);
      INFO("s = " << s << ": simulated " << mean << ", first-order " << b[s]);
      CHECK(std::abs(mean - b[s]) < 4 * se + 2e-4);
    }
  }

  SUBCASE("approaches the exact bias as m grows") {
    // Exact mean of the ML estimator over every table with an interior fit;
    // tables with infinite estimates have vanishing probability as m grows.
    const Vector delta{{-0.6, 0.6, 0.5}};
    Vector previous_gap = Vector::Constant(3, INFINITY);
    for (int m : {16, 24}) {
      Matrix y0(2, 3);
      y0 << m - 2, 1, 1, m - 2, 1, 1;
      const OrdinalData shape = two_row(y0);
      const Model model = make_model(testdata::proportional(1), shape);
      const Vector b = first_order_bias(model, shape, delta);
      const Probabilities p = probabilities(model, delta);
      const auto comps = oracle::compositions(m, 3);
      Vector mean = Vector::Zero(3);
      double mass = 0.0;
      for (const auto& a : comps) {
        for (const auto& c : comps) {
          Matrix y(2, 3);
          for (int s = 0; s < 3; ++s) {
            y(0, s) = a[s];
            y(1, s) = c[s];
          }
          if ((y.colwise().sum().array() == 0).any()) continue;
          const OrdinalData data = two_row(y);
          FitResult ml;
          try {
            ml = fit_ml(model, data);
          } catch (const Error&) {
            continue;
          }
          if (ml.on_boundary()) continue;
          const double w = oracle::multinomial_pmf(a, p.pi.row(0).transpose()) *
                           oracle::multinomial_pmf(c, p.pi.row(1).transpose());
          mean += w * ml.estimates;
          mass += w;
        }
      }
      const Vector exact = mean / mass - delta;
      const Vector gap = (exact.array() / b.array() - 1.0).abs();
      INFO("m = " << m << ": exact " << exact.transpose() << ", first-order " << b.transpose());
      CHECK(gap.maxCoeff() < 0.15);
      CHECK((gap.array() < previous_gap.array()).all());
      previous_gap = gap;
    }
  }
}

TEST_CASE("bias correction is one step of the iterative correction from ML") {
  std::mt19937_64 rng(53);
  const OrdinalData data = testdata::random_data(rng, 5, 4, 2, 6, 12);
  const Model model = make_model(testdata::proportional(2), data);
  const FitResult ml = fit_ml(model, data);
  const FitResult bc = bias_correct(ml, model, data);
  const Vector step = iterate_bias_correction(model, data, ml.estimates, 1);
  CHECK((step - bc.estimates).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((bc.estimates - (ml.estimates - first_order_bias(model, data, ml.estimates)))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  // Iterating to a fixed point reaches the reduced-bias estimate.
  const Vector fixed = iterate_bias_correction(model, data, ml.estimates, 60);
  CHECK((fixed - fit_rb(model, data).estimates).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("boundary detection") {
  std::mt19937_64 rng(59);
  const OrdinalData data = testdata::random_data(rng, 6, 4, 1, 15, 25);
  const FitResult ml = fit_ml(testdata::proportional(1), data);
  CHECK_FALSE(ml.on_boundary());

  // An empty interior category ties two cutpoints.
  Matrix y(2, 4);
  y << 3, 0, 2, 1, 1, 0, 2, 3;
  const FitResult tied = fit_ml(testdata::proportional(1), two_row(y));
  CHECK(tied.flags[0] == BoundaryFlag::tied_cutpoint);
  CHECK(tied.flags[1] == BoundaryFlag::tied_cutpoint);
  CHECK(tied.estimates[0] == tied.estimates[1]);
  CHECK(tied.flags[3] == BoundaryFlag::finite);

  // Complete separation sends the slope to infinity.
  Matrix sep(2, 4);
  sep << 0, 0, 0, 3, 1, 1, 1, 0;
  const FitResult separated = fit_ml(testdata::proportional(1), two_row(sep));
  CHECK(separated.flags[3] == BoundaryFlag::diverging);
  CHECK_FALSE(fit_rb(testdata::proportional(1), two_row(sep)).on_boundary());
}

TEST_CASE("non-convergence reports the iteration trace") {
  FitControl control;
  control.max_iter = 1;
  const OrdinalData data = testdata::wine();
  const Model model = make_model(testdata::proportional(2), data);
  try {
    fit_ml(model, data, control);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK_FALSE(e.trace().empty());
  }
}

TEST_CASE("invariances") {
  const checks::InvarianceErrors e = checks::invariances(6, 61);
  CHECK(e.aggregation < 1e-8);
  CHECK(e.reversal < 1e-8);
  CHECK(e.reparameterization < 1e-8);
}
