#include <doctest.h>

#include <panelcp/change_point.hpp>
#include <panelcp/correlation.hpp>
#include <panelcp/panel_data.hpp>

#include <random>
#include <vector>

#include "oracles.hpp"

using namespace panelcp;

TEST_SUITE("correlation") {

TEST_CASE("rho_hat hand example") {
  Matrix e(1, 3);
  e << 1, -1, 1;
  const AutocovTable rho = rho_hat(PanelMatrix(e), 1.0);
  CHECK(rho.lag(0) == doctest::Approx(1.0));
  CHECK(rho.lag(1) == doctest::Approx(-2.0 / 3.0));
  CHECK(rho.lag(2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("single nonzero entry per row kills positive lags") {
  Matrix e = Matrix::Zero(3, 5);
  e(0, 1) = 2.0;
  e(1, 3) = -1.0;
  e(2, 0) = 0.5;
  const double sigma2 = sigma2_hat(PanelMatrix(e));
  const AutocovTable rho = rho_hat(PanelMatrix(e), sigma2);
  CHECK(rho.lag(0) == doctest::Approx(1.0).epsilon(1e-14));
  for (int ell = 1; ell < 5; ++ell) CHECK(rho.lag(ell) == 0.0);
}

TEST_CASE("lag zero normalizes to one") {
  std::mt19937_64 engine(2025);
  const Matrix y = oracles::random_panel(8, 7, engine);
  const PanelMatrix res = residuals(PanelMatrix(y), 7);
  const double sigma2 = sigma2_hat(res);
  CHECK(rho_hat(res, sigma2).lag(0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("parzen kernel values") {
  CHECK(parzen_kernel(0.0) == doctest::Approx(1.0));
  CHECK(parzen_kernel(0.5) == doctest::Approx(0.25));
  CHECK(parzen_kernel(2.0) == doctest::Approx(0.0));
  // continuity at the branch point and the class requirements
  CHECK(parzen_kernel(0.5 - 1e-12) == doctest::Approx(0.25).epsilon(1e-9));
  for (double x : {0.1, 0.3, 0.7, 0.9, 1.0, 1.7}) {
    CHECK(parzen_kernel(x) == parzen_kernel(-x));
    CHECK(std::abs(parzen_kernel(x)) <= 1.0);
  }
}

TEST_CASE("kernel class validation") {
  KernelSpec bad{[](double) { return 0.5; }, 2.0, "bad"};
  AutocovTable rho{Vector::Zero(5)};
  rho.rho[0] = 1.0;
  CHECK_THROWS_AS(estimate_structure(rho, bad, 5), KernelClassError);

  KernelSpec asym{[](double x) { return x >= 0 ? 1.0 : 0.0; }, 2.0, "asym"};
  CHECK_THROWS_AS(estimate_structure(rho, asym, 5), KernelClassError);
}

TEST_CASE("iid autocorrelation gives the independent tables") {
  AutocovTable rho{Vector::Zero(6)};
  rho.rho[0] = 1.0;
  const CorrelationStructure s = estimate_structure(rho, KernelSpec::parzen(2.0), 6);
  for (int t = 1; t <= 6; ++t) CHECK(s.r(t) == static_cast<double>(t));
  for (int t = 1; t < 6; ++t) {
    for (int v = t + 1; v <= 6; ++v) {
      CHECK(s.R(t, v) == 0.0);
      for (int d = 1; t + d <= v; ++d) CHECK(s.S(t, v, d) == 0.0);
    }
  }
}

TEST_CASE("single positive lag with flat kernel") {
  AutocovTable rho{Vector::Zero(4)};
  rho.rho[0] = 1.0;
  rho.rho[1] = 0.3;
  const CorrelationStructure s =
      estimate_structure(rho, KernelSpec::trivial(10.0), 4);
  CHECK(s.r(1) == doctest::Approx(1.0));
  CHECK(s.r(2) == doctest::Approx(2.6));
}

TEST_CASE("S at shift one equals R exactly") {
  std::mt19937_64 engine(31);
  std::normal_distribution<double> normal;
  AutocovTable rho{Vector(8)};
  rho.rho[0] = 1.0;
  for (int ell = 1; ell < 8; ++ell) rho.rho[ell] = 0.3 * normal(engine);
  const CorrelationStructure s = estimate_structure(rho, KernelSpec::parzen(2.5), 8);
  for (int t = 1; t < 8; ++t) {
    for (int v = t + 1; v <= 8; ++v) CHECK(s.S(t, v, 1) == s.R(t, v));
  }
}

TEST_CASE("analytic structures") {
  const CorrelationStructure iid = analytic_structure_iid(5);
  for (int t = 1; t <= 5; ++t) CHECK(iid.r(t) == static_cast<double>(t));
  CHECK(iid.R(1, 3) == 0.0);
  CHECK(iid.R(2, 5) == 0.0);

  const CorrelationStructure ar = analytic_structure_ar1(0.3, 5);
  CHECK(ar.r(1) == doctest::Approx(1.0));
  CHECK(ar.r(2) == doctest::Approx(2.6));
  CHECK(ar.S(1, 3, 2) == doctest::Approx(0.09));
  CHECK(ar.R(1, 2) == doctest::Approx(0.3));

  CHECK_THROWS_AS(analytic_structure_ar1(1.0, 5), NonStationaryParamsError);
}

TEST_CASE("flat-kernel estimate reproduces the analytic AR(1) tables") {
  const int n_time = 7;
  AutocovTable rho{Vector(n_time)};
  double power = 1.0;
  for (int ell = 0; ell < n_time; ++ell) {
    rho.rho[ell] = power;
    power *= 0.3;
  }
  const CorrelationStructure est =
      estimate_structure(rho, KernelSpec::trivial(static_cast<double>(n_time)), n_time);
  const CorrelationStructure ref = analytic_structure_ar1(0.3, n_time);
  for (int t = 1; t <= n_time; ++t) {
    CHECK(est.r(t) == doctest::Approx(ref.r(t)).epsilon(1e-12));
    for (int v = t + 1; v <= n_time; ++v) {
      CHECK(est.R(t, v) == doctest::Approx(ref.R(t, v)).epsilon(1e-12));
      for (int d = 1; t + d <= v; ++d) {
        CHECK(est.S(t, v, d) == doctest::Approx(ref.S(t, v, d)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("residual autocorrelation matches the centered-moment oracle") {
  // Residual centering biases every lag; the oracle accounts for it.
  const int n_time = 10;
  const int n_panels = 20000;
  std::mt19937_64 engine(2026);

  SUBCASE("iid panels") {
    const Matrix y = oracles::random_panel(n_panels, n_time, engine);
    const PanelMatrix res = residuals(PanelMatrix(y), n_time);
    const AutocovTable rho = rho_hat(res, sigma2_hat(res));
    std::vector<double> truth(n_time, 0.0);
    truth[0] = 1.0;
    for (int ell = 1; ell <= 5; ++ell) {
      CHECK(std::abs(rho.lag(ell) -
                     oracles::expected_centered_rho(truth, ell)) < 0.02);
    }
  }

  SUBCASE("ar1 panels") {
    const double phi = 0.3;
    const Matrix y = oracles::ar1_panel(n_panels, n_time, phi, engine);
    const PanelMatrix res = residuals(PanelMatrix(y), n_time);
    const AutocovTable rho = rho_hat(res, sigma2_hat(res));
    std::vector<double> truth(n_time);
    double power = 1.0;
    for (int ell = 0; ell < n_time; ++ell) {
      truth[ell] = power;
      power *= phi;
    }
    for (int ell = 1; ell <= 3; ++ell) {
      CHECK(std::abs(rho.lag(ell) -
                     oracles::expected_centered_rho(truth, ell)) < 0.02);
    }
  }
}

}  // TEST_SUITE
