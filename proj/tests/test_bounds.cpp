#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "pflab/bounds.hpp"
#include "pflab/models.hpp"
#include "testutil.hpp"

using namespace pflab;

namespace {

TwoPartHamiltonian xz_model() {
  return custom_model(1, std::vector<std::string>{"1.0 X"},
                      std::vector<std::string>{"1.0 Z"});
}

TwoPartHamiltonian commuting_model() {
  return custom_model(2, std::vector<std::string>{"1.0 ZI"},
                      std::vector<std::string>{"1.0 IZ"});
}

// Brute-force first-order error for the X/Z model: explicit 2x2 complex
// products, no eigendecomposition, no powering tricks.
double naive_xz_pf1_error(double t, int r) {
  using M = std::array<std::array<Complex, 2>, 2>;
  auto mul = [](const M& a, const M& b) {
    M c{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
  };
  const double dt = t / r;
  // e^{-iX dt} = cos dt I - i sin dt X ; e^{-iZ dt} = diag(e^{-i dt}, e^{+i dt})
  const Complex mi(0, -1);
  const M ex{{{std::cos(dt), mi * std::sin(dt)}, {mi * std::sin(dt), std::cos(dt)}}};
  const M ez{{{std::polar(1.0, -dt), 0.0}, {0.0, std::polar(1.0, dt)}}};
  const M step = mul(ez, ex);  // H1 = X applied first

  M u{{{1.0, 0.0}, {0.0, 1.0}}};
  for (int k = 0; k < r; ++k) u = mul(step, u);

  // exact: H = X + Z = sqrt(2) * (X+Z)/sqrt(2), so
  // e^{-iHt} = cos(sqrt2 t) I - i sin(sqrt2 t) (X+Z)/sqrt2
  const double s2 = std::sqrt(2.0);
  const Complex c = std::cos(s2 * t), s = std::sin(s2 * t);
  const M exact{{{c + mi * s / s2, mi * s / s2}, {mi * s / s2, c - mi * s / s2}}};

  M diff{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) diff[i][j] = exact[i][j] - u[i][j];
  // spectral norm of a 2x2 via the eigenvalues of D^dag D (closed form)
  const double a = std::norm(diff[0][0]) + std::norm(diff[1][0]);
  const double d = std::norm(diff[0][1]) + std::norm(diff[1][1]);
  const Complex b = std::conj(diff[0][0]) * diff[0][1] + std::conj(diff[1][0]) * diff[1][1];
  const double tr = a + d;
  const double det = a * d - std::norm(b);
  const double lambda = (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det))) / 2.0;
  return std::sqrt(lambda);
}

}  // namespace

TEST_CASE("coefficients for the X/Z pair are exact") {
  const BoundCoefficients c = coefficients(xz_model(), NormKind::spectral);
  CHECK(c.norm_h1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.norm_h2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.c2 == doctest::Approx(1.0).epsilon(1e-12));  // ||-2iY||/2
  CHECK(c.s[0] == doctest::Approx(4.0).epsilon(1e-12));  // [X,[X,Z]] = 4Z
  CHECK(c.s[1] == doctest::Approx(4.0).epsilon(1e-12));  // [Z,[Z,X]] = 4X
  CHECK(c.c3 == doctest::Approx(0.5).epsilon(1e-12));    // (4 + 2)/12
  CHECK(c.clamp == 2.0);
}

TEST_CASE("coefficients are invariant under part swap") {
  const auto model = heisenberg_1d_seeded(4, 9);
  const TwoPartHamiltonian swapped{model.h2, model.h1, model.n, model.label,
                                   model.disorder};
  const BoundCoefficients a = coefficients(model, NormKind::spectral);
  const BoundCoefficients b = coefficients(swapped, NormKind::spectral);
  CHECK(a.c1 == doctest::Approx(b.c1).epsilon(1e-12));
  CHECK(a.c2 == doctest::Approx(b.c2).epsilon(1e-12));
  CHECK(a.c3 == doctest::Approx(b.c3).epsilon(1e-12));
  CHECK(a.s[0] == doctest::Approx(b.s[1]).epsilon(1e-12));
  CHECK(a.s[1] == doctest::Approx(b.s[0]).epsilon(1e-12));
}

TEST_CASE("commuting parts have vanishing c2 and c3") {
  const BoundCoefficients c = coefficients(commuting_model(), NormKind::spectral);
  CHECK(c.c2 == 0.0);
  CHECK(c.c3 == 0.0);
  CHECK(c.c1 == doctest::Approx(1.0));
}

TEST_CASE("bound_main arithmetic") {
  BoundCoefficients c;
  c.c1 = 1.0;
  c.c2 = 1.0;
  c.c3 = 0.5;
  c.clamp = 2.0;
  CHECK(bound_main(c, 1.0, 10) == doctest::Approx(0.1));  // min(0.1, 0.1005, 2)
  CHECK(bound_main(c, 0.0, 10) == 0.0);
  CHECK(bound_main(c, 1e6, 1) == 2.0);  // clamp
  CHECK_THROWS_AS(bound_main(c, -1.0, 10), InputError);
  CHECK_THROWS_AS(bound_main(c, 1.0, 0), InputError);
}

TEST_CASE("general first-order bound") {
  const auto model = xz_model();
  const std::vector<PauliSum> parts{model.h1, model.h2};
  // (t^2/2r) ||[Z,X]|| with t=2, r=4: (4/8)·2 = 1
  CHECK(bound_pf1_general(parts, 2.0, 4, NormKind::spectral) == doctest::Approx(1.0));

  // single part: empty inner sum
  const std::vector<PauliSum> single{model.h1};
  CHECK(bound_pf1_general(single, 5.0, 3, NormKind::spectral) == 0.0);

  // three mutually commuting parts
  std::vector<PauliSum> commuting;
  for (int q = 0; q < 3; ++q) {
    PauliSum p(3);
    p.add_term(PauliString::single(3, q, Axis::Z), 1.0);
    commuting.push_back(p);
  }
  CHECK(bound_pf1_general(commuting, 2.0, 2, NormKind::spectral) == 0.0);

  // L = 2 reduces to c2 t^2 / r
  const BoundCoefficients c = coefficients(model, NormKind::spectral);
  CHECK(bound_pf1_general(parts, 3.0, 7, NormKind::spectral) ==
        doctest::Approx(bound_pf1(c, 3.0, 7)).epsilon(1e-12));
}

TEST_CASE("general second-order bound") {
  const auto model = xz_model();
  const std::vector<PauliSum> parts{model.h1, model.h2};
  // (1/12)(||[Z,[Z,X]]|| + ||[X,[X,Z]]||/2) = (4 + 2)/12 = 0.5
  CHECK(bound_pf2_general(parts, 1.0, 1, NormKind::spectral) == doctest::Approx(0.5));

  const auto comm = commuting_model();
  const std::vector<PauliSum> cparts{comm.h1, comm.h2};
  CHECK(bound_pf2_general(cparts, 3.0, 2, NormKind::spectral) == 0.0);

  // matches the coefficient-based variant for L = 2
  const BoundCoefficients c = coefficients(model, NormKind::spectral);
  CHECK(bound_pf2_general(parts, 2.5, 9, NormKind::spectral) ==
        doctest::Approx(bound_pf2(c, 2.5, 9)).epsilon(1e-12));
}

TEST_CASE("second-order empirical error respects its bound") {
  EvolutionContext ctx(xz_model());
  const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
  const SimulationParams params{1.0, 8};
  const double emp = empirical_error(ctx, params, PfOrder::second, NormKind::spectral);
  CHECK(emp <= bound_pf2(c, params.t, params.r) + 1e-8);
}

TEST_CASE("empirical error basics") {
  EvolutionContext commuting(commuting_model());
  CHECK(empirical_error(commuting, {5.0, 7}, PfOrder::first, NormKind::spectral) < 1e-10);

  EvolutionContext ctx(xz_model());
  CHECK(empirical_error(ctx, {0.0, 5}, PfOrder::first, NormKind::spectral) < 1e-14);

  // an empty second part makes the first-order formula exact
  EvolutionContext single(custom_model(2, std::vector<std::string>{"1.0 XX"}, {}));
  CHECK(empirical_error(single, {3.0, 5}, PfOrder::first, NormKind::spectral) < 1e-10);
}

TEST_CASE("empirical error matches the naive 2x2 oracle") {
  EvolutionContext ctx(xz_model());
  const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
  const SimulationParams params{1.0, 10};
  const double emp = empirical_error(ctx, params, PfOrder::first, NormKind::spectral);
  const double oracle = naive_xz_pf1_error(1.0, 10);
  CHECK(emp == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(emp <= bound_main(c, params.t, params.r) + 1e-8);
}

TEST_CASE("boundary term bound branches") {
  const BoundCoefficients c = coefficients(xz_model(), NormKind::spectral);
  const BoundaryBound b = boundary_term_bound(c, 1.0, 10);
  CHECK(b.branch_h1 == doctest::Approx(0.1));
  CHECK(b.branch_h2 == doctest::Approx(0.1));
  CHECK(b.branch_commutator == doctest::Approx(0.1));  // (t^2/2r)·2 = 0.1
  CHECK(b.value == doctest::Approx(0.1));

  // small t selects the commutator branch: (t/2)||[H1,H2]|| < min(||H1||,||H2||)
  const BoundaryBound small = boundary_term_bound(c, 0.1, 10);
  CHECK(small.branch_commutator < small.branch_h1);
  CHECK(small.value == doctest::Approx(small.branch_commutator));
}

TEST_CASE("kubo chain on commuting parts is exactly zero") {
  EvolutionContext ctx(commuting_model());
  const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
  const KuboChain chain = measure_kubo_chain(ctx, c, 2.0, 4, NormKind::spectral);
  CHECK(chain.measured < 1e-12);
  CHECK(chain.bound.branch_commutator == 0.0);
}

TEST_CASE("kubo chain inequalities hold pointwise") {
  EvolutionContext ctx(heisenberg_1d_seeded(4, 77));
  const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> log_t(std::log(0.1), std::log(20.0));
  for (int trial = 0; trial < 8; ++trial) {
    const double t = std::exp(log_t(rng));
    const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 500);
    const KuboChain chain = measure_kubo_chain(ctx, c, t, r, NormKind::spectral);
    CHECK(chain.measured <= chain.middle + 1e-9);
    CHECK(chain.middle <= chain.bound.value + 1e-9);
    // [e^{-iHt}, H1] = -[e^{-iHt}, H2]
    CHECK(std::abs(chain.middle - chain.middle_via_h2) <=
          1e-10 * std::max(1.0, chain.middle));
  }
}

TEST_CASE("triangle decomposition of the first-order error") {
  EvolutionContext ctx(heisenberg_1d_seeded(3, 12));
  const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
  for (const SimulationParams params : {SimulationParams{1.0, 3},
                                        SimulationParams{4.0, 17},
                                        SimulationParams{9.0, 120}}) {
    const double emp1 = empirical_error(ctx, params, PfOrder::first, NormKind::spectral);
    const double emp2 = empirical_error(ctx, params, PfOrder::second, NormKind::spectral);
    const KuboChain chain =
        measure_kubo_chain(ctx, c, params.t, params.r, NormKind::spectral);
    CHECK(emp1 <= emp2 + chain.measured + 1e-8);
  }
}

TEST_CASE("bound validity on random small models") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    TwoPartHamiltonian model{testutil::random_sum(rng, n, 3, true),
                             testutil::random_sum(rng, n, 3, true), n, "random", {}};
    EvolutionContext ctx(std::move(model));
    const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
    std::uniform_real_distribution<double> log_t(std::log(0.05), std::log(30.0));
    for (int point = 0; point < 4; ++point) {
      const SimulationParams params{std::exp(log_t(rng)),
                                    1 + static_cast<std::int64_t>(rng() % 300)};
      const double emp1 =
          empirical_error(ctx, params, PfOrder::first, NormKind::spectral);
      CHECK(emp1 <= bound_main(c, params.t, params.r) + 1e-8);
      const double emp2 =
          empirical_error(ctx, params, PfOrder::second, NormKind::spectral);
      CHECK(emp2 <= bound_pf2(c, params.t, params.r) + 1e-8);
    }
  }
}

TEST_CASE("evaluate_point composes the report consistently") {
  EvolutionContext ctx(heisenberg_1d_seeded(3, 2));
  const BoundCoefficients c = coefficients(ctx.model(), NormKind::spectral);
  const SimulationParams params{2.0, 9};
  const ErrorBoundReport rep = evaluate_point(ctx, c, params, PfOrder::first);
  CHECK(rep.bound_main ==
        doctest::Approx(std::min({rep.bound_pf1, rep.term_boundary + rep.term_bulk,
                                  rep.clamp})));
  CHECK(rep.empirical <= rep.bound_main + 1e-8);
  CHECK(rep.unitarity_drift < 1e-10);
  CHECK(rep.bound_pf2 > 0.0);
}

TEST_CASE("frobenius norm variant keeps the clamp consistent") {
  const BoundCoefficients c = coefficients(xz_model(), NormKind::frobenius);
  CHECK(c.clamp == doctest::Approx(2.0 * std::sqrt(2.0)));  // 2·||I||_F at dim 2
  EvolutionContext ctx(xz_model());
  const double emp = empirical_error(ctx, {3.0, 2}, PfOrder::first, NormKind::frobenius);
  CHECK(emp <= bound_main(c, 3.0, 2) + 1e-8);
}
