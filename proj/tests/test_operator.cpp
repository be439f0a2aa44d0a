#include <catch2/catch.hpp>

#include <Eigen/Dense>
#include <sstream>

#include "idslab/folner.hpp"
#include "idslab/spectral.hpp"
#include "idslab/weighted_operator.hpp"

#include "test_models.hpp"

using namespace idslab;

namespace {

OmegaRealization omega_for(const ModelSpec& model, std::uint64_t seed,
                           std::span<const GroupElement> cells) {
  auto window = model.required_window(cells);
  return sample_omega(seed, window, model.coupling_spec(), model.deformation_spec(), model.dim());
}

Eigen::MatrixXd dense_k(const WeightedOperator& op) { return op.stiffness_dense(); }

}  // namespace

TEST_CASE("assembly on the free Z line") {
  auto model = testmodels::free_z_line();
  auto cells = std::vector<GroupElement>{GroupElement{0}, GroupElement{1}, GroupElement{2}};
  CoverRegion region = build_region(model.cell(), cells);
  OmegaRealization omega = omega_for(model, 0, region.cells());

  SECTION("Neumann: textbook path Laplacian") {
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Neumann);
    Eigen::MatrixXd expected(3, 3);
    expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    REQUIRE(dense_k(op) == expected);
    REQUIRE(op.volume_diagonal() == Eigen::VectorXd::Ones(3));
  }
  SECTION("Dirichlet: reflected boundary term doubles the crossing weight") {
    // End diagonals get 1 (interior edge) + 2*1 (boundary bond). The factor
    // two makes cell decoupling a form upper bound, which is what
    // Dirichlet-Neumann bracketing of the IDS needs; the bare restriction
    // (factor one) does not bracket.
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Dirichlet);
    Eigen::MatrixXd expected(3, 3);
    expected << 3, -1, 0, -1, 2, -1, 0, -1, 3;
    REQUIRE(dense_k(op) == expected);
  }
  SECTION("K 1 = 0 for the free Neumann operator") {
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Neumann);
    REQUIRE(op.row_sum_max_abs() <= 1e-12 * op.stiffness_max_abs());
  }
}

TEST_CASE("weight rules with a nonuniform conformal factor") {
  SECTION("a = (1,4,1) across a three-vertex chain cell") {
    // Realize the conformal pattern through the metric code path: u carries
    // per-vertex values (1,4,1) at offset 0 and r = 0, so a = (1,4,1)
    // exactly. Geometric-mean weights give w = 2 on both edges and
    // M = diag(1,4,1).
    FundamentalCell chain(1, 3, {{0, 1, 1.0}, {1, 2, 1.0}},
                          {{2, GroupElement{1}, 0, 1.0}}, {1.0, 1.0, 1.0});
    SingleSiteFunction u(1, 3, {{GroupElement{0}, 0, 1.0},
                                {GroupElement{0}, 1, 4.0},
                                {GroupElement{0}, 2, 1.0}});
    MetricModel metric{DistributionSpec::constant(0.0), u};
    ModelSpec model(std::move(chain), {}, std::nullopt, metric);

    CoverRegion region = build_region(model.cell(), std::vector<GroupElement>{GroupElement{0}});
    OmegaRealization omega = omega_for(model, 0, region.cells());
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Neumann);

    Eigen::MatrixXd expected(3, 3);
    expected << 2, -2, 0, -2, 4, -2, 0, -2, 2;
    REQUIRE(dense_k(op) == expected);
    Eigen::VectorXd mu(3);
    mu << 1, 4, 1;
    REQUIRE(op.volume_diagonal() == mu);
    REQUIRE(op.volume() == 6.0);
  }
  SECTION("random metric matches a hand recomputation") {
    ModelSpec model = testmodels::metric_z_line();
    CoverRegion region = build_region(model.cell(), centered_box(1, 1));
    OmegaRealization omega = omega_for(model, 5, region.cells());
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Neumann);

    auto a_of = [&](std::int64_t g) { return std::exp(omega.log_deformation(GroupElement{g})); };
    const double w01 = std::sqrt(a_of(-1) * a_of(0));
    const double w12 = std::sqrt(a_of(0) * a_of(1));
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
    expected(0, 0) = w01;
    expected(1, 1) = w01 + w12;
    expected(2, 2) = w12;
    expected(0, 1) = expected(1, 0) = -w01;
    expected(1, 2) = expected(2, 1) = -w12;
    REQUIRE(dense_k(op).isApprox(expected, 1e-15));
    for (int k = -1; k <= 1; ++k) REQUIRE(op.volume_diagonal()[k + 1] == a_of(k));
  }
}

TEST_CASE("volume") {
  auto model = testmodels::free_z_line();
  CoverRegion region = build_region(model.cell(), centered_box(1, 5));
  OmegaRealization omega = omega_for(model, 0, region.cells());
  SECTION("unit weights sum to n") {
    REQUIRE(volume(region, omega, model) == static_cast<double>(region.n()));
    WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Neumann);
    REQUIRE(op.volume() == static_cast<double>(region.n()));
  }
  SECTION("random conformal volume stays inside the analytic bracket") {
    ModelSpec metric_model = testmodels::metric_z_line();
    OmegaRealization rnd = omega_for(metric_model, 9, region.cells());
    const double vol = volume(region, rnd, metric_model);
    ConformalBounds bounds = conformal_bounds(metric_model.metric()->site_profile,
                                              metric_model.metric()->log_deformation);
    REQUIRE(vol >= bounds.lower * region.n());
    REQUIRE(vol <= bounds.upper * region.n());
  }
}

TEST_CASE("Dirichlet dominates Neumann") {
  auto model = testmodels::alloy_metric_z_line();
  CoverRegion region = build_region(model.cell(), centered_box(1, 20));
  OmegaRealization omega = omega_for(model, 31, region.cells());
  WeightedOperator dirichlet = assemble(region, omega, model, BoundaryCondition::Dirichlet);
  WeightedOperator neumann = assemble(region, omega, model, BoundaryCondition::Neumann);

  SECTION("K_D - K_N is a nonnegative diagonal") {
    Eigen::MatrixXd diff = dense_k(dirichlet) - dense_k(neumann);
    for (int r = 0; r < diff.rows(); ++r)
      for (int c = 0; c < diff.cols(); ++c) {
        if (r == c)
          REQUIRE(diff(r, c) >= 0.0);
        else
          REQUIRE(diff(r, c) == 0.0);
      }
  }
  SECTION("eigenvalues interlace: lambda_i(D) >= lambda_i(N)") {
    DenseEigs d = dense_eigs(dirichlet);
    DenseEigs n = dense_eigs(neumann);
    for (int i = 0; i < dirichlet.size(); ++i)
      REQUIRE(d.values[i] >= n.values[i] - 1e-12);
  }
}

TEST_CASE("Gershgorin bound contains the spectrum") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto model = testmodels::alloy_metric_z_line();
    CoverRegion region = build_region(model.cell(), centered_box(1, 15));
    OmegaRealization omega = omega_for(model, seed, region.cells());
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
      WeightedOperator op = assemble(region, omega, model, bc);
      DenseEigs eigs = dense_eigs(op);
      REQUIRE(eigs.values[0] >= -1e-10);  // V >= 0 keeps the pencil PSD
      REQUIRE(eigs.values[op.size() - 1] <= op.gershgorin_upper() + 1e-10);
    }
  }
}

TEST_CASE("assembly is deterministic") {
  auto model = testmodels::alloy_metric_z_line();
  CoverRegion region = build_region(model.cell(), centered_box(1, 10));
  OmegaRealization omega = omega_for(model, 77, region.cells());
  WeightedOperator a = assemble(region, omega, model, BoundaryCondition::Dirichlet);
  WeightedOperator b = assemble(region, omega, model, BoundaryCondition::Dirichlet);
  REQUIRE(dense_k(a) == dense_k(b));
  REQUIRE(a.volume_diagonal() == b.volume_diagonal());
}

TEST_CASE("nonnegativity is checked where the field is evaluated") {
  // q = -1 everywhere; a periodic background of 2 keeps V = 1 >= 0, while no
  // background drives V negative and must raise at assembly time.
  FundamentalCell cell(1, 1, {}, {{0, GroupElement{1}, 0, 1.0}}, {1.0});
  PotentialModel pot{DistributionSpec::constant(-1.0), indicator_site(1, 1), true};
  ModelSpec compensated(FundamentalCell(cell), {2.0}, pot, std::nullopt);
  ModelSpec bare(FundamentalCell(cell), {0.0}, pot, std::nullopt);

  CoverRegion region = build_region(cell, centered_box(1, 2));
  OmegaRealization omega = omega_for(compensated, 1, region.cells());
  REQUIRE_NOTHROW(assemble(region, omega, compensated, BoundaryCondition::Dirichlet));
  REQUIRE_THROWS_AS(assemble(region, omega, bare, BoundaryCondition::Dirichlet),
                    NegativePotential);
}

TEST_CASE("window coverage is enforced") {
  // crossing-bond weights read the conformal factor at the outside endpoint,
  // so a metric model needs the window to reach one shell past the region
  auto model = testmodels::metric_z_line();
  CoverRegion region = build_region(model.cell(), centered_box(1, 5));
  auto small_window = centered_box(1, 5);
  OmegaRealization omega =
      sample_omega(1, small_window, model.coupling_spec(), model.deformation_spec(), 1);
  REQUIRE_THROWS_AS(assemble(region, omega, model, BoundaryCondition::Dirichlet),
                    WindowTooSmall);
  // the model's own window computation covers the reach
  OmegaRealization wide = omega_for(model, 1, region.cells());
  REQUIRE_NOTHROW(assemble(region, wide, model, BoundaryCondition::Dirichlet));
}

TEST_CASE("equivariance: conjugate_check") {
  SECTION("gamma = 0") {
    auto model = testmodels::alloy_z_line();
    CoverRegion region = build_region(model.cell(), centered_box(1, 4));
    OmegaRealization omega = omega_for(model, 3, region.cells());
    REQUIRE(conjugate_check(region, omega, GroupElement{0}, model,
                            BoundaryCondition::Dirichlet));
  }
  SECTION("periodic model: any translation") {
    auto model = testmodels::free_z_line();
    CoverRegion region = build_region(model.cell(), centered_box(1, 4));
    OmegaRealization omega = omega_for(model, 0, region.cells());
    for (std::int64_t g : {-3, 1, 5})
      REQUIRE(conjugate_check(region, omega, GroupElement{g}, model,
                              BoundaryCondition::Neumann));
  }
  SECTION("random alloy + metric: 20 random (gamma, seed) pairs, both bc") {
    auto line = testmodels::alloy_metric_z_line();
    auto ladder = testmodels::alloy_ladder();
    std::uint64_t key = 4242;
    for (int rep = 0; rep < 20; ++rep) {
      key = splitmix64(key);
      const ModelSpec& model = (rep % 2 == 0) ? line : ladder;
      CoverRegion region = build_region(model.cell(), centered_box(1, 3));
      OmegaRealization omega = omega_for(model, key, region.cells());
      GroupElement gamma{static_cast<std::int64_t>(key % 9) - 4};
      for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann})
        REQUIRE(conjugate_check(region, omega, gamma, model, bc));
    }
  }
  SECTION("d=2 alloy") {
    auto model = testmodels::alloy_z2();
    CoverRegion region = build_region(model.cell(), centered_box(2, 2));
    for (std::uint64_t seed : {10, 11}) {
      OmegaRealization omega = omega_for(model, seed, region.cells());
      REQUIRE(conjugate_check(region, omega, GroupElement{2, -1}, model,
                              BoundaryCondition::Dirichlet));
    }
  }
}

TEST_CASE("coordinate format dump") {
  auto model = testmodels::free_z_line();
  CoverRegion region = build_region(
      model.cell(), std::vector<GroupElement>{GroupElement{0}, GroupElement{1}, GroupElement{2}});
  OmegaRealization omega = omega_for(model, 0, region.cells());
  WeightedOperator op = assemble(region, omega, model, BoundaryCondition::Neumann);
  std::ostringstream os;
  op.write_coordinate_format(os);

  std::istringstream in(os.str());
  int n = 0, nnz = 0;
  in >> n >> nnz;
  REQUIRE(n == 3);
  REQUIRE(nnz == 5);  // 3 diagonal + 2 lower off-diagonal entries
  int row, col;
  double value;
  int read = 0;
  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(3, 3);
  while (in >> row >> col >> value) {
    REQUIRE(row >= 1);
    REQUIRE(col >= 1);
    REQUIRE(row >= col);  // lower triangle, 1-based
    rebuilt(row - 1, col - 1) = value;
    rebuilt(col - 1, row - 1) = value;
    ++read;
  }
  REQUIRE(read == nnz);
  REQUIRE(rebuilt == op.stiffness_dense());
}
