#include "meshtv/admm.hpp"
#include "meshtv/errors.hpp"
#include "meshtv/experiment.hpp"

#include "support.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace meshtv;

TEST_CASE("shrink_1d") {
  CHECK(shrink_1d(3.0, 1.0) == 2.0);
  CHECK(shrink_1d(-0.5, 1.0) == 0.0);
  CHECK(shrink_1d(-4.0, 1.5) == -2.5);
  CHECK(shrink_1d(2.0, 0.0) == 2.0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x_dist(-5, 5);
  std::uniform_real_distribution<double> t_dist(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const double x = x_dist(rng);
    const double t = t_dist(rng);
    const double oracle = testsupport::grid_argmin_1d(
        [&](double s) { return t * std::abs(s) + 0.5 * (s - x) * (s - x); }, -6.0, 6.0, 1e-6);
    CHECK(std::abs(shrink_1d(x, t) - oracle) <= 1e-5);
  }
}

TEST_CASE("shrink_vec") {
  Eigen::VectorXd x(3);
  x << 3, 4, 0;
  const Eigen::VectorXd y = shrink_vec(x, 2.0);
  CHECK(y(0) == doctest::Approx(1.8));
  CHECK(y(1) == doctest::Approx(2.4));
  CHECK(y(2) == 0.0);

  // Radial reduction: the minimizer lies on the ray of x with length
  // argmin_r t*r + (r - |x|)^2 / 2 over r >= 0.
  const double r = testsupport::grid_argmin_1d([](double s) { return 2.0 * s + 0.5 * (s - 5.0) * (s - 5.0); },
                                               0.0, 10.0, 1e-7);
  CHECK(y.norm() == doctest::Approx(r).epsilon(1e-6));

  CHECK(shrink_vec(Eigen::VectorXd::Zero(3), 0.0).isZero(0.0));
  CHECK(shrink_vec(Eigen::VectorXd::Zero(9), 1.0).isZero(0.0));
  CHECK(shrink_vec(x, 5.0).isZero(0.0));

  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd a(9);
    Eigen::VectorXd b(9);
    for (int k = 0; k < 9; ++k) {
      a(k) = d(rng);
      b(k) = d(rng);
    }
    const double t = std::abs(d(rng));
    CHECK((shrink_vec(a, t) - shrink_vec(b, t)).norm() <= (a - b).norm() + 1e-14);
    CHECK(std::abs(shrink_1d(a(0), t) - shrink_1d(b(0), t)) <= std::abs(a(0) - b(0)) + 1e-14);
  }
}

TEST_CASE("normal equation") {
  SUBCASE("diagonal system") {
    GramMatrix zero(2, 2);
    const NormalEquationSystem sys(zero, 2.0, 0.0, 0.0);
    const std::vector<double> rhs{2, 4};
    const auto x = solve_normal_equation(sys, rhs, SolverConfig{});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
  }
  SUBCASE("dense oracle on the two-triangle mesh") {
    const GradientOperator op(testsupport::two_triangles());
    const GramMatrix gram = assemble_gram(op);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    for (auto kind : {LinearSolverKind::Direct, LinearSolverKind::ConjugateGradient}) {
      const NormalEquationSystem sys(gram, 0.7, 1.3, 0.2, kind);
      CHECK(sys.uses_direct_solver() == (kind == LinearSolverKind::Direct));
      const Eigen::MatrixXd dense = 1.3 * testsupport::dense_gram(op) + 0.9 * Eigen::MatrixXd::Identity(4, 4);
      CHECK((Eigen::MatrixXd(sys.matrix()) - dense).cwiseAbs().maxCoeff() <= 1e-14);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd b(4);
        for (int k = 0; k < 4; ++k) b(k) = d(rng);
        const Eigen::VectorXd oracle = dense.fullPivLu().solve(b);
        const Eigen::MatrixXd x = sys.solve(b, 1e-12, 100);
        CHECK((x.col(0) - oracle).cwiseAbs().maxCoeff() <= 1e-8);
      }
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
      const Eigen::MatrixXd x = sys.solve(dense * ones, 1e-12, 100);
      CHECK((x.col(0) - ones).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
  SUBCASE("automatic choice and errors") {
    const GradientOperator op(make_icosphere(2));
    const GramMatrix gram = assemble_gram(op);
    CHECK(NormalEquationSystem(gram, 1, 1, 1).uses_direct_solver());
    CHECK_FALSE(NormalEquationSystem(gram, 1, 1, 1, LinearSolverKind::Automatic, 100).uses_direct_solver());
    CHECK_THROWS_AS(NormalEquationSystem(gram, 0.0, 1.0, 0.0), SingularSystem);
    const NormalEquationSystem cg(gram, 1e-3, 1e3, 0.0, LinearSolverKind::ConjugateGradient);
    CHECK_THROWS_AS((void)cg.solve(Eigen::VectorXd::Random(op.vertex_count()), 1e-14, 1), IterationLimitExceeded);
  }
}

TEST_CASE("admm_solve on the two-triangle mesh") {
  const GradientOperator op(testsupport::two_triangles());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0, 1);
  SolverConfig config;
  config.lambda = 0.1;
  config.prox_weight = 1.0;
  config.inner_tol = 1e-10;
  config.inner_max_iter = 20000;
  const SupportSet support{{1, 3}};
  const std::vector<double> w{1.0, 1.0};
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd fv(4, 1);
    Eigen::MatrixXd kv(4, 1);
    for (int j = 0; j < 4; ++j) {
      fv(j) = unit(rng);
      kv(j) = unit(rng);
    }
    kv(0) = fv(0);
    kv(2) = fv(2);
    const MeshImage f(fv);
    const MeshImage uk(kv);
    const AdmmResult res = admm_solve(f, uk, support, w, op, config);
    CHECK(res.converged);
    CHECK(res.u(0) == f(0));
    CHECK(res.u(2) == f(2));
    const std::vector<double> fs(fv.data(), fv.data() + 4);
    const std::vector<double> ks(kv.data(), kv.data() + 4);
    const auto oracle = testsupport::tiny_step_oracle(op, fs, ks, config.lambda, config.prox_weight);
    CHECK(std::abs(res.u(1) - oracle[0]) <= 2e-3);
    CHECK(std::abs(res.u(3) - oracle[1]) <= 2e-3);
  }
}

TEST_CASE("admm_solve with an empty support returns f") {
  const TriangleMesh mesh = make_icosphere(1);
  const GradientOperator op(mesh);
  const MeshImage f = add_salt_pepper(MeshImage::constant(mesh.vertex_count(), 1, 0.5), {0.3, 5});
  const MeshImage uk = MeshImage::constant(mesh.vertex_count(), 1, 0.2);
  SolverConfig config;
  const AdmmResult res = admm_solve(f, uk, SupportSet{}, {}, op, config);
  CHECK(res.u == f);
}

TEST_CASE("admm_solve is deterministic and pins the complement") {
  const TriangleMesh mesh = make_icosphere(2);
  const GradientOperator op(mesh);
  auto scene = generate_synthetic({2, SyntheticPattern::TwoPatch, 1});
  const MeshImage f = add_salt_pepper(scene.image, {0.2, 8});
  SupportSet support;
  for (int j = 0; j < mesh.vertex_count(); j += 2) support.entries.push_back(j);
  const std::vector<double> w(support.size(), 0.7);
  SolverConfig config;
  config.lambda = 0.3;
  const AdmmResult a = admm_solve(f, f, support, w, op, config);
  const AdmmResult b = admm_solve(f, f, support, w, op, config);
  CHECK(a.u == b.u);
  CHECK(a.iterations == b.iterations);
  for (int j = 1; j < mesh.vertex_count(); j += 2) CHECK(a.u(j) == f(j));
  CHECK_THROWS_AS(admm_solve(f, f, support, std::vector<double>(3, 1.0), op, config), DimensionMismatch);
}

TEST_CASE("solve_l1tv limits") {
  const TriangleMesh mesh = make_icosphere(2);
  const GradientOperator op(mesh);
  auto scene = generate_synthetic({2, SyntheticPattern::Checker, 1});
  const MeshImage f = add_salt_pepper(scene.image, {0.1, 3});

  SolverConfig big;
  big.lambda = 1e6;
  big.beta1 = 1e6;
  big.beta2 = 1e2;
  const MeshImage keep = solve_l1tv(f, op, big);
  CHECK((keep.values() - f.values()).cwiseAbs().maxCoeff() <= 1e-3);

  SolverConfig tiny;
  tiny.lambda = 1e-6;
  tiny.beta1 = 1.0;
  tiny.beta2 = 1.0;
  tiny.inner_max_iter = 5000;
  const MeshImage flat = solve_l1tv(f, op, tiny);
  CHECK(flat.values().maxCoeff() - flat.values().minCoeff() <= 1e-2);
}

TEST_CASE("solve_l1tv on the two-triangle mesh") {
  const GradientOperator op(testsupport::two_triangles());
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0, 1);
  std::uniform_real_distribution<double> lam(0.05, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::MatrixXd fv(4, 1);
    for (int j = 0; j < 4; ++j) fv(j) = unit(rng);
    SolverConfig config;
    config.lambda = lam(rng);
    config.beta1 = 1.0;
    config.beta2 = 1.0;
    config.inner_tol = 1e-10;
    config.inner_max_iter = 50000;
    const AdmmResult res = solve_l1tv_detailed(MeshImage(fv), op, config);
    CHECK(res.converged);
    const std::vector<double> fs(fv.data(), fv.data() + 4);
    const std::vector<double> us(res.u.values().data(), res.u.values().data() + 4);
    const auto match = testsupport::match_l1tv(op, fs, config.lambda, us, 2e-3);
    CHECK((match.distance <= 2e-3 || match.near_minimizer_set));
  }
}

TEST_CASE("color images couple channels in the gradient") {
  const TriangleMesh mesh = make_icosphere(2);
  const GradientOperator op(mesh);
  auto scene = generate_synthetic({2, SyntheticPattern::Checker, 3});
  const MeshImage f = add_salt_pepper(scene.image, {0.1, 4});
  SolverConfig config;
  config.lambda = 0.2;
  const MeshImage u = solve_l1tv(f, op, config);
  CHECK(u.channel_count() == 3);
  CHECK(u.values().allFinite());
  CHECK(psnr(clamp_to_unit(u), scene.image) > psnr(f, scene.image));
}
