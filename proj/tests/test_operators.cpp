#include <cmath>

#include "doctest.h"
#include "hvsparse/errors.hpp"
#include "hvsparse/operators.hpp"

using namespace hvsparse;

namespace {

DenseMatrix one_by_one(double v) { return DenseMatrix(1, 1, std::vector<double>{v}); }

// Reports a Jacobian with one entry of A perturbed; used as a negative control.
class CorruptedJacobian final : public NonlinearOperator {
 public:
  CorruptedJacobian(DenseMatrix A, int c, int d) : good_(A, c, d), bad_(corrupt(A), c, d) {}
  std::size_t input_dim() const noexcept override { return good_.input_dim(); }
  std::size_t output_dim() const noexcept override { return good_.output_dim(); }
  DenseVector apply(const DenseVector& x) const override { return good_.apply(x); }
  DenseVector jacobian_apply(const DenseVector& x, const DenseVector& u) const override {
    return bad_.jacobian_apply(x, u);
  }
  DenseVector jacobian_adjoint_apply(const DenseVector& x, const DenseVector& r) const override {
    return good_.jacobian_adjoint_apply(x, r);
  }

 private:
  static DenseMatrix corrupt(DenseMatrix A) {
    A(0, 0) += 0.5;
    return A;
  }
  PowerCsOperator good_;
  PowerCsOperator bad_;
};

DenseVector bounded(Rng& rng, std::size_t n, double r) {
  DenseVector x(n);
  for (auto& v : x) v = rng.uniform(-r, r);
  return x;
}

}  // namespace

TEST_CASE("scalar forward model examples") {
  PowerCsOperator op(one_by_one(1.0), 2, 3);
  CHECK(op.apply(DenseVector{2.0})[0] == 110.0);
  CHECK(op.jacobian_apply(DenseVector{2.0}, DenseVector{1.0})[0] == 273.0);
  CHECK(op.jacobian_adjoint_apply(DenseVector{2.0}, DenseVector{1.0})[0] == 273.0);
  CHECK(op.apply(DenseVector{0.0})[0] == 0.0);
}

TEST_CASE("int_pow") {
  CHECK(int_pow(-2.0, 3) == -8.0);
  CHECK(int_pow(-2.0, 4) == 16.0);
  CHECK(int_pow(1.5, 1) == 1.5);
  CHECK(int_pow(3.0, 0) == 1.0);
}

TEST_CASE("c = d = 1 is four times the linear map") {
  auto inst = gaussian_instance(9, 5, 2, 0.7, RngSeed{4});
  PowerCsOperator op(inst.A, 1, 1);
  LinearOperatorAdapter lin(inst.A);
  Rng rng(RngSeed{5});
  for (int t = 0; t < 20; ++t) {
    auto x = rng.normal_vector(9);
    auto u = rng.normal_vector(9);
    auto r = rng.normal_vector(5);
    CHECK(op.apply(x) == 4.0 * lin.apply(x));
    CHECK(op.jacobian_apply(x, u) == 4.0 * lin.apply(u));
    CHECK(op.jacobian_adjoint_apply(x, r) == 4.0 * lin.jacobian_adjoint_apply(x, r));
  }
}

TEST_CASE("dimension checks") {
  PowerCsOperator op(DenseMatrix(3, 4, 1.0), 2, 3);
  CHECK_THROWS_AS(op.apply(DenseVector(3)), ParameterError);
  CHECK_THROWS_AS(op.jacobian_apply(DenseVector(4), DenseVector(3)), ParameterError);
  CHECK_THROWS_AS(op.jacobian_adjoint_apply(DenseVector(4), DenseVector(4)), ParameterError);
  CHECK_THROWS_AS(PowerCsOperator(DenseMatrix(3, 4, 1.0), 0, 3), ParameterError);
  CHECK_THROWS_AS(PowerCsOperator(DenseMatrix(3, 4, 1.0), 2, 0), ParameterError);
}

TEST_CASE("adjoint identity on 100 random triples") {
  Rng rng(RngSeed{6});
  for (int t = 0; t < 100; ++t) {
    const int c = 1 + static_cast<int>(rng.below(5));
    const int d = 1 + static_cast<int>(rng.below(5));
    auto inst = gaussian_instance(11, 7, 3, 0.3, RngSeed{static_cast<std::uint64_t>(t + 1)});
    PowerCsOperator op(inst.A, c, d);
    LinearOperatorAdapter lin(inst.A);
    auto x = bounded(rng, 11, 1.0);
    auto u = rng.normal_vector(11);
    auto r = rng.normal_vector(7);
    for (const NonlinearOperator* o : {static_cast<const NonlinearOperator*>(&op),
                                       static_cast<const NonlinearOperator*>(&lin)}) {
      const auto Ju = o->jacobian_apply(x, u);
      const auto Jtr = o->jacobian_adjoint_apply(x, r);
      const double lhs = dot(Ju, r), rhs = dot(u, Jtr);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(norm2(Ju) * norm2(r), norm2(u) * norm2(Jtr)));
    }
    CHECK(adjoint_check(op, x, 1e-10).passed);
  }
}

TEST_CASE("jacobian_apply is linear in the direction") {
  Rng rng(RngSeed{7});
  auto inst = gaussian_instance(10, 6, 3, 0.4, RngSeed{8});
  PowerCsOperator op(inst.A, 3, 2);
  for (int t = 0; t < 50; ++t) {
    auto x = bounded(rng, 10, 1.0);
    auto u = rng.normal_vector(10);
    auto v = rng.normal_vector(10);
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    auto lhs = op.jacobian_apply(x, a * u + b * v);
    auto rhs = a * op.jacobian_apply(x, u) + b * op.jacobian_apply(x, v);
    CHECK(distance2(lhs, rhs) <= 1e-12 * std::max(1.0, norm2(rhs)));
  }
}

TEST_CASE("odd exponents give an odd forward model") {
  Rng rng(RngSeed{9});
  auto inst = gaussian_instance(10, 6, 3, 0.4, RngSeed{10});
  for (int c : {1, 3, 5}) {
    for (int d : {1, 3, 5}) {
      PowerCsOperator op(inst.A, c, d);
      auto x = bounded(rng, 10, 1.0);
      CHECK(op.apply(-x) == -op.apply(x));
    }
  }
}

TEST_CASE("finite-difference Jacobian check") {
  Rng rng(RngSeed{11});
  auto inst = gaussian_instance(12, 7, 3, 0.3, RngSeed{12});
  for (int c = 1; c <= 5; ++c) {
    for (int d = 1; d <= 5; ++d) {
      PowerCsOperator op(inst.A, c, d);
      auto x = bounded(rng, 12, 1.0);
      auto rep = fd_jacobian_check(op, x, 1e-6, 1e-5);
      CHECK_MESSAGE(rep.passed, "c=" << c << " d=" << d << " dev=" << rep.max_relative_deviation);
    }
  }
  LinearOperatorAdapter lin(inst.A);
  auto rep = fd_jacobian_check(lin, bounded(rng, 12, 1.0), 1e-3, 1e-10);
  CHECK(rep.max_relative_deviation <= 1e-10);

  CorruptedJacobian bad(inst.A, 2, 3);
  CHECK_FALSE(fd_jacobian_check(bad, bounded(rng, 12, 1.0), 1e-6, 1e-5).passed);
}

TEST_CASE("secant Lipschitz estimate") {
  LinearOperatorAdapter op(one_by_one(2.0));
  std::vector<DenseVector> probes{DenseVector{0.0}, DenseVector{1.0}};
  // alpha * eta = 0.5
  CHECK(estimate_smooth_lipschitz(op, probes, DenseVector{0.3}, 0.5, 1.0) ==
        doctest::Approx(3.0).epsilon(1e-14));
  std::vector<DenseVector> single{DenseVector{1.0}};
  CHECK_THROWS_AS(estimate_smooth_lipschitz(op, single, DenseVector{0.3}, 0.5, 1.0),
                  ParameterError);
  std::vector<DenseVector> same{DenseVector{1.0}, DenseVector{1.0}};
  CHECK_THROWS_AS(estimate_smooth_lipschitz(op, same, DenseVector{0.3}, 0.5, 1.0), ParameterError);
}

TEST_CASE("overflow guard") {
  PowerCsOperator op(one_by_one(1.0), 9, 9);
  CHECK_THROWS_AS(op.apply(DenseVector{1e20}), NumericalError);
  CHECK_NOTHROW(op.apply(DenseVector{2.0}));
}

TEST_CASE("spectral norm estimate") {
  DenseMatrix A(2, 2, std::vector<double>{3.0, 0.0, 0.0, 1.0});
  CHECK(spectral_norm_sq(A) == doctest::Approx(9.0).epsilon(1e-10));
}
