#include <cmath>
#include <limits>

#include "doctest.h"
#include "hvsparse/core.hpp"
#include "hvsparse/errors.hpp"

using namespace hvsparse;

TEST_CASE("gaussian_instance shape and sparsity") {
  auto inst = gaussian_instance(200, 80, 16, 0.05, RngSeed{7});
  CHECK(inst.A.rows() == 80);
  CHECK(inst.A.cols() == 200);
  CHECK(inst.x_true.size() == 200);
  CHECK(count_above(inst.x_true, 0.0) == 16);
  for (double v : inst.x_true) CHECK((v == 0.0 || std::abs(v) == 1.0));
  CHECK(inst.A.all_finite());

  auto dense = gaussian_instance(8, 4, 8, 1.0, RngSeed{1});
  CHECK(count_above(dense.x_true, 0.0) == 8);
}

TEST_CASE("gaussian_instance scale multiplies a standard normal matrix") {
  auto a = gaussian_instance(40, 30, 3, 1.0, RngSeed{5});
  auto b = gaussian_instance(40, 30, 3, 0.05, RngSeed{5});
  double sum = 0, sq = 0;
  for (std::size_t k = 0; k < a.A.entries().size(); ++k) {
    CHECK(b.A.entries()[k] == doctest::Approx(0.05 * a.A.entries()[k]).epsilon(1e-15));
    sum += a.A.entries()[k];
    sq += a.A.entries()[k] * a.A.entries()[k];
  }
  const double N = static_cast<double>(a.A.entries().size());
  CHECK(std::abs(sum / N) < 0.1);
  CHECK(sq / N == doctest::Approx(1.0).epsilon(0.1));
  CHECK(a.x_true == b.x_true);
}

TEST_CASE("gaussian_instance rejects bad dimensions") {
  CHECK_THROWS_AS(gaussian_instance(4, 2, 0, 1.0, RngSeed{1}), ParameterError);
  CHECK_THROWS_AS(gaussian_instance(4, 2, 5, 1.0, RngSeed{1}), ParameterError);
  CHECK_THROWS_AS(gaussian_instance(4, 0, 1, 1.0, RngSeed{1}), ParameterError);
  CHECK_THROWS_AS(gaussian_instance(4, 2, 1, 0.0, RngSeed{1}), ParameterError);
}

TEST_CASE("gaussian_instance determinism") {
  auto a = gaussian_instance(50, 20, 5, 0.05, RngSeed{42});
  auto b = gaussian_instance(50, 20, 5, 0.05, RngSeed{42});
  auto c = gaussian_instance(50, 20, 5, 0.05, RngSeed{43});
  CHECK(a.A == b.A);
  CHECK(a.x_true == b.x_true);
  CHECK_FALSE(a.A == c.A);
}

TEST_CASE("gaussian amplitudes") {
  auto inst = gaussian_instance(30, 10, 6, 1.0, RngSeed{3}, {AmplitudeKind::gaussian, 2.0});
  CHECK(count_above(inst.x_true, 0.0) == 6);
  auto half = gaussian_instance(30, 10, 6, 1.0, RngSeed{3}, {AmplitudeKind::random_sign, 0.5});
  for (double v : half.x_true) CHECK((v == 0.0 || std::abs(v) == 0.5));
}

TEST_CASE("rng streams are reproducible") {
  Rng a(RngSeed{99}), b(RngSeed{99});
  for (int i = 0; i < 100; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
  }
  Rng r(RngSeed{1});
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  CHECK(derive_seed(RngSeed{1}, 1).value != derive_seed(RngSeed{1}, 2).value);
  CHECK(derive_seed(RngSeed{1}, 1).value == derive_seed(RngSeed{1}, 1).value);
}

TEST_CASE("add_noise_db records the realized noise norm") {
  DenseVector y(80, 0.0);
  y[0] = 1.0;
  auto nd = add_noise_db(y, 30.0, RngSeed{3});
  CHECK(nd.noise_norm == doctest::Approx(distance2(nd.y_delta, y)).epsilon(1e-14));
  CHECK(nd.level_db == 30.0);
  CHECK(nd.noise_norm > 0.7 * std::pow(10.0, -1.5));
  CHECK(nd.noise_norm < 1.3 * std::pow(10.0, -1.5));

  auto quiet = add_noise_db(y, 300.0, RngSeed{3});
  CHECK(quiet.noise_norm < 1e-14 * norm2(y));

  CHECK_THROWS_AS(add_noise_db(DenseVector(5, 0.0), 30.0, RngSeed{1}), DegenerateError);
}

TEST_CASE("add_noise_db power ratio over 1e4 trials") {
  auto inst = gaussian_instance(20, 80, 4, 1.0, RngSeed{11});
  DenseVector y(80);
  for (std::size_t i = 0; i < 80; ++i) y[i] = std::sin(0.3 * i) + 0.1;
  const double db = 30.0;
  const double ny2 = norm2_sq(y);
  double acc = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    auto nd = add_noise_db(y, db, RngSeed{static_cast<std::uint64_t>(1000 + t)});
    acc += nd.noise_norm * nd.noise_norm * std::pow(10.0, db / 10.0) / ny2;
  }
  const double mean = acc / trials;
  CHECK(mean >= 0.97);
  CHECK(mean <= 1.03);
}

TEST_CASE("add_noise_norm hits the requested norm") {
  DenseVector y{1.0, 2.0, 3.0};
  auto nd = add_noise_norm(y, 0.25, RngSeed{8});
  CHECK(distance2(nd.y_delta, y) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("snr and relative error") {
  DenseVector xt{1.0, -2.0, 0.0, 0.5};
  CHECK(snr_db(xt, xt) == kSnrCapDb);
  CHECK(snr_db(2.0 * xt, xt) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(relative_error(xt, xt) == 0.0);
  CHECK(relative_error(DenseVector(4, 0.0), xt) == doctest::Approx(1.0));
  CHECK(relative_error(1.1 * xt, xt) == doctest::Approx(0.1).epsilon(1e-12));

  // error ratio 0.01 gives 20 dB
  DenseVector e{0.1, 0.0, 0.0, 0.0};
  DenseVector unit{1.0, 0.0, 0.0, 0.0};
  CHECK(snr_db(unit + e, unit) == doctest::Approx(20.0).epsilon(1e-12));

  CHECK_THROWS_AS(snr_db(xt, DenseVector(4, 0.0)), DegenerateError);
  CHECK_THROWS_AS(relative_error(xt, DenseVector(4, 0.0)), DegenerateError);
  CHECK_THROWS_AS(snr_db(DenseVector(3, 0.0), xt), ParameterError);
}

TEST_CASE("snr equals -20 log10 of relative error") {
  Rng rng(RngSeed{21});
  for (int t = 0; t < 1000; ++t) {
    auto xt = rng.normal_vector(12);
    auto xs = xt + rng.uniform(1e-6, 2.0) * rng.normal_vector(12);
    const double rel = relative_error(xs, xt);
    CHECK(std::abs(snr_db(xs, xt) + 20.0 * std::log10(rel)) <= 1e-9);
  }
}

TEST_CASE("vector helpers") {
  DenseVector a{3.0, -4.0};
  CHECK(norm1(a) == 7.0);
  CHECK(norm2(a) == 5.0);
  CHECK(norm_inf(a) == 4.0);
  CHECK(dot(a, a) == 25.0);
  DenseVector b{1.0, 1.0};
  axpy(2.0, b, a);
  CHECK(a == DenseVector{5.0, -2.0});
  CHECK_THROWS_AS(dot(a, DenseVector{1.0}), ParameterError);
  CHECK_FALSE(DenseVector{1.0, std::numeric_limits<double>::quiet_NaN()}.all_finite());
}
