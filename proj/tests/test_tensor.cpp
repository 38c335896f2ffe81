#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2r/autodiff.hpp"
#include "g2r/rng.hpp"
#include "g2r/tensor.hpp"

using namespace g2r;

namespace {

Tensor random_tensor(std::vector<int> shape, RngStream& rng, double lo = -2.0,
                     double hi = 2.0) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

}  // namespace

TEST_CASE("tensor rejects non-finite values and bad shapes") {
  CHECK_THROWS_AS(Tensor({2}, {1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({2}, {1.0, INFINITY}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({}, {}), std::invalid_argument);
}

TEST_CASE("linear forward examples") {
  Tape t;
  Var x = t.leaf(Tensor({1, 2}, {1, 2}));
  Var w_id = t.leaf(Tensor({2, 2}, {1, 0, 0, 1}));
  Var b0 = t.leaf(Tensor({2}, {0, 0}));
  Var y = linear(x, w_id, b0);
  CHECK(t.value(y).at(0, 0) == 1.0);
  CHECK(t.value(y).at(0, 1) == 2.0);

  Var w0 = t.leaf(Tensor({2, 2}, {0, 0, 0, 0}));
  Var b = t.leaf(Tensor({2}, {3, 4}));
  Var z = linear(x, w0, b);
  CHECK(t.value(z).at(0, 0) == 3.0);
  CHECK(t.value(z).at(0, 1) == 4.0);

  CHECK_THROWS_AS(linear(x, t.leaf(Tensor({3, 2}, {0, 0, 0, 0, 0, 0})), b),
                  std::invalid_argument);
}

TEST_CASE("gradient of sum of linear wrt bias is all ones") {
  Tape t;
  Var x = t.leaf(Tensor({2, 2}, {1, 2, 3, 4}));
  Var w = t.leaf(Tensor({2, 2}, {0.5, -1, 2, 0.25}));
  Var b = t.leaf(Tensor({2}, {0.1, -0.2}));
  Var y = linear(x, w, b);
  Var total = reshape(segment_sum(reshape(y, {4, 1}), {0, 0, 0, 0}, 1), {1});
  t.backward(total);
  CHECK(t.grad(b)[0] == doctest::Approx(2.0));  // two rows each contribute 1
  CHECK(t.grad(b)[1] == doctest::Approx(2.0));
}

TEST_CASE("activation values") {
  Tape t;
  Var x = t.leaf(Tensor({3}, {-1.0, 0.0, 2.0}));
  Var r = relu(x);
  CHECK(t.value(r)[0] == 0.0);
  CHECK(t.value(r)[1] == 0.0);
  CHECK(t.value(r)[2] == 2.0);
  CHECK(t.tie_observed());  // relu at exactly zero

  Tape t2;
  Var s = softplus(t2.leaf(Tensor::scalar(0.0)));
  CHECK(t2.value(s).item() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  Var e = exp_neg(t2.leaf(Tensor::scalar(0.0)));
  CHECK(t2.value(e).item() == 1.0);
}

TEST_CASE("softplus gradient at zero is one half") {
  auto f = [](Tape& t, Var x) { return softplus(x); };
  GradCheckReport r = grad_check(f, Tensor::scalar(0.0), 1e-6, 1e-6);
  CHECK(r.passed);
  CHECK(r.checked == 1);

  Tape t;
  Var x = t.leaf(Tensor::scalar(0.0));
  Var y = softplus(x);
  t.backward(y);
  CHECK(t.grad(x)[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("elementwise min max follow the examples and the tie rule") {
  Tape t;
  Var a = t.leaf(Tensor({2}, {2, 3}));
  Var b = t.leaf(Tensor({2}, {1, 4}));
  Var m = ewise_min(a, b);
  CHECK(t.value(m)[0] == 1.0);
  CHECK(t.value(m)[1] == 3.0);
  CHECK_FALSE(t.tie_observed());

  Var mm = ewise_min(t.leaf(Tensor({3}, {0.5, 2, 7})),
                     t.leaf(Tensor({3}, {3, 0.1, 7})));
  CHECK(t.value(mm)[0] == 0.5);
  CHECK(t.value(mm)[1] == 0.1);
  CHECK(t.value(mm)[2] == 7.0);
  CHECK(t.tie_observed());

  // Tie adjoint routes to the first argument.
  Tape t3;
  Var p = t3.leaf(Tensor({1}, {5.0}));
  Var q = t3.leaf(Tensor({1}, {5.0}));
  Var r = ewise_min(p, q);
  t3.backward(r);
  CHECK(t3.grad(p)[0] == 1.0);
  CHECK(t3.grad(q)[0] == 0.0);

  Tape t4;
  Var u = t4.leaf(Tensor({1}, {5.0}));
  Var v = t4.leaf(Tensor({1}, {5.0}));
  t4.backward(ewise_max(u, v));
  CHECK(t4.grad(u)[0] == 1.0);
  CHECK(t4.grad(v)[0] == 0.0);
}

TEST_CASE("min of a tensor with itself is identity") {
  Tape t;
  Var x = t.leaf(Tensor({3}, {1.5, -2, 0.25}));
  Var m = ewise_min(x, x);
  for (int i = 0; i < 3; ++i) CHECK(t.value(m)[i] == t.value(x)[i]);
}

TEST_CASE("div rejects tiny denominators") {
  Tape t;
  Var a = t.leaf(Tensor({1}, {1.0}));
  Var b = t.leaf(Tensor({1}, {1e-310}));
  CHECK_THROWS_AS(div(a, b), std::invalid_argument);
}

TEST_CASE("segment sum semantics") {
  Tape t;
  Var x = t.leaf(Tensor({3, 1}, {1, 2, 3}));
  Var y = segment_sum(x, {0, 0, 1}, 2);
  CHECK(t.value(y).at(0, 0) == 3.0);
  CHECK(t.value(y).at(1, 0) == 3.0);

  Var all = segment_sum(x, {0, 0, 0}, 1);
  CHECK(t.value(all).at(0, 0) == 6.0);

  Var with_empty = segment_sum(x, {0, 2, 2}, 3);
  CHECK(t.value(with_empty).at(0, 0) == 1.0);
  CHECK(t.value(with_empty).at(1, 0) == 0.0);
  CHECK(t.value(with_empty).at(2, 0) == 5.0);

  CHECK_THROWS_AS(segment_sum(x, {0, 0, 5}, 2), std::invalid_argument);
}

TEST_CASE("segment sum is invariant to row shuffles") {
  RngStream rng(7);
  Tensor x = random_tensor({6, 3}, rng);
  std::vector<int> seg = {0, 1, 0, 2, 1, 0};

  Tape t1;
  Tensor base;
  {
    Var y = segment_sum(t1.leaf(x), seg, 3);
    base = t1.value(y);
  }

  const std::vector<int> perm = {3, 0, 5, 1, 4, 2};
  Tensor xp = Tensor::zeros({6, 3});
  std::vector<int> segp(6);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 3; ++c) xp.at(perm[r], c) = x.at(r, c);
    segp[perm[r]] = seg[r];
  }
  Tape t2;
  Tensor shuffled = t2.value(segment_sum(t2.leaf(xp), segp, 3));
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(std::abs(base[i] - shuffled[i]) <= 1e-12);
}

TEST_CASE("segment min max and the lowest-row tie rule") {
  Tape t;
  Var x = t.leaf(Tensor({2, 2}, {1, 5, 3, 2}));
  Var mn = segment_min(x, {0, 0}, 1);
  Var mx = segment_max(x, {0, 0}, 1);
  CHECK(t.value(mn).at(0, 0) == 1.0);
  CHECK(t.value(mn).at(0, 1) == 2.0);
  CHECK(t.value(mx).at(0, 0) == 3.0);
  CHECK(t.value(mx).at(0, 1) == 5.0);

  Var single = segment_min(t.leaf(Tensor({1, 2}, {4, 7})), {0}, 1);
  CHECK(t.value(single).at(0, 0) == 4.0);

  CHECK_THROWS_AS(segment_min(x, {0, 0}, 2), std::invalid_argument);  // empty

  Tape t2;
  Var same = t2.leaf(Tensor({2, 1}, {3, 3}));
  Var m = segment_min(same, {0, 0}, 1);
  CHECK(t2.value(m).at(0, 0) == 3.0);
  CHECK(t2.tie_observed());
  t2.backward(reshape(m, {1}));
  CHECK(t2.grad(same).at(0, 0) == 1.0);  // lowest row index takes the adjoint
  CHECK(t2.grad(same).at(1, 0) == 0.0);
}

TEST_CASE("concat and vstack") {
  Tape t;
  Var a = t.leaf(Tensor({2}, {1, 2}));
  Var b = t.leaf(Tensor({1}, {3}));
  Var c = concat_rows({a, b});
  REQUIRE(t.value(c).size() == 3);
  CHECK(t.value(c)[0] == 1.0);
  CHECK(t.value(c)[2] == 3.0);

  Var c1 = concat_rows({a});
  CHECK(t.value(c1).size() == 2);

  Var s = vstack({a, a, a});
  CHECK(t.value(s).rows() == 3);
  CHECK(t.value(s).cols() == 2);
  CHECK(t.value(s).at(2, 1) == 2.0);
}

TEST_CASE("prod reduce values and zero-safe adjoint") {
  Tape t;
  CHECK(t.value(prod_reduce(t.leaf(Tensor({2}, {2, 3})))).item() == 6.0);
  CHECK(t.value(prod_reduce(t.leaf(Tensor({3}, {1, 1, 1})))).item() == 1.0);
  CHECK(t.value(prod_reduce(t.leaf(Tensor({3}, {2, 0.5, 4})))).item() == 4.0);

  Tape t2;
  Var x = t2.leaf(Tensor({3}, {2.0, 0.0, 5.0}));
  Var p = prod_reduce(x);
  CHECK(t2.value(p).item() == 0.0);
  t2.backward(p);
  CHECK(t2.grad(x)[0] == 0.0);   // 0 * 5
  CHECK(t2.grad(x)[1] == 10.0);  // 2 * 5
  CHECK(t2.grad(x)[2] == 0.0);   // 2 * 0
}

TEST_CASE("mean rows") {
  Tape t;
  Var x = t.leaf(Tensor({2, 2}, {1, 2, 3, 4}));
  Var m = mean_rows(x);
  CHECK(t.value(m)[0] == 2.0);
  CHECK(t.value(m)[1] == 3.0);

  Var one = mean_rows(t.leaf(Tensor({1, 3}, {7, 8, 9})));
  CHECK(t.value(one)[2] == 9.0);
}

TEST_CASE("grad check closed-form square") {
  auto f = [](Tape& t, Var x) { return mul(x, x); };
  GradCheckReport r = grad_check(f, Tensor::scalar(3.0), 1e-6, 1e-8);
  CHECK(r.passed);
  CHECK(r.max_rel_err < 1e-8);
}

TEST_CASE("grad check reports nonsmooth evaluations as skipped") {
  auto f = [](Tape& t, Var x) {
    Var m = ewise_min(x, scale(x, 1.0));  // always tied
    return reshape(m, {1});
  };
  GradCheckReport r = grad_check(f, Tensor::scalar(2.0), 1e-6, 1e-6);
  CHECK(r.skipped_nonsmooth);
  CHECK(r.checked == 0);
}

TEST_CASE("every primitive passes finite-difference checks on random inputs") {
  RngStream rng(101);
  const double h = 1e-6, tol = 1e-4;
  int done = 0;
  while (done < 100) {
    Tensor x0 = random_tensor({12}, rng, 0.1, 2.0);
    auto f = [&](Tape& t, Var x) {
      Var m = reshape(x, {3, 4});
      Var w = t.leaf(Tensor({4, 2}, {0.3, -0.7, 1.1, 0.2, -0.4, 0.9, 0.6, -1.2}));
      Var b = t.leaf(Tensor({2}, {0.05, -0.1}));
      Var lin = linear(m, w, b);
      Var act = softplus(lin);
      Var pooled = segment_sum(act, {0, 1, 0}, 2);
      Var mn = segment_min(act, {0, 1, 0}, 2);
      Var mx = segment_max(act, {0, 1, 0}, 2);
      Var mixed = add(ewise_max(scale(pooled, 1.125), mn),
                      ewise_min(pooled, scale(mx, 0.875)));
      Var rows = mean_rows(mixed);
      Var volume_part = prod_reduce(rows);
      Var gathered = gather_rows(mixed, {1, 0, 1});
      Var flat = reshape(gathered, {6});
      Var catted = concat_rows({flat, rows});
      Var stacked = vstack({rows, rows});
      Var m2 = mean_rows(stacked);
      Var rel = relu(sub(m2, scale(rows, 0.5)));
      Var en = exp_neg(prod_reduce(rel));
      Var d = div(volume_part, en);
      Var total = add(d, prod_reduce(catted));
      return reshape(mul(total, total), {1});
    };
    GradCheckReport r = grad_check(f, x0, h, tol);
    if (r.skipped_nonsmooth || r.skipped > 0) continue;
    CHECK(r.passed);
    if (!r.passed)
      MESSAGE("max relative error ", r.max_rel_err);
    ++done;
  }
}

TEST_CASE("backward visits a diamond graph correctly") {
  Tape t;
  Var x = t.leaf(Tensor::scalar(1.5));
  Var a = scale(x, 2.0);
  Var b = mul(x, x);
  Var y = add(mul(a, b), a);  // 2x * x^2 + 2x = 2x^3 + 2x
  t.backward(y);
  CHECK(t.grad(x)[0] == doctest::Approx(6.0 * 1.5 * 1.5 + 2.0));
}
