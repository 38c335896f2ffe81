#pragma once

#include <functional>
#include <vector>

#include "g2r/tensor.hpp"

namespace g2r {

class Tape;

// Handle to a node on a tape. Cheap to copy; ops on Vars record to the
// owning tape and return new handles.
struct Var {
  Tape* tape = nullptr;
  int id = -1;
};

// Records primitive operations in execution order (inputs always precede
// outputs, so insertion order is a topological order) and replays the
// standard adjoints in reverse on backward(). A tape is single-threaded;
// run independent tapes for parallel work.
//
// Tie rule for min/max: at an exact tie the full adjoint routes to the
// first argument (elementwise ops) or the lowest row index (segment ops).
// Every tie observed during a forward op sets a sticky flag so gradient
// checks can report the evaluation as nonsmooth instead of failing.
class Tape {
 public:
  Var leaf(Tensor value);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  const Tensor& grad(Var v) const;

  // Like grad(), but a node the backward pass never reached yields zeros.
  Tensor grad_or_zero(Var v) const;

  // Seeds the (scalar) root with adjoint 1 and visits every node exactly
  // once in reverse insertion order.
  void backward(Var root);

  bool tie_observed() const { return tie_observed_; }
  void reset_tie_flag() { tie_observed_ = false; }

  std::size_t size() const { return nodes_.size(); }

 private:
  friend class TapeOps;

  struct Node {
    Tensor value;
    std::function<void(Tape&)> back;  // null for leaves
  };

  int push(Tensor value, std::function<void(Tape&)> back);
  Tensor& grad_buffer(int id);

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
  bool tie_observed_ = false;
};

// x[n,in] * w[in,out] + b[out] broadcast over rows.
Var linear(Var x, Var w, Var b);

Var relu(Var x);
Var softplus(Var x);
Var exp_neg(Var x);

Var ewise_min(Var a, Var b);
Var ewise_max(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);
Var scale(Var x, double c);

// Per-segment reductions over rows of x[n,d]; seg ids in [0,k). Reduction
// order inside a segment is ascending row index. segment_sum yields a zero
// row for an empty segment; segment_min/max require every segment nonempty.
Var segment_sum(Var x, std::vector<int> seg, int k);
Var segment_min(Var x, std::vector<int> seg, int k);
Var segment_max(Var x, std::vector<int> seg, int k);

// Rows of x[n,d] picked by index, repeats allowed; backward scatter-adds.
Var gather_rows(Var x, std::vector<int> idx);

// Rank-1 inputs concatenated in argument order.
Var concat_rows(const std::vector<Var>& xs);

// Rank-1 rows of equal length stacked into [k,d].
Var vstack(const std::vector<Var>& rows);

Var reshape(Var x, std::vector<int> shape);

// Product of the entries of a rank-1 tensor; the adjoint of entry i is the
// product of all other entries, computed divide-free so zeros are safe.
Var prod_reduce(Var x);

// Column means of x[k,d].
Var mean_rows(Var x);

// Mean of squared differences between per-sample scalar predictions and
// constant targets.
Var mse_loss(const std::vector<Var>& preds, const std::vector<double>& targets);

struct GradCheckReport {
  double max_rel_err = 0.0;
  int checked = 0;
  int skipped = 0;                // coordinates whose perturbed evals hit ties
  bool skipped_nonsmooth = false;  // base evaluation hit a tie; nothing checked
  bool passed = false;
};

// Compares the reverse-mode gradient of a scalar function against central
// finite differences, coordinate by coordinate. Relative error uses
// |ad - fd| / max(1, |ad|, |fd|).
GradCheckReport grad_check(const std::function<Var(Tape&, Var)>& f,
                           const Tensor& x0, double h, double tol);

}  // namespace g2r
