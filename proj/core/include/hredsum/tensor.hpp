#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hredsum/errors.hpp"

namespace hredsum {

struct Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

// Dense row-major 64-bit tensor, a node in a reverse-mode tape. Nodes link to
// their parents; the implicit DAG is the computation graph. A node records a
// backward rule only when gradients are enabled and some parent requires them.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> values;
    bool requires_grad = false;
    std::vector<double> grad;  // empty until touched by backward()

    std::vector<TensorPtr> parents;
    std::function<void(Tensor&)> backward_fn;  // nullptr for leaves

    std::size_t size() const { return values.size(); }
    std::size_t rows() const { return shape.at(0); }
    std::size_t cols() const { return shape.at(1); }
    bool is_scalar() const { return values.size() == 1; }
    double scalar() const;

    void ensure_grad();
    void zero_grad();

    static TensorPtr create(std::vector<std::size_t> shape, std::vector<double> values,
                            bool requires_grad = false);
    static TensorPtr zeros(std::vector<std::size_t> shape, bool requires_grad = false);
    static TensorPtr full(std::vector<std::size_t> shape, double v, bool requires_grad = false);
    static TensorPtr scalar_of(double v, bool requires_grad = false);
};

std::string shape_str(const std::vector<std::size_t>& s);

// Thread-local gradient switch; evaluation paths run under a guard so no tape
// is recorded.
bool grad_enabled();
struct NoGradGuard {
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

  private:
    bool prev_;
};

// ---- forward ops (all differentiable unless noted) ----

TensorPtr add(const TensorPtr& a, const TensorPtr& b);              // same shape
TensorPtr sub(const TensorPtr& a, const TensorPtr& b);              // same shape
TensorPtr mul(const TensorPtr& a, const TensorPtr& b);              // elementwise
TensorPtr scale(const TensorPtr& a, double s);
TensorPtr mul_scalar(const TensorPtr& a, const TensorPtr& s);       // s is scalar tensor
TensorPtr matmul(const TensorPtr& a, const TensorPtr& b);           // [m×k]·[k×n]
TensorPtr matvec(const TensorPtr& a, const TensorPtr& x);           // [m×n]·[n] -> [m]
TensorPtr vecmat(const TensorPtr& x, const TensorPtr& a);           // [m]·[m×n] -> [n]
TensorPtr dot(const TensorPtr& a, const TensorPtr& b);              // -> scalar
TensorPtr tanh_t(const TensorPtr& a);
TensorPtr sigmoid(const TensorPtr& a);
TensorPtr sum(const TensorPtr& a);                                  // -> scalar
TensorPtr concat(const TensorPtr& a, const TensorPtr& b);           // vectors
TensorPtr row(const TensorPtr& m, std::size_t i);                   // [r×c] -> [c]
TensorPtr stack_rows(const std::vector<TensorPtr>& rows);           // N×[c] -> [N×c]
TensorPtr gather_rows(const TensorPtr& m, const std::vector<int>& ids);
TensorPtr gather_elems(const TensorPtr& v, const std::vector<std::size_t>& ids);
TensorPtr div_scalar(const TensorPtr& a, const TensorPtr& s);       // a / s, s scalar
TensorPtr add_rowvec(const TensorPtr& m, const TensorPtr& v);       // m[i] += v
TensorPtr add_scaled_rows(const TensorPtr& m, const TensorPtr& s, const TensorPtr& v);
                                                                    // m[i] + s[i]*v
TensorPtr min_elem(const TensorPtr& a, const TensorPtr& b);         // ties route to a
TensorPtr pick(const TensorPtr& v, std::size_t i);                  // -> scalar
TensorPtr log_floored(const TensorPtr& a, double floor_value);
TensorPtr scatter_add(const TensorPtr& v, const std::vector<int>& ids, std::size_t out_size);
TensorPtr pad_tail(const TensorPtr& v, std::size_t out_size);       // zeros appended

// Max-subtracted softmax over a vector; masked-out positions (mask[i]==0) get
// exactly 0 and receive no gradient. Throws DegenerateInputError when every
// position is masked.
TensorPtr softmax_stable(const TensorPtr& x, const std::vector<std::uint8_t>* mask = nullptr);

// Reverse-mode sweep from a scalar loss. Visits every reachable node exactly
// once in reverse topological order; gradients accumulate additively across
// uses. Non-scalar loss is a contract error.
void backward(const TensorPtr& loss);

// ---- gradient checking ----

struct GradCheckReport {
    std::vector<double> analytic;
    std::vector<double> numeric;
    std::vector<double> rel_error;
    double max_rel_error = 0.0;
    bool pass = false;
};

// Central-difference check of d f / d x. f must be a pure scalar-valued
// function of x's values; x is restored on exit.
GradCheckReport grad_check(const std::function<TensorPtr()>& f, const TensorPtr& x,
                           double step = 1e-5, double tol = 1e-4);

}  // namespace hredsum
