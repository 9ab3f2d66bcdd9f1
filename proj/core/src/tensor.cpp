#include "hredsum/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace hredsum {

namespace {

thread_local bool g_grad_enabled = true;

std::size_t shape_product(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t e : s) n *= e;
    return n;
}

bool want_tape(const std::initializer_list<TensorPtr>& parents) {
    if (!g_grad_enabled) return false;
    for (const auto& p : parents)
        if (p && p->requires_grad) return true;
    return false;
}

TensorPtr make_node(std::vector<std::size_t> shape, std::vector<double> values,
                    std::initializer_list<TensorPtr> parents,
                    std::function<void(Tensor&)> bwd) {
    auto t = Tensor::create(std::move(shape), std::move(values));
    if (want_tape(parents)) {
        t->requires_grad = true;
        t->parents.assign(parents.begin(), parents.end());
        t->backward_fn = std::move(bwd);
    }
    return t;
}

void require_same_shape(const TensorPtr& a, const TensorPtr& b, const char* op) {
    if (a->shape != b->shape)
        throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a->shape) +
                             " vs " + shape_str(b->shape));
}

void accum(const TensorPtr& p, std::size_t i, double g) {
    if (p->requires_grad) {
        p->ensure_grad();
        p->grad[i] += g;
    }
}

}  // namespace

std::string shape_str(const std::vector<std::size_t>& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "x" : "") << s[i];
    os << "]";
    return os.str();
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : prev_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = prev_; }

double Tensor::scalar() const {
    if (!is_scalar()) throw ContractError("scalar() on tensor of shape " + shape_str(shape));
    return values[0];
}

void Tensor::ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
}

void Tensor::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

TensorPtr Tensor::create(std::vector<std::size_t> shape, std::vector<double> values,
                         bool requires_grad) {
    if (shape_product(shape) != values.size())
        throw ContractError("tensor: " + std::to_string(values.size()) +
                            " values for shape " + shape_str(shape));
    auto t = std::make_shared<Tensor>();
    t->shape = std::move(shape);
    t->values = std::move(values);
    t->requires_grad = requires_grad;
    return t;
}

TensorPtr Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
    std::vector<double> v(shape_product(shape), 0.0);
    return create(std::move(shape), std::move(v), requires_grad);
}

TensorPtr Tensor::full(std::vector<std::size_t> shape, double x, bool requires_grad) {
    std::vector<double> v(shape_product(shape), x);
    return create(std::move(shape), std::move(v), requires_grad);
}

TensorPtr Tensor::scalar_of(double v, bool requires_grad) {
    return create({1}, {v}, requires_grad);
}

// ---- ops ----

TensorPtr add(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape(a, b, "add");
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->values[i] + b->values[i];
    return make_node(a->shape, std::move(out), {a, b}, [a, b](Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            accum(a, i, self.grad[i]);
            accum(b, i, self.grad[i]);
        }
    });
}

TensorPtr sub(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape(a, b, "sub");
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->values[i] - b->values[i];
    return make_node(a->shape, std::move(out), {a, b}, [a, b](Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            accum(a, i, self.grad[i]);
            accum(b, i, -self.grad[i]);
        }
    });
}

TensorPtr mul(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape(a, b, "mul");
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->values[i] * b->values[i];
    return make_node(a->shape, std::move(out), {a, b}, [a, b](Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            accum(a, i, self.grad[i] * b->values[i]);
            accum(b, i, self.grad[i] * a->values[i]);
        }
    });
}

TensorPtr scale(const TensorPtr& a, double s) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->values[i] * s;
    return make_node(a->shape, std::move(out), {a}, [a, s](Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) accum(a, i, self.grad[i] * s);
    });
}

TensorPtr mul_scalar(const TensorPtr& a, const TensorPtr& s) {
    if (!s->is_scalar()) throw ContractError("mul_scalar: scale must be scalar");
    double sv = s->values[0];
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->values[i] * sv;
    return make_node(a->shape, std::move(out), {a, s}, [a, s, sv](Tensor& self) {
        double sg = 0.0;
        for (std::size_t i = 0; i < self.size(); ++i) {
            accum(a, i, self.grad[i] * sv);
            sg += self.grad[i] * a->values[i];
        }
        accum(s, 0, sg);
    });
}

TensorPtr matmul(const TensorPtr& a, const TensorPtr& b) {
    if (a->shape.size() != 2 || b->shape.size() != 2 || a->cols() != b->rows())
        throw DimensionError("matmul: incompatible shapes " + shape_str(a->shape) + " vs " +
                             shape_str(b->shape));
    const std::size_t m = a->rows(), k = a->cols(), n = b->cols();
    std::vector<double> out(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            double av = a->values[i * k + p];
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += av * b->values[p * n + j];
        }
    return make_node({m, n}, std::move(out), {a, b}, [a, b, m, k, n](Tensor& self) {
        // a.grad += g·bᵀ ; b.grad += aᵀ·g
        if (a->requires_grad) {
            a->ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t p = 0; p < k; ++p) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < n; ++j)
                        s += self.grad[i * n + j] * b->values[p * n + j];
                    a->grad[i * k + p] += s;
                }
        }
        if (b->requires_grad) {
            b->ensure_grad();
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < m; ++i)
                        s += a->values[i * k + p] * self.grad[i * n + j];
                    b->grad[p * n + j] += s;
                }
        }
    });
}

TensorPtr matvec(const TensorPtr& a, const TensorPtr& x) {
    if (a->shape.size() != 2 || x->shape.size() != 1 || a->cols() != x->size())
        throw DimensionError("matvec: incompatible shapes " + shape_str(a->shape) + " vs " +
                             shape_str(x->shape));
    const std::size_t m = a->rows(), n = a->cols();
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a->values[i * n + j] * x->values[j];
        out[i] = s;
    }
    return make_node({m}, std::move(out), {a, x}, [a, x, m, n](Tensor& self) {
        if (a->requires_grad) {
            a->ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    a->grad[i * n + j] += self.grad[i] * x->values[j];
        }
        if (x->requires_grad) {
            x->ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    x->grad[j] += self.grad[i] * a->values[i * n + j];
        }
    });
}

TensorPtr vecmat(const TensorPtr& x, const TensorPtr& a) {
    if (a->shape.size() != 2 || x->shape.size() != 1 || a->rows() != x->size())
        throw DimensionError("vecmat: incompatible shapes " + shape_str(x->shape) + " vs " +
                             shape_str(a->shape));
    const std::size_t m = a->rows(), n = a->cols();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double xv = x->values[i];
        if (xv == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) out[j] += xv * a->values[i * n + j];
    }
    return make_node({n}, std::move(out), {x, a}, [x, a, m, n](Tensor& self) {
        if (x->requires_grad) {
            x->ensure_grad();
            for (std::size_t i = 0; i < m; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += self.grad[j] * a->values[i * n + j];
                x->grad[i] += s;
            }
        }
        if (a->requires_grad) {
            a->ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    a->grad[i * n + j] += x->values[i] * self.grad[j];
        }
    });
}

TensorPtr gather_elems(const TensorPtr& v, const std::vector<std::size_t>& ids) {
    if (v->shape.size() != 1) throw ContractError("gather_elems: need vector");
    std::vector<double> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] >= v->size())
            throw ContractError("gather_elems: id " + std::to_string(ids[i]) +
                                " out of range for " + shape_str(v->shape));
        out[i] = v->values[ids[i]];
    }
    return make_node({ids.size()}, std::move(out), {v}, [v, ids](Tensor& self) {
        for (std::size_t i = 0; i < ids.size(); ++i) accum(v, ids[i], self.grad[i]);
    });
}

TensorPtr div_scalar(const TensorPtr& a, const TensorPtr& s) {
    if (!s->is_scalar()) throw ContractError("div_scalar: divisor must be scalar");
    double sv = s->values[0];
    if (sv == 0.0) throw DegenerateInputError("div_scalar: zero divisor");
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->values[i] / sv;
    return make_node(a->shape, std::move(out), {a, s}, [a, s, sv](Tensor& self) {
        double sg = 0.0;
        for (std::size_t i = 0; i < self.size(); ++i) {
            accum(a, i, self.grad[i] / sv);
            sg -= self.grad[i] * a->values[i] / (sv * sv);
        }
        accum(s, 0, sg);
    });
}

TensorPtr dot(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i) s += a->values[i] * b->values[i];
    return make_node({1}, {s}, {a, b}, [a, b](Tensor& self) {
        double g = self.grad[0];
        for (std::size_t i = 0; i < a->size(); ++i) {
            accum(a, i, g * b->values[i]);
            accum(b, i, g * a->values[i]);
        }
    });
}

TensorPtr tanh_t(const TensorPtr& a) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(a->values[i]);
    auto t = make_node(a->shape, std::move(out), {a}, nullptr);
    if (t->requires_grad)
        t->backward_fn = [a](Tensor& self) {
            for (std::size_t i = 0; i < self.size(); ++i)
                accum(a, i, self.grad[i] * (1.0 - self.values[i] * self.values[i]));
        };
    return t;
}

TensorPtr sigmoid(const TensorPtr& a) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-a->values[i]));
    auto t = make_node(a->shape, std::move(out), {a}, nullptr);
    if (t->requires_grad)
        t->backward_fn = [a](Tensor& self) {
            for (std::size_t i = 0; i < self.size(); ++i)
                accum(a, i, self.grad[i] * self.values[i] * (1.0 - self.values[i]));
        };
    return t;
}

TensorPtr sum(const TensorPtr& a) {
    double s = std::accumulate(a->values.begin(), a->values.end(), 0.0);
    return make_node({1}, {s}, {a}, [a](Tensor& self) {
        for (std::size_t i = 0; i < a->size(); ++i) accum(a, i, self.grad[0]);
    });
}

TensorPtr concat(const TensorPtr& a, const TensorPtr& b) {
    if (a->shape.size() != 1 || b->shape.size() != 1)
        throw DimensionError("concat: vectors only, got " + shape_str(a->shape) + " and " +
                             shape_str(b->shape));
    std::vector<double> out;
    out.reserve(a->size() + b->size());
    out.insert(out.end(), a->values.begin(), a->values.end());
    out.insert(out.end(), b->values.begin(), b->values.end());
    std::size_t na = a->size();
    return make_node({a->size() + b->size()}, std::move(out), {a, b}, [a, b, na](Tensor& self) {
        for (std::size_t i = 0; i < na; ++i) accum(a, i, self.grad[i]);
        for (std::size_t i = 0; i < b->size(); ++i) accum(b, i, self.grad[na + i]);
    });
}

TensorPtr row(const TensorPtr& m, std::size_t i) {
    if (m->shape.size() != 2 || i >= m->rows())
        throw ContractError("row: index " + std::to_string(i) + " of " + shape_str(m->shape));
    std::size_t c = m->cols();
    std::vector<double> out(m->values.begin() + i * c, m->values.begin() + (i + 1) * c);
    return make_node({c}, std::move(out), {m}, [m, i, c](Tensor& self) {
        for (std::size_t j = 0; j < c; ++j) accum(m, i * c + j, self.grad[j]);
    });
}

TensorPtr stack_rows(const std::vector<TensorPtr>& rows) {
    if (rows.empty()) throw ContractError("stack_rows: empty input");
    std::size_t c = rows[0]->size();
    std::vector<double> out;
    out.reserve(rows.size() * c);
    bool needs = false;
    for (const auto& r : rows) {
        if (r->shape.size() != 1 || r->size() != c)
            throw DimensionError("stack_rows: row shape " + shape_str(r->shape) +
                                 " vs expected [" + std::to_string(c) + "]");
        out.insert(out.end(), r->values.begin(), r->values.end());
        needs = needs || r->requires_grad;
    }
    auto t = Tensor::create({rows.size(), c}, std::move(out));
    if (g_grad_enabled && needs) {
        t->requires_grad = true;
        t->parents = rows;
        auto rows_copy = rows;
        t->backward_fn = [rows_copy, c](Tensor& self) {
            for (std::size_t i = 0; i < rows_copy.size(); ++i)
                for (std::size_t j = 0; j < c; ++j)
                    accum(rows_copy[i], j, self.grad[i * c + j]);
        };
    }
    return t;
}

TensorPtr gather_rows(const TensorPtr& m, const std::vector<int>& ids) {
    if (m->shape.size() != 2) throw ContractError("gather_rows: need matrix");
    std::size_t c = m->cols();
    std::vector<double> out;
    out.reserve(ids.size() * c);
    for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= m->rows())
            throw ContractError("gather_rows: id " + std::to_string(id) + " out of range for " +
                                shape_str(m->shape));
        out.insert(out.end(), m->values.begin() + id * c, m->values.begin() + (id + 1) * c);
    }
    return make_node({ids.size(), c}, std::move(out), {m}, [m, ids, c](Tensor& self) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = 0; j < c; ++j)
                accum(m, static_cast<std::size_t>(ids[i]) * c + j, self.grad[i * c + j]);
    });
}

TensorPtr add_rowvec(const TensorPtr& m, const TensorPtr& v) {
    if (m->shape.size() != 2 || v->shape.size() != 1 || m->cols() != v->size())
        throw DimensionError("add_rowvec: " + shape_str(m->shape) + " vs " + shape_str(v->shape));
    std::size_t r = m->rows(), c = m->cols();
    std::vector<double> out(m->values);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[i * c + j] += v->values[j];
    return make_node(m->shape, std::move(out), {m, v}, [m, v, r, c](Tensor& self) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                accum(m, i * c + j, self.grad[i * c + j]);
                accum(v, j, self.grad[i * c + j]);
            }
    });
}

TensorPtr add_scaled_rows(const TensorPtr& m, const TensorPtr& s, const TensorPtr& v) {
    if (m->shape.size() != 2 || s->shape.size() != 1 || v->shape.size() != 1 ||
        m->rows() != s->size() || m->cols() != v->size())
        throw DimensionError("add_scaled_rows: " + shape_str(m->shape) + ", " +
                             shape_str(s->shape) + ", " + shape_str(v->shape));
    std::size_t r = m->rows(), c = m->cols();
    std::vector<double> out(m->values);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[i * c + j] += s->values[i] * v->values[j];
    return make_node(m->shape, std::move(out), {m, s, v}, [m, s, v, r, c](Tensor& self) {
        for (std::size_t i = 0; i < r; ++i) {
            double sg = 0.0;
            for (std::size_t j = 0; j < c; ++j) {
                double g = self.grad[i * c + j];
                accum(m, i * c + j, g);
                sg += g * v->values[j];
                accum(v, j, g * s->values[i]);
            }
            accum(s, i, sg);
        }
    });
}

TensorPtr min_elem(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape(a, b, "min_elem");
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(a->values[i], b->values[i]);
    return make_node(a->shape, std::move(out), {a, b}, [a, b](Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            if (a->values[i] <= b->values[i])
                accum(a, i, self.grad[i]);
            else
                accum(b, i, self.grad[i]);
        }
    });
}

TensorPtr pick(const TensorPtr& v, std::size_t i) {
    if (v->shape.size() != 1 || i >= v->size())
        throw ContractError("pick: index " + std::to_string(i) + " of " + shape_str(v->shape));
    return make_node({1}, {v->values[i]}, {v}, [v, i](Tensor& self) {
        accum(v, i, self.grad[0]);
    });
}

TensorPtr log_floored(const TensorPtr& a, double floor_value) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::log(std::max(a->values[i], floor_value));
    return make_node(a->shape, std::move(out), {a}, [a, floor_value](Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            if (a->values[i] > floor_value) accum(a, i, self.grad[i] / a->values[i]);
    });
}

TensorPtr scatter_add(const TensorPtr& v, const std::vector<int>& ids, std::size_t out_size) {
    if (v->shape.size() != 1 || ids.size() != v->size())
        throw ContractError("scatter_add: " + std::to_string(ids.size()) + " ids for " +
                            shape_str(v->shape));
    std::vector<double> out(out_size, 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= out_size)
            throw ContractError("scatter_add: id " + std::to_string(ids[i]) + " out of range " +
                                std::to_string(out_size));
        out[ids[i]] += v->values[i];
    }
    return make_node({out_size}, std::move(out), {v}, [v, ids](Tensor& self) {
        for (std::size_t i = 0; i < ids.size(); ++i) accum(v, i, self.grad[ids[i]]);
    });
}

TensorPtr pad_tail(const TensorPtr& v, std::size_t out_size) {
    if (v->shape.size() != 1 || out_size < v->size())
        throw ContractError("pad_tail: cannot pad " + shape_str(v->shape) + " to " +
                            std::to_string(out_size));
    std::vector<double> out(out_size, 0.0);
    std::copy(v->values.begin(), v->values.end(), out.begin());
    return make_node({out_size}, std::move(out), {v}, [v](Tensor& self) {
        for (std::size_t i = 0; i < v->size(); ++i) accum(v, i, self.grad[i]);
    });
}

TensorPtr softmax_stable(const TensorPtr& x, const std::vector<std::uint8_t>* mask) {
    if (x->shape.size() != 1) throw ContractError("softmax: need vector");
    const std::size_t n = x->size();
    if (mask && mask->size() != n) throw ContractError("softmax: mask length mismatch");
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        if ((!mask || (*mask)[i]) && x->values[i] > mx) mx = x->values[i];
    if (mx == -std::numeric_limits<double>::infinity())
        throw DegenerateInputError("softmax: all positions masked");
    std::vector<double> out(n, 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (!mask || (*mask)[i]) {
            out[i] = std::exp(x->values[i] - mx);
            z += out[i];
        }
    for (double& o : out) o /= z;
    std::vector<std::uint8_t> m = mask ? *mask : std::vector<std::uint8_t>(n, 1);
    return make_node(x->shape, std::move(out), {x}, [x, m](Tensor& self) {
        double dotgy = 0.0;
        for (std::size_t i = 0; i < self.size(); ++i)
            if (m[i]) dotgy += self.grad[i] * self.values[i];
        for (std::size_t i = 0; i < self.size(); ++i)
            if (m[i]) accum(x, i, self.values[i] * (self.grad[i] - dotgy));
    });
}

void backward(const TensorPtr& loss) {
    if (!loss->is_scalar())
        throw ContractError("backward: loss must be scalar, got " + shape_str(loss->shape));
    // iterative post-order DFS -> topological order
    std::vector<Tensor*> order;
    std::unordered_set<Tensor*> seen;
    std::vector<std::pair<Tensor*, std::size_t>> stack;
    stack.emplace_back(loss.get(), 0);
    seen.insert(loss.get());
    while (!stack.empty()) {
        auto& [node, idx] = stack.back();
        if (idx < node->parents.size()) {
            Tensor* p = node->parents[idx++].get();
            if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    loss->ensure_grad();
    loss->grad[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Tensor* t = *it;
        if (t->backward_fn) {
            t->ensure_grad();
            t->backward_fn(*t);
        }
    }
}

GradCheckReport grad_check(const std::function<TensorPtr()>& f, const TensorPtr& x, double step,
                           double tol) {
    GradCheckReport rep;
    const std::size_t n = x->size();

    x->grad.clear();
    auto loss = f();
    backward(loss);
    rep.analytic.assign(n, 0.0);
    if (!x->grad.empty()) rep.analytic = x->grad;

    rep.numeric.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double orig = x->values[i];
        x->values[i] = orig + step;
        double fp;
        {
            NoGradGuard ng;
            fp = f()->scalar();
        }
        x->values[i] = orig - step;
        double fm;
        {
            NoGradGuard ng;
            fm = f()->scalar();
        }
        x->values[i] = orig;
        rep.numeric[i] = (fp - fm) / (2.0 * step);
    }

    rep.rel_error.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = rep.analytic[i], m = rep.numeric[i];
        double denom = std::max(std::abs(a), std::abs(m));
        double err = (denom > 1e-6) ? std::abs(a - m) / denom : std::abs(a - m);
        rep.rel_error[i] = err;
        rep.max_rel_error = std::max(rep.max_rel_error, err);
    }
    rep.pass = rep.max_rel_error < tol;
    return rep;
}

}  // namespace hredsum
