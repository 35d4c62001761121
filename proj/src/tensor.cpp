#include "polystoch/tensor.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace polystoch {

std::size_t cell_count(int dim, int order) {
    if (dim < 1) throw std::invalid_argument("tensor: dim must be >= 1");
    if (order < 1) throw std::invalid_argument("tensor: order must be >= 1");
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
        if (total > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(order))
            throw std::invalid_argument("tensor: n^d overflows");
        total *= static_cast<std::size_t>(order);
    }
    return total;
}

Tensor::Tensor(int dim, int order)
    : dim_(dim), order_(order), entries_(cell_count(dim, order), Rational(0)) {}

Tensor::Tensor(int dim, int order, std::vector<Rational> entries)
    : dim_(dim), order_(order), entries_(std::move(entries)) {
    if (entries_.size() != cell_count(dim, order))
        throw std::invalid_argument("tensor: entry count does not match n^d");
}

std::size_t Tensor::flat_index(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != dim_)
        throw std::invalid_argument("tensor: index length does not match dim");
    std::size_t flat = 0;
    for (int i = 0; i < dim_; ++i) {
        if (idx[i] < 0 || idx[i] >= order_)
            throw std::out_of_range("tensor: coordinate out of range");
        flat = flat * static_cast<std::size_t>(order_) + static_cast<std::size_t>(idx[i]);
    }
    return flat;
}

IndexTuple Tensor::unflatten(std::size_t flat) const {
    IndexTuple idx(dim_);
    for (int i = dim_ - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat % static_cast<std::size_t>(order_));
        flat /= static_cast<std::size_t>(order_);
    }
    return idx;
}

Tensor& Tensor::operator+=(const Tensor& other) {
    if (dim_ != other.dim_ || order_ != other.order_)
        throw std::invalid_argument("tensor: shape mismatch in +=");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

Tensor& Tensor::operator*=(const Rational& c) {
    for (auto& e : entries_) e *= c;
    return *this;
}

bool next_index(IndexTuple& idx, int order) {
    for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
        if (++idx[i] < order) return true;
        idx[i] = 0;
    }
    return false;
}

int PlaneSpec::free_count() const {
    int k = 0;
    for (int v : fixed) k += (v == kFree);
    return k;
}

PlaneSpec PlaneSpec::line(int dim, int free_axis, const IndexTuple& other_coords) {
    if (free_axis < 0 || free_axis >= dim) throw std::invalid_argument("line: bad axis");
    if (static_cast<int>(other_coords.size()) != dim - 1)
        throw std::invalid_argument("line: need dim-1 fixed coordinates");
    PlaneSpec p;
    p.fixed.assign(dim, 0);
    int j = 0;
    for (int ax = 0; ax < dim; ++ax)
        p.fixed[ax] = (ax == free_axis) ? kFree : other_coords[j++];
    return p;
}

namespace {

void validate_plane(const Tensor& a, const PlaneSpec& p) {
    if (p.dim() != a.dim()) throw std::invalid_argument("plane: dim mismatch");
    for (int v : p.fixed)
        if (v != PlaneSpec::kFree && (v < 0 || v >= a.order()))
            throw std::invalid_argument("plane: fixed value out of range");
}

// Iterates the cells of a plane, invoking fn(flat_index).
template <typename Fn>
void for_each_plane_cell(const Tensor& a, const PlaneSpec& p, Fn&& fn) {
    const int d = a.dim();
    const int n = a.order();
    std::vector<int> free_axes;
    IndexTuple idx(d);
    for (int ax = 0; ax < d; ++ax) {
        if (p.is_free(ax)) {
            free_axes.push_back(ax);
            idx[ax] = 0;
        } else {
            idx[ax] = p.fixed[ax];
        }
    }
    while (true) {
        fn(a.flat_index(idx));
        int i = static_cast<int>(free_axes.size()) - 1;
        for (; i >= 0; --i) {
            int ax = free_axes[i];
            if (++idx[ax] < n) break;
            idx[ax] = 0;
        }
        if (i < 0) break;
    }
}

std::string coords_to_string(const IndexTuple& idx) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << ")";
    return os.str();
}

} // namespace

Rational plane_sum(const Tensor& a, const PlaneSpec& p) {
    validate_plane(a, p);
    Rational sum(0);
    for_each_plane_cell(a, p, [&](std::size_t flat) { sum += a[flat]; });
    return sum;
}

PredicateReport check_polystochastic(const Tensor& a, int s) {
    if (s < 1 || s > a.dim() - 1)
        throw std::invalid_argument("is_polystochastic: s must be in [1, dim-1]");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) {
            return {false, "negative entry " + to_string(a[i]) + " at " +
                               coords_to_string(a.unflatten(i))};
        }
    }
    PredicateReport rep{true, {}};
    for_each_plane(a.dim(), a.order(), s, [&](const PlaneSpec& p) {
        if (!rep.ok) return;
        Rational sum = plane_sum(a, p);
        if (sum != 1) {
            std::ostringstream os;
            os << "plane [";
            for (int ax = 0; ax < p.dim(); ++ax) {
                if (ax) os << ",";
                if (p.is_free(ax)) os << "*";
                else os << p.fixed[ax];
            }
            os << "] sums to " << to_string(sum) << ", expected 1";
            rep = {false, os.str()};
        }
    });
    return rep;
}

bool is_polystochastic(const Tensor& a, int s) { return check_polystochastic(a, s).ok; }

PredicateReport check_permutation_matrix(const Tensor& a, int s) {
    if (s < 1 || s > a.dim() - 1)
        throw std::invalid_argument("is_permutation_matrix: s must be in [1, dim-1]");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && a[i] != 1)
            return {false, "entry " + to_string(a[i]) + " at " +
                               coords_to_string(a.unflatten(i)) + " is not 0 or 1"};
    }
    // 0/1-valued, so "exactly one 1 per s-plane" is "every s-plane sums to 1"
    return check_polystochastic(a, s);
}

bool is_permutation_matrix(const Tensor& a, int s) { return check_permutation_matrix(a, s).ok; }

Tensor product(const Tensor& a, const Tensor& b) {
    if (a.order() != b.order()) throw std::invalid_argument("product: order mismatch");
    if (a.dim() < 2 || b.dim() < 2) throw std::invalid_argument("product: dims must be >= 2");
    const int p = a.dim();
    const int q = b.dim();
    const int n = a.order();
    Tensor c(p + q - 2, n);
    IndexTuple ci(p + q - 2, 0);
    IndexTuple ai(p);
    IndexTuple bi(q);
    do {
        Rational sum(0);
        for (int j = 0; j < n; ++j) {
            for (int t = 0; t < p - 1; ++t) ai[t] = ci[t];
            ai[p - 1] = j;
            bi[0] = j;
            for (int t = 0; t < q - 1; ++t) bi[t + 1] = ci[p - 1 + t];
            sum += a.at(ai) * b.at(bi);
        }
        c.at(ci) = sum;
    } while (next_index(ci, n));
    return c;
}

Tensor combine(const ConvexCombination& c) {
    if (c.terms.empty()) throw std::invalid_argument("combine: empty combination");
    const int d = c.terms.front().second.dim();
    const int n = c.terms.front().second.order();
    Rational total(0);
    for (const auto& [w, t] : c.terms) {
        if (w <= 0) throw std::invalid_argument("combine: non-positive weight " + to_string(w));
        if (t.dim() != d || t.order() != n)
            throw std::invalid_argument("combine: shape mismatch among terms");
        total += w;
    }
    if (total != 1)
        throw std::invalid_argument("combine: weights sum to " + to_string(total) + ", expected 1");
    Tensor out(d, n);
    for (const auto& [w, t] : c.terms) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * t[i];
    }
    return out;
}

Tensor uniform(int d, int n) {
    Tensor t(d, n);
    Rational v = make_rational(1, n);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = v;
    return t;
}

Tensor ones(int d, int n) {
    Tensor t(d, n);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 1;
    return t;
}

} // namespace polystoch
