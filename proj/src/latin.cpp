#include "polystoch/latin.hpp"

#include "polystoch/caps.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace polystoch {

namespace {

int mod_n(long long v, int n) {
    long long r = v % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

} // namespace

bool is_latin_array(int dim, int order, const std::vector<int>& symbols) {
    if (symbols.size() != cell_count(dim, order)) return false;
    for (int v : symbols)
        if (v < 0 || v >= order) return false;
    // one of each symbol per line, for every axis direction
    std::vector<std::size_t> stride(dim);
    std::size_t acc = 1;
    for (int ax = dim - 1; ax >= 0; --ax) {
        stride[ax] = acc;
        acc *= static_cast<std::size_t>(order);
    }
    std::vector<bool> seen(order);
    for (int ax = 0; ax < dim; ++ax) {
        IndexTuple base(dim, 0);
        base[ax] = -1; // odometer over the other axes only
        std::vector<int> others;
        for (int i = 0; i < dim; ++i)
            if (i != ax) others.push_back(i);
        IndexTuple o(others.size(), 0);
        while (true) {
            std::size_t start = 0;
            for (std::size_t i = 0; i < others.size(); ++i)
                start += stride[others[i]] * static_cast<std::size_t>(o[i]);
            std::fill(seen.begin(), seen.end(), false);
            for (int v = 0; v < order; ++v) {
                int s = symbols[start + stride[ax] * static_cast<std::size_t>(v)];
                if (seen[s]) return false;
                seen[s] = true;
            }
            if (o.empty() || !next_index(o, order)) break;
        }
    }
    return true;
}

LatinHypercube::LatinHypercube(int dim, int order, std::vector<int> symbols)
    : dim_(dim), order_(order), symbols_(std::move(symbols)) {
    if (!is_latin_array(dim_, order_, symbols_))
        throw std::invalid_argument("latin: array violates the Latin property");
}

std::size_t LatinHypercube::flat_index(std::span<const int> coords) const {
    if (static_cast<int>(coords.size()) != dim_)
        throw std::invalid_argument("latin: coordinate length does not match dim");
    std::size_t flat = 0;
    for (int i = 0; i < dim_; ++i) {
        if (coords[i] < 0 || coords[i] >= order_)
            throw std::out_of_range("latin: coordinate out of range");
        flat = flat * static_cast<std::size_t>(order_) + static_cast<std::size_t>(coords[i]);
    }
    return flat;
}

IndexTuple LatinHypercube::unflatten(std::size_t flat) const {
    IndexTuple idx(dim_);
    for (int i = dim_ - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat % static_cast<std::size_t>(order_));
        flat /= static_cast<std::size_t>(order_);
    }
    return idx;
}

Tensor p_of_h(const LatinHypercube& h) {
    const int k = h.dim();
    const int n = h.order();
    Tensor p(k + 1, n);
    IndexTuple x(k, 0);
    IndexTuple full(k + 1, 0);
    do {
        for (int i = 0; i < k; ++i) full[i] = x[i];
        full[k] = h.at(x);
        p.at(full) = 1;
    } while (next_index(x, n));
    return p;
}

LatinHypercube h_of_p(const Tensor& p) {
    auto rep = check_permutation_matrix(p, 1);
    if (!rep.ok) throw std::invalid_argument("h_of_p: tensor is not a 1-permutation matrix: " + rep.reason);
    const int k = p.dim() - 1;
    const int n = p.order();
    std::vector<int> symbols(cell_count(k, n), -1);
    IndexTuple x(k, 0);
    IndexTuple full(k + 1, 0);
    std::size_t flat = 0;
    do {
        for (int i = 0; i < k; ++i) full[i] = x[i];
        for (int s = 0; s < n; ++s) {
            full[k] = s;
            if (p.at(full) == 1) {
                symbols[flat] = s;
                break;
            }
        }
        ++flat;
    } while (next_index(x, n));
    return LatinHypercube(k, n, std::move(symbols));
}

LatinHypercube cyclic(int dim, int order) {
    std::vector<int> symbols(cell_count(dim, order));
    IndexTuple x(dim, 0);
    std::size_t flat = 0;
    do {
        long long sum = 0;
        for (int v : x) sum += v;
        symbols[flat++] = mod_n(sum, order);
    } while (next_index(x, order));
    return LatinHypercube(dim, order, std::move(symbols));
}

LatinHypercube linear_hypercube(int dim, int order, int shift, const std::vector<int>& coeffs) {
    if (static_cast<int>(coeffs.size()) != dim)
        throw std::invalid_argument("linear: need one coefficient per axis");
    for (int i = 0; i < dim; ++i) {
        if (std::gcd(mod_n(coeffs[i], order), order) != 1 && order > 1) {
            std::ostringstream os;
            os << "linear: coefficient " << coeffs[i] << " at index " << i
               << " is not coprime to order " << order;
            throw std::invalid_argument(os.str());
        }
    }
    std::vector<int> symbols(cell_count(dim, order));
    IndexTuple x(dim, 0);
    std::size_t flat = 0;
    do {
        long long sum = shift;
        for (int i = 0; i < dim; ++i) sum += static_cast<long long>(coeffs[i]) * x[i];
        symbols[flat++] = mod_n(sum, order);
    } while (next_index(x, order));
    return LatinHypercube(dim, order, std::move(symbols));
}

std::optional<LinearForm> detect_linear(const LatinHypercube& h) {
    const int k = h.dim();
    const int n = h.order();
    IndexTuple x(k, 0);
    LinearForm form;
    form.shift = h.at(x);
    form.coeffs.assign(k, 0);
    if (n > 1) {
        for (int i = 0; i < k; ++i) {
            x[i] = 1;
            form.coeffs[i] = mod_n(h.at(x) - form.shift, n);
            x[i] = 0;
        }
    }
    // verify globally
    std::size_t flat = 0;
    do {
        long long sum = form.shift;
        for (int i = 0; i < k; ++i) sum += static_cast<long long>(form.coeffs[i]) * x[i];
        if (h[flat++] != mod_n(sum, n)) return std::nullopt;
    } while (next_index(x, n));
    return form;
}

int delta(const LatinHypercube& h, const Cell& c) {
    if (h.at(c.coords) != c.symbol)
        throw std::invalid_argument("delta: cell does not belong to the hypercube");
    long long sum = c.symbol;
    for (int v : c.coords) sum -= v;
    return mod_n(sum, h.order());
}

LatinHypercube lift(const LatinHypercube& square, int dim) {
    if (square.dim() != 2) throw std::invalid_argument("lift: input must be 2-dimensional");
    if (dim < 2) throw std::invalid_argument("lift: target dim must be >= 2");
    const int n = square.order();
    if (dim == 2) return square;
    std::vector<int> symbols(cell_count(dim, n));
    IndexTuple x(dim, 0);
    std::size_t flat = 0;
    do {
        long long sum = square.at(std::span<const int>(x.data(), 2));
        for (int i = 2; i < dim; ++i) sum += x[i];
        symbols[flat++] = mod_n(sum, n);
    } while (next_index(x, n));
    return LatinHypercube(dim, n, std::move(symbols));
}

std::vector<int> row_cycle_columns(const LatinHypercube& square, int r1, int r2, int start_col) {
    if (square.dim() != 2) throw std::invalid_argument("row_cycle: input must be 2-dimensional");
    if (r1 == r2) throw std::invalid_argument("row_cycle: rows must differ");
    const int n = square.order();
    if (r1 < 0 || r1 >= n || r2 < 0 || r2 >= n || start_col < 0 || start_col >= n)
        throw std::out_of_range("row_cycle: index out of range");
    std::vector<int> col_of_symbol_r1(n);
    for (int c = 0; c < n; ++c) col_of_symbol_r1[square.at(std::array{r1, c})] = c;
    std::vector<int> cols{start_col};
    int cur = start_col;
    while (true) {
        int below = square.at(std::array{r2, cur});
        int next = col_of_symbol_r1[below];
        if (next == start_col) break;
        cols.push_back(next);
        cur = next;
    }
    return cols;
}

LatinHypercube switch_row_cycle(const LatinHypercube& square, int r1, int r2, int start_col) {
    auto cols = row_cycle_columns(square, r1, r2, start_col);
    std::vector<int> symbols = square.symbols();
    const int n = square.order();
    for (int c : cols)
        std::swap(symbols[static_cast<std::size_t>(r1) * n + c],
                  symbols[static_cast<std::size_t>(r2) * n + c]);
    return LatinHypercube(2, n, std::move(symbols));
}

LatinHypercube interchange_hyperplanes(const LatinHypercube& h, int axis, int i, int j) {
    const int k = h.dim();
    const int n = h.order();
    if (axis < 0 || axis > k) throw std::out_of_range("interchange: axis out of range");
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::out_of_range("interchange: index out of range");
    std::vector<int> symbols(h.size());
    if (axis == k) {
        // symbol direction: relabel i <-> j
        for (std::size_t f = 0; f < h.size(); ++f) {
            int s = h[f];
            symbols[f] = (s == i) ? j : (s == j) ? i : s;
        }
    } else {
        IndexTuple x(k, 0);
        std::size_t flat = 0;
        IndexTuple src(k);
        do {
            src = x;
            if (src[axis] == i) src[axis] = j;
            else if (src[axis] == j) src[axis] = i;
            symbols[flat++] = h.at(src);
        } while (next_index(x, n));
    }
    return LatinHypercube(k, n, std::move(symbols));
}

LatinHypercube conjugate(const LatinHypercube& h, const std::vector<int>& perm) {
    const int k = h.dim();
    const int n = h.order();
    const int d = k + 1;
    if (static_cast<int>(perm.size()) != d) throw std::invalid_argument("conjugate: bad permutation size");
    {
        std::vector<bool> seen(d, false);
        for (int v : perm) {
            if (v < 0 || v >= d || seen[v]) throw std::invalid_argument("conjugate: not a permutation");
            seen[v] = true;
        }
    }
    std::vector<int> symbols(h.size(), -1);
    IndexTuple x(k, 0);
    std::vector<int> w(d), z(d);
    do {
        for (int i = 0; i < k; ++i) w[i] = x[i];
        w[k] = h.at(x);
        for (int i = 0; i < d; ++i) z[i] = w[perm[i]];
        std::size_t flat = 0;
        for (int i = 0; i < k; ++i) flat = flat * n + static_cast<std::size_t>(z[i]);
        symbols[flat] = z[k];
    } while (next_index(x, n));
    return LatinHypercube(k, n, std::move(symbols));
}

namespace {

// Branch-and-bound lexicographic minimization of the symbol array over
// per-axis value permutations and symbol relabeling, for one conjugate.
// `best` is shared across conjugates so later ones prune against earlier.
class CanonicalSearch {
    static constexpr std::int8_t kEq = 0;
    static constexpr std::int8_t kLt = 1;

public:
    CanonicalSearch(int k, int n, CapCounter& cap, std::vector<int>& best, bool& has_best)
        : k_(k), n_(n), total_(static_cast<std::size_t>(cell_count(k, n))),
          cap_(cap), best_(best), has_best_(has_best),
          current_(total_, 0), state_(total_, kEq) {
        coords_.resize(total_);
        IndexTuple x(k_, 0);
        for (std::size_t f = 0; f < total_; ++f) {
            coords_[f] = x;
            next_index(x, n_);
        }
    }

    void run(const LatinHypercube& hc) {
        hc_ = &hc;
        q_.assign(k_, std::vector<int>(n_, -1));
        q_used_.assign(k_, 0);
        rho_.assign(n_, -1);
        rho_used_ = 0;
        dfs(0);
    }

private:
    void dfs(std::size_t pos) {
        cap_.tick();
        if (pos == total_) {
            if (!has_best_ || state_[total_ - 1] == kLt) {
                best_ = current_;
                has_best_ = true;
                std::fill(state_.begin(), state_.end(), kEq);
            }
            return;
        }
        const IndexTuple& y = coords_[pos];
        for (int i = 0; i < k_; ++i) {
            if (q_[i][y[i]] == -1) {
                for (int o = 0; o < n_; ++o) {
                    if (q_used_[i] >> o & 1) continue;
                    q_[i][y[i]] = o;
                    q_used_[i] |= 1u << o;
                    dfs(pos);
                    q_[i][y[i]] = -1;
                    q_used_[i] &= ~(1u << o);
                }
                return;
            }
        }
        std::size_t old_flat = 0;
        for (int i = 0; i < k_; ++i)
            old_flat = old_flat * n_ + static_cast<std::size_t>(q_[i][y[i]]);
        const int s = (*hc_)[old_flat];
        if (rho_[s] != -1) {
            try_value(pos, rho_[s], false, s);
        } else {
            for (int v = 0; v < n_; ++v) {
                if (rho_used_ >> v & 1) continue;
                if (!try_value(pos, v, true, s)) break; // larger v only worse
            }
        }
    }

    // Returns false when the candidate (and all larger ones) are pruned.
    bool try_value(std::size_t pos, int v, bool assign, int s) {
        const std::int8_t prev = (pos == 0) ? kEq : state_[pos - 1];
        if (has_best_ && prev == kEq) {
            if (v > best_[pos]) return false;
            state_[pos] = (v < best_[pos]) ? kLt : kEq;
        } else {
            state_[pos] = kLt;
        }
        current_[pos] = v;
        if (assign) {
            rho_[s] = v;
            rho_used_ |= 1u << v;
        }
        dfs(pos + 1);
        if (assign) {
            rho_[s] = -1;
            rho_used_ &= ~(1u << v);
        }
        return true;
    }

    int k_, n_;
    std::size_t total_;
    CapCounter& cap_;
    std::vector<int>& best_;
    bool& has_best_;
    const LatinHypercube* hc_ = nullptr;
    std::vector<std::vector<int>> q_; // new index -> old index, per axis
    std::vector<unsigned> q_used_;
    std::vector<int> rho_; // old symbol -> new symbol
    unsigned rho_used_ = 0;
    std::vector<int> current_;
    std::vector<std::int8_t> state_; // prefix relation to best: equal / strictly less
    std::vector<IndexTuple> coords_;
};

} // namespace

bool for_each_latin_completion(int dim, int order, const std::vector<int>& partial,
                               const std::function<bool(const std::vector<int>&)>& fn,
                               CapCounter* cap, std::mt19937_64* shuffle_rng) {
    const std::size_t total = cell_count(dim, order);
    if (partial.size() != total)
        throw std::invalid_argument("completion: partial array has wrong size");
    if (order > 32) throw std::invalid_argument("completion: order above desk scale (32)");

    // per axis, a used-symbol mask for each line (keyed by the other coords)
    std::vector<std::size_t> stride(dim);
    {
        std::size_t acc = 1;
        for (int ax = dim - 1; ax >= 0; --ax) {
            stride[ax] = acc;
            acc *= static_cast<std::size_t>(order);
        }
    }
    const std::size_t lines_per_axis = total / static_cast<std::size_t>(order);
    std::vector<std::vector<unsigned>> mask(dim, std::vector<unsigned>(lines_per_axis, 0));
    std::vector<IndexTuple> coords(total);
    {
        IndexTuple x(dim, 0);
        for (std::size_t f = 0; f < total; ++f) {
            coords[f] = x;
            next_index(x, order);
        }
    }
    auto line_key = [&](const IndexTuple& x, int ax) {
        std::size_t key = 0;
        for (int i = 0; i < dim; ++i)
            if (i != ax) key = key * order + static_cast<std::size_t>(x[i]);
        return key;
    };
    std::vector<std::vector<std::size_t>> keys(total, std::vector<std::size_t>(dim));
    std::vector<std::size_t> free_cells;
    std::vector<int> symbols = partial;
    for (std::size_t f = 0; f < total; ++f) {
        for (int ax = 0; ax < dim; ++ax) keys[f][ax] = line_key(coords[f], ax);
        int s = symbols[f];
        if (s == -1) {
            free_cells.push_back(f);
            continue;
        }
        if (s < 0 || s >= order) throw std::invalid_argument("completion: symbol out of range");
        for (int ax = 0; ax < dim; ++ax) {
            if (mask[ax][keys[f][ax]] >> s & 1)
                throw std::invalid_argument("completion: fixed cells already clash");
            mask[ax][keys[f][ax]] |= 1u << s;
        }
    }

    std::vector<int> try_order(order);
    std::iota(try_order.begin(), try_order.end(), 0);
    const unsigned full = (order == 32) ? ~0u : ((1u << order) - 1);

    auto dfs = [&](auto&& self, std::size_t pos) -> bool {
        if (pos == free_cells.size()) return fn(symbols);
        const std::size_t f = free_cells[pos];
        unsigned used = 0;
        for (int ax = 0; ax < dim; ++ax) used |= mask[ax][keys[f][ax]];
        if (used == full) return true; // dead end, keep walking
        std::vector<int> local = try_order;
        if (shuffle_rng) std::shuffle(local.begin(), local.end(), *shuffle_rng);
        for (int s : local) {
            if (used >> s & 1) continue;
            if (cap) cap->tick();
            symbols[f] = s;
            for (int ax = 0; ax < dim; ++ax) mask[ax][keys[f][ax]] |= 1u << s;
            bool keep = self(self, pos + 1);
            for (int ax = 0; ax < dim; ++ax) mask[ax][keys[f][ax]] &= ~(1u << s);
            symbols[f] = -1;
            if (!keep) return false;
        }
        return true;
    };
    return dfs(dfs, 0);
}

bool for_each_latin_hypercube(int dim, int order,
                              const std::function<bool(const LatinHypercube&)>& fn) {
    std::vector<int> blank(cell_count(dim, order), -1);
    return for_each_latin_completion(dim, order, blank, [&](const std::vector<int>& symbols) {
        return fn(LatinHypercube(dim, order, symbols));
    });
}

std::optional<std::vector<int>> canonical_species_form(const LatinHypercube& h) {
    const int k = h.dim();
    const int n = h.order();
    const int d = k + 1;
    std::vector<int> best;
    bool has_best = false;
    CapCounter cap(caps().species_nodes, "species");
    CanonicalSearch search(k, n, cap, best, has_best);
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    try {
        do {
            LatinHypercube hc = conjugate(h, perm);
            search.run(hc);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } catch (const CapExceeded&) {
        return std::nullopt;
    }
    return best;
}

Tristate species_equivalent(const LatinHypercube& h1, const LatinHypercube& h2) {
    if (h1.dim() != h2.dim() || h1.order() != h2.order())
        throw std::invalid_argument("species_equivalent: dim/order mismatch");
    if (h1 == h2) return Tristate::True;
    auto c1 = canonical_species_form(h1);
    if (!c1) return Tristate::Undecided;
    auto c2 = canonical_species_form(h2);
    if (!c2) return Tristate::Undecided;
    return (*c1 == *c2) ? Tristate::True : Tristate::False;
}

} // namespace polystoch
