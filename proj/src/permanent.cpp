#include "polystoch/permanent.hpp"

#include "polystoch/caps.hpp"

#include <algorithm>
#include <thread>

namespace polystoch {

namespace {

template <typename Scalar>
struct RowCell {
    std::vector<int> rest; // coordinates on axes 1..d-1
    Scalar value;
    bool positive;
};

template <typename Scalar>
struct SupportRows {
    int d = 0;
    int n = 0;
    std::vector<std::vector<RowCell<Scalar>>> rows; // by first coordinate, lex order
};

template <typename Scalar>
SupportRows<Scalar> build_rows(const Tensor& a) {
    SupportRows<Scalar> s;
    s.d = a.dim();
    s.n = a.order();
    s.rows.resize(s.n);
    for (std::size_t f = 0; f < a.size(); ++f) {
        const Rational& v = a[f];
        if (v == 0) continue;
        IndexTuple idx = a.unflatten(f);
        RowCell<Scalar> cell;
        cell.rest.assign(idx.begin() + 1, idx.end());
        if constexpr (std::is_same_v<Scalar, Integer>) cell.value = v.get_num();
        else cell.value = v;
        cell.positive = v > 0;
        s.rows[idx[0]].push_back(std::move(cell));
    }
    return s;
}

template <typename Scalar>
class Perm1Enum {
public:
    explicit Perm1Enum(const SupportRows<Scalar>& rows)
        : s_(rows), used_(rows.d, std::vector<char>(rows.n, 0)), partial_(rows.n + 1),
          chosen_(rows.n, nullptr) {
        partial_[0] = Scalar(1);
    }

    // Assumes masks/partials already reflect rows < start.
    void run(int start) { dfs(start); }

    bool place(int row, const RowCell<Scalar>& c) {
        for (std::size_t ax = 0; ax < c.rest.size(); ++ax)
            if (used_[ax + 1][c.rest[ax]]) return false;
        for (std::size_t ax = 0; ax < c.rest.size(); ++ax) used_[ax + 1][c.rest[ax]] = 1;
        partial_[row + 1] = partial_[row] * c.value;
        neg_ += !c.positive;
        chosen_[row] = &c;
        return true;
    }

    void unplace(const RowCell<Scalar>& c) {
        neg_ -= !c.positive;
        for (std::size_t ax = 0; ax < c.rest.size(); ++ax) used_[ax + 1][c.rest[ax]] = 0;
    }

    Scalar total{};
    Integer positive_count{0};
    std::optional<Diagonal> witness;

private:
    void dfs(int row) {
        if (row == s_.n) {
            total += partial_[s_.n];
            if (neg_ == 0) {
                ++positive_count;
                if (!witness) record_witness();
            }
            return;
        }
        for (const auto& c : s_.rows[row]) {
            if (!place(row, c)) continue;
            dfs(row + 1);
            unplace(c);
        }
    }

    void record_witness() {
        Diagonal diag;
        diag.s = 1;
        diag.cells.reserve(s_.n);
        for (int i = 0; i < s_.n; ++i) {
            IndexTuple cell(s_.d);
            cell[0] = i;
            for (int ax = 1; ax < s_.d; ++ax) cell[ax] = chosen_[i]->rest[ax - 1];
            diag.cells.push_back(std::move(cell));
        }
        witness = std::move(diag);
    }

    const SupportRows<Scalar>& s_;
    std::vector<std::vector<char>> used_;
    std::vector<Scalar> partial_;
    std::vector<const RowCell<Scalar>*> chosen_;
    int neg_ = 0;
};

template <typename Scalar>
PermanentResult permanent1_impl(const Tensor& a, int threads) {
    SupportRows<Scalar> rows = build_rows<Scalar>(a);
    const int n = rows.n;
    const auto& first = rows.rows[0];
    const int branch_count = static_cast<int>(first.size());
    threads = std::clamp(threads, 1, branch_count == 0 ? 1 : branch_count);

    PermanentResult out;
    Scalar total{};
    Integer count{0};
    std::optional<Diagonal> witness;

    if (threads <= 1) {
        Perm1Enum<Scalar> e(rows);
        e.run(0);
        total = std::move(e.total);
        count = std::move(e.positive_count);
        witness = std::move(e.witness);
    } else {
        // Split on the choice made for the first row; partial sums are exact,
        // so the fixed merge order reproduces the sequential result bit for bit.
        struct Branch {
            Scalar total{};
            Integer count{0};
            std::optional<Diagonal> witness;
        };
        std::vector<Branch> results(branch_count);
        auto worker = [&](int t) {
            for (int b = t; b < branch_count; b += threads) {
                Perm1Enum<Scalar> e(rows);
                e.place(0, first[b]);
                e.run(1);
                results[b] = {std::move(e.total), std::move(e.positive_count),
                              std::move(e.witness)};
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
        for (auto& r : results) {
            total += r.total;
            count += r.count;
            if (!witness && r.witness) witness = std::move(r.witness);
        }
    }

    if constexpr (std::is_same_v<Scalar, Integer>) out.value = Rational(total);
    else out.value = std::move(total);
    out.value.canonicalize();
    out.diagonal_count = std::move(count);
    out.witness = std::move(witness);
    return out;
}

bool all_integral(const Tensor& a) {
    for (std::size_t f = 0; f < a.size(); ++f)
        if (!is_integral(a[f])) return false;
    return true;
}

} // namespace

PermanentResult permanent1(const Tensor& a, int threads) {
    if (a.dim() < 2) throw std::invalid_argument("permanent1: dim must be >= 2");
    if (all_integral(a)) return permanent1_impl<Integer>(a, threads);
    return permanent1_impl<Rational>(a, threads);
}

namespace {

// Walks positive diagonals of the support only; fn(cells) -> keep going?
template <typename Fn>
bool walk_positive_diagonals(const Tensor& a, Fn&& fn) {
    const int d = a.dim();
    const int n = a.order();
    std::vector<std::vector<std::vector<int>>> rows(n); // rest coords per row
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (a[f] <= 0) continue;
        IndexTuple idx = a.unflatten(f);
        rows[idx[0]].emplace_back(idx.begin() + 1, idx.end());
    }
    std::vector<std::vector<char>> used(d, std::vector<char>(n, 0));
    std::vector<const std::vector<int>*> chosen(n, nullptr);
    auto dfs = [&](auto&& self, int row) -> bool {
        if (row == n) {
            std::vector<IndexTuple> cells;
            cells.reserve(n);
            for (int i = 0; i < n; ++i) {
                IndexTuple cell(d);
                cell[0] = i;
                for (int ax = 1; ax < d; ++ax) cell[ax] = (*chosen[i])[ax - 1];
                cells.push_back(std::move(cell));
            }
            return fn(std::move(cells));
        }
        for (const auto& rest : rows[row]) {
            bool ok = true;
            for (int ax = 1; ax < d; ++ax)
                if (used[ax][rest[ax - 1]]) { ok = false; break; }
            if (!ok) continue;
            for (int ax = 1; ax < d; ++ax) used[ax][rest[ax - 1]] = 1;
            chosen[row] = &rest;
            bool keep = self(self, row + 1);
            for (int ax = 1; ax < d; ++ax) used[ax][rest[ax - 1]] = 0;
            if (!keep) return false;
        }
        return true;
    };
    return dfs(dfs, 0);
}

void require_nonnegative(const Tensor& a, const char* who) {
    for (std::size_t f = 0; f < a.size(); ++f)
        if (a[f] < 0)
            throw std::invalid_argument(std::string(who) + ": negative entry at flat index " +
                                        std::to_string(f));
}

} // namespace

bool has_positive_diagonal(const Tensor& a) {
    if (a.dim() < 2) throw std::invalid_argument("has_positive_diagonal: dim must be >= 2");
    require_nonnegative(a, "has_positive_diagonal");
    bool found = false;
    walk_positive_diagonals(a, [&](std::vector<IndexTuple>&&) {
        found = true;
        return false;
    });
    return found;
}

std::optional<Diagonal> find_positive_diagonal(const Tensor& a) {
    if (a.dim() < 2) throw std::invalid_argument("find_positive_diagonal: dim must be >= 2");
    require_nonnegative(a, "find_positive_diagonal");
    std::optional<Diagonal> out;
    walk_positive_diagonals(a, [&](std::vector<IndexTuple>&& cells) {
        out = Diagonal{1, std::move(cells)};
        return false;
    });
    return out;
}

std::vector<Diagonal> enumerate_transversals(const LatinHypercube& h) {
    Tensor p = p_of_h(h);
    std::vector<Diagonal> all;
    walk_positive_diagonals(p, [&](std::vector<IndexTuple>&& cells) {
        all.push_back(Diagonal{1, std::move(cells)});
        return true;
    });
    return all;
}

TransversalCount count_transversals(const LatinHypercube& h, bool with_list) {
    TransversalCount out;
    if (with_list) {
        auto list = enumerate_transversals(h);
        out.count = Integer(static_cast<unsigned long>(list.size()));
        out.list = std::move(list);
        return out;
    }
    PermanentResult res = permanent1(p_of_h(h));
    out.count = res.value.get_num(); // 0/1 tensor, so the value is integral
    return out;
}

std::optional<Diagonal> mixed_transversal_exists(const std::vector<LatinHypercube>& hs) {
    if (hs.empty()) return std::nullopt;
    const int k = hs.front().dim();
    const int n = hs.front().order();
    for (const auto& h : hs)
        if (h.dim() != k || h.order() != n)
            throw std::invalid_argument("mixed_transversal: dim/order mismatch");
    Tensor support(k + 1, n);
    IndexTuple x(k, 0);
    IndexTuple full(k + 1, 0);
    for (const auto& h : hs) {
        std::fill(x.begin(), x.end(), 0);
        do {
            for (int i = 0; i < k; ++i) full[i] = x[i];
            full[k] = h.at(x);
            support.at(full) = 1;
        } while (next_index(x, n));
    }
    return find_positive_diagonal(support);
}

int delta_sum_check(const LatinHypercube& h, const Diagonal& t) {
    const int k = h.dim();
    const int n = h.order();
    const int d = k + 1;
    if (t.s != 1) throw std::invalid_argument("delta_sum_check: need a 1-diagonal");
    if (static_cast<int>(t.cells.size()) != n)
        throw std::invalid_argument("delta_sum_check: transversal must have n cells");
    std::vector<std::vector<char>> used(d, std::vector<char>(n, 0));
    long long sum = 0;
    for (const auto& cell : t.cells) {
        if (static_cast<int>(cell.size()) != d)
            throw std::invalid_argument("delta_sum_check: cell length must be dim+1");
        int symbol = cell[d - 1];
        if (h.at(std::span<const int>(cell.data(), k)) != symbol)
            throw std::invalid_argument("delta_sum_check: cell does not belong to the hypercube");
        for (int ax = 0; ax < d; ++ax) {
            if (used[ax][cell[ax]])
                throw std::invalid_argument("delta_sum_check: two cells share a coordinate");
            used[ax][cell[ax]] = 1;
        }
        long long delta_val = symbol;
        for (int ax = 0; ax < k; ++ax) delta_val -= cell[ax];
        sum += delta_val;
    }
    int residue = static_cast<int>(((sum % n) + n) % n);
    int expected = (n % 2 == 1 || d % 2 == 0) ? 0 : n / 2;
    if (residue != expected)
        throw std::logic_error("delta_sum_check: Delta sum violates the parity dichotomy");
    return residue;
}

namespace {

struct AxisSubset {
    std::vector<int> axes;
    std::vector<char> used; // projections already taken, indexed by packed value
};

} // namespace

PermanentResult permanent_s(const Tensor& a, int s) {
    const int d = a.dim();
    const int n = a.order();
    if (d < 2) throw std::invalid_argument("permanent_s: dim must be >= 2");
    if (s < 1 || s > d - 1) throw std::invalid_argument("permanent_s: s must be in [1, dim-1]");

    std::size_t slot_count = 1;
    for (int i = 0; i < s; ++i) slot_count *= static_cast<std::size_t>(n);

    // every s-subset of axes must see pairwise-distinct projections
    std::vector<AxisSubset> subsets;
    {
        std::vector<int> pick(s);
        for (int i = 0; i < s; ++i) pick[i] = i;
        while (true) {
            subsets.push_back({pick, std::vector<char>(slot_count, 0)});
            int i = s - 1;
            while (i >= 0 && pick[i] == d - s + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
        }
    }

    struct SlotCell {
        IndexTuple coords;
        Rational value;
        bool positive;
        std::vector<std::size_t> proj; // packed projection per subset
    };
    std::vector<std::vector<SlotCell>> slots(slot_count);
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (a[f] == 0) continue;
        IndexTuple idx = a.unflatten(f);
        SlotCell cell;
        cell.coords = idx;
        cell.value = a[f];
        cell.positive = a[f] > 0;
        cell.proj.reserve(subsets.size());
        for (const auto& sub : subsets) {
            std::size_t p = 0;
            for (int ax : sub.axes) p = p * n + static_cast<std::size_t>(idx[ax]);
            cell.proj.push_back(p);
        }
        slots[cell.proj[0]].push_back(std::move(cell)); // subset 0 is axes {0..s-1}
    }

    CapCounter cap(caps().permanent_s_nodes, "permanent_s");
    Rational total(0);
    Integer count(0);
    std::optional<Diagonal> witness;
    std::vector<Rational> partial(slot_count + 1);
    partial[0] = 1;
    std::vector<const SlotCell*> chosen(slot_count, nullptr);
    int neg = 0;

    auto dfs = [&](auto&& self, std::size_t slot) -> void {
        if (slot == slot_count) {
            total += partial[slot_count];
            if (neg == 0) {
                ++count;
                if (!witness) {
                    Diagonal diag;
                    diag.s = s;
                    for (auto* c : chosen) diag.cells.push_back(c->coords);
                    witness = std::move(diag);
                }
            }
            return;
        }
        for (const auto& cell : slots[slot]) {
            cap.tick();
            bool ok = true;
            for (std::size_t si = 1; si < subsets.size(); ++si)
                if (subsets[si].used[cell.proj[si]]) { ok = false; break; }
            if (!ok) continue;
            for (std::size_t si = 1; si < subsets.size(); ++si)
                subsets[si].used[cell.proj[si]] = 1;
            partial[slot + 1] = partial[slot] * cell.value;
            neg += !cell.positive;
            chosen[slot] = &cell;
            self(self, slot + 1);
            neg -= !cell.positive;
            for (std::size_t si = 1; si < subsets.size(); ++si)
                subsets[si].used[cell.proj[si]] = 0;
        }
    };
    dfs(dfs, 0);

    PermanentResult out;
    out.value = std::move(total);
    out.diagonal_count = std::move(count);
    out.witness = std::move(witness);
    return out;
}

} // namespace polystoch
