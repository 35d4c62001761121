#include "polystoch/polytope.hpp"

#include "polystoch/caps.hpp"

#include <algorithm>
#include <numeric>

namespace polystoch {

namespace {

// Row-reduces m in place; returns the pivot column of each pivot row.
std::vector<int> eliminate(std::vector<std::vector<Rational>>& m) {
    std::vector<int> pivot_cols;
    if (m.empty()) return pivot_cols;
    const int cols = static_cast<int>(m.front().size());
    int row = 0;
    for (int col = 0; col < cols && row < static_cast<int>(m.size()); ++col) {
        int pr = -1;
        for (int r = row; r < static_cast<int>(m.size()); ++r)
            if (m[r][col] != 0) { pr = r; break; }
        if (pr < 0) continue;
        std::swap(m[row], m[pr]);
        Rational inv = m[row][col];
        for (int c = col; c < cols; ++c) m[row][c] /= inv;
        for (int r = 0; r < static_cast<int>(m.size()); ++r) {
            if (r == row || m[r][col] == 0) continue;
            Rational f = m[r][col];
            for (int c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

} // namespace

VertexReport is_vertex(const Tensor& a) {
    auto rep = check_polystochastic(a, 1);
    if (!rep.ok) throw std::invalid_argument("is_vertex: input is not 1-polystochastic: " + rep.reason);

    const int d = a.dim();
    const int n = a.order();
    std::vector<std::size_t> support;
    for (std::size_t f = 0; f < a.size(); ++f)
        if (a[f] != 0) support.push_back(f);
    std::vector<int> col_of(a.size(), -1);
    for (std::size_t c = 0; c < support.size(); ++c) col_of[support[c]] = static_cast<int>(c);

    // one homogeneous constraint per line: entries on the support sum to 0
    std::vector<std::vector<Rational>> m;
    for_each_plane(d, n, 1, [&](const PlaneSpec& p) {
        std::vector<Rational> row(support.size(), Rational(0));
        IndexTuple idx(d);
        int free_axis = -1;
        for (int ax = 0; ax < d; ++ax) {
            if (p.is_free(ax)) free_axis = ax;
            else idx[ax] = p.fixed[ax];
        }
        for (int v = 0; v < n; ++v) {
            idx[free_axis] = v;
            int c = col_of[a.flat_index(idx)];
            if (c >= 0) row[c] = 1;
        }
        m.push_back(std::move(row));
    });

    std::vector<int> pivots = eliminate(m);
    const int rank = static_cast<int>(pivots.size());
    const int freedom = static_cast<int>(support.size()) - rank;

    VertexReport out;
    out.freedom_dim = freedom;
    out.is_vertex = freedom == 0;
    if (freedom > 0) {
        // nullspace vector: first free column set to 1, pivots back-solved
        std::vector<char> is_pivot(support.size(), 0);
        for (int c : pivots) is_pivot[c] = 1;
        int free_col = 0;
        while (is_pivot[free_col]) ++free_col;
        std::vector<Rational> x(support.size(), Rational(0));
        x[free_col] = 1;
        for (int r = 0; r < rank; ++r) x[pivots[r]] = -m[r][free_col];
        Tensor dir(d, n);
        for (std::size_t c = 0; c < support.size(); ++c) dir[support[c]] = x[c];
        out.witness_direction = std::move(dir);
    }
    return out;
}

RankResult rank_independent(const std::vector<Tensor>& ms) {
    RankResult out;
    if (ms.empty()) {
        out.independent = true;
        return out;
    }
    const int d = ms.front().dim();
    const int n = ms.front().order();
    for (const auto& t : ms)
        if (t.dim() != d || t.order() != n)
            throw std::invalid_argument("rank_independent: shape mismatch");
    std::vector<std::vector<Rational>> m;
    m.reserve(ms.size());
    for (const auto& t : ms) m.push_back(t.entries());
    out.rank = static_cast<int>(eliminate(m).size());
    out.independent = out.rank == static_cast<int>(ms.size());
    return out;
}

PredicateReport verify_certificate(const HullCertificate& cert) {
    if (cert.scale <= 0) return {false, "scale must be positive"};
    for (std::size_t i = 0; i < cert.terms.terms.size(); ++i) {
        auto rep = check_permutation_matrix(cert.terms.terms[i].second, cert.s);
        if (!rep.ok)
            return {false, "term " + std::to_string(i) + " is not in Lambda_" +
                               std::to_string(cert.s) + ": " + rep.reason};
    }
    Tensor sum = combine(cert.terms); // validates weights
    Tensor scaled = cert.target;
    scaled *= cert.scale;
    if (!(sum == scaled))
        return {false, "combination does not equal scale * target"};
    return {true, {}};
}

namespace {

// Kuhn augmenting-path matching restricted to the positive entries.
bool augment(const std::vector<std::vector<int>>& adj, int row, std::vector<int>& match_col,
             std::vector<char>& seen) {
    for (int col : adj[row]) {
        if (seen[col]) continue;
        seen[col] = 1;
        if (match_col[col] < 0 || augment(adj, match_col[col], match_col, seen)) {
            match_col[col] = row;
            return true;
        }
    }
    return false;
}

} // namespace

HullCertificate birkhoff_decompose(const Tensor& a) {
    if (a.dim() != 2) throw std::invalid_argument("birkhoff: input must be 2-dimensional");
    auto rep = check_polystochastic(a, 1);
    if (!rep.ok) throw std::invalid_argument("birkhoff: input is not doubly stochastic: " + rep.reason);

    const int n = a.order();
    HullCertificate cert;
    cert.target = a;
    cert.s = 1;
    cert.scale = 1;

    Tensor rem = a;
    auto entry = [&](int r, int c) -> Rational& { return rem[static_cast<std::size_t>(r) * n + c]; };
    while (true) {
        bool all_zero = true;
        for (std::size_t f = 0; f < rem.size(); ++f)
            if (rem[f] != 0) { all_zero = false; break; }
        if (all_zero) break;

        std::vector<std::vector<int>> adj(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (entry(r, c) > 0) adj[r].push_back(c);
        std::vector<int> match_col(n, -1);
        for (int r = 0; r < n; ++r) {
            std::vector<char> seen(n, 0);
            if (!augment(adj, r, match_col, seen))
                throw std::logic_error("birkhoff: no perfect matching on a doubly stochastic support");
        }
        std::vector<int> col_of_row(n, -1);
        for (int c = 0; c < n; ++c) col_of_row[match_col[c]] = c;

        Rational w = entry(0, col_of_row[0]);
        for (int r = 1; r < n; ++r) w = std::min(w, entry(r, col_of_row[r]));

        Tensor perm(2, n);
        for (int r = 0; r < n; ++r) perm[static_cast<std::size_t>(r) * n + col_of_row[r]] = 1;
        for (int r = 0; r < n; ++r) entry(r, col_of_row[r]) -= w;
        cert.terms.terms.emplace_back(w, std::move(perm));
    }
    return cert;
}

CoverResult transversal_cover(const Tensor& p) {
    if (p.dim() != 3) throw std::invalid_argument("transversal_cover: input must be 3-dimensional");
    auto rep = check_permutation_matrix(p, 1);
    if (!rep.ok)
        throw std::invalid_argument("transversal_cover: input is not a 1-permutation matrix: " + rep.reason);

    const int n = p.order();
    LatinHypercube square = h_of_p(p);
    std::vector<Diagonal> transversals = enumerate_transversals(square);
    const int tcount = static_cast<int>(transversals.size());

    CoverResult out;
    if (tcount == 0) {
        out.status = CoverResult::Status::None;
        return out;
    }

    // exact cover of the n^2 cells by disjoint transversals
    const int cell_total = n * n;
    std::vector<std::vector<int>> cells_of(tcount); // packed (row*n+col) per transversal
    std::vector<std::vector<int>> cands_of(cell_total);
    for (int t = 0; t < tcount; ++t) {
        for (const auto& cell : transversals[t].cells) {
            int packed = cell[0] * n + cell[1];
            cells_of[t].push_back(packed);
            cands_of[packed].push_back(t);
        }
    }

    std::vector<char> active(tcount, 1);
    std::vector<char> covered(cell_total, 0);
    std::vector<int> chosen;
    int covered_count = 0;
    CapCounter cap(caps().cover_nodes, "transversal_cover");

    auto dfs = [&](auto&& self) -> bool {
        cap.tick();
        if (covered_count == cell_total) return true;
        // deterministic: fewest active candidates, ties by cell index
        int best_cell = -1;
        int best_count = tcount + 1;
        for (int cell = 0; cell < cell_total; ++cell) {
            if (covered[cell]) continue;
            int cnt = 0;
            for (int t : cands_of[cell]) cnt += active[t];
            if (cnt < best_count) {
                best_count = cnt;
                best_cell = cell;
                if (cnt == 0) break;
            }
        }
        if (best_count == 0) return false;
        for (int t : cands_of[best_cell]) {
            if (!active[t]) continue;
            std::vector<int> deactivated;
            for (int cell : cells_of[t]) {
                covered[cell] = 1;
                for (int other : cands_of[cell]) {
                    if (active[other]) {
                        active[other] = 0;
                        deactivated.push_back(other);
                    }
                }
            }
            covered_count += n;
            chosen.push_back(t);
            if (self(self)) return true;
            chosen.pop_back();
            covered_count -= n;
            for (int cell : cells_of[t]) covered[cell] = 0;
            for (int other : deactivated) active[other] = 1;
        }
        return false;
    };

    bool found = false;
    try {
        found = dfs(dfs);
    } catch (const CapExceeded&) {
        out.status = CoverResult::Status::Undecided;
        return out;
    }
    if (!found) {
        out.status = CoverResult::Status::None;
        return out;
    }

    out.status = CoverResult::Status::Found;
    std::vector<int> mate_symbols(cell_total, -1);
    for (std::size_t k = 0; k < chosen.size(); ++k) {
        const Diagonal& diag = transversals[chosen[k]];
        Tensor q(3, n);
        for (const auto& cell : diag.cells) {
            q.at(cell) = 1;
            mate_symbols[cell[0] * n + cell[1]] = static_cast<int>(k);
        }
        out.parts.push_back(std::move(q));
    }
    out.mate = LatinHypercube(2, n, std::move(mate_symbols));
    return out;
}

} // namespace polystoch
