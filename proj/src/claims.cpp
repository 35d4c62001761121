#include "polystoch/claims.hpp"

#include "polystoch/constructions.hpp"
#include "polystoch/io.hpp"
#include "polystoch/latin.hpp"
#include "polystoch/permanent.hpp"
#include "polystoch/polytope.hpp"
#include "polystoch/tensor.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace polystoch {

namespace {

class Check {
public:
    explicit Check(ClaimResult& out) : out_(out) { out_.pass = true; }

    void require(bool cond, const std::string& line) {
        out_.details.push_back((cond ? "ok: " : "FAILED: ") + line);
        if (!cond) out_.pass = false;
    }

    void note(const std::string& line) { out_.details.push_back(line); }

private:
    ClaimResult& out_;
};

std::string rat(const Rational& q) { return to_string(q); }

// --- independent oracles (deliberately naive, no pruning) ---

// counts pairs (sigma, tau) with L(i, sigma(i)) == tau(i) for all i
long long transversal_pair_oracle(const LatinHypercube& square) {
    const int n = square.order();
    std::vector<int> sigma(n), tau(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    long long count = 0;
    do {
        std::iota(tau.begin(), tau.end(), 0);
        do {
            bool ok = true;
            for (int r = 0; r < n && ok; ++r)
                ok = square.at(std::array{r, sigma[r]}) == tau[r];
            count += ok;
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return count;
}

// full sum over all (d-1)-tuples of permutations
Rational permanent_oracle(const Tensor& a) {
    const int d = a.dim();
    const int n = a.order();
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> base(n);
        std::iota(base.begin(), base.end(), 0);
        do {
            perms.push_back(base);
        } while (std::next_permutation(base.begin(), base.end()));
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(d) - 1, 0);
    Rational total(0);
    IndexTuple idx(d);
    while (true) {
        Rational prod(1);
        for (int i = 0; i < n; ++i) {
            idx[0] = i;
            for (int ax = 1; ax < d; ++ax) idx[ax] = perms[pick[ax - 1]][i];
            prod *= a.at(idx);
            if (prod == 0) break;
        }
        total += prod;
        int t = d - 2;
        while (t >= 0 && ++pick[t] == perms.size()) pick[t--] = 0;
        if (t < 0) break;
    }
    return total;
}

// --- random generators with fixed seeds ---

std::vector<LatinHypercube> all_squares(int n) {
    std::vector<LatinHypercube> out;
    for_each_latin_hypercube(2, n, [&](const LatinHypercube& h) {
        out.push_back(h);
        return true;
    });
    return out;
}

Tensor random_polystochastic(const std::vector<LatinHypercube>& squares, std::mt19937& rng) {
    std::uniform_int_distribution<int> count_dist(1, 4);
    std::uniform_int_distribution<int> weight_dist(1, 9);
    std::uniform_int_distribution<std::size_t> pick(0, squares.size() - 1);
    const int terms = count_dist(rng);
    std::vector<int> weights(terms);
    int total = 0;
    for (auto& w : weights) total += (w = weight_dist(rng));
    ConvexCombination c;
    for (int i = 0; i < terms; ++i)
        c.terms.emplace_back(make_rational(weights[i], total), p_of_h(squares[pick(rng)]));
    return combine(c);
}

Tensor random_lambda2(int n, std::mt19937& rng) {
    std::vector<int> sigma(n), tau(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::iota(tau.begin(), tau.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::shuffle(tau.begin(), tau.end(), rng);
    Tensor q(3, n);
    for (int i = 0; i < n; ++i) q.at(std::array{i, sigma[i], tau[i]}) = 1;
    return q;
}

Tensor random_rational_tensor(int d, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-2, 6);
    std::uniform_int_distribution<int> den(1, 4);
    Tensor t(d, n);
    for (std::size_t f = 0; f < t.size(); ++f) {
        int p = num(rng);
        t[f] = make_rational(p < 0 ? 0 : p, den(rng)); // a few zeros, mostly positive
        if (p == -1) t[f] = make_rational(-1, den(rng));
    }
    return t;
}

Rational uniform_permanent_formula(int d, int n) {
    Integer num = 1;
    for (int i = 0; i < d - 1; ++i) num *= factorial(static_cast<unsigned>(n));
    Integer den = pow_int(Integer(n), static_cast<unsigned long>(n));
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// --- the claims ---

void claim_cyclic_transversal_counts(Check& c) {
    for (int n : {4, 6, 8}) {
        Integer count = count_transversals(cyclic(2, n)).count;
        c.require(count == 0, "cyclic(2," + std::to_string(n) + ") has " + count.get_str() +
                                  " transversals (want 0)");
    }
    const std::map<int, long long> expected{{3, 3}, {5, 15}, {7, 133}};
    for (auto [n, want] : expected) {
        LatinHypercube square = cyclic(2, n);
        long long oracle = transversal_pair_oracle(square);
        Integer count = count_transversals(square).count;
        c.require(oracle == want, "oracle count for n=" + std::to_string(n) + " is " +
                                      std::to_string(oracle) + " (want " + std::to_string(want) + ")");
        c.require(count == oracle, "library count " + count.get_str() + " matches the oracle");
    }
}

void claim_zer34_twelve_lines(Check& c) {
    LatinHypercube base = cyclic(2, 4);
    Tensor pc = p_of_h(base);
    std::set<std::vector<int>> distinct;
    std::vector<LatinHypercube> swaps;
    for (int axis = 0; axis <= 2; ++axis) {
        for (int i = 0; i < 4; ++i) {
            LatinHypercube d = interchange_hyperplanes(base, axis, i, (i + 1) % 4);
            if (distinct.insert(d.symbols()).second) swaps.push_back(d);
        }
    }
    c.require(distinct.size() == 12, "consecutive interchanges give " +
                                         std::to_string(distinct.size()) + " distinct hypercubes (want 12)");
    Rational half = make_rational(1, 2);
    for (const auto& d : swaps) {
        ConvexCombination mix;
        mix.terms.emplace_back(half, pc);
        mix.terms.emplace_back(half, p_of_h(d));
        Rational per = permanent1(combine(mix)).value;
        c.require(per == 0, "midpoint permanent is " + rat(per) + " (want 0)");
        c.require(!mixed_transversal_exists({base, d}).has_value(), "no mixed transversal for the pair");
    }
}

void claim_order4_zero_census(Check& c) {
    long long total = 0, zero = 0;
    for_each_latin_hypercube(2, 4, [&](const LatinHypercube& h) {
        ++total;
        if (count_transversals(h).count == 0) ++zero;
        return true;
    });
    c.require(total == 576, "enumerated " + std::to_string(total) + " order-4 squares (want 576)");
    c.require(zero == 432, std::to_string(zero) + " of them have zero transversals (want 432)");
}

void claim_uniform_permanent_formula(Check& c) {
    const std::vector<std::pair<int, int>> shapes{{3, 3}, {3, 4}, {4, 3}, {3, 6}};
    for (auto [d, n] : shapes) {
        Rational got = permanent1(uniform(d, n)).value;
        Rational want = uniform_permanent_formula(d, n);
        c.require(got == want, "permanent of uniform(" + std::to_string(d) + "," + std::to_string(n) +
                                   ") = " + rat(got) + " (formula " + rat(want) + ")");
    }
    c.require(uniform_permanent_formula(3, 4) == make_rational(9, 4), "(3,4) value is 9/4");
    c.require(uniform_permanent_formula(4, 3) == make_rational(8, 3), "(4,3) value is 8/3");
    c.require(uniform_permanent_formula(3, 6) == make_rational(518400, 46656), "(3,6) value is 518400/46656");
}

void claim_zero_family_suite(Check& c) {
    for (auto [d, n] : std::vector<std::pair<int, int>>{{3, 4}, {3, 6}, {5, 4}}) {
        ZeroFamilySpec spec = ZeroFamilySpec::make(d, n);
        std::vector<LatinHypercube> members = zero_family_sample(spec, 20, 7);
        c.note("family (d=" + std::to_string(d) + ", n=" + std::to_string(n) + ", r=" +
               std::to_string(spec.effective_r()) + "): " + std::to_string(members.size()) +
               " members sampled");
        bool all_zero = true;
        for (const auto& h : members)
            if (permanent1(p_of_h(h)).value != 0) all_zero = false;
        c.require(all_zero, "every sampled member has zero permanent");
        // subsets of size up to 3
        bool no_mixed = true;
        const int m = static_cast<int>(members.size());
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                for (int k = j; k < m; ++k) {
                    if (mixed_transversal_exists({members[i], members[j], members[k]})) no_mixed = false;
                }
        c.require(no_mixed, "no subset of size <= 3 admits a mixed transversal");
    }
}

void claim_delta_lemma_exhaustive(Check& c) {
    for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {2, 5}, {3, 3}, {3, 4}}) {
        long long cubes = 0, transversals = 0;
        const int expected = (n % 2 == 1 || (k + 1) % 2 == 0) ? 0 : n / 2;
        bool all_ok = true;
        for_each_latin_hypercube(k, n, [&](const LatinHypercube& h) {
            ++cubes;
            for (const Diagonal& t : enumerate_transversals(h)) {
                ++transversals;
                if (delta_sum_check(h, t) != expected) all_ok = false;
            }
            return true;
        });
        std::ostringstream os;
        os << "(k=" << k << ", n=" << n << "): " << cubes << " hypercubes, " << transversals
           << " transversals, Delta sum always " << expected;
        c.require(all_ok, os.str());
    }
}

void claim_product_laws(Check& c) {
    std::mt19937 rng(20240811);
    std::map<int, std::vector<LatinHypercube>> squares;
    for (int n : {2, 3, 4}) squares[n] = all_squares(n);
    bool poly_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + trial % 3;
        Tensor a = random_polystochastic(squares[n], rng);
        Tensor b = random_polystochastic(squares[n], rng);
        if (!is_polystochastic(product(a, b), 1)) poly_ok = false;
    }
    c.require(poly_ok, "200 random products of 1-polystochastic pairs stay 1-polystochastic");
    bool lambda_ok = true;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 3;
        Tensor q1 = random_lambda2(n, rng);
        Tensor q2 = random_lambda2(n, rng);
        if (!is_permutation_matrix(product(q1, q2), 3)) lambda_ok = false;
    }
    c.require(lambda_ok, "products of Lambda_2(3,n) pairs land in Lambda_3(4,n)");
}

void claim_a6_certificate(Check& c) {
    const Tensor& a = a6();
    c.require(is_polystochastic(a, 1), "a6 is 1-polystochastic");
    {
        std::vector<Rational> row;
        for (int col = 0; col < 6; ++col) row.push_back(a.at(std::array{1, 0, col}));
        std::vector<Rational> want{Rational(0), make_rational(1, 2), Rational(0), Rational(0),
                                   make_rational(1, 2), Rational(0)};
        c.require(row == want, "layer 2, first row reads (0,1/2,0,0,1/2,0)");
    }
    HullCertificate cert = a6_certificate();
    bool terms_ok = true;
    for (const auto& [w, t] : cert.terms.terms)
        if (!is_permutation_matrix(t, 2)) terms_ok = false;
    c.require(terms_ok, "all 8 terms are 2-permutation matrices");
    Tensor sum = combine(cert.terms);
    Tensor scaled = a;
    scaled *= make_rational(1, 6);
    c.require(sum == scaled, "weighted recombination equals (1/6) a6 bit for bit");
    c.require(verify_certificate(cert).ok, "certificate verifies");
}

void claim_transversal_cover_round_trip(Check& c) {
    auto check_cover = [&](const LatinHypercube& square, const std::string& name) {
        Tensor p = p_of_h(square);
        CoverResult cover = transversal_cover(p);
        if (cover.status != CoverResult::Status::Found) {
            c.require(false, name + ": expected a cover");
            return;
        }
        Tensor sum(3, square.order());
        bool parts_ok = true;
        for (const auto& q : cover.parts) {
            if (!is_permutation_matrix(q, 2)) parts_ok = false;
            sum += q;
        }
        c.require(parts_ok && sum == p,
                  name + ": " + std::to_string(cover.parts.size()) +
                      " disjoint transversal parts recombine to P");
        c.require(cover.mate && are_orthogonal(square, *cover.mate), name + ": mate is orthogonal");
    };
    check_cover(cyclic(2, 3), "cyclic(2,3)");
    for (int n : {3, 4, 5, 7}) check_cover(mols_pair(n).first, "mols_pair(" + std::to_string(n) + ").first");
    CoverResult none = transversal_cover(p_of_h(cyclic(2, 4)));
    c.require(none.status == CoverResult::Status::None, "cyclic(2,4) has no cover");
}

void claim_hull_witness_pipeline(Check& c) {
    HullCertificate cert = hull_witness(5, 3);
    c.note("certificate has " + std::to_string(cert.terms.terms.size()) + " terms");
    c.require(cert.s == 4, "terms live in Lambda_4(5,3)");
    c.require(cert.scale == make_rational(1, 27), "scale is 3^(2-5) = 1/27");
    auto rep = verify_certificate(cert);
    c.require(rep.ok, "certificate verifies exactly" + (rep.ok ? "" : ": " + rep.reason));
    c.require(is_polystochastic(cert.target, 1), "target is 1-polystochastic");
    c.require(!(cert.target == uniform(5, 3)), "target differs from uniform(5,3)");
}

void claim_uniform_extrema_scan(Check& c) {
    {
        ScanResult scan = perturbation_scan(p_of_h(cyclic(2, 4)));
        c.require(scan.baseline == make_rational(9, 4), "baseline at (3,4) is 9/4");
        bool below = true;
        for (std::size_t i = 0; i < scan.values.size(); ++i) {
            c.note("eps=" + rat(scan.epsilons[i]) + ": permanent " + rat(scan.values[i]));
            if (!(scan.values[i] < scan.baseline)) below = false;
        }
        c.require(below, "all scanned values lie strictly below the baseline (odd dimension)");
    }
    {
        ScanResult scan = perturbation_scan(p_of_h(cyclic(3, 3)));
        c.require(scan.baseline == make_rational(8, 3), "baseline at (4,3) is 8/3");
        bool above = true;
        for (std::size_t i = 0; i < scan.values.size(); ++i) {
            c.note("eps=" + rat(scan.epsilons[i]) + ": permanent " + rat(scan.values[i]));
            if (!(scan.values[i] > scan.baseline)) above = false;
        }
        c.require(above, "all scanned values lie strictly above the baseline (even dimension)");
    }
}

void claim_independent_zero_set(Check& c) {
    std::vector<Tensor> family = independent_zero_set(3, 8);
    c.require(family.size() == 4, "independent_zero_set(3,8) returns " +
                                      std::to_string(family.size()) + " matrices (want 4)");
    RankResult rank = rank_independent(family);
    c.require(rank.rank == 4 && rank.independent, "rank is " + std::to_string(rank.rank) + " (want 4)");
    ConvexCombination mix;
    Rational fifth = make_rational(1, 5);
    for (const auto& t : family) mix.terms.emplace_back(fifth, t);
    mix.terms.emplace_back(fifth, p_of_h(cyclic(2, 8)));
    Rational per = permanent1(combine(mix)).value;
    c.require(per == 0, "uniform average with the cyclic matrix has permanent " + rat(per) + " (want 0)");
}

void claim_permanent_oracle_agreement(Check& c) {
    std::mt19937 rng(424242);
    bool ok3 = true;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + trial % 3;
        Tensor t = random_rational_tensor(3, n, rng);
        if (permanent1(t).value != permanent_oracle(t)) ok3 = false;
    }
    c.require(ok3, "200 random d=3 tensors (n <= 4) match the naive oracle");
    bool ok4 = true;
    for (int trial = 0; trial < 50; ++trial) {
        Tensor t = random_rational_tensor(4, 3, rng);
        if (permanent1(t).value != permanent_oracle(t)) ok4 = false;
    }
    c.require(ok4, "50 random d=4, n=3 tensors match the naive oracle");
}

using ClaimFn = void (*)(Check&);

struct ClaimEntry {
    ClaimInfo info;
    ClaimFn fn;
};

const std::vector<ClaimEntry>& registry() {
    static const std::vector<ClaimEntry> entries{
        {{"cyclic-transversal-counts",
          "cyclic squares: zero transversals for even n, oracle counts 3/15/133 for n=3,5,7"},
         claim_cyclic_transversal_counts},
        {{"zer34-twelve-lines",
          "12 distinct consecutive interchanges of cyclic(2,4); midpoints stay in the zero set"},
         claim_zer34_twelve_lines},
        {{"order4-zero-census", "432 of the 576 order-4 squares have zero transversals"},
         claim_order4_zero_census},
        {{"uniform-permanent-formula", "permanent of uniform(d,n) equals (n!)^(d-1)/n^n"},
         claim_uniform_permanent_formula},
        {{"zero-family-suite", "sampled zero-family members have zero permanent and no mixed transversal"},
         claim_zero_family_suite},
        {{"delta-lemma-exhaustive", "Delta sums over all transversals follow the parity dichotomy"},
         claim_delta_lemma_exhaustive},
        {{"product-laws", "products preserve polystochasticity; Lambda_2 x Lambda_2 lands in Lambda_3"},
         claim_product_laws},
        {{"a6-certificate", "the order-6 witness matches its layer display and 8-term certificate"},
         claim_a6_certificate},
        {{"transversal-cover-round-trip", "covers exist and recombine for orthogonal squares; none for cyclic(2,4)"},
         claim_transversal_cover_round_trip},
        {{"hull-witness-pipeline", "hull_witness(5,3) verifies with Lambda_4 terms and a polystochastic target"},
         claim_hull_witness_pipeline},
        {{"uniform-extrema-scan", "perturbation values sit below uniform for d=3 and above for d=4"},
         claim_uniform_extrema_scan},
        {{"independent-zero-set", "4 independent order-8 matrices whose average with cyclic has zero permanent"},
         claim_independent_zero_set},
        {{"permanent-oracle-agreement", "permanent1 agrees with the naive permutation-tuple oracle"},
         claim_permanent_oracle_agreement},
    };
    return entries;
}

} // namespace

const std::vector<ClaimInfo>& claim_list() {
    static const std::vector<ClaimInfo> infos = [] {
        std::vector<ClaimInfo> out;
        for (const auto& e : registry()) out.push_back(e.info);
        return out;
    }();
    return infos;
}

ClaimResult run_claim(const std::string& id) {
    for (const auto& entry : registry()) {
        if (entry.info.id != id) continue;
        ClaimResult out;
        out.id = id;
        Check check(out);
        auto start = std::chrono::steady_clock::now();
        try {
            entry.fn(check);
        } catch (const std::exception& e) {
            out.pass = false;
            out.details.push_back(std::string("exception: ") + e.what());
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }
    throw std::invalid_argument("unknown claim id: " + id);
}

} // namespace polystoch
