#include "polystoch/constructions.hpp"

#include "polystoch/caps.hpp"
#include "polystoch/permanent.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

namespace polystoch {

int max_window_length(int n) {
    int r = 1;
    while (static_cast<long long>(r + 1) * r < n) ++r;
    return r;
}

ZeroFamilySpec ZeroFamilySpec::make(int d, int n) {
    ZeroFamilySpec spec;
    spec.d = d;
    spec.n = n;
    spec.r = max_window_length(n);
    spec.window_start = n - spec.r;
    spec.axis = 0;
    spec.validate();
    return spec;
}

int ZeroFamilySpec::effective_r() const { return r == 0 ? max_window_length(n) : r; }

int ZeroFamilySpec::effective_window_start() const {
    return window_start == -1 ? n - effective_r() : window_start;
}

void ZeroFamilySpec::validate() const {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("zero_family: dimension must be odd and >= 3");
    if (n < 2 || n % 2 == 1) throw std::invalid_argument("zero_family: order must be even");
    const int rr = effective_r();
    if (rr < 1 || static_cast<long long>(rr) * (rr - 1) >= n)
        throw std::invalid_argument("zero_family: need r(r-1) < n");
    if (axis < 0 || axis > d - 2) throw std::invalid_argument("zero_family: axis out of range");
    const int w = effective_window_start();
    if (w < 0 || w >= n) throw std::invalid_argument("zero_family: window start out of range");
}

namespace {

std::vector<LatinHypercube> zero_family_walk(const ZeroFamilySpec& spec, std::size_t limit,
                                             std::mt19937_64* rng) {
    spec.validate();
    const int k = spec.d - 1;
    const int n = spec.n;
    const int r = spec.effective_r();
    const int w = spec.effective_window_start();

    std::vector<char> in_window(n, 0);
    for (int t = 0; t < r; ++t) in_window[(w + t) % n] = 1;

    LatinHypercube base = cyclic(k, n);
    std::vector<int> partial = base.symbols();
    for (std::size_t f = 0; f < partial.size(); ++f) {
        if (in_window[base.unflatten(f)[spec.axis]]) partial[f] = -1;
    }

    CapCounter cap(caps().enumeration_nodes, "zero_family");
    std::vector<LatinHypercube> out;
    for_each_latin_completion(k, n, partial,
                              [&](const std::vector<int>& symbols) {
                                  out.emplace_back(k, n, symbols);
                                  return out.size() < limit;
                              },
                              &cap, rng);
    return out;
}

} // namespace

std::vector<LatinHypercube> zero_family(const ZeroFamilySpec& spec) {
    return zero_family_walk(spec, std::numeric_limits<std::size_t>::max(), nullptr);
}

std::vector<LatinHypercube> zero_family_sample(const ZeroFamilySpec& spec, int count,
                                               unsigned seed) {
    if (count < 1) throw std::invalid_argument("zero_family_sample: count must be >= 1");
    std::mt19937_64 rng(seed);
    return zero_family_walk(spec, static_cast<std::size_t>(count), &rng);
}

LatinHypercube lab_square(int n, int a, int b) {
    if (n < 4 || n % 2 == 1) throw std::invalid_argument("lab_square: order must be even and >= 4");
    if (a < 1 || 2 * a >= n) throw std::invalid_argument("lab_square: a out of range");
    if (b < 1 || b > n / 2) throw std::invalid_argument("lab_square: b out of range");
    LatinHypercube c = cyclic(2, n);
    // half-length cycle through column 2b-2 between rows 2a-2 and 2a,
    // then the intercalate it creates one row up
    LatinHypercube once = switch_row_cycle(c, 2 * a - 2, 2 * a, 2 * b - 2);
    return switch_row_cycle(once, 2 * a - 2, 2 * a - 1, 2 * b - 2);
}

std::vector<Tensor> independent_zero_set(int d, int n) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("independent_zero_set: dimension must be odd and >= 3");
    if (n < 4 || n % 2 == 1)
        throw std::invalid_argument("independent_zero_set: order must be even and >= 4");
    std::vector<Tensor> out;
    if (n == 4 || n == 6) {
        // single interchange of the last two hyperplanes
        LatinHypercube swapped = interchange_hyperplanes(cyclic(2, n), 0, n - 2, n - 1);
        out.push_back(p_of_h(lift(swapped, d - 1)));
        return out;
    }
    const int r = max_window_length(n);
    for (int a = 1; 2 * a <= r - 1; ++a)
        for (int b = 1; b <= n / 2; ++b)
            out.push_back(p_of_h(lift(lab_square(n, a, b), d - 1)));
    return out;
}

namespace {

// layer display of the order-6 witness; spaces separate rows within a layer,
// 'h' marks 1/2; the layer index is the first coordinate
constexpr const char* kA6Layers =
    "100000 010000 001000 000100 000010 000001|"
    "0h00h0 100000 000100 000001 001000 0h00h0|"
    "001000 000001 100000 000010 010000 000100|"
    "000100 000010 010000 100000 000001 001000|"
    "0h00h0 000100 000001 001000 100000 0h00h0|"
    "000001 001000 000010 010000 000100 100000";

constexpr std::uint64_t kA6Checksum = 0x44c9b5f658bbf68dull;

// the eight certificate terms: (layer -> (row, col)) support, 0-based,
// first four with weight 1/6, last four with weight 1/12
constexpr int kA6Terms[8][6][2] = {
    {{0, 0}, {4, 2}, {5, 3}, {1, 4}, {2, 5}, {3, 1}},
    {{4, 4}, {3, 5}, {0, 2}, {2, 1}, {1, 3}, {5, 0}},
    {{5, 5}, {1, 0}, {4, 1}, {0, 3}, {3, 2}, {2, 4}},
    {{1, 1}, {2, 3}, {3, 4}, {5, 2}, {4, 0}, {0, 5}},
    {{2, 2}, {0, 1}, {1, 5}, {3, 0}, {5, 4}, {4, 3}},
    {{2, 2}, {0, 4}, {1, 5}, {3, 0}, {5, 1}, {4, 3}},
    {{3, 3}, {5, 4}, {2, 0}, {4, 5}, {0, 1}, {1, 2}},
    {{3, 3}, {5, 1}, {2, 0}, {4, 5}, {0, 4}, {1, 2}},
};

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

Tensor parse_a6_layers() {
    Tensor t(3, 6);
    int layer = 0, row = 0, col = 0;
    for (const char* p = kA6Layers; *p; ++p) {
        switch (*p) {
        case '|': ++layer; row = 0; col = 0; break;
        case ' ': ++row; col = 0; break;
        default: {
            Rational v = (*p == 'h') ? make_rational(1, 2) : make_rational(*p - '0');
            t.at(std::array{layer, row, col}) = v;
            ++col;
        }
        }
    }
    return t;
}

} // namespace

const Tensor& a6() {
    static const Tensor t = [] {
        if (fnv1a(kA6Layers) != kA6Checksum)
            throw std::logic_error("a6: transcription checksum mismatch");
        return parse_a6_layers();
    }();
    return t;
}

HullCertificate a6_certificate() {
    HullCertificate cert;
    cert.target = a6();
    cert.s = 2;
    cert.scale = make_rational(1, 6);
    for (int t = 0; t < 8; ++t) {
        Tensor term(3, 6);
        for (int layer = 0; layer < 6; ++layer)
            term.at(std::array{layer, kA6Terms[t][layer][0], kA6Terms[t][layer][1]}) = 1;
        Rational w = (t < 4) ? make_rational(1, 6) : make_rational(1, 12);
        cert.terms.terms.emplace_back(w, std::move(term));
    }
    return cert;
}

bool are_orthogonal(const LatinHypercube& a, const LatinHypercube& b) {
    if (a.dim() != 2 || b.dim() != 2 || a.order() != b.order())
        throw std::invalid_argument("orthogonality: need two squares of equal order");
    const int n = a.order();
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t f = 0; f < a.size(); ++f) {
        std::size_t pair = static_cast<std::size_t>(a[f]) * n + b[f];
        if (seen[pair]) return false;
        seen[pair] = 1;
    }
    return true;
}

namespace {

// carryless multiply mod an irreducible polynomial over GF(2)
int gf_mul(int x, int y, int poly, int degree) {
    int acc = 0;
    while (y) {
        if (y & 1) acc ^= x;
        y >>= 1;
        x <<= 1;
        if (x >> degree & 1) x ^= poly;
    }
    return acc;
}

LatinHypercube field_square(int n, int mult) {
    const int poly = (n == 4) ? 0b111 : 0b1011; // x^2+x+1, x^3+x+1
    const int degree = (n == 4) ? 2 : 3;
    std::vector<int> symbols(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            symbols[static_cast<std::size_t>(x) * n + y] = gf_mul(mult, x, poly, degree) ^ y;
    return LatinHypercube(2, n, std::move(symbols));
}

bool mols_admissible(int n) {
    if (n <= 2 || n == 6) return false;
    if (n % 2 == 1 || n == 4 || n == 8) return true;
    for (int a = 3; a * a <= n; ++a)
        if (n % a == 0 && mols_admissible(a) && mols_admissible(n / a)) return true;
    return false;
}

LatinHypercube square_product(const LatinHypercube& a, const LatinHypercube& b) {
    const int p = a.order();
    const int q = b.order();
    const int n = p * q;
    std::vector<int> symbols(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            int ra = r / q, rb = r % q, ca = c / q, cb = c % q;
            symbols[static_cast<std::size_t>(r) * n + c] =
                a.at(std::array{ra, ca}) * q + b.at(std::array{rb, cb});
        }
    return LatinHypercube(2, n, std::move(symbols));
}

} // namespace

std::pair<LatinHypercube, LatinHypercube> mols_pair(int n) {
    if (n <= 2 || n == 6)
        throw std::invalid_argument("mols_pair: no pair exists for order " + std::to_string(n));
    if (n % 2 == 1)
        return {linear_hypercube(2, n, 0, {1, 1}), linear_hypercube(2, n, 0, {2, 1})};
    if (n == 4 || n == 8) return {field_square(n, 1), field_square(n, 2)};
    for (int a = 3; a * a <= n; ++a) {
        if (n % a == 0 && mols_admissible(a) && mols_admissible(n / a)) {
            auto [a1, a2] = mols_pair(a);
            auto [b1, b2] = mols_pair(n / a);
            return {square_product(a1, b1), square_product(a2, b2)};
        }
    }
    // n = 2 mod 4: deterministic capped search for a square with an
    // orthogonal mate
    std::optional<std::pair<LatinHypercube, LatinHypercube>> found;
    CapCounter cap(caps().enumeration_nodes, "mols_pair");
    std::vector<int> partial(static_cast<std::size_t>(n) * n, -1);
    for (int c = 0; c < n; ++c) partial[c] = c; // first row identity, wlog
    for_each_latin_completion(2, n, partial,
                              [&](const std::vector<int>& symbols) {
                                  LatinHypercube cand(2, n, symbols);
                                  CoverResult cover = transversal_cover(p_of_h(cand));
                                  if (cover.status == CoverResult::Status::Found) {
                                      found = {cand, *cover.mate};
                                      return false;
                                  }
                                  return true;
                              },
                              &cap);
    if (!found) throw CapExceeded("mols_pair: search exhausted or capped for order " + std::to_string(n));
    return *found;
}

namespace {

HullCertificate hull_base3(int n) {
    if (n == 6) return a6_certificate();
    HullCertificate cert;
    LatinHypercube square = mols_pair(n).first;
    Tensor p = p_of_h(square);
    CoverResult cover = transversal_cover(p);
    if (cover.status != CoverResult::Status::Found)
        throw std::logic_error("hull_witness: expected a transversal cover of an orthogonal square");
    cert.target = std::move(p);
    cert.s = 2;
    cert.scale = make_rational(1, n);
    Rational w = make_rational(1, n);
    for (auto& q : cover.parts) cert.terms.terms.emplace_back(w, std::move(q));
    return cert;
}

HullCertificate hull_extend(const HullCertificate& a, const HullCertificate& b) {
    HullCertificate out;
    out.target = product(a.target, b.target);
    out.s = a.target.dim();
    out.scale = a.scale * b.scale;
    for (const auto& [ca, pa] : a.terms.terms)
        for (const auto& [cb, qb] : b.terms.terms)
            out.terms.terms.emplace_back(ca * cb, product(pa, qb));
    return out;
}

} // namespace

HullCertificate hull_witness(int d, int n) {
    if (d < 3) throw std::invalid_argument("hull_witness: dimension must be >= 3");
    if (n <= 2) throw std::invalid_argument("hull_witness: order must be > 2");
    HullCertificate base = hull_base3(n);
    // work estimate: terms grow by a factor of |base terms| per dimension
    double work = static_cast<double>(base.terms.terms.size());
    for (int dd = 4; dd <= d; ++dd) work *= static_cast<double>(base.terms.terms.size());
    work *= static_cast<double>(cell_count(d, n));
    if (work > static_cast<double>(caps().enumeration_nodes))
        throw CapExceeded("hull_witness: certificate size exceeds the cap");
    HullCertificate cert = base;
    while (cert.target.dim() < d) cert = hull_extend(cert, base);
    return cert;
}

ScanResult perturbation_scan(const Tensor& v, std::vector<Rational> epsilons) {
    auto rep = check_polystochastic(v, 1);
    if (!rep.ok)
        throw std::invalid_argument("perturbation_scan: V is not 1-polystochastic: " + rep.reason);
    if (epsilons.empty())
        epsilons = {make_rational(1, 100), make_rational(1, 50), make_rational(1, 20),
                    make_rational(1, 10)};
    for (const auto& e : epsilons)
        if (e < 0 || e > 1)
            throw std::invalid_argument("perturbation_scan: epsilon outside [0, 1]");

    const Tensor u = uniform(v.dim(), v.order());
    ScanResult out;
    out.baseline = permanent1(u).value;
    out.epsilons = std::move(epsilons);
    for (const auto& e : out.epsilons) {
        Tensor blend = u;
        blend *= Rational(1) - e;
        Tensor ve = v;
        ve *= e;
        blend += ve;
        out.values.push_back(permanent1(blend).value);
    }
    return out;
}

int count_zero_species(int n, int d) {
    if (n < 2 || n % 2 == 1) throw std::invalid_argument("count_zero_species: order must be even");
    if (n > 6) throw std::invalid_argument("count_zero_species: desk scale is n <= 6");
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("count_zero_species: dimension must be odd and >= 3");
    ZeroFamilySpec spec = ZeroFamilySpec::make(3, n); // window = last r rows of a square
    std::vector<LatinHypercube> squares = zero_family(spec);
    std::set<std::vector<int>> canon;
    for (const auto& sq : squares) {
        auto form = canonical_species_form(lift(sq, d - 1));
        if (!form) throw CapExceeded("count_zero_species: canonical form cap exceeded");
        canon.insert(*form);
    }
    return static_cast<int>(canon.size());
}

} // namespace polystoch
