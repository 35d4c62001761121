#include "polystoch/io.hpp"

#include <fstream>
#include <sstream>

namespace polystoch {

json rational_to_json(const Rational& q) {
    if (is_integral(q) && q.get_num().fits_slong_p())
        return json(static_cast<std::int64_t>(q.get_num().get_si()));
    return json(to_string(q));
}

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    throw std::invalid_argument("rational: expected an integer or a \"p/q\" string, got " + j.dump());
}

json tensor_to_json(const Tensor& t) {
    json entries = json::array();
    for (std::size_t f = 0; f < t.size(); ++f) entries.push_back(rational_to_json(t[f]));
    return json{{"dim", t.dim()}, {"order", t.order()}, {"entries", std::move(entries)}};
}

Tensor tensor_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("order") || !j.contains("entries"))
        throw std::invalid_argument("tensor: need dim, order, entries");
    const int d = j.at("dim").get<int>();
    const int n = j.at("order").get<int>();
    const auto& arr = j.at("entries");
    if (!arr.is_array()) throw std::invalid_argument("tensor: entries must be an array");
    std::vector<Rational> entries;
    entries.reserve(arr.size());
    for (const auto& e : arr) entries.push_back(rational_from_json(e));
    return Tensor(d, n, std::move(entries));
}

json latin_to_json(const LatinHypercube& h) {
    json entries = json::array();
    for (int s : h.symbols()) entries.push_back(s);
    return json{{"kind", "latin"}, {"dim", h.dim()}, {"order", h.order()},
                {"entries", std::move(entries)}};
}

LatinHypercube latin_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("order") || !j.contains("entries"))
        throw std::invalid_argument("latin: need dim, order, entries");
    const int d = j.at("dim").get<int>();
    const int n = j.at("order").get<int>();
    std::vector<int> symbols;
    for (const auto& e : j.at("entries")) symbols.push_back(e.get<int>());
    return LatinHypercube(d, n, std::move(symbols));
}

namespace {

char symbol_char(int s) {
    if (s < 10) return static_cast<char>('0' + s);
    if (s < 36) return static_cast<char>('a' + s - 10);
    throw std::invalid_argument("latin text: symbols above 35 need the JSON format");
}

int char_symbol(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    throw std::invalid_argument(std::string("latin text: bad symbol character '") + c + "'");
}

} // namespace

std::string latin_to_text(const LatinHypercube& h) {
    const int k = h.dim();
    const int n = h.order();
    std::ostringstream os;
    IndexTuple x(k, 0);
    std::size_t f = 0;
    bool first_line = true;
    do {
        // a line holds the last axis; decide the separator from the highest
        // axis that just rolled over
        if (x[k - 1] == 0) {
            if (!first_line) {
                os << "\n";
                for (int ax = k - 2; ax >= 0 && x[ax] == 0; --ax) os << "\n";
            }
            first_line = false;
        }
        os << symbol_char(h[f]);
        ++f;
        ++x[k - 1];
        if (x[k - 1] == n) {
            // advance the odometer above the line axis
            int ax = k - 2;
            x[k - 1] = 0;
            for (; ax >= 0; --ax) {
                if (++x[ax] < n) break;
                x[ax] = 0;
            }
            if (ax < 0) break;
        }
    } while (true);
    os << "\n";
    return os.str();
}

LatinHypercube latin_from_text(const std::string& text) {
    std::vector<std::string> lines;
    std::vector<int> gaps; // blank lines before each content line
    {
        std::istringstream is(text);
        std::string line;
        int blank = 0;
        while (std::getline(is, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty()) {
                ++blank;
                continue;
            }
            gaps.push_back(lines.empty() ? 0 : blank);
            lines.push_back(line);
            blank = 0;
        }
    }
    if (lines.empty()) throw std::invalid_argument("latin text: empty input");
    const int n = static_cast<int>(lines.front().size());
    int max_gap = 0;
    for (int g : gaps) max_gap = std::max(max_gap, g);
    const int dim = (lines.size() == 1) ? 1 : max_gap + 2;
    std::vector<int> symbols;
    symbols.reserve(lines.size() * static_cast<std::size_t>(n));
    for (const auto& line : lines) {
        if (static_cast<int>(line.size()) != n)
            throw std::invalid_argument("latin text: ragged line lengths");
        for (char c : line) symbols.push_back(char_symbol(c));
    }
    if (symbols.size() != cell_count(dim, n))
        throw std::invalid_argument("latin text: cell count does not match the inferred shape");
    return LatinHypercube(dim, n, std::move(symbols));
}

json certificate_to_json(const HullCertificate& cert) {
    json terms = json::array();
    for (const auto& [w, t] : cert.terms.terms)
        terms.push_back(json{{"weight", rational_to_json(w)}, {"tensor", tensor_to_json(t)}});
    return json{{"s", cert.s},
                {"scale", rational_to_json(cert.scale)},
                {"target", tensor_to_json(cert.target)},
                {"terms", std::move(terms)}};
}

HullCertificate certificate_from_json(const json& j) {
    if (!j.is_object() || !j.contains("s") || !j.contains("terms"))
        throw std::invalid_argument("certificate: need s and terms");
    HullCertificate cert;
    cert.s = j.at("s").get<int>();
    for (const auto& term : j.at("terms")) {
        cert.terms.terms.emplace_back(rational_from_json(term.at("weight")),
                                      tensor_from_json(term.at("tensor")));
    }
    if (cert.terms.terms.empty()) throw std::invalid_argument("certificate: no terms");
    cert.scale = j.contains("scale") ? rational_from_json(j.at("scale")) : Rational(1);
    if (j.contains("target")) {
        cert.target = tensor_from_json(j.at("target"));
    } else {
        // self-consistent default: the combination itself
        cert.target = combine(cert.terms);
        cert.scale = 1;
    }
    return cert;
}

json diagonal_to_json(const Diagonal& d) {
    json cells = json::array();
    for (const auto& cell : d.cells) {
        json c = json::array();
        for (int v : cell) c.push_back(v);
        cells.push_back(std::move(c));
    }
    return json{{"s", d.s}, {"cells", std::move(cells)}};
}

Diagonal diagonal_from_json(const json& j) {
    Diagonal d;
    d.s = j.at("s").get<int>();
    for (const auto& c : j.at("cells")) {
        IndexTuple cell;
        for (const auto& v : c) cell.push_back(v.get<int>());
        d.cells.push_back(std::move(cell));
    }
    return d;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

namespace {

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        return c == '{';
    }
    return false;
}

} // namespace

Tensor load_tensor_file(const std::string& path) {
    std::string text = read_text_file(path);
    if (looks_like_json(text)) {
        json j = json::parse(text);
        if (j.contains("kind") && j.at("kind") == "latin") return p_of_h(latin_from_json(j));
        return tensor_from_json(j);
    }
    return p_of_h(latin_from_text(text));
}

LatinHypercube load_latin_file(const std::string& path) {
    std::string text = read_text_file(path);
    if (looks_like_json(text)) {
        json j = json::parse(text);
        if (j.contains("kind") && j.at("kind") == "latin") return latin_from_json(j);
        return h_of_p(tensor_from_json(j)); // rejects tensors outside Lambda_1
    }
    return latin_from_text(text);
}

HullCertificate load_certificate_file(const std::string& path) {
    return certificate_from_json(json::parse(read_text_file(path)));
}

} // namespace polystoch
