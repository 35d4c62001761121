#include "polystoch/claims.hpp"
#include "polystoch/constructions.hpp"
#include "polystoch/io.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace polystoch;

namespace {

constexpr int kVerified = 0;
constexpr int kRefuted = 1;
constexpr int kError = 2;

std::vector<Rational> parse_rational_list(const std::string& csv) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        if (comma == std::string::npos) comma = csv.size();
        std::string tok = csv.substr(start, comma - start);
        if (!tok.empty()) out.push_back(rational_from_string(tok));
        start = comma + 1;
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (const auto& q : parse_rational_list(csv)) out.push_back(static_cast<int>(q.get_num().get_si()));
    return out;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) std::cout << content;
    else write_text_file(out_path, content);
}

void emit_latin(const LatinHypercube& h, const std::string& out_path, bool as_json) {
    emit(as_json ? latin_to_json(h).dump(2) + "\n" : latin_to_text(h), out_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact multidimensional permanents of polystochastic matrices"};
    app.require_subcommand(1);

    bool as_json = false;
    int threads = 1;
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--threads", threads, "worker threads for permanent evaluation")
        ->check(CLI::Range(1, 256));

    int exit_code = kVerified;

    // permanent [--s K] FILE
    {
        auto* cmd = app.add_subcommand("permanent", "exact s-permanent of a tensor file");
        auto s = std::make_shared<int>(1);
        auto file = std::make_shared<std::string>();
        auto witness = std::make_shared<bool>(false);
        cmd->add_option("--s", *s, "diagonal rank s (default 1)");
        cmd->add_flag("--witness", *witness, "print the first positive diagonal");
        cmd->add_option("file", *file, "tensor or hypercube file")->required();
        cmd->callback([=, &as_json, &threads]() {
            Tensor a = load_tensor_file(*file);
            PermanentResult res = (*s == 1) ? permanent1(a, threads) : permanent_s(a, *s);
            if (as_json) {
                json j{{"value", rational_to_json(res.value)},
                       {"positive_diagonals", res.diagonal_count.get_str()}};
                if (*witness && res.witness) j["witness"] = diagonal_to_json(*res.witness);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << to_string(res.value) << "\n";
                if (*witness && res.witness)
                    std::cout << "witness: " << diagonal_to_json(*res.witness).dump() << "\n";
            }
        });
    }

    // transversals FILE
    {
        auto* cmd = app.add_subcommand("transversals", "count transversals of a Latin hypercube");
        auto file = std::make_shared<std::string>();
        auto list = std::make_shared<bool>(false);
        cmd->add_flag("--list", *list, "print every transversal");
        cmd->add_option("file", *file, "hypercube file")->required();
        cmd->callback([=, &as_json]() {
            LatinHypercube h = load_latin_file(*file);
            TransversalCount res = count_transversals(h, *list);
            if (as_json) {
                json j{{"count", res.count.get_str()}};
                if (res.list) {
                    json arr = json::array();
                    for (const auto& t : *res.list) arr.push_back(diagonal_to_json(t));
                    j["transversals"] = std::move(arr);
                }
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << res.count.get_str() << "\n";
                if (res.list)
                    for (const auto& t : *res.list) std::cout << diagonal_to_json(t).dump() << "\n";
            }
        });
    }

    // mixed FILE...
    {
        auto* cmd = app.add_subcommand("mixed", "search for a mixed transversal of several hypercubes");
        auto files = std::make_shared<std::vector<std::string>>();
        cmd->add_option("files", *files, "hypercube files")->required()->expected(-1);
        cmd->callback([=, &as_json, &exit_code]() {
            std::vector<LatinHypercube> hs;
            for (const auto& f : *files) hs.push_back(load_latin_file(f));
            auto witness = mixed_transversal_exists(hs);
            if (as_json) {
                json j{{"exists", witness.has_value()}};
                if (witness) j["witness"] = diagonal_to_json(*witness);
                std::cout << j.dump(2) << "\n";
            } else if (witness) {
                std::cout << "mixed transversal: " << diagonal_to_json(*witness).dump() << "\n";
            } else {
                std::cout << "none\n";
            }
            exit_code = witness ? kVerified : kRefuted;
        });
    }

    // verify {polystochastic|permutation|vertex|certificate} FILE
    {
        auto* cmd = app.add_subcommand("verify", "check a predicate and exit 0 (pass) or 1 (fail)");
        auto what = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        auto s = std::make_shared<int>(1);
        cmd->add_option("predicate", *what, "polystochastic | permutation | vertex | certificate")
            ->required()
            ->check(CLI::IsMember({"polystochastic", "permutation", "vertex", "certificate"}));
        cmd->add_option("file", *file, "input file")->required();
        cmd->add_option("--s", *s, "plane rank for the stochasticity predicates");
        cmd->callback([=, &exit_code]() {
            PredicateReport rep;
            if (*what == "polystochastic") rep = check_polystochastic(load_tensor_file(*file), *s);
            else if (*what == "permutation") rep = check_permutation_matrix(load_tensor_file(*file), *s);
            else if (*what == "certificate") rep = verify_certificate(load_certificate_file(*file));
            else {
                VertexReport v = is_vertex(load_tensor_file(*file));
                rep.ok = v.is_vertex;
                rep.reason = "freedom dimension " + std::to_string(v.freedom_dim);
                std::cout << "freedom_dim: " << v.freedom_dim << "\n";
            }
            std::cout << (rep.ok ? "pass" : "fail: " + rep.reason) << "\n";
            exit_code = rep.ok ? kVerified : kRefuted;
        });
    }

    // construct {cyclic|linear|zero-family|lab|a6|mols|hull-witness}
    {
        auto* cmd = app.add_subcommand("construct", "emit one of the named families");
        auto kind = std::make_shared<std::string>();
        auto dim = std::make_shared<int>(2);
        auto order = std::make_shared<int>(4);
        auto shift = std::make_shared<int>(0);
        auto coeffs = std::make_shared<std::string>();
        auto r = std::make_shared<int>(0);
        auto window = std::make_shared<int>(-1);
        auto axis = std::make_shared<int>(0);
        auto sample = std::make_shared<int>(0);
        auto seed = std::make_shared<unsigned>(1);
        auto a = std::make_shared<int>(1);
        auto b = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("kind", *kind, "cyclic | linear | zero-family | lab | a6 | mols | hull-witness")
            ->required()
            ->check(CLI::IsMember({"cyclic", "linear", "zero-family", "lab", "a6", "mols", "hull-witness"}));
        cmd->add_option("--dim", *dim, "dimension");
        cmd->add_option("--order", *order, "order n");
        cmd->add_option("--shift", *shift, "linear shift");
        cmd->add_option("--coeffs", *coeffs, "comma-separated linear coefficients");
        cmd->add_option("--r", *r, "window length (0 = maximal with r(r-1) < n)");
        cmd->add_option("--window-start", *window, "first window hyperplane (-1 = last r)");
        cmd->add_option("--axis", *axis, "window axis");
        cmd->add_option("--sample", *sample, "sample this many members instead of enumerating");
        cmd->add_option("--seed", *seed, "sampling seed");
        cmd->add_option("--a", *a, "row block index");
        cmd->add_option("--b", *b, "column block index");
        cmd->add_option("-o,--out", *out, "output file (default stdout)");
        cmd->callback([=, &as_json]() {
            if (*kind == "cyclic") {
                emit_latin(cyclic(*dim, *order), *out, as_json);
            } else if (*kind == "linear") {
                emit_latin(linear_hypercube(*dim, *order, *shift, parse_int_list(*coeffs)), *out, as_json);
            } else if (*kind == "lab") {
                emit_latin(lab_square(*order, *a, *b), *out, as_json);
            } else if (*kind == "a6") {
                emit(tensor_to_json(a6()).dump(2) + "\n", *out);
            } else if (*kind == "mols") {
                auto [first, second] = mols_pair(*order);
                json j{{"first", latin_to_json(first)}, {"second", latin_to_json(second)}};
                emit(j.dump(2) + "\n", *out);
            } else if (*kind == "hull-witness") {
                emit(certificate_to_json(hull_witness(*dim, *order)).dump(2) + "\n", *out);
            } else { // zero-family
                ZeroFamilySpec spec;
                spec.d = *dim;
                spec.n = *order;
                spec.r = *r;
                spec.window_start = *window;
                spec.axis = *axis;
                auto members = (*sample > 0) ? zero_family_sample(spec, *sample, *seed)
                                             : zero_family(spec);
                json arr = json::array();
                for (const auto& h : members) arr.push_back(latin_to_json(h));
                emit(arr.dump(2) + "\n", *out);
            }
        });
    }

    // decompose {birkhoff|transversal-cover} FILE
    {
        auto* cmd = app.add_subcommand("decompose", "decompose into permutation matrices");
        auto what = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("method", *what, "birkhoff | transversal-cover")
            ->required()
            ->check(CLI::IsMember({"birkhoff", "transversal-cover"}));
        cmd->add_option("file", *file, "input tensor")->required();
        cmd->add_option("-o,--out", *out, "output file (default stdout)");
        cmd->callback([=, &exit_code]() {
            if (*what == "birkhoff") {
                emit(certificate_to_json(birkhoff_decompose(load_tensor_file(*file))).dump(2) + "\n", *out);
                return;
            }
            CoverResult cover = transversal_cover(load_tensor_file(*file));
            if (cover.status == CoverResult::Status::Found) {
                json parts = json::array();
                for (const auto& q : cover.parts) parts.push_back(tensor_to_json(q));
                json j{{"parts", std::move(parts)}, {"mate", latin_to_json(*cover.mate)}};
                emit(j.dump(2) + "\n", *out);
            } else if (cover.status == CoverResult::Status::None) {
                std::cout << "none\n";
                exit_code = kRefuted;
            } else {
                std::cout << "undecided at cap\n";
                exit_code = kError;
            }
        });
    }

    // scan --eps LIST FILE
    {
        auto* cmd = app.add_subcommand("scan", "permanents of (1-eps) uniform + eps V");
        auto eps = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        cmd->add_option("--eps", *eps, "comma-separated rationals in [0,1]");
        cmd->add_option("file", *file, "the vertex tensor V")->required();
        cmd->callback([=, &as_json]() {
            ScanResult scan = perturbation_scan(load_tensor_file(*file), parse_rational_list(*eps));
            if (as_json) {
                json values = json::array();
                for (std::size_t i = 0; i < scan.values.size(); ++i)
                    values.push_back(json{{"eps", rational_to_json(scan.epsilons[i])},
                                          {"value", rational_to_json(scan.values[i])}});
                std::cout << json{{"baseline", rational_to_json(scan.baseline)},
                                  {"values", std::move(values)}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << "baseline " << to_string(scan.baseline) << "\n";
                for (std::size_t i = 0; i < scan.values.size(); ++i)
                    std::cout << "eps " << to_string(scan.epsilons[i]) << ": "
                              << to_string(scan.values[i]) << "\n";
            }
        });
    }

    // species {equiv|count}
    {
        auto* cmd = app.add_subcommand("species", "species equivalence and counting");
        auto what = std::make_shared<std::string>();
        auto files = std::make_shared<std::vector<std::string>>();
        auto order = std::make_shared<int>(4);
        auto dim = std::make_shared<int>(3);
        cmd->add_option("mode", *what, "equiv | count")
            ->required()
            ->check(CLI::IsMember({"equiv", "count"}));
        cmd->add_option("files", *files, "two hypercube files for equiv");
        cmd->add_option("--order", *order, "order for count");
        cmd->add_option("--dim", *dim, "matrix dimension for count");
        cmd->callback([=, &exit_code]() {
            if (*what == "equiv") {
                if (files->size() != 2) throw CLI::ValidationError("species equiv needs two files");
                Tristate res = species_equivalent(load_latin_file((*files)[0]), load_latin_file((*files)[1]));
                if (res == Tristate::Undecided) {
                    std::cout << "undecided at cap\n";
                    exit_code = kError;
                } else {
                    std::cout << (res == Tristate::True ? "true" : "false") << "\n";
                    exit_code = res == Tristate::True ? kVerified : kRefuted;
                }
            } else {
                std::cout << count_zero_species(*order, *dim) << "\n";
            }
        });
    }

    // repro CLAIM-ID
    {
        auto* cmd = app.add_subcommand("repro", "run a named desk-scale check");
        auto id = std::make_shared<std::string>();
        auto all = std::make_shared<bool>(false);
        auto list = std::make_shared<bool>(false);
        cmd->add_option("claim", *id, "claim identifier");
        cmd->add_flag("--all", *all, "run every claim");
        cmd->add_flag("--list", *list, "list claim identifiers");
        cmd->callback([=, &exit_code]() {
            if (*list) {
                for (const auto& info : claim_list())
                    std::cout << info.id << ": " << info.summary << "\n";
                return;
            }
            std::vector<std::string> ids;
            if (*all) {
                for (const auto& info : claim_list()) ids.push_back(info.id);
            } else if (!id->empty()) {
                ids.push_back(*id);
            } else {
                throw CLI::ValidationError("repro needs a claim id, --all, or --list");
            }
            bool all_pass = true;
            for (const auto& claim_id : ids) {
                ClaimResult res = run_claim(claim_id);
                std::cout << (res.pass ? "PASS " : "FAIL ") << res.id << "\n";
                for (const auto& line : res.details) std::cout << "  " << line << "\n";
                all_pass = all_pass && res.pass;
            }
            exit_code = all_pass ? kVerified : kRefuted;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return exit_code;
}
