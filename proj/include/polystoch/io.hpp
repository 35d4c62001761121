#pragma once

#include "polystoch/latin.hpp"
#include "polystoch/permanent.hpp"
#include "polystoch/polytope.hpp"
#include "polystoch/tensor.hpp"

#include <json.hpp>

#include <string>

namespace polystoch {

using nlohmann::json;

// {"dim":d,"order":n,"entries":[...]} — entries are integers or "p/q"
// strings, row major; the round trip is exact.
json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const json& j);

// shares the tensor schema with "kind":"latin" and integer entries
json latin_to_json(const LatinHypercube& h);
LatinHypercube latin_from_json(const json& j);

// one row per line (digits, then a..z), blocks of higher axes separated by
// one extra blank line per axis
std::string latin_to_text(const LatinHypercube& h);
LatinHypercube latin_from_text(const std::string& text);

json certificate_to_json(const HullCertificate& cert);
HullCertificate certificate_from_json(const json& j);

json diagonal_to_json(const Diagonal& d);
Diagonal diagonal_from_json(const json& j);

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);

// File loaders sniff JSON vs text and convert between the latin and tensor
// views when the requested shape allows it.
Tensor load_tensor_file(const std::string& path);
LatinHypercube load_latin_file(const std::string& path);
HullCertificate load_certificate_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace polystoch
