#pragma once

// Text and JSON encodings of forms.
//
// Complex literal:  "(3/2+1/2i) a12_b1 - 2 b3 + i a1"
//   a<idx> lists holomorphic indices, b<idx> antiholomorphic ones; <idx> is a
//   run of single digits or a braced list like {10,11}. Coefficients are
//   products of rationals, i, parenthesised Gaussian rationals and named
//   parameters.
// Real literal:     "e1^e2 - 1/2 e3^e4" over a real coframe e^1..e^m.

#include "pkl/exterior.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <string_view>

namespace pkl {

using ParamMap = std::map<std::string, Scalar>;

std::string format_monomial(int n, Mask m);
std::string format_form(const ComplexForm& f);
ComplexForm parse_form(int n, std::string_view text, const ParamMap& params = {});

std::string format_real_form(const ComplexForm& f);
ComplexForm parse_real_form(int m, std::string_view text, const ParamMap& params = {});

nlohmann::json form_to_json(const ComplexForm& f);
ComplexForm form_from_json(int n, const nlohmann::json& j);

nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);

}  // namespace pkl
