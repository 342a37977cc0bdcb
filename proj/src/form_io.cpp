#include "pkl/form_io.hpp"

#include <algorithm>
#include <cctype>

namespace pkl {

namespace {

std::string index_list(Mask m, int n) {
    std::string out;
    bool braces = n > 9;
    if (braces) out += "{";
    bool first = true;
    for (; m; m &= m - 1) {
        int j = std::countr_zero(m) + 1;
        if (braces && !first) out += ",";
        out += std::to_string(j);
        first = false;
    }
    if (braces) out += "}";
    return out;
}

std::string join_terms(const std::vector<std::pair<Scalar, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto& [c, mono] = terms[k];
        std::string t;
        if (mono.empty()) t = to_string(c);
        else if (c == Scalar(1)) t = mono;
        else if (c == Scalar(-1)) t = "-" + mono;
        else t = to_string(c) + " " + mono;
        if (k == 0) out = t;
        else if (t[0] == '-') out += " - " + t.substr(1);
        else out += " + " + t;
    }
    return out;
}

/// Recursive-descent reader shared by the complex and real literal syntaxes.
class FormReader {
public:
    FormReader(std::string_view text, const ParamMap& params, int rank)
        : s_(text), params_(params), rank_(rank) {}

    template <class MonomialFn>
    ComplexForm read(MonomialFn&& monomial) {
        ComplexForm out(rank_);
        skip_ws();
        bool first = true;
        while (!at_end()) {
            Scalar sign(1);
            if (peek() == '+' || peek() == '-') {
                if (peek() == '-') sign = Scalar(-1);
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            auto [coeff, mask] = read_term(monomial);
            out.add_term(mask, sign * coeff);
            first = false;
            skip_ws();
        }
        if (first) fail("empty form literal");
        return out;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    std::size_t pos_ = 0;
    std::string_view s_;

    int read_int() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected an index");
        return std::stoi(std::string(s_.substr(start, pos_ - start)));
    }

private:
    template <class MonomialFn>
    std::pair<Scalar, Mask> read_term(MonomialFn& monomial) {
        Scalar coeff(1);
        bool any = false;
        for (;;) {
            skip_ws();
            if (at_end()) break;
            char c = peek();
            if (c == '*') { ++pos_; continue; }
            if (c == '+' || c == '-') break;
            if (std::isdigit(static_cast<unsigned char>(c))) {
                coeff *= read_number();
                any = true;
                continue;
            }
            if (c == '(') {
                std::size_t depth = 0, start = pos_;
                do {
                    if (peek() == '(') ++depth;
                    if (peek() == ')') --depth;
                    ++pos_;
                } while (!at_end() && depth > 0);
                if (depth != 0) fail("unbalanced parenthesis");
                try {
                    coeff *= parse_scalar(s_.substr(start, pos_ - start));
                } catch (const ParseError& e) {
                    throw ParseError(std::string("bad coefficient: ") + e.what(), start);
                }
                any = true;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                Mask mask = 0;
                if (monomial(*this, mask)) {
                    skip_ws();
                    if (!at_end() && peek() != '+' && peek() != '-') fail("monomial must end a term");
                    return {coeff, mask};
                }
                std::size_t start = pos_;
                while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
                std::string name(s_.substr(start, pos_ - start));
                if (name == "i") {
                    coeff *= Scalar::i();
                } else {
                    auto it = params_.find(name);
                    if (it == params_.end()) throw ParseError("unknown parameter '" + name + "'", start);
                    coeff *= it->second;
                }
                any = true;
                continue;
            }
            fail(std::string("unexpected character '") + c + "'");
        }
        if (!any) fail("empty term");
        return {coeff, Mask(0)};
    }

    Scalar read_number() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '/') {
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected denominator");
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        Rational q;
        try {
            q = parse_rational(s_.substr(start, pos_ - start));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), start);
        }
        // "1/2i" reads as (1/2)*i
        if (peek() == 'i' && !std::isalnum(static_cast<unsigned char>(peek(1)))) {
            ++pos_;
            return Scalar(Rational(0), q);
        }
        return Scalar(q);
    }

    const ParamMap& params_;
    int rank_;
};

}  // namespace

std::string format_monomial(int n, Mask m) {
    Mask h = holo_part(m, n), a = anti_part(m, n);
    std::string out;
    if (h) out += "a" + index_list(h, n);
    if (a) out += (h ? "_b" : "b") + index_list(a, n);
    return out;
}

std::string format_form(const ComplexForm& f) {
    const int n = coframe_dim(f);
    std::vector<std::pair<Scalar, std::string>> terms;
    for (Mask m : sorted_monomials(n, f)) terms.emplace_back(f.coefficient(m), format_monomial(n, m));
    return join_terms(terms);
}

ComplexForm parse_form(int n, std::string_view text, const ParamMap& params) {
    FormReader reader(text, params, 2 * n);
    auto read_indices = [n](FormReader& r) {
        Mask m = 0;
        int prev = 0;
        auto add = [&](int j) {
            if (j < 1 || j > n) r.fail("index out of range 1.." + std::to_string(n));
            if (j <= prev) r.fail("indices must be strictly increasing");
            m |= Mask(1) << (j - 1);
            prev = j;
        };
        if (r.peek() == '{') {
            ++r.pos_;
            for (;;) {
                add(r.read_int());
                if (r.peek() == ',') { ++r.pos_; continue; }
                if (r.peek() == '}') { ++r.pos_; break; }
                r.fail("expected ',' or '}'");
            }
        } else {
            if (!std::isdigit(static_cast<unsigned char>(r.peek()))) r.fail("expected an index");
            while (std::isdigit(static_cast<unsigned char>(r.peek()))) add(r.peek() - '0'), ++r.pos_;
        }
        return m;
    };
    auto starts_index = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '{'; };
    auto monomial = [&](FormReader& r, Mask& mask) -> bool {
        char c = r.peek();
        if ((c != 'a' && c != 'b') || !starts_index(r.peek(1))) return false;
        ++r.pos_;
        Mask h = 0, a = 0;
        if (c == 'a') {
            h = read_indices(r);
            if (r.peek() == '_') {
                ++r.pos_;
                if (r.peek() != 'b') r.fail("expected 'b' after '_'");
                ++r.pos_;
                a = read_indices(r);
            }
        } else {
            a = read_indices(r);
        }
        mask = make_mask(n, h, a);
        return true;
    };
    return reader.read(monomial);
}

std::string format_real_form(const ComplexForm& f) {
    std::vector<Mask> masks;
    for (const auto& [m, c] : f.terms()) masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](Mask a, Mask b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        for (Mask x = a, y = b; x && y; x &= x - 1, y &= y - 1)
            if (std::countr_zero(x) != std::countr_zero(y)) return std::countr_zero(x) < std::countr_zero(y);
        return false;
    });
    std::vector<std::pair<Scalar, std::string>> terms;
    for (Mask m : masks) {
        std::string mono;
        for (Mask r = m; r; r &= r - 1) {
            if (!mono.empty()) mono += "^";
            mono += "e" + std::to_string(std::countr_zero(r) + 1);
        }
        terms.emplace_back(f.coefficient(m), mono);
    }
    return join_terms(terms);
}

ComplexForm parse_real_form(int m, std::string_view text, const ParamMap& params) {
    FormReader reader(text, params, m);
    auto monomial = [m](FormReader& r, Mask& mask) -> bool {
        if (r.peek() != 'e' || !std::isdigit(static_cast<unsigned char>(r.peek(1)))) return false;
        std::vector<int> gens;
        for (;;) {
            if (r.peek() != 'e') r.fail("expected 'e<index>'");
            ++r.pos_;
            int j = r.read_int();
            if (j < 1 || j > m) r.fail("index out of range 1.." + std::to_string(m));
            gens.push_back(j - 1);
            r.skip_ws();
            if (r.peek() == '^') { ++r.pos_; r.skip_ws(); continue; }
            break;
        }
        mask = 0;
        for (int g : gens) {
            if (test_bit(mask, g)) r.fail("repeated index");
            mask |= Mask(1) << g;
        }
        for (std::size_t x = 1; x < gens.size(); ++x)
            if (gens[x] < gens[x - 1]) r.fail("write real monomials in increasing order");
        return true;
    };
    return reader.read(monomial);
}

nlohmann::json scalar_to_json(const Scalar& s) { return to_string(s); }

Scalar scalar_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Scalar(Rational(j.get<long long>()));
    if (!j.is_string()) throw ParseError("expected a scalar string", 0);
    return parse_scalar(j.get<std::string>());
}

nlohmann::json form_to_json(const ComplexForm& f) {
    const int n = coframe_dim(f);
    nlohmann::json arr = nlohmann::json::array();
    for (Mask m : sorted_monomials(n, f)) {
        const Scalar& c = f.coefficient(m);
        auto idx = to_multi_index(n, m);
        arr.push_back({{"re", c.re.str()}, {"im", c.im.str()}, {"holo", idx.holo}, {"anti", idx.anti}});
    }
    return arr;
}

ComplexForm form_from_json(int n, const nlohmann::json& j) {
    if (j.is_string()) return parse_form(n, j.get<std::string>());
    if (!j.is_array()) throw ParseError("form must be an array of terms or a literal string", 0);
    ComplexForm out(2 * n);
    for (const auto& t : j) {
        Scalar c(parse_rational(t.at("re").get<std::string>()), parse_rational(t.value("im", std::string("0"))));
        MultiIndex idx{t.value("holo", std::vector<int>{}), t.value("anti", std::vector<int>{})};
        out.add_term(to_mask(n, idx), c);
    }
    return out;
}

}  // namespace pkl
