#include "seqwarp/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "seqwarp/errors.hpp"

namespace seqwarp {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace {

struct Value {
    enum Kind { number, string, boolean, list } kind = number;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<Value> items;
};

struct Entry {
    Value value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

class ValueParser {
public:
    explicit ValueParser(std::string_view s) : s_(s) {}

    Value parse() {
        Value v = value();
        skip();
        if (i_ != s_.size()) fail("unexpected trailing text '" + std::string(s_.substr(i_)) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw std::runtime_error(msg); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    Value value() {
        skip();
        if (i_ >= s_.size()) fail("missing value");
        const char c = s_[i_];
        Value v;
        if (c == '"') {
            ++i_;
            v.kind = Value::string;
            while (i_ < s_.size() && s_[i_] != '"') {
                if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
                v.str += s_[i_++];
            }
            if (i_ >= s_.size()) fail("unterminated string");
            ++i_;
            return v;
        }
        if (c == '[') {
            ++i_;
            v.kind = Value::list;
            skip();
            if (i_ < s_.size() && s_[i_] == ']') {
                ++i_;
                return v;
            }
            while (true) {
                v.items.push_back(value());
                skip();
                if (i_ < s_.size() && s_[i_] == ',') {
                    ++i_;
                    skip();
                    if (i_ < s_.size() && s_[i_] == ']') {
                        ++i_;
                        return v;
                    }
                    continue;
                }
                if (i_ < s_.size() && s_[i_] == ']') {
                    ++i_;
                    return v;
                }
                fail("expected ',' or ']' in list");
            }
        }
        if (s_.substr(i_, 4) == "true") {
            i_ += 4;
            v.kind = Value::boolean;
            v.flag = true;
            return v;
        }
        if (s_.substr(i_, 5) == "false") {
            i_ += 5;
            v.kind = Value::boolean;
            return v;
        }
        const char* begin = s_.data() + i_;
        std::string tmp(begin, s_.size() - i_);
        char* end = nullptr;
        const double d = std::strtod(tmp.c_str(), &end);
        if (end == tmp.c_str()) fail("cannot parse value starting at '" + tmp.substr(0, 12) + "'");
        i_ += static_cast<std::size_t>(end - tmp.c_str());
        v.num = d;
        return v;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

int bracket_depth(const std::string& s) {
    int depth = 0;
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (in_str) continue;
        if (s[i] == '[') ++depth;
        if (s[i] == ']') --depth;
    }
    return depth;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
    return true;
}

std::map<std::string, Section> read_sections(std::string_view text, std::vector<std::string>& errors) {
    static const std::set<std::string> known = {"meta", "ambient", "chart", "immersion",
                                                "warping", "base_metrics", "tolerances"};
    std::map<std::string, Section> sections;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string current;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[' && line.find('=') == std::string::npos) {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            current = trim(line.substr(1, line.size() - 2));
            if (!known.count(current))
                errors.push_back("line " + std::to_string(lineno) + ": unknown section [" + current + "]");
            if (sections.count(current))
                errors.push_back("line " + std::to_string(lineno) + ": duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const int start_line = lineno;
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        while (bracket_depth(value) > 0 && std::getline(in, raw)) {
            ++lineno;
            value += " " + trim(strip_comment(raw));
        }
        if (current.empty()) {
            errors.push_back("line " + std::to_string(start_line) + ": key '" + key + "' outside any section");
            continue;
        }
        if (!valid_key(key)) {
            errors.push_back("line " + std::to_string(start_line) + ": invalid key '" + key + "'");
            continue;
        }
        Entry e;
        e.line = start_line;
        try {
            e.value = ValueParser(value).parse();
        } catch (const std::exception& ex) {
            errors.push_back("line " + std::to_string(start_line) + ": " + current + "." + key + ": " + ex.what());
            continue;
        }
        auto& sec = sections[current];
        if (sec.count(key)) {
            errors.push_back("line " + std::to_string(start_line) + ": duplicate key " + current + "." + key);
            continue;
        }
        sec[key] = std::move(e);
    }
    return sections;
}

class Validator {
public:
    Validator(std::map<std::string, Section> sections, std::vector<std::string>& errors)
        : sec_(std::move(sections)), errors_(errors) {}

    const Entry* get(const std::string& section, const std::string& key) {
        auto s = sec_.find(section);
        if (s == sec_.end()) return nullptr;
        auto e = s->second.find(key);
        if (e == s->second.end()) return nullptr;
        used_[section].insert(key);
        return &e->second;
    }

    void error(const std::string& msg) { errors_.push_back(msg); }

    bool has_section(const std::string& s) const { return sec_.count(s) > 0; }

    const Section* section(const std::string& s) const {
        auto it = sec_.find(s);
        return it == sec_.end() ? nullptr : &it->second;
    }

    void mark_used(const std::string& section, const std::string& key) { used_[section].insert(key); }

    void report_unused() {
        for (const auto& [name, sec] : sec_)
            for (const auto& [key, entry] : sec)
                if (!used_[name].count(key))
                    error("line " + std::to_string(entry.line) + ": unknown key " + name + "." + key);
    }

private:
    std::map<std::string, Section> sec_;
    std::map<std::string, std::set<std::string>> used_;
    std::vector<std::string>& errors_;
};

bool as_string_list(const Value& v, std::vector<std::string>& out) {
    if (v.kind != Value::list) return false;
    for (const auto& it : v.items) {
        if (it.kind != Value::string) return false;
        out.push_back(it.str);
    }
    return true;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

std::optional<ExprNode> parse_expr_field(Validator& v, const std::string& where, const Value& value,
                                         const std::vector<std::string>& chart) {
    if (value.kind != Value::string) {
        v.error(where + ": expected an expression string");
        return std::nullopt;
    }
    try {
        return parse_expression(value.str, chart);
    } catch (const ParseError& e) {
        v.error(where + ": " + e.what());
    } catch (const UnknownIdentifier& e) {
        v.error(where + ": " + e.what());
    } catch (const DomainError& e) {
        v.error(where + ": " + e.what());
    }
    return std::nullopt;
}

}  // namespace

Manifest parse_manifest(std::string_view text, const std::string& origin) {
    std::vector<std::string> errors;
    Manifest m;
    m.origin = origin;
    m.hash = fnv1a64(text);
    Validator v(read_sections(text, errors), errors);

    for (const char* required : {"ambient", "chart", "immersion"})
        if (!v.has_section(required)) v.error(std::string("missing section [") + required + "]");

    if (const Entry* e = v.get("meta", "name")) {
        if (e->value.kind == Value::string) m.name = e->value.str;
        else v.error("meta.name: expected a string");
    }
    if (const Entry* e = v.get("meta", "description")) {
        if (e->value.kind == Value::string) m.description = e->value.str;
        else v.error("meta.description: expected a string");
    }

    // [ambient]
    int N = 0;
    if (v.has_section("ambient")) {
        const Entry* e = v.get("ambient", "real_dim");
        if (!e) {
            v.error("ambient: missing real_dim");
        } else if (e->value.kind != Value::number || e->value.num != static_cast<int>(e->value.num) ||
                   e->value.num <= 0 || static_cast<int>(e->value.num) % 2 != 0) {
            v.error("ambient.real_dim: expected a positive even integer");
        } else {
            N = static_cast<int>(e->value.num);
        }
        if (const Entry* c = v.get("ambient", "holomorphic_curvature")) {
            if (c->value.kind == Value::number) m.holomorphic_curvature = c->value.num;
            else v.error("ambient.holomorphic_curvature: expected a number");
        }
        if (const Entry* js = v.get("ambient", "complex_structure")) {
            if (js->value.kind == Value::string) {
                if (js->value.str != "consecutive-pairs")
                    v.error("ambient.complex_structure: unknown name '" + js->value.str +
                            "' (use \"consecutive-pairs\" or a matrix)");
            } else if (js->value.kind == Value::list) {
                m.complex_structure = "matrix";
                const auto& rows = js->value.items;
                if (N > 0 && static_cast<int>(rows.size()) != N) {
                    v.error("ambient.complex_structure: expected " + std::to_string(N) + " rows, found " +
                            std::to_string(rows.size()));
                } else if (N > 0) {
                    m.J.resize(N, N);
                    bool ok = true;
                    for (int i = 0; i < N && ok; ++i) {
                        if (rows[i].kind != Value::list || static_cast<int>(rows[i].items.size()) != N) {
                            v.error("ambient.complex_structure: row " + std::to_string(i + 1) + " must have " +
                                    std::to_string(N) + " numbers");
                            ok = false;
                            break;
                        }
                        for (int j = 0; j < N; ++j) {
                            if (rows[i].items[j].kind != Value::number) {
                                v.error("ambient.complex_structure: non-numeric entry in row " +
                                        std::to_string(i + 1));
                                ok = false;
                                break;
                            }
                            m.J(i, j) = rows[i].items[j].num;
                        }
                    }
                    if (ok) {
                        const double d = complex_structure_defect(m.J);
                        if (!(d <= 1e-12)) {
                            char buf[160];
                            std::snprintf(buf, sizeof buf,
                                          "ambient.complex_structure: matrix is not an orthogonal complex structure "
                                          "(max defect of J^2 + I and J^T J - I is %.3e)",
                                          d);
                            v.error(buf);
                        }
                    } else {
                        m.J.resize(0, 0);
                    }
                }
            } else {
                v.error("ambient.complex_structure: expected a name or a matrix");
            }
        }
        if (N > 0 && m.complex_structure == "consecutive-pairs") m.J = standard_complex_structure(N);
    }

    // [chart]
    auto& spec = m.immersion;
    std::vector<std::string> chart;
    if (v.has_section("chart")) {
        const Entry* e = v.get("chart", "coords");
        if (!e) {
            v.error("chart: missing coords");
        } else if (!as_string_list(e->value, chart) || chart.empty()) {
            v.error("chart.coords: expected a non-empty list of names");
            chart.clear();
        }
        std::set<std::string> seen;
        for (const auto& c : chart) {
            if (!is_identifier(c)) v.error("chart.coords: '" + c + "' is not a valid identifier");
            static const std::set<std::string> reserved = {"sin", "cos", "tan", "sqrt", "exp", "ln", "neg", "pi"};
            if (reserved.count(c)) v.error("chart.coords: '" + c + "' is a reserved name");
            if (!seen.insert(c).second) v.error("chart.coords: duplicate coordinate '" + c + "'");
        }
        spec.chart = chart;

        std::map<std::string, std::string> owner;
        for (Role r : {Role::holomorphic, Role::totally_real, Role::slant}) {
            const std::string key = role_name(r);
            const Entry* f = v.get("chart", key);
            if (!f) continue;
            std::vector<std::string> names;
            if (!as_string_list(f->value, names)) {
                v.error("chart." + key + ": expected a list of coordinate names");
                continue;
            }
            std::vector<int>& target = r == Role::holomorphic    ? spec.partition.holomorphic
                                       : r == Role::totally_real ? spec.partition.totally_real
                                                                 : spec.partition.slant;
            for (const auto& n : names) {
                const auto it = std::find(chart.begin(), chart.end(), n);
                if (it == chart.end()) {
                    v.error("chart." + key + ": '" + n + "' is not a chart coordinate");
                    continue;
                }
                auto [pos, fresh] = owner.emplace(n, key);
                if (!fresh) {
                    v.error("chart: coordinate '" + n + "' is assigned to both " + pos->second + " and " + key);
                    continue;
                }
                target.push_back(static_cast<int>(it - chart.begin()));
            }
        }
        for (const auto& c : chart)
            if (!owner.count(c)) v.error("chart: coordinate '" + c + "' is not assigned to any factor");
        if (spec.partition.holomorphic.size() % 2 != 0)
            v.error("chart.holomorphic: a holomorphic distribution has even dimension, found " +
                    std::to_string(spec.partition.holomorphic.size()));
        if (const Entry* o = v.get("chart", "ordering")) {
            m.has_ordering_tag = true;
            if (o->value.kind != Value::string || !parse_ordering(o->value.str, spec.partition.ordering))
                v.error("chart.ordering: expected one of \"T-perp-theta\", \"theta-perp-T\", \"perp-theta-T\"");
        }
        spec.domain.assign(chart.size(), Interval{});
        for (std::size_t i = 0; i < chart.size(); ++i) {
            const Entry* d = v.get("chart", "domain." + chart[i]);
            if (!d) {
                v.error("chart: missing domain." + chart[i]);
                continue;
            }
            const auto& it = d->value.items;
            if (d->value.kind != Value::list || it.size() != 2 || it[0].kind != Value::number ||
                it[1].kind != Value::number) {
                v.error("chart.domain." + chart[i] + ": expected [lo, hi]");
                continue;
            }
            if (!(it[0].num < it[1].num)) {
                v.error("chart.domain." + chart[i] + ": empty interval");
                continue;
            }
            spec.domain[i] = {it[0].num, it[1].num};
        }
        if (const Section* s = v.section("chart"))
            for (const auto& [key, entry] : *s)
                if (key.rfind("domain.", 0) == 0 &&
                    std::find(chart.begin(), chart.end(), key.substr(7)) == chart.end()) {
                    v.mark_used("chart", key);
                    v.error("chart." + key + ": '" + key.substr(7) + "' is not a chart coordinate");
                }
        if (N > 0 && static_cast<int>(chart.size()) > N)
            v.error("chart: " + std::to_string(chart.size()) + " coordinates exceed ambient dimension " +
                    std::to_string(N));
    }

    // [immersion]
    if (v.has_section("immersion")) {
        const Section* s = v.section("immersion");
        int found = 0;
        for (const auto& [key, entry] : *s) {
            bool numbered = key.size() > 1 && key[0] == 'x';
            for (std::size_t i = 1; numbered && i < key.size(); ++i)
                numbered = std::isdigit(static_cast<unsigned char>(key[i])) != 0;
            if (!numbered) continue;
            const int idx = std::atoi(key.c_str() + 1);
            if (idx >= 1 && (N == 0 || idx <= N)) ++found;
        }
        if (N > 0 && found != N)
            v.error("immersion: expected " + std::to_string(N) + " coordinates, found " + std::to_string(found));
        spec.coords.assign(N, ExprNode{});
        for (int i = 1; i <= N; ++i) {
            const std::string key = "x" + std::to_string(i);
            const Entry* e = v.get("immersion", key);
            if (!e) {
                if (found != N) v.error("immersion: missing " + key);
                continue;
            }
            if (auto node = parse_expr_field(v, "immersion." + key, e->value, chart)) spec.coords[i - 1] = *node;
        }
    }

    // [warping]
    auto allowed = [&](int max_position) {
        std::vector<int> out;
        for (int pos = 0; pos <= max_position; ++pos)
            for (int idx : spec.partition.factor(pos)) out.push_back(idx);
        return out;
    };
    for (const char* which : {"f", "h"}) {
        const Entry* e = v.get("warping", which);
        if (!e) continue;
        auto node = parse_expr_field(v, std::string("warping.") + which, e->value, chart);
        if (!node) continue;
        const bool is_f = std::string(which) == "f";
        const std::vector<int> ok = allowed(is_f ? 0 : 1);
        for (int var : referenced_variables(*node))
            if (std::find(ok.begin(), ok.end(), var) == ok.end())
                v.error(std::string("warping.") + which + ": depends on '" + chart[var] + "', which is not a " +
                        (is_f ? "first-factor" : "first- or second-factor") + " coordinate");
        (is_f ? m.warping.f : m.warping.h) = std::move(node);
    }

    // [base_metrics]
    m.warping.base_diag.assign(chart.size(), std::nullopt);
    if (const Section* s = v.section("base_metrics")) {
        for (const auto& [key, entry] : *s) {
            v.mark_used("base_metrics", key);
            const auto it = std::find(chart.begin(), chart.end(), key);
            if (it == chart.end()) {
                v.error("base_metrics." + key + ": not a chart coordinate");
                continue;
            }
            const int idx = static_cast<int>(it - chart.begin());
            const int pos = spec.partition.position_of(idx);
            if (pos == 0) {
                v.error("base_metrics." + key + ": first-factor coordinates carry no warping");
                continue;
            }
            auto node = parse_expr_field(v, "base_metrics." + key, entry.value, chart);
            if (!node) continue;
            const auto& own = spec.partition.factor(pos < 0 ? 0 : pos);
            for (int var : referenced_variables(*node))
                if (std::find(own.begin(), own.end(), var) == own.end())
                    v.error("base_metrics." + key + ": depends on '" + chart[var] +
                            "' from another factor");
            m.warping.base_diag[idx] = std::move(node);
        }
    }

    // [tolerances]
    if (const Section* s = v.section("tolerances")) {
        for (const auto& [key, entry] : *s) {
            v.mark_used("tolerances", key);
            if (entry.value.kind != Value::number || !(entry.value.num >= 0)) {
                v.error("tolerances." + key + ": expected a non-negative number");
                continue;
            }
            if (key == "sin_floor") m.sin_floor = entry.value.num;
            else m.tolerances[key] = entry.value.num;
        }
    }

    v.report_unused();
    if (!errors.empty()) throw ManifestError(std::move(errors));
    return m;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError({"cannot open manifest '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), path);
}

}  // namespace seqwarp
