#include "weylcurv/serialize.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "json.hpp"

namespace weylcurv {

namespace {

using json = nlohmann::ordered_json;

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

const json& require_field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end()) throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

void require_version(const json& doc) {
    const json& v = require_field(doc, "format_version");
    if (!v.is_string() || v.get<std::string>() != kFormatVersion)
        throw ParseError("unsupported format_version (expected \"1\")");
}

int require_int(const json& v, const char* name) {
    if (!v.is_number_integer()) throw ParseError(std::string(name) + " must be an integer");
    return v.get<int>();
}

Rational require_rational(const json& v, const char* name) {
    if (!v.is_string())
        throw ParseError(std::string(name) + ": rational values must be strings");
    return Rational::from_string(v.get<std::string>());
}

// Converts a 1-based wire index into a 0-based memory index.
int require_index(const json& v, int n, const char* name) {
    int i = require_int(v, name);
    if (i < 1 || i > n)
        throw ParseError(std::string(name) + " index " + std::to_string(i) +
                         " out of range [1, " + std::to_string(n) + "]");
    return i - 1;
}

bool all_primitive(const json& arr) {
    for (const auto& e : arr)
        if (e.is_array() || e.is_object()) return false;
    return true;
}

// Two-space block layout, but arrays of primitives (index/value entries,
// signature pairs, matrix rows) stay on one line.
void render(const json& v, std::string& out, int depth) {
    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
        const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
        out += "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in + json(it.key()).dump() + ": ";
            render(it.value(), out, depth + 1);
        }
        out += "\n" + pad + "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        if (all_primitive(v)) {
            out += "[";
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += ", ";
                first = false;
                out += e.dump();
            }
            out += "]";
        } else {
            const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
            const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
            out += "[\n";
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                render(e, out, depth + 1);
            }
            out += "\n" + pad + "]";
        }
    } else {
        out += v.dump();
    }
}

std::string dump(const json& doc) {
    std::string s;
    render(doc, s, 0);
    s += "\n";
    return s;
}

json rational_str(const Rational& v) { return json(v.to_string()); }

CurvatureModel model_from_json(const json& doc) {
    require_version(doc);
    int n = require_int(require_field(doc, "dim"), "dim");
    if (n < 2 || n > kMaxDimension)
        throw DimensionError("dim must be in [2, " + std::to_string(kMaxDimension) + "]");

    const bool has_sig = doc.contains("signature");
    const bool has_h = doc.contains("h");
    if (has_sig == has_h)
        throw ParseError("model must carry exactly one of 'signature' or 'h'");

    InnerProduct h;
    if (has_sig) {
        const json& sig = doc["signature"];
        if (!sig.is_array() || sig.size() != 2)
            throw ParseError("signature must be an array [p, q]");
        int p = require_int(sig[0], "signature");
        int q = require_int(sig[1], "signature");
        if (p < 0 || q < 0 || p + q != n)
            throw ParseError("signature must satisfy p, q >= 0 and p + q = dim");
        h = InnerProduct::from_signature(p, q);
    } else {
        const json& hm = doc["h"];
        if (!hm.is_array() || static_cast<int>(hm.size()) != n)
            throw ParseError("h must be a dense dim x dim array");
        Tensor2 m(n);
        for (int i = 0; i < n; ++i) {
            const json& row = hm[i];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw ParseError("h must be a dense dim x dim array");
            for (int j = 0; j < n; ++j) m(i, j) = require_rational(row[j], "h");
        }
        h = InnerProduct::from_matrix(m);
    }

    Tensor4 a(n);
    if (doc.contains("A")) {
        const json& entries = doc["A"];
        if (!entries.is_array()) throw ParseError("A must be an array of [i,j,k,l,value]");
        std::set<std::tuple<int, int, int, int>> seen;
        for (const json& e : entries) {
            if (!e.is_array() || e.size() != 5)
                throw ParseError("A entries must be [i,j,k,l,value]");
            int i = require_index(e[0], n, "A");
            int j = require_index(e[1], n, "A");
            int k = require_index(e[2], n, "A");
            int l = require_index(e[3], n, "A");
            if (!seen.insert({i, j, k, l}).second)
                throw ParseError("duplicate A entry at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + "," + std::to_string(k + 1) + "," +
                                 std::to_string(l + 1) + ")");
            a(i, j, k, l) = require_rational(e[4], "A");
        }
    }
    return CurvatureModel(std::move(h), std::move(a));
}

json model_to_json(const CurvatureModel& model) {
    const int n = model.dim();
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = n;

    auto [p, q] = model.h().signature();
    bool canonical = true;
    for (int i = 0; i < n && canonical; ++i)
        for (int j = 0; j < n && canonical; ++j) {
            Rational want = (i == j) ? Rational(i < p ? 1 : -1) : Rational(0);
            if (model.h().matrix()(i, j) != want) canonical = false;
        }
    if (canonical) {
        doc["signature"] = json::array({p, q});
    } else {
        json rows = json::array();
        for (int i = 0; i < n; ++i) {
            json row = json::array();
            for (int j = 0; j < n; ++j) row.push_back(rational_str(model.h().matrix()(i, j)));
            rows.push_back(std::move(row));
        }
        doc["h"] = std::move(rows);
    }

    json entries = json::array();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Rational& v = model.tensor()(i, j, k, l);
                    if (v.sign() == 0) continue;
                    entries.push_back(
                        json::array({i + 1, j + 1, k + 1, l + 1, rational_str(v)}));
                }
    doc["A"] = std::move(entries);
    return doc;
}

}  // namespace

CurvatureModel parse_model(std::string_view text) { return model_from_json(parse_text(text)); }

std::string emit_model(const CurvatureModel& model) { return dump(model_to_json(model)); }

std::variant<WeylJet, AffineJet> parse_jet(std::string_view text) {
    json doc = parse_text(text);
    require_version(doc);
    int n = require_int(require_field(doc, "dim"), "dim");
    if (!doc.contains("model")) throw ParseError("jet document must embed a 'model'");
    CurvatureModel model = model_from_json(doc["model"]);
    if (model.dim() != n) throw ParseError("jet dim does not match embedded model dim");

    if (doc.contains("connection")) {
        const json& entries = doc["connection"];
        if (!entries.is_array())
            throw ParseError("connection must be an array of [a,j,k,l,value]");
        ConnectionJet conn{model.h(), Tensor3(n), Tensor4(n)};
        std::set<std::tuple<int, int, int, int>> seen;
        for (const json& e : entries) {
            if (!e.is_array() || e.size() != 5)
                throw ParseError("connection entries must be [a,j,k,l,value]");
            int a = require_index(e[0], n, "connection");
            int j = require_index(e[1], n, "connection");
            int k = require_index(e[2], n, "connection");
            int l = require_index(e[3], n, "connection");
            if (!seen.insert({a, j, k, l}).second)
                throw ParseError("duplicate connection entry");
            conn.linear(a, j, k, l) = require_rational(e[4], "connection");
        }
        return AffineJet{std::move(conn), std::move(model)};
    }

    MetricJet metric = flat_metric_jet(model.h());
    if (doc.contains("metric_quad")) {
        const json& entries = doc["metric_quad"];
        if (!entries.is_array())
            throw ParseError("metric_quad must be an array of [k,l,i,j,value]");
        std::set<std::tuple<int, int, int, int>> seen;
        const Rational half(1, 2);
        for (const json& e : entries) {
            if (!e.is_array() || e.size() != 5)
                throw ParseError("metric_quad entries must be [k,l,i,j,value]");
            int k = require_index(e[0], n, "metric_quad");
            int l = require_index(e[1], n, "metric_quad");
            int i = require_index(e[2], n, "metric_quad");
            int j = require_index(e[3], n, "metric_quad");
            if (k > l || i > j)
                throw ParseError("metric_quad entries must have k <= l and i <= j");
            if (!seen.insert({k, l, i, j}).second)
                throw ParseError("duplicate metric_quad entry");
            Rational v = require_rational(e[4], "metric_quad");
            Rational q = (k == l) ? v : half * v;
            metric.quad(k, l, i, j) = q;
            metric.quad(l, k, i, j) = q;
            metric.quad(k, l, j, i) = q;
            metric.quad(l, k, j, i) = q;
        }
    }
    if (doc.contains("metric_lin")) {
        const json& entries = doc["metric_lin"];
        if (!entries.is_array())
            throw ParseError("metric_lin must be an array of [a,i,j,value]");
        std::set<std::tuple<int, int, int>> seen;
        for (const json& e : entries) {
            if (!e.is_array() || e.size() != 4)
                throw ParseError("metric_lin entries must be [a,i,j,value]");
            int a = require_index(e[0], n, "metric_lin");
            int i = require_index(e[1], n, "metric_lin");
            int j = require_index(e[2], n, "metric_lin");
            if (i > j) throw ParseError("metric_lin entries must have i <= j");
            if (!seen.insert({a, i, j}).second) throw ParseError("duplicate metric_lin entry");
            Rational v = require_rational(e[3], "metric_lin");
            metric.linear(a, i, j) = v;
            metric.linear(a, j, i) = v;
        }
    }

    OneFormJet phi = zero_one_form_jet<Rational>(n);
    if (doc.contains("phi")) {
        const json& entries = doc["phi"];
        if (!entries.is_array()) throw ParseError("phi must be an array of [l,i,value]");
        std::set<std::pair<int, int>> seen;
        for (const json& e : entries) {
            if (!e.is_array() || e.size() != 3)
                throw ParseError("phi entries must be [l,i,value]");
            int l = require_index(e[0], n, "phi");
            int i = require_index(e[1], n, "phi");
            if (!seen.insert({l, i}).second) throw ParseError("duplicate phi entry");
            phi.coeff(l, i) = require_rational(e[2], "phi");
        }
    }
    if (doc.contains("phi_const")) {
        const json& entries = doc["phi_const"];
        if (!entries.is_array()) throw ParseError("phi_const must be an array of [i,value]");
        std::set<int> seen;
        for (const json& e : entries) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("phi_const entries must be [i,value]");
            int i = require_index(e[0], n, "phi_const");
            if (!seen.insert(i).second) throw ParseError("duplicate phi_const entry");
            phi.constant[i] = require_rational(e[1], "phi_const");
        }
    }

    ConnectionJet conn = levi_civita_christoffels(metric) + weyl_alpha(phi, metric);
    return WeylJet{std::move(metric), std::move(phi), std::move(conn), std::move(model)};
}

std::string emit_jet(const WeylJet& jet) {
    const int n = jet.dim();
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = n;
    doc["model"] = model_to_json(jet.model);

    const Rational two(2, 1);
    json quad = json::array();
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const Rational& q = jet.metric.quad(k, l, i, j);
                    if (q.sign() == 0) continue;
                    Rational v = (k == l) ? q : two * q;
                    quad.push_back(
                        json::array({k + 1, l + 1, i + 1, j + 1, rational_str(v)}));
                }
    doc["metric_quad"] = std::move(quad);

    json lin = json::array();
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const Rational& v = jet.metric.linear(a, i, j);
                if (v.sign() == 0) continue;
                lin.push_back(json::array({a + 1, i + 1, j + 1, rational_str(v)}));
            }
    if (!lin.empty()) doc["metric_lin"] = std::move(lin);

    json phi = json::array();
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i) {
            const Rational& v = jet.phi.coeff(l, i);
            if (v.sign() == 0) continue;
            phi.push_back(json::array({l + 1, i + 1, rational_str(v)}));
        }
    doc["phi"] = std::move(phi);

    json phi0 = json::array();
    for (int i = 0; i < n; ++i) {
        const Rational& v = jet.phi.constant[i];
        if (v.sign() == 0) continue;
        phi0.push_back(json::array({i + 1, rational_str(v)}));
    }
    if (!phi0.empty()) doc["phi_const"] = std::move(phi0);

    return dump(doc);
}

std::string emit_jet(const AffineJet& jet) {
    const int n = jet.dim();
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = n;
    doc["model"] = model_to_json(jet.model);

    json conn = json::array();
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Rational& v = jet.conn.linear(a, j, k, l);
                    if (v.sign() == 0) continue;
                    conn.push_back(
                        json::array({a + 1, j + 1, k + 1, l + 1, rational_str(v)}));
                }
    doc["connection"] = std::move(conn);
    return dump(doc);
}

GaugeFunction parse_gauge(std::string_view text) {
    json doc = parse_text(text);
    require_version(doc);
    int n = require_int(require_field(doc, "dim"), "dim");
    if (n < 2 || n > kMaxDimension)
        throw DimensionError("dim must be in [2, " + std::to_string(kMaxDimension) + "]");

    GaugeFunction f{std::vector<Rational>(static_cast<std::size_t>(n)), Tensor2(n)};
    if (doc.contains("linear")) {
        const json& lin = doc["linear"];
        if (!lin.is_array() || static_cast<int>(lin.size()) != n)
            throw ParseError("gauge 'linear' must be a dense array of dim entries");
        for (int i = 0; i < n; ++i) f.linear[i] = require_rational(lin[i], "linear");
    }
    if (doc.contains("quad")) {
        const json& quad = doc["quad"];
        if (!quad.is_array() || static_cast<int>(quad.size()) != n)
            throw ParseError("gauge 'quad' must be a dense dim x dim array");
        for (int i = 0; i < n; ++i) {
            const json& row = quad[i];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw ParseError("gauge 'quad' must be a dense dim x dim array");
            for (int j = 0; j < n; ++j) f.quad(i, j) = require_rational(row[j], "quad");
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (f.quad(i, j) != f.quad(j, i))
                    throw ShapeError("gauge 'quad' must be symmetric");
    }
    return f;
}

std::string emit_symmetry_report(const SymmetryReport& report, int dim) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["kind"] = "symmetry";
    doc["dim"] = dim;
    json res;
    res["eq_1b"] = rational_str(report.eq_1b);
    res["eq_1c"] = rational_str(report.eq_1c);
    res["eq_1d"] = rational_str(report.eq_1d);
    res["eq_1e"] = rational_str(report.eq_1e);
    res["eq_1f"] = rational_str(report.eq_1f);
    doc["residuals"] = std::move(res);
    doc["in_R"] = report.in_R;
    doc["in_W"] = report.in_W;
    doc["in_A"] = report.in_A;
    if (report.in_A)
        doc["finest_class"] = "A";
    else if (report.in_W)
        doc["finest_class"] = "W";
    else if (report.in_R)
        doc["finest_class"] = "R";
    else
        doc["finest_class"] = nullptr;
    const char* v = report.violated();
    doc["violated"] = v ? json(v) : json(nullptr);
    doc["success"] = report.in_R;
    return dump(doc);
}

std::string emit_realization_report(const RealizationReport& report, int dim) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["kind"] = "realization";
    doc["dim"] = dim;
    doc["max_abs_difference"] = rational_str(report.max_abs_difference);
    if (report.compatibility_max)
        doc["compatibility_max"] = rational_str(*report.compatibility_max);
    doc["torsion_max"] = rational_str(report.torsion_max);
    if (report.dphi_check) doc["dphi_check"] = rational_str(*report.dphi_check);
    doc["success"] = report.success;
    return dump(doc);
}

std::string emit_decomposition(const Tensor4& a1, const TwoForm& psi) {
    const int n = a1.dim();
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["kind"] = "decomposition";
    doc["dim"] = n;
    json a1_entries = json::array();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Rational& v = a1(i, j, k, l);
                    if (v.sign() == 0) continue;
                    a1_entries.push_back(
                        json::array({i + 1, j + 1, k + 1, l + 1, rational_str(v)}));
                }
    doc["A1"] = std::move(a1_entries);
    json psi_entries = json::array();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Rational& v = psi(i, j);
            if (v.sign() == 0) continue;
            psi_entries.push_back(json::array({i + 1, j + 1, rational_str(v)}));
        }
    doc["psi"] = std::move(psi_entries);
    return dump(doc);
}

}  // namespace weylcurv
